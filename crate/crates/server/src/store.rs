//! Persistence behind a repository interface, backed by an embedded redb
//! database (a file, or memory for tests and demos).

use std::fmt::Display;
use std::path::Path;

use easyprove::TaskDef;
use redb::{Database, ReadableTable, TableDefinition};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UserRole {
    Student,
    Teacher,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UserAccount {
    pub id: String,
    pub login: String,
    pub role: UserRole,
    pub password_hash: String,
    pub locale: crate::catalog::Locale,
}

/// The persisted part of a proof session: its live state is the replay of
/// `script`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionRecord {
    pub id: String,
    pub owner: String,
    pub task: String,
    pub script: easyprove::ProofScript,
    pub modified: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Solution {
    pub id: String,
    pub owner: String,
    pub task: String,
    pub saved_at: i64,
    pub complete: bool,
    /// The proof script document, kept verbatim.
    pub script: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StoreError {
    #[error("{0} already exists")]
    Conflict(String),
    #[error("stored record {0} is unreadable")]
    Corrupt(String),
    #[error("storage backend: {0}")]
    Backend(String),
}

fn backend(e: impl Display) -> StoreError {
    StoreError::Backend(e.to_string())
}

pub trait Repository: Send + Sync {
    fn insert_user(&self, user: &UserAccount) -> Result<(), StoreError>;
    fn get_user(&self, login: &str) -> Result<Option<UserAccount>, StoreError>;
    fn list_users(&self) -> Result<Vec<UserAccount>, StoreError>;

    fn insert_task(&self, task: &TaskDef) -> Result<(), StoreError>;
    /// Inserts or replaces.
    fn put_task(&self, task: &TaskDef) -> Result<(), StoreError>;
    fn get_task(&self, id: &str) -> Result<Option<TaskDef>, StoreError>;
    fn list_tasks(&self) -> Result<Vec<TaskDef>, StoreError>;

    fn put_session(&self, session: &SessionRecord) -> Result<(), StoreError>;
    fn get_session(&self, id: &str) -> Result<Option<SessionRecord>, StoreError>;

    fn insert_solution(&self, solution: &Solution) -> Result<(), StoreError>;
    fn get_solution(&self, id: &str) -> Result<Option<Solution>, StoreError>;
}

type Table = TableDefinition<'static, &'static str, &'static str>;

const USERS: Table = TableDefinition::new("users");
const TASKS: Table = TableDefinition::new("tasks");
const SESSIONS: Table = TableDefinition::new("sessions");
const SOLUTIONS: Table = TableDefinition::new("solutions");

pub struct RedbStore {
    db: Database,
}

impl RedbStore {
    /// Opens or creates the database file `path`.
    pub fn open(path: &Path) -> Result<Self, StoreError> {
        Self::init(Database::create(path).map_err(backend)?)
    }

    pub fn in_memory() -> Result<Self, StoreError> {
        let db = Database::builder().create_with_backend(redb::backends::InMemoryBackend::new()).map_err(backend)?;
        Self::init(db)
    }

    fn init(db: Database) -> Result<Self, StoreError> {
        let txn = db.begin_write().map_err(backend)?;
        for t in [USERS, TASKS, SESSIONS, SOLUTIONS] {
            txn.open_table(t).map_err(backend)?;
        }
        txn.commit().map_err(backend)?;
        Ok(RedbStore { db })
    }

    fn write(&self, table: Table, key: &str, value: &str, unique: bool) -> Result<(), StoreError> {
        let txn = self.db.begin_write().map_err(backend)?;
        {
            let mut t = txn.open_table(table).map_err(backend)?;
            if unique && t.get(key).map_err(backend)?.is_some() {
                return Err(StoreError::Conflict(key.to_string()));
            }
            t.insert(key, value).map_err(backend)?;
        }
        txn.commit().map_err(backend)
    }

    fn put<T: Serialize>(&self, table: Table, key: &str, value: &T, unique: bool) -> Result<(), StoreError> {
        let text = serde_json::to_string(value).map_err(backend)?;
        self.write(table, key, &text, unique)
    }

    fn get<T: DeserializeOwned>(&self, table: Table, key: &str) -> Result<Option<T>, StoreError> {
        let txn = self.db.begin_read().map_err(backend)?;
        let t = txn.open_table(table).map_err(backend)?;
        let Some(v) = t.get(key).map_err(backend)? else { return Ok(None) };
        serde_json::from_str(v.value()).map(Some).map_err(|_| StoreError::Corrupt(key.to_string()))
    }

    fn all<T: DeserializeOwned>(&self, table: Table) -> Result<Vec<T>, StoreError> {
        let txn = self.db.begin_read().map_err(backend)?;
        let t = txn.open_table(table).map_err(backend)?;
        let mut out = Vec::new();
        for row in t.iter().map_err(backend)? {
            let (k, v) = row.map_err(backend)?;
            out.push(serde_json::from_str(v.value()).map_err(|_| StoreError::Corrupt(k.value().to_string()))?);
        }
        Ok(out)
    }
}

impl Repository for RedbStore {
    fn insert_user(&self, user: &UserAccount) -> Result<(), StoreError> {
        self.put(USERS, &user.login, user, true)
    }

    fn get_user(&self, login: &str) -> Result<Option<UserAccount>, StoreError> {
        self.get(USERS, login)
    }

    fn list_users(&self) -> Result<Vec<UserAccount>, StoreError> {
        self.all(USERS)
    }

    fn insert_task(&self, task: &TaskDef) -> Result<(), StoreError> {
        self.put(TASKS, &task.id, task, true)
    }

    fn put_task(&self, task: &TaskDef) -> Result<(), StoreError> {
        self.put(TASKS, &task.id, task, false)
    }

    fn get_task(&self, id: &str) -> Result<Option<TaskDef>, StoreError> {
        self.get(TASKS, id)
    }

    fn list_tasks(&self) -> Result<Vec<TaskDef>, StoreError> {
        let mut tasks: Vec<TaskDef> = self.all(TASKS)?;
        tasks.sort_by(|a, b| (a.created_at, &a.id).cmp(&(b.created_at, &b.id)));
        Ok(tasks)
    }

    fn put_session(&self, session: &SessionRecord) -> Result<(), StoreError> {
        self.put(SESSIONS, &session.id, session, false)
    }

    fn get_session(&self, id: &str) -> Result<Option<SessionRecord>, StoreError> {
        self.get(SESSIONS, id)
    }

    fn insert_solution(&self, solution: &Solution) -> Result<(), StoreError> {
        self.put(SOLUTIONS, &solution.id, solution, true)
    }

    fn get_solution(&self, id: &str) -> Result<Option<Solution>, StoreError> {
        self.get(SOLUTIONS, id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use easyprove::demos::{barber_task, union_of_powerset_task};

    #[test]
    fn tasks_round_trip_in_order() {
        let s = RedbStore::in_memory().unwrap();
        s.insert_task(&union_of_powerset_task()).unwrap();
        s.insert_task(&barber_task()).unwrap();
        assert_eq!(s.insert_task(&barber_task()), Err(StoreError::Conflict("barber".into())));
        let ids: Vec<_> = s.list_tasks().unwrap().into_iter().map(|t| t.id).collect();
        assert_eq!(ids, ["barber", "union-of-powerset"]);
        assert_eq!(s.get_task("barber").unwrap(), Some(barber_task()));
        assert_eq!(s.get_task("nope").unwrap(), None);
    }

    #[test]
    fn file_store_persists() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("db.redb");
        {
            let s = RedbStore::open(&path).unwrap();
            s.put_task(&barber_task()).unwrap();
        }
        let s = RedbStore::open(&path).unwrap();
        assert_eq!(s.list_tasks().unwrap().len(), 1);
    }
}
