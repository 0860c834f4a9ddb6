//! Multi-user proof service: accounts, a task catalog, proof sessions,
//! stored solutions with replay, localized messages, and the HTTP API and
//! command line on top.

pub mod auth;
pub mod catalog;
pub mod cli;
pub mod http;
pub mod service;
pub mod store;
pub mod view;

pub use catalog::{Locale, Message};
pub use service::{Service, ServiceError};
pub use store::{RedbStore, Repository, UserAccount, UserRole};
