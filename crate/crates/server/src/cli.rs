//! The `easyprove` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use easyprove::demos::demo_tasks;
use easyprove::{ProofScript, ProofState, TaskDef};

use crate::catalog::{render, text_or, Locale};
use crate::service::Service;
use crate::store::{RedbStore, UserRole};
use crate::view::{kernel_message, ProofView};

pub const DB_FILE: &str = "easyprove.redb";

#[derive(Debug, Parser)]
#[command(name = "easyprove", version, about = "Check, replay and serve natural-deduction proofs")]
pub struct Cli {
    /// Language of reports.
    #[arg(long, global = true, default_value = "en", value_parser = parse_locale)]
    pub lang: Locale,
    /// Storage directory.
    #[arg(long, global = true, default_value = "easyprove-data")]
    pub data: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_locale(s: &str) -> Result<Locale, String> {
    s.parse()
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RoleArg {
    Student,
    Teacher,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Replay a proof script against a task and report the result.
    Check { script: PathBuf, task: PathBuf },
    /// Like `check`, printing the proof; with --verbose after every step.
    Replay {
        script: PathBuf,
        task: PathBuf,
        #[arg(long)]
        verbose: bool,
    },
    /// Add tasks from a JSON file holding one task or an array of tasks.
    TasksImport { path: PathBuf },
    /// Write all stored tasks to a JSON file.
    TasksExport { path: PathBuf },
    /// Store the bundled demo tasks.
    SeedDemos,
    /// Create an account.
    UserAdd {
        login: String,
        #[arg(long)]
        password: String,
        #[arg(long, value_enum, default_value = "student")]
        role: RoleArg,
        #[arg(long, default_value = "en", value_parser = parse_locale)]
        locale: Locale,
    },
    /// Run the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

/// Exit status of a run.
pub const OK: i32 = 0;
pub const FAILED: i32 = 1;
pub const USAGE: i32 = 2;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            USAGE
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn open_service(data: &Path) -> Result<Service, String> {
    std::fs::create_dir_all(data).map_err(|e| format!("{}: {e}", data.display()))?;
    let store = RedbStore::open(&data.join(DB_FILE)).map_err(|e| e.to_string())?;
    Ok(Service::new(Arc::new(store)))
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, String> {
    let io = |e: std::io::Error| e.to_string();
    match &cli.command {
        Command::Check { script, task } => check(cli.lang, script, task, Report::Steps, out),
        Command::Replay { script, task, verbose } => {
            let mode = if *verbose { Report::Views } else { Report::Final };
            check(cli.lang, script, task, mode, out)
        }
        Command::TasksImport { path } => {
            let value: serde_json::Value = read_json(path)?;
            let tasks: Vec<TaskDef> = match value {
                serde_json::Value::Array(_) => serde_json::from_value(value),
                other => serde_json::from_value(other).map(|t| vec![t]),
            }
            .map_err(|e| format!("{}: {e}", path.display()))?;
            let svc = open_service(&cli.data)?;
            let stored = svc.import_tasks(tasks).map_err(|e| e.message(cli.lang).text)?;
            for t in &stored {
                writeln!(out, "{}", t.id).map_err(io)?;
            }
            Ok(OK)
        }
        Command::TasksExport { path } => {
            let svc = open_service(&cli.data)?;
            let tasks = svc.store().list_tasks().map_err(|e| e.to_string())?;
            let text = serde_json::to_string_pretty(&tasks).expect("tasks serialize");
            std::fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
            writeln!(out, "{}", tasks.len()).map_err(io)?;
            Ok(OK)
        }
        Command::SeedDemos => {
            let svc = open_service(&cli.data)?;
            for t in svc.import_tasks(demo_tasks()).map_err(|e| e.message(cli.lang).text)? {
                writeln!(out, "{}", t.id).map_err(io)?;
            }
            Ok(OK)
        }
        Command::UserAdd { login, password, role, locale } => {
            let svc = open_service(&cli.data)?;
            let role = match role {
                RoleArg::Student => UserRole::Student,
                RoleArg::Teacher => UserRole::Teacher,
            };
            let u = svc.register(login, password, role, *locale).map_err(|e| e.message(cli.lang).text)?;
            writeln!(out, "{}", u.login).map_err(io)?;
            Ok(OK)
        }
        Command::Serve { port } => {
            let svc = Arc::new(open_service(&cli.data)?);
            let rt = tokio::runtime::Runtime::new().map_err(io)?;
            writeln!(out, "listening on port {port}").map_err(io)?;
            rt.block_on(crate::http::serve(svc, *port)).map_err(io)?;
            Ok(OK)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Report {
    /// One line per step.
    Steps,
    /// The final proof.
    Final,
    /// The proof after every step.
    Views,
}

fn check(locale: Locale, script_path: &Path, task_path: &Path, mode: Report, out: &mut dyn Write) -> Result<i32, String> {
    let mut task: TaskDef = read_json(task_path)?;
    task.validate().map_err(|e| format!("{}: {e}", task_path.display()))?;
    let text = std::fs::read_to_string(script_path).map_err(|e| format!("{}: {e}", script_path.display()))?;
    let script = ProofScript::from_json(&text).map_err(|e| format!("{}: {e}", script_path.display()))?;
    task.check_script(&script).map_err(|e| e.to_string())?;
    let mut state = task.start().map_err(|e| e.to_string())?;
    let report = check_report(locale, &mut state, &script, mode);
    out.write_all(report.text.as_bytes()).map_err(|e| e.to_string())?;
    Ok(report.code)
}

pub struct CheckReport {
    pub text: String,
    pub code: i32,
}

fn check_report(locale: Locale, state: &mut ProofState, script: &ProofScript, mode: Report) -> CheckReport {
    let mut text = String::new();
    if mode == Report::Views {
        text.push_str(&ProofView::of(state).to_text(locale));
    }
    for (i, r) in script.steps.iter().enumerate() {
        let k = (i + 1).to_string();
        let label = text_or(locale, &format!("step.{}", r.kind), &r.kind);
        if let Err(e) = state.apply_record(r) {
            let reason = kernel_message(locale, &e).text;
            text += &render(locale, "check.step-failed", &[k.clone(), label, reason.clone()]).text;
            text += "\n";
            text += &render(locale, "check.invalid", &[k, reason]).text;
            text += "\n";
            return CheckReport { text, code: FAILED };
        }
        match mode {
            Report::Steps => {
                text += &render(locale, "check.step-ok", &[k, label]).text;
                text += "\n";
            }
            Report::Views => {
                text += &format!("-- {k}. {label}\n");
                text += &ProofView::of(state).to_text(locale);
            }
            Report::Final => {}
        }
    }
    if mode == Report::Final {
        text += &ProofView::of(state).to_text(locale);
    }
    if state.is_complete() {
        text += &render(locale, "check.proved", &[]).text;
        text += "\n";
        CheckReport { text, code: OK }
    } else {
        let open: Vec<String> = state.open_goals().iter().map(|g| g.to_string()).collect();
        text += &render(locale, "check.open-goals", &[open.join(", ")]).text;
        text += "\n";
        text += &render(locale, "check.incomplete", &[]).text;
        text += "\n";
        CheckReport { text, code: FAILED }
    }
}
