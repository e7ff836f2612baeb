use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;
use crate::status::{exit_code, Check, Status, TaskError};

#[derive(Clone, Debug, Serialize)]
pub struct TaskReport {
    pub index: usize,
    pub task: &'static str,
    pub label: String,
    pub status: Status,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<TaskError>,
    pub result: Value,
}

impl TaskReport {
    pub fn new(
        index: usize,
        task: &'static str,
        label: String,
        checks: Vec<Check>,
        error: Option<TaskError>,
        result: Value,
    ) -> Self {
        let status = Status::of(&checks, error.as_ref());
        TaskReport { index, task, label, status, checks, error, result }
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(&self.checks, self.error.as_ref())
    }
}

/// Counters only; wall-clock time goes to stderr so that reports stay
/// byte-identical between runs.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Stats {
    pub tasks: usize,
    pub checks: usize,
    pub checks_passed: usize,
    pub tasks_passed: usize,
    pub tasks_failed: usize,
    pub tasks_errored: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub tasks: Vec<TaskReport>,
    pub stats: Stats,
    pub verdict: Status,
    pub exit_code: i32,
}

impl Report {
    pub fn new(config: RunConfig, tasks: Vec<TaskReport>) -> Self {
        let mut stats = Stats { tasks: tasks.len(), ..Stats::default() };
        for t in &tasks {
            stats.checks += t.checks.len();
            stats.checks_passed += t.checks.iter().filter(|c| c.pass).count();
            match t.status {
                Status::Pass => stats.tasks_passed += 1,
                Status::Fail => stats.tasks_failed += 1,
                Status::Error => stats.tasks_errored += 1,
            }
        }
        let codes: Vec<i32> = tasks.iter().map(|t| t.exit_code()).collect();
        let exit_code = if codes.contains(&2) {
            2
        } else if codes.contains(&1) {
            1
        } else {
            0
        };
        let verdict = match exit_code {
            0 => Status::Pass,
            1 if stats.tasks_errored == 0 => Status::Fail,
            _ => Status::Error,
        };
        Report { tool: "ordzeta", version: env!("CARGO_PKG_VERSION"), config, tasks, stats, verdict, exit_code }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for t in &self.tasks {
            let _ = writeln!(out, "[{}] {:<10} {:<6} {}", t.index, t.task, status_word(t.status), t.label);
            for c in &t.checks {
                let mark = if c.pass { "ok  " } else { "FAIL" };
                match &c.detail {
                    Some(d) => {
                        let _ = writeln!(out, "      {mark} {}  ({d})", c.name);
                    }
                    None => {
                        let _ = writeln!(out, "      {mark} {}", c.name);
                    }
                }
            }
            if let Some(e) = &t.error {
                let _ = writeln!(out, "      {:?} error {}: {}", e.kind, e.error, e.message);
            }
        }
        let s = &self.stats;
        let _ = writeln!(
            out,
            "{} tasks: {} passed, {} failed, {} errors; {}/{} checks; exit {}",
            s.tasks, s.tasks_passed, s.tasks_failed, s.tasks_errored, s.checks_passed, s.checks, self.exit_code
        );
        out
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Error => "ERROR",
    }
}
