//! JSON scenarios: named bodies, functions and rules plus a task list.
//!
//! Every name is resolved and every descriptor parsed before the first
//! task runs. Tasks then execute in order; a failing task is recorded and
//! the rest still run.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};
use crate::ops::{execute, headline, prepare, write_output, Job, Op, Output, TaskSpec};

/// The scenario that reproduces the acceptance table.
pub const REFERENCE_SUITE: &str = include_str!("../scenarios/reference-suite.json");

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub bodies: BTreeMap<String, String>,
    #[serde(default)]
    pub functions: BTreeMap<String, String>,
    #[serde(default)]
    pub rules: BTreeMap<String, String>,
    pub tasks: Vec<Task>,
}

/// A task refers to bodies, functions and rules by name.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Task {
    pub op: Op,
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub bodies: Vec<String>,
    #[serde(default)]
    pub phi: Option<String>,
    #[serde(default)]
    pub phi2: Option<String>,
    #[serde(default)]
    pub rule: Option<String>,
    #[serde(default)]
    pub probe: Option<String>,
    #[serde(default)]
    pub check: Option<String>,
    /// M-set descriptor (not a name).
    #[serde(default)]
    pub mset: Option<String>,
    #[serde(default)]
    pub direction: Option<Vec<f64>>,
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub t: Option<f64>,
    #[serde(default)]
    pub family: Option<String>,
    #[serde(default)]
    pub dimension: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub count: Option<usize>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub resolutions: Option<Vec<usize>>,
    #[serde(default)]
    pub eps: Option<Vec<f64>>,
    pub out: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskRecord {
    pub label: String,
    pub op: Op,
    pub out: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub headline: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub tasks: Vec<TaskRecord>,
    pub failed: usize,
    /// Total inequality violations over all sweeps and checks.
    pub violations: usize,
}

impl RunSummary {
    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed > 0)
    }
}

fn lookup(map: &BTreeMap<String, String>, name: &str, kind: &str, task: usize) -> CliResult<String> {
    map.get(name).cloned().ok_or_else(|| CliError::Invalid(format!("task {task}: undeclared {kind} '{name}'")))
}

impl Scenario {
    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("scenario: {e}")))
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Resolves names to descriptors.
    pub fn spec(&self, index: usize) -> CliResult<TaskSpec> {
        let t = &self.tasks[index];
        let opt = |name: &Option<String>, map: &BTreeMap<String, String>, kind: &str| {
            name.as_ref().map(|n| lookup(map, n, kind, index)).transpose()
        };
        let mut spec = TaskSpec::new(t.op);
        spec.bodies = t.bodies.iter().map(|b| lookup(&self.bodies, b, "body", index)).collect::<CliResult<_>>()?;
        spec.phi = opt(&t.phi, &self.functions, "function")?;
        spec.phi2 = opt(&t.phi2, &self.functions, "function")?;
        spec.rule = opt(&t.rule, &self.rules, "rule")?;
        spec.probe = opt(&t.probe, &self.rules, "rule")?;
        spec.check = t.check.clone();
        spec.mset = t.mset.clone();
        spec.direction = t.direction.clone();
        spec.eta = t.eta;
        spec.p = t.p;
        spec.t = t.t;
        spec.family = t.family.clone();
        spec.dimension = t.dimension;
        spec.seed = t.seed;
        spec.count = t.count;
        spec.samples = t.samples;
        spec.resolutions = t.resolutions.clone();
        spec.eps = t.eps.clone();
        Ok(spec)
    }

    /// Parses every task; the first failure aborts with an input error.
    pub fn validate(&self) -> CliResult<Vec<Job>> {
        if self.tasks.is_empty() {
            return Err(CliError::Invalid("scenario has no tasks".to_string()));
        }
        (0..self.tasks.len())
            .map(|i| {
                prepare(&self.spec(i)?).map_err(|e| match e {
                    CliError::Invalid(m) => CliError::Invalid(format!("task {i} ({}): {m}", self.label(i))),
                    other => other,
                })
            })
            .collect()
    }

    fn label(&self, i: usize) -> String {
        let t = &self.tasks[i];
        t.label.clone().unwrap_or_else(|| t.out.clone())
    }

    /// Validates, then runs every task, writing artifacts under `out_dir`
    /// and `run-summary.json` last.
    pub fn run(&self, out_dir: &Path) -> CliResult<RunSummary> {
        let jobs = self.validate()?;
        fs::create_dir_all(out_dir)?;
        let mut records = Vec::with_capacity(jobs.len());
        let mut violations = 0;
        for (i, job) in jobs.iter().enumerate() {
            let task = &self.tasks[i];
            let label = self.label(i);
            let path: PathBuf = out_dir.join(&task.out);
            let result = execute(job).and_then(|out| write_output(&path, &out).map(|_| out));
            let record = match result {
                Ok(out) => {
                    violations += match &out {
                        Output::Sweep { summary, .. } => summary.violations,
                        Output::Json(v) => usize::from(v.get("satisfied") == Some(&Value::Bool(false))),
                    };
                    log::info!("{label}: ok -> {}", path.display());
                    TaskRecord {
                        label,
                        op: task.op,
                        out: task.out.clone(),
                        ok: true,
                        error: None,
                        headline: headline(&out),
                    }
                }
                Err(e) => {
                    log::error!("{label}: {e}");
                    TaskRecord {
                        label,
                        op: task.op,
                        out: task.out.clone(),
                        ok: false,
                        error: Some(e.to_string()),
                        headline: Value::Null,
                    }
                }
            };
            records.push(record);
        }
        let failed = records.iter().filter(|r| !r.ok).count();
        let summary = RunSummary { tasks: records, failed, violations };
        fs::write(out_dir.join("run-summary.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
        Ok(summary)
    }
}
