//! Per-trial execution.
//!
//! The subprocess protocol (`veritas_trial_v1`): for each trial the harness
//! writes an input JSON document to a fresh temporary directory, runs the
//! configured command with `{input}`, `{output}`, `{artifacts}` and `{trial}`
//! substituted, and reads the output JSON back. The same paths are exported
//! as `VERITAS_INPUT`, `VERITAS_OUTPUT` and `VERITAS_ARTIFACTS`.
//!
//! Input document fields, in order: `schema`, `trial_index`, `coords`,
//! `bindings_X`, `bindings_C`, `derived_seed`, `folds` (`index`, `count`,
//! `split_seed`; absent when cross-validation is off), `data` (`items`,
//! `order`, `train`, `test`; present only when the design lists an item
//! count for the trial's dataset), `output_path`, `artifact_dir`.
//!
//! Output document: `{"schema": "veritas_trial_v1", "outcomes": {name: value, ..}}`
//! with exactly one value per dependent variable.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::partition::{fold_split, partition_folds, shuffle_indices};
use super::{EnvironmentInfo, RunRecord, RunStatus};
use crate::error::{Error, Result};
use crate::model::seed::split_seed;
use crate::model::{ExperimentDesign, Role, Trial, TrialCoords, Value};

pub const TRIAL_SCHEMA: &str = "veritas_trial_v1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldSpec {
    pub index: u32,
    pub count: u32,
    pub split_seed: u64,
}

/// Harness-computed data order and split for datasets with a known size.
/// `order` is the trial's shuffle of all items; `train` keeps that order,
/// `test` is ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataSpec {
    pub items: u64,
    pub order: Vec<u64>,
    pub train: Vec<u64>,
    pub test: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialInput {
    pub schema: String,
    pub trial_index: u64,
    pub coords: TrialCoords,
    #[serde(rename = "bindings_X")]
    pub bindings_x: BTreeMap<String, Value>,
    #[serde(rename = "bindings_C")]
    pub bindings_c: BTreeMap<String, Value>,
    pub derived_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub folds: Option<FoldSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<DataSpec>,
    pub output_path: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub artifact_dir: Option<String>,
}

impl TrialInput {
    pub fn build(design: &ExperimentDesign, trial: &Trial) -> Result<Self> {
        let folds = (design.cv_folds > 0).then(|| FoldSpec {
            index: trial.coords.fold_index,
            count: design.cv_folds,
            split_seed: split_seed(design.master_seed, trial.coords.seed_index),
        });
        let items = design
            .designations
            .dataset
            .as_ref()
            .and_then(|f| trial.bindings_x.get(f))
            .and_then(Value::as_label)
            .and_then(|level| design.dataset_items.get(level))
            .copied();
        let data = match items {
            None => None,
            Some(n) => {
                let order: Vec<u64> =
                    shuffle_indices(n as usize, trial.derived_seed).into_iter().map(|i| i as u64).collect();
                let (train, test) = match &folds {
                    Some(f) => {
                        let assignment = partition_folds(n as usize, f.count as usize, f.split_seed)?;
                        let (_, test) = fold_split(&assignment, f.index as usize);
                        let train =
                            order.iter().copied().filter(|&i| assignment[i as usize] != f.index as usize).collect();
                        (train, test)
                    }
                    None => (order.clone(), Vec::new()),
                };
                Some(DataSpec { items: n, order, train, test })
            }
        };
        Ok(TrialInput {
            schema: TRIAL_SCHEMA.to_string(),
            trial_index: trial.index,
            coords: trial.coords,
            bindings_x: trial.bindings_x.clone(),
            bindings_c: trial.bindings_c.clone(),
            derived_seed: trial.derived_seed,
            folds,
            data,
            output_path: String::new(),
            artifact_dir: None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutput {
    pub schema: String,
    pub outcomes: BTreeMap<String, Value>,
}

/// What an executor observed, before domain validation.
#[derive(Debug, Clone, PartialEq)]
pub enum RawOutcome {
    Completed(BTreeMap<String, Value>),
    Failed(String),
    TimedOut(String),
    InvalidOutput(String),
}

/// Evaluates the experiment function for one trial.
pub trait TrialExecutor: Sync {
    /// Command string recorded in the environment descriptor.
    fn describe(&self) -> String;

    fn run(&self, design: &ExperimentDesign, trial: &Trial) -> RawOutcome;
}

#[derive(Debug, Clone)]
pub struct ExecutorConfig {
    pub command: Vec<String>,
    pub timeout: Duration,
    pub working_dir: PathBuf,
    pub env_overrides: BTreeMap<String, String>,
    pub parallelism: usize,
    /// Parent of the per-trial artifact directories (`trial-NNNNNN`), if any.
    pub artifact_root: Option<PathBuf>,
}

impl ExecutorConfig {
    pub fn new<I, S>(command: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        ExecutorConfig {
            command: command.into_iter().map(Into::into).collect(),
            timeout: Duration::from_secs(3600),
            working_dir: PathBuf::from("."),
            env_overrides: BTreeMap::new(),
            parallelism: 1,
            artifact_root: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.command.is_empty() {
            return Err(Error::InvalidArgument("executor command is empty".into()));
        }
        if self.timeout.is_zero() {
            return Err(Error::InvalidArgument("executor timeout must be positive".into()));
        }
        if self.parallelism < 1 {
            return Err(Error::InvalidArgument("parallelism must be at least 1".into()));
        }
        Ok(())
    }
}

/// Runs an external program per trial using the file protocol above.
#[derive(Debug, Clone)]
pub struct ProcessExecutor {
    config: ExecutorConfig,
}

impl ProcessExecutor {
    pub fn new(config: ExecutorConfig) -> Result<Self> {
        config.validate()?;
        Ok(ProcessExecutor { config })
    }

    pub fn config(&self) -> &ExecutorConfig {
        &self.config
    }

    fn program(&self) -> PathBuf {
        let program = Path::new(&self.config.command[0]);
        if program.is_relative() && program.components().count() > 1 {
            self.config.working_dir.join(program)
        } else {
            program.to_path_buf()
        }
    }

    fn run_in(&self, dir: &Path, design: &ExperimentDesign, trial: &Trial) -> RawOutcome {
        let input_path = dir.join("input.json");
        let output_path = dir.join("output.json");
        let stderr_path = dir.join("stderr.txt");
        let artifact_dir = self.config.artifact_root.as_ref().map(|root| root.join(format!("trial-{:06}", trial.index)));

        let mut input = match TrialInput::build(design, trial) {
            Ok(i) => i,
            Err(e) => return RawOutcome::Failed(format!("cannot build trial input: {e}")),
        };
        input.output_path = output_path.display().to_string();
        input.artifact_dir = artifact_dir.as_ref().map(|p| p.display().to_string());
        if let Some(dir) = &artifact_dir {
            if let Err(e) = fs::create_dir_all(dir) {
                return RawOutcome::Failed(format!("cannot create artifact dir {}: {e}", dir.display()));
            }
        }
        let written = serde_json::to_vec_pretty(&input)
            .map_err(|e| e.to_string())
            .and_then(|bytes| fs::write(&input_path, bytes).map_err(|e| e.to_string()));
        if let Err(e) = written {
            return RawOutcome::Failed(format!("cannot write trial input: {e}"));
        }

        let substitute = |arg: &str| {
            arg.replace("{input}", &input_path.display().to_string())
                .replace("{output}", &output_path.display().to_string())
                .replace("{artifacts}", &artifact_dir.as_ref().map(|p| p.display().to_string()).unwrap_or_default())
                .replace("{trial}", &trial.index.to_string())
        };
        let stderr = match File::create(&stderr_path) {
            Ok(f) => f,
            Err(e) => return RawOutcome::Failed(format!("cannot create stderr capture: {e}")),
        };
        let mut cmd = Command::new(self.program());
        cmd.args(self.config.command[1..].iter().map(|a| substitute(a)))
            .current_dir(&self.config.working_dir)
            .envs(&self.config.env_overrides)
            .env("VERITAS_INPUT", &input_path)
            .env("VERITAS_OUTPUT", &output_path)
            .stdin(Stdio::null())
            .stdout(Stdio::null())
            .stderr(stderr);
        if let Some(dir) = &artifact_dir {
            cmd.env("VERITAS_ARTIFACTS", dir);
        }

        let outcome = match wait_with_deadline(&mut cmd, self.config.timeout) {
            Err(e) => RawOutcome::Failed(format!("cannot start {}: {e}", self.config.command[0])),
            Ok(None) => RawOutcome::TimedOut(format!("exceeded {:?}", self.config.timeout)),
            Ok(Some(status)) if !status.success() => {
                let tail = stderr_tail(&stderr_path);
                RawOutcome::Failed(if tail.is_empty() { format!("{status}") } else { format!("{status}: {tail}") })
            }
            Ok(Some(_)) => read_output(&output_path),
        };
        if let Some(dir) = &artifact_dir {
            // Only keep artifact directories the executor populated.
            let _ = fs::remove_dir(dir);
        }
        outcome
    }
}

impl TrialExecutor for ProcessExecutor {
    fn describe(&self) -> String {
        self.config.command.join(" ")
    }

    fn run(&self, design: &ExperimentDesign, trial: &Trial) -> RawOutcome {
        match tempfile::Builder::new().prefix("veritas-trial-").tempdir() {
            Ok(dir) => self.run_in(dir.path(), design, trial),
            Err(e) => RawOutcome::Failed(format!("cannot create temp dir: {e}")),
        }
    }
}

/// `Ok(None)` when the deadline passed and the child was killed.
fn wait_with_deadline(cmd: &mut Command, timeout: Duration) -> std::io::Result<Option<std::process::ExitStatus>> {
    let mut child = cmd.spawn()?;
    let deadline = Instant::now() + timeout;
    let mut pause = Duration::from_millis(1);
    loop {
        if let Some(status) = child.try_wait()? {
            return Ok(Some(status));
        }
        let now = Instant::now();
        if now >= deadline {
            let _ = child.kill();
            let _ = child.wait();
            return Ok(None);
        }
        std::thread::sleep(pause.min(deadline - now));
        pause = (pause * 2).min(Duration::from_millis(20));
    }
}

fn stderr_tail(path: &Path) -> String {
    let text = fs::read_to_string(path).unwrap_or_default();
    let text = text.trim();
    let start = text.char_indices().rev().nth(299).map_or(0, |(i, _)| i);
    text[start..].to_string()
}

fn read_output(path: &Path) -> RawOutcome {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(_) => return RawOutcome::InvalidOutput("output file missing".into()),
    };
    match serde_json::from_str::<TrialOutput>(&text) {
        Ok(out) if out.schema == TRIAL_SCHEMA => RawOutcome::Completed(out.outcomes),
        Ok(out) => RawOutcome::InvalidOutput(format!("output schema {:?}, expected {TRIAL_SCHEMA:?}", out.schema)),
        Err(e) => RawOutcome::InvalidOutput(format!("unreadable output: {e}")),
    }
}

/// Adapts a closure into an executor, for in-process experiments and tests.
pub struct FnExecutor<F> {
    name: String,
    f: F,
}

impl<F> FnExecutor<F>
where
    F: Fn(&TrialInput) -> std::result::Result<BTreeMap<String, Value>, String> + Sync,
{
    pub fn new(name: &str, f: F) -> Self {
        FnExecutor { name: name.to_string(), f }
    }
}

impl<F> TrialExecutor for FnExecutor<F>
where
    F: Fn(&TrialInput) -> std::result::Result<BTreeMap<String, Value>, String> + Sync,
{
    fn describe(&self) -> String {
        self.name.clone()
    }

    fn run(&self, design: &ExperimentDesign, trial: &Trial) -> RawOutcome {
        match TrialInput::build(design, trial) {
            Ok(input) => match (self.f)(&input) {
                Ok(outcomes) => RawOutcome::Completed(outcomes),
                Err(e) => RawOutcome::Failed(e),
            },
            Err(e) => RawOutcome::Failed(e.to_string()),
        }
    }
}

/// Checks reported outcomes against the design's dependent variables:
/// exactly one in-domain value each.
pub fn validate_outcomes(
    design: &ExperimentDesign,
    outcomes: &BTreeMap<String, Value>,
) -> std::result::Result<BTreeMap<String, Value>, String> {
    let mut clean = BTreeMap::new();
    for v in design.variables_with_role(Role::Dependent) {
        match outcomes.get(&v.name) {
            None => return Err(format!("missing outcome {:?}", v.name)),
            Some(value) => match v.domain.coerce(value) {
                Some(c) => {
                    clean.insert(v.name.clone(), c);
                }
                None => return Err(format!("outcome {:?} = {value} outside domain {}", v.name, v.domain)),
            },
        }
    }
    if let Some(extra) = outcomes.keys().find(|k| !clean.contains_key(*k)) {
        return Err(format!("unexpected outcome {extra:?}"));
    }
    Ok(clean)
}

/// Runs one trial and packages the result as a [`RunRecord`]. Failures are
/// recorded in the status, never returned as errors.
pub fn execute_trial<E: TrialExecutor + ?Sized>(
    design: &ExperimentDesign,
    trial: &Trial,
    executor: &E,
    environment: &EnvironmentInfo,
) -> RunRecord {
    let started_at = chrono::Utc::now();
    let clock = Instant::now();
    let raw = executor.run(design, trial);
    let wall_time = clock.elapsed().as_secs_f64();
    let finished_at = chrono::Utc::now();

    let (status, outcomes, detail) = match raw {
        RawOutcome::Completed(values) => match validate_outcomes(design, &values) {
            Ok(clean) => (RunStatus::Ok, Some(clean), None),
            Err(why) => (RunStatus::InvalidOutput, None, Some(why)),
        },
        RawOutcome::Failed(why) => (RunStatus::Failed, None, Some(why)),
        RawOutcome::TimedOut(why) => (RunStatus::Timeout, None, Some(why)),
        RawOutcome::InvalidOutput(why) => (RunStatus::InvalidOutput, None, Some(why)),
    };
    RunRecord {
        trial: trial.clone(),
        status,
        outcomes_y: outcomes,
        detail,
        wall_time,
        environment: environment.clone(),
        started_at: started_at.to_rfc3339_opts(chrono::SecondsFormat::Micros, true),
        finished_at: finished_at.to_rfc3339_opts(chrono::SecondsFormat::Micros, true),
    }
}
