//! The `veritas` command line: `init`, `validate`, `run`, `analyze`,
//! `audit` and `report`.
//!
//! Exit codes: 0 ok, 1 invalid manifest, 2 scaffold conflict, 3 trial
//! failures, 4 insufficient data, 5 audit failures, 64 usage error, 65
//! unreadable or mismatched archive/report, 70 other internal errors.
//! Diagnostics go to stderr; stdout carries only summaries.

mod scaffold;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::model::{validate_design, ExperimentDesign};
use crate::orchestrator::{run_experiment, ExecutorConfig, ProcessExecutor};
use crate::provenance::{audit_checklist, generate_report, read_archive, render_text, FairDescriptor, Report};
use crate::selector::{evaluate_design, AnalysisOptions};
use crate::stats::Mode;

pub use scaffold::{EXECUTOR_NAME, MANIFEST_NAME};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_MANIFEST: i32 = 1;
pub const EXIT_SCAFFOLD_CONFLICT: i32 = 2;
pub const EXIT_TRIAL_FAILURES: i32 = 3;
pub const EXIT_INSUFFICIENT_DATA: i32 = 4;
pub const EXIT_AUDIT_FAILURES: i32 = 5;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_INTERNAL: i32 = 70;

pub const REPORT_JSON: &str = "report.json";
pub const REPORT_TEXT: &str = "report.txt";

#[derive(Debug, Parser)]
#[command(name = "veritas", version, about = "Falsifiable, replicable and auditable ML experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write an example manifest and stub executor into an empty directory.
    Init {
        #[arg(default_value = ".")]
        dir: PathBuf,
    },
    /// Check a manifest and list its violations.
    Validate(ManifestArg),
    /// Execute every pending trial and append records to the archive.
    Run(RunArgs),
    /// Test every hypothesis and write report.json and report.txt.
    Analyze(AnalyzeArgs),
    /// Audit the design and its outputs against the research checklist.
    Audit(AuditArgs),
    /// Render a structured report as text.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct ManifestArg {
    #[arg(long)]
    pub manifest: PathBuf,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub archive: PathBuf,
    /// Concurrent trials; falls back to VERITAS_PARALLELISM, then the manifest.
    #[arg(long, env = "VERITAS_PARALLELISM")]
    pub parallelism: Option<usize>,
    /// Per-trial timeout in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub archive: PathBuf,
    /// Significance level replacing every hypothesis' own alpha.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 0.95)]
    pub ci_level: f64,
    #[arg(long, value_enum, default_value = "auto")]
    pub mode: ModeArg,
    /// Holm–Bonferroni correction across hypotheses.
    #[arg(long)]
    pub holm: bool,
    /// Average folds as well as replications into one analysis unit.
    #[arg(long)]
    pub aggregate_folds: bool,
    /// Output directory; defaults to the archive's directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum ModeArg {
    Auto,
    Exact,
    Approx,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Auto => Mode::Auto,
            ModeArg::Exact => Mode::Exact,
            ModeArg::Approx => Mode::Approx,
        }
    }
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub archive: Option<PathBuf>,
    /// Structured report; defaults to report.json next to the archive.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub fair: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub report: PathBuf,
    /// Write the text here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parse `std::env::args` and run; returns the process exit code.
pub fn main() -> i32 {
    run_cli(std::env::args_os())
}

pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit code for an error that aborted a command.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Manifest(_) | Error::InvalidDesign(_) | Error::TrialCap { .. } => EXIT_INVALID_MANIFEST,
        Error::InsufficientData(_) | Error::Alignment { .. } => EXIT_INSUFFICIENT_DATA,
        Error::ArchiveCorrupt { .. } | Error::ArchiveMismatch { .. } | Error::Json(_) => EXIT_DATA,
        Error::InvalidArgument(_) => EXIT_USAGE,
        _ => EXIT_INTERNAL,
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Init { dir } => cmd_init(&dir),
        Command::Validate(a) => cmd_validate(&a.manifest),
        Command::Run(a) => cmd_run(&a),
        Command::Analyze(a) => cmd_analyze(&a),
        Command::Audit(a) => cmd_audit(&a),
        Command::Report(a) => cmd_report(&a),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

pub fn cmd_init(dir: &Path) -> Result<i32> {
    if dir.exists() {
        let mut entries = fs::read_dir(dir).map_err(|e| Error::io(format!("reading {}", dir.display()), e))?;
        if entries.next().is_some() {
            eprintln!("error: {} exists and is not empty; nothing written", dir.display());
            return Ok(EXIT_SCAFFOLD_CONFLICT);
        }
    } else {
        fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
    }
    write_file(&dir.join(MANIFEST_NAME), scaffold::MANIFEST)?;
    let exe = dir.join(EXECUTOR_NAME);
    write_file(&exe, scaffold::EXECUTOR)?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        let _ = fs::set_permissions(&exe, fs::Permissions::from_mode(0o755));
    }
    println!("{}", dir.join(MANIFEST_NAME).display());
    println!("{}", exe.display());
    Ok(EXIT_OK)
}

/// Load and validate; violations are printed and yield `None`.
fn load_valid(manifest: &Path) -> Result<Option<ExperimentDesign>> {
    let design = ExperimentDesign::load(manifest).map_err(|e| match e {
        Error::Io { context, source } => Error::Manifest(format!("{context}: {source}")),
        other => other,
    })?;
    let violations = validate_design(&design);
    if violations.is_empty() {
        return Ok(Some(design));
    }
    for v in &violations {
        eprintln!("{}: {v}", manifest.display());
    }
    Ok(None)
}

pub fn cmd_validate(manifest: &Path) -> Result<i32> {
    match load_valid(manifest)? {
        Some(d) => {
            println!("ok: {} trials, fingerprint {}", d.trial_count(), d.fingerprint());
            Ok(EXIT_OK)
        }
        None => Ok(EXIT_INVALID_MANIFEST),
    }
}

fn manifest_dir(manifest: &Path) -> PathBuf {
    match manifest.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

pub fn cmd_run(args: &RunArgs) -> Result<i32> {
    let Some(design) = load_valid(&args.manifest)? else {
        return Ok(EXIT_INVALID_MANIFEST);
    };
    let Some(spec) = design.executor.clone() else {
        eprintln!("{}: no [executor] section; nothing to run", args.manifest.display());
        return Ok(EXIT_INVALID_MANIFEST);
    };
    let base = manifest_dir(&args.manifest);
    let mut config = ExecutorConfig::new(spec.command);
    config.working_dir = match spec.working_dir {
        Some(w) => base.join(w),
        None => base,
    };
    config.env_overrides = spec.env;
    let timeout = args.timeout.unwrap_or(spec.timeout);
    if !(timeout > 0.0 && timeout.is_finite()) {
        return Err(Error::InvalidArgument(format!("timeout must be positive, got {timeout}")));
    }
    config.timeout = Duration::from_secs_f64(timeout);
    config.parallelism = args.parallelism.or(spec.parallelism).unwrap_or(1);
    let mut artifacts = args.archive.clone().into_os_string();
    artifacts.push(".artifacts");
    config.artifact_root = Some(PathBuf::from(artifacts));
    let parallelism = config.parallelism;
    if let Some(parent) = args.archive.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(format!("creating {}", parent.display()), e))?;
    }
    let executor = ProcessExecutor::new(config)?;
    let summary = run_experiment(&design, &executor, &args.archive, parallelism)?;
    println!("{}", serde_json::to_string(&summary)?);
    if summary.all_ok() {
        Ok(EXIT_OK)
    } else {
        eprintln!("some trials did not complete; see the archive for details");
        Ok(EXIT_TRIAL_FAILURES)
    }
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<i32> {
    let Some(design) = load_valid(&args.manifest)? else {
        return Ok(EXIT_INVALID_MANIFEST);
    };
    if !args.archive.exists() {
        return Err(Error::InsufficientData(format!("archive {} does not exist", args.archive.display())));
    }
    let archive = read_archive(&args.archive)?;
    if let Some(h) = &archive.header {
        let expected = design.fingerprint();
        if h.design_fingerprint != expected {
            return Err(Error::ArchiveMismatch { path: args.archive.clone(), found: h.design_fingerprint.clone(), expected });
        }
    }
    let options = AnalysisOptions {
        alpha: args.alpha,
        ci_level: args.ci_level,
        mode: args.mode.into(),
        holm: args.holm,
        aggregate_folds: args.aggregate_folds,
    };
    let verdicts = evaluate_design(&design, &archive.records, &options)?;
    let report = generate_report(&design, &archive, &verdicts, &options)?;
    let out = args.out.clone().unwrap_or_else(|| manifest_dir(&args.archive));
    fs::create_dir_all(&out).map_err(|e| Error::io(format!("creating {}", out.display()), e))?;
    report.save(&out.join(REPORT_JSON))?;
    write_file(&out.join(REPORT_TEXT), &render_text(&report))?;
    for v in &verdicts {
        println!("{}\t{}\t{}\tp={}", v.hypothesis_id, v.decision.as_str(), v.primary.method, v.p_value);
    }
    Ok(EXIT_OK)
}

fn optional<T>(path: Option<&Path>, what: &str, load: impl FnOnce(&Path) -> Result<T>) -> Result<Option<T>> {
    match path {
        Some(p) if p.exists() => load(p).map(Some),
        Some(p) => {
            eprintln!("note: {what} {} not found; audited as missing", p.display());
            Ok(None)
        }
        None => Ok(None),
    }
}

pub fn cmd_audit(args: &AuditArgs) -> Result<i32> {
    let design = ExperimentDesign::load(&args.manifest).map_err(|e| match e {
        Error::Io { context, source } => Error::Manifest(format!("{context}: {source}")),
        other => other,
    })?;
    let archive = optional(args.archive.as_deref(), "archive", read_archive)?;
    let default_report = args.archive.as_deref().map(|a| manifest_dir(a).join(REPORT_JSON)).filter(|p| p.exists());
    let report_path = args.report.clone().or(default_report);
    let report = optional(report_path.as_deref(), "report", Report::load)?;
    let fair = optional(args.fair.as_deref(), "FAIR descriptor", FairDescriptor::load)?;
    let checklist = audit_checklist(&design, archive.as_ref(), report.as_ref(), fair.as_ref());
    print!("{}", checklist.render_table());
    Ok(if checklist.passed() { EXIT_OK } else { EXIT_AUDIT_FAILURES })
}

pub fn cmd_report(args: &ReportArgs) -> Result<i32> {
    let report = Report::load(&args.report)?;
    let text = render_text(&report);
    match &args.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(EXIT_OK)
}
