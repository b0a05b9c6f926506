//! `linksched`: generate instances, run schedulers, verify schedules, bench
//! approximation ratios and dump the integer program.
//!
//! Exit codes: 0 success, 2 usage error, 3 admission or validation failure,
//! 4 oracle cap refusal, 5 internal verification failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use linksched::generate::{generate, GeneratorKind, ParamSpec};
use linksched::harness::{bench, run_algorithm, Algorithm, BenchConfig, RunOptions};
use linksched::ilp::{build_ilp, write_lp_format};
use linksched::io::{
    canonical_json, sinr_tolerance, verify, AlgorithmInfo, InstanceFile, ScheduleFile,
};
use linksched::{Error, PowerMode};

#[derive(Parser)]
#[command(
    name = "linksched",
    version,
    about = "Minimum-length link scheduling under SINR"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded instance file.
    Generate(GenerateArgs),
    /// Schedule an instance and write a verified schedule file.
    Run(RunArgs),
    /// Check a schedule file against an instance file.
    Verify(VerifyArgs),
    /// Run ratio experiments from a JSON configuration.
    Bench(BenchArgs),
    /// Dump the integer program of an arbitrary-power instance in CPLEX LP format.
    ExportLp(ExportArgs),
}

#[derive(Args)]
struct Tolerance {
    /// Absolute slack on `sinr >= sigma`.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Exact comparisons (tolerance 0).
    #[arg(long, conflicts_with = "tolerance")]
    strict: bool,
}

impl Tolerance {
    fn value(&self) -> f64 {
        sinr_tolerance(self.strict, self.tolerance)
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value = "uniform-random")]
    kind: String,
    #[arg(long, short = 'n', default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON parameter spec; defaults are used for missing fields.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Power mode override: oblivious, uniform or arbitrary.
    #[arg(long)]
    mode: Option<String>,
    /// Comma-separated Partition input for the gadget kind.
    #[arg(long, value_delimiter = ',')]
    integers: Vec<u64>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    instance: PathBuf,
    #[arg(long)]
    algo: String,
    /// Slot limit for ilp-cover.
    #[arg(long)]
    slot_cap: Option<usize>,
    /// Branch-and-bound node budget for ilp-cover.
    #[arg(long)]
    node_budget: Option<usize>,
    #[command(flatten)]
    tolerance: Tolerance,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    instance: PathBuf,
    schedule: PathBuf,
    #[command(flatten)]
    tolerance: Tolerance,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    config: PathBuf,
    /// Overrides the seed in the configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for `report.json` and `rows.csv`.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ExportArgs {
    instance: PathBuf,
    #[arg(long)]
    slot_cap: Option<usize>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

/// Errors carry the exit code they map to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::ModeMismatch { .. } | Error::InvalidParams(_) | Error::Io(_) => 2,
            Error::OracleCap(_) => 4,
            Error::Verification(_) | Error::Lp(_) | Error::Internal(_) => 5,
            _ => 3,
        };
        let message = match &e {
            Error::ModeMismatch { expected, .. } => {
                format!("{e}; this algorithm needs an instance in {expected} power mode")
            }
            _ => e.to_string(),
        };
        Failure { code, message }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => {
            fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display())))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| usage(format!("cannot write to stdout: {e}"))),
    }
}

fn read_instance(path: &Path) -> Result<InstanceFile, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(InstanceFile::parse(&text)?)
}

fn cmd_generate(a: GenerateArgs) -> Result<(), Failure> {
    let kind: GeneratorKind = a.kind.parse()?;
    let mut spec = match &a.spec {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| usage(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| usage(format!("bad spec {}: {e}", p.display())))?
        }
        None if kind == GeneratorKind::Gadget => ParamSpec::gadget_default(),
        None => ParamSpec::default(),
    };
    if let Some(m) = &a.mode {
        spec.mode = m.parse::<PowerMode>()?;
    }
    if !a.integers.is_empty() {
        spec.integers = a.integers.clone();
    }
    let file = generate(kind, a.n, a.seed, &spec)?;
    emit(a.out.as_deref(), &file.to_canonical_string()?)
}

fn cmd_run(a: RunArgs) -> Result<(), Failure> {
    let algo: Algorithm = a.algo.parse()?;
    let instance = read_instance(&a.instance)?;
    let set = instance.to_link_set()?;
    let opts = RunOptions {
        slot_cap: a.slot_cap,
        node_budget: a.node_budget,
    };
    let out = run_algorithm(&set, algo, &opts)?;
    let info = AlgorithmInfo {
        name: algo.as_str().to_string(),
        params: out.details,
    };
    let file = ScheduleFile::build(&instance, &set, info, out.body, a.tolerance.value())?;
    emit(a.out.as_deref(), &file.to_canonical_string()?)
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Failure> {
    let instance = read_instance(&a.instance)?;
    let text = fs::read_to_string(&a.schedule)
        .map_err(|e| usage(format!("cannot read {}: {e}", a.schedule.display())))?;
    let schedule = ScheduleFile::parse(&text)?;
    let report = verify(&instance, &schedule, a.tolerance.value())?;
    emit(a.out.as_deref(), &canonical_json(&report)?)?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure {
            code: 3,
            message: format!("verification failed: {}", report.failures.join("; ")),
        })
    }
}

fn cmd_bench(a: BenchArgs) -> Result<(), Failure> {
    let text = fs::read_to_string(&a.config)
        .map_err(|e| usage(format!("cannot read {}: {e}", a.config.display())))?;
    let mut config: BenchConfig = if text.trim().is_empty() {
        BenchConfig::default()
    } else {
        serde_json::from_str(&text).map_err(|e| usage(format!("bad config: {e}")))?
    };
    if let Some(s) = a.seed {
        config.seed = s;
        for r in &mut config.runs {
            r.seed = None;
        }
    }
    let report = bench(&config);
    fs::create_dir_all(&a.out_dir)
        .map_err(|e| usage(format!("cannot create {}: {e}", a.out_dir.display())))?;
    emit(
        Some(&a.out_dir.join("report.json")),
        &canonical_json(&report)?,
    )?;
    emit(Some(&a.out_dir.join("rows.csv")), &report.to_csv())
}

fn cmd_export(a: ExportArgs) -> Result<(), Failure> {
    let instance = read_instance(&a.instance)?;
    let set = instance.to_link_set()?;
    let ilp = build_ilp(&set)?;
    let slots = a.slot_cap.unwrap_or(set.len()).min(set.len());
    emit(a.out.as_deref(), &write_lp_format(&ilp, slots))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Run(a) => cmd_run(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
        Command::ExportLp(a) => cmd_export(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
