mod input;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tomocausal::ensemble::{
    analyze_state, run_ensemble, sweep_pure, write_csv, EnsembleRecord, StateClass, SummaryStats,
};
use tomocausal::optimizer::OptimizationSettings;
use tomocausal::states::XStateClass;
use tomocausal::verify::{verify, Suite, VerifyOptions};

use crate::input::StateInput;

#[derive(Parser)]
#[command(
    name = "tomocausal",
    version,
    about = "Causal asymmetry of two-qubit states from tomograms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for a single state
    Analyze(AnalyzeArgs),
    /// Generate a seeded random ensemble and its summary statistics
    Ensemble(EnsembleArgs),
    /// Pure states α|00> + sqrt(1-α²)|11> on an even grid of α
    SweepPure(SweepArgs),
    /// Check invariants on freshly generated states
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    X,
    Mixed,
    Pure,
}

impl From<ClassArg> for StateClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::X => StateClass::X,
            ClassArg::Mixed => StateClass::Mixed,
            ClassArg::Pure => StateClass::Pure,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Random optimizer starts per state (besides the tomographic start)
    #[arg(long, default_value_t = 24)]
    starts: usize,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn optimizer(&self, seed: u64) -> OptimizationSettings {
        OptimizationSettings {
            random_starts: self.starts,
            seed,
            ..OptimizationSettings::default()
        }
    }
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// bell, product or werner:<p>
    #[arg(long)]
    preset: Option<String>,
    /// Inline X-state: ρ11,ρ22,ρ33,ρ44,Re ρ14,Im ρ14,Re ρ23,Im ρ23
    #[arg(long, allow_hyphen_values = true)]
    x_state: Option<String>,
    /// JSON file with either "rho" (16 [re, im] pairs) or "x_state"
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct EnsembleArgs {
    #[arg(long, value_enum)]
    class: ClassArg,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    /// Master seed; state i uses seed + i
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Omit the generation timestamp so reruns are byte-identical
    #[arg(long)]
    no_timestamp: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 99)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    no_timestamp: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all", value_parser = Suite::NAMES)]
    suite: String,
    /// States per suite; the oracle suite caps this at 10 when run as part of "all"
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    common: Common,
}

enum Failure {
    Input(String),
    Verification,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

fn open_output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

#[derive(Serialize)]
struct SingleReport<'a> {
    #[serde(flatten)]
    record: &'a EnsembleRecord,
    x_class: Option<&'a XStateClass>,
    x_class_error: Option<&'a str>,
    /// Row-major `[re, im]` pairs.
    rho: Vec<[f64; 2]>,
}

fn analyze(args: AnalyzeArgs) -> Result<(), Failure> {
    let StateInput { state, x_params } =
        match (&args.source.preset, &args.source.x_state, &args.source.file) {
            (Some(p), _, _) => input::preset(p),
            (_, Some(x), _) => input::inline_x_state(x),
            (_, _, Some(f)) => input::from_file(f),
            _ => unreachable!("clap enforces one source"),
        }
        .map_err(Failure::Input)?;
    let cfg = args.common.optimizer(args.seed);
    let a = analyze_state(&state, x_params.as_ref(), &cfg)?;
    let class = if x_params.is_some() {
        StateClass::X
    } else {
        StateClass::Mixed
    };
    let record = EnsembleRecord::from_analysis(0, args.seed, class, &a);
    let mut out = open_output(&args.common.out)?;
    match args.format {
        Format::Csv => write_csv(&mut out, std::slice::from_ref(&record))?,
        Format::Json => {
            let report = SingleReport {
                record: &record,
                x_class: a.x_class.as_ref().and_then(|c| c.as_ref().ok()),
                x_class_error: a
                    .x_class
                    .as_ref()
                    .and_then(|c| c.as_ref().err())
                    .map(String::as_str),
                rho: state
                    .rho_ab()
                    .matrix()
                    .entries()
                    .iter()
                    .map(|z| [z.re, z.im])
                    .collect(),
            };
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct EnsembleJson<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_at_unix: Option<u64>,
    stats: Option<&'a SummaryStats>,
    records: &'a [EnsembleRecord],
}

fn emit_records(
    records: &[EnsembleRecord],
    stats: Option<&SummaryStats>,
    format: Format,
    no_timestamp: bool,
    path: &Option<PathBuf>,
) -> Result<(), Failure> {
    let stamp = (!no_timestamp).then(timestamp);
    let mut out = open_output(path)?;
    match format {
        Format::Csv => {
            if let Some(t) = stamp {
                writeln!(out, "# generated_at_unix={t}")?;
            }
            write_csv(&mut out, records)?;
        }
        Format::Json => {
            let doc = EnsembleJson {
                generated_at_unix: stamp,
                stats,
                records,
            };
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or("undefined".into(), |v| format!("{v:.4}"))
}

fn ensemble(args: EnsembleArgs) -> Result<(), Failure> {
    let cfg = args.common.optimizer(args.seed);
    let ens = run_ensemble(args.class.into(), args.count, args.seed, &cfg)?;
    emit_records(
        &ens.records,
        Some(&ens.stats),
        args.format,
        args.no_timestamp,
        &args.common.out,
    )?;
    let s = &ens.stats;
    eprintln!(
        "states: {} ({} degenerate, excluded)",
        s.total, s.excluded_degenerate
    );
    eprintln!(
        "r(d_tom, d_opt) = {}  slope = {}",
        fmt_opt(s.pearson_r_dtom_dopt),
        fmt_opt(s.slope_dopt_on_dtom)
    );
    eprintln!(
        "r(d_q, d_opt) = {}  slope = {}",
        fmt_opt(s.pearson_r_dq_dopt),
        fmt_opt(s.slope_dopt_on_dq)
    );
    eprintln!("r(d_q, d_tom) = {}", fmt_opt(s.pearson_r_dq_dtom));
    eprintln!(
        "sign agreement d_tom·d_opt > 0: {}",
        fmt_opt(s.sign_agreement_fraction)
    );
    if let (Some(i), Some(ii), Some(bad)) = (s.type_i, s.type_ii, s.type_inconsistent) {
        eprintln!("X-state types: I = {i}, II = {ii}, inconsistent = {bad}");
    }
    eprintln!("elapsed: {:.2?}", ens.elapsed);
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let records = sweep_pure(args.count, &args.common.optimizer(args.seed))?;
    emit_records(
        &records,
        None,
        args.format,
        args.no_timestamp,
        &args.common.out,
    )
}

fn run_verify(args: VerifyArgs) -> Result<(), Failure> {
    let suite: Suite = args.suite.parse()?;
    let opts = VerifyOptions {
        count: args.count,
        oracle_count: if suite == Suite::Oracle {
            args.count
        } else {
            args.count.min(10)
        },
        seed: args.seed,
        optimizer: args.common.optimizer(args.seed),
        ..VerifyOptions::default()
    };
    let report = verify(suite, &opts)?;
    let mut out = open_output(&args.common.out)?;
    if args.json {
        serde_json::to_writer_pretty(&mut out, &report)?;
        writeln!(out)?;
    } else {
        write!(out, "{report}")?;
    }
    out.flush()?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Ensemble(a) => ensemble(a),
        Command::SweepPure(a) => sweep(a),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
