//! CLI front end: exact weights, balancedness verdicts, full `(n, d)`
//! sweeps with checkpoint/resume, the two-power experiment presets, and
//! closed-form verification.
//!
//! Exit codes: 0 success, 1 verification failure found, 2 usage error,
//! 3 I/O error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use esbf::classify::classify;
use esbf::experiments::{run_experiment, verify_closed_forms_with_progress, Expectation, Preset};
use esbf::sweep::{records_to_csv, run_sweep, SweepError, SweepOptions};
use esbf::weight::Esbf;

#[derive(Parser)]
#[command(
    name = "esbf",
    version,
    about = "Exact weights and balancedness of elementary symmetric Boolean functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for sweeps (default: available cores, capped at 8)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Append-only JSONL checkpoint file for sweeps
    #[arg(long, global = true)]
    checkpoint: Option<PathBuf>,

    /// Resume from the checkpoint instead of starting fresh
    #[arg(long, global = true)]
    resume: bool,

    /// Scale factor in (0, 1] applied to a preset's l-range
    #[arg(long, global = true)]
    scale: Option<f64>,

    /// Working precision override for closed-form evaluation
    #[arg(long = "precision-bits", global = true)]
    precision_bits: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact weight of sigma_(n,d) and its relation to 2^(n-1)
    Weight { n: u64, d: u64 },
    /// Balancedness verdict with the deciding rule and proof trace
    Classify { n: u64, d: u64 },
    /// Weight and classify every pair with 1 <= d <= n <= n_max
    Sweep {
        n_max: u64,
        /// Do not store weights in the records (they are still computed
        /// for the soundness comparison)
        #[arg(long)]
        compare_only: bool,
        /// Write the report to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the (n, d) pairs the known results leave open
    #[command(name = "open-cases")]
    OpenCases { n_max: u64 },
    /// Re-run a two-power experiment preset (t1, t2-l3, t2, t3plus)
    #[command(name = "reproduce-section5")]
    ReproduceSection5 { preset: String },
    /// Cross-check all closed forms against exact integers up to n_max
    #[command(name = "verify-closed-forms")]
    VerifyClosedForms { n_max: u64 },
}

enum Failure {
    Usage(String),
    Io(String),
}

/// `Ok(true)` means every verification the command ran came back clean.
type CmdResult = Result<bool, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

impl From<SweepError> for Failure {
    fn from(err: SweepError) -> Self {
        Failure::Io(err.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::Io(err.to_string())
    }
}

fn parse_esbf(n: u64, d: u64) -> Result<Esbf, Failure> {
    Esbf::new(n, d).map_err(|e| usage(e.to_string()))
}

fn cmd_weight(n: u64, d: u64, json: bool) -> CmdResult {
    let e = parse_esbf(n, d)?;
    let report = e.weight_report();
    let half = (num_bigint::BigUint::from(1u32) << (n - 1)).to_string();
    if json {
        let value = serde_json::json!({
            "n": n,
            "d": d,
            "weight": report.weight().to_string(),
            "weight_hex": report.weight().to_str_radix(16),
            "half": half,
            "trichotomy": report.trichotomy().as_str(),
            "balanced": report.balanced(),
        });
        println!("{value}");
    } else {
        println!("n          = {n}");
        println!("d          = {d}");
        println!("weight     = {}", report.weight());
        println!("weight_hex = {}", report.weight().to_str_radix(16));
        println!("half       = {half} (2^(n-1))");
        println!("trichotomy = {}", report.trichotomy());
        println!("balanced   = {}", report.balanced());
    }
    Ok(true)
}

fn cmd_classify(n: u64, d: u64, json: bool) -> CmdResult {
    let e = parse_esbf(n, d)?;
    let verdict = classify(&e);
    if json {
        println!(
            "{}",
            serde_json::to_string(&verdict).expect("verdicts serialize")
        );
    } else {
        println!("sigma_({n},{d}): {} via {}", verdict.kind, verdict.rule);
        println!("trace:");
        for (idx, step) in verdict.trace.iter().enumerate() {
            println!("  [{:>2}] {} -> {}", idx + 1, step.condition, step.outcome);
        }
    }
    Ok(true)
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
        .min(8)
}

fn cmd_sweep(cli: &Cli, n_max: u64, compare_only: bool, out: Option<&PathBuf>) -> CmdResult {
    if n_max < 1 {
        return Err(usage("sweep needs n_max >= 1"));
    }
    let opts = SweepOptions {
        n_max,
        workers: cli.workers.unwrap_or_else(default_workers),
        checkpoint: cli.checkpoint.clone(),
        resume: cli.resume,
        compare_only,
        interrupt_after: None,
    };
    let outcome = run_sweep(&opts)?;
    let rendered = if cli.json {
        let mut s = serde_json::to_string(&outcome.records).expect("records serialize");
        s.push('\n');
        s
    } else {
        records_to_csv(&outcome.records)
    };
    match out {
        Some(path) => fs::write(path, rendered)?,
        None => print!("{rendered}"),
    }
    let s = &outcome.summary;
    let counts: Vec<String> = s.counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
    eprintln!(
        "summary: records={} {} soundness_violations={} open_equal={}",
        s.records,
        counts.join(" "),
        s.soundness_violations,
        s.open_equal
    );
    Ok(s.soundness_violations == 0 && s.open_equal == 0)
}

fn cmd_open_cases(n_max: u64, json: bool) -> CmdResult {
    if n_max < 3 {
        return Err(usage("open-cases needs n_max >= 3"));
    }
    let cases = esbf::classify::open_cases(n_max);
    if json {
        println!(
            "{}",
            serde_json::to_string(&cases).expect("pairs serialize")
        );
    } else {
        for e in &cases {
            println!("{} {}", e.n(), e.d());
        }
        eprintln!("open cases up to n={n_max}: {}", cases.len());
    }
    Ok(true)
}

fn cmd_reproduce(cli: &Cli, preset: &str) -> CmdResult {
    let preset = Preset::from_name(preset).ok_or_else(|| {
        usage(format!(
            "unknown preset `{preset}` (try t1, t2-l3, t2, t3plus)"
        ))
    })?;
    let mut spec = preset.spec();
    if let Some(factor) = cli.scale {
        if !(factor > 0.0 && factor <= 1.0) {
            return Err(usage("--scale must be in (0, 1]"));
        }
        spec = spec.scaled(factor);
    }
    let report = run_experiment(&spec);
    if cli.json {
        println!(
            "{}",
            serde_json::to_string(&report).expect("report serializes")
        );
    } else {
        for row in report.rows.iter().filter(|r| r.deviation) {
            println!(
                "deviation: n={} d={} (t={} s={} l={} r={}) expected {:?} got {}",
                row.n, row.d, row.t, row.s, row.l, row.r, row.expected, row.trichotomy
            );
        }
        if spec.expectation == Expectation::Mixed {
            for (n, d) in &report.greater_witnesses {
                println!("greater witness: n={n} d={d}");
            }
        }
        println!(
            "preset {}: t={} l in {}..={} pairs={} deviations={} greater_witnesses={} ok={}",
            spec.name,
            spec.t,
            spec.l_min,
            spec.l_max,
            report.rows.len(),
            report.deviations,
            report.greater_witnesses.len(),
            report.ok
        );
    }
    Ok(report.ok)
}

fn cmd_verify_closed_forms(cli: &Cli, n_max: u64) -> CmdResult {
    if n_max < 4 {
        return Err(usage("verify-closed-forms needs n_max >= 4"));
    }
    let report = verify_closed_forms_with_progress(n_max, cli.precision_bits, |n| {
        if n % 25 == 0 {
            eprintln!("... n = {n}");
        }
    });
    if cli.json {
        println!(
            "{}",
            serde_json::to_string(&report).expect("report serializes")
        );
    } else {
        for f in &report.failures {
            println!(
                "failure: {} n={} {} ({})",
                f.family, f.n, f.params, f.detail
            );
        }
        println!(
            "verified {} closed-form values up to n={}: escalations={} failures={}",
            report.checks,
            n_max,
            report.escalations,
            report.failures.len()
        );
    }
    Ok(report.ok())
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Weight { n, d } => cmd_weight(*n, *d, cli.json),
        Command::Classify { n, d } => cmd_classify(*n, *d, cli.json),
        Command::Sweep {
            n_max,
            compare_only,
            out,
        } => cmd_sweep(cli, *n_max, *compare_only, out.as_ref()),
        Command::OpenCases { n_max } => cmd_open_cases(*n_max, cli.json),
        Command::ReproduceSection5 { preset } => cmd_reproduce(cli, preset),
        Command::VerifyClosedForms { n_max } => cmd_verify_closed_forms(cli, *n_max),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
