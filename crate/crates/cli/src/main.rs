//! `sureblock` — denoise signal files with blockwise James-Stein shrinkage,
//! run benchmark grids against the classical rules, and dump risk-estimate
//! surfaces for manual inspection.
//!
//! Exit codes: 0 success, 2 bad flags, 3 malformed input file, 4 non-dyadic
//! signal length, 5 benchmark run with failed cells. The env var
//! `SUREBLOCK_THREADS` caps worker threads (0 or unset = one per core).

mod error;
mod io;
mod manifest;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sureblock_core::bench::run_experiment;
use sureblock_core::pipeline::{denoise, estimate_sigma};
use sureblock_core::shrinkage::{candidate_thresholds, minimize_sure, sure};
use sureblock_core::{
    DenoiseConfig, ExperimentConfig, Method, SigmaSpec, TestSignal, WaveletFilter, dwt,
};

use error::CliError;
use manifest::RunManifest;

#[derive(Parser)]
#[command(name = "sureblock", version, about = "Wavelet denoising by SURE-tuned block shrinkage")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Denoise a signal file (one sample per line, length a power of two).
    Denoise(DenoiseArgs),
    /// Run a seeded benchmark grid and write per-replication results as CSV.
    Bench(BenchArgs),
    /// Dump every (block size, threshold, risk estimate) the search considers.
    SureTrace(SureTraceArgs),
}

#[derive(Args)]
struct DenoiseArgs {
    /// Input signal file: one real per line, '#' lines skipped.
    #[arg(long)]
    input: PathBuf,
    /// Where to write the denoised signal, one value per line.
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value = "sureblock", value_parser = parse_method)]
    method: Method,
    #[arg(long, default_value = "sym8", value_parser = ["haar", "sym8"])]
    wavelet: String,
    /// Coarsest shrunk level; scaling coefficients below it pass through.
    #[arg(long, default_value_t = 3)]
    j0: usize,
    /// Noise standard deviation: "auto" estimates it from the finest level.
    #[arg(long, default_value = "auto", value_parser = parse_sigma)]
    sigma: SigmaSpec,
    /// Optional per-level CSV: level,branch,L_star,lambda_star,sure_value,coeff_count.
    #[arg(long)]
    diagnostics: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Test signals, comma-separated: blocks,bumps,heavisine,doppler,ppoly,spikes.
    #[arg(long, value_delimiter = ',', default_value = "blocks,bumps,heavisine,doppler", value_parser = parse_signal)]
    functions: Vec<TestSignal>,
    /// Sample sizes, comma-separated powers of two.
    #[arg(long, value_delimiter = ',', default_value = "256,1024,4096")]
    n: Vec<usize>,
    /// Signal-to-noise ratios (sd of f over sd of noise), comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "7")]
    snr: Vec<f64>,
    /// Estimators to compare, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "sureblock,visu,sureshrink", value_parser = parse_method)]
    methods: Vec<Method>,
    /// Noise replications per (function, n, snr) cell.
    #[arg(long, default_value_t = 50)]
    reps: usize,
    /// Base seed; every replication derives its own stream from it.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Data CSV path; a .summary.csv sibling and a manifest land next to it.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "sym8", value_parser = ["haar", "sym8"])]
    wavelet: String,
    #[arg(long, default_value_t = 3)]
    j0: usize,
}

#[derive(Args)]
struct SureTraceArgs {
    /// Signal file (or a bare coefficient vector with --raw).
    #[arg(long)]
    input: PathBuf,
    /// Detail level to trace; required unless --raw is given.
    #[arg(long, conflicts_with = "raw")]
    level: Option<usize>,
    /// Treat the input as an already-extracted coefficient vector.
    #[arg(long)]
    raw: bool,
    /// "auto" estimates σ from the finest level; a number fixes it. With
    /// --raw, "auto" means the vector is already standardized.
    #[arg(long, default_value = "auto", value_parser = parse_sigma)]
    sigma: SigmaSpec,
    #[arg(long, default_value = "sym8", value_parser = ["haar", "sym8"])]
    wavelet: String,
    #[arg(long, default_value_t = 3)]
    j0: usize,
    /// Write the trace CSV here instead of stdout (adds a manifest sidecar).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_sigma(raw: &str) -> Result<SigmaSpec, String> {
    if raw.eq_ignore_ascii_case("auto") {
        return Ok(SigmaSpec::Auto);
    }
    match raw.parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 => Ok(SigmaSpec::Fixed(v)),
        _ => Err(format!("expected \"auto\" or a nonnegative number, got {raw:?}")),
    }
}

fn parse_method(raw: &str) -> Result<Method, String> {
    raw.parse().map_err(|e: sureblock_core::Error| e.to_string())
}

fn parse_signal(raw: &str) -> Result<TestSignal, String> {
    raw.parse().map_err(|e: sureblock_core::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Denoise(args) => cmd_denoise(args),
        Command::Bench(args) => cmd_bench(args),
        Command::SureTrace(args) => cmd_sure_trace(args),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

/// Applies `SUREBLOCK_THREADS` before any parallel work starts. 0 and unset
/// both mean "one worker per core" (rayon's default).
fn configure_threads() -> Result<(), CliError> {
    let raw = match std::env::var("SUREBLOCK_THREADS") {
        Ok(raw) => raw,
        Err(std::env::VarError::NotPresent) => return Ok(()),
        Err(err) => return Err(CliError::flags(format!("SUREBLOCK_THREADS: {err}"))),
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::flags(format!("SUREBLOCK_THREADS: expected a count, got {raw:?}")))?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|err| CliError::flags(format!("SUREBLOCK_THREADS: {err}")))?;
    }
    Ok(())
}

fn sigma_flag_value(sigma: SigmaSpec) -> String {
    match sigma {
        SigmaSpec::Auto => "auto".to_string(),
        SigmaSpec::Fixed(v) => format!("{v}"),
    }
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

fn cmd_denoise(args: DenoiseArgs) -> Result<(), CliError> {
    let y = io::read_signal(&args.input)?;
    let config = DenoiseConfig {
        filter: WaveletFilter::by_name(&args.wavelet)?,
        j0: args.j0,
        method: args.method,
        sigma: args.sigma,
    };
    let report = denoise(&y, &config)?;
    if report.identity_fallback {
        eprintln!("warning: noise level is zero; output is the input, unchanged");
    }
    io::write_signal(&args.output, &report.estimate)?;
    if let Some(path) = &args.diagnostics {
        io::write_diagnostics(path, &report.per_level)?;
    }
    let mut resolved = BTreeMap::new();
    resolved.insert("input".into(), args.input.display().to_string());
    resolved.insert("output".into(), args.output.display().to_string());
    resolved.insert("method".into(), args.method.to_string());
    resolved.insert("wavelet".into(), args.wavelet.clone());
    resolved.insert("j0".into(), args.j0.to_string());
    resolved.insert("sigma".into(), sigma_flag_value(args.sigma));
    if let Some(path) = &args.diagnostics {
        resolved.insert("diagnostics".into(), path.display().to_string());
    }
    RunManifest::new(resolved, None).write_for(&args.output)
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    let config = ExperimentConfig {
        functions: args.functions.clone(),
        sizes: args.n.clone(),
        snrs: args.snr.clone(),
        methods: args.methods.clone(),
        reps: args.reps,
        base_seed: args.seed,
        filter: WaveletFilter::by_name(&args.wavelet)?,
        j0: args.j0,
    };
    let output = run_experiment(&config)?;
    io::write_bench_csv(&args.out, &output.records)?;
    io::write_summary_csv(&args.out.with_extension("summary.csv"), &output.summary)?;

    let mut resolved = BTreeMap::new();
    resolved.insert("functions".into(), join(&args.functions));
    resolved.insert("n".into(), join(&args.n));
    resolved.insert("snr".into(), join(&args.snr));
    resolved.insert("methods".into(), join(&args.methods));
    resolved.insert("reps".into(), args.reps.to_string());
    resolved.insert("seed".into(), args.seed.to_string());
    resolved.insert("out".into(), args.out.display().to_string());
    resolved.insert("wavelet".into(), args.wavelet.clone());
    resolved.insert("j0".into(), args.j0.to_string());
    RunManifest::new(resolved, Some(args.seed)).write_for(&args.out)?;

    if !output.failures.is_empty() {
        eprintln!("{} cell-replication(s) failed:", output.failures.len());
        for f in &output.failures {
            let method = f.method.map_or_else(|| "-".to_string(), |m| m.to_string());
            eprintln!("  {},n={},snr={},method={},rep={}: {}", f.function, f.n, f.snr, method, f.rep, f.message);
        }
        return Err(CliError::partial(format!(
            "{} of {} cell-replications produced no record",
            output.failures.len(),
            output.failures.len() + output.records.len()
        )));
    }
    Ok(())
}

fn cmd_sure_trace(args: SureTraceArgs) -> Result<(), CliError> {
    let values = io::read_signal(&args.input)?;
    let x = if args.raw {
        match args.sigma {
            SigmaSpec::Auto => values,
            SigmaSpec::Fixed(sigma) => {
                check_trace_sigma(sigma)?;
                values.iter().map(|v| v / sigma).collect()
            }
        }
    } else {
        let level = args
            .level
            .ok_or_else(|| CliError::flags("--level is required unless --raw is given"))?;
        let filter = WaveletFilter::by_name(&args.wavelet)?;
        let pyramid = dwt::forward(&values, &filter, args.j0)?;
        if !pyramid.detail_levels().contains(&level) {
            return Err(CliError::flags(format!(
                "--level: need a detail level in {}..{}, got {level}",
                pyramid.j0(),
                pyramid.finest_level() + 1
            )));
        }
        let sigma = match args.sigma {
            SigmaSpec::Auto => estimate_sigma(&pyramid),
            SigmaSpec::Fixed(v) => v,
        };
        check_trace_sigma(sigma)?;
        let sigma_n = sigma / (values.len() as f64).sqrt();
        pyramid.detail(level).iter().map(|c| c / sigma_n).collect()
    };

    let selection = minimize_sure(&x);
    let mut csv = String::from("L,lambda,sure,argmin\n");
    for l in 1..=x.len().isqrt().max(1) {
        for lambda in candidate_thresholds(&x, l)? {
            let value = sure(&x, lambda, l)?;
            let argmin = l == selection.block_size && lambda == selection.threshold;
            csv.push_str(&format!("{l},{lambda},{value},{}\n", u8::from(argmin)));
        }
    }

    match &args.out {
        None => {
            print!("{csv}");
            Ok(())
        }
        Some(out) => {
            std::fs::write(out, csv).map_err(|e| CliError::io(out, e))?;
            let mut resolved = BTreeMap::new();
            resolved.insert("input".into(), args.input.display().to_string());
            if let Some(level) = args.level {
                resolved.insert("level".into(), level.to_string());
            }
            resolved.insert("raw".into(), args.raw.to_string());
            resolved.insert("sigma".into(), sigma_flag_value(args.sigma));
            resolved.insert("wavelet".into(), args.wavelet.clone());
            resolved.insert("j0".into(), args.j0.to_string());
            resolved.insert("out".into(), out.display().to_string());
            RunManifest::new(resolved, None).write_for(out)
        }
    }
}

/// The trace standardizes by σ, so unlike `denoise` it cannot accept zero.
fn check_trace_sigma(sigma: f64) -> Result<(), CliError> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(CliError::flags(format!(
            "--sigma: the trace needs a positive noise level, got {sigma}"
        )));
    }
    Ok(())
}
