//! Seeded simulation harness: catalog signals, calibrated noise, error
//! metrics, and a deterministic multi-method experiment grid.
//!
//! Every replication's seed is derived from the experiment base seed and the
//! cell coordinates (function, size, snr, replication) — not the method — so
//! all methods within a cell see the identical noisy vector and ASE
//! comparisons are paired. Parallel execution cannot change any result: work
//! items are mapped in a fixed order and reassembled by index.

mod signals;

pub use signals::{TestSignal, sample_signal};

use rand::RngExt;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::collections::BTreeMap;

use crate::dwt::{self, CoefficientPyramid, WaveletFilter};
use crate::pipeline::{self, DenoiseConfig, Method, SigmaSpec};
use crate::seeding;
use crate::{Error, Result};

/// Adds seeded Gaussian noise calibrated to a signal-to-noise ratio:
/// σ = sd(f)/snr with the population standard deviation (divisor n).
/// Returns the noisy samples and the σ used, for oracle metrics.
pub fn add_noise(f_vals: &[f64], snr: f64, seed: u64) -> Result<(Vec<f64>, f64)> {
    if !snr.is_finite() || snr <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "snr",
            reason: format!("need a finite snr > 0, got {snr}"),
        });
    }
    let n = f_vals.len() as f64;
    let mean: f64 = f_vals.iter().sum::<f64>() / n;
    let var: f64 = f_vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let sd = var.sqrt();
    if sd == 0.0 || !sd.is_finite() {
        return Err(Error::ConstantSignal);
    }
    let sigma = sd / snr;
    let mut rng = seeding::rng_from_seed(seed);
    let y = f_vals
        .iter()
        .map(|f| f + sigma * rng.sample::<f64, _>(StandardNormal))
        .collect();
    Ok((y, sigma))
}

/// Average squared error n⁻¹ Σ (f̂(t_i) − f(t_i))².
pub fn ase(estimate: &[f64], truth: &[f64]) -> Result<f64> {
    if estimate.len() != truth.len() {
        return Err(Error::LengthMismatch { left: estimate.len(), right: truth.len() });
    }
    let sum: f64 = estimate
        .iter()
        .zip(truth)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(sum / estimate.len() as f64)
}

/// Ideal keep-or-kill risk on the detail coefficients of the noiseless
/// signal: Σ min(θ², σ²/n) over levels j ≥ j0, in the pipeline normalization
/// where each coefficient carries noise variance σ²/n. Comparable to ASE.
pub fn oracle_risk(truth: &[f64], sigma: f64, filter: &WaveletFilter, j0: usize) -> Result<f64> {
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(Error::InvalidParameter {
            name: "sigma",
            reason: format!("need a finite sigma >= 0, got {sigma}"),
        });
    }
    let pyramid = dwt::forward(truth, filter, j0)?;
    let noise_var = sigma * sigma / truth.len() as f64;
    let mut total = 0.0;
    for level in pyramid.detail_levels() {
        total += pyramid
            .detail(level)
            .iter()
            .map(|c| (c * c).min(noise_var))
            .sum::<f64>();
    }
    Ok(total)
}

/// Besov sequence norm of a coefficient pyramid, a smoothness diagnostic:
/// ‖ξ‖_p + (Σ_j (2^(js) ‖θ_j‖_p)^q)^(1/q) with s = α + 1/2 − 1/p.
/// `p` and `q` may be `f64::INFINITY` for the max-norm versions.
pub fn besov_seq_norm(pyramid: &CoefficientPyramid, alpha: f64, p: f64, q: f64) -> Result<f64> {
    let index_err = |name: &'static str, v: f64| Error::InvalidParameter {
        name,
        reason: format!("need a value in [1, inf], got {v}"),
    };
    if p.is_nan() || p < 1.0 {
        return Err(index_err("p", p));
    }
    if q.is_nan() || q < 1.0 {
        return Err(index_err("q", q));
    }
    let inv_p = if p.is_infinite() { 0.0 } else { 1.0 / p };
    if alpha.is_nan() || alpha <= (inv_p - 0.5).max(0.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: format!("need alpha > max(1/p - 1/2, 0), got {alpha}"),
        });
    }
    let lp = |v: &[f64]| -> f64 {
        if p.is_infinite() {
            v.iter().fold(0.0, |m, c| m.max(c.abs()))
        } else {
            v.iter().map(|c| c.abs().powf(p)).sum::<f64>().powf(1.0 / p)
        }
    };
    let s = alpha + 0.5 - inv_p;
    let mut level_terms = Vec::new();
    for level in pyramid.detail_levels() {
        level_terms.push((level as f64 * s).exp2() * lp(pyramid.detail(level)));
    }
    let detail_part = if q.is_infinite() {
        level_terms.into_iter().fold(0.0, f64::max)
    } else {
        level_terms
            .into_iter()
            .map(|t| t.powf(q))
            .sum::<f64>()
            .powf(1.0 / q)
    };
    Ok(lp(pyramid.coarse()) + detail_part)
}

/// A full benchmark grid: which cells to run and how.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub functions: Vec<TestSignal>,
    pub sizes: Vec<usize>,
    pub snrs: Vec<f64>,
    pub methods: Vec<Method>,
    pub reps: usize,
    pub base_seed: u64,
    pub filter: WaveletFilter,
    pub j0: usize,
}

/// One (cell, replication, method) result.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub function: TestSignal,
    pub n: usize,
    pub snr: f64,
    pub method: Method,
    pub rep: usize,
    /// The replication's noise seed; identical across methods by design.
    pub seed: u64,
    pub ase: f64,
    /// Noise level the pipeline estimated for this replication.
    pub sigma_hat: f64,
}

/// Mean ASE of one method on one cell, with its ratio to the adaptive block
/// rule's mean on the same cell (NaN when that method is not in the grid).
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub function: TestSignal,
    pub n: usize,
    pub snr: f64,
    pub method: Method,
    pub mean_ase: f64,
    pub ratio_to_sureblock: f64,
}

/// A (cell, replication) that could not produce a record.
#[derive(Debug, Clone)]
pub struct CellFailure {
    pub function: TestSignal,
    pub n: usize,
    pub snr: f64,
    /// None when the failure precedes method dispatch (sampling / noise).
    pub method: Option<Method>,
    pub rep: usize,
    pub message: String,
}

/// Everything a grid run produces.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub records: Vec<BenchRecord>,
    pub summary: Vec<SummaryRow>,
    pub failures: Vec<CellFailure>,
}

/// Runs the full grid. Failures in individual cells are collected, not
/// fatal; configuration-level nonsense (empty lists, zero reps, non-dyadic
/// sizes) is an error.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let invalid = |name: &'static str, reason: String| Error::InvalidParameter { name, reason };
    if config.reps == 0 {
        return Err(invalid("reps", "need at least one replication".to_string()));
    }
    if config.functions.is_empty() || config.sizes.is_empty() || config.snrs.is_empty()
        || config.methods.is_empty()
    {
        return Err(invalid(
            "grid",
            "functions, sizes, snrs, and methods must all be nonempty".to_string(),
        ));
    }
    if let Some(&n) = config.sizes.iter().find(|n| !n.is_power_of_two() || **n < 2) {
        return Err(Error::NonDyadicLength { len: n });
    }

    // Canonical work order; parallel map + ordered collect keeps results in
    // exactly this order no matter the thread count.
    let mut items = Vec::new();
    for &function in &config.functions {
        for &n in &config.sizes {
            for &snr in &config.snrs {
                for rep in 0..config.reps {
                    items.push((function, n, snr, rep));
                }
            }
        }
    }

    let outcomes: Vec<(Vec<BenchRecord>, Vec<CellFailure>)> = items
        .par_iter()
        .map(|&(function, n, snr, rep)| run_cell_rep(config, function, n, snr, rep))
        .collect();

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (recs, fails) in outcomes {
        records.extend(recs);
        failures.extend(fails);
    }
    let summary = summarize(&records);
    Ok(ExperimentOutput { records, summary, failures })
}

fn run_cell_rep(
    config: &ExperimentConfig,
    function: TestSignal,
    n: usize,
    snr: f64,
    rep: usize,
) -> (Vec<BenchRecord>, Vec<CellFailure>) {
    let seed = seeding::derive_seed(
        config.base_seed,
        &[seeding::label_digest(function.as_str()), n as u64, snr.to_bits(), rep as u64],
    );
    let fail = |method: Option<Method>, message: String| CellFailure {
        function,
        n,
        snr,
        method,
        rep,
        message,
    };

    let truth = match sample_signal(function, n) {
        Ok(v) => v,
        Err(e) => return (Vec::new(), vec![fail(None, e.to_string())]),
    };
    let (y, _sigma) = match add_noise(&truth, snr, seed) {
        Ok(v) => v,
        Err(e) => return (Vec::new(), vec![fail(None, e.to_string())]),
    };

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for &method in &config.methods {
        let denoise_config = DenoiseConfig {
            filter: config.filter.clone(),
            j0: config.j0,
            method,
            sigma: SigmaSpec::Auto,
        };
        match pipeline::denoise(&y, &denoise_config)
            .and_then(|report| Ok((ase(&report.estimate, &truth)?, report.sigma_hat)))
        {
            Ok((ase, sigma_hat)) => records.push(BenchRecord {
                function,
                n,
                snr,
                method,
                rep,
                seed,
                ase,
                sigma_hat,
            }),
            Err(e) => failures.push(fail(Some(method), e.to_string())),
        }
    }
    (records, failures)
}

/// Mean ASE per (function, n, snr, method), sorted by that key, with the
/// ratio to the adaptive block rule's mean on the same cell.
fn summarize(records: &[BenchRecord]) -> Vec<SummaryRow> {
    type Key = (&'static str, usize, u64, &'static str);
    let mut sums: BTreeMap<Key, (f64, usize, TestSignal, f64, Method)> = BTreeMap::new();
    for r in records {
        let key = (r.function.as_str(), r.n, r.snr.to_bits(), r.method.as_str());
        let entry = sums.entry(key).or_insert((0.0, 0, r.function, r.snr, r.method));
        entry.0 += r.ase;
        entry.1 += 1;
    }
    let mean = |k: &Key| sums.get(k).map(|(s, c, ..)| s / *c as f64);
    sums.iter()
        .map(|(&(f_str, n, snr_bits, _), &(sum, count, function, snr, method))| {
            let mean_ase = sum / count as f64;
            let sb = mean(&(f_str, n, snr_bits, Method::SureBlock.as_str()));
            SummaryRow {
                function,
                n,
                snr,
                method,
                mean_ase,
                ratio_to_sureblock: sb.map_or(f64::NAN, |s| mean_ase / s),
            }
        })
        .collect()
}
