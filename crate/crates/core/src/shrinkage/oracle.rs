//! Empirical oracle risks used as benchmarks for the adaptive rule.
//!
//! The block oracle knows θ and picks the best fixed (λ, L) in hindsight; we
//! estimate its risk by Monte Carlo over a deterministic λ grid. This is an
//! empirical surrogate for a population quantity — the population oracle
//! ranges over all λ ≥ 0, the surrogate over a finite grid — so callers get
//! a slightly optimistic-to-pessimistic bracket, not an exact value.

use rand::RngExt;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::seeding;
use crate::{Error, Result};

/// Replications per parallel work unit. Fixed (not derived from the thread
/// count) so the chunk boundaries, and therefore the summation order, are
/// identical no matter how many threads run.
const CHUNK: usize = 64;

/// Number of quantile-spaced and linearly spaced λ grid points per block size.
const GRID_QUANTILES: usize = 16;
const GRID_LINEAR: usize = 16;

/// Effectively infinite threshold: kills every block that any plausible draw
/// produces, capturing the oracle's "shrink everything away" option.
const KILL_LAMBDA: f64 = 1e12;

/// Deterministic λ grid for one block size: the search-range edges, quantiles
/// of the expected block sums ‖θ_b‖² + L_b, a linear sweep of the range, and
/// a kill-all point.
fn lambda_grid(theta: &[f64], block_size: usize) -> Vec<f64> {
    let d = theta.len() as f64;
    let lf = block_size as f64;
    let lower = (lf - 2.0).max(0.0);
    let mut expected: Vec<f64> = theta
        .chunks(block_size)
        .map(|b| b.iter().map(|v| v * v).sum::<f64>() + b.len() as f64)
        .collect();
    expected.sort_unstable_by(f64::total_cmp);
    let mut grid = Vec::with_capacity(GRID_QUANTILES + GRID_LINEAR + 3);
    grid.push(lower);
    for q in 0..GRID_QUANTILES {
        let idx = q * (expected.len() - 1) / GRID_QUANTILES.max(1);
        grid.push(expected[idx.min(expected.len() - 1)]);
    }
    let hi = (2.0 * lf * d.ln()).max(*expected.last().unwrap() * 2.0);
    for i in 0..=GRID_LINEAR {
        grid.push(lower + (hi - lower) * i as f64 / GRID_LINEAR as f64);
    }
    grid.push(KILL_LAMBDA);
    grid.sort_unstable_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Monte-Carlo estimate of the best per-coordinate risk any fixed (λ, L)
/// block rule achieves on `theta`, over block sizes 1..⌊√d⌋ and the λ grid.
///
/// Per replication, per block size, the block statistics (S_b², ⟨x_b, θ_b⟩,
/// ‖θ_b‖²) are computed once; each λ evaluation is then O(#blocks) via
/// ‖c·x_b − θ_b‖² = c²S_b² − 2c⟨x_b, θ_b⟩ + ‖θ_b‖². Replications are split
/// into fixed chunks accumulated in index order, so the result is identical
/// for any thread count.
pub fn block_oracle_risk(theta: &[f64], mc_reps: usize, seed: u64) -> Result<f64> {
    let d = theta.len();
    if d == 0 {
        return Err(Error::InvalidParameter {
            name: "theta",
            reason: "need at least one coordinate".to_string(),
        });
    }
    if mc_reps == 0 {
        return Err(Error::InvalidParameter {
            name: "mc_reps",
            reason: "need at least one replication".to_string(),
        });
    }

    let max_block = d.isqrt();
    let grids: Vec<Vec<f64>> = (1..=max_block).map(|l| lambda_grid(theta, l)).collect();
    let theta_norms: Vec<Vec<f64>> = (1..=max_block)
        .map(|l| {
            theta
                .chunks(l)
                .map(|b| b.iter().map(|v| v * v).sum())
                .collect()
        })
        .collect();
    let total_points: usize = grids.iter().map(Vec::len).sum();

    let num_chunks = mc_reps.div_ceil(CHUNK);
    let partials: Vec<Vec<f64>> = (0..num_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut acc = vec![0.0; total_points];
            let mut s2 = Vec::new();
            let mut dot = Vec::new();
            for rep in chunk * CHUNK..((chunk + 1) * CHUNK).min(mc_reps) {
                let mut rng = seeding::rng_from_seed(seeding::derive_seed(seed, &[rep as u64]));
                let x: Vec<f64> = theta
                    .iter()
                    .map(|t| t + rng.sample::<f64, _>(StandardNormal))
                    .collect();
                let mut offset = 0;
                for (li, grid) in grids.iter().enumerate() {
                    let l = li + 1;
                    let t2 = &theta_norms[li];
                    s2.clear();
                    dot.clear();
                    for (xb, tb) in x.chunks(l).zip(theta.chunks(l)) {
                        s2.push(xb.iter().map(|v| v * v).sum::<f64>());
                        dot.push(xb.iter().zip(tb).map(|(a, b)| a * b).sum::<f64>());
                    }
                    for (gi, &lambda) in grid.iter().enumerate() {
                        let mut loss = 0.0;
                        for b in 0..s2.len() {
                            let c = if s2[b] > lambda { 1.0 - lambda / s2[b] } else { 0.0 };
                            loss += c * c * s2[b] - 2.0 * c * dot[b] + t2[b];
                        }
                        acc[offset + gi] += loss;
                    }
                    offset += grid.len();
                }
            }
            acc
        })
        .collect();

    let mut totals = vec![0.0; total_points];
    for partial in &partials {
        for (t, p) in totals.iter_mut().zip(partial) {
            *t += p;
        }
    }
    let best = totals.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(best / (mc_reps as f64 * d as f64))
}

/// Risk of the best linear shrinker c·x in hindsight, per coordinate:
/// ‖θ‖² / (‖θ‖² + d).
pub fn linear_oracle_risk(theta: &[f64]) -> f64 {
    if theta.is_empty() {
        return 0.0;
    }
    let t2: f64 = theta.iter().map(|v| v * v).sum();
    t2 / (t2 + theta.len() as f64)
}
