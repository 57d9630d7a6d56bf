//! Periodized orthogonal discrete wavelet transform on dyadic grids.
//!
//! Signals of length n = 2^J are mapped to a coefficient pyramid by the
//! standard two-channel cascade with circular (periodic) boundary handling.
//! The input is scaled by n^(-1/2) on the way in and by n^(1/2) on the way
//! out, so for data sampled from a regression model with noise standard
//! deviation sigma the detail coefficients carry noise of standard deviation
//! sigma/sqrt(n) at every level. Periodization keeps the transform exactly
//! orthogonal at every dyadic length, even when the filter wraps around.

mod filter;

pub use filter::WaveletFilter;

use crate::{Error, Result};

/// Wavelet coefficients of a length-2^J signal, split by resolution level.
///
/// Holds the coarse scaling coefficients at level `j0` (2^j0 of them) and one
/// detail vector per level `j0 <= j < J`, where level `j` has 2^j entries.
/// The shape invariant is enforced at construction; mutable access hands out
/// slices, so the layout cannot be broken afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientPyramid {
    j0: usize,
    coarse: Vec<f64>,
    details: Vec<Vec<f64>>,
}

impl CoefficientPyramid {
    /// Assembles a pyramid from raw parts, validating the dyadic layout.
    pub fn from_parts(j0: usize, coarse: Vec<f64>, details: Vec<Vec<f64>>) -> Result<Self> {
        let malformed = |reason: String| Error::MalformedPyramid { reason };
        if j0 == 0 {
            return Err(malformed("coarse level j0 must be at least 1".to_string()));
        }
        if coarse.len() != 1 << j0 {
            return Err(malformed(format!(
                "coarse vector has {} entries, expected 2^{j0} = {}",
                coarse.len(),
                1usize << j0
            )));
        }
        if details.is_empty() {
            return Err(malformed("need at least one detail level".to_string()));
        }
        for (i, d) in details.iter().enumerate() {
            let expect = 1usize << (j0 + i);
            if d.len() != expect {
                return Err(malformed(format!(
                    "detail level {} has {} entries, expected {expect}",
                    j0 + i,
                    d.len()
                )));
            }
        }
        Ok(CoefficientPyramid { j0, coarse, details })
    }

    /// Coarsest level of the decomposition.
    pub fn j0(&self) -> usize {
        self.j0
    }

    /// J, where the underlying signal has length 2^J.
    pub fn finest_level(&self) -> usize {
        self.j0 + self.details.len()
    }

    /// Length of the signal this pyramid represents.
    pub fn n(&self) -> usize {
        1 << self.finest_level()
    }

    pub fn coarse(&self) -> &[f64] {
        &self.coarse
    }

    pub fn coarse_mut(&mut self) -> &mut [f64] {
        &mut self.coarse
    }

    /// Detail coefficients at level `j`, for `j0 <= j < J`.
    pub fn detail(&self, j: usize) -> &[f64] {
        self.check_level(j);
        &self.details[j - self.j0]
    }

    pub fn detail_mut(&mut self, j: usize) -> &mut [f64] {
        self.check_level(j);
        let i = j - self.j0;
        &mut self.details[i]
    }

    /// The detail levels, coarsest first.
    pub fn detail_levels(&self) -> std::ops::Range<usize> {
        self.j0..self.finest_level()
    }

    /// Sum of squares over every stored coefficient.
    pub fn energy(&self) -> f64 {
        let coarse: f64 = self.coarse.iter().map(|c| c * c).sum();
        let detail: f64 = self
            .details
            .iter()
            .flat_map(|d| d.iter())
            .map(|c| c * c)
            .sum();
        coarse + detail
    }

    fn check_level(&self, j: usize) {
        assert!(
            j >= self.j0 && j < self.finest_level(),
            "detail level {j} out of range {}..{}",
            self.j0,
            self.finest_level()
        );
    }
}

/// Decomposes `signal` down to coarse level `j0`.
///
/// Requires a length that is a power of two with `1 <= j0 < log2(n)`. The
/// output pyramid satisfies `energy(pyramid) = ||signal||^2 / n` exactly up
/// to rounding, by orthogonality.
pub fn forward(signal: &[f64], filter: &WaveletFilter, j0: usize) -> Result<CoefficientPyramid> {
    let n = signal.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::NonDyadicLength { len: n });
    }
    let big_j = n.trailing_zeros() as usize;
    if j0 < 1 || j0 >= big_j {
        return Err(Error::CoarseLevelOutOfRange { j0, max: big_j });
    }

    let h = filter.lowpass();
    let g = filter.highpass();
    let scale = 1.0 / (n as f64).sqrt();
    let mut approx: Vec<f64> = signal.iter().map(|y| y * scale).collect();

    // Cascade from the finest level down; details come out finest-first.
    let mut details_rev: Vec<Vec<f64>> = Vec::with_capacity(big_j - j0);
    while approx.len() > (1 << j0) {
        let (next, detail) = analyze_stage(&approx, h, &g);
        details_rev.push(detail);
        approx = next;
    }
    details_rev.reverse();
    CoefficientPyramid::from_parts(j0, approx, details_rev)
}

/// Reconstructs the signal a pyramid was computed from.
///
/// Exact inverse of [`forward`] up to floating-point rounding. Infallible:
/// the pyramid's construction-time validation is the only structural
/// requirement.
pub fn inverse(pyramid: &CoefficientPyramid, filter: &WaveletFilter) -> Vec<f64> {
    let h = filter.lowpass();
    let g = filter.highpass();
    let mut approx = pyramid.coarse().to_vec();
    for j in pyramid.detail_levels() {
        approx = synthesize_stage(&approx, pyramid.detail(j), h, &g);
    }
    let scale = (pyramid.n() as f64).sqrt();
    for a in &mut approx {
        *a *= scale;
    }
    approx
}

/// One analysis step: length-n input to two length-n/2 channels.
///
/// approx[k] = sum_m h[m] x[(2k+m) mod n], and likewise for the detail with
/// g. The index wraps, which is what makes the periodized transform square
/// and orthogonal.
fn analyze_stage(x: &[f64], h: &[f64], g: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let mask = n - 1; // n is a power of two
    let half = n / 2;
    let mut approx = vec![0.0; half];
    let mut detail = vec![0.0; half];
    for k in 0..half {
        let mut a = 0.0;
        let mut d = 0.0;
        for (m, (&hm, &gm)) in h.iter().zip(g.iter()).enumerate() {
            let xi = x[(2 * k + m) & mask];
            a += hm * xi;
            d += gm * xi;
        }
        approx[k] = a;
        detail[k] = d;
    }
    (approx, detail)
}

/// One synthesis step, the exact adjoint of [`analyze_stage`].
fn synthesize_stage(approx: &[f64], detail: &[f64], h: &[f64], g: &[f64]) -> Vec<f64> {
    let half = approx.len();
    let n = half * 2;
    let mask = n - 1;
    let mut out = vec![0.0; n];
    for k in 0..half {
        let (a, d) = (approx[k], detail[k]);
        for (m, (&hm, &gm)) in h.iter().zip(g.iter()).enumerate() {
            out[(2 * k + m) & mask] += a * hm + d * gm;
        }
    }
    out
}
