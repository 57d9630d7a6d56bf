use crate::{Error, Result};

/// Orthonormality tolerance for filter validation.
const ORTHO_TOL: f64 = 1e-10;

/// Symmlet 8 lowpass taps (16-tap least-asymmetric orthogonal filter),
/// normalized so the taps sum to sqrt(2). Derived by spectral factorization
/// of the order-8 Daubechies polynomial with the near-linear-phase root
/// selection; agrees with the standard published table.
const SYM8: [f64; 16] = [
    -0.0033824159510050028,
    -0.0005421323318000107,
    0.03169508781152599,
    0.007607487324976609,
    -0.14329423835127267,
    -0.061273359067811076,
    0.4813596512590534,
    0.777185751699628,
    0.36444189483617895,
    -0.0519458381078818,
    -0.027219029917103486,
    0.04913717967373029,
    0.0038087520138944896,
    -0.014952258337062199,
    -0.0003029205147241331,
    0.001889950332767689,
];

/// An orthogonal wavelet filter, stored as its lowpass taps.
///
/// The highpass filter is always the alternating-sign mirror of the lowpass,
/// so only the lowpass is kept. Construction validates the orthonormality
/// conditions (taps sum to sqrt(2), unit energy, vanishing even-shift
/// autocorrelation), so a value of this type is always a usable quadrature
/// mirror pair.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletFilter {
    name: String,
    lowpass: Vec<f64>,
}

impl WaveletFilter {
    /// Builds a filter from raw lowpass taps, checking orthonormality.
    pub fn from_taps(name: &str, lowpass: Vec<f64>) -> Result<Self> {
        validate_taps(&lowpass)?;
        Ok(WaveletFilter { name: name.to_string(), lowpass })
    }

    /// The 2-tap Haar filter.
    pub fn haar() -> Self {
        let a = std::f64::consts::FRAC_1_SQRT_2;
        WaveletFilter { name: "haar".to_string(), lowpass: vec![a, a] }
    }

    /// The 16-tap Symmlet 8 filter (least-asymmetric, 8 vanishing moments).
    pub fn sym8() -> Self {
        WaveletFilter { name: "sym8".to_string(), lowpass: SYM8.to_vec() }
    }

    /// Looks up a filter in the built-in bank by name.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "haar" => Ok(Self::haar()),
            "sym8" => Ok(Self::sym8()),
            _ => Err(Error::UnknownFilter { name: name.to_string() }),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lowpass(&self) -> &[f64] {
        &self.lowpass
    }

    /// Number of taps.
    pub fn len(&self) -> usize {
        self.lowpass.len()
    }

    pub fn is_empty(&self) -> bool {
        false // validated filters have at least two taps
    }

    /// The mirrored highpass taps: g[m] = (-1)^m h[L-1-m].
    pub fn highpass(&self) -> Vec<f64> {
        let l = self.lowpass.len();
        (0..l)
            .map(|m| {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                sign * self.lowpass[l - 1 - m]
            })
            .collect()
    }
}

fn validate_taps(h: &[f64]) -> Result<()> {
    let invalid = |reason: String| Error::InvalidParameter { name: "filter taps", reason };
    if h.len() < 2 || !h.len().is_multiple_of(2) {
        return Err(invalid(format!("need an even tap count >= 2, got {}", h.len())));
    }
    if h.iter().any(|t| !t.is_finite()) {
        return Err(invalid("taps must be finite".to_string()));
    }
    let sum: f64 = h.iter().sum();
    if (sum - std::f64::consts::SQRT_2).abs() > ORTHO_TOL {
        return Err(invalid(format!("taps sum to {sum}, expected sqrt(2)")));
    }
    let energy: f64 = h.iter().map(|t| t * t).sum();
    if (energy - 1.0).abs() > ORTHO_TOL {
        return Err(invalid(format!("tap energy is {energy}, expected 1")));
    }
    for k in 1..h.len() / 2 {
        let dot: f64 = (0..h.len() - 2 * k).map(|m| h[m] * h[m + 2 * k]).sum();
        if dot.abs() > ORTHO_TOL {
            return Err(invalid(format!("shift-{k} autocorrelation is {dot}, expected 0")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_filters_pass_their_own_validation() {
        for f in [WaveletFilter::haar(), WaveletFilter::sym8()] {
            WaveletFilter::from_taps(f.name(), f.lowpass().to_vec())
                .unwrap_or_else(|e| panic!("{} rejected: {e}", f.name()));
        }
    }

    #[test]
    fn sym8_has_sixteen_taps_and_haar_two() {
        assert_eq!(WaveletFilter::sym8().len(), 16);
        assert_eq!(WaveletFilter::haar().len(), 2);
    }

    #[test]
    fn haar_highpass_is_alternating_mirror() {
        let g = WaveletFilter::haar().highpass();
        let a = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(g, vec![a, -a]);
    }

    #[test]
    fn highpass_is_orthonormal_to_lowpass() {
        let f = WaveletFilter::sym8();
        let (h, g) = (f.lowpass(), f.highpass());
        let energy: f64 = g.iter().map(|t| t * t).sum();
        assert!((energy - 1.0).abs() < 1e-12);
        // <h, g shifted by any even lag> = 0 keeps the two channels orthogonal.
        for k in 0..h.len() / 2 {
            let dot: f64 = (0..h.len() - 2 * k).map(|m| h[m + 2 * k] * g[m]).sum();
            assert!(dot.abs() < 1e-12, "lag {k} cross-correlation {dot}");
        }
    }

    #[test]
    fn by_name_rejects_unknown_filters() {
        assert!(matches!(
            WaveletFilter::by_name("db4"),
            Err(Error::UnknownFilter { .. })
        ));
    }

    #[test]
    fn from_taps_rejects_broken_taps() {
        // Right sum, wrong energy.
        let bad = vec![std::f64::consts::SQRT_2, 0.0];
        assert!(WaveletFilter::from_taps("bad", bad).is_err());
        // Odd tap count.
        assert!(WaveletFilter::from_taps("odd", vec![1.0, 0.3, 0.1]).is_err());
    }
}
