use crate::{Error, Result};

/// The catalog of test functions: four canonical benchmarks plus two extras
/// (a piecewise polynomial and a spike train) for coverage of smoothness
/// regimes the canonical four miss.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestSignal {
    /// Piecewise constant with 11 jumps.
    Blocks,
    /// Sum of 11 sharp rational bumps.
    Bumps,
    /// Smooth sinusoid with two jumps.
    HeaviSine,
    /// Chirp with frequency increasing toward t = 0.
    Doppler,
    /// Piecewise cubic with a jump at t = 1/2.
    PPoly,
    /// Five narrow Gaussian spikes.
    Spikes,
}

impl TestSignal {
    pub const ALL: [TestSignal; 6] = [
        TestSignal::Blocks,
        TestSignal::Bumps,
        TestSignal::HeaviSine,
        TestSignal::Doppler,
        TestSignal::PPoly,
        TestSignal::Spikes,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TestSignal::Blocks => "blocks",
            TestSignal::Bumps => "bumps",
            TestSignal::HeaviSine => "heavisine",
            TestSignal::Doppler => "doppler",
            TestSignal::PPoly => "ppoly",
            TestSignal::Spikes => "spikes",
        }
    }
}

impl std::fmt::Display for TestSignal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for TestSignal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TestSignal::ALL
            .into_iter()
            .find(|sig| sig.as_str() == s)
            .ok_or_else(|| Error::UnknownSignal { name: s.to_string() })
    }
}

/// Sign with sgn(0) = 0, which `f64::signum` does not provide.
fn sgn(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Knot positions shared by Blocks and Bumps.
const KNOTS: [f64; 11] = [0.10, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81];
const BLOCKS_HEIGHTS: [f64; 11] = [4.0, -5.0, 3.0, -4.0, 5.0, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2];
const BUMPS_HEIGHTS: [f64; 11] = [4.0, 5.0, 3.0, 4.0, 5.0, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2];
const BUMPS_WIDTHS: [f64; 11] =
    [0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005];

const SPIKE_CENTERS: [f64; 5] = [0.2, 0.35, 0.5, 0.65, 0.8];
const SPIKE_HEIGHTS: [f64; 5] = [6.0, 4.0, 5.0, 4.5, 5.5];
const SPIKE_WIDTHS: [f64; 5] = [0.005, 0.008, 0.004, 0.006, 0.005];

fn blocks(t: f64) -> f64 {
    KNOTS
        .iter()
        .zip(BLOCKS_HEIGHTS)
        .map(|(&knot, h)| h * (1.0 + sgn(t - knot)) / 2.0)
        .sum()
}

fn bumps(t: f64) -> f64 {
    KNOTS
        .iter()
        .zip(BUMPS_HEIGHTS.iter().zip(BUMPS_WIDTHS))
        .map(|(&knot, (&h, w))| h * (1.0 + ((t - knot) / w).abs()).powi(-4))
        .sum()
}

fn heavisine(t: f64) -> f64 {
    4.0 * (4.0 * std::f64::consts::PI * t).sin() - sgn(t - 0.3) - sgn(0.72 - t)
}

fn doppler(t: f64) -> f64 {
    (t * (1.0 - t)).sqrt() * (2.0 * std::f64::consts::PI * 1.05 / (t + 0.05)).sin()
}

fn ppoly(t: f64) -> f64 {
    if t < 0.5 {
        4.0 * t * t * (3.0 - 4.0 * t)
    } else if t < 0.75 {
        4.0 / 3.0 * t * (4.0 * t * t - 10.0 * t + 7.0) - 1.5
    } else {
        16.0 / 3.0 * t * (t - 1.0) * (t - 1.0)
    }
}

fn spikes(t: f64) -> f64 {
    SPIKE_CENTERS
        .iter()
        .zip(SPIKE_HEIGHTS.iter().zip(SPIKE_WIDTHS))
        .map(|(&c, (&h, w))| {
            let u = (t - c) / w;
            h * (-u * u).exp()
        })
        .sum()
}

/// Evaluates a catalog signal on the dyadic grid t_i = i/n, i = 1..n.
pub fn sample_signal(signal: TestSignal, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::NonDyadicLength { len: n });
    }
    let f: fn(f64) -> f64 = match signal {
        TestSignal::Blocks => blocks,
        TestSignal::Bumps => bumps,
        TestSignal::HeaviSine => heavisine,
        TestSignal::Doppler => doppler,
        TestSignal::PPoly => ppoly,
        TestSignal::Spikes => spikes,
    };
    Ok((1..=n).map(|i| f(i as f64 / n as f64)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dwt::{self, WaveletFilter};

    #[test]
    fn names_round_trip() {
        for sig in TestSignal::ALL {
            assert_eq!(sig.as_str().parse::<TestSignal>().unwrap(), sig);
        }
        assert!("brownian".parse::<TestSignal>().is_err());
    }

    #[test]
    fn rejects_non_dyadic_lengths() {
        assert!(sample_signal(TestSignal::Blocks, 0).is_err());
        assert!(sample_signal(TestSignal::Blocks, 1).is_err());
        assert!(sample_signal(TestSignal::Blocks, 100).is_err());
        assert!(sample_signal(TestSignal::Blocks, 128).is_ok());
    }

    #[test]
    fn doppler_and_heavisine_hand_values() {
        // Midpoint evaluations worked out by hand from the closed forms.
        assert!((doppler(0.5) - (-0.2703204087277996)).abs() < 1e-9);
        assert!((heavisine(0.5) - (-2.0)).abs() < 1e-9);
    }

    #[test]
    fn grid_starts_one_step_in_and_ends_at_one() {
        let n = 64;
        let vals = sample_signal(TestSignal::Doppler, n).unwrap();
        assert_eq!(vals.len(), n);
        assert!((vals[0] - doppler(1.0 / n as f64)).abs() < 1e-15);
        // t = 1 annihilates the envelope sqrt(t(1-t)).
        assert_eq!(vals[n - 1], 0.0);
    }

    #[test]
    fn blocks_is_sparse_under_a_sixteen_tap_filter() {
        // Piecewise-constant signals excite fine-scale coefficients only near
        // jumps: with 11 jumps and a 16-tap filter, at least 90% of the
        // finest-level coefficients of the noiseless signal must vanish.
        let y = sample_signal(TestSignal::Blocks, 2048).unwrap();
        let pyr = dwt::forward(&y, &WaveletFilter::sym8(), 3).unwrap();
        let finest = pyr.detail(pyr.finest_level() - 1);
        let tiny = finest.iter().filter(|c| c.abs() < 1e-6).count();
        assert!(
            tiny as f64 >= 0.90 * finest.len() as f64,
            "{tiny} of {} below 1e-6",
            finest.len()
        );
    }

    #[test]
    fn bumps_is_nonnegative_with_tall_peaks() {
        let vals = sample_signal(TestSignal::Bumps, 1024).unwrap();
        assert!(vals.iter().all(|v| *v >= 0.0));
        let max = vals.iter().cloned().fold(0.0, f64::max);
        assert!(max > 4.0, "max {max}");
    }

    #[test]
    fn heavisine_jumps_at_the_discontinuities() {
        let n = 4096;
        let vals = sample_signal(TestSignal::HeaviSine, n).unwrap();
        // Neither 0.3·4096 nor 0.72·4096 is an integer, so adjacent samples
        // straddle each discontinuity and see the full jump (−2 at t = 0.3,
        // +2 at t = 0.72) plus a sine drift of at most 16π/n ≈ 0.012.
        let jump_across = |t: f64| {
            let i = (t * n as f64).ceil() as usize; // 1-based grid index just past t
            vals[i - 1] - vals[i - 2]
        };
        let at_030 = jump_across(0.3);
        assert!((at_030 + 2.0).abs() < 0.05, "jump across 0.3: {at_030}");
        let at_072 = jump_across(0.72);
        assert!((at_072 - 2.0).abs() < 0.05, "jump across 0.72: {at_072}");
    }

    #[test]
    fn doppler_oscillates_fast_near_the_origin() {
        let vals = sample_signal(TestSignal::Doppler, 1024).unwrap();
        let sign_changes = |w: &[f64]| w.windows(2).filter(|p| p[0].signum() != p[1].signum()).count();
        // The phase 2π·1.05/(t + 0.05) sweeps from 2π·21 down to 2π, so the
        // signal crosses zero about 40 times, the bulk of them before t = ¼.
        let total = sign_changes(&vals);
        assert!((35..=45).contains(&total), "{total} sign changes");
        let near_origin = sign_changes(&vals[..256]);
        assert!(near_origin >= 30, "{near_origin} sign changes in the first quarter");
        assert!(vals.iter().all(|v| v.abs() <= 0.5 + 1e-12));
    }

    #[test]
    fn ppoly_has_a_jump_at_one_half_only() {
        // Continuous at 0.75, discontinuous at 0.5.
        assert!((ppoly(0.75 - 1e-9) - ppoly(0.75)).abs() < 1e-6);
        assert!((ppoly(0.5 - 1e-9) - ppoly(0.5)).abs() > 0.4);
    }

    #[test]
    fn spikes_decay_to_near_zero_between_peaks() {
        let vals = sample_signal(TestSignal::Spikes, 1024).unwrap();
        let max = vals.iter().cloned().fold(0.0, f64::max);
        assert!(max > 5.0, "max {max}");
        // Far from every center the signal is essentially zero.
        let idx = (0.1 * 1024.0) as usize;
        assert!(vals[idx].abs() < 1e-12);
    }
}
