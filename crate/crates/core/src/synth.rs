//! Synthetic signals with known scaling properties, used as estimator oracles.
//!
//! All random generators draw from [`seeded_rng`]: ChaCha8 keyed through
//! `SeedableRng::seed_from_u64`, so a given `(parameters, seed)` pair yields
//! the same series on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{self, Complex};
use crate::series::TimeSeries;

/// Deterministic generator used by every seeded operation in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic binomial multiplicative cascade parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CascadeSpec {
    a: f64,
    levels: u32,
}

impl CascadeSpec {
    pub fn new(a: f64, levels: u32) -> Result<Self> {
        if !(0.5..1.0).contains(&a) {
            return Err(Error::InvalidParameter(format!(
                "cascade multiplier a = {a} must lie in [0.5, 1)"
            )));
        }
        if !(1..=30).contains(&levels) {
            return Err(Error::InvalidParameter(format!(
                "cascade levels = {levels} must lie in 1..=30"
            )));
        }
        Ok(Self { a, levels })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn len(&self) -> usize {
        1 << self.levels
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Binomial cascade of length `2^levels` whose samples sum to one.
///
/// Sample `k` (0-based) carries weight `a` for every zero bit and `1 - a`
/// for every one bit in the `levels`-bit binary expansion of `k`, so the
/// series starts at `a^levels` and ends at `(1 - a)^levels`.
pub fn binomial_cascade(spec: CascadeSpec) -> TimeSeries {
    let levels = spec.levels;
    let a = spec.a;
    let samples = (0..spec.len() as u32)
        .map(|k| {
            let ones = k.count_ones() as i32;
            a.powi(levels as i32 - ones) * (1.0 - a).powi(ones)
        })
        .collect();
    TimeSeries::new(samples, 1.0).expect("cascade samples are finite and positive")
}

/// Closed-form generalized Hurst exponent of the binomial cascade:
/// `h(q) = 1/q - ln(a^q + (1-a)^q) / (q ln 2)`.
pub fn analytic_cascade_h(a: f64, q: f64) -> Result<f64> {
    if q == 0.0 {
        return Err(Error::QZero);
    }
    if !(0.5..1.0).contains(&a) {
        return Err(Error::InvalidParameter(format!(
            "cascade multiplier a = {a} must lie in [0.5, 1)"
        )));
    }
    let sum = a.powf(q) + (1.0 - a).powf(q);
    Ok(1.0 / q - sum.ln() / (q * std::f64::consts::LN_2))
}

/// I.i.d. standard Gaussian samples.
pub fn white_noise(n: usize, seed: u64) -> Result<TimeSeries> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "white noise length must be >= 1".into(),
        ));
    }
    let mut rng = seeded_rng(seed);
    let samples = (0..n)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect();
    TimeSeries::new(samples, 1.0)
}

/// Autocovariance of unit-variance fractional Gaussian noise at lag `k`.
pub fn fgn_autocovariance(k: usize, hurst: f64) -> f64 {
    let k = k as f64;
    let e = 2.0 * hurst;
    0.5 * ((k + 1.0).powf(e) - 2.0 * k.powf(e) + (k - 1.0).abs().powf(e))
}

/// Eigenvalues of the circulant matrix embedding the first `half + 1`
/// autocovariances.
fn circulant_eigenvalues(half: usize, hurst: f64) -> Vec<f64> {
    let m = 2 * half;
    let mut row = vec![0.0; m];
    for (j, r) in row.iter_mut().enumerate().take(half + 1) {
        *r = fgn_autocovariance(j, hurst);
    }
    for j in 1..half {
        row[m - j] = row[j];
    }
    fft::forward_real(&row).into_iter().map(|c| c.re).collect()
}

/// Fractional Gaussian noise by circulant embedding (Davies-Harte).
///
/// `n` must be a power of two. The embedding has length `2n`; if it is not
/// positive semidefinite the embedding length is doubled once before giving up.
pub fn fgn(n: usize, hurst: f64, seed: u64) -> Result<TimeSeries> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::NonPowerOfTwo(n));
    }
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "Hurst exponent {hurst} must lie in (0, 1)"
        )));
    }

    let mut half = n;
    let lambda = loop {
        let lambda = circulant_eigenvalues(half, hurst);
        let max = lambda.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let min = lambda.iter().copied().fold(f64::INFINITY, f64::min);
        if min >= -1e-10 * max {
            break lambda;
        }
        if half > n {
            return Err(Error::EmbeddingNotPsd {
                min_eigenvalue: min,
            });
        }
        half *= 2;
    };

    let m = lambda.len();
    let mut rng = seeded_rng(seed);
    let mut buf: Vec<Complex> = lambda
        .iter()
        .map(|&l| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex::new(re, im) * (l.max(0.0) / m as f64).sqrt()
        })
        .collect();
    fft::forward(&mut buf);
    TimeSeries::new(buf[..n].iter().map(|c| c.re).collect(), 1.0)
}

/// Uniform random permutation of the samples (Fisher-Yates).
pub fn shuffle(x: &TimeSeries, seed: u64) -> TimeSeries {
    let mut samples = x.samples().to_vec();
    samples.shuffle(&mut seeded_rng(seed));
    x.with_samples(samples)
        .expect("a permutation of a valid series is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cascade_small_cases() {
        let x = binomial_cascade(CascadeSpec::new(0.75, 2).unwrap());
        // a^2, a(1-a), a(1-a), (1-a)^2
        assert_eq!(x.samples(), &[0.5625, 0.1875, 0.1875, 0.0625]);
        let x = binomial_cascade(CascadeSpec::new(0.5, 3).unwrap());
        assert!(x.samples().iter().all(|&v| v == 0.125));
        assert_eq!(x.sample_rate(), 1.0);
    }

    #[test]
    fn cascade_sums_to_one() {
        let x = binomial_cascade(CascadeSpec::new(0.75, 16).unwrap());
        assert_eq!(x.len(), 65536);
        let sum: f64 = x.samples().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12, "{sum}");
    }

    #[test]
    fn cascade_spec_validation() {
        assert!(CascadeSpec::new(0.49, 4).is_err());
        assert!(CascadeSpec::new(1.0, 4).is_err());
        assert!(CascadeSpec::new(0.7, 0).is_err());
    }

    #[test]
    fn analytic_h_values() {
        for q in [-3.0, -0.5, 0.25, 2.0, 5.0] {
            assert!((analytic_cascade_h(0.5, q).unwrap() - 1.0).abs() < 1e-14);
        }
        // 0.5 - ln(0.625)/(2 ln 2)
        let h2 = analytic_cascade_h(0.75, 2.0).unwrap();
        assert!((h2 - 0.839_036).abs() < 1e-5, "{h2}");
        // -0.5 + ln(0.75^-2 + 0.25^-2)/(2 ln 2) = -0.5 + ln(17.777...)/1.386...
        let hm2 = analytic_cascade_h(0.75, -2.0).unwrap();
        assert!((hm2 - 1.576_002).abs() < 1e-5, "{hm2}");
        assert!(matches!(analytic_cascade_h(0.75, 0.0), Err(Error::QZero)));
    }

    #[test]
    fn analytic_h_nonincreasing_in_q() {
        for a in [0.55, 0.75, 0.9] {
            let hs: Vec<f64> = (-20..=20)
                .filter(|&i| i != 0)
                .map(|i| analytic_cascade_h(a, i as f64 * 0.25).unwrap())
                .collect();
            for w in hs.windows(2) {
                assert!(w[1] <= w[0] + 1e-12, "a={a}: {w:?}");
            }
        }
    }

    #[test]
    fn white_noise_determinism_and_moments() {
        assert_eq!(white_noise(4, 7).unwrap(), white_noise(4, 7).unwrap());
        assert_eq!(white_noise(1, 0).unwrap().len(), 1);
        let x = white_noise(65536, 1).unwrap();
        let n = x.len() as f64;
        let mean = x.samples().iter().sum::<f64>() / n;
        let var = x.samples().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        assert!(mean.abs() < 0.02, "{mean}");
        assert!((var - 1.0).abs() < 0.05, "{var}");
    }

    fn lag_correlation(x: &[f64], lag: usize) -> f64 {
        let n = x.len() as f64;
        let mean = x.iter().sum::<f64>() / n;
        let c0 = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let c1 = x
            .windows(lag + 1)
            .map(|w| (w[0] - mean) * (w[lag] - mean))
            .sum::<f64>()
            / n;
        c1 / c0
    }

    #[test]
    fn fgn_lag_one_correlation() {
        let x = fgn(65536, 0.5, 11).unwrap();
        assert!(lag_correlation(x.samples(), 1).abs() < 0.02);

        let expected = 2f64.powf(2.0 * 0.7 - 1.0) - 1.0;
        assert!((expected - 0.3195).abs() < 1e-4);
        let x = fgn(65536, 0.7, 11).unwrap();
        let r1 = lag_correlation(x.samples(), 1);
        assert!((r1 - expected).abs() < 0.03, "{r1}");
    }

    #[test]
    fn fgn_determinism_and_errors() {
        assert_eq!(fgn(256, 0.3, 5).unwrap(), fgn(256, 0.3, 5).unwrap());
        assert_ne!(fgn(256, 0.3, 5).unwrap(), fgn(256, 0.3, 6).unwrap());
        assert!(matches!(fgn(100, 0.7, 1), Err(Error::NonPowerOfTwo(100))));
        assert!(matches!(fgn(0, 0.7, 1), Err(Error::NonPowerOfTwo(0))));
        assert!(fgn(64, 1.0, 1).is_err());
        assert_eq!(fgn(1, 0.7, 1).unwrap().len(), 1);
    }

    #[test]
    fn fgn_embedding_is_psd_across_hurst() {
        for h in [0.05, 0.3, 0.5, 0.7, 0.95] {
            let l = circulant_eigenvalues(1024, h);
            let max = l.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            assert!(l.iter().all(|&v| v >= -1e-10 * max), "H={h}");
        }
    }

    #[test]
    fn shuffle_identity_on_singleton() {
        let x = TimeSeries::new(vec![3.5], 8000.0).unwrap();
        assert_eq!(shuffle(&x, 9), x);
    }

    proptest! {
        #[test]
        fn shuffle_preserves_multiset(v in prop::collection::vec(-10.0f64..10.0, 1..100), seed: u64) {
            let x = TimeSeries::new(v.clone(), 1.0).unwrap();
            let mut a = shuffle(&x, seed).into_samples();
            let mut b = v;
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            prop_assert_eq!(a, b);
        }

        #[test]
        fn cascade_positive_and_normalized(a in 0.5f64..0.999, levels in 1u32..14) {
            let x = binomial_cascade(CascadeSpec::new(a, levels).unwrap());
            prop_assert!(x.samples().iter().all(|&v| v > 0.0));
            let s: f64 = x.samples().iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
        }
    }
}
