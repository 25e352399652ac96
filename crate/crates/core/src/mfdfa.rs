//! Multifractal detrended fluctuation analysis.
//!
//! The signal is integrated into a profile, cut into non-overlapping windows
//! of each scale `s`, detrended per window with a least-squares polynomial,
//! and the window variances are combined into q-order fluctuation functions
//! `F_q(s)`. The generalized Hurst exponent `h(q)` is the log-log slope of
//! `F_q(s)` against `s`.

use serde::{Deserialize, Serialize};

use crate::config::{MfdfaConfig, QSpec, ScaleSpec};
use crate::error::{Error, Result};
use crate::regression::linear_fit;
use crate::series::TimeSeries;
use crate::spectrum::{self, Method, MultifractalResult, Surface};

/// Cumulative sum of the mean-removed signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile(Vec<f64>);

impl Profile {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `Y(i) = sum_{k <= i} (x_k - mean(x))`.
///
/// A constant input yields an exactly zero profile.
pub fn profile(x: &TimeSeries) -> Result<Profile> {
    let xs = x.samples();
    if xs.len() < 2 {
        return Err(Error::TooShort {
            len: xs.len(),
            min: 2,
        });
    }
    if xs.iter().all(|&v| v == xs[0]) {
        return Ok(Profile(vec![0.0; xs.len()]));
    }
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let mut acc = 0.0;
    Ok(Profile(
        xs.iter()
            .map(|&v| {
                acc += v - mean;
                acc
            })
            .collect(),
    ))
}

/// Number of complete windows of length `s` in a series of length `n`.
pub fn segment_count(n: usize, s: usize) -> usize {
    n / s
}

/// Strictly increasing window sizes, in samples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleGrid(Vec<usize>);

impl ScaleGrid {
    pub fn new(scales: Vec<usize>) -> Result<Self> {
        if scales.is_empty() {
            return Err(Error::InvalidGrid("empty scale grid".into()));
        }
        if scales[0] == 0 || scales.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid(
                "scales must be positive and strictly increasing".into(),
            ));
        }
        Ok(Self(scales))
    }

    /// `count` log-spaced values between `min` and `max`, rounded, with
    /// duplicates removed.
    pub fn log_spaced(min: usize, max: usize, count: usize) -> Result<Self> {
        if min == 0 || max < min || count == 0 {
            return Err(Error::InvalidGrid(format!(
                "cannot space {count} scales over [{min}, {max}]"
            )));
        }
        if count == 1 || max == min {
            return Self::new(vec![min]);
        }
        let (lo, hi) = ((min as f64).ln(), (max as f64).ln());
        let step = (hi - lo) / (count - 1) as f64;
        let mut scales: Vec<usize> = (0..count)
            .map(|i| {
                let s = (lo + step * i as f64).exp().round() as usize;
                s.clamp(min, max)
            })
            .collect();
        scales.dedup();
        Self::new(scales)
    }

    /// Default MFDFA grid for a series of length `n`: upper bound `n / 4`.
    pub fn for_mfdfa(n: usize, spec: &ScaleSpec, order: usize) -> Result<Self> {
        let max = spec.max.unwrap_or(n / 4);
        let grid = Self::log_spaced(spec.min, max, spec.count)?;
        grid.check_mfdfa(n, order)?;
        Ok(grid)
    }

    /// Every window must overdetermine the detrending polynomial and every
    /// scale must leave at least four windows.
    pub fn check_mfdfa(&self, n: usize, order: usize) -> Result<()> {
        if self.0[0] < order + 2 {
            return Err(Error::InvalidGrid(format!(
                "smallest scale {} must be at least order + 2 = {}",
                self.0[0],
                order + 2
            )));
        }
        let largest = *self.0.last().unwrap();
        if largest > n / 4 {
            return Err(Error::InvalidGrid(format!(
                "largest scale {largest} exceeds N/4 = {} for N = {n}",
                n / 4
            )));
        }
        Ok(())
    }

    pub fn scales(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Strictly increasing moment orders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QGrid(Vec<f64>);

impl QGrid {
    pub fn new(qs: Vec<f64>) -> Result<Self> {
        if qs.is_empty() || qs.iter().any(|q| !q.is_finite()) {
            return Err(Error::InvalidGrid(
                "q grid must be nonempty and finite".into(),
            ));
        }
        if qs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid(
                "q grid must be strictly increasing".into(),
            ));
        }
        Ok(Self(qs))
    }

    /// `min + i * step` up to `max`; values within rounding of zero are
    /// snapped to exactly zero.
    pub fn from_spec(spec: &QSpec) -> Result<Self> {
        spec.validate()?;
        let count = ((spec.max - spec.min) / spec.step + 1e-9).floor() as usize + 1;
        let qs = (0..count)
            .map(|i| {
                let q = spec.min + spec.step * i as f64;
                if q.abs() < spec.step * 1e-9 {
                    0.0
                } else {
                    q
                }
            })
            .collect();
        Self::new(qs)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Orthonormal polynomial basis (degrees `0..=order`) sampled on a window of
/// `s` points, built by twice-iterated modified Gram-Schmidt.
struct DetrendBasis {
    vectors: Vec<Vec<f64>>,
}

impl DetrendBasis {
    fn new(s: usize, order: usize) -> Result<Self> {
        if s < order + 1 {
            return Err(Error::DegenerateFit(s));
        }
        let center = (s as f64 - 1.0) / 2.0;
        let half = (center).max(1.0);
        let t: Vec<f64> = (0..s).map(|i| (i as f64 - center) / half).collect();
        let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(order + 1);
        for degree in 0..=order {
            let mut v: Vec<f64> = t.iter().map(|&x| x.powi(degree as i32)).collect();
            for _ in 0..2 {
                for u in &vectors {
                    let d = dot(&v, u);
                    v.iter_mut().zip(u).for_each(|(a, b)| *a -= d * b);
                }
            }
            let norm = dot(&v, &v).sqrt();
            if !(norm > 1e-10) {
                return Err(Error::DegenerateFit(s));
            }
            v.iter_mut().for_each(|a| *a /= norm);
            vectors.push(v);
        }
        Ok(Self { vectors })
    }

    /// Mean squared residual of `y` after removing its projection.
    fn residual_variance(&self, y: &[f64], scratch: &mut Vec<f64>) -> f64 {
        scratch.clear();
        scratch.extend_from_slice(y);
        for u in &self.vectors {
            let d = dot(scratch, u);
            scratch.iter_mut().zip(u).for_each(|(a, b)| *a -= d * b);
        }
        dot(scratch, scratch) / y.len() as f64
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Detrended variance `F^2(s, v)` of window `v` (1-based, forward order).
pub fn local_fluctuation(p: &Profile, s: usize, v: usize, order: usize) -> Result<f64> {
    let n = p.len();
    if s < order + 2 || s > n {
        return Err(Error::InvalidGrid(format!(
            "scale {s} is invalid for order {order} and length {n}"
        )));
    }
    let ns = segment_count(n, s);
    if v == 0 || v > ns {
        return Err(Error::InvalidParameter(format!(
            "segment {v} out of range 1..={ns}"
        )));
    }
    let basis = DetrendBasis::new(s, order)?;
    let start = (v - 1) * s;
    Ok(basis.residual_variance(&p.values()[start..start + s], &mut Vec::with_capacity(s)))
}

/// Window variances for every segment at scale `s`: forward segments first,
/// then (if requested) the backward segments anchored at the series end.
fn window_variances(p: &Profile, s: usize, order: usize, bidirectional: bool) -> Result<Vec<f64>> {
    let basis = DetrendBasis::new(s, order)?;
    let y = p.values();
    let n = y.len();
    let ns = segment_count(n, s);
    let mut scratch = Vec::with_capacity(s);
    let mut out = Vec::with_capacity(if bidirectional { 2 * ns } else { ns });
    for v in 0..ns {
        out.push(basis.residual_variance(&y[v * s..(v + 1) * s], &mut scratch));
    }
    if bidirectional {
        for v in 0..ns {
            let end = n - v * s;
            out.push(basis.residual_variance(&y[end - s..end], &mut scratch));
        }
    }
    Ok(out)
}

/// `F_q(s)` over a `(q, s)` grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluctuationSurface {
    pub qs: QGrid,
    pub scales: ScaleGrid,
    /// `values[i][j] = F_{q_i}(s_j)`.
    pub values: Vec<Vec<f64>>,
}

/// q-order fluctuation from a set of window variances. `q = 0` uses the
/// logarithmic mean, the limit of the power mean.
fn q_order_fluctuation(variances: &[f64], log_variances: &[f64], q: f64) -> f64 {
    let n = variances.len() as f64;
    if q == 0.0 {
        return (log_variances.iter().sum::<f64>() / (2.0 * n)).exp();
    }
    // log-sum-exp keeps large |q| away from overflow on widely spread data.
    let half_q = q / 2.0;
    let max = log_variances
        .iter()
        .map(|&l| half_q * l)
        .fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = log_variances
        .iter()
        .map(|&l| (half_q * l - max).exp())
        .sum();
    ((max + (sum / n).ln()) / q).exp()
}

pub fn fluctuation_function(
    p: &Profile,
    sg: &ScaleGrid,
    qg: &QGrid,
    order: usize,
) -> Result<FluctuationSurface> {
    fluctuation_function_with(p, sg, qg, order, false)
}

/// As [`fluctuation_function`], optionally adding backward segments.
pub fn fluctuation_function_with(
    p: &Profile,
    sg: &ScaleGrid,
    qg: &QGrid,
    order: usize,
    bidirectional: bool,
) -> Result<FluctuationSurface> {
    sg.check_mfdfa(p.len(), order)?;
    let needs_log_safety = qg.values().iter().any(|&q| q <= 0.0);
    let mut values = vec![Vec::with_capacity(sg.len()); qg.len()];
    for &s in sg.scales() {
        let variances = window_variances(p, s, order, bidirectional)?;
        let zero = variances.iter().position(|&f| f == 0.0);
        if let Some(idx) = zero {
            if needs_log_safety || variances.iter().all(|&f| f == 0.0) {
                let ns = segment_count(p.len(), s);
                return Err(Error::ZeroLocalFluctuation {
                    scale: s,
                    segment: idx % ns + 1,
                });
            }
        }
        let logs: Vec<f64> = variances.iter().map(|f| f.ln()).collect();
        for (row, &q) in values.iter_mut().zip(qg.values()) {
            let fq = if q > 0.0 && zero.is_some() {
                // Zero windows contribute nothing to a positive moment.
                let n = variances.len() as f64;
                (variances.iter().map(|f| f.powf(q / 2.0)).sum::<f64>() / n).powf(1.0 / q)
            } else {
                q_order_fluctuation(&variances, &logs, q)
            };
            row.push(fq);
        }
    }
    Ok(FluctuationSurface {
        qs: qg.clone(),
        scales: sg.clone(),
        values,
    })
}

/// Generalized Hurst exponents with the goodness of each log-log fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HurstSpectrum {
    pub qs: Vec<f64>,
    pub h: Vec<f64>,
    pub r_squared: Vec<f64>,
}

/// Slope of `ln F_q(s)` against `ln s` for every q.
pub fn hurst_exponents(surface: &FluctuationSurface) -> Result<HurstSpectrum> {
    let scales = surface.scales.scales();
    if scales.len() < 4 {
        return Err(Error::InvalidGrid(format!(
            "{} scales; at least 4 are needed for a scaling fit",
            scales.len()
        )));
    }
    let ln_s: Vec<f64> = scales.iter().map(|&s| (s as f64).ln()).collect();
    let mut h = Vec::with_capacity(surface.qs.len());
    let mut r2 = Vec::with_capacity(surface.qs.len());
    for row in &surface.values {
        let ln_f: Vec<f64> = row.iter().map(|f| f.ln()).collect();
        if ln_f.iter().any(|v| !v.is_finite()) {
            return Err(Error::ZeroLocalFluctuation {
                scale: scales[row.iter().position(|f| !(f.ln().is_finite())).unwrap()],
                segment: 1,
            });
        }
        let fit = linear_fit(&ln_s, &ln_f).expect("scales are distinct");
        h.push(fit.slope);
        r2.push(fit.r_squared);
    }
    Ok(HurstSpectrum {
        qs: surface.qs.values().to_vec(),
        h,
        r_squared: r2,
    })
}

/// Full MFDFA pipeline: profile, fluctuation surface, `h(q)`, `tau(q)`,
/// Legendre spectrum and quadratic fit.
pub fn mfdfa_analyze(x: &TimeSeries, cfg: &MfdfaConfig) -> Result<MultifractalResult> {
    cfg.validate()?;
    let n = x.len();
    let min_len = 4 * cfg.scales.min;
    if n < min_len {
        return Err(Error::TooShort {
            len: n,
            min: min_len,
        });
    }
    let p = profile(x)?;
    if p.values().iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroLocalFluctuation {
            scale: cfg.scales.min,
            segment: 1,
        });
    }
    let sg = ScaleGrid::for_mfdfa(n, &cfg.scales, cfg.order)?;
    let qg = QGrid::from_spec(&cfg.q)?;
    let surface = fluctuation_function_with(&p, &sg, &qg, cfg.order, cfg.bidirectional)?;
    let hurst = hurst_exponents(&surface)?;
    let tau = spectrum::tau_from_h(&hurst);
    let spec = spectrum::legendre(&tau, Method::Mfdfa)?;
    let fit = spectrum::quadratic_fit(&spec)?;
    Ok(MultifractalResult {
        method: Method::Mfdfa,
        surface: Surface::Fluctuation(surface),
        hurst: Some(hurst),
        tau,
        spectrum: spec,
        fit,
        low_confidence_q: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{analytic_cascade_h, binomial_cascade, white_noise, CascadeSpec};
    use proptest::prelude::*;

    fn ts(v: &[f64]) -> TimeSeries {
        TimeSeries::new(v.to_vec(), 1.0).unwrap()
    }

    /// Independent running-sum oracle for the profile.
    fn naive_profile(x: &[f64]) -> Vec<f64> {
        let mean = x.iter().sum::<f64>() / x.len() as f64;
        (0..x.len())
            .map(|i| x[..=i].iter().map(|v| v - mean).sum())
            .collect()
    }

    #[test]
    fn profile_examples() {
        assert_eq!(profile(&ts(&[0.1, 0.1, 0.1])).unwrap().values(), &[0.0; 3]);
        assert_eq!(
            profile(&ts(&[1.0, -1.0, 1.0, -1.0])).unwrap().values(),
            &[1.0, 0.0, 1.0, 0.0]
        );
        let p = profile(&ts(&[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(p.values(), &[-1.0, -1.0, 0.0]);
        assert_eq!(naive_profile(&[1.0, 2.0, 3.0]), vec![-1.0, -1.0, 0.0]);
        assert!(matches!(profile(&ts(&[1.0])), Err(Error::TooShort { .. })));
    }

    #[test]
    fn segment_count_examples() {
        assert_eq!(segment_count(1000, 100), 10);
        assert_eq!(segment_count(1000, 333), 3);
        assert_eq!(segment_count(7, 7), 1);
    }

    #[test]
    fn linear_segment_has_no_fluctuation() {
        let y: Vec<f64> = (0..64).map(|i| 3.0 + 2.0 * i as f64).collect();
        let p = Profile(y.clone());
        let f2 = local_fluctuation(&p, 32, 2, 1).unwrap();
        let energy = y[32..].iter().map(|v| v * v).sum::<f64>() / 32.0;
        assert!(f2 / energy < 1e-20, "{f2}");
    }

    #[test]
    fn constant_detrend_of_alternating_segment() {
        let p = Profile(vec![0.0, 1.0, 0.0, 1.0]);
        let f2 = local_fluctuation(&p, 4, 1, 0).unwrap();
        assert!((f2 - 0.25).abs() < 1e-15);
    }

    #[test]
    fn local_fluctuation_preconditions() {
        let p = Profile(vec![0.0; 10]);
        assert!(local_fluctuation(&p, 2, 1, 1).is_err());
        assert!(local_fluctuation(&p, 5, 3, 1).is_err());
        assert!(local_fluctuation(&p, 5, 0, 1).is_err());
    }

    #[test]
    fn q_order_of_identical_windows() {
        let v = vec![0.09; 7];
        let l: Vec<f64> = v.iter().map(|x: &f64| x.ln()).collect();
        for q in [-5.0, -1.0, 0.0, 0.5, 2.0, 5.0] {
            let f = q_order_fluctuation(&v, &l, q);
            assert!((f - 0.3).abs() < 1e-14, "q={q}: {f}");
        }
    }

    #[test]
    fn exact_power_law_surface_gives_exact_h() {
        let sg = ScaleGrid::new(vec![16, 32, 50, 64, 100, 128]).unwrap();
        let qg = QGrid::new(vec![-2.0, 0.0, 3.0]).unwrap();
        let values = qg
            .values()
            .iter()
            .map(|_| sg.scales().iter().map(|&s| (s as f64).powf(0.7)).collect())
            .collect();
        let surf = FluctuationSurface {
            qs: qg,
            scales: sg,
            values,
        };
        let h = hurst_exponents(&surf).unwrap();
        for v in h.h {
            assert!((v - 0.7).abs() < 1e-12);
        }
    }

    #[test]
    fn too_few_scales_rejected() {
        let surf = FluctuationSurface {
            qs: QGrid::new(vec![2.0]).unwrap(),
            scales: ScaleGrid::new(vec![4, 8, 16]).unwrap(),
            values: vec![vec![1.0, 2.0, 3.0]],
        };
        assert!(hurst_exponents(&surf).is_err());
    }

    #[test]
    fn grids() {
        let g = ScaleGrid::log_spaced(16, 16384, 20).unwrap();
        assert_eq!(g.scales()[0], 16);
        assert_eq!(*g.scales().last().unwrap(), 16384);
        assert_eq!(g.len(), 20);
        let q = QGrid::from_spec(&QSpec {
            min: -5.0,
            max: 5.0,
            step: 0.25,
        })
        .unwrap();
        assert_eq!(q.len(), 41);
        assert_eq!(q.values()[20], 0.0);
        assert!(ScaleGrid::new(vec![8, 8]).is_err());
        assert!(ScaleGrid::new(vec![8, 16])
            .unwrap()
            .check_mfdfa(40, 1)
            .is_err());
        assert!(ScaleGrid::new(vec![2, 8])
            .unwrap()
            .check_mfdfa(64, 1)
            .is_err());
        assert!(QGrid::new(vec![1.0, 0.5]).is_err());
    }

    #[test]
    fn constant_signal_rejected() {
        let x = ts(&vec![0.3; 1024]);
        assert!(matches!(
            mfdfa_analyze(&x, &MfdfaConfig::default()),
            Err(Error::ZeroLocalFluctuation { .. })
        ));
    }

    #[test]
    fn zero_window_reports_location() {
        // Profile flat on the first window only.
        let mut y = vec![0.0; 64];
        for (i, v) in y.iter_mut().enumerate().skip(16) {
            *v = ((i * 37) % 11) as f64;
        }
        let p = Profile(y);
        let sg = ScaleGrid::new(vec![16]).unwrap();
        let err = fluctuation_function(&p, &sg, &QGrid::new(vec![-1.0, 2.0]).unwrap(), 1);
        assert!(matches!(
            err,
            Err(Error::ZeroLocalFluctuation {
                scale: 16,
                segment: 1
            })
        ));
        let ok = fluctuation_function(&p, &sg, &QGrid::new(vec![2.0]).unwrap(), 1).unwrap();
        assert!(ok.values[0][0] > 0.0);
    }

    #[test]
    fn cascade_slopes_match_analytic_h() {
        let x = binomial_cascade(CascadeSpec::new(0.75, 16).unwrap());
        let p = profile(&x).unwrap();
        let sg = ScaleGrid::for_mfdfa(x.len(), &MfdfaConfig::default().scales, 1).unwrap();
        let qg = QGrid::new(vec![-4.0, -2.0, 2.0, 4.0]).unwrap();
        let h = hurst_exponents(&fluctuation_function(&p, &sg, &qg, 1).unwrap()).unwrap();
        for (q, est) in h.qs.iter().zip(&h.h) {
            let exact = analytic_cascade_h(0.75, *q).unwrap();
            assert!((est - exact).abs() <= 0.05, "q={q}: {est} vs {exact}");
        }
    }

    #[test]
    fn bidirectional_mode_uses_tail() {
        let x = white_noise(1000, 4).unwrap();
        let p = profile(&x).unwrap();
        let sg = ScaleGrid::new(vec![16, 30, 60, 120, 240]).unwrap();
        let qg = QGrid::new(vec![2.0]).unwrap();
        let fwd = fluctuation_function_with(&p, &sg, &qg, 1, false).unwrap();
        let both = fluctuation_function_with(&p, &sg, &qg, 1, true).unwrap();
        // 1000 is not a multiple of 30, so the backward windows differ.
        assert_ne!(fwd.values[0][1], both.values[0][1]);
        assert!(both.values[0].iter().all(|&v| v > 0.0));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn profile_matches_running_sum(v in prop::collection::vec(-100.0f64..100.0, 2..80)) {
            let p = profile(&ts(&v)).unwrap();
            let naive = naive_profile(&v);
            let scale = v.iter().fold(1.0_f64, |m, x| m.max(x.abs())) * v.len() as f64;
            for (a, b) in p.values().iter().zip(&naive) {
                prop_assert!((a - b).abs() <= 1e-12 * scale);
            }
            prop_assert!(p.values().last().unwrap().abs() <= 1e-13 * scale);
        }

        #[test]
        fn higher_order_never_fits_worse(v in prop::collection::vec(-10.0f64..10.0, 8..40)) {
            let p = Profile(v.clone());
            let s = v.len();
            let f1 = local_fluctuation(&p, s, 1, 1).unwrap();
            let f2 = local_fluctuation(&p, s, 1, 2).unwrap();
            prop_assert!(f2 <= f1 * (1.0 + 1e-12) + 1e-24);
        }

        #[test]
        fn surface_nondecreasing_in_q_and_scale_invariant(seed in 0u64..1000, c in 0.01f64..100.0) {
            let x = white_noise(2048, seed).unwrap();
            let p = profile(&x).unwrap();
            let sg = ScaleGrid::log_spaced(16, 512, 8).unwrap();
            let qg = QGrid::from_spec(&QSpec { min: -5.0, max: 5.0, step: 0.5 }).unwrap();
            let surf = fluctuation_function(&p, &sg, &qg, 1).unwrap();
            for j in 0..sg.len() {
                for i in 1..qg.len() {
                    prop_assert!(surf.values[i][j] >= surf.values[i - 1][j] * (1.0 - 1e-12));
                }
            }
            let pc = profile(&x.scaled(c).unwrap()).unwrap();
            let surf_c = fluctuation_function(&pc, &sg, &qg, 1).unwrap();
            let h = hurst_exponents(&surf).unwrap();
            let hc = hurst_exponents(&surf_c).unwrap();
            for (a, b) in h.h.iter().zip(&hc.h) {
                prop_assert!((a - b).abs() < 1e-12);
            }
            for (ra, rb) in surf.values.iter().zip(&surf_c.values) {
                for (a, b) in ra.iter().zip(rb) {
                    prop_assert!((b / a - c).abs() < 1e-10 * c);
                }
            }
        }
    }
}
