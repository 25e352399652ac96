//! Wavelet transform modulus maxima.
//!
//! The continuous wavelet transform with a Gaussian-derivative wavelet is
//! evaluated on a scale grid; at each scale the local maxima of `|W(n, s)|`
//! are collected independently and their q-th powers summed into the
//! partition function `Z(q, s)`, whose log-log slope against `s` gives
//! `tau(q)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{CwtEngine, WtmmConfig};
use crate::error::{Error, Result};
use crate::fft::{self, Complex};
use crate::mfdfa::{profile, QGrid, ScaleGrid};
use crate::regression::linear_fit;
use crate::series::TimeSeries;
use crate::spectrum::{self, Method, MultifractalResult, ScalingExponents, Surface};

/// Kernels longer than this use FFT convolution under [`CwtEngine::Auto`].
const AUTO_DIRECT_MAX_TAPS: usize = 129;

/// `d^m/dt^m exp(-t^2/2)`, i.e. `(-1)^m He_m(t) exp(-t^2/2)` with the
/// probabilists' Hermite polynomials.
pub fn gaussian_derivative(m: u32, t: f64) -> Result<f64> {
    let t2 = t * t;
    let hermite = match m {
        1 => t,
        2 => t2 - 1.0,
        3 => t * (t2 - 3.0),
        4 => t2 * t2 - 6.0 * t2 + 3.0,
        _ => return Err(Error::UnsupportedOrder(m)),
    };
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * hermite * (-0.5 * t2).exp())
}

/// Number of taps on each side of the kernel centre at scale `s`.
fn half_taps(s: f64, half_width: f64) -> usize {
    (half_width * s).floor() as usize
}

/// Sampled wavelet `psi(k/s)` for `k` in `[-K, K]`, `K = floor(half_width s)`.
///
/// Truncation and sampling leave small nonzero low-order moments; the
/// kernel's projection onto polynomials of degree `< m` (same parity as
/// `m`) is removed so constants and polynomial trends of degree `m - 1` are
/// annihilated to rounding precision. The correction preserves the
/// kernel's symmetry or antisymmetry.
pub fn gaussian_derivative_wavelet(m: u32, s: f64, half_width: f64) -> Result<Vec<f64>> {
    if !(1..=4).contains(&m) {
        return Err(Error::UnsupportedOrder(m));
    }
    if !(s >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "wavelet scale {s} must be >= 1"
        )));
    }
    let k = half_taps(s, half_width) as i64;
    let t: Vec<f64> = (-k..=k).map(|j| j as f64 / s).collect();
    let mut kernel = t
        .iter()
        .map(|&ti| gaussian_derivative(m, ti))
        .collect::<Result<Vec<f64>>>()?;

    let mut basis: Vec<Vec<f64>> = Vec::new();
    for degree in (0..m).filter(|d| (m - d) % 2 == 0) {
        let scale = half_width;
        let mut v: Vec<f64> = t
            .iter()
            .map(|&ti| (ti / scale).powi(degree as i32))
            .collect();
        for _ in 0..2 {
            for u in &basis {
                let d = dot(&v, u);
                v.iter_mut().zip(u).for_each(|(a, b)| *a -= d * b);
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|a| *a /= norm);
            basis.push(v);
        }
    }
    for u in &basis {
        let d = dot(&kernel, u);
        kernel.iter_mut().zip(u).for_each(|(a, b)| *a -= d * b);
    }
    Ok(kernel)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Transform coefficients at one scale, restricted to interior positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveletRow {
    pub scale: usize,
    /// Series index of `coeffs[0]`.
    pub offset: usize,
    pub coeffs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveletField {
    pub wavelet_order: u32,
    pub rows: Vec<WaveletRow>,
}

impl WaveletField {
    pub fn row(&self, scale: usize) -> Option<&WaveletRow> {
        self.rows.iter().find(|r| r.scale == scale)
    }

    pub fn scales(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.scale).collect()
    }
}

fn cwt_direct(x: &[f64], kernel: &[f64], s: f64) -> Vec<f64> {
    let taps = kernel.len();
    x.windows(taps).map(|w| dot(w, kernel) / s).collect()
}

struct SpectrumCache {
    len: usize,
    spectrum: Vec<Complex>,
}

impl SpectrumCache {
    fn new(x: &[f64], max_taps: usize) -> Self {
        let len = (x.len() + max_taps).next_power_of_two();
        let mut buf = vec![Complex::new(0.0, 0.0); len];
        for (b, &v) in buf.iter_mut().zip(x) {
            b.re = v;
        }
        fft::forward(&mut buf);
        Self { len, spectrum: buf }
    }

    /// Correlation of the cached signal with `kernel`, interior part only.
    fn correlate(&self, n: usize, kernel: &[f64], s: f64) -> Vec<f64> {
        let taps = kernel.len();
        let mut kbuf = vec![Complex::new(0.0, 0.0); self.len];
        for (b, &v) in kbuf.iter_mut().zip(kernel.iter().rev()) {
            b.re = v;
        }
        fft::forward(&mut kbuf);
        for (k, x) in kbuf.iter_mut().zip(&self.spectrum) {
            *k *= x;
        }
        fft::inverse(&mut kbuf);
        // Full linear convolution index i holds sum_l x[i - l] kernel_rev[l];
        // interior position n (window start) maps to i = n + taps - 1.
        (0..=n - taps)
            .map(|start| kbuf[start + taps - 1].re / s)
            .collect()
    }
}

/// Continuous wavelet transform `W(n, s) = (1/s) sum_k x_k psi((k - n)/s)`
/// at every position where the kernel support fits inside the series.
pub fn cwt(
    x: &TimeSeries,
    sg: &ScaleGrid,
    m: u32,
    half_width: f64,
    engine: CwtEngine,
) -> Result<WaveletField> {
    cwt_samples(x.samples(), sg, m, half_width, engine)
}

fn cwt_samples(
    x: &[f64],
    sg: &ScaleGrid,
    m: u32,
    half_width: f64,
    engine: CwtEngine,
) -> Result<WaveletField> {
    let n = x.len();
    for &s in sg.scales() {
        if n < 2 * half_taps(s as f64, half_width) + 1 {
            return Err(Error::SignalTooShortForScale { scale: s, len: n });
        }
    }
    let kernels = sg
        .scales()
        .iter()
        .map(|&s| gaussian_derivative_wavelet(m, s as f64, half_width))
        .collect::<Result<Vec<_>>>()?;
    let use_fft = |taps: usize| match engine {
        CwtEngine::Direct => false,
        CwtEngine::Fft => true,
        CwtEngine::Auto => taps > AUTO_DIRECT_MAX_TAPS,
    };
    let max_fft_taps = kernels.iter().map(Vec::len).filter(|&t| use_fft(t)).max();
    let cache = max_fft_taps.map(|t| SpectrumCache::new(x, t));

    let rows = sg
        .scales()
        .par_iter()
        .zip(kernels.par_iter())
        .map(|(&s, kernel)| {
            let coeffs = match (&cache, use_fft(kernel.len())) {
                (Some(c), true) => c.correlate(n, kernel, s as f64),
                _ => cwt_direct(x, kernel, s as f64),
            };
            WaveletRow {
                scale: s,
                offset: kernel.len() / 2,
                coeffs,
            }
        })
        .collect();
    Ok(WaveletField {
        wavelet_order: m,
        rows,
    })
}

/// Interior local maxima of a modulus row: strictly above the left
/// neighbour, at least the right neighbour (so the leftmost point of a
/// plateau wins), and above `1e-12` of the row maximum. Indices are into
/// `moduli`.
pub fn modulus_maxima_row(moduli: &[f64]) -> Vec<usize> {
    if moduli.len() < 3 {
        return Vec::new();
    }
    let floor = 1e-12 * moduli.iter().fold(0.0_f64, |m, v| m.max(*v));
    (1..moduli.len() - 1)
        .filter(|&i| {
            let v = moduli[i];
            v > moduli[i - 1] && v >= moduli[i + 1] && v >= floor && v > 0.0
        })
        .collect()
}

/// Series positions of the modulus maxima at scale `s`.
pub fn modulus_maxima(field: &WaveletField, s: usize) -> Result<Vec<usize>> {
    let row = field
        .row(s)
        .ok_or_else(|| Error::InvalidParameter(format!("scale {s} is not in the field")))?;
    let moduli: Vec<f64> = row.coeffs.iter().map(|c| c.abs()).collect();
    Ok(modulus_maxima_row(&moduli)
        .into_iter()
        .map(|i| i + row.offset)
        .collect())
}

/// `Z(q, s) = sum_i |W(n_i, s)|^q` over the modulus maxima of each scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionFunction {
    pub qs: QGrid,
    pub scales: ScaleGrid,
    /// `values[i][j] = Z(q_i, s_j)`.
    pub values: Vec<Vec<f64>>,
    pub maxima_counts: Vec<usize>,
}

fn partition_sum(moduli: &[f64], q: f64) -> f64 {
    if q == 0.0 {
        moduli.len() as f64
    } else {
        moduli.iter().map(|m| m.powf(q)).sum()
    }
}

pub fn partition_function(field: &WaveletField, qg: &QGrid) -> Result<PartitionFunction> {
    let mut values = vec![Vec::with_capacity(field.rows.len()); qg.len()];
    let mut counts = Vec::with_capacity(field.rows.len());
    for row in &field.rows {
        let moduli: Vec<f64> = row.coeffs.iter().map(|c| c.abs()).collect();
        let at_maxima: Vec<f64> = modulus_maxima_row(&moduli)
            .into_iter()
            .map(|i| moduli[i])
            .collect();
        if at_maxima.is_empty() {
            return Err(Error::NoMaximaAtScale { scale: row.scale });
        }
        counts.push(at_maxima.len());
        for (out, &q) in values.iter_mut().zip(qg.values()) {
            out.push(partition_sum(&at_maxima, q));
        }
    }
    Ok(PartitionFunction {
        qs: qg.clone(),
        scales: ScaleGrid::new(field.scales())?,
        values,
        maxima_counts: counts,
    })
}

/// `tau(q)` as the slope of `ln Z(q, s)` against `ln s`.
pub fn wtmm_scaling_exponents(z: &PartitionFunction) -> Result<ScalingExponents> {
    let scales = z.scales.scales();
    if scales.len() < 4 {
        return Err(Error::InvalidGrid(format!(
            "{} scales; at least 4 are needed for a scaling fit",
            scales.len()
        )));
    }
    let ln_s: Vec<f64> = scales.iter().map(|&s| (s as f64).ln()).collect();
    let mut tau = Vec::with_capacity(z.qs.len());
    let mut r2 = Vec::with_capacity(z.qs.len());
    for row in &z.values {
        let ln_z: Vec<f64> = row.iter().map(|v| v.ln()).collect();
        if let Some(j) = ln_z.iter().position(|v| !v.is_finite()) {
            return Err(Error::NoMaximaAtScale { scale: scales[j] });
        }
        let fit = linear_fit(&ln_s, &ln_z).expect("scales are distinct");
        tau.push(fit.slope);
        r2.push(fit.r_squared);
    }
    Ok(ScalingExponents {
        qs: z.qs.values().to_vec(),
        tau,
        r_squared: r2,
    })
}

/// Default WTMM grid for a series of length `n`: upper bound `n / 16`.
pub fn wtmm_scale_grid(n: usize, cfg: &WtmmConfig) -> Result<ScaleGrid> {
    let max = cfg.scales.max.unwrap_or(n / 16);
    ScaleGrid::log_spaced(cfg.scales.min, max, cfg.scales.count)
}

/// Full WTMM pipeline: transform, maxima, partition function, `tau(q)`,
/// Legendre spectrum and quadratic fit. Negative moments are reported in
/// `low_confidence_q` since per-scale maxima include spurious small ones.
pub fn wtmm_analyze(x: &TimeSeries, cfg: &WtmmConfig) -> Result<MultifractalResult> {
    cfg.validate()?;
    let signal: Vec<f64> = if cfg.integrate {
        profile(x)?.values().to_vec()
    } else {
        x.samples().to_vec()
    };
    if signal.iter().all(|&v| v == signal[0]) {
        return Err(Error::NoMaximaAtScale {
            scale: cfg.scales.min,
        });
    }
    let sg = wtmm_scale_grid(signal.len(), cfg)?;
    if sg.len() < 4 {
        return Err(Error::InvalidGrid(format!(
            "series of length {} leaves only {} wavelet scales",
            signal.len(),
            sg.len()
        )));
    }
    let qg = QGrid::from_spec(&cfg.q)?;
    let field = cwt_samples(&signal, &sg, cfg.wavelet_order, cfg.half_width, cfg.engine)?;
    let z = partition_function(&field, &qg)?;
    let tau = wtmm_scaling_exponents(&z)?;
    let spec = spectrum::legendre(&tau, Method::Wtmm)?;
    let fit = spectrum::quadratic_fit(&spec)?;
    Ok(MultifractalResult {
        method: Method::Wtmm,
        surface: Surface::Partition(z),
        hurst: None,
        low_confidence_q: qg.values().iter().copied().filter(|&q| q < 0.0).collect(),
        tau,
        spectrum: spec,
        fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::white_noise;
    use proptest::prelude::*;

    fn ts(v: Vec<f64>) -> TimeSeries {
        TimeSeries::new(v, 1.0).unwrap()
    }

    #[test]
    fn analytic_wavelet_values() {
        assert_eq!(gaussian_derivative(2, 0.0).unwrap(), -1.0);
        assert_eq!(gaussian_derivative(1, 0.0).unwrap(), 0.0);
        // d/dt e^{-t^2/2} = -t e^{-t^2/2}
        assert!((gaussian_derivative(1, 1.0).unwrap() + (-0.5f64).exp()).abs() < 1e-15);
        assert_eq!(gaussian_derivative(4, 0.0).unwrap(), 3.0);
        assert!(matches!(
            gaussian_derivative(5, 0.0),
            Err(Error::UnsupportedOrder(5))
        ));
        assert!(matches!(
            gaussian_derivative_wavelet(0, 4.0, 5.0),
            Err(Error::UnsupportedOrder(0))
        ));
    }

    /// Central finite differences of exp(-t^2/2) as an independent check of
    /// the Hermite closed forms.
    #[test]
    fn hermite_forms_match_finite_differences() {
        let g = |t: f64| (-0.5 * t * t).exp();
        let h = 1e-3;
        for &t in &[-1.7, -0.3, 0.4, 2.2] {
            let d1 = (g(t + h) - g(t - h)) / (2.0 * h);
            let d2 = (g(t + h) - 2.0 * g(t) + g(t - h)) / (h * h);
            let d3 = (g(t + 2.0 * h) - 2.0 * g(t + h) + 2.0 * g(t - h) - g(t - 2.0 * h))
                / (2.0 * h * h * h);
            assert!((gaussian_derivative(1, t).unwrap() - d1).abs() < 1e-5);
            assert!((gaussian_derivative(2, t).unwrap() - d2).abs() < 1e-5);
            assert!((gaussian_derivative(3, t).unwrap() - d3).abs() < 1e-4);
        }
    }

    #[test]
    fn kernel_shape() {
        let k = gaussian_derivative_wavelet(1, 6.0, 5.0).unwrap();
        assert_eq!(k.len(), 61);
        let c = k.len() / 2;
        for i in 0..=c {
            assert_eq!(k[c + i], -k[c - i]);
        }
        let k2 = gaussian_derivative_wavelet(2, 8.0, 5.0).unwrap();
        let l1: f64 = k2.iter().map(|v| v.abs()).sum();
        assert!(k2.iter().sum::<f64>().abs() < 1e-6 * l1);
        // Moment correction moves the centre only by the tail mass.
        assert!((k2[k2.len() / 2] + 1.0).abs() < 1e-4);
    }

    #[test]
    fn kernels_annihilate_low_order_polynomials() {
        for m in 1..=4u32 {
            for s in [1.0, 3.0, 7.0, 20.0] {
                let k = gaussian_derivative_wavelet(m, s, 5.0).unwrap();
                let c = (k.len() / 2) as f64;
                let l1: f64 = k.iter().map(|v| v.abs()).sum();
                for d in 0..m as i32 {
                    let moment: f64 = k
                        .iter()
                        .enumerate()
                        .map(|(i, v)| v * ((i as f64 - c) / c.max(1.0)).powi(d))
                        .sum();
                    assert!(moment.abs() < 1e-12 * l1, "m={m} s={s} d={d}: {moment}");
                }
            }
        }
    }

    #[test]
    fn cwt_kills_constants_and_ramps() {
        let sg = ScaleGrid::new(vec![2, 5, 11, 20]).unwrap();
        let c = 3.7;
        for m in 1..=4 {
            let f = cwt(&ts(vec![c; 400]), &sg, m, 5.0, CwtEngine::Direct).unwrap();
            for row in &f.rows {
                assert!(row.coeffs.iter().all(|w| w.abs() < 1e-6 * c));
            }
        }
        let ramp: Vec<f64> = (0..400).map(|i| 0.5 * i as f64 - 20.0).collect();
        let mag = ramp.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let f = cwt(&ts(ramp), &sg, 2, 5.0, CwtEngine::Direct).unwrap();
        for row in &f.rows {
            assert!(row.coeffs.iter().all(|w| w.abs() < 1e-6 * mag));
        }
    }

    #[test]
    fn cwt_of_polynomial_of_degree_m_minus_one() {
        let sg = ScaleGrid::new(vec![3, 6, 12]).unwrap();
        for m in 1..=4u32 {
            let poly: Vec<f64> = (0..300)
                .map(|i| {
                    let t = i as f64 / 300.0;
                    (0..m).map(|d| (d as f64 + 1.0) * t.powi(d as i32)).sum()
                })
                .collect();
            let mag = poly.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
            let f = cwt(&ts(poly), &sg, m, 5.0, CwtEngine::Direct).unwrap();
            for row in &f.rows {
                assert!(row.coeffs.iter().all(|w| w.abs() < 1e-6 * mag), "m={m}");
            }
        }
    }

    #[test]
    fn cwt_edges_and_errors() {
        let x = white_noise(200, 1).unwrap();
        let sg = ScaleGrid::new(vec![2, 4]).unwrap();
        let f = cwt(&x, &sg, 2, 5.0, CwtEngine::Direct).unwrap();
        assert_eq!(f.rows[0].offset, 10);
        assert_eq!(f.rows[0].coeffs.len(), 200 - 20);
        assert_eq!(f.rows[1].coeffs.len(), 200 - 40);
        let big = ScaleGrid::new(vec![2, 30]).unwrap();
        assert!(matches!(
            cwt(&x, &big, 2, 5.0, CwtEngine::Direct),
            Err(Error::SignalTooShortForScale {
                scale: 30,
                len: 200
            })
        ));
    }

    #[test]
    fn cwt_is_linear() {
        let x = white_noise(512, 9).unwrap();
        let sg = ScaleGrid::new(vec![2, 5, 9]).unwrap();
        let a = cwt(&x, &sg, 2, 5.0, CwtEngine::Direct).unwrap();
        let b = cwt(&x.scaled(2.0).unwrap(), &sg, 2, 5.0, CwtEngine::Direct).unwrap();
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            for (wa, wb) in ra.coeffs.iter().zip(&rb.coeffs) {
                assert_eq!(2.0 * wa, *wb);
            }
        }
    }

    #[test]
    fn fft_engine_matches_direct() {
        let x = white_noise(3000, 2).unwrap();
        let sg = ScaleGrid::new(vec![1, 4, 13, 40, 90]).unwrap();
        for m in 1..=4 {
            let d = cwt(&x, &sg, m, 5.0, CwtEngine::Direct).unwrap();
            let f = cwt(&x, &sg, m, 5.0, CwtEngine::Fft).unwrap();
            let a = cwt(&x, &sg, m, 5.0, CwtEngine::Auto).unwrap();
            for ((rd, rf), ra) in d.rows.iter().zip(&f.rows).zip(&a.rows) {
                assert_eq!(rd.offset, rf.offset);
                assert_eq!(rd.coeffs.len(), rf.coeffs.len());
                for ((wd, wf), wa) in rd.coeffs.iter().zip(&rf.coeffs).zip(&ra.coeffs) {
                    assert!((wd - wf).abs() < 1e-8, "m={m} s={}", rd.scale);
                    assert!((wd - wa).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn maxima_examples() {
        assert_eq!(
            modulus_maxima_row(&[1.0, 3.0, 2.0, 2.0, 5.0, 1.0]),
            vec![1, 4]
        );
        assert!(modulus_maxima_row(&[5.0, 1.0, 1.0]).is_empty());
        assert!(modulus_maxima_row(&[1.0, 2.0, 3.0, 4.0]).is_empty());
        assert_eq!(modulus_maxima_row(&[1.0, 3.0, 3.0, 1.0]), vec![1]);
        assert!(modulus_maxima_row(&[0.0, 1e-20, 0.0, 1.0, 0.0]) == vec![3]);
    }

    fn field_with(scale: usize, coeffs: Vec<f64>) -> WaveletField {
        WaveletField {
            wavelet_order: 2,
            rows: vec![WaveletRow {
                scale,
                offset: 0,
                coeffs,
            }],
        }
    }

    #[test]
    fn partition_examples() {
        let qg = QGrid::new(vec![-2.0, 0.0, 1.5, 2.0]).unwrap();
        let single = field_with(4, vec![0.0, -2.0, 0.0]);
        let z = partition_function(&single, &qg).unwrap();
        for (i, q) in qg.values().iter().enumerate() {
            assert!((z.values[i][0] - 2f64.powf(*q)).abs() < 1e-15);
        }
        let three = field_with(4, vec![0.0, 1.0, 0.0, -2.0, 0.0, 4.0, 0.0]);
        let z = partition_function(&three, &qg).unwrap();
        assert_eq!(z.values[1][0], 3.0);
        assert_eq!(z.maxima_counts, vec![3]);
        assert_eq!(z.values[3][0], 21.0);
        let none = field_with(7, vec![1.0, 2.0, 3.0]);
        assert!(matches!(
            partition_function(&none, &qg),
            Err(Error::NoMaximaAtScale { scale: 7 })
        ));
    }

    #[test]
    fn exact_power_law_partition() {
        let sg = ScaleGrid::new(vec![4, 8, 13, 21, 40]).unwrap();
        let qg = QGrid::new(vec![-1.0, 0.0, 0.5, 2.0, 4.0]).unwrap();
        let values = qg
            .values()
            .iter()
            .map(|&q| {
                sg.scales()
                    .iter()
                    .map(|&s| (s as f64).powf(q - 1.0))
                    .collect()
            })
            .collect();
        let z = PartitionFunction {
            qs: qg.clone(),
            scales: sg,
            values,
            maxima_counts: vec![1; 5],
        };
        let t = wtmm_scaling_exponents(&z).unwrap();
        for (q, tau) in t.qs.iter().zip(&t.tau) {
            assert!((tau - (q - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn default_grid_fits_kernel_support() {
        let cfg = WtmmConfig::default();
        let sg = wtmm_scale_grid(65536, &cfg).unwrap();
        assert_eq!(sg.scales()[0], 4);
        assert_eq!(*sg.scales().last().unwrap(), 4096);
        assert_eq!(sg.len(), 24);
    }

    #[test]
    fn constant_signal_is_degenerate() {
        let err = wtmm_analyze(&ts(vec![2.0; 4096]), &WtmmConfig::default()).unwrap_err();
        assert!(err.is_degenerate());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn rescaling_preserves_maxima_and_tau(seed in 0u64..500, c in 0.05f64..20.0) {
            let x = white_noise(2048, seed).unwrap();
            let sg = ScaleGrid::log_spaced(2, 64, 8).unwrap();
            let qg = QGrid::new(vec![-1.0, 0.0, 1.0, 2.5, 4.0]).unwrap();
            let a = cwt(&x, &sg, 2, 5.0, CwtEngine::Auto).unwrap();
            let b = cwt(&x.scaled(c).unwrap(), &sg, 2, 5.0, CwtEngine::Auto).unwrap();
            for &s in sg.scales() {
                prop_assert_eq!(modulus_maxima(&a, s).unwrap(), modulus_maxima(&b, s).unwrap());
            }
            let ta = wtmm_scaling_exponents(&partition_function(&a, &qg).unwrap()).unwrap();
            let tb = wtmm_scaling_exponents(&partition_function(&b, &qg).unwrap()).unwrap();
            for (u, v) in ta.tau.iter().zip(&tb.tau) {
                prop_assert!((u - v).abs() < 1e-12);
            }
        }

        #[test]
        fn partition_is_log_convex_in_q(seed in 0u64..500) {
            let x = white_noise(1024, seed).unwrap();
            let sg = ScaleGrid::new(vec![2, 6, 18]).unwrap();
            let qs: Vec<f64> = (-4..=10).map(|i| i as f64 * 0.5).collect();
            let qg = QGrid::new(qs).unwrap();
            let z = partition_function(&cwt(&x, &sg, 2, 5.0, CwtEngine::Direct).unwrap(), &qg).unwrap();
            for j in 0..sg.len() {
                for i in 1..qg.len() - 1 {
                    let l = |k: usize| z.values[k][j].ln();
                    // equally spaced q: ln Z(q) <= mean of neighbours
                    prop_assert!(l(i) <= 0.5 * (l(i - 1) + l(i + 1)) + 1e-12);
                }
            }
        }
    }
}
