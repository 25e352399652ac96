//! Singularity-spectrum mathematics shared by both estimators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mfdfa::{FluctuationSurface, HurstSpectrum};
use crate::regression::{linear_fit, solve_dense};
use crate::wtmm::PartitionFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Mfdfa,
    Wtmm,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Mfdfa => "mfdfa",
            Method::Wtmm => "wtmm",
        }
    }
}

/// Mass exponents `tau(q)` with the r² of the regression behind each value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingExponents {
    pub qs: Vec<f64>,
    pub tau: Vec<f64>,
    pub r_squared: Vec<f64>,
}

/// `tau(q) = q h(q) - 1`.
pub fn tau_from_h(h: &HurstSpectrum) -> ScalingExponents {
    ScalingExponents {
        qs: h.qs.clone(),
        tau: h.qs.iter().zip(&h.h).map(|(q, h)| q * h - 1.0).collect(),
        r_squared: h.r_squared.clone(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    pub q: f64,
    pub tau: f64,
    pub alpha: f64,
    pub f: f64,
    /// Dropped because its alpha broke the strictly decreasing order.
    pub pruned: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularitySpectrum {
    pub method: Method,
    /// One point per q, in increasing q order, pruned points included.
    pub points: Vec<SpectrumPoint>,
}

impl SingularitySpectrum {
    /// Spectrum from bare `(alpha, f)` pairs, all retained. Mostly useful for
    /// feeding externally computed spectra into the fit and area routines.
    pub fn from_pairs(method: Method, pairs: &[(f64, f64)]) -> Self {
        Self {
            method,
            points: pairs
                .iter()
                .map(|&(alpha, f)| SpectrumPoint {
                    q: f64::NAN,
                    tau: f64::NAN,
                    alpha,
                    f,
                    pruned: false,
                })
                .collect(),
        }
    }

    pub fn retained(&self) -> impl Iterator<Item = &SpectrumPoint> + '_ {
        self.points.iter().filter(|p| !p.pruned)
    }

    pub fn n_retained(&self) -> usize {
        self.retained().count()
    }

    pub fn n_pruned(&self) -> usize {
        self.points.len() - self.n_retained()
    }
}

/// Indices of the longest strictly decreasing subsequence (earliest wins ties).
fn longest_decreasing(values: &[f64]) -> Vec<usize> {
    let n = values.len();
    let mut len = vec![1usize; n];
    let mut prev = vec![usize::MAX; n];
    for i in 0..n {
        for j in 0..i {
            if values[j] > values[i] && len[j] + 1 > len[i] {
                len[i] = len[j] + 1;
                prev[i] = j;
            }
        }
    }
    let Some(best) = (0..n).max_by(|&a, &b| len[a].cmp(&len[b]).then(b.cmp(&a))) else {
        return Vec::new();
    };
    let mut out = vec![best];
    while prev[*out.last().unwrap()] != usize::MAX {
        out.push(prev[*out.last().unwrap()]);
    }
    out.reverse();
    out
}

/// Legendre transform of sampled `tau(q)`: `alpha = tau'(q)` by central
/// differences (one-sided at the ends) and `f = q alpha - tau`.
///
/// Points whose alpha does not continue the longest strictly decreasing run
/// are flagged as pruned; fewer than three survivors is a degenerate
/// (monofractal) spectrum.
pub fn legendre(tau: &ScalingExponents, method: Method) -> Result<SingularitySpectrum> {
    let q = &tau.qs;
    let t = &tau.tau;
    let n = q.len();
    if n < 3 {
        return Err(Error::DegenerateSpectrum { retained: n });
    }
    let alpha: Vec<f64> = (0..n)
        .map(|j| {
            let (lo, hi) = match j {
                0 => (0, 1),
                j if j == n - 1 => (n - 2, n - 1),
                j => (j - 1, j + 1),
            };
            (t[hi] - t[lo]) / (q[hi] - q[lo])
        })
        .collect();
    let keep = longest_decreasing(&alpha);
    let mut points: Vec<SpectrumPoint> = (0..n)
        .map(|j| SpectrumPoint {
            q: q[j],
            tau: t[j],
            alpha: alpha[j],
            f: q[j] * alpha[j] - t[j],
            pruned: true,
        })
        .collect();
    for &k in &keep {
        points[k].pruned = false;
    }
    if keep.len() < 3 {
        return Err(Error::DegenerateSpectrum {
            retained: keep.len(),
        });
    }
    Ok(SingularitySpectrum { method, points })
}

/// Quadratic model of a spectrum around its maximum.
///
/// The parabola is `f(alpha) = a (alpha - alpha0)^2 + c` in vertex form, so
/// `alpha0` is the fitted apex and `c = f(alpha0)`. `b` is an asymmetry
/// diagnostic: the fitted slope at the alpha of the highest observed point,
/// zero when the data peak sits on the vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumFit {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub alpha0: f64,
    /// Low-alpha zero of the parabola.
    pub alpha1: f64,
    /// High-alpha zero of the parabola.
    pub alpha2: f64,
    pub width: f64,
    pub residual_rms: f64,
    pub n_points_fit: usize,
}

impl SpectrumFit {
    pub fn eval(&self, alpha: f64) -> f64 {
        let d = alpha - self.alpha0;
        self.a * d * d + self.c
    }
}

/// Zeros of the fitted parabola: `(width, alpha1, alpha2)` with
/// `alpha1 < alpha2` and `width = alpha2 - alpha1`.
pub fn spectrum_width(fit: &SpectrumFit) -> Result<(f64, f64, f64)> {
    if !(fit.a < 0.0) {
        return Err(Error::UpwardParabola(fit.a));
    }
    // Vertex-shifted discriminant with zero linear term: -4 a c.
    let disc = -4.0 * fit.a * fit.c;
    if !(disc > 0.0) {
        return Err(Error::NoRealRoots);
    }
    let half = disc.sqrt() / (2.0 * -fit.a);
    let alpha1 = fit.alpha0 - half;
    let alpha2 = fit.alpha0 + half;
    Ok((alpha2 - alpha1, alpha1, alpha2))
}

/// Least-squares parabola through the retained points with `f >= 0.5`
/// (all retained points when fewer than five qualify).
pub fn quadratic_fit(spec: &SingularitySpectrum) -> Result<SpectrumFit> {
    let retained: Vec<&SpectrumPoint> = spec.retained().collect();
    if retained.len() < 3 {
        return Err(Error::DegenerateSpectrum {
            retained: retained.len(),
        });
    }
    let upper: Vec<&SpectrumPoint> = retained.iter().copied().filter(|p| p.f >= 0.5).collect();
    let pts = if upper.len() >= 5 { upper } else { retained };

    let alpha: Vec<f64> = pts.iter().map(|p| p.alpha).collect();
    let f: Vec<f64> = pts.iter().map(|p| p.f).collect();
    let mut distinct = alpha.clone();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::CollinearPoints);
    }

    let line = linear_fit(&alpha, &f).ok_or(Error::CollinearPoints)?;
    let line_ss: f64 = alpha
        .iter()
        .zip(&f)
        .map(|(a, y)| (y - (line.slope * a + line.intercept)).powi(2))
        .sum();
    let energy: f64 = f.iter().map(|y| y * y).sum::<f64>().max(f64::MIN_POSITIVE);
    if line_ss <= 1e-24 * energy {
        return Err(Error::CollinearPoints);
    }

    // Centre and scale alpha so the normal equations stay well conditioned.
    let n = alpha.len() as f64;
    let mean = alpha.iter().sum::<f64>() / n;
    let spread = alpha.iter().fold(0.0_f64, |m, a| m.max((a - mean).abs()));
    let u: Vec<f64> = alpha.iter().map(|a| (a - mean) / spread).collect();
    let mut m = [[0.0; 3]; 3];
    let mut rhs = [0.0; 3];
    for (&ui, &yi) in u.iter().zip(&f) {
        let basis = [ui * ui, ui, 1.0];
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] += basis[r] * basis[c];
            }
            rhs[r] += basis[r] * yi;
        }
    }
    let [c2, c1, c0] = solve_dense(m, rhs).ok_or(Error::CollinearPoints)?;
    let a = c2 / (spread * spread);
    if !(a < 0.0) {
        return Err(Error::UpwardParabola(a));
    }
    let u_vertex = -c1 / (2.0 * c2);
    let alpha0 = mean + spread * u_vertex;
    let c = c0 - c1 * c1 / (4.0 * c2);

    let peak = pts
        .iter()
        .max_by(|x, y| x.f.total_cmp(&y.f))
        .expect("at least three points");
    let b = 2.0 * a * (peak.alpha - alpha0);

    let mut fit = SpectrumFit {
        a,
        b,
        c,
        alpha0,
        alpha1: f64::NAN,
        alpha2: f64::NAN,
        width: f64::NAN,
        residual_rms: 0.0,
        n_points_fit: pts.len(),
    };
    fit.residual_rms = (alpha
        .iter()
        .zip(&f)
        .map(|(&al, &y)| (y - fit.eval(al)).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let (width, alpha1, alpha2) = spectrum_width(&fit)?;
    fit.width = width;
    fit.alpha1 = alpha1;
    fit.alpha2 = alpha2;
    Ok(fit)
}

/// Area under the raw spectrum from its smallest alpha up to the alpha of
/// its maximum (the low-Holder branch), by the trapezoid rule.
pub fn low_fluct_area(spec: &SingularitySpectrum) -> Result<f64> {
    let mut pts: Vec<(f64, f64)> = spec.retained().map(|p| (p.alpha, p.f)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let Some(apex) = pts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i)
    else {
        return Err(Error::DegenerateSpectrum { retained: 0 });
    };
    if apex < 1 {
        return Err(Error::DegenerateSpectrum { retained: apex + 1 });
    }
    Ok(pts[..=apex]
        .windows(2)
        .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
        .sum())
}

/// Raw scaling data behind an estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Surface {
    Fluctuation(FluctuationSurface),
    Partition(PartitionFunction),
}

/// Everything one estimator produced for one signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultifractalResult {
    pub method: Method,
    pub surface: Surface,
    /// Generalized Hurst exponents (MFDFA only).
    pub hurst: Option<HurstSpectrum>,
    pub tau: ScalingExponents,
    pub spectrum: SingularitySpectrum,
    pub fit: SpectrumFit,
    /// Moment orders whose estimates are known to be unreliable.
    pub low_confidence_q: Vec<f64>,
}
