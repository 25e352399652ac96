use serde::{Deserialize, Serialize};

use super::features::FeatureVector;
use crate::audio_io::EmotionLabel;
use crate::error::{Error, Result};

pub const MODEL_VERSION: u32 = 1;

/// Per-feature z-score parameters (population standard deviation).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: [f64; 3],
    pub stds: [f64; 3],
}

impl Standardizer {
    pub fn fit(rows: &[[f64; 3]]) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "standardization needs at least 2 vectors, got {}",
                rows.len()
            )));
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteFeature);
        }
        let n = rows.len() as f64;
        let mut means = [0.0; 3];
        let mut stds = [0.0; 3];
        for d in 0..3 {
            means[d] = rows.iter().map(|r| r[d]).sum::<f64>() / n;
            let var = rows.iter().map(|r| (r[d] - means[d]).powi(2)).sum::<f64>() / n;
            stds[d] = var.sqrt();
            if !(stds[d] > 0.0) {
                return Err(Error::ZeroVarianceFeature(d));
            }
        }
        Ok(Self { means, stds })
    }

    pub fn transform(&self, x: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|d| (x[d] - self.means[d]) / self.stds[d])
    }
}

/// Fits a [`Standardizer`] on `train` and returns it with the transformed rows.
pub fn standardize(train: &[FeatureVector]) -> Result<(Standardizer, Vec<[f64; 3]>)> {
    let rows: Vec<[f64; 3]> = train.iter().map(FeatureVector::values).collect();
    let st = Standardizer::fit(&rows)?;
    let z = rows.iter().map(|&r| st.transform(r)).collect();
    Ok((st, z))
}

/// Stopping rule of the dual solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoParams {
    /// Maximal KKT violation tolerated at convergence.
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for SmoParams {
    fn default() -> Self {
        Self {
            tolerance: 1e-6,
            max_iter: 1_000_000,
        }
    }
}

/// Solution of one binary soft-margin problem with labels `+1/-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinarySolution {
    pub alpha: Vec<f64>,
    pub weights: [f64; 3],
    pub bias: f64,
    pub iterations: usize,
    /// Final maximal KKT violation.
    pub gap: f64,
}

impl BinarySolution {
    pub fn decision(&self, x: &[f64; 3]) -> f64 {
        dot(&self.weights, x) + self.bias
    }
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Linear-kernel SMO with second-order working-set selection.
///
/// Solves `min 1/2 a'Qa - e'a` subject to `0 <= a <= C` and `y'a = 0`, where
/// `Q_ij = y_i y_j <x_i, x_j>`. Deterministic in the input order.
pub fn train_binary(
    x: &[[f64; 3]],
    y: &[f64],
    c: f64,
    params: SmoParams,
) -> Result<BinarySolution> {
    let n = x.len();
    if n != y.len() {
        return Err(Error::InvalidParameter(format!(
            "{n} samples but {} labels",
            y.len()
        )));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "regularization C = {c} must be positive"
        )));
    }
    if x.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteFeature);
    }
    if y.iter().any(|&v| v != 1.0 && v != -1.0) {
        return Err(Error::InvalidParameter(
            "binary labels must be +1 or -1".into(),
        ));
    }
    if !(y.contains(&1.0) && y.contains(&-1.0)) {
        return Err(Error::SingleClass);
    }

    let k: Vec<Vec<f64>> = x
        .iter()
        .map(|xi| x.iter().map(|xj| dot(xi, xj)).collect())
        .collect();
    let q = |i: usize, j: usize| y[i] * y[j] * k[i][j];
    const TAU: f64 = 1e-12;

    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let is_up = |a: f64, yt: f64| (yt > 0.0 && a < c) || (yt < 0.0 && a > 0.0);
    let is_low = |a: f64, yt: f64| (yt > 0.0 && a > 0.0) || (yt < 0.0 && a < c);

    let mut iterations = 0;
    let mut gap;
    loop {
        let mut gmax = f64::NEG_INFINITY;
        let mut i_sel = None;
        for t in 0..n {
            if is_up(alpha[t], y[t]) && -y[t] * grad[t] > gmax {
                gmax = -y[t] * grad[t];
                i_sel = Some(t);
            }
        }
        let mut gmax2 = f64::NEG_INFINITY;
        let mut j_sel = None;
        let mut best = f64::INFINITY;
        if let Some(i) = i_sel {
            for t in 0..n {
                if !is_low(alpha[t], y[t]) {
                    continue;
                }
                gmax2 = gmax2.max(y[t] * grad[t]);
                let b = gmax + y[t] * grad[t];
                if b > 0.0 {
                    let a = k[i][i] + k[t][t] - 2.0 * k[i][t];
                    let obj = -b * b / if a > 0.0 { a } else { TAU };
                    if obj < best {
                        best = obj;
                        j_sel = Some(t);
                    }
                }
            }
        }
        gap = gmax + gmax2;
        let (Some(i), Some(j)) = (i_sel, j_sel) else {
            break;
        };
        if gap < params.tolerance || iterations >= params.max_iter {
            break;
        }
        iterations += 1;

        let (old_i, old_j) = (alpha[i], alpha[j]);
        let quad = (k[i][i] + k[j][j] - 2.0 * k[i][j]).max(TAU);
        if y[i] != y[j] {
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for t in 0..n {
            grad[t] += q(t, i) * di + q(t, j) * dj;
        }
    }

    // Offset from the free vectors, or the midpoint of the feasible interval.
    let mut ub = f64::INFINITY;
    let mut lb = f64::NEG_INFINITY;
    let mut free_sum = 0.0;
    let mut n_free = 0usize;
    for t in 0..n {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            n_free += 1;
            free_sum += yg;
        }
    }
    let rho = if n_free > 0 {
        free_sum / n_free as f64
    } else {
        (ub + lb) / 2.0
    };

    let mut weights = [0.0; 3];
    for t in 0..n {
        for d in 0..3 {
            weights[d] += alpha[t] * y[t] * x[t][d];
        }
    }
    Ok(BinarySolution {
        alpha,
        weights,
        bias: -rho,
        iterations,
        gap,
    })
}

/// One pairwise classifier; a positive decision value votes for `class_a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseSvm {
    pub class_a: EmotionLabel,
    pub class_b: EmotionLabel,
    pub weights: [f64; 3],
    pub bias: f64,
}

impl PairwiseSvm {
    pub fn decision(&self, z: &[f64; 3]) -> f64 {
        dot(&self.weights, z) + self.bias
    }
}

/// A trained one-vs-one linear SVM together with its standardization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub version: u32,
    pub classes: Vec<EmotionLabel>,
    pub standardizer: Standardizer,
    pub pairwise: Vec<PairwiseSvm>,
    #[serde(rename = "C")]
    pub c: f64,
}

fn label_of(fv: &FeatureVector) -> Result<EmotionLabel> {
    fv.label.ok_or_else(|| {
        Error::InvalidParameter(format!("feature vector {:?} has no label", fv.path))
    })
}

/// Standardizes `data` and trains one binary SVM per pair of present
/// classes, pairs in label order.
pub fn svm_train(data: &[FeatureVector], c: f64) -> Result<SvmModel> {
    if data.iter().any(|fv| !fv.is_finite()) {
        return Err(Error::NonFiniteFeature);
    }
    let labels: Vec<EmotionLabel> = data.iter().map(label_of).collect::<Result<_>>()?;
    let mut classes = labels.clone();
    classes.sort();
    classes.dedup();
    if classes.len() < 2 {
        return Err(Error::SingleClass);
    }
    let (standardizer, z) = standardize(data)?;

    let mut pairwise = Vec::new();
    for (ia, &a) in classes.iter().enumerate() {
        for &b in &classes[ia + 1..] {
            let (xs, ys): (Vec<[f64; 3]>, Vec<f64>) = z
                .iter()
                .zip(&labels)
                .filter(|(_, &l)| l == a || l == b)
                .map(|(x, &l)| (*x, if l == a { 1.0 } else { -1.0 }))
                .unzip();
            let sol = train_binary(&xs, &ys, c, SmoParams::default())?;
            pairwise.push(PairwiseSvm {
                class_a: a,
                class_b: b,
                weights: sol.weights,
                bias: sol.bias,
            });
        }
    }
    Ok(SvmModel {
        version: MODEL_VERSION,
        classes,
        standardizer,
        pairwise,
        c,
    })
}

/// One-vs-one vote; ties go to the largest summed signed margin, then to
/// the earliest label.
pub fn svm_predict(model: &SvmModel, fv: &FeatureVector) -> Result<EmotionLabel> {
    if !fv.is_finite() {
        return Err(Error::NonFiniteFeature);
    }
    let z = model.standardizer.transform(fv.values());
    let mut votes = [0usize; 3];
    let mut margin = [0.0f64; 3];
    for p in &model.pairwise {
        let d = p.decision(&z);
        if d > 0.0 {
            votes[p.class_a.index()] += 1;
        } else if d < 0.0 {
            votes[p.class_b.index()] += 1;
        }
        margin[p.class_a.index()] += d;
        margin[p.class_b.index()] -= d;
    }
    let mut best = model.classes[0];
    for &cl in &model.classes[1..] {
        let (i, b) = (cl.index(), best.index());
        if votes[i] > votes[b] || (votes[i] == votes[b] && margin[i] > margin[b]) {
            best = cl;
        }
    }
    Ok(best)
}
