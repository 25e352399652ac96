use serde::{Deserialize, Serialize};

use crate::audio_io::EmotionLabel;
use crate::config::AnalysisConfig;
use crate::error::{Error, Result};
use crate::mfdfa::mfdfa_analyze;
use crate::series::TimeSeries;
use crate::spectrum::low_fluct_area;
use crate::wtmm::wtmm_analyze;

/// One clip reduced to the three classifier features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub path: String,
    pub label: Option<EmotionLabel>,
    /// Area under the low-Holder branch of the MFDFA spectrum.
    #[serde(rename = "S")]
    pub s: f64,
    /// Zeros of the WTMM spectrum parabola.
    pub alpha1: f64,
    pub alpha2: f64,
}

impl FeatureVector {
    pub fn new(s: f64, alpha1: f64, alpha2: f64) -> Self {
        Self {
            path: String::new(),
            label: None,
            s,
            alpha1,
            alpha2,
        }
    }

    pub fn labeled(mut self, path: impl Into<String>, label: Option<EmotionLabel>) -> Self {
        self.path = path.into();
        self.label = label;
        self
    }

    pub fn values(&self) -> [f64; 3] {
        [self.s, self.alpha1, self.alpha2]
    }

    pub fn is_finite(&self) -> bool {
        self.values().iter().all(|v| v.is_finite())
    }
}

/// Runs both estimators on `x` and extracts `S` from the MFDFA spectrum and
/// `(alpha1, alpha2)` from the WTMM fit. Any estimator failure fails the
/// whole vector.
pub fn extract_features(x: &TimeSeries, cfg: &AnalysisConfig) -> Result<FeatureVector> {
    cfg.validate()?;
    let (mf, wt) = rayon::join(
        || mfdfa_analyze(x, &cfg.mfdfa),
        || wtmm_analyze(x, &cfg.wtmm),
    );
    let mf = mf?;
    let wt = wt?;
    let s = low_fluct_area(&mf.spectrum)?;
    let fv = FeatureVector::new(s, wt.fit.alpha1, wt.fit.alpha2);
    if !fv.is_finite() {
        return Err(Error::NonFiniteFeature);
    }
    if !(s > 0.0) {
        return Err(Error::DegenerateSpectrum {
            retained: mf.spectrum.n_retained(),
        });
    }
    Ok(fv)
}
