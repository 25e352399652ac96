//! Analysis parameters for both estimators, serialized next to every output.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Logarithmically spaced integer scale grid, described by its bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleSpec {
    pub min: usize,
    /// Upper bound in samples; `None` means "the method's default fraction
    /// of the series length".
    pub max: Option<usize>,
    pub count: usize,
}

/// Evenly stepped moment-order grid `min, min + step, ..., max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QSpec {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl QSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = self.min.is_finite()
            && self.max.is_finite()
            && self.step.is_finite()
            && self.step > 0.0
            && self.max > self.min;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidGrid(format!(
                "q range [{}, {}] with step {} is not usable",
                self.min, self.max, self.step
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum CwtEngine {
    /// Direct summation for short kernels, FFT convolution for long ones.
    #[default]
    Auto,
    Direct,
    Fft,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MfdfaConfig {
    /// Detrending polynomial order, 0..=3.
    pub order: usize,
    /// Also segment from the end of the series (2 N_s segments per scale).
    pub bidirectional: bool,
    pub scales: ScaleSpec,
    pub q: QSpec,
}

impl Default for MfdfaConfig {
    fn default() -> Self {
        Self {
            order: 1,
            bidirectional: false,
            scales: ScaleSpec {
                min: 16,
                max: None,
                count: 20,
            },
            q: QSpec {
                min: -5.0,
                max: 5.0,
                step: 0.25,
            },
        }
    }
}

impl MfdfaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.order > 3 {
            return Err(Error::InvalidParameter(format!(
                "detrending order {} must lie in 0..=3",
                self.order
            )));
        }
        if self.scales.count < 4 {
            return Err(Error::InvalidGrid("at least 4 scales are required".into()));
        }
        self.q.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WtmmConfig {
    /// Derivative order m of the Gaussian analyzing wavelet, 1..=4.
    pub wavelet_order: u32,
    /// Kernel support is `[-half_width * s, half_width * s]`.
    pub half_width: f64,
    /// Analyze the mean-removed cumulative sum instead of the raw samples,
    /// which puts Holder exponents on the same footing as MFDFA.
    pub integrate: bool,
    pub engine: CwtEngine,
    pub scales: ScaleSpec,
    pub q: QSpec,
}

impl Default for WtmmConfig {
    fn default() -> Self {
        Self {
            wavelet_order: 2,
            half_width: 5.0,
            integrate: true,
            engine: CwtEngine::Auto,
            scales: ScaleSpec {
                min: 4,
                max: None,
                count: 24,
            },
            q: QSpec {
                min: -2.0,
                max: 5.0,
                step: 0.25,
            },
        }
    }
}

impl WtmmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=4).contains(&self.wavelet_order) {
            return Err(Error::UnsupportedOrder(self.wavelet_order));
        }
        if !(self.half_width.is_finite() && self.half_width >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "wavelet half width {} must be >= 1",
                self.half_width
            )));
        }
        if self.scales.count < 4 {
            return Err(Error::InvalidGrid("at least 4 scales are required".into()));
        }
        if self.scales.min < 1 {
            return Err(Error::InvalidGrid("wavelet scales start at 1".into()));
        }
        self.q.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MethodSelection {
    Mfdfa,
    Wtmm,
    #[default]
    Both,
}

/// Every tunable of the pipeline in one serializable record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub method: MethodSelection,
    pub mfdfa: MfdfaConfig,
    pub wtmm: WtmmConfig,
    /// Soft-margin regularization of the SVM.
    pub svm_c: f64,
    pub seed: u64,
    pub output_dir: Option<String>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            method: MethodSelection::Both,
            mfdfa: MfdfaConfig::default(),
            wtmm: WtmmConfig::default(),
            svm_c: 1.0,
            seed: 0,
            output_dir: None,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        self.mfdfa.validate()?;
        self.wtmm.validate()?;
        if !(self.svm_c.is_finite() && self.svm_c > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "SVM regularization C = {} must be positive",
                self.svm_c
            )));
        }
        Ok(())
    }
}
