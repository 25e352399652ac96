//! Audio ingestion: WAV decoding, peak normalization and the two corpus
//! file-naming conventions (Berlin EMO-DB and TESS).

mod corpus;
mod wav;

pub use corpus::{parse_label_berlin, parse_label_tess, scan_corpus, Corpus, CorpusEntry};
pub use wav::{decode_wav, encode_wav_f32, read_wav};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// The three emotion classes handled by the classifier.
///
/// The declaration order is the confusion-matrix index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmotionLabel {
    Happiness,
    Neutral,
    Sadness,
}

impl EmotionLabel {
    pub const ALL: [EmotionLabel; 3] = [
        EmotionLabel::Happiness,
        EmotionLabel::Neutral,
        EmotionLabel::Sadness,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EmotionLabel::Happiness => "happiness",
            EmotionLabel::Neutral => "neutral",
            EmotionLabel::Sadness => "sadness",
        }
    }
}

impl fmt::Display for EmotionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EmotionLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "happiness" | "happy" => Ok(EmotionLabel::Happiness),
            "neutral" => Ok(EmotionLabel::Neutral),
            "sadness" | "sad" => Ok(EmotionLabel::Sadness),
            other => Err(Error::InvalidParameter(format!(
                "unknown emotion label {other:?}"
            ))),
        }
    }
}

/// Divide by the peak magnitude so that `max |x| == 1`.
pub fn normalize_peak(x: &TimeSeries) -> Result<TimeSeries> {
    let peak = x.samples().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return Err(Error::AllZeroSignal);
    }
    x.with_samples(x.samples().iter().map(|v| v / peak).collect())
}
