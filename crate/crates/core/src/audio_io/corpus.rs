use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::EmotionLabel;
use crate::error::{Error, Result};

/// File-naming convention of a supported emotional-speech corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Corpus {
    Berlin,
    Tess,
}

impl Corpus {
    pub fn parse_label(self, path: &str) -> Result<Option<EmotionLabel>> {
        match self {
            Corpus::Berlin => parse_label_berlin(path),
            Corpus::Tess => parse_label_tess(path),
        }
    }

    /// Guess the convention of a single file name (TESS is tried first since
    /// its underscore pattern cannot collide with Berlin's fixed layout).
    pub fn detect(path: &str) -> Option<Corpus> {
        if parse_label_tess(path).is_ok() {
            Some(Corpus::Tess)
        } else if parse_label_berlin(path).is_ok() {
            Some(Corpus::Berlin)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub path: PathBuf,
    pub label: EmotionLabel,
    pub corpus: Corpus,
}

fn wav_stem(path: &str) -> Option<&str> {
    let base = path.rsplit(['/', '\\']).next().unwrap_or(path);
    let (stem, ext) = base.rsplit_once('.')?;
    ext.eq_ignore_ascii_case("wav").then_some(stem)
}

/// Berlin EMO-DB names look like `03a01Fa.wav`: two speaker digits, a
/// three-character text code, the emotion letter (German initial) and a
/// version letter.
pub fn parse_label_berlin(filename: &str) -> Result<Option<EmotionLabel>> {
    let malformed = || Error::MalformedName(filename.to_string());
    let stem = wav_stem(filename).ok_or_else(malformed)?;
    let b = stem.as_bytes();
    let well_formed = b.len() == 7
        && b[0].is_ascii_digit()
        && b[1].is_ascii_digit()
        && b[2].is_ascii_lowercase()
        && b[3].is_ascii_digit()
        && b[4].is_ascii_digit()
        && b[6].is_ascii_lowercase();
    if !well_formed {
        return Err(malformed());
    }
    match b[5] {
        b'F' => Ok(Some(EmotionLabel::Happiness)),
        b'N' => Ok(Some(EmotionLabel::Neutral)),
        b'T' => Ok(Some(EmotionLabel::Sadness)),
        // Wut (anger), Angst (fear), Ekel (disgust), Langeweile (boredom)
        b'W' | b'A' | b'E' | b'L' => Ok(None),
        _ => Err(malformed()),
    }
}

/// TESS names look like `OAF_back_happy.wav`: actor, target word, emotion.
pub fn parse_label_tess(path: &str) -> Result<Option<EmotionLabel>> {
    let malformed = || Error::MalformedName(path.to_string());
    let stem = wav_stem(path).ok_or_else(malformed)?;
    let tokens: Vec<&str> = stem.split('_').collect();
    if tokens.len() < 3 || tokens.iter().any(|t| t.is_empty()) {
        return Err(malformed());
    }
    let emotion = tokens[tokens.len() - 1].to_ascii_lowercase();
    Ok(match emotion.as_str() {
        "happy" => Some(EmotionLabel::Happiness),
        "neutral" => Some(EmotionLabel::Neutral),
        "sad" => Some(EmotionLabel::Sadness),
        _ => None,
    })
}

fn collect_files(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        let kind = entry.file_type().map_err(|e| Error::io(&path, e))?;
        if kind.is_dir() {
            collect_files(&path, out)?;
        } else if kind.is_file() {
            out.push(path);
        }
    }
    Ok(())
}

/// Recursively list every in-scope clip under `root`, sorted by path.
///
/// Files with names outside the convention or with an out-of-scope emotion
/// are skipped silently.
pub fn scan_corpus(root: impl AsRef<Path>, convention: Corpus) -> Result<Vec<CorpusEntry>> {
    let root = root.as_ref();
    let mut files = Vec::new();
    collect_files(root, &mut files)?;
    files.sort();
    Ok(files
        .into_iter()
        .filter_map(|path| {
            let label = convention.parse_label(&path.to_string_lossy()).ok()??;
            Some(CorpusEntry {
                path,
                label,
                corpus: convention,
            })
        })
        .collect())
}
