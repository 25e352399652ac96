use std::fmt;

use rand::seq::index;
use serde::{Deserialize, Serialize};

use super::features::FeatureVector;
use super::svm::{svm_predict, svm_train, SvmModel};
use crate::audio_io::EmotionLabel;
use crate::error::{Error, Result};
use crate::synth::seeded_rng;

/// Counts indexed `[true][predicted]` in [`EmotionLabel`] order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: [[u64; 3]; 3],
}

impl ConfusionMatrix {
    pub fn record(&mut self, truth: EmotionLabel, predicted: EmotionLabel) {
        self.counts[truth.index()][predicted.index()] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> u64 {
        (0..3).map(|i| self.counts[i][i]).sum()
    }

    /// `trace / total`, or 0 for an empty matrix.
    pub fn accuracy(&self) -> f64 {
        match self.total() {
            0 => 0.0,
            t => self.correct() as f64 / t as f64,
        }
    }

    pub fn row_sums(&self) -> [u64; 3] {
        self.counts.map(|r| r.iter().sum())
    }
}

impl fmt::Display for ConfusionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:>12}", "true\\pred")?;
        for l in EmotionLabel::ALL {
            write!(f, " {:>10}", l.as_str())?;
        }
        writeln!(f)?;
        for l in EmotionLabel::ALL {
            write!(f, "{:>12}", l.as_str())?;
            for n in self.counts[l.index()] {
                write!(f, " {n:>10}")?;
            }
            writeln!(f)?;
        }
        write!(
            f,
            "accuracy {}/{} = {:.4}",
            self.correct(),
            self.total(),
            self.accuracy()
        )
    }
}

/// Predicts every labeled vector in `test` and tallies the outcomes.
pub fn evaluate(model: &SvmModel, test: &[FeatureVector]) -> Result<ConfusionMatrix> {
    let mut cm = ConfusionMatrix::default();
    for fv in test {
        let truth = fv.label.ok_or_else(|| {
            Error::InvalidParameter(format!("test vector {:?} has no label", fv.path))
        })?;
        if !model.classes.contains(&truth) {
            return Err(Error::ClassMismatch(format!(
                "label {truth} of {:?} is not among the model classes {:?}",
                fv.path, model.classes
            )));
        }
        cm.record(truth, svm_predict(model, fv)?);
    }
    Ok(cm)
}

/// Outcome of repeated random per-class splits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub mean_accuracy: f64,
    /// Population standard deviation of the per-run accuracies.
    pub std_accuracy: f64,
    pub runs: Vec<ConfusionMatrix>,
}

/// Each run holds out `test_per_class` vectors of every class (drawn
/// without replacement from one seeded stream), trains on the rest and
/// evaluates on the held-out set.
pub fn cross_validate(
    data: &[FeatureVector],
    runs: usize,
    test_per_class: usize,
    seed: u64,
    c: f64,
) -> Result<CrossValidation> {
    if runs == 0 || test_per_class == 0 {
        return Err(Error::InvalidParameter(
            "cross-validation needs at least one run and one test vector per class".into(),
        ));
    }
    let mut by_class: Vec<(EmotionLabel, Vec<usize>)> = Vec::new();
    for l in EmotionLabel::ALL {
        let idx: Vec<usize> = data
            .iter()
            .enumerate()
            .filter(|(_, fv)| fv.label == Some(l))
            .map(|(i, _)| i)
            .collect();
        if !idx.is_empty() {
            by_class.push((l, idx));
        }
    }
    if let Some(fv) = data.iter().find(|fv| fv.label.is_none()) {
        return Err(Error::InvalidParameter(format!(
            "feature vector {:?} has no label",
            fv.path
        )));
    }
    if by_class.len() < 2 {
        return Err(Error::SingleClass);
    }
    for (l, idx) in &by_class {
        if idx.len() <= test_per_class {
            return Err(Error::InsufficientSamples {
                class: l.to_string(),
                available: idx.len(),
                required: test_per_class,
            });
        }
    }

    let mut rng = seeded_rng(seed);
    let mut matrices = Vec::with_capacity(runs);
    for _ in 0..runs {
        let mut is_test = vec![false; data.len()];
        for (_, idx) in &by_class {
            for k in index::sample(&mut rng, idx.len(), test_per_class) {
                is_test[idx[k]] = true;
            }
        }
        let (test, train): (Vec<_>, Vec<_>) =
            data.iter().cloned().zip(&is_test).partition(|(_, &t)| t);
        let train: Vec<FeatureVector> = train.into_iter().map(|(fv, _)| fv).collect();
        let test: Vec<FeatureVector> = test.into_iter().map(|(fv, _)| fv).collect();
        let model = svm_train(&train, c)?;
        matrices.push(evaluate(&model, &test)?);
    }

    let acc: Vec<f64> = matrices.iter().map(ConfusionMatrix::accuracy).collect();
    let mean = acc.iter().sum::<f64>() / acc.len() as f64;
    let var = acc.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / acc.len() as f64;
    Ok(CrossValidation {
        mean_accuracy: mean,
        std_accuracy: var.sqrt(),
        runs: matrices,
    })
}
