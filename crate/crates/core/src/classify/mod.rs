//! The `(S, alpha1, alpha2)` feature space and the one-vs-one linear SVM
//! trained on it.

mod eval;
mod features;
mod svm;

pub use eval::{cross_validate, evaluate, ConfusionMatrix, CrossValidation};
pub use features::{extract_features, FeatureVector};
pub use svm::{
    standardize, svm_predict, svm_train, train_binary, BinarySolution, PairwiseSvm, SmoParams,
    Standardizer, SvmModel, MODEL_VERSION,
};
