//! Multifractal signatures of speech.
//!
//! The crate estimates singularity spectra of a signal with two independent
//! estimators (multifractal detrended fluctuation analysis and the wavelet
//! transform modulus maxima method), reduces them to the three-dimensional
//! feature `(S, alpha1, alpha2)` and classifies emotions with a one-vs-one
//! linear SVM.

pub mod audio_io;
pub mod classify;
pub mod config;
pub mod error;
pub mod fft;
pub mod mfdfa;
pub mod regression;
pub mod series;
pub mod spectrum;
pub mod synth;
pub mod wtmm;

pub use error::{Error, Result};
pub use series::TimeSeries;
