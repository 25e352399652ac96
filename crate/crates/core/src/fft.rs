//! Thin wrapper over `rustfft` for the two places that need a transform:
//! circulant-embedding noise synthesis and FFT-based wavelet convolution.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

pub use rustfft::num_complex::Complex64 as Complex;

/// In-place forward DFT, `X_k = sum_j x_j exp(-2 pi i j k / n)` (unnormalized).
pub fn forward(buf: &mut [Complex64]) {
    FftPlanner::new().plan_fft_forward(buf.len()).process(buf);
}

/// In-place inverse DFT including the `1/n` normalization.
pub fn inverse(buf: &mut [Complex64]) {
    let n = buf.len();
    FftPlanner::new().plan_fft_inverse(n).process(buf);
    let inv = 1.0 / n as f64;
    for v in buf.iter_mut() {
        *v *= inv;
    }
}

/// Forward DFT of a real sequence.
pub fn forward_real(x: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward(&mut buf);
    buf
}
