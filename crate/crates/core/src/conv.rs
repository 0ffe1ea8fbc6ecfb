//! Aperiodic discrete convolution through zero-padded FFTs.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// out_i = Σ_j k(i − j) f_j for i, j in 0..n, computed with FFTs of size m ≥ 2n.
pub struct Convolver {
    n: usize,
    m: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Convolver {
    pub fn new(n: usize) -> Self {
        Self::with_size(n, 2 * n)
    }

    pub fn with_size(n: usize, m: usize) -> Self {
        assert!(m >= 2 * n);
        let mut planner = FftPlanner::new();
        Convolver { n, m, fwd: planner.plan_fft_forward(m), inv: planner.plan_fft_inverse(m) }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Spectrum of the kernel sampled at offsets −(n−1)..=n−1.
    pub fn kernel_spectrum<K: Fn(i64) -> f64>(&self, k: K) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.m];
        let n = self.n as i64;
        for d in -(n - 1)..n {
            let idx = d.rem_euclid(self.m as i64) as usize;
            buf[idx] = Complex64::new(k(d), 0.0);
        }
        self.fwd.process(&mut buf);
        buf
    }

    pub fn apply(&self, spectrum: &[Complex64], f: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(f.len(), self.n);
        let mut buf = vec![Complex64::new(0.0, 0.0); self.m];
        buf[..self.n].copy_from_slice(f);
        self.fwd.process(&mut buf);
        for (b, s) in buf.iter_mut().zip(spectrum) {
            *b *= s;
        }
        self.inv.process(&mut buf);
        let scale = 1.0 / self.m as f64;
        buf.truncate(self.n);
        for b in buf.iter_mut() {
            *b *= scale;
        }
        buf
    }

    pub fn convolve<K: Fn(i64) -> f64>(&self, k: K, f: &[Complex64]) -> Vec<Complex64> {
        let s = self.kernel_spectrum(k);
        self.apply(&s, f)
    }
}
