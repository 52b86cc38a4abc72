//! Test-only helpers: analytic trigonometric fields with exact
//! derivatives, and a direct (non-FFT) discrete Fourier transform.

#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use nsdecay::spectral::{Field, SpectralGrid};

/// `Σ A cos(2π k·x / L + φ)`.
#[derive(Clone, Debug, Default)]
pub struct Trig {
    pub l: f64,
    pub terms: Vec<(f64, [i64; 3], f64)>,
}

impl Trig {
    pub fn new(l: f64, terms: &[(f64, [i64; 3], f64)]) -> Self {
        Self { l, terms: terms.to_vec() }
    }

    fn wave(&self, k: [i64; 3]) -> [f64; 3] {
        k.map(|c| 2.0 * PI * c as f64 / self.l)
    }

    fn arg(&self, x: [f64; 3], k: [i64; 3], ph: f64) -> f64 {
        let w = self.wave(k);
        w[0] * x[0] + w[1] * x[1] + w[2] * x[2] + ph
    }

    pub fn value(&self, x: [f64; 3]) -> f64 {
        self.terms.iter().map(|&(a, k, ph)| a * self.arg(x, k, ph).cos()).sum()
    }

    pub fn grad(&self, x: [f64; 3]) -> [f64; 3] {
        let mut g = [0.0; 3];
        for &(a, k, ph) in &self.terms {
            let w = self.wave(k);
            let s = -a * self.arg(x, k, ph).sin();
            for i in 0..3 {
                g[i] += s * w[i];
            }
        }
        g
    }

    pub fn hess(&self, x: [f64; 3]) -> [[f64; 3]; 3] {
        let mut h = [[0.0; 3]; 3];
        for &(a, k, ph) in &self.terms {
            let w = self.wave(k);
            let c = -a * self.arg(x, k, ph).cos();
            for i in 0..3 {
                for j in 0..3 {
                    h[i][j] += c * w[i] * w[j];
                }
            }
        }
        h
    }

    pub fn laplacian(&self, x: [f64; 3]) -> f64 {
        let h = self.hess(x);
        h[0][0] + h[1][1] + h[2][2]
    }

    pub fn field(&self, grid: &Arc<SpectralGrid>) -> Field {
        let me = self.clone();
        Field::from_fn(grid, move |x| me.value(x))
    }
}

/// `(1/N) Σ_x f(x) e^{-2πi k·x/L}` by direct summation.
pub fn direct_coefficient(grid: &SpectralGrid, values: &[f64], k: [i64; 3]) -> Complex64 {
    let l = grid.box_length();
    let mut acc = Complex64::new(0.0, 0.0);
    for (flat, v) in values.iter().enumerate() {
        let x = grid.point(flat);
        let ph = -2.0 * PI * (k[0] as f64 * x[0] + k[1] as f64 * x[1] + k[2] as f64 * x[2]) / l;
        acc += Complex64::from_polar(*v, ph);
    }
    acc / values.len() as f64
}

/// Modes kept by two-thirds dealiasing, as signed indices.
pub fn kept_modes(grid: &SpectralGrid) -> Vec<[i64; 3]> {
    (0..grid.len()).filter(|&f| grid.keeps(f)).map(|f| grid.mode(f)).collect()
}

pub fn coefficient(f: &Field, k: [i64; 3]) -> Complex64 {
    let s = f.to_spectral();
    s.spectral().unwrap()[f.grid().flat_of_mode(k)]
}

pub fn log_times(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}
