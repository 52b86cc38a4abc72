use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// 2π, the factor relating the frequency ξ to the derivative symbol: ∇ ↔ 2πiξ.
pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Smallest admissible number of points per axis.
pub const MIN_POINTS: usize = 8;

/// Periodic box `[0, L)^3` sampled on `n^3` points.
///
/// Frequencies follow the kernel `e^{2πi x·ξ}` with `ξ = k / L` for the
/// signed integer index `k`, so `Λ^s` is multiplication by `|ξ|^s` and a
/// derivative `∂_j` is multiplication by `2πi ξ_j`.
///
/// Flat storage index of point or mode `(i, j, l)` is `(i * n + j) * n + l`.
pub struct SpectralGrid {
    n: usize,
    box_length: f64,
    index: Vec<i64>,
    keep: Vec<bool>,
    pub(crate) fft_forward: Arc<dyn Fft<f64>>,
    pub(crate) fft_inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("n", &self.n)
            .field("box_length", &self.box_length)
            .finish()
    }
}

impl PartialEq for SpectralGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.box_length == other.box_length
    }
}

/// Builds a grid with `n` points per axis on a box of side `box_length`.
pub fn make_grid(n: usize, box_length: f64) -> Result<Arc<SpectralGrid>> {
    SpectralGrid::new(n, box_length)
}

impl SpectralGrid {
    pub fn new(n: usize, box_length: f64) -> Result<Arc<Self>> {
        if !n.is_multiple_of(2) || n < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be even and >= {MIN_POINTS}, got {n}"
            )));
        }
        if !(box_length > 0.0 && box_length.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "box length must be positive, got {box_length}"
            )));
        }
        let half = (n / 2) as i64;
        let index: Vec<i64> = (0..n as i64)
            .map(|i| if i < half { i } else { i - n as i64 })
            .collect();
        // two-thirds rule: keep |k| <= n/3
        let cut = (n / 3) as i64;
        let keep = index.iter().map(|k| k.abs() <= cut).collect();
        let mut planner = FftPlanner::new();
        Ok(Arc::new(Self {
            n,
            box_length,
            index,
            keep,
            fft_forward: planner.plan_fft_forward(n),
            fft_inverse: planner.plan_fft_inverse(n),
        }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    /// Total number of points (= number of modes).
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `L^3`, the factor in `‖f‖²_{L²} = L³ Σ_k |f̂_k|²`.
    pub fn volume(&self) -> f64 {
        self.box_length.powi(3)
    }

    /// Quadrature weight `(L/n)^3` of one grid point.
    pub fn cell_volume(&self) -> f64 {
        (self.box_length / self.n as f64).powi(3)
    }

    pub fn spacing(&self) -> f64 {
        self.box_length / self.n as f64
    }

    /// Signed integer index along one axis.
    pub fn axis_index(&self, i: usize) -> i64 {
        self.index[i]
    }

    /// Per-axis frequencies `k / L` in storage order.
    pub fn axis_wavenumbers(&self) -> Vec<f64> {
        self.index
            .iter()
            .map(|&k| k as f64 / self.box_length)
            .collect()
    }

    pub fn is_nyquist(&self, i: usize) -> bool {
        i == self.n / 2
    }

    /// Splits a flat index into its three axis positions.
    #[inline]
    pub fn unflatten(&self, flat: usize) -> [usize; 3] {
        let n = self.n;
        [flat / (n * n), (flat / n) % n, flat % n]
    }

    #[inline]
    pub fn flatten(&self, pos: [usize; 3]) -> usize {
        (pos[0] * self.n + pos[1]) * self.n + pos[2]
    }

    /// Signed integer mode index `k` of a flat spectral index.
    #[inline]
    pub fn mode(&self, flat: usize) -> [i64; 3] {
        let p = self.unflatten(flat);
        [self.index[p[0]], self.index[p[1]], self.index[p[2]]]
    }

    /// Flat index of the mode `k` (components taken modulo `n`).
    pub fn flat_of_mode(&self, k: [i64; 3]) -> usize {
        let n = self.n as i64;
        let w = |c: i64| c.rem_euclid(n) as usize;
        self.flatten([w(k[0]), w(k[1]), w(k[2])])
    }

    /// Flat index of the mode `-k`.
    #[inline]
    pub fn conjugate_index(&self, flat: usize) -> usize {
        let n = self.n;
        let p = self.unflatten(flat);
        let c = |i: usize| (n - i) % n;
        self.flatten([c(p[0]), c(p[1]), c(p[2])])
    }

    /// Frequency vector `ξ = k / L`.
    #[inline]
    pub fn xi(&self, flat: usize) -> [f64; 3] {
        let k = self.mode(flat);
        let l = self.box_length;
        [k[0] as f64 / l, k[1] as f64 / l, k[2] as f64 / l]
    }

    /// `|k|^2` as an exact integer.
    #[inline]
    pub fn k_squared(&self, flat: usize) -> i64 {
        let k = self.mode(flat);
        k[0] * k[0] + k[1] * k[1] + k[2] * k[2]
    }

    /// `|ξ|^2`.
    #[inline]
    pub fn xi_norm_sq(&self, flat: usize) -> f64 {
        self.k_squared(flat) as f64 / (self.box_length * self.box_length)
    }

    /// Derivative modulus `|2πξ|`.
    #[inline]
    pub fn rho(&self, flat: usize) -> f64 {
        TWO_PI * self.xi_norm_sq(flat).sqrt()
    }

    /// Frequency used by odd-order derivatives: the Nyquist entry is zeroed
    /// so the result stays Hermitian.
    #[inline]
    pub fn derivative_xi(&self, flat: usize) -> [f64; 3] {
        let p = self.unflatten(flat);
        let l = self.box_length;
        let f = |i: usize| {
            if self.is_nyquist(i) {
                0.0
            } else {
                self.index[i] as f64 / l
            }
        };
        [f(p[0]), f(p[1]), f(p[2])]
    }

    /// Whether the mode survives two-thirds dealiasing.
    #[inline]
    pub fn keeps(&self, flat: usize) -> bool {
        let p = self.unflatten(flat);
        self.keep[p[0]] && self.keep[p[1]] && self.keep[p[2]]
    }

    /// Physical coordinate of a grid point.
    #[inline]
    pub fn point(&self, flat: usize) -> [f64; 3] {
        let p = self.unflatten(flat);
        let h = self.spacing();
        [p[0] as f64 * h, p[1] as f64 * h, p[2] as f64 * h]
    }

    /// Lowest nonzero derivative modulus `2π / L`.
    pub fn lowest_rho(&self) -> f64 {
        TWO_PI / self.box_length
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_wavenumbers_follow_dft_order() {
        let g = make_grid(8, 1.0).unwrap();
        assert_eq!(
            g.axis_wavenumbers(),
            vec![0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0]
        );
        let g2 = make_grid(8, 2.0).unwrap();
        let expect: Vec<f64> = [0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0]
            .iter()
            .map(|k| k / 2.0)
            .collect();
        assert_eq!(g2.axis_wavenumbers(), expect);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(make_grid(7, 1.0).is_err());
        assert!(make_grid(6, 1.0).is_err());
        assert!(make_grid(8, 0.0).is_err());
        assert!(make_grid(8, -1.0).is_err());
    }

    #[test]
    fn zero_mode_and_mask_symmetry() {
        let g = make_grid(12, 3.0).unwrap();
        assert_eq!(g.xi(0), [0.0, 0.0, 0.0]);
        for flat in 0..g.len() {
            assert_eq!(g.keeps(flat), g.keeps(g.conjugate_index(flat)));
            assert_eq!(g.conjugate_index(g.conjugate_index(flat)), flat);
        }
        // Nyquist always removed
        assert!(!g.keeps(g.flat_of_mode([6, 0, 0])));
        assert!(g.keeps(g.flat_of_mode([4, -4, 4])));
        assert!(!g.keeps(g.flat_of_mode([5, 0, 0])));
    }
}
