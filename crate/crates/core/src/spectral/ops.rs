use num_complex::Complex64;
use rayon::prelude::*;

use super::field::{Field, Repr};
use super::grid::{SpectralGrid, TWO_PI};
use crate::error::{Error, Result};

/// Relative slack for the zero-mean precondition of negative powers:
/// the mean part may carry at most this fraction of `‖f‖_{L²}`.
pub const ZERO_MEAN_TOL: f64 = 1e-12;

/// Three-component vector field.
#[derive(Clone, Debug)]
pub struct VecField(pub [Field; 3]);

impl VecField {
    pub fn new(x: Field, y: Field, z: Field) -> Self {
        Self([x, y, z])
    }

    pub fn zeros(grid: &std::sync::Arc<SpectralGrid>, repr: Repr) -> Self {
        Self([
            Field::zeros(grid, repr),
            Field::zeros(grid, repr),
            Field::zeros(grid, repr),
        ])
    }

    pub fn components(&self) -> &[Field; 3] {
        &self.0
    }

    pub fn grid(&self) -> &std::sync::Arc<SpectralGrid> {
        self.0[0].grid()
    }

    pub fn to_spectral(&self) -> VecField {
        Self(self.0.clone().map(Field::into_spectral))
    }

    pub fn to_physical(&self) -> VecField {
        Self(self.0.clone().map(Field::into_physical))
    }

    pub fn map<F: FnMut(&Field) -> Field>(&self, mut f: F) -> VecField {
        Self([f(&self.0[0]), f(&self.0[1]), f(&self.0[2])])
    }

    pub fn try_map<F: FnMut(&Field) -> Result<Field>>(&self, mut f: F) -> Result<VecField> {
        Ok(Self([f(&self.0[0])?, f(&self.0[1])?, f(&self.0[2])?]))
    }

    pub fn scaled(&self, c: f64) -> VecField {
        self.map(|f| f.scaled(c))
    }

    pub fn add_scaled(&self, other: &VecField, c: f64) -> Result<VecField> {
        Ok(Self([
            self.0[0].add_scaled(&other.0[0], c)?,
            self.0[1].add_scaled(&other.0[1], c)?,
            self.0[2].add_scaled(&other.0[2], c)?,
        ]))
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.0.iter().map(Field::l2_norm_sq).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// Largest pointwise Euclidean magnitude.
    pub fn max_magnitude(&self) -> f64 {
        let p = self.to_physical();
        let [x, y, z] = &p.0;
        let (x, y, z) = (x.physical().unwrap(), y.physical().unwrap(), z.physical().unwrap());
        (0..x.len())
            .map(|i| (x[i] * x[i] + y[i] * y[i] + z[i] * z[i]).sqrt())
            .fold(0.0, f64::max)
    }

    pub fn without_mean(&self) -> VecField {
        self.map(Field::without_mean)
    }
}

/// Applies a per-mode complex multiplier in spectral space.
pub fn apply_multiplier<M>(f: &Field, m: M) -> Field
where
    M: Fn(usize) -> Complex64 + Sync,
{
    let mut s = f.to_spectral();
    s.spectral_mut()
        .unwrap()
        .par_iter_mut()
        .enumerate()
        .for_each(|(k, z)| *z *= m(k));
    s
}

/// Fails unless `|mean|·L^{3/2} ≤ ZERO_MEAN_TOL·‖f‖`, the precondition for
/// applying `Λ^s` with `s < 0`.
pub fn check_zero_mean(f: &Field, s: f64) -> Result<()> {
    let mean = f.mean();
    let mean_part = mean.abs() * f.grid().volume().sqrt();
    let tol = ZERO_MEAN_TOL * f.l2_norm();
    if mean_part > tol {
        return Err(Error::NegativePowerOnNonzeroMean { s, mean, tol });
    }
    Ok(())
}

/// `Λ^s f`: multiplies the coefficients by `|ξ|^s`.
///
/// For `s < 0` the field must have vanishing mean (up to
/// [`ZERO_MEAN_TOL`] relative to its norm); the zero mode is mapped to 0
/// for every `s != 0`.
pub fn lambda_pow(f: &Field, s: f64) -> Result<Field> {
    if s == 0.0 {
        return Ok(f.to_spectral());
    }
    let grid = f.grid().clone();
    if s < 0.0 {
        check_zero_mean(f, s)?;
    }
    Ok(apply_multiplier(f, |k| {
        if k == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(grid.xi_norm_sq(k).powf(0.5 * s), 0.0)
        }
    }))
}

/// `∂_axis f`, multiplier `2πi ξ_axis`.
pub fn partial(f: &Field, axis: usize) -> Field {
    let grid = f.grid().clone();
    apply_multiplier(f, |k| Complex64::new(0.0, TWO_PI * grid.derivative_xi(k)[axis]))
}

/// `∂_i ∂_j f`, multiplier `-(2π)² ξ_i ξ_j` (diagonal entries keep the
/// Nyquist frequency, matching the Laplacian).
pub fn second_partial(f: &Field, i: usize, j: usize) -> Field {
    let grid = f.grid().clone();
    apply_multiplier(f, |k| {
        let xi = if i == j {
            grid.xi(k)
        } else {
            grid.derivative_xi(k)
        };
        Complex64::new(-TWO_PI * TWO_PI * xi[i] * xi[j], 0.0)
    })
}

pub fn gradient(f: &Field) -> VecField {
    VecField([partial(f, 0), partial(f, 1), partial(f, 2)])
}

pub fn divergence(v: &VecField) -> Field {
    let grid = v.grid().clone();
    let comps: Vec<Field> = v.0.iter().map(Field::to_spectral).collect();
    let c: Vec<&[Complex64]> = comps.iter().map(|f| f.spectral().unwrap()).collect();
    let coeffs = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let xi = grid.derivative_xi(k);
            Complex64::new(0.0, TWO_PI) * (c[0][k] * xi[0] + c[1][k] * xi[1] + c[2][k] * xi[2])
        })
        .collect();
    Field::from_spectral(&grid, coeffs).unwrap()
}

/// `Δf`, multiplier `-|2πξ|²`.
pub fn laplacian(f: &Field) -> Field {
    let grid = f.grid().clone();
    apply_multiplier(f, |k| {
        Complex64::new(-TWO_PI * TWO_PI * grid.xi_norm_sq(k), 0.0)
    })
}

/// `∇ div v`.
pub fn grad_div(v: &VecField) -> VecField {
    gradient(&divergence(v))
}

/// Full velocity gradient `G[i][j] = ∂_j v_i`.
pub fn velocity_gradient(v: &VecField) -> [[Field; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| partial(&v.0[i], j)))
}

/// Symmetric gradient `D[i][j] = (∂_j v_i + ∂_i v_j) / 2`.
pub fn sym_gradient(v: &VecField) -> [[Field; 3]; 3] {
    let g = velocity_gradient(v);
    std::array::from_fn(|i| {
        std::array::from_fn(|j| g[i][j].add_scaled(&g[j][i], 1.0).unwrap().scaled(0.5))
    })
}

/// Zeroes every mode outside the two-thirds mask.
pub fn dealias(f: &Field) -> Field {
    let grid = f.grid().clone();
    apply_multiplier(f, |k| {
        if grid.keeps(k) {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn dealias_vec(v: &VecField) -> VecField {
    v.map(dealias)
}

/// `‖∇^k f‖²_{L²}` for real order `k ≥ 0`, i.e. `L³ Σ |2πξ|^{2k} |f̂|²`.
pub fn derivative_norm_sq(f: &Field, order: f64) -> f64 {
    let s = f.to_spectral();
    let grid = s.grid();
    let c = s.spectral().unwrap();
    let sum: f64 = c
        .iter()
        .enumerate()
        .map(|(k, z)| {
            if order == 0.0 {
                z.norm_sqr()
            } else if k == 0 {
                0.0
            } else {
                (TWO_PI * TWO_PI * grid.xi_norm_sq(k)).powf(order) * z.norm_sqr()
            }
        })
        .sum();
    grid.volume() * sum
}
