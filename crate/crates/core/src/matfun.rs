//! Exponential and φ-functions of small dense real matrices.
//!
//! The primary route diagonalizes the matrix (eigenvalues from a Schur
//! form, eigenvectors from the null space of `A - λI`). When eigenvalues
//! nearly coalesce or the eigenvector basis is ill conditioned, the
//! functions are read off the exponential of an augmented block matrix
//! computed by Padé scaling-and-squaring.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Eigenvalues closer than this (relative to `max(1, max|λ|)`) count as
/// coalescing.
pub const COALESCE_TOL: f64 = 1e-8;

/// Largest accepted Frobenius condition estimate of the eigenvector basis.
pub const MAX_BASIS_CONDITION: f64 = 1e6;

const SCHUR_MAX_ITER: usize = 500;

/// `e^A`, `φ₁(A)` and `φ₂(A)` with `φ₁(z) = (e^z - 1)/z`,
/// `φ₂(z) = (e^z - 1 - z)/z²`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiSet {
    pub exp: DMatrix<f64>,
    pub phi1: DMatrix<f64>,
    pub phi2: DMatrix<f64>,
}

/// Which route produced a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Eigen,
    Augmented,
}

/// `e^z - 1` without cancellation near zero.
pub fn expm1_complex(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    let s = (0.5 * y).sin();
    Complex64::new(x.exp_m1() * y.cos() - 2.0 * s * s, x.exp() * y.sin())
}

pub fn phi1_scalar(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        // 1 + z/2 + z²/6 + z³/24 + z⁴/120
        Complex64::new(1.0, 0.0)
            + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)))
    } else {
        expm1_complex(z) / z
    }
}

pub fn phi2_scalar(z: Complex64) -> Complex64 {
    if z.norm() < 1.0 {
        // Σ z^j / (j+2)!
        let mut term = Complex64::new(0.5, 0.0);
        let mut sum = term;
        for j in 1..20 {
            term = term * z / (j + 2) as f64;
            sum += term;
        }
        sum
    } else {
        (phi1_scalar(z) - 1.0) / z
    }
}

/// Eigenvalues and a right eigenvector basis of a real matrix of size at
/// most 3, or `None` if the decomposition is unreliable.
pub fn eigen_decompose(a: &DMatrix<f64>) -> Option<(Vec<Complex64>, DMatrix<Complex64>)> {
    let n = a.nrows();
    if n == 0 || n > 3 || a.ncols() != n {
        return None;
    }
    let lambdas: Vec<Complex64> = if n == 1 {
        vec![Complex64::new(a[(0, 0)], 0.0)]
    } else {
        // Bounded iteration count: the unbounded Schur loop can stall on
        // nearly defective inputs, and those take the fallback route anyway.
        nalgebra::Schur::try_new(a.clone(), f64::EPSILON, SCHUR_MAX_ITER)?
            .complex_eigenvalues()
            .iter()
            .map(|z| Complex64::new(z.re, z.im))
            .collect()
    };
    let scale = lambdas.iter().fold(1.0_f64, |m, z| m.max(z.norm()));
    for i in 0..n {
        for j in i + 1..n {
            if (lambdas[i] - lambdas[j]).norm() < COALESCE_TOL * scale {
                return None;
            }
        }
    }
    let ac = a.map(|x| Complex64::new(x, 0.0));
    let mut v = DMatrix::<Complex64>::zeros(n, n);
    for (col, &lam) in lambdas.iter().enumerate() {
        let shifted = &ac - DMatrix::<Complex64>::identity(n, n) * lam;
        let vec = null_vector(&shifted)?;
        for r in 0..n {
            v[(r, col)] = vec[r];
        }
    }
    let vinv = v.clone().try_inverse()?;
    let cond = frobenius(&v) * frobenius(&vinv);
    if !cond.is_finite() || cond > MAX_BASIS_CONDITION {
        return None;
    }
    Some((lambdas, v))
}

fn frobenius(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn null_vector(m: &DMatrix<Complex64>) -> Option<Vec<Complex64>> {
    let n = m.nrows();
    let candidates: Vec<Vec<Complex64>> = match n {
        1 => vec![vec![Complex64::new(1.0, 0.0)]],
        2 => (0..2)
            .map(|r| vec![m[(r, 1)], -m[(r, 0)]])
            .collect(),
        3 => {
            let row = |r: usize| [m[(r, 0)], m[(r, 1)], m[(r, 2)]];
            let cross = |p: [Complex64; 3], q: [Complex64; 3]| {
                vec![
                    p[1] * q[2] - p[2] * q[1],
                    p[2] * q[0] - p[0] * q[2],
                    p[0] * q[1] - p[1] * q[0],
                ]
            };
            vec![
                cross(row(0), row(1)),
                cross(row(0), row(2)),
                cross(row(1), row(2)),
            ]
        }
        _ => return None,
    };
    let best = candidates.into_iter().max_by(|p, q| {
        let np: f64 = p.iter().map(|z| z.norm_sqr()).sum();
        let nq: f64 = q.iter().map(|z| z.norm_sqr()).sum();
        np.total_cmp(&nq)
    })?;
    let norm = best.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return None;
    }
    Some(best.into_iter().map(|z| z / norm).collect())
}

fn apply_spectral<F: Fn(Complex64) -> Complex64>(
    lambdas: &[Complex64],
    v: &DMatrix<Complex64>,
    vinv: &DMatrix<Complex64>,
    f: F,
) -> DMatrix<f64> {
    let n = lambdas.len();
    let d = DMatrix::<Complex64>::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        lambdas.iter().map(|&l| f(l)),
    ));
    (v * d * vinv).map(|z| z.re)
}

/// `e^A`, `φ₁(A)`, `φ₂(A)` together with the route used.
pub fn phi_functions_with_route(a: &DMatrix<f64>) -> (PhiSet, Route) {
    if let Some((lambdas, v)) = eigen_decompose(a) {
        let vinv = v.clone().try_inverse().expect("checked in eigen_decompose");
        let set = PhiSet {
            exp: apply_spectral(&lambdas, &v, &vinv, |z| z.exp()),
            phi1: apply_spectral(&lambdas, &v, &vinv, phi1_scalar),
            phi2: apply_spectral(&lambdas, &v, &vinv, phi2_scalar),
        };
        if set.exp.iter().chain(set.phi1.iter()).chain(set.phi2.iter()).all(|x| x.is_finite()) {
            return (set, Route::Eigen);
        }
    }
    (augmented_phi_functions(a), Route::Augmented)
}

pub fn phi_functions(a: &DMatrix<f64>) -> PhiSet {
    phi_functions_with_route(a).0
}

/// `e^A` by the same routes as [`phi_functions`].
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    if let Some((lambdas, v)) = eigen_decompose(a) {
        let vinv = v.clone().try_inverse().expect("checked in eigen_decompose");
        let e = apply_spectral(&lambdas, &v, &vinv, |z| z.exp());
        if e.iter().all(|x| x.is_finite()) {
            return e;
        }
    }
    a.exp()
}

/// Reads `e^A`, `φ₁(A)`, `φ₂(A)` from the first block row of
/// `exp([[A, I, 0], [0, 0, I], [0, 0, 0]])`.
pub fn augmented_phi_functions(a: &DMatrix<f64>) -> PhiSet {
    let n = a.nrows();
    let mut big = DMatrix::<f64>::zeros(3 * n, 3 * n);
    big.view_mut((0, 0), (n, n)).copy_from(a);
    for i in 0..n {
        big[(i, n + i)] = 1.0;
        big[(n + i, 2 * n + i)] = 1.0;
    }
    let e = big.exp();
    PhiSet {
        exp: e.view((0, 0), (n, n)).into_owned(),
        phi1: e.view((0, n), (n, n)).into_owned(),
        phi2: e.view((0, 2 * n), (n, n)).into_owned(),
    }
}
