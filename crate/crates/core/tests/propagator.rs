//! Cached per-shell propagators against an independent Taylor
//! scaling-and-squaring exponential of the full linear symbol.

mod common;

use common::coefficient;
use nalgebra::DMatrix;
use num_complex::Complex64;
use nsdecay::integrator::{build_propagator, step_with, Phi, StepOptions};
use nsdecay::models::{linear_symbol, longitudinal_block, transverse_rate, ModelKind, ModelParams, State};
use nsdecay::spectral::{make_grid, Field, TWO_PI};

type CMat = DMatrix<Complex64>;

/// `exp(A)` by scaling to norm ≤ 1/2, a 30-term Taylor series and squaring.
fn taylor_expm(a: &CMat) -> CMat {
    let n = a.nrows();
    let norm: f64 = a.iter().map(|z| z.norm()).sum();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a / Complex64::new(2f64.powi(squarings), 0.0);
    let mut term = CMat::identity(n, n);
    let mut sum = CMat::identity(n, n);
    for k in 1..=30 {
        term = &term * &scaled / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

fn to_complex(m: &DMatrix<f64>) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

/// `φ_j(A)` from the exponential of the augmented block matrix
/// `[[A, I, 0], [0, 0, I], [0, 0, 0]]`.
fn phi_via_augmented(a: &CMat, j: usize) -> CMat {
    let n = a.nrows();
    let mut big = CMat::zeros(3 * n, 3 * n);
    big.view_mut((0, 0), (n, n)).copy_from(a);
    for i in 0..n {
        big[(i, n + i)] = Complex64::new(1.0, 0.0);
        big[(n + i, 2 * n + i)] = Complex64::new(1.0, 0.0);
    }
    let e = taylor_expm(&big);
    e.view((0, j * n), (n, n)).into_owned()
}

fn params_list() -> Vec<ModelParams> {
    vec![
        ModelParams::fcns(1.0, 0.0).unwrap(),
        ModelParams::fcns(0.3, 0.7).unwrap(),
        ModelParams::icns(0.8, 0.2, 1.4).unwrap(),
        ModelParams::icns(0.5, 0.0, 1.0).unwrap(),
    ]
}

#[test]
fn phi_functions_match_augmented_exponential() {
    let grid = make_grid(16, TWO_PI * 2.0).unwrap();
    for params in params_list() {
        let dt = 0.3;
        let cache = build_propagator(&grid, &params, dt).unwrap();
        for k in [[1, 0, 0], [1, 2, 0], [3, 3, 5], [5, 5, 5]] {
            let flat = grid.flat_of_mode(k);
            let rho = grid.rho(flat);
            let hm = to_complex(&longitudinal_block(rho, &params)) * Complex64::new(dt, 0.0);
            for (which, j) in [(Phi::Exp, 0), (Phi::Phi1, 1), (Phi::Phi2, 2)] {
                let want = phi_via_augmented(&hm, j);
                let got = to_complex(cache.longitudinal(flat, which).unwrap());
                let err = (&want - &got).norm();
                assert!(err <= 1e-12 * want.norm().max(1.0), "{params:?} k={k:?} {which:?}: {err:e}");
            }
            let z = transverse_rate(rho, &params) * dt;
            let trans = [z.exp(), (z.exp() - 1.0) / z, (z.exp() - 1.0 - z) / (z * z)];
            for (which, want) in [Phi::Exp, Phi::Phi1, Phi::Phi2].into_iter().zip(trans) {
                let got = cache.transverse(flat, which).unwrap();
                assert!((got - want).abs() <= 1e-12 * want.abs(), "{which:?}: {got} vs {want}");
            }
        }
    }
}

/// A state carrying one Fourier mode (plus its conjugate) in every component.
fn single_mode_state(grid: &std::sync::Arc<nsdecay::spectral::SpectralGrid>, kind: ModelKind, k: [i64; 3], v: &[Complex64]) -> State {
    let mut st = State::zeros(grid, kind);
    let flat = grid.flat_of_mode(k);
    let conj = grid.conjugate_index(flat);
    let make = |z: Complex64| {
        let mut c = vec![Complex64::new(0.0, 0.0); grid.len()];
        c[flat] = z;
        c[conj] = z.conj();
        Field::from_spectral(grid, c).unwrap()
    };
    st.a = make(v[0]);
    for i in 0..3 {
        st.u.0[i] = make(v[1 + i]);
    }
    if kind == ModelKind::Fcns {
        st.theta = Some(make(v[4]));
    }
    st
}

#[test]
fn linear_step_equals_symbol_exponential() {
    let grid = make_grid(16, 3.0).unwrap();
    let opts = StepOptions { linear_only: true, positivity_floor: 0.0 };
    for params in params_list() {
        let dt = 0.05;
        let cache = build_propagator(&grid, &params, dt).unwrap();
        let dim = params.kind.longitudinal_dim() + 2;
        for k in [[1, 0, 0], [0, -2, 1], [2, 3, -4], [5, 0, 5]] {
            let v: Vec<Complex64> = (0..dim)
                .map(|j| Complex64::from_polar(0.1 + 0.02 * j as f64, 0.7 * j as f64 + 0.3))
                .collect();
            let st = single_mode_state(&grid, params.kind, k, &v);
            let next = step_with(&st.to_spectral(), &cache, opts).unwrap();
            let m = linear_symbol(grid.xi(grid.flat_of_mode(k)), &params) * Complex64::new(dt, 0.0);
            let want = taylor_expm(&m) * nalgebra::DVector::from_vec(v.clone());
            let mut got = vec![coefficient(&next.a, k)];
            got.extend(next.u.0.iter().map(|f| coefficient(f, k)));
            if let Some(th) = &next.theta {
                got.push(coefficient(th, k));
            }
            for (g, w) in got.iter().zip(want.iter()) {
                assert!((g - w).norm() <= 1e-12 * want.norm(), "{params:?} k={k:?}: {g} vs {w}");
            }
        }
    }
}

#[test]
fn repeated_linear_steps_compose() {
    let grid = make_grid(8, 1.0).unwrap();
    let params = ModelParams::fcns(0.6, 0.1).unwrap();
    let dt = 0.01;
    let cache = build_propagator(&grid, &params, dt).unwrap();
    let k = [1, 1, 0];
    let v: Vec<Complex64> = (0..5).map(|j| Complex64::new(0.1, -0.05 * j as f64)).collect();
    let mut st = single_mode_state(&grid, ModelKind::Fcns, k, &v).to_spectral();
    let opts = StepOptions { linear_only: true, positivity_floor: 0.0 };
    for _ in 0..40 {
        st = step_with(&st, &cache, opts).unwrap();
    }
    let m = linear_symbol(grid.xi(grid.flat_of_mode(k)), &params) * Complex64::new(40.0 * dt, 0.0);
    let want = taylor_expm(&m) * nalgebra::DVector::from_vec(v);
    let got = coefficient(st.theta.as_ref().unwrap(), k);
    assert!((got - want[4]).norm() <= 1e-12 * want.norm());
}

#[test]
fn symbol_spectrum_splits_into_blocks() {
    for params in params_list() {
        for xi in [[0.3, 0.0, 0.0], [0.2, -0.5, 0.1], [1.0, 1.0, 1.0]] {
            let m = linear_symbol(xi, &params);
            let rho = TWO_PI * xi.iter().map(|x| x * x).sum::<f64>().sqrt();
            let block = longitudinal_block(rho, &params);
            let mut eigs: Vec<Complex64> = block.complex_eigenvalues().iter().copied().collect();
            eigs.push(Complex64::new(transverse_rate(rho, &params), 0.0));
            let n = m.nrows();
            let scale = m.norm().powi(n as i32);
            for lam in eigs {
                let shifted = &m - CMat::identity(n, n) * lam;
                let det = shifted.determinant();
                assert!(det.norm() <= 1e-9 * scale, "{params:?} ξ={xi:?} λ={lam}: det {det}");
            }
            // Transverse eigenvalue is double: the derivative of det also vanishes.
            let lam = Complex64::new(transverse_rate(rho, &params), 0.0);
            let h = 1e-4 * (1.0 + lam.norm());
            let det = |z: Complex64| (&m - CMat::identity(n, n) * z).determinant();
            let d1 = (det(lam + h) - det(lam - h)) / (2.0 * h);
            assert!(d1.norm() <= 1e-6 * scale, "double root: {d1}");
        }
    }
}
