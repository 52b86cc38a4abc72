//! Time stepping in the weakly nonlinear regime, material derivative and
//! relative entropy against independent evaluations.

mod common;

use common::{coefficient, Trig};
use nsdecay::diagnostics::DiagSettings;
use nsdecay::integrator::{build_propagator, integrate, step, step_with, StepOptions, TimeSettings};
use nsdecay::models::{advective_derivative, relative_entropy, ModelKind, ModelParams, State};
use nsdecay::spectral::{make_grid, Field, SpectralGrid, VecField, TWO_PI};
use nsdecay::Error;
use std::sync::Arc;

fn shear(grid: &Arc<SpectralGrid>, eps: f64) -> State {
    let mut st = State::zeros(grid, ModelKind::Fcns);
    let l = grid.box_length();
    st.u.0[1] = Field::from_fn(grid, move |x| eps * (TWO_PI * x[0] / l).sin());
    st.to_spectral()
}

#[test]
fn transverse_mode_decays_by_cached_factor() {
    let grid = make_grid(16, TWO_PI).unwrap();
    let params = ModelParams::fcns(0.7, 0.2).unwrap();
    let dt = 0.05;
    let cache = build_propagator(&grid, &params, dt).unwrap();
    let eps = 1e-6;
    let next = step(&shear(&grid, eps), &cache).unwrap();
    let k = [1, 0, 0];
    let rho = grid.rho(grid.flat_of_mode(k));
    let factor = (-params.mu * rho * rho * dt).exp();
    let c0 = coefficient(&shear(&grid, eps).u.0[1], k);
    let c1 = coefficient(&next.u.0[1], k);
    assert!((c1 - c0 * factor).norm() <= 10.0 * eps * c0.norm(), "{c1} vs {}", c0 * factor);
}

/// Deviation of one nonlinear step from one linear step, for amplitude `eps`.
fn nonlinear_deviation(eps: f64) -> f64 {
    let grid = make_grid(16, TWO_PI).unwrap();
    let params = ModelParams::fcns(0.7, 0.2).unwrap();
    let cache = build_propagator(&grid, &params, 0.05).unwrap();
    let l = grid.box_length();
    let mut st = State::zeros(&grid, ModelKind::Fcns);
    st.a = Field::from_fn(&grid, move |x| eps * (TWO_PI * (x[1] + x[2]) / l).cos());
    st.u.0[0] = Field::from_fn(&grid, move |x| eps * (TWO_PI * x[0] / l).sin());
    st.u.0[1] = Field::from_fn(&grid, move |x| 0.5 * eps * (TWO_PI * x[0] / l).sin());
    let st = st.to_spectral();
    let full = step(&st, &cache).unwrap();
    let lin = step_with(&st, &cache, StepOptions { linear_only: true, positivity_floor: 0.0 }).unwrap();
    let d = |f: &Field, g: &Field| f.add_scaled(g, -1.0).unwrap().l2_norm_sq();
    let mut sq = d(&full.a, &lin.a) + d(full.theta.as_ref().unwrap(), lin.theta.as_ref().unwrap());
    for i in 0..3 {
        sq += d(&full.u.0[i], &lin.u.0[i]);
    }
    sq.sqrt()
}

#[test]
fn nonlinear_correction_is_quadratic() {
    let e1 = nonlinear_deviation(1e-3);
    let e2 = nonlinear_deviation(5e-4);
    let ratio = e1 / e2;
    assert!(e1 > 0.0);
    assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
}

#[test]
fn advective_derivative_matches_finite_differences() {
    let grid = make_grid(16, 2.0).unwrap();
    let l = grid.box_length();
    let u = [
        Trig::new(l, &[(0.3, [1, 0, 0], 0.1), (0.1, [0, 1, 2], 1.0)]),
        Trig::new(l, &[(0.2, [0, 1, 1], -0.5)]),
        Trig::new(l, &[(0.25, [1, 1, 0], 0.8), (0.05, [2, 0, 0], 0.0)]),
    ];
    let field = VecField::new(u[0].field(&grid), u[1].field(&grid), u[2].field(&grid));
    let adv = advective_derivative(&field, &field).to_physical();
    let h = 1e-5;
    let mut max_err: f64 = 0.0;
    for flat in (0..grid.len()).step_by(37) {
        let x = grid.point(flat);
        let v: [f64; 3] = std::array::from_fn(|i| u[i].value(x));
        let shift = |s: f64| std::array::from_fn::<f64, 3, _>(|j| x[j] + s * h * v[j]);
        for (ui, ai) in u.iter().zip(&adv.0) {
            let fd = (ui.value(shift(1.0)) - ui.value(shift(-1.0))) / (2.0 * h);
            let got = ai.physical().unwrap()[flat];
            max_err = max_err.max((fd - got).abs());
        }
    }
    assert!(max_err < 1e-8, "{max_err:e}");
}

/// Periodic trapezoid rule in one variable; spectrally accurate for smooth
/// periodic integrands.
fn periodic_mean(f: impl Fn(f64) -> f64, n: usize) -> f64 {
    (0..n).map(|i| f(i as f64 / n as f64)).sum::<f64>() / n as f64
}

#[test]
fn relative_entropy_matches_quadrature() {
    let grid = make_grid(16, 1.5).unwrap();
    let l = grid.box_length();
    let amp = 0.3;
    let a = Field::from_fn(&grid, move |x| amp * (TWO_PI * x[0] / l).sin());
    for gamma in [1.0, 1.4, 2.0] {
        let h = |s: f64| {
            let rho = 1.0 + amp * (TWO_PI * s).sin();
            if gamma == 1.0 {
                rho * rho.ln() - rho + 1.0
            } else {
                (rho.powf(gamma) - 1.0 - gamma * (rho - 1.0)) / (gamma - 1.0)
            }
        };
        let want = periodic_mean(h, 4096) * grid.volume();
        let got = relative_entropy(&a, gamma).unwrap();
        assert!((got - want).abs() <= 1e-12 * want, "γ={gamma}: {got} vs {want}");
        // Quadratic limit H ≈ γ a²/2.
        let small = a.scaled(1e-4);
        let quad = 0.5 * gamma * small.l2_norm_sq();
        let got = relative_entropy(&small, gamma).unwrap();
        assert!((got - quad).abs() <= 1e-3 * quad);
    }
    let bad = Field::constant(&grid, -1.5);
    assert!(matches!(relative_entropy(&bad, 1.4), Err(Error::DensityNonpositive { .. })));
}

#[test]
fn zero_duration_run_has_one_record() {
    let grid = make_grid(8, TWO_PI).unwrap();
    let params = ModelParams::fcns(1.0, 0.0).unwrap();
    let time = TimeSettings { dt: 0.1, t_end: 0.0, cadence: 0.1, positivity_floor: 0.0 };
    let out = integrate(shear(&grid, 1e-3), &params, &time, &DiagSettings::default()).unwrap();
    assert_eq!(out.records.len(), 1);
    assert_eq!(out.steps, 0);
    assert!(out.abort.is_none());
}

#[test]
fn compression_wave_trips_positivity_floor() {
    let grid = make_grid(16, TWO_PI).unwrap();
    let params = ModelParams::fcns(0.1, 0.0).unwrap();
    let mut st = State::zeros(&grid, ModelKind::Fcns);
    st.u.0[0] = Field::from_fn(&grid, |x| 0.05 * x[0].sin());
    let time = TimeSettings { dt: 0.05, t_end: 2.0, cadence: 0.25, positivity_floor: 0.99 };
    let out = integrate(st, &params, &time, &DiagSettings::default()).unwrap();
    let err = out.abort.expect("floor must be crossed");
    match &err {
        Error::RunAborted { t, cause } => {
            assert!(*t > 0.0 && *t < 2.0);
            assert!(matches!(**cause, Error::DensityNonpositive { .. }), "{cause}");
        }
        other => panic!("unexpected {other}"),
    }
    assert!(!out.records.is_empty());
    assert!(out.steps < 40);
}
