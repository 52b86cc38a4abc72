//! Right-hand sides against the conservative equations evaluated pointwise
//! with exact derivatives of trigonometric fields.
//!
//! The oracle never touches the perturbation form: it evaluates
//!
//! ```text
//! ∂t ρ = -div(ρu)
//! ρ(∂t u + u·∇u) = μΔu + (μ+λ)∇div u - ∇P
//! ρ(∂t T + u·∇T) + P div u = ΔT + 2μ|Du|² + λ(div u)²   (full system)
//! ```
//!
//! with `P = ρT` (full) or `P = ρ^γ` (isentropic), and compares direct
//! Fourier coefficients with the library tendency on every dealiased mode.
//! With inputs of wavenumber ≤ 2 on a 12³ grid, quadratic products do not
//! alias into the kept band, so the agreement is to round-off.

mod common;

use common::{direct_coefficient, kept_modes, Trig};
use num_complex::Complex64;
use nsdecay::models::{time_derivative, ModelKind, ModelParams, State};
use nsdecay::spectral::{make_grid, Field, SpectralGrid, VecField};
use std::sync::Arc;

struct Setup {
    a: Trig,
    u: [Trig; 3],
    theta: Trig,
}

fn setup(l: f64, amp: f64) -> Setup {
    Setup {
        a: Trig::new(l, &[(amp, [1, 0, 0], 0.3), (0.6 * amp, [0, 1, -1], 1.1), (0.4 * amp, [2, 1, 0], -0.7)]),
        u: [
            Trig::new(l, &[(amp, [0, 1, 0], 0.2), (0.5 * amp, [1, 1, 1], 2.0)]),
            Trig::new(l, &[(0.8 * amp, [1, 0, 1], -0.4), (0.3 * amp, [0, 2, 0], 0.9)]),
            Trig::new(l, &[(0.7 * amp, [1, -1, 0], 1.7), (0.5 * amp, [0, 0, 1], 0.0)]),
        ],
        theta: Trig::new(l, &[(0.9 * amp, [0, 0, 1], 0.5), (0.4 * amp, [1, 2, 0], -1.3)]),
    }
}

fn state(s: &Setup, grid: &Arc<SpectralGrid>, kind: ModelKind) -> State {
    State {
        a: s.a.field(grid),
        u: VecField::new(s.u[0].field(grid), s.u[1].field(grid), s.u[2].field(grid)),
        theta: (kind == ModelKind::Fcns).then(|| s.theta.field(grid)),
        t: 0.0,
    }
}

/// Pointwise `(∂t a, ∂t u, ∂t θ)` from the conservative equations.
fn oracle_point(s: &Setup, x: [f64; 3], p: &ModelParams) -> [f64; 5] {
    let (mu, lam) = (p.mu, p.lambda);
    let a = s.a.value(x);
    let ga = s.a.grad(x);
    let rho = 1.0 + a;
    let u: [f64; 3] = std::array::from_fn(|i| s.u[i].value(x));
    let du: [[f64; 3]; 3] = std::array::from_fn(|i| s.u[i].grad(x));
    let hu: [[[f64; 3]; 3]; 3] = std::array::from_fn(|i| s.u[i].hess(x));
    let div = du[0][0] + du[1][1] + du[2][2];
    let grad_div: [f64; 3] = std::array::from_fn(|j| (0..3).map(|i| hu[i][i][j]).sum());
    let lap_u: [f64; 3] = std::array::from_fn(|i| hu[i][0][0] + hu[i][1][1] + hu[i][2][2]);

    let drho = -(rho * div + (0..3).map(|i| u[i] * ga[i]).sum::<f64>());
    let (grad_p, dtheta) = match p.kind {
        ModelKind::Icns => {
            let c = p.gamma * rho.powf(p.gamma - 1.0);
            (ga.map(|g| c * g), 0.0)
        }
        ModelKind::Fcns => {
            let th = s.theta.value(x);
            let gt = s.theta.grad(x);
            let temp = 1.0 + th;
            let grad_p: [f64; 3] = std::array::from_fn(|i| ga[i] * temp + rho * gt[i]);
            let dsq: f64 = (0..9)
                .map(|n| {
                    let (i, j) = (n / 3, n % 3);
                    (0.5 * (du[i][j] + du[j][i])).powi(2)
                })
                .sum();
            let heat = s.theta.laplacian(x) + 2.0 * mu * dsq + lam * div * div - rho * temp * div;
            let adv_t: f64 = (0..3).map(|i| u[i] * gt[i]).sum();
            (grad_p, heat / rho - adv_t)
        }
    };
    let mut out = [drho, 0.0, 0.0, 0.0, dtheta];
    for i in 0..3 {
        let adv: f64 = (0..3).map(|j| u[j] * du[i][j]).sum();
        out[1 + i] = (mu * lap_u[i] + (mu + lam) * grad_div[i] - grad_p[i]) / rho - adv;
    }
    out
}

fn check(kind: ModelKind, params: ModelParams, amp: f64) {
    let grid = make_grid(12, 2.5).unwrap();
    let s = setup(grid.box_length(), amp);
    let st = state(&s, &grid, kind);
    let tend = time_derivative(&st, &params).unwrap();
    let lib: Vec<&Field> = match kind {
        ModelKind::Icns => vec![&tend.da, &tend.du.0[0], &tend.du.0[1], &tend.du.0[2]],
        ModelKind::Fcns => vec![&tend.da, &tend.du.0[0], &tend.du.0[1], &tend.du.0[2], tend.dtheta.as_ref().unwrap()],
    };
    let points: Vec<[f64; 5]> = (0..grid.len()).map(|f| oracle_point(&s, grid.point(f), &params)).collect();
    for (c, field) in lib.iter().enumerate() {
        let values: Vec<f64> = points.iter().map(|p| p[c]).collect();
        let spec = field.to_spectral();
        let coeffs = spec.spectral().unwrap();
        let mut max_err: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for k in kept_modes(&grid) {
            let want: Complex64 = direct_coefficient(&grid, &values, k);
            let got = coeffs[grid.flat_of_mode(k)];
            max_err = max_err.max((want - got).norm());
            scale = scale.max(want.norm());
        }
        assert!(scale > 0.0, "component {c} vanishes");
        assert!(max_err <= 1e-10 * scale, "{kind:?} component {c}: error {max_err:e}, scale {scale:e}");
    }
}

#[test]
fn fcns_tendency_matches_conservative_form() {
    check(ModelKind::Fcns, ModelParams::fcns(0.7, 0.3).unwrap(), 0.1);
}

#[test]
fn fcns_tendency_large_amplitude() {
    check(ModelKind::Fcns, ModelParams::fcns(1.3, -0.2).unwrap(), 0.25);
}

#[test]
fn icns_tendency_matches_conservative_form() {
    check(ModelKind::Icns, ModelParams::icns(0.5, 0.4, 1.4).unwrap(), 0.1);
}

#[test]
fn icns_isothermal_tendency() {
    check(ModelKind::Icns, ModelParams::icns(0.9, 0.0, 1.0).unwrap(), 0.2);
}
