use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::inequalities::sample_rng;
use crate::models::{ModelKind, State};
use crate::spectral::{Field, SpectralGrid, VecField};

use super::config::{Component, InitKind, InitialDataSpec, Normalization};

/// Initial density and temperature must satisfy `min(1 + ·) > POSITIVITY_MARGIN`.
pub const POSITIVITY_MARGIN: f64 = 0.5;

type Coeffs = Vec<Complex64>;

fn zeros(grid: &SpectralGrid) -> Coeffs {
    vec![Complex64::new(0.0, 0.0); grid.len()]
}

/// Two unit vectors completing `n` to an orthonormal frame.
fn transverse_frame(n: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let axis = (0..3)
        .min_by(|&i, &j| n[i].abs().total_cmp(&n[j].abs()))
        .unwrap();
    let mut r = [0.0; 3];
    r[axis] = 1.0;
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
    };
    let e1 = cross(n, r);
    let len = e1.iter().map(|x| x * x).sum::<f64>().sqrt();
    let e1 = [e1[0] / len, e1[1] / len, e1[2] / len];
    (e1, cross(n, e1))
}

/// Random-phase spectrum `S(ρ) = ρ^σ e^{-ρ²/c²}`, `ρ = |2πξ|`, per component.
/// Only the half-space of modes with `flat < conj(flat)` is drawn; the
/// other half is set by conjugation. Each mode's phases come from its own
/// generator stream, so the result does not depend on iteration order.
fn spectrum_coeffs(spec: &InitialDataSpec, grid: &SpectralGrid, seed: u64) -> [Coeffs; 5] {
    let mut out = [zeros(grid), zeros(grid), zeros(grid), zeros(grid), zeros(grid)];
    let w = spec.weights;
    for flat in 1..grid.len() {
        let conj = grid.conjugate_index(flat);
        if !grid.keeps(flat) || conj <= flat {
            continue;
        }
        let rho = grid.rho(flat);
        let s = rho.powf(spec.sigma) * (-(rho / spec.cutoff).powi(2)).exp();
        let mut rng = sample_rng(seed, flat as u64);
        let mut phase = || Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI));
        let (pa, pl, p1, p2, pt) = (phase(), phase(), phase(), phase(), phase());
        let xi = grid.xi(flat);
        let norm = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
        let n = [xi[0] / norm, xi[1] / norm, xi[2] / norm];
        let (e1, e2) = transverse_frame(n);
        let tw = w.u_trans * std::f64::consts::FRAC_1_SQRT_2;
        let mut vals = [Complex64::new(0.0, 0.0); 5];
        vals[0] = pa * (w.a * s);
        for i in 0..3 {
            vals[1 + i] = (pl * (w.u_long * n[i]) + p1 * (tw * e1[i]) + p2 * (tw * e2[i])) * s;
        }
        vals[4] = pt * (w.theta * s);
        for (c, v) in out.iter_mut().zip(vals) {
            c[flat] = v;
            c[conj] = v.conj();
        }
    }
    out
}

fn manufactured_coeffs(spec: &InitialDataSpec, grid: &SpectralGrid) -> Result<[Coeffs; 5]> {
    let mut out = [zeros(grid), zeros(grid), zeros(grid), zeros(grid), zeros(grid)];
    for m in &spec.modes {
        let half = grid.n() as i64 / 2;
        if m.k == [0, 0, 0] || m.k.iter().any(|k| k.abs() >= half) {
            return Err(Error::Config(format!("mode {:?} must be nonzero and inside the grid", m.k)));
        }
        let flat = grid.flat_of_mode(m.k);
        if !grid.keeps(flat) {
            return Err(Error::Config(format!("mode {:?} is removed by dealiasing", m.k)));
        }
        let slot = match m.field {
            Component::A => 0,
            Component::U1 => 1,
            Component::U2 => 2,
            Component::U3 => 3,
            Component::Theta => 4,
        };
        let z = Complex64::from_polar(0.5 * m.amplitude, m.phase);
        out[slot][flat] += z;
        out[slot][grid.conjugate_index(flat)] += z.conj();
    }
    Ok(out)
}

/// Builds the initial state described by `spec`.
///
/// With [`Normalization::Rms`] the whole state is scaled so that
/// `sqrt(mean(a² + |u|² + θ²))` equals `spec.amplitude`. Every component
/// is real, zero-mean and dealiased. Fails with
/// [`Error::PositivityUnachievable`] unless `min(1+a)` and `min(1+θ)` exceed
/// [`POSITIVITY_MARGIN`]; the message names the largest admissible amplitude.
pub fn synthesize_initial_data(
    spec: &InitialDataSpec,
    grid: &Arc<SpectralGrid>,
    kind: ModelKind,
    seed: u64,
) -> Result<State> {
    let state = realize(spec, grid, kind, seed)?;
    let worst = lowest_excursion(&state);
    if 1.0 + worst > POSITIVITY_MARGIN {
        return Ok(state);
    }
    // The state is linear in the amplitude, so this bound is exact.
    let factor = (1.0 - POSITIVITY_MARGIN) / -worst;
    let hint = match spec.kind {
        InitKind::Spectrum => format!("init.amplitude must stay below {:e}", factor * spec.amplitude),
        InitKind::Manufactured => format!("mode amplitudes must be scaled by less than {factor:e}"),
    };
    Err(Error::PositivityUnachievable(format!(
        "min(1+a, 1+theta) = {} does not exceed {POSITIVITY_MARGIN}; {hint}",
        1.0 + worst
    )))
}

/// Supremum of the amplitudes for which spectrum data passes the initial
/// positivity check. Infinite when the realized fields vanish.
pub fn max_admissible_amplitude(
    spec: &InitialDataSpec,
    grid: &Arc<SpectralGrid>,
    kind: ModelKind,
    seed: u64,
) -> Result<f64> {
    if spec.kind != InitKind::Spectrum {
        return Err(Error::Config("admissible amplitude is defined for spectrum data".into()));
    }
    let unit = InitialDataSpec { amplitude: 1.0, ..spec.clone() };
    let worst = lowest_excursion(&realize(&unit, grid, kind, seed)?);
    Ok(if worst < 0.0 { (1.0 - POSITIVITY_MARGIN) / -worst } else { f64::INFINITY })
}

fn lowest_excursion(state: &State) -> f64 {
    state.a.min_value().min(state.theta.as_ref().map_or(0.0, Field::min_value))
}

fn realize(spec: &InitialDataSpec, grid: &Arc<SpectralGrid>, kind: ModelKind, seed: u64) -> Result<State> {
    let mut coeffs = match spec.kind {
        InitKind::Spectrum => spectrum_coeffs(spec, grid, seed),
        InitKind::Manufactured => manufactured_coeffs(spec, grid)?,
    };
    if kind == ModelKind::Icns {
        coeffs[4] = zeros(grid);
    }
    let scale = match (spec.kind, spec.normalize) {
        (InitKind::Manufactured, _) => 1.0,
        (InitKind::Spectrum, Normalization::Raw) => spec.amplitude,
        (InitKind::Spectrum, Normalization::Rms) => {
            let mean_sq: f64 = coeffs.iter().flatten().map(|z| z.norm_sqr()).sum();
            if mean_sq > 0.0 {
                spec.amplitude / mean_sq.sqrt()
            } else {
                0.0
            }
        }
    };
    let [a, u1, u2, u3, th] = coeffs.map(|c| {
        let c = c.into_iter().map(|z| z * scale).collect();
        Field::from_spectral(grid, c).expect("grid-sized")
    });
    Ok(State {
        a,
        u: VecField::new(u1, u2, u3),
        theta: (kind == ModelKind::Fcns).then_some(th),
        t: 0.0,
    })
}
