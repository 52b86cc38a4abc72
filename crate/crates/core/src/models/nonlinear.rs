use rayon::prelude::*;

use super::params::{ModelKind, ModelParams, State, Tendency};
use crate::error::{Error, Result};
use crate::spectral::{
    dealias, divergence, forward_many, grad_div, gradient, inverse_many, laplacian, partial,
    Field, VecField,
};

/// `h(a) = a / (1 + a)`.
pub fn h_of_a(a: &Field) -> Result<Field> {
    pointwise_density_map(a, |x| x / (1.0 + x))
}

/// `g(a) = 1 / (1 + a)`.
pub fn g_of_a(a: &Field) -> Result<Field> {
    pointwise_density_map(a, |x| 1.0 / (1.0 + x))
}

fn pointwise_density_map(a: &Field, f: impl Fn(f64) -> f64 + Sync) -> Result<Field> {
    let p = a.to_physical();
    let v = p.physical().unwrap();
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    if 1.0 + min <= 0.0 {
        return Err(Error::DensityNonpositive {
            min: 1.0 + min,
            field: "a",
        });
    }
    Field::from_physical(a.grid(), v.par_iter().map(|&x| f(x)).collect())
}

fn check_density(a: &[f64]) -> Result<()> {
    let min = a.iter().copied().fold(f64::INFINITY, f64::min);
    if 1.0 + min <= 0.0 {
        return Err(Error::DensityNonpositive {
            min: 1.0 + min,
            field: "a",
        });
    }
    Ok(())
}

fn check_temperature(theta: &[f64]) -> Result<()> {
    let min = theta.iter().copied().fold(f64::INFINITY, f64::min);
    if 1.0 + min <= 0.0 {
        return Err(Error::TemperatureNonpositive { min: 1.0 + min });
    }
    Ok(())
}

/// `-div(f u)` from physical `f` and `u`, in spectral form.
fn neg_div_product(f: &[f64], u: [&[f64]; 3], grid: &std::sync::Arc<crate::spectral::SpectralGrid>) -> [Field; 3] {
    std::array::from_fn(|i| {
        Field::from_physical(grid, f.par_iter().zip(u[i]).map(|(x, y)| x * y).collect()).unwrap()
    })
}

fn spectral_neg_div(parts: [&Field; 3]) -> Field {
    divergence(&VecField::new(parts[0].clone(), parts[1].clone(), parts[2].clone())).scaled(-1.0)
}

/// Nonlinear terms `(S₁, S₂, S₃)` of the full system:
///
/// ```text
/// S₁ = -a div u - u·∇a
/// S₂ = -u·∇u - h(a)[μΔu + (μ+λ)∇div u] + h(a)(∇a + ∇θ) - g(a)∇(aθ)
/// S₃ = -div(θu) + g(a)(2μ|Du|² + λ(div u)²) - h(a)Δθ
/// ```
///
/// `S₁` and the transport part of `S₃` are formed in divergence form
/// (`-div(au)`, `-div(θu)`), so their zero modes vanish identically.
/// Products are formed pointwise and every output is dealiased once.
pub fn nonlinear_fcns(state: &State, params: &ModelParams) -> Result<Tendency> {
    state.check_kind(ModelKind::Fcns)?;
    let grid = state.grid().clone();
    let (mu, lam) = (params.mu, params.lambda);
    let s = state.to_spectral();
    let theta = s.theta.as_ref().unwrap();
    let u = &s.u;

    let grad_a = gradient(&s.a);
    let grad_t = gradient(theta);
    let lap_u = u.map(laplacian);
    let gd = grad_div(u);
    let lap_t = laplacian(theta);
    let du: [[Field; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| partial(&u.0[i], j)));

    let mut spectral: Vec<&Field> = vec![&s.a, &u.0[0], &u.0[1], &u.0[2], theta];
    spectral.extend(grad_a.0.iter());
    spectral.extend(grad_t.0.iter());
    spectral.extend(lap_u.0.iter());
    spectral.extend(gd.0.iter());
    spectral.push(&lap_t);
    for row in &du {
        spectral.extend(row.iter());
    }
    let phys = inverse_many(&spectral);
    let v = |i: usize| phys[i].physical().unwrap();
    let a = v(0);
    let uu = [v(1), v(2), v(3)];
    let th = v(4);
    let ga = [v(5), v(6), v(7)];
    let gt = [v(8), v(9), v(10)];
    let lu = [v(11), v(12), v(13)];
    let gdv = [v(14), v(15), v(16)];
    let lt = v(17);
    let g_ij = |i: usize, j: usize| v(18 + 3 * i + j);

    check_density(a)?;
    check_temperature(th)?;

    let len = grid.len();
    let mut s2: [Vec<f64>; 3] = std::array::from_fn(|_| vec![0.0; len]);
    let mut s3_rest = vec![0.0; len];
    {
        let [s2x, s2y, s2z] = &mut s2;
        s2x.par_iter_mut()
            .zip(s2y.par_iter_mut())
            .zip(s2z.par_iter_mut())
            .zip(s3_rest.par_iter_mut())
            .enumerate()
            .for_each(|(p, (((ox, oy), oz), o3))| {
                let h = a[p] / (1.0 + a[p]);
                let g = 1.0 / (1.0 + a[p]);
                let mut out = [0.0; 3];
                for (i, o) in out.iter_mut().enumerate() {
                    let adv: f64 = (0..3).map(|j| uu[j][p] * g_ij(i, j)[p]).sum();
                    let visc = mu * lu[i][p] + (mu + lam) * gdv[i][p];
                    let grad_at = th[p] * ga[i][p] + a[p] * gt[i][p];
                    *o = -adv - h * visc + h * (ga[i][p] + gt[i][p]) - g * grad_at;
                }
                *ox = out[0];
                *oy = out[1];
                *oz = out[2];
                let div_u = g_ij(0, 0)[p] + g_ij(1, 1)[p] + g_ij(2, 2)[p];
                let mut dsq = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        let d = 0.5 * (g_ij(i, j)[p] + g_ij(j, i)[p]);
                        dsq += d * d;
                    }
                }
                *o3 = g * (2.0 * mu * dsq + lam * div_u * div_u) - h * lt[p];
            });
    }

    let au = neg_div_product(a, uu, &grid);
    let tu = neg_div_product(th, uu, &grid);
    let [s2x, s2y, s2z] = s2;
    let s2f = [
        Field::from_physical(&grid, s2x)?,
        Field::from_physical(&grid, s2y)?,
        Field::from_physical(&grid, s2z)?,
    ];
    let s3f = Field::from_physical(&grid, s3_rest)?;
    let spec = forward_many(&[
        &s2f[0], &s2f[1], &s2f[2], &s3f, &au[0], &au[1], &au[2], &tu[0], &tu[1], &tu[2],
    ]);
    let s1 = spectral_neg_div([&spec[4], &spec[5], &spec[6]]);
    let s3 = spectral_neg_div([&spec[7], &spec[8], &spec[9]]).add_scaled(&spec[3], 1.0)?;
    Ok(Tendency {
        da: dealias(&s1),
        du: VecField::new(dealias(&spec[0]), dealias(&spec[1]), dealias(&spec[2])),
        dtheta: Some(dealias(&s3)),
    })
}

/// Nonlinear terms of the isentropic system in velocity form:
///
/// ```text
/// ∂t a + div u = -div(au)
/// ∂t u - μΔu - (μ+λ)∇div u + γ∇a = -u·∇u - h(a)[μΔu + (μ+λ)∇div u]
///                                   - [γ(1+a)^{γ-2} - γ]∇a
/// ```
///
/// The pressure term follows from `∇P/ρ = γρ^{γ-2}∇a` for `P = ρ^γ`.
pub fn nonlinear_icns(state: &State, params: &ModelParams) -> Result<Tendency> {
    state.check_kind(ModelKind::Icns)?;
    let grid = state.grid().clone();
    let (mu, lam, gamma) = (params.mu, params.lambda, params.gamma);
    let s = state.to_spectral();
    let u = &s.u;
    let grad_a = gradient(&s.a);
    let lap_u = u.map(laplacian);
    let gd = grad_div(u);
    let du: [[Field; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| partial(&u.0[i], j)));

    let mut spectral: Vec<&Field> = vec![&s.a, &u.0[0], &u.0[1], &u.0[2]];
    spectral.extend(grad_a.0.iter());
    spectral.extend(lap_u.0.iter());
    spectral.extend(gd.0.iter());
    for row in &du {
        spectral.extend(row.iter());
    }
    let phys = inverse_many(&spectral);
    let v = |i: usize| phys[i].physical().unwrap();
    let a = v(0);
    let uu = [v(1), v(2), v(3)];
    let ga = [v(4), v(5), v(6)];
    let lu = [v(7), v(8), v(9)];
    let gdv = [v(10), v(11), v(12)];
    let g_ij = |i: usize, j: usize| v(13 + 3 * i + j);
    check_density(a)?;

    let len = grid.len();
    let n_u: [Vec<f64>; 3] = std::array::from_fn(|i| {
        (0..len)
            .into_par_iter()
            .map(|p| {
                let rho = 1.0 + a[p];
                let h = a[p] / rho;
                let adv: f64 = (0..3).map(|j| uu[j][p] * g_ij(i, j)[p]).sum();
                let visc = mu * lu[i][p] + (mu + lam) * gdv[i][p];
                let pressure = gamma * rho.powf(gamma - 2.0) - gamma;
                -adv - h * visc - pressure * ga[i][p]
            })
            .collect()
    });
    let au = neg_div_product(a, uu, &grid);
    let [nx, ny, nz] = n_u;
    let nf = [
        Field::from_physical(&grid, nx)?,
        Field::from_physical(&grid, ny)?,
        Field::from_physical(&grid, nz)?,
    ];
    let spec = forward_many(&[&nf[0], &nf[1], &nf[2], &au[0], &au[1], &au[2]]);
    let s1 = spectral_neg_div([&spec[3], &spec[4], &spec[5]]);
    Ok(Tendency {
        da: dealias(&s1),
        du: VecField::new(dealias(&spec[0]), dealias(&spec[1]), dealias(&spec[2])),
        dtheta: None,
    })
}

/// Nonlinear terms of whichever system `params` selects.
pub fn nonlinear(state: &State, params: &ModelParams) -> Result<Tendency> {
    match params.kind {
        ModelKind::Fcns => nonlinear_fcns(state, params),
        ModelKind::Icns => nonlinear_icns(state, params),
    }
}

/// Linear part of the right-hand side, evaluated spectrally.
pub fn linear_tendency(state: &State, params: &ModelParams) -> Result<Tendency> {
    state.check_kind(params.kind)?;
    let s = state.to_spectral();
    let div_u = divergence(&s.u);
    let grad_a = gradient(&s.a);
    let lap_u = s.u.map(laplacian);
    let gd = grad_div(&s.u);
    let pressure = params.p_prime1();
    let mut du = lap_u
        .scaled(params.mu)
        .add_scaled(&gd, params.mu + params.lambda)?
        .add_scaled(&grad_a, -pressure)?;
    let dtheta = match &s.theta {
        Some(th) => {
            du = du.add_scaled(&gradient(th), -1.0)?;
            Some(laplacian(th).add_scaled(&div_u, -1.0)?)
        }
        None => None,
    };
    Ok(Tendency {
        da: div_u.scaled(-1.0),
        du,
        dtheta,
    })
}

/// Full time derivative (linear plus nonlinear) of the state.
pub fn time_derivative(state: &State, params: &ModelParams) -> Result<Tendency> {
    let lin = linear_tendency(state, params)?;
    let non = nonlinear(state, params)?;
    Ok(Tendency {
        da: lin.da.add_scaled(&non.da, 1.0)?,
        du: lin.du.add_scaled(&non.du, 1.0)?,
        dtheta: match (lin.dtheta, non.dtheta) {
            (Some(l), Some(n)) => Some(l.add_scaled(&n, 1.0)?),
            _ => None,
        },
    })
}

/// `(u·∇)v`, formed pointwise and dealiased.
pub fn advective_derivative(u: &VecField, v: &VecField) -> VecField {
    let grid = u.grid().clone();
    let us = u.to_spectral();
    let vs = v.to_spectral();
    let grads: Vec<Field> = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| partial(&vs.0[i], j))
        .collect();
    let mut list: Vec<&Field> = us.0.iter().collect();
    list.extend(grads.iter());
    let phys = inverse_many(&list);
    let p = |i: usize| phys[i].physical().unwrap();
    let out: [Field; 3] = std::array::from_fn(|i| {
        let vals = (0..grid.len())
            .into_par_iter()
            .map(|x| (0..3).map(|j| p(j)[x] * p(3 + 3 * i + j)[x]).sum())
            .collect();
        Field::from_physical(&grid, vals).unwrap()
    });
    let spec = forward_many(&[&out[0], &out[1], &out[2]]);
    VecField::new(dealias(&spec[0]), dealias(&spec[1]), dealias(&spec[2]))
}

/// `u̇ = ∂t u + u·∇u`, with `dudt` the full time derivative of `u`.
pub fn material_derivative(state: &State, dudt: &VecField) -> Result<VecField> {
    let adv = advective_derivative(&state.u, &state.u);
    dudt.to_spectral().add_scaled(&adv, 1.0)
}

/// `γ = 1` branch threshold for the relative entropy.
pub const ISOTHERMAL_GAMMA_TOL: f64 = 1e-12;

/// `∫ H(ρ|1) dx` with
/// `H = (ρ^γ - 1 - γ(ρ - 1)) / (γ - 1)` for `γ > 1` and
/// `H = ρ ln ρ - ρ + 1` for `γ = 1`.
pub fn relative_entropy(a: &Field, gamma: f64) -> Result<f64> {
    let p = a.to_physical();
    let v = p.physical().unwrap();
    check_density(v)?;
    let isothermal = (gamma - 1.0).abs() < ISOTHERMAL_GAMMA_TOL;
    let sum: f64 = v
        .iter()
        .map(|&x| {
            let rho = 1.0 + x;
            let h = if isothermal {
                rho * rho.ln() - rho + 1.0
            } else {
                (rho.powf(gamma) - 1.0 - gamma * x) / (gamma - 1.0)
            };
            h.max(0.0)
        })
        .sum();
    Ok(sum * a.grid().cell_volume())
}
