//! The linear symbol and the cached per-shell propagator: eigenvalues of
//! the longitudinal block, the transverse heat factor, and a check that
//! one linear step of a shear mode matches `e^{-μρ²dt}`.
//!
//! ```bash
//! cargo run --release --example mode_propagator
//! ```

use nsdecay::integrator::{build_propagator, step_with, Phi, StepOptions};
use nsdecay::models::{longitudinal_block, transverse_rate, ModelKind, ModelParams, State};
use nsdecay::spectral::{make_grid, Field, TWO_PI};

fn main() -> nsdecay::Result<()> {
    let params = ModelParams::fcns(0.8, 0.1)?;
    for rho in [0.1, 1.0, 5.0] {
        let m = longitudinal_block(rho, &params);
        let eig = m.complex_eigenvalues();
        let eig: Vec<String> = eig.iter().map(|z| format!("{:.4}{:+.4}i", z.re, z.im)).collect();
        println!("ρ = {rho:4}: longitudinal eigenvalues {}, transverse {:.4}", eig.join(", "), transverse_rate(rho, &params));
    }

    let grid = make_grid(16, TWO_PI)?;
    let dt = 0.05;
    let cache = build_propagator(&grid, &params, dt)?;
    println!("\n{} shells cached, {} through the augmented exponential", cache.shell_count(), cache.augmented_shells());

    let mut shear = State::zeros(&grid, ModelKind::Fcns);
    shear.u.0[1] = Field::from_fn(&grid, |x| 1e-6 * x[0].sin());
    let next = step_with(&shear.to_spectral(), &cache, StepOptions { linear_only: true, positivity_floor: 0.0 })?;
    let flat = grid.flat_of_mode([1, 0, 0]);
    let factor = cache.transverse(flat, Phi::Exp).unwrap();
    let ratio = next.u.l2_norm() / shear.u.l2_norm();
    println!("shear mode: amplitude ratio {ratio:.15}, cached factor {factor:.15}");
    println!("e^(-μρ²dt)            = {:.15}", (-params.mu * grid.rho(flat).powi(2) * dt).exp());
    Ok(())
}
