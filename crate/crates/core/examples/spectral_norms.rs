//! Periodic-box basics: transforms, `Λ^s`, Sobolev norms and dealiasing.
//!
//! ```bash
//! cargo run --release --example spectral_norms
//! ```

use nsdecay::diagnostics::{hk_norm, sobolev_norm};
use nsdecay::spectral::{dealias, divergence, gradient, lambda_pow, laplacian, make_grid, Field, TWO_PI};

fn main() -> nsdecay::Result<()> {
    let grid = make_grid(32, TWO_PI)?;
    let l = grid.box_length();
    let f = Field::from_fn(&grid, |x| {
        (TWO_PI * x[0] / l).sin() + 0.25 * (TWO_PI * (2.0 * x[1] + x[2]) / l).cos()
    });

    println!("box L = {l:.6}, n = {}, dx = {:.6}", grid.n(), grid.spacing());
    println!("||f||_L2          = {:.12}", f.l2_norm());
    println!("||f||_L2 (Fourier) = {:.12}", f.to_spectral().l2_norm());

    for s in [-1.4, -0.5, 0.5, 1.0, 2.0] {
        println!("||Λ^{s:+.1} f||      = {:.12}", sobolev_norm(&f, s)?);
    }
    for k in 0..=2 {
        println!("||∇^{k} f||         = {:.12}", hk_norm(&f, k)?);
    }

    let lap = laplacian(&f);
    let div_grad = divergence(&gradient(&f));
    let err = div_grad.add_scaled(&lap, -1.0)?.l2_norm();
    println!("|div grad f - Δf|  = {err:.3e}");

    let half = lambda_pow(&lambda_pow(&f, 0.5)?, 0.5)?;
    let one = lambda_pow(&f, 1.0)?;
    println!("|Λ^½Λ^½ f - Λf|    = {:.3e}", half.add_scaled(&one, -1.0)?.l2_norm());

    let rough = Field::from_fn(&grid, |x| (x[0] * 7.0).sin().signum());
    let smooth = dealias(&rough);
    println!(
        "dealiasing keeps {:.1}% of a square wave's L2 norm",
        100.0 * smooth.l2_norm() / rough.l2_norm()
    );
    Ok(())
}
