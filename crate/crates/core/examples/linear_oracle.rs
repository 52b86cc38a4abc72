//! Whole-space decay curves of the linearized full system and their
//! fitted exponents.
//!
//! A flat spectrum at the origin stands in for `L¹` data: the solution
//! norm decays like `(1+t)^{-3/4}` and the squared gradient like
//! `(1+t)^{-5/2}`. Profiles sitting just inside `Ḣ^{-s}` decay like
//! `(1+t)^{-s}` (squared).
//!
//! ```bash
//! cargo run --release --example linear_oracle
//! ```

use nsdecay::fitting::{fit_exponent, Window};
use nsdecay::models::ModelParams;
use nsdecay::oracle::{
    heat_closed_form, linear_decay_curve, lp_decay_exponent, negative_norm_curve, sigma_for_lp,
    ComponentWeights, CurveOptions, SpectrumProfile,
};

fn log_times(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

fn main() -> nsdecay::Result<()> {
    let params = ModelParams::fcns(1.0, 0.0)?;
    let times = log_times(1e2, 1e4, 41);
    let window = Window::new(1e2, 1e4)?;
    let opts = CurveOptions::default();

    let heat = SpectrumProfile {
        sigma: sigma_for_lp(1.0),
        cutoff: 1.0,
        amplitude: 1.0,
        weights: ComponentWeights::transverse_only(),
    };
    let l2 = linear_decay_curve(&heat, &params, 0, &times, opts)?;
    let exact = heat_closed_form(heat.sigma, params.mu, heat.cutoff, 0.0, times[0])?;
    println!("transverse ||u(100)||²: quadrature {:.12e}, closed form {exact:.12e}", l2[0].u);

    let norms: Vec<f64> = l2.iter().map(|p| p.u.sqrt()).collect();
    let fit = fit_exponent(&times, &norms, window, None)?;
    println!(
        "heat branch: norm exponent {:.4} ± {:.1e} (theory {:.4})",
        fit.exponent,
        fit.stderr,
        -lp_decay_exponent(1.0)
    );

    let full = SpectrumProfile { weights: ComponentWeights::uniform(), ..heat };
    let grad = linear_decay_curve(&full, &params, 1, &times, opts)?;
    let sq: Vec<f64> = grad.iter().map(|p| p.total()).collect();
    println!("full system: squared gradient exponent {:.4} (theory -2.5)", fit_exponent(&times, &sq, window, None)?.exponent);

    println!("\n   s   solution   gradient   Ḣ^-s norm");
    for s in [0.25, 0.5, 1.0, 1.4] {
        let prof = SpectrumProfile::at_negative_sobolev_boundary(s, 0.01, 1.0, ComponentWeights::uniform());
        let slope = |k: u32| -> nsdecay::Result<f64> {
            let c = linear_decay_curve(&prof, &params, k, &times, opts)?;
            let v: Vec<f64> = c.iter().map(|p| p.total()).collect();
            Ok(fit_exponent(&times, &v, window, None)?.exponent)
        };
        let neg = negative_norm_curve(&prof, &params, s, &times, opts)?;
        let ratio = neg.last().unwrap().total() / neg[0].total();
        println!("{s:5.2}  {:9.4}  {:9.4}   ratio {ratio:.3}", slope(0)?, slope(1)?);
    }
    Ok(())
}
