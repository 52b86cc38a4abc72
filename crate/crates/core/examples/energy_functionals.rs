//! Energy functionals, their equivalence envelopes, negative-norm
//! energies and the Fourier-splitting residual on a random state.
//!
//! ```bash
//! cargo run --release --example energy_functionals
//! ```

use nsdecay::diagnostics::{
    energy_e1, energy_e2, fourier_split_vec, neg_energy, splitting_residual, MeanPolicy,
};
use nsdecay::experiment::{synthesize_initial_data, InitKind, InitialDataSpec, Normalization};
use nsdecay::models::{ModelKind, ModelParams};
use nsdecay::oracle::ComponentWeights;
use nsdecay::spectral::{make_grid, TWO_PI};

fn main() -> nsdecay::Result<()> {
    let grid = make_grid(16, TWO_PI * 2.0)?;
    let params = ModelParams::fcns(1.0, 0.2)?;
    let spec = InitialDataSpec {
        kind: InitKind::Spectrum,
        sigma: 0.0,
        cutoff: 2.0,
        amplitude: 0.05,
        normalize: Normalization::Rms,
        weights: ComponentWeights::uniform(),
        modes: vec![],
    };
    let state = synthesize_initial_data(&spec, &grid, ModelKind::Fcns, 3)?;

    let delta0 = 0.1 * params.p_prime1().min(1.0);
    let e1 = energy_e1(&state, delta0, params.p_prime1())?;
    let e2 = energy_e2(&state, 0.1)?;
    for (name, e) in [("E1²", e1), ("E2²", e2)] {
        println!(
            "{name}: {:.6e} in [{:.6e}, {:.6e}] (base {:.6e}) inside: {}",
            e.value,
            e.lower,
            e.upper,
            e.base,
            e.inside(0.0)
        );
    }

    for s in [0.5, 1.0] {
        let ne = neg_energy(&state, s, params.gamma, None, MeanPolicy::Strict)?;
        println!("s = {s}: ||Λ^-s a||² = {:.6e}, ||Λ^-s u||² = {:.6e}, energy {:.6e}", ne.a, ne.u, ne.energy);
    }

    for t in [0.0, 1.0, 10.0] {
        let (low, high) = fourier_split_vec(&state.u, 1.0, t)?;
        let r = splitting_residual(&state.u, 1.0, t)?;
        println!("t = {t:4}: low {low:.4e}, high {high:.4e}, splitting residual {r:.4e}");
    }
    Ok(())
}
