use crate::error::{Error, Result};
use crate::models::{ModelKind, State};
use crate::spectral::{check_zero_mean, Field, VecField};

use super::norms::{cross_term, homogeneous_norm_sq, shifted_h1_sq, vec_shifted_h1_sq};

/// Energy value together with the two-sided envelope
/// `lower ≤ value ≤ upper` implied by Cauchy–Schwarz on the cross term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Enveloped {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    /// Envelope base, the energy without its cross term.
    pub base: f64,
}

impl Enveloped {
    pub fn inside(&self, rel_slack: f64) -> bool {
        let slack = rel_slack * self.base.abs();
        self.value >= self.lower - slack && self.value <= self.upper + slack
    }
}

/// `E₁² = ‖∇u‖²_{H¹} + P'(1)‖∇a‖²_{H¹} + 2δ₀ ∫∇u·∇²a`.
///
/// Requires `0 < δ₀ < min(1, P'(1))/2`. The envelope factor is
/// `1 ± δ₀/min(1, P'(1))`. Any temperature component is ignored.
pub fn energy_e1(state: &State, delta0: f64, p_prime1: f64) -> Result<Enveloped> {
    if !(p_prime1 > 0.0) {
        return Err(Error::InvalidParameter(format!("P'(1) must be positive, got {p_prime1}")));
    }
    let m = p_prime1.min(1.0);
    if !(delta0 > 0.0 && delta0 < 0.5 * m) {
        return Err(Error::InvalidParameter(format!(
            "delta0 = {delta0} outside (0, {})",
            0.5 * m
        )));
    }
    let base = vec_shifted_h1_sq(&state.u, 1) + p_prime1 * shifted_h1_sq(&state.a, 1);
    let value = base + 2.0 * delta0 * cross_term(&state.a, &state.u);
    let r = delta0 / m;
    Ok(Enveloped {
        value,
        lower: (1.0 - r) * base,
        upper: (1.0 + r) * base,
        base,
    })
}

/// `E₂² = ‖∇a‖²_{H¹} + ‖∇u‖²_{H¹} + ‖∇θ‖²_{H¹} + δ ∫∇u·∇²a`, `δ ∈ (0, 1)`,
/// with envelope factor `1 ± δ/2`.
pub fn energy_e2(state: &State, delta: f64) -> Result<Enveloped> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta = {delta} outside (0, 1)")));
    }
    let theta = state.theta.as_ref().map_or(0.0, |th| shifted_h1_sq(th, 1));
    let base = shifted_h1_sq(&state.a, 1) + vec_shifted_h1_sq(&state.u, 1) + theta;
    let value = base + delta * cross_term(&state.a, &state.u);
    Ok(Enveloped {
        value,
        lower: (1.0 - 0.5 * delta) * base,
        upper: (1.0 + 0.5 * delta) * base,
        base,
    })
}

/// Canonical representative `‖u‖²_{H¹} + ‖a‖²_{H¹} + ‖u̇‖²`.
pub fn functional_x1(state: &State, udot: &VecField) -> f64 {
    vec_shifted_h1_sq(&state.u, 0) + shifted_h1_sq(&state.a, 0) + udot.l2_norm_sq()
}

/// `X₁ + ‖θ‖²_{H¹}`.
pub fn functional_x2(state: &State, udot: &VecField) -> f64 {
    functional_x1(state, udot) + state.theta.as_ref().map_or(0.0, |th| shifted_h1_sq(th, 0))
}

/// How negative norms treat a nonzero mean.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeanPolicy {
    /// Error out with [`Error::NegativePowerOnNonzeroMean`].
    Strict,
    /// Drop the zero mode. Used for time series, where `∫u` and `∫θ`
    /// drift at quadratic order; the drift is reported separately.
    Project,
}

/// Squared negative Sobolev norms at one `s`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NegEnergy {
    pub a: f64,
    pub u: f64,
    pub theta: f64,
    pub udot: Option<f64>,
    /// ICNS: `γ‖Λ^{-s}a‖² + ‖Λ^{-s}(ρu)‖²`; FCNS: `‖Λ^{-s}(a, u, θ)‖²`.
    pub energy: f64,
}

fn neg_sq(f: &Field, s: f64, policy: MeanPolicy) -> Result<f64> {
    if policy == MeanPolicy::Strict {
        check_zero_mean(f, -s)?;
    }
    Ok(homogeneous_norm_sq(f, -s))
}

fn neg_sq_vec(v: &VecField, s: f64, policy: MeanPolicy) -> Result<f64> {
    v.0.iter().map(|f| neg_sq(f, s, policy)).sum()
}

/// Negative-norm energy at order `s ∈ (0, 3/2)`; `gamma` is the ICNS
/// exponent and is ignored for FCNS.
pub fn neg_energy(
    state: &State,
    s: f64,
    gamma: f64,
    udot: Option<&VecField>,
    policy: MeanPolicy,
) -> Result<NegEnergy> {
    if !(s > 0.0 && s < 1.5) {
        return Err(Error::InvalidParameter(format!("s = {s} outside (0, 3/2)")));
    }
    let a = neg_sq(&state.a, s, policy)?;
    let u = neg_sq_vec(&state.u, s, policy)?;
    let theta = match &state.theta {
        Some(th) => neg_sq(th, s, policy)?,
        None => 0.0,
    };
    let udot = udot.map(|v| neg_sq_vec(v, s, policy)).transpose()?;
    let energy = match state.kind() {
        ModelKind::Fcns => a + u + theta,
        ModelKind::Icns => {
            let rho = state.a.to_physical();
            let rho_u = state.u.to_physical().try_map(|c| momentum_component(&rho, c))?;
            gamma * a + neg_sq_vec(&rho_u, s, policy)?
        }
    };
    Ok(NegEnergy {
        a,
        u,
        theta,
        udot,
        energy,
    })
}

fn momentum_component(a: &Field, u: &Field) -> Result<Field> {
    let av = a.physical().unwrap();
    let uv = u.physical().unwrap();
    let vals = av.iter().zip(uv).map(|(x, y)| (1.0 + x) * y).collect();
    Field::from_physical(a.grid(), vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::norms::vec_derivative_norm_sq;
    use crate::spectral::{make_grid, Repr, TWO_PI};

    fn wave(g: &std::sync::Arc<crate::spectral::SpectralGrid>, k: [f64; 3], amp: f64) -> Field {
        let l = g.box_length();
        Field::from_fn(g, move |x| {
            amp * (TWO_PI * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]) / l).sin()
        })
    }

    #[test]
    fn e1_reduces_without_cross_term() {
        let g = make_grid(8, 1.0).unwrap();
        let mut st = State::zeros(&g, ModelKind::Icns);
        st.a = wave(&g, [1.0, 0.0, 0.0], 0.1);
        let e = energy_e1(&st, 0.05, 1.4).unwrap();
        assert!((e.value - 1.4 * shifted_h1_sq(&st.a, 1)).abs() < 1e-12 * e.value);
        let mut st = State::zeros(&g, ModelKind::Icns);
        st.u.0[1] = wave(&g, [1.0, 1.0, 0.0], 0.1);
        let e = energy_e1(&st, 0.05, 1.4).unwrap();
        assert!((e.value - vec_shifted_h1_sq(&st.u, 1)).abs() < 1e-12 * e.value);
        assert!(energy_e1(&st, 0.6, 1.4).is_err());
    }

    #[test]
    fn e2_theta_only_and_zero() {
        let g = make_grid(8, 1.0).unwrap();
        let mut st = State::zeros(&g, ModelKind::Fcns);
        assert_eq!(energy_e2(&st, 0.1).unwrap().value, 0.0);
        st.theta = Some(wave(&g, [0.0, 2.0, 1.0], 0.3));
        let e = energy_e2(&st, 0.1).unwrap();
        let expect = shifted_h1_sq(st.theta.as_ref().unwrap(), 1);
        assert!((e.value - expect).abs() < 1e-12 * expect);
        assert!(energy_e2(&st, 1.0).is_err());
    }

    #[test]
    fn x_functionals() {
        let g = make_grid(8, 1.0).unwrap();
        let mut st = State::zeros(&g, ModelKind::Fcns);
        let zero = VecField::zeros(&g, Repr::Spectral);
        assert_eq!(functional_x2(&st, &zero), 0.0);
        st.a = wave(&g, [1.0, 0.0, 0.0], 0.2);
        st.u.0[2] = wave(&g, [0.0, 2.0, 0.0], 0.1);
        let x1 = functional_x1(&st, &zero);
        let parts = shifted_h1_sq(&st.a, 0) + st.u.l2_norm_sq() + vec_derivative_norm_sq(&st.u, 1);
        assert!((x1 - parts).abs() < 1e-12 * x1);
    }

    #[test]
    fn neg_energy_single_mode_and_icns_reduction() {
        let l = 2.0;
        let g = make_grid(8, l).unwrap();
        let mut st = State::zeros(&g, ModelKind::Icns);
        st.u.0[0] = wave(&g, [0.0, 1.0, 0.0], 0.5);
        let s = 0.5;
        let ne = neg_energy(&st, s, 1.4, None, MeanPolicy::Strict).unwrap();
        let q = 1.0 / l;
        let expect = q.powf(-2.0 * s) * st.u.l2_norm_sq();
        assert!((ne.u - expect).abs() < 1e-12 * expect);
        assert!((ne.energy - ne.u).abs() < 1e-12 * expect);
        let zero = State::zeros(&g, ModelKind::Fcns);
        assert_eq!(neg_energy(&zero, s, 1.0, None, MeanPolicy::Strict).unwrap().energy, 0.0);
    }

    #[test]
    fn strict_policy_rejects_mean() {
        let g = make_grid(8, 1.0).unwrap();
        let mut st = State::zeros(&g, ModelKind::Fcns);
        st.theta = Some(Field::constant(&g, 0.01));
        assert!(matches!(
            neg_energy(&st, 0.5, 1.0, None, MeanPolicy::Strict),
            Err(Error::NegativePowerOnNonzeroMean { .. })
        ));
        let ne = neg_energy(&st, 0.5, 1.0, None, MeanPolicy::Project).unwrap();
        assert_eq!(ne.theta, 0.0);
        assert!(neg_energy(&st, 1.5, 1.0, None, MeanPolicy::Project).is_err());
    }
}
