use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, gamma_ur};

use crate::error::{Error, Result};
use crate::matfun::expm;
use crate::models::{longitudinal_block, ModelKind, ModelParams};

use super::quadrature::{integrate_adaptive, QuadOptions};

/// Component weights of an initial spectrum. `u_trans` is the total
/// weight of the two transverse directions.
/// A weight table given in a config lists the nonzero entries; missing
/// entries are 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComponentWeights {
    pub a: f64,
    pub u_long: f64,
    pub u_trans: f64,
    pub theta: f64,
}

impl ComponentWeights {
    pub fn transverse_only() -> Self {
        Self { a: 0.0, u_long: 0.0, u_trans: 1.0, theta: 0.0 }
    }

    pub fn uniform() -> Self {
        Self { a: 1.0, u_long: 1.0, u_trans: 1.0, theta: 1.0 }
    }
}

/// Radial spectrum `|ŵ(ρ)|² = A² ρ^{2σ} e^{-2ρ²/c²}` with `ρ = |2πξ|`,
/// split over components by squared weights.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumProfile {
    pub sigma: f64,
    pub cutoff: f64,
    pub amplitude: f64,
    pub weights: ComponentWeights,
}

impl SpectrumProfile {
    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude > 0.0) || !(self.cutoff > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "profile needs amplitude > 0 and cutoff > 0, got {} and {}",
                self.amplitude, self.cutoff
            )));
        }
        if !(self.sigma > -1.5) {
            return Err(Error::InvalidParameter(format!(
                "sigma = {} leaves the L² class (need sigma > -3/2)",
                self.sigma
            )));
        }
        let w = self.weights;
        if [w.a, w.u_long, w.u_trans, w.theta].iter().any(|x| !(*x >= 0.0)) {
            return Err(Error::InvalidParameter("component weights must be nonnegative".into()));
        }
        Ok(())
    }

    /// `∫_{|ρ|<1} ρ^{2σ-2s} ρ² dρ < ∞`, i.e. membership of `Ḣ^{-s}`.
    pub fn in_negative_sobolev(&self, s: f64) -> bool {
        self.sigma > s - 1.5
    }

    /// Spectrum sitting just inside `Ḣ^{-s}`: `σ = s - 3/2 + margin`.
    pub fn at_negative_sobolev_boundary(s: f64, margin: f64, cutoff: f64, weights: ComponentWeights) -> Self {
        Self { sigma: s - 1.5 + margin, cutoff, amplitude: 1.0, weights }
    }
}

/// Heuristic low-frequency exponent of `L^p` data, `σ = 3/p - 3`.
/// `p = 1` gives a flat spectrum at the origin.
pub fn sigma_for_lp(p: f64) -> f64 {
    3.0 / p - 3.0
}

/// Norm decay exponent `β(p) = (3/4)(2/p - 1)` for `L^p ∩ H^N` data.
pub fn lp_decay_exponent(p: f64) -> f64 {
    0.75 * (2.0 / p - 1.0)
}

/// Squared norms of each component at one time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub t: f64,
    pub a: f64,
    pub u: f64,
    pub theta: f64,
}

impl CurvePoint {
    pub fn total(&self) -> f64 {
        self.a + self.u + self.theta
    }
}

/// `4π A² w² Γ(m) / (2 (2(c⁻² + μt))^m)` with `m = k + σ + 3/2`: the squared
/// `Λ`-weighted norm `∫ ρ^{2k} e^{-2μρ²t} P(ρ) 4πρ² dρ` of a unit-amplitude,
/// unit-weight profile under pure diffusion. `k` may be negative.
pub fn heat_closed_form(sigma: f64, mu: f64, cutoff: f64, k: f64, t: f64) -> Result<f64> {
    let m = k + sigma + 1.5;
    if !(m > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "k + sigma = {} must exceed -3/2",
            k + sigma
        )));
    }
    if !(mu > 0.0 && cutoff > 0.0 && t >= 0.0) {
        return Err(Error::InvalidParameter("need mu > 0, cutoff > 0, t >= 0".into()));
    }
    let b = 2.0 * (cutoff.powi(-2) + mu * t);
    Ok(4.0 * std::f64::consts::PI * gamma(m) / (2.0 * b.powf(m)))
}

/// Options for [`linear_decay_curve`].
#[derive(Clone, Copy, Debug)]
pub struct CurveOptions {
    pub quad: QuadOptions,
    /// Upper end of the radial domain in units of the cutoff.
    pub cutoff_span: f64,
}

impl Default for CurveOptions {
    fn default() -> Self {
        Self {
            quad: QuadOptions { rel_tol: 1e-10, abs_tol: 0.0, max_pieces: 4000 },
            cutoff_span: 8.0,
        }
    }
}

/// Squared whole-space norms `∫ ρ^{2k} E‖e^{M(ρ)t} w₀(ρ)‖² 4πρ² dρ` of the
/// linearized system, per component, for real weight order `k`
/// (`k = -s` gives `‖Λ^{-s}·‖²` up to the factor `(2π)^{-2s}` absorbed by
/// the `ρ` convention; see [`negative_norm_curve`]).
///
/// The expectation is over independent uniform phases of the initial
/// components, so `E‖e^{Mt}w‖² = Σ_j w_j² ‖e^{Mt} e_j‖²`.
pub fn weighted_decay_curve(
    profile: &SpectrumProfile,
    params: &ModelParams,
    k: f64,
    times: &[f64],
    opts: CurveOptions,
) -> Result<Vec<CurvePoint>> {
    profile.validate()?;
    params.validate()?;
    if times.iter().any(|t| !(*t >= 0.0)) || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("times must be nonnegative and increasing".into()));
    }
    let p_exp = 2.0 * profile.sigma + 2.0 * k + 2.0;
    if !(p_exp > -1.0) {
        return Err(Error::InvalidParameter(format!(
            "radial integrand ρ^{p_exp} is not integrable at 0"
        )));
    }
    times.iter().map(|&t| curve_point(profile, params, k, t, opts)).collect()
}

/// Squared solution-level (`k = 0`), gradient (`k = 1`) or Hessian
/// (`k = 2`) norms.
pub fn linear_decay_curve(
    profile: &SpectrumProfile,
    params: &ModelParams,
    k: u32,
    times: &[f64],
    opts: CurveOptions,
) -> Result<Vec<CurvePoint>> {
    if k > 2 {
        return Err(Error::InvalidParameter(format!("derivative order {k} not in 0..=2")));
    }
    weighted_decay_curve(profile, params, k as f64, times, opts)
}

/// Squared `‖Λ^{-s}·‖²` norms, `s ∈ (0, 3/2)`. Since `Λ` carries no `2π`,
/// `|ξ|^{-2s} = (2π)^{2s} ρ^{-2s}`.
pub fn negative_norm_curve(
    profile: &SpectrumProfile,
    params: &ModelParams,
    s: f64,
    times: &[f64],
    opts: CurveOptions,
) -> Result<Vec<CurvePoint>> {
    if !(s > 0.0 && s < 1.5) {
        return Err(Error::InvalidParameter(format!("s = {s} outside (0, 3/2)")));
    }
    let scale = (2.0 * std::f64::consts::PI).powf(2.0 * s);
    Ok(weighted_decay_curve(profile, params, -s, times, opts)?
        .into_iter()
        .map(|p| CurvePoint { t: p.t, a: p.a * scale, u: p.u * scale, theta: p.theta * scale })
        .collect())
}

/// Slowest diffusivity among the modes, used to place quadrature breaks.
fn slowest_diffusivity(params: &ModelParams) -> f64 {
    let acoustic = match params.kind {
        ModelKind::Icns => 0.5 * params.nu(),
        ModelKind::Fcns => (0.5 * params.nu()).min(1.0),
    };
    params.mu.min(acoustic).max(1e-12)
}

fn curve_point(
    profile: &SpectrumProfile,
    params: &ModelParams,
    k: f64,
    t: f64,
    opts: CurveOptions,
) -> Result<CurvePoint> {
    let c = profile.cutoff;
    let w = profile.weights;
    let amp2 = profile.amplitude * profile.amplitude;
    let fcns = params.kind == ModelKind::Fcns;
    let rho_max = opts.cutoff_span * c;
    let p_exp = 2.0 * profile.sigma + 2.0 * k + 2.0;
    // ρ = x^m makes the integrand in x behave like x^{m(p+1)-1} ≥ x at 0.
    let m = if p_exp + 1.0 >= 2.0 { 1.0 } else { 2.0 / (p_exp + 1.0) };
    let col_w = if fcns {
        vec![w.a * w.a, w.u_long * w.u_long, w.theta * w.theta]
    } else {
        vec![w.a * w.a, w.u_long * w.u_long]
    };
    let integrand = |x: f64| -> Vec<f64> {
        if x <= 0.0 {
            return vec![0.0; 3];
        }
        let rho = x.powf(m);
        let jac = m * x.powf(m - 1.0);
        let spectrum = amp2 * (-2.0 * rho * rho / (c * c)).exp();
        // ρ^{2σ + 2k + 2}, computed in log form to stay finite near 0.
        let weight = (p_exp * rho.ln()).exp() * spectrum * 4.0 * std::f64::consts::PI * jac;
        let mut out = [0.0; 3];
        if t == 0.0 {
            out[0] = col_w[0];
            out[1] = col_w[1];
            if fcns {
                out[2] = col_w[2];
            }
        } else {
            let e = expm(&(longitudinal_block(rho, params) * t));
            for (j, cw) in col_w.iter().enumerate() {
                if *cw == 0.0 {
                    continue;
                }
                out[0] += cw * e[(0, j)].powi(2);
                out[1] += cw * e[(1, j)].powi(2);
                if fcns {
                    out[2] += cw * e[(2, j)].powi(2);
                }
            }
        }
        let heat = (-2.0 * params.mu * rho * rho * t).exp();
        out[1] += w.u_trans * w.u_trans * heat;
        out.iter().map(|v| v * weight).collect()
    };
    let scale = 1.0 / (c.powi(-2) + slowest_diffusivity(params) * t).sqrt();
    let mut rho_breaks: Vec<f64> = (-12..=4)
        .map(|j| scale * 2f64.powi(j))
        .filter(|r| *r < rho_max)
        .collect();
    rho_breaks.insert(0, 0.0);
    rho_breaks.push(rho_max);
    let breaks: Vec<f64> = rho_breaks.iter().map(|r| r.powf(1.0 / m)).collect();
    let (v, _) = integrate_adaptive(integrand, &breaks, 3, opts.quad)?;
    // Tail beyond ρ_max, bounded by the undamped spectrum.
    let tail = tail_bound(p_exp, c, rho_max, amp2);
    let contraction = match params.kind {
        ModelKind::Fcns => 1.0,
        ModelKind::Icns => params.gamma.max(1.0 / params.gamma),
    };
    let wsum = |x: f64| x * tail * contraction;
    Ok(CurvePoint {
        t,
        a: v[0] + wsum(w.a * w.a),
        u: v[1] + wsum(w.u_long * w.u_long + w.u_trans * w.u_trans),
        theta: if fcns { v[2] + wsum(w.theta * w.theta) } else { 0.0 },
    })
}

/// `4π A² ∫_{R}^∞ ρ^p e^{-2ρ²/c²} dρ = 4π A² Γ(a, bR²) / (2 b^a)`,
/// `a = (p+1)/2`, `b = 2/c²`.
fn tail_bound(p: f64, c: f64, r: f64, amp2: f64) -> f64 {
    let a = 0.5 * (p + 1.0);
    let b = 2.0 / (c * c);
    let upper = gamma_ur(a, b * r * r) * gamma(a);
    4.0 * std::f64::consts::PI * amp2 * upper / (2.0 * b.powf(a))
}
