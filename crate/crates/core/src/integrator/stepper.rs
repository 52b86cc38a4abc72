use crate::error::{Error, Result};
use crate::models::{nonlinear, State, Tendency};

use super::propagator::{Coeffs, Phi, PropagatorCache};

/// Advective CFL factor: `dt ≤ CFL_SAFETY · Δx / max|u|`.
pub const CFL_SAFETY: f64 = 0.5;

/// Step behaviour switches.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepOptions {
    /// Drop the nonlinear terms (pure linear propagation).
    pub linear_only: bool,
    /// Abort once `min(1+a)` or `min(1+θ)` falls to this level.
    pub positivity_floor: f64,
}

impl Default for StepOptions {
    fn default() -> Self {
        Self {
            linear_only: false,
            positivity_floor: 0.0,
        }
    }
}

/// Largest step allowed by the advective CFL bound, `∞` for `u ≡ 0`.
pub fn cfl_limit(state: &State) -> f64 {
    let umax = state.u.max_magnitude();
    if umax == 0.0 {
        f64::INFINITY
    } else {
        CFL_SAFETY * state.grid().spacing() / umax
    }
}

/// One ETD2RK step with default options.
pub fn step(state: &State, cache: &PropagatorCache) -> Result<State> {
    step_with(state, cache, StepOptions::default())
}

/// One exponential time-differencing step (Cox–Matthews ETD2RK):
///
/// ```text
/// a       = e^{Mh} u_n + h φ₁(Mh) N(u_n)
/// u_{n+1} = a + h φ₂(Mh) (N(a) - N(u_n))
/// ```
///
/// Failures are reported as [`Error::RunAborted`] at the state's time.
pub fn step_with(state: &State, cache: &PropagatorCache, opts: StepOptions) -> Result<State> {
    let t = state.t;
    step_inner(state, cache, opts).map_err(|cause| Error::RunAborted {
        t,
        cause: Box::new(cause),
    })
}

fn step_inner(state: &State, cache: &PropagatorCache, opts: StepOptions) -> Result<State> {
    state.check_kind(cache.params().kind)?;
    if state.grid() != cache.grid() {
        return Err(Error::GridMismatch);
    }
    let h = cache.dt();
    let limit = cfl_limit(state);
    if h > limit {
        return Err(Error::CflViolation { t: state.t, dt: h, limit });
    }
    let params = cache.params();
    let un = Coeffs::from_fields(&state.a, &state.u, state.theta.as_ref());
    let grid = state.grid().clone();
    let rebuild = |c: Coeffs, t: f64| {
        let (a, u, theta) = c.into_fields(&grid);
        State { a, u, theta, t }
    };
    if opts.linear_only {
        let next = cache.apply(&[(Phi::Exp, 1.0, &un)]);
        return Ok(rebuild(next, state.t + h));
    }
    let n0 = coeffs_of(&nonlinear(state, params)?);
    let stage = cache.apply(&[(Phi::Exp, 1.0, &un), (Phi::Phi1, h, &n0)]);
    let mid = rebuild(stage.clone(), state.t + h);
    let n1 = coeffs_of(&nonlinear(&mid, params)?);
    let correction = cache.apply(&[(Phi::Phi2, h, &n1.axpy(-1.0, &n0))]);
    let next = rebuild(stage.axpy(1.0, &correction), state.t + h);
    next.check_positivity(opts.positivity_floor)?;
    Ok(next)
}

fn coeffs_of(t: &Tendency) -> Coeffs {
    Coeffs::from_fields(&t.da, &t.du, t.dtheta.as_ref())
}
