use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matfun::{phi1_scalar, phi2_scalar, phi_functions_with_route, PhiSet, Route};
use crate::models::{longitudinal_block, transverse_rate, ModelParams};
use crate::spectral::{Field, SpectralGrid, VecField};

/// Which member of the `φ`-family to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phi {
    Exp,
    Phi1,
    Phi2,
}

#[derive(Clone, Debug)]
struct ShellProp {
    long: PhiSet,
    /// `e^z`, `φ₁(z)`, `φ₂(z)` at `z = -μρ²dt`.
    trans: [f64; 3],
}

/// Per-shell `e^{M dt}`, `φ₁(M dt)`, `φ₂(M dt)` for one `(grid, params, dt)`.
///
/// Modes are grouped by the integer `|k|²`, since the longitudinal block
/// and the transverse rate depend on `|ξ|` only.
#[derive(Clone, Debug)]
pub struct PropagatorCache {
    grid: Arc<SpectralGrid>,
    params: ModelParams,
    dt: f64,
    slot: Vec<u32>,
    shells: Vec<ShellProp>,
    augmented_shells: usize,
}

/// Builds the cache for every dealiased mode of `grid`.
pub fn build_propagator(
    grid: &Arc<SpectralGrid>,
    params: &ModelParams,
    dt: f64,
) -> Result<PropagatorCache> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    params.validate()?;
    let mut index: BTreeMap<i64, u32> = BTreeMap::new();
    let mut slot = vec![u32::MAX; grid.len()];
    for (flat, s) in slot.iter_mut().enumerate() {
        if flat != 0 && grid.keeps(flat) {
            let next = index.len() as u32;
            *s = *index.entry(grid.k_squared(flat)).or_insert(next);
        }
    }
    let keys: Vec<i64> = {
        let mut v = vec![0; index.len()];
        for (&k2, &i) in &index {
            v[i as usize] = k2;
        }
        v
    };
    let built: Vec<(ShellProp, Route)> = keys
        .par_iter()
        .map(|&k2| {
            let rho = crate::spectral::TWO_PI * (k2 as f64).sqrt() / grid.box_length();
            let m = longitudinal_block(rho, params) * dt;
            let (long, route) = phi_functions_with_route(&m);
            let z = Complex64::new(transverse_rate(rho, params) * dt, 0.0);
            let trans = [z.re.exp(), phi1_scalar(z).re, phi2_scalar(z).re];
            (ShellProp { long, trans }, route)
        })
        .collect();
    let augmented_shells = built.iter().filter(|(_, r)| *r == Route::Augmented).count();
    Ok(PropagatorCache {
        grid: grid.clone(),
        params: *params,
        dt,
        slot,
        shells: built.into_iter().map(|(s, _)| s).collect(),
        augmented_shells,
    })
}

/// Spectral coefficients of a state or tendency, in `(a, u₁, u₂, u₃, θ)` order.
#[derive(Clone, Debug)]
pub(crate) struct Coeffs {
    pub(crate) parts: Vec<Vec<Complex64>>,
}

impl Coeffs {
    pub(crate) fn from_fields(a: &Field, u: &VecField, theta: Option<&Field>) -> Self {
        let mut parts = vec![spec(a)];
        parts.extend(u.0.iter().map(spec));
        if let Some(th) = theta {
            parts.push(spec(th));
        }
        Self { parts }
    }

    pub(crate) fn into_fields(self, grid: &Arc<SpectralGrid>) -> (Field, VecField, Option<Field>) {
        let mut it = self
            .parts
            .into_iter()
            .map(|p| Field::from_spectral(grid, p).expect("length preserved"));
        let a = it.next().unwrap();
        let u = VecField::new(it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
        (a, u, it.next())
    }

    /// `self + c·other`.
    pub(crate) fn axpy(&self, c: f64, other: &Coeffs) -> Coeffs {
        Coeffs {
            parts: self
                .parts
                .iter()
                .zip(&other.parts)
                .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q * c).collect())
                .collect(),
        }
    }
}

fn spec(f: &Field) -> Vec<Complex64> {
    f.to_spectral().spectral().unwrap().to_vec()
}

impl PropagatorCache {
    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    /// Number of distinct `|k|²` shells.
    pub fn shell_count(&self) -> usize {
        self.shells.len()
    }

    /// Shells whose φ-functions came from the augmented-exponential fallback.
    pub fn augmented_shells(&self) -> usize {
        self.augmented_shells
    }

    /// Whether the cache was built for these parameters and step.
    pub fn matches(&self, params: &ModelParams, dt: f64) -> bool {
        self.params == *params && self.dt == dt
    }

    /// Longitudinal matrices for a mode, `None` at `k = 0` and for
    /// dealiased modes.
    pub fn longitudinal(&self, flat: usize, which: Phi) -> Option<&DMatrix<f64>> {
        let s = self.shell(flat)?;
        Some(match which {
            Phi::Exp => &s.long.exp,
            Phi::Phi1 => &s.long.phi1,
            Phi::Phi2 => &s.long.phi2,
        })
    }

    /// Scalar transverse factor for a mode, `None` at `k = 0` and for
    /// dealiased modes.
    pub fn transverse(&self, flat: usize, which: Phi) -> Option<f64> {
        let s = self.shell(flat)?;
        Some(s.trans[which as usize])
    }

    fn shell(&self, flat: usize) -> Option<&ShellProp> {
        match self.slot[flat] {
            u32::MAX => None,
            i => Some(&self.shells[i as usize]),
        }
    }

    /// `Σ_j c_j · φ_{which_j}(M dt) · x_j`, mode by mode. At `k = 0` the
    /// symbol vanishes and the factors are `1, 1, 1/2`; dealiased modes
    /// come out as zero.
    pub(crate) fn apply(&self, terms: &[(Phi, f64, &Coeffs)]) -> Coeffs {
        let nparts = terms[0].2.parts.len();
        let fcns = nparts == 5;
        let grid = &self.grid;
        let zero = Complex64::new(0.0, 0.0);
        let per_mode: Vec<[Complex64; 5]> = (0..grid.len())
            .into_par_iter()
            .map(|flat| {
                let mut out = [zero; 5];
                if flat == 0 {
                    for &(which, c, x) in terms {
                        let w = c * match which {
                            Phi::Exp | Phi::Phi1 => 1.0,
                            Phi::Phi2 => 0.5,
                        };
                        for (o, p) in out.iter_mut().zip(&x.parts) {
                            *o += p[0] * w;
                        }
                    }
                    return out;
                }
                let Some(shell) = self.shell(flat) else {
                    return out;
                };
                let xi = grid.xi(flat);
                let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
                let nh = xi.map(|v| v / norm);
                let i = Complex64::new(0.0, 1.0);
                for &(which, c, x) in terms {
                    let p = &x.parts;
                    let ul = nh[0] * p[1][flat] + nh[1] * p[2][flat] + nh[2] * p[3][flat];
                    let mut w = [p[0][flat], -i * ul, zero];
                    if fcns {
                        w[2] = p[4][flat];
                    }
                    let (m, t) = match which {
                        Phi::Exp => (&shell.long.exp, shell.trans[0]),
                        Phi::Phi1 => (&shell.long.phi1, shell.trans[1]),
                        Phi::Phi2 => (&shell.long.phi2, shell.trans[2]),
                    };
                    let dim = m.nrows();
                    let mut v = [zero; 3];
                    for r in 0..dim {
                        for q in 0..dim {
                            v[r] += w[q] * m[(r, q)];
                        }
                    }
                    out[0] += v[0] * c;
                    let ul_new = i * v[1];
                    for d in 0..3 {
                        let trans = p[1 + d][flat] - ul * nh[d];
                        out[1 + d] += (ul_new * nh[d] + trans * t) * c;
                    }
                    if fcns {
                        out[4] += v[2] * c;
                    }
                }
                out
            })
            .collect();
        let mut parts = vec![Vec::with_capacity(grid.len()); nparts];
        for m in &per_mode {
            for (j, part) in parts.iter_mut().enumerate() {
                part.push(m[j]);
            }
        }
        Coeffs { parts }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;

    #[test]
    fn shells_and_transverse_factor() {
        let g = make_grid(8, 1.0).unwrap();
        let p = ModelParams::fcns(1.0, 0.0).unwrap();
        let dt = 0.1;
        let c = build_propagator(&g, &p, dt).unwrap();
        assert!(c.longitudinal(0, Phi::Exp).is_none());
        let flat = g.flat_of_mode([1, 0, 0]);
        let rho = g.rho(flat);
        let expect = (-rho * rho * dt).exp();
        assert!((c.transverse(flat, Phi::Exp).unwrap() - expect).abs() < 1e-15);
        assert!(c.matches(&p, dt));
        assert!(!c.matches(&p, 0.2));
        assert!(build_propagator(&g, &p, 0.0).is_err());
    }

    #[test]
    fn zero_mode_identity() {
        let g = make_grid(8, 1.0).unwrap();
        let p = ModelParams::icns(1.0, 0.0, 1.4).unwrap();
        let c = build_propagator(&g, &p, 0.3).unwrap();
        let a = Field::constant(&g, 0.7);
        let u = VecField::new(Field::constant(&g, 1.0), Field::constant(&g, -2.0), Field::constant(&g, 0.5));
        let x = Coeffs::from_fields(&a, &u, None);
        let y = c.apply(&[(Phi::Exp, 1.0, &x)]);
        for (p, q) in x.parts.iter().zip(&y.parts) {
            assert!((p[0] - q[0]).norm() < 1e-15);
        }
    }
}
