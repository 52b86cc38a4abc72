//! Interpolation, Gagliardo–Nirenberg, Hardy–Littlewood–Sobolev and
//! Hausdorff–Young inequalities evaluated on generated periodic fields.
//!
//! `L^p` norms use the equal-weight rule on the grid. Random fields are
//! zero-mean and band-limited to `|k_i| ≤ n/4`.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{
    check_zero_mean, derivative_norm_sq, lambda_pow, make_grid, partial, Field, SpectralGrid,
};

/// Ratios of one inequality over a family of samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub parameters: String,
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    pub min_ratio: f64,
    pub samples: usize,
    /// Declared constant; `None` for empirical-constant inequalities.
    pub constant: Option<f64>,
    pub pass: bool,
}

impl InequalityReport {
    /// Bound check against `constant · (1 + slack)`; with no declared
    /// constant, passes when every ratio is finite and positive.
    pub fn new(name: &str, parameters: String, ratios: Vec<f64>, constant: Option<f64>, slack: f64) -> Self {
        let max_ratio = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let finite = ratios.iter().all(|r| r.is_finite() && *r > 0.0);
        let pass = finite && constant.is_none_or(|c| max_ratio <= c * (1.0 + slack));
        Self {
            name: name.to_string(),
            parameters,
            samples: ratios.len(),
            ratios,
            max_ratio,
            min_ratio,
            constant,
            pass,
        }
    }
}

/// `(h³ Σ |f|^p)^{1/p}`, or `max |f|` for `p = ∞`.
pub fn lp_norm(f: &Field, p: f64) -> f64 {
    let phys = f.to_physical();
    let v = phys.physical().unwrap();
    lp_of_values(v.iter().map(|x| x.abs()), p, f.grid().cell_volume())
}

fn lp_of_values(vals: impl Iterator<Item = f64>, p: f64, measure: f64) -> f64 {
    if p.is_infinite() {
        return vals.fold(0.0, f64::max);
    }
    (vals.map(|x| x.powf(p)).sum::<f64>() * measure).powf(1.0 / p)
}

/// Pointwise `|∇^k f|` (Frobenius norm of the derivative tensor), `k ≤ 2`.
fn derivative_magnitude(f: &Field, k: u32) -> Result<Vec<f64>> {
    let comps: Vec<Field> = match k {
        0 => vec![f.to_spectral()],
        1 => (0..3).map(|i| partial(f, i)).collect(),
        2 => (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| crate::spectral::second_partial(f, i, j))
            .collect(),
        _ => return Err(Error::InvalidParameter(format!("derivative order {k} not in 0..=2"))),
    };
    let phys: Vec<Field> = comps.iter().map(Field::to_physical).collect();
    let n = f.grid().len();
    Ok((0..n)
        .map(|x| phys.iter().map(|c| c.physical().unwrap()[x].powi(2)).sum::<f64>().sqrt())
        .collect())
}

/// Ratio `‖∇^l f‖ / (‖∇^{l+1} f‖^{1-α} ‖|∇|^{-s} f‖^α)`, `α = 1/(l+1+s)`.
///
/// The negative norm is taken in the gradient convention
/// `‖|∇|^{-s} f‖ = (2π)^{-s} ‖Λ^{-s} f‖`, in which the constant is exactly
/// 1 (Hölder in frequency) and single modes give equality.
pub fn check_interp(f: &Field, l: u32, s: f64) -> Result<f64> {
    if l > 2 {
        return Err(Error::InvalidParameter(format!("l = {l} not in 0..=2")));
    }
    if !(s > 0.0 && s < 1.5) {
        return Err(Error::InvalidParameter(format!("s = {s} outside (0, 3/2)")));
    }
    check_zero_mean(f, -s)?;
    let alpha = 1.0 / (l as f64 + 1.0 + s);
    let lhs = derivative_norm_sq(f, l as f64).sqrt();
    let high = derivative_norm_sq(f, l as f64 + 1.0).sqrt();
    let neg = derivative_norm_sq(f, -s).sqrt();
    Ok(lhs / (high.powf(1.0 - alpha) * neg.powf(alpha)))
}

/// Exponent `p` of the Gagliardo–Nirenberg relation
/// `1/p - α/3 = (1/2 - m/3)(1-θ) + (1/2 - l/3)θ`.
pub fn gn_exponent(alpha: u32, m: u32, l: u32, theta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::InvalidParameter(format!("theta = {theta} outside [0, 1]")));
    }
    let inv = alpha as f64 / 3.0
        + (0.5 - m as f64 / 3.0) * (1.0 - theta)
        + (0.5 - l as f64 / 3.0) * theta;
    if !(inv > 0.0 && inv <= 0.5 + 1e-15) {
        return Err(Error::InvalidParameter(format!(
            "inadmissible exponents: 1/p = {inv} (need 0 < 1/p ≤ 1/2)"
        )));
    }
    Ok(1.0 / inv)
}

/// Ratio `‖∇^α f‖_{L^p} / (‖∇^m f‖^{1-θ} ‖∇^l f‖^θ)` with `p` from
/// [`gn_exponent`]. Returns `(p, ratio)`.
pub fn check_gn(f: &Field, alpha: u32, m: u32, l: u32, theta: f64) -> Result<(f64, f64)> {
    let p = gn_exponent(alpha, m, l, theta)?;
    if m > 3 || l > 3 {
        return Err(Error::InvalidParameter("m, l must be at most 3".into()));
    }
    let lhs = lp_of_values(derivative_magnitude(f, alpha)?.into_iter(), p, f.grid().cell_volume());
    let a = derivative_norm_sq(f, m as f64).sqrt();
    let b = derivative_norm_sq(f, l as f64).sqrt();
    Ok((p, lhs / (a.powf(1.0 - theta) * b.powf(theta))))
}

/// Ratio `‖Λ^{-s} f‖_{L^q} / ‖f‖_{L^p}` with `1/q = 1/p - s/3`.
/// Returns `(q, ratio)`.
pub fn check_hls(f: &Field, s: f64, p: f64) -> Result<(f64, f64)> {
    if !(s > 0.0 && s < 3.0) {
        return Err(Error::InvalidParameter(format!("s = {s} outside (0, 3)")));
    }
    let inv_q = 1.0 / p - s / 3.0;
    if !(p > 1.0) || !(inv_q > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need 1 < p < q < ∞, got p = {p}, 1/q = {inv_q}"
        )));
    }
    let q = 1.0 / inv_q;
    let num = lp_norm(&lambda_pow(f, -s)?, q);
    Ok((q, num / lp_norm(f, p)))
}

/// Ratio `‖f̂‖_{L^{p'}} / ‖f‖_{L^p}` for `1 ≤ p ≤ 2`, with
/// `f̂(ξ) = L³ c_k` on the frequency lattice of cell measure `L^{-3}`.
pub fn check_hausdorff_young(f: &Field, p: f64) -> Result<f64> {
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [1, 2]")));
    }
    let grid = f.grid();
    let vol = grid.volume();
    let q = if p == 1.0 { f64::INFINITY } else { p / (p - 1.0) };
    let spec = f.to_spectral();
    let c = spec.spectral().unwrap();
    let num = lp_of_values(c.iter().map(|z| z.norm() * vol), q, 1.0 / vol);
    Ok(num / lp_norm(f, p))
}

/// Random real, zero-mean field with coefficients supported on
/// `|k_i| ≤ n/4` and a random spectral slope.
pub fn random_band_limited(grid: &Arc<SpectralGrid>, rng: &mut impl Rng) -> Field {
    let kmax = (grid.n() / 4) as i64;
    let slope: f64 = rng.random_range(0.0..2.0);
    let mut c = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (flat, z) in c.iter_mut().enumerate() {
        let k = grid.mode(flat);
        if flat == 0 || k.iter().any(|v| v.abs() > kmax) {
            continue;
        }
        let amp = (1.0 + grid.k_squared(flat) as f64).powf(-slope);
        *z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * amp;
    }
    let sym: Vec<Complex64> = (0..grid.len())
        .map(|flat| 0.5 * (c[flat] + c[grid.conjugate_index(flat)].conj()))
        .collect();
    Field::from_spectral(grid, sym).expect("grid-sized")
}

/// Deterministic per-sample generator: stream `index` of `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Default `s` grid for the interpolation sweep.
pub const INTERP_S: [f64; 4] = [0.25, 0.5, 1.0, 1.4];

/// Sizes of the standard battery.
#[derive(Clone, Copy, Debug)]
pub struct BatterySize {
    pub grid_n: usize,
    pub samples: usize,
}

impl Default for BatterySize {
    fn default() -> Self {
        Self { grid_n: 16, samples: 200 }
    }
}

fn sample_fields(grid: &Arc<SpectralGrid>, seed: u64, samples: usize) -> Vec<Field> {
    (0..samples as u64)
        .into_par_iter()
        .map(|i| random_band_limited(grid, &mut sample_rng(seed, i)))
        .collect()
}

/// Interpolation sweep over `l ∈ {0,1,2}` and [`INTERP_S`], one report
/// per `(l, s)`, constant 1 with slack `1e-10`.
pub fn interp_reports(seed: u64, size: BatterySize) -> Result<Vec<InequalityReport>> {
    let grid = make_grid(size.grid_n, 1.0)?;
    let fields = sample_fields(&grid, seed, size.samples);
    let mut out = Vec::new();
    for l in 0..=2u32 {
        for &s in &INTERP_S {
            let ratios = fields
                .iter()
                .map(|f| check_interp(f, l, s))
                .collect::<Result<Vec<_>>>()?;
            out.push(InequalityReport::new("interpolation", format!("l={l}, s={s}"), ratios, Some(1.0), 1e-10));
        }
    }
    Ok(out)
}

/// Full battery: interpolation sweep, Gagliardo–Nirenberg at `p = 3, 4, 6`,
/// Hardy–Littlewood–Sobolev at `s = 1, p = 6/5`, and Hausdorff–Young at
/// `p ∈ {1, 4/3, 2}`.
pub fn battery(seed: u64, size: BatterySize) -> Result<Vec<InequalityReport>> {
    let mut out = interp_reports(seed, size)?;
    let grid = make_grid(size.grid_n, 1.0)?;
    let fields = sample_fields(&grid, seed ^ 0x9e37_79b9_7f4a_7c15, size.samples);
    for &(alpha, m, l, theta) in &[(0u32, 0u32, 1u32, 0.5), (0, 0, 1, 0.75), (0, 0, 1, 1.0), (1, 1, 2, 0.5)] {
        let mut p = 0.0;
        let ratios = fields
            .iter()
            .map(|f| {
                let (pp, r) = check_gn(f, alpha, m, l, theta)?;
                p = pp;
                Ok(r)
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(InequalityReport::new(
            "gagliardo-nirenberg",
            format!("alpha={alpha}, m={m}, l={l}, theta={theta}, p={p:.6}"),
            ratios,
            None,
            0.0,
        ));
    }
    let ratios = fields
        .iter()
        .map(|f| check_hls(f, 1.0, 1.2).map(|(_, r)| r))
        .collect::<Result<Vec<_>>>()?;
    out.push(InequalityReport::new("hardy-littlewood-sobolev", "s=1, p=1.2, q=2".into(), ratios, None, 0.0));
    for &(p, slack) in &[(1.0, 1e-12), (4.0 / 3.0, 0.05), (2.0, 1e-12)] {
        let ratios = fields
            .iter()
            .map(|f| check_hausdorff_young(f, p))
            .collect::<Result<Vec<_>>>()?;
        out.push(InequalityReport::new("hausdorff-young", format!("p={p:.6}"), ratios, Some(1.0), slack));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::TWO_PI;

    fn grid() -> Arc<SpectralGrid> {
        make_grid(16, 1.0).unwrap()
    }

    #[test]
    fn single_mode_interp_equality() {
        let g = grid();
        let f = Field::from_fn(&g, |x| (TWO_PI * (2.0 * x[0] + x[1])).cos());
        for l in 0..=2 {
            for &s in &INTERP_S {
                let r = check_interp(&f, l, s).unwrap();
                assert!((r - 1.0).abs() < 1e-12, "l={l} s={s} r={r}");
            }
        }
    }

    #[test]
    fn two_modes_strict() {
        let g = grid();
        let f = Field::from_fn(&g, |x| (TWO_PI * x[0]).cos() + (TWO_PI * 3.0 * x[1]).sin());
        assert!(check_interp(&f, 1, 0.5).unwrap() < 1.0 - 1e-3);
        assert!(check_interp(&Field::constant(&g, 1.0), 0, 0.5).is_err());
    }

    #[test]
    fn gn_degenerate_and_exponents() {
        assert!((gn_exponent(0, 0, 1, 0.5).unwrap() - 3.0).abs() < 1e-12);
        assert!((gn_exponent(0, 0, 1, 1.0).unwrap() - 6.0).abs() < 1e-12);
        assert!(gn_exponent(0, 2, 2, 1.0).is_err());
        let g = grid();
        let f = random_band_limited(&g, &mut sample_rng(1, 0));
        let (p, r) = check_gn(&f, 1, 1, 1, 0.3).unwrap();
        assert!((p - 2.0).abs() < 1e-12);
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hls_single_mode_and_preconditions() {
        let l = 1.0;
        let g = grid();
        let f = Field::from_fn(&g, |x| (TWO_PI * x[2] / l).sin());
        let (q, r) = check_hls(&f, 1.0, 1.2).unwrap();
        assert!((q - 2.0).abs() < 1e-12);
        let xi = 1.0 / l;
        let expect = f.l2_norm() / (xi * lp_norm(&f, 1.2));
        assert!((r - expect).abs() < 1e-12 * expect);
        assert!(check_hls(&f, 1.0, 3.0).is_err());
        assert!(check_hls(&f, 0.0, 1.5).is_err());
    }

    #[test]
    fn hausdorff_young_endpoints() {
        let g = grid();
        let mut rng = sample_rng(7, 3);
        for _ in 0..5 {
            let f = random_band_limited(&g, &mut rng);
            assert!((check_hausdorff_young(&f, 2.0).unwrap() - 1.0).abs() < 1e-12);
            assert!(check_hausdorff_young(&f, 1.0).unwrap() <= 1.0 + 1e-12);
            assert!(check_hausdorff_young(&f, 4.0 / 3.0).unwrap() <= 1.05);
        }
        assert!(check_hausdorff_young(&Field::constant(&g, 1.0), 2.5).is_err());
    }

    #[test]
    fn scaling_covariance() {
        let g = grid();
        let f = random_band_limited(&g, &mut sample_rng(3, 9));
        let h = f.scaled(7.5);
        assert!((check_interp(&f, 1, 0.5).unwrap() - check_interp(&h, 1, 0.5).unwrap()).abs() < 1e-12);
        let a = check_gn(&f, 0, 0, 1, 0.5).unwrap().1;
        let b = check_gn(&h, 0, 0, 1, 0.5).unwrap().1;
        assert!((a - b).abs() < 1e-12 * a);
        let a = check_hls(&f, 1.0, 1.2).unwrap().1;
        let b = check_hls(&h, 1.0, 1.2).unwrap().1;
        assert!((a - b).abs() < 1e-12 * a);
        let a = check_hausdorff_young(&f, 1.5).unwrap();
        let b = check_hausdorff_young(&h, 1.5).unwrap();
        assert!((a - b).abs() < 1e-12 * a);
    }

    #[test]
    fn random_fields_are_real_and_zero_mean() {
        let g = grid();
        let f = random_band_limited(&g, &mut sample_rng(11, 0));
        assert!(f.hermitian_defect() < 1e-15);
        assert!(f.mean().abs() < 1e-15);
        let again = random_band_limited(&g, &mut sample_rng(11, 0));
        assert_eq!(f.spectral(), again.spectral());
    }
}
