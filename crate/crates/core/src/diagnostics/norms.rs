use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{check_zero_mean, derivative_norm_sq, Field, VecField, TWO_PI};

/// `‖Λ^s f‖_{L²} = ‖|ξ|^s f̂‖`. Negative `s` requires a zero-mean field.
pub fn sobolev_norm(f: &Field, s: f64) -> Result<f64> {
    if s < 0.0 {
        check_zero_mean(f, s)?;
    }
    Ok(homogeneous_norm_sq(f, s).sqrt())
}

/// `L³ Σ_{k≠0} |ξ|^{2s} |f̂_k|²` (the zero mode counts only for `s = 0`).
pub(crate) fn homogeneous_norm_sq(f: &Field, s: f64) -> f64 {
    let sf = f.to_spectral();
    let grid = sf.grid();
    let c = sf.spectral().unwrap();
    let sum: f64 = c
        .iter()
        .enumerate()
        .map(|(k, z)| {
            if s == 0.0 {
                z.norm_sqr()
            } else if k == 0 {
                0.0
            } else {
                grid.xi_norm_sq(k).powf(s) * z.norm_sqr()
            }
        })
        .sum();
    grid.volume() * sum
}

/// Highest derivative order handled by [`hk_norm`].
pub const MAX_DERIVATIVE_ORDER: u32 = 3;

fn check_order(k: u32) -> Result<()> {
    if k > MAX_DERIVATIVE_ORDER {
        return Err(Error::InvalidParameter(format!(
            "derivative order {k} not supported (max {MAX_DERIVATIVE_ORDER})"
        )));
    }
    Ok(())
}

/// `‖∇^k f‖_{L²}`, equal to `(2π)^k ‖Λ^k f‖_{L²}`.
pub fn hk_norm(f: &Field, k: u32) -> Result<f64> {
    check_order(k)?;
    Ok(derivative_norm_sq(f, k as f64).sqrt())
}

/// `‖f‖_{H^k} = (Σ_{j≤k} ‖∇^j f‖²)^{1/2}`.
pub fn h_s_full(f: &Field, k: u32) -> Result<f64> {
    check_order(k)?;
    Ok((0..=k)
        .map(|j| derivative_norm_sq(f, j as f64))
        .sum::<f64>()
        .sqrt())
}

/// `‖∇^k v‖²` summed over components.
pub fn vec_derivative_norm_sq(v: &VecField, k: u32) -> f64 {
    v.0.iter().map(|f| derivative_norm_sq(f, k as f64)).sum()
}

/// `‖∇^k v‖²_{H¹} = ‖∇^k v‖² + ‖∇^{k+1} v‖²`.
pub(crate) fn shifted_h1_sq(f: &Field, k: u32) -> f64 {
    derivative_norm_sq(f, k as f64) + derivative_norm_sq(f, (k + 1) as f64)
}

pub(crate) fn vec_shifted_h1_sq(v: &VecField, k: u32) -> f64 {
    v.0.iter().map(|f| shifted_h1_sq(f, k)).sum()
}

/// `∫ ∇u : ∇²a dx = Σ_{ij} ∫ ∂_i u_j ∂_i∂_j a dx`, evaluated mode by mode
/// as `L³ Σ Re[-i |η|² (η·û) conj(â)]` with `η = 2πξ`.
pub fn cross_term(a: &Field, u: &VecField) -> f64 {
    let a = a.to_spectral();
    let u = u.to_spectral();
    let grid = a.grid();
    let ac = a.spectral().unwrap();
    let uc: Vec<&[Complex64]> = u.0.iter().map(|f| f.spectral().unwrap()).collect();
    let sum: f64 = (1..grid.len())
        .map(|k| {
            let xi = grid.derivative_xi(k);
            let eta = xi.map(|x| TWO_PI * x);
            let eta2 = eta.iter().map(|e| e * e).sum::<f64>();
            let eu = uc[0][k] * eta[0] + uc[1][k] * eta[1] + uc[2][k] * eta[2];
            (Complex64::new(0.0, -eta2) * eu * ac[k].conj()).re
        })
        .sum();
    grid.volume() * sum
}

/// Low/high partition of `‖f‖²` at the time-dependent radius
/// `|2πξ|² ≤ R / (1 + t)`.
pub fn fourier_split(f: &Field, r: f64, t: f64) -> Result<(f64, f64)> {
    if !(r > 0.0) || !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "splitting needs R > 0 and t >= 0, got R={r}, t={t}"
        )));
    }
    let radius_sq = r / (1.0 + t);
    let sf = f.to_spectral();
    let grid = sf.grid();
    let (mut low, mut high) = (0.0, 0.0);
    for (k, z) in sf.spectral().unwrap().iter().enumerate() {
        let rho2 = TWO_PI * TWO_PI * grid.xi_norm_sq(k);
        if rho2 <= radius_sq {
            low += z.norm_sqr();
        } else {
            high += z.norm_sqr();
        }
    }
    Ok((grid.volume() * low, grid.volume() * high))
}

pub fn fourier_split_vec(v: &VecField, r: f64, t: f64) -> Result<(f64, f64)> {
    let mut acc = (0.0, 0.0);
    for f in &v.0 {
        let (l, h) = fourier_split(f, r, t)?;
        acc.0 += l;
        acc.1 += h;
    }
    Ok(acc)
}

/// `‖∇³u‖² - r‖∇²u‖² + r²‖∇u‖²` with `r = R/(1+t)`; nonnegative since
/// per mode `|η|⁶ - r|η|⁴ + r²|η|² = |η|²((|η|² - r/2)² + 3r²/4)`.
pub fn splitting_residual(u: &VecField, r: f64, t: f64) -> Result<f64> {
    if !(r > 0.0) || !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "splitting needs R > 0 and t >= 0, got R={r}, t={t}"
        )));
    }
    let q = r / (1.0 + t);
    let n3 = vec_derivative_norm_sq(u, 3);
    let n2 = vec_derivative_norm_sq(u, 2);
    let n1 = vec_derivative_norm_sq(u, 1);
    Ok(n3 - q * n2 + q * q * n1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{make_grid, partial, second_partial};

    #[test]
    fn sine_norms_closed_form() {
        let l = 1.3;
        let g = make_grid(16, l).unwrap();
        let f = Field::from_fn(&g, |x| (TWO_PI * x[0] / l).sin());
        let expect = (l.powi(3) / 2.0).sqrt();
        assert!((sobolev_norm(&f, 0.0).unwrap() - expect).abs() < 1e-12);
        assert!((sobolev_norm(&f, 1.0).unwrap() - expect / l).abs() < 1e-12);
        assert!((hk_norm(&f, 2).unwrap() - (TWO_PI / l).powi(2) * expect).abs() < 1e-9);
        let c = Field::constant(&g, -2.0);
        assert!((sobolev_norm(&c, 0.0).unwrap() - 2.0 * l.powf(1.5)).abs() < 1e-12);
        assert!(sobolev_norm(&c, -0.5).is_err());
        assert!(hk_norm(&f, 4).is_err());
    }

    #[test]
    fn h1_identity() {
        let g = make_grid(8, 1.0).unwrap();
        let f = Field::from_fn(&g, |x| (TWO_PI * x[1]).cos() + 0.3 * (TWO_PI * 2.0 * x[2]).sin());
        let h1 = h_s_full(&f, 1).unwrap();
        let l2 = hk_norm(&f, 0).unwrap();
        let d1 = hk_norm(&f, 1).unwrap();
        assert!((h1 * h1 - l2 * l2 - d1 * d1).abs() < 1e-12 * h1 * h1);
    }

    #[test]
    fn cross_term_matches_physical_quadrature() {
        let g = make_grid(16, 1.0).unwrap();
        let a = Field::from_fn(&g, |x| {
            (TWO_PI * (x[0] + 2.0 * x[1])).sin() + (TWO_PI * x[2]).cos() + (TWO_PI * x[0]).sin()
        });
        let u = VecField::new(
            Field::from_fn(&g, |x| (TWO_PI * x[0]).cos()),
            Field::from_fn(&g, |x| (TWO_PI * (x[1] - x[0])).sin()),
            Field::from_fn(&g, |x| (TWO_PI * (x[2] + x[1])).cos() + (TWO_PI * 2.0 * x[1]).sin()),
        );
        let mut direct = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let du = partial(&u.0[j], i).to_physical();
                let d2a = second_partial(&a, i, j).to_physical();
                direct += du
                    .physical()
                    .unwrap()
                    .iter()
                    .zip(d2a.physical().unwrap())
                    .map(|(p, q)| p * q)
                    .sum::<f64>();
            }
        }
        direct *= g.cell_volume();
        let spectral = cross_term(&a, &u);
        assert!((direct - spectral).abs() < 1e-9 * direct.abs().max(1.0));
        assert!(direct.abs() > 1.0);
    }

    #[test]
    fn split_edges() {
        let l = 2.0;
        let g = make_grid(8, l).unwrap();
        let f = Field::from_fn(&g, |x| (TWO_PI * x[0] / l).sin());
        let lowest = (TWO_PI / l).powi(2);
        let (low, high) = fourier_split(&f, 0.5 * lowest, 0.0).unwrap();
        assert!(low < 1e-28 * high);
        assert!((high - f.l2_norm_sq()).abs() < 1e-12);
        let (low, high) = fourier_split(&f, 1e9, 3.0).unwrap();
        assert_eq!(high, 0.0);
        assert!((low - f.l2_norm_sq()).abs() < 1e-12);
    }

    #[test]
    fn residual_on_boundary_mode() {
        let l = 1.0;
        let g = make_grid(8, l).unwrap();
        let u = VecField::new(
            Field::from_fn(&g, |x| (TWO_PI * x[1]).sin()),
            Field::zeros(&g, crate::spectral::Repr::Physical),
            Field::zeros(&g, crate::spectral::Repr::Physical),
        );
        let t = 1.5;
        let r = (TWO_PI / l).powi(2) * (1.0 + t);
        let res = splitting_residual(&u, r, t).unwrap();
        let n3 = vec_derivative_norm_sq(&u, 3);
        assert!((res - n3).abs() < 1e-10 * n3);
    }
}
