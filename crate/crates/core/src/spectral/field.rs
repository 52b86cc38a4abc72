use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::fft::{fft3, Direction};
use super::grid::SpectralGrid;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Repr {
    Physical,
    Spectral,
}

impl Repr {
    fn name(self) -> &'static str {
        match self {
            Repr::Physical => "physical",
            Repr::Spectral => "spectral",
        }
    }
}

#[derive(Clone, Debug)]
enum Data {
    Physical(Vec<f64>),
    Spectral(Vec<Complex64>),
}

/// Scalar field on a [`SpectralGrid`], held either as real point values or
/// as Fourier coefficients with Hermitian symmetry.
///
/// Spectral normalization: `f(x) = Σ_k f̂_k e^{2πi k·x/L}`, hence
/// `‖f‖²_{L²} = L³ Σ_k |f̂_k|²`.
#[derive(Clone, Debug)]
pub struct Field {
    grid: Arc<SpectralGrid>,
    data: Data,
}

impl Field {
    pub fn zeros(grid: &Arc<SpectralGrid>, repr: Repr) -> Self {
        let len = grid.len();
        let data = match repr {
            Repr::Physical => Data::Physical(vec![0.0; len]),
            Repr::Spectral => Data::Spectral(vec![Complex64::new(0.0, 0.0); len]),
        };
        Self {
            grid: grid.clone(),
            data,
        }
    }

    pub fn from_physical(grid: &Arc<SpectralGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} point values, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self {
            grid: grid.clone(),
            data: Data::Physical(values),
        })
    }

    /// Coefficients are taken as given; callers are responsible for
    /// Hermitian symmetry.
    pub fn from_spectral(grid: &Arc<SpectralGrid>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                coeffs.len()
            )));
        }
        Ok(Self {
            grid: grid.clone(),
            data: Data::Spectral(coeffs),
        })
    }

    /// Samples `f` at every grid point.
    pub fn from_fn<F>(grid: &Arc<SpectralGrid>, f: F) -> Self
    where
        F: Fn([f64; 3]) -> f64 + Sync,
    {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|flat| f(grid.point(flat)))
            .collect();
        Self {
            grid: grid.clone(),
            data: Data::Physical(values),
        }
    }

    pub fn constant(grid: &Arc<SpectralGrid>, c: f64) -> Self {
        Self {
            grid: grid.clone(),
            data: Data::Physical(vec![c; grid.len()]),
        }
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    pub fn repr(&self) -> Repr {
        match self.data {
            Data::Physical(_) => Repr::Physical,
            Data::Spectral(_) => Repr::Spectral,
        }
    }

    pub fn physical(&self) -> Option<&[f64]> {
        match &self.data {
            Data::Physical(v) => Some(v),
            Data::Spectral(_) => None,
        }
    }

    pub fn spectral(&self) -> Option<&[Complex64]> {
        match &self.data {
            Data::Spectral(v) => Some(v),
            Data::Physical(_) => None,
        }
    }

    pub(crate) fn spectral_mut(&mut self) -> Option<&mut Vec<Complex64>> {
        match &mut self.data {
            Data::Spectral(v) => Some(v),
            Data::Physical(_) => None,
        }
    }

    fn expect(&self, repr: Repr) -> Result<()> {
        if self.repr() == repr {
            Ok(())
        } else {
            Err(Error::RepresentationMismatch {
                expected: repr.name(),
                found: self.repr().name(),
            })
        }
    }

    /// Physical to spectral. Errors if the field is already spectral.
    pub fn forward(&self) -> Result<Field> {
        self.expect(Repr::Physical)?;
        Ok(self.to_spectral())
    }

    /// Spectral to physical. Errors if the field is already physical.
    pub fn inverse(&self) -> Result<Field> {
        self.expect(Repr::Spectral)?;
        Ok(self.to_physical())
    }

    /// Spectral copy, transforming only when needed.
    pub fn to_spectral(&self) -> Field {
        match &self.data {
            Data::Spectral(_) => self.clone(),
            Data::Physical(v) => {
                let mut buf: Vec<Complex64> =
                    v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                fft3(&self.grid, &mut buf, Direction::Forward);
                Field {
                    grid: self.grid.clone(),
                    data: Data::Spectral(buf),
                }
            }
        }
    }

    /// Physical copy, transforming only when needed. The imaginary residue
    /// of the inverse transform is dropped.
    pub fn to_physical(&self) -> Field {
        match &self.data {
            Data::Physical(_) => self.clone(),
            Data::Spectral(c) => {
                let mut buf = c.clone();
                fft3(&self.grid, &mut buf, Direction::Inverse);
                Field {
                    grid: self.grid.clone(),
                    data: Data::Physical(buf.into_iter().map(|z| z.re).collect()),
                }
            }
        }
    }

    pub fn into_spectral(self) -> Field {
        match self.data {
            Data::Spectral(_) => self,
            Data::Physical(_) => self.to_spectral(),
        }
    }

    pub fn into_physical(self) -> Field {
        match self.data {
            Data::Physical(_) => self,
            Data::Spectral(_) => self.to_physical(),
        }
    }

    /// Spatial mean `L^{-3} ∫ f dx`.
    pub fn mean(&self) -> f64 {
        match &self.data {
            Data::Spectral(c) => c[0].re,
            Data::Physical(v) => v.iter().sum::<f64>() / v.len() as f64,
        }
    }

    /// `∫ f dx`.
    pub fn integral(&self) -> f64 {
        self.mean() * self.grid.volume()
    }

    /// `‖f‖_{L²}`, by Parseval in spectral form or by equal-weight
    /// quadrature in physical form (identical for grid functions).
    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    pub fn l2_norm_sq(&self) -> f64 {
        match &self.data {
            Data::Spectral(c) => self.grid.volume() * c.iter().map(|z| z.norm_sqr()).sum::<f64>(),
            Data::Physical(v) => self.grid.cell_volume() * v.iter().map(|x| x * x).sum::<f64>(),
        }
    }

    /// Minimum point value (transforms if spectral).
    pub fn min_value(&self) -> f64 {
        let p = self.to_physical();
        p.physical()
            .unwrap()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        let p = self.to_physical();
        p.physical()
            .unwrap()
            .iter()
            .fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Copy with the zero mode removed.
    pub fn without_mean(&self) -> Field {
        let mut s = self.to_spectral();
        s.spectral_mut().unwrap()[0] = Complex64::new(0.0, 0.0);
        s
    }

    pub fn scaled(&self, c: f64) -> Field {
        let data = match &self.data {
            Data::Physical(v) => Data::Physical(v.iter().map(|x| x * c).collect()),
            Data::Spectral(v) => Data::Spectral(v.iter().map(|x| x * c).collect()),
        };
        Field {
            grid: self.grid.clone(),
            data,
        }
    }

    /// `self + c * other`, in the representation of `self`.
    pub fn add_scaled(&self, other: &Field, c: f64) -> Result<Field> {
        if *self.grid != *other.grid {
            return Err(Error::GridMismatch);
        }
        let data = match &self.data {
            Data::Physical(v) => {
                let o = other.to_physical();
                let w = o.physical().unwrap();
                Data::Physical(v.iter().zip(w).map(|(x, y)| x + c * y).collect())
            }
            Data::Spectral(v) => {
                let o = other.to_spectral();
                let w = o.spectral().unwrap();
                Data::Spectral(v.iter().zip(w).map(|(x, y)| x + y * c).collect())
            }
        };
        Ok(Field {
            grid: self.grid.clone(),
            data,
        })
    }

    /// Largest `|f̂_k - conj(f̂_{-k})|` over all modes; zero for a real field.
    pub fn hermitian_defect(&self) -> f64 {
        let s = self.to_spectral();
        let c = s.spectral().unwrap();
        (0..c.len())
            .map(|i| (c[i] - c[self.grid.conjugate_index(i)].conj()).norm())
            .fold(0.0, f64::max)
    }
}

/// Transforms several spectral fields to physical space, packing two real
/// fields into each complex transform.
pub fn inverse_many(fields: &[&Field]) -> Vec<Field> {
    let mut out = Vec::with_capacity(fields.len());
    for pair in fields.chunks(2) {
        match pair {
            [f, g] if f.grid == g.grid => {
                let (fs, gs) = (f.to_spectral(), g.to_spectral());
                let (fc, gc) = (fs.spectral().unwrap(), gs.spectral().unwrap());
                let i = Complex64::new(0.0, 1.0);
                let mut buf: Vec<Complex64> =
                    fc.iter().zip(gc).map(|(a, b)| a + i * b).collect();
                fft3(&f.grid, &mut buf, Direction::Inverse);
                let (re, im): (Vec<f64>, Vec<f64>) = buf.iter().map(|z| (z.re, z.im)).unzip();
                out.push(Field {
                    grid: f.grid.clone(),
                    data: Data::Physical(re),
                });
                out.push(Field {
                    grid: g.grid.clone(),
                    data: Data::Physical(im),
                });
            }
            _ => out.extend(pair.iter().map(|f| f.to_physical())),
        }
    }
    out
}

/// Transforms several physical fields to spectral space, two per complex
/// transform, separating the pair through Hermitian symmetry.
pub fn forward_many(fields: &[&Field]) -> Vec<Field> {
    let mut out = Vec::with_capacity(fields.len());
    for pair in fields.chunks(2) {
        match pair {
            [f, g] if f.grid == g.grid => {
                let (fp, gp) = (f.to_physical(), g.to_physical());
                let (fv, gv) = (fp.physical().unwrap(), gp.physical().unwrap());
                let mut buf: Vec<Complex64> = fv
                    .iter()
                    .zip(gv)
                    .map(|(&a, &b)| Complex64::new(a, b))
                    .collect();
                let grid = &f.grid;
                fft3(grid, &mut buf, Direction::Forward);
                let half_i = Complex64::new(0.0, -0.5);
                let (fc, gc): (Vec<Complex64>, Vec<Complex64>) = (0..buf.len())
                    .into_par_iter()
                    .map(|k| {
                        let z = buf[k];
                        let zc = buf[grid.conjugate_index(k)].conj();
                        ((z + zc) * 0.5, (z - zc) * half_i)
                    })
                    .unzip();
                out.push(Field {
                    grid: grid.clone(),
                    data: Data::Spectral(fc),
                });
                out.push(Field {
                    grid: grid.clone(),
                    data: Data::Spectral(gc),
                });
            }
            _ => out.extend(pair.iter().map(|f| f.to_spectral())),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::{make_grid, TWO_PI};

    #[test]
    fn constant_has_only_zero_mode() {
        let g = make_grid(8, 1.5).unwrap();
        let f = Field::constant(&g, 2.5).forward().unwrap();
        let c = f.spectral().unwrap();
        assert!((c[0].re - 2.5).abs() < 1e-14);
        assert!(c[1..].iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn cosine_occupies_two_conjugate_modes() {
        let g = make_grid(8, 2.0).unwrap();
        let f = Field::from_fn(&g, |x| (TWO_PI * x[0] / 2.0).cos())
            .forward()
            .unwrap();
        let c = f.spectral().unwrap();
        let p = g.flat_of_mode([1, 0, 0]);
        let m = g.flat_of_mode([-1, 0, 0]);
        assert!((c[p] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        assert!((c[m] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        for (i, z) in c.iter().enumerate() {
            if i != p && i != m {
                assert!(z.norm() < 1e-14);
            }
        }
    }

    #[test]
    fn representation_mismatch_is_an_error() {
        let g = make_grid(8, 1.0).unwrap();
        let f = Field::zeros(&g, Repr::Spectral);
        assert!(matches!(
            f.forward(),
            Err(Error::RepresentationMismatch { .. })
        ));
        assert!(Field::zeros(&g, Repr::Physical).inverse().is_err());
    }

    #[test]
    fn paired_transforms_match_single() {
        let g = make_grid(8, 1.0).unwrap();
        let f = Field::from_fn(&g, |x| (x[0] * 3.0).sin() + x[1] * x[2]);
        let h = Field::from_fn(&g, |x| (x[2] * 5.0).cos() - x[0]);
        let pair = forward_many(&[&f, &h]);
        for (p, single) in pair.iter().zip([f.to_spectral(), h.to_spectral()]) {
            let a = p.spectral().unwrap();
            let b = single.spectral().unwrap();
            assert!(a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-13));
        }
        let back = inverse_many(&[&pair[0], &pair[1]]);
        for (p, orig) in back.iter().zip([&f, &h]) {
            let a = p.physical().unwrap();
            let b = orig.physical().unwrap();
            assert!(a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12));
        }
    }
}
