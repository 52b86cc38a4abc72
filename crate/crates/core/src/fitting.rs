//! Algebraic decay exponents from time series.
//!
//! A series `v(t) ≈ C (1+t)^α` is fitted by ordinary least squares of
//! `ln v` on `ln(1+t)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::TWO_PI;

/// Smallest number of samples accepted by [`fit_exponent`].
pub const MIN_FIT_POINTS: usize = 5;

/// Fraction of samples dropped at the start by [`default_window`].
pub const TRANSIENT_FRACTION: f64 = 0.2;

/// Closed time interval used for fitting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub t_lo: f64,
    pub t_hi: f64,
}

impl Window {
    pub fn new(t_lo: f64, t_hi: f64) -> Result<Self> {
        if !(t_lo < t_hi) {
            return Err(Error::Fit(format!("empty window [{t_lo}, {t_hi}]")));
        }
        Ok(Self { t_lo, t_hi })
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.t_lo && t <= self.t_hi
    }
}

/// Time after which the lowest box mode `|2πξ| = 2π/L` controls the decay:
/// `t_box = (L/2π)² / min(μ, 1)`.
pub fn box_horizon(box_length: f64, mu: f64) -> f64 {
    (box_length / TWO_PI).powi(2) / mu.min(1.0)
}

/// Drops the first 20% of samples and everything past `t_box`.
pub fn default_window(times: &[f64], t_box: Option<f64>) -> Result<Window> {
    if times.len() < MIN_FIT_POINTS {
        return Err(Error::Fit(format!("{} samples, need {MIN_FIT_POINTS}", times.len())));
    }
    let skip = (TRANSIENT_FRACTION * times.len() as f64).floor() as usize;
    let t_lo = times[skip];
    let last = *times.last().unwrap();
    let t_hi = t_box.map_or(last, |b| b.min(last));
    Window::new(t_lo, t_hi)
}

/// Whether a comparison is an upper bound or an exact rate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sidedness {
    /// Pass iff `exponent ≤ theoretical + tol`.
    OneSided,
    /// Pass iff `|exponent - theoretical| ≤ tol`.
    TwoSided,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub theoretical: f64,
    pub tol: f64,
    pub sidedness: Sidedness,
    pub deviation: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub exponent: f64,
    pub stderr: f64,
    pub intercept: f64,
    pub window: Window,
    pub n_points: usize,
    /// Set when the window reaches past the box-validity horizon.
    pub box_warning: bool,
    pub verdict: Option<Verdict>,
}

/// OLS slope of `ln v` against `ln(1+t)` over samples inside `window`.
pub fn fit_exponent(
    times: &[f64],
    values: &[f64],
    window: Window,
    t_box: Option<f64>,
) -> Result<FitResult> {
    if times.len() != values.len() {
        return Err(Error::Fit(format!(
            "{} times but {} values",
            times.len(),
            values.len()
        )));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&t, &v) in times.iter().zip(values) {
        if !window.contains(t) {
            continue;
        }
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Fit(format!("nonpositive value {v} at t = {t}")));
        }
        xs.push((1.0 + t).ln());
        ys.push(v.ln());
    }
    let n = xs.len();
    if n < MIN_FIT_POINTS {
        return Err(Error::Fit(format!(
            "{n} samples in [{}, {}], need {MIN_FIT_POINTS}",
            window.t_lo, window.t_hi
        )));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Fit("window has no spread in time".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = (ssr / (nf - 2.0) / sxx).sqrt();
    Ok(FitResult {
        exponent: slope,
        stderr,
        intercept,
        window,
        n_points: n,
        box_warning: t_box.is_some_and(|b| window.t_hi > b),
        verdict: None,
    })
}

/// Compares a fitted exponent with a theoretical rate.
pub fn compare_rates(fit: &FitResult, theoretical: f64, tol: f64, sidedness: Sidedness) -> Verdict {
    let deviation = fit.exponent - theoretical;
    let pass = match sidedness {
        Sidedness::OneSided => deviation <= tol,
        Sidedness::TwoSided => deviation.abs() <= tol,
    };
    Verdict {
        theoretical,
        tol,
        sidedness,
        deviation,
        pass,
    }
}

/// First time from which every local slope (over `span` consecutive
/// samples) stays within `tol` of the slope of the last such window.
/// Descriptive only.
pub fn stabilization_onset(times: &[f64], values: &[f64], span: usize, tol: f64) -> Option<f64> {
    let span = span.max(MIN_FIT_POINTS);
    if times.len() < span || times.len() != values.len() {
        return None;
    }
    let slopes: Vec<Option<f64>> = (0..=times.len() - span)
        .map(|i| {
            let w = Window::new(times[i], times[i + span - 1]).ok()?;
            fit_exponent(&times[i..i + span], &values[i..i + span], w, None)
                .ok()
                .map(|f| f.exponent)
        })
        .collect();
    let last = (*slopes.last()?)?;
    let mut onset = None;
    for (i, s) in slopes.iter().enumerate().rev() {
        match s {
            Some(v) if (v - last).abs() <= tol => onset = Some(times[i]),
            _ => break,
        }
    }
    onset
}

#[cfg(test)]
mod tests {
    use super::*;

    fn log_times(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
            .collect()
    }

    #[test]
    fn exact_power_law() {
        let t = log_times(1.0, 1e3, 40);
        let v: Vec<f64> = t.iter().map(|t| (1.0 + t).powf(-2.5)).collect();
        let f = fit_exponent(&t, &v, Window::new(0.0, 1e4).unwrap(), None).unwrap();
        assert!((f.exponent + 2.5).abs() < 1e-10);
        assert!(f.stderr < 1e-10);
        let c: Vec<f64> = t.iter().map(|_| 3.0).collect();
        let f = fit_exponent(&t, &c, Window::new(0.0, 1e4).unwrap(), None).unwrap();
        assert!(f.exponent.abs() < 1e-12);
    }

    #[test]
    fn verdicts() {
        let t = log_times(1.0, 1e3, 10);
        let fake = |e: f64| {
            let v: Vec<f64> = t.iter().map(|t| (1.0 + t).powf(e)).collect();
            fit_exponent(&t, &v, Window::new(0.0, 1e4).unwrap(), None).unwrap()
        };
        assert!(compare_rates(&fake(-2.49), -2.5, 0.05, Sidedness::TwoSided).pass);
        assert!(!compare_rates(&fake(-1.0), -2.5, 0.05, Sidedness::OneSided).pass);
        assert!(compare_rates(&fake(-2.9), -2.5, 0.05, Sidedness::OneSided).pass);
        assert!(!compare_rates(&fake(-2.9), -2.5, 0.05, Sidedness::TwoSided).pass);
    }

    #[test]
    fn errors_and_windows() {
        let t = log_times(1.0, 10.0, 8);
        let mut v: Vec<f64> = t.iter().map(|t| 1.0 / t).collect();
        let w = Window::new(0.0, 100.0).unwrap();
        assert!(fit_exponent(&t[..4], &v[..4], w, None).is_err());
        v[3] = 0.0;
        assert!(fit_exponent(&t, &v, w, None).is_err());
        assert!(Window::new(2.0, 1.0).is_err());
        let dw = default_window(&t, Some(5.0)).unwrap();
        assert_eq!(dw.t_lo, t[1]);
        assert_eq!(dw.t_hi, 5.0);
        v[3] = 0.3;
        let f = fit_exponent(&t, &v, w, Some(5.0)).unwrap();
        assert!(f.box_warning);
        let f = fit_exponent(&t, &v, w, Some(500.0)).unwrap();
        assert!(!f.box_warning);
    }

    #[test]
    fn horizon_formula() {
        assert!((box_horizon(TWO_PI * 4.0, 2.0) - 16.0).abs() < 1e-12);
        assert!((box_horizon(TWO_PI * 4.0, 0.5) - 32.0).abs() < 1e-12);
    }

    #[test]
    fn onset_after_transient() {
        let t: Vec<f64> = (1..=60).map(|i| i as f64).collect();
        let v: Vec<f64> = t.iter().map(|&t| (1.0 + t).powf(-1.5) * (1.0 + 5.0 * (-t).exp())).collect();
        let onset = stabilization_onset(&t, &v, 6, 0.01).unwrap();
        assert!(onset > 1.0 && onset < 15.0, "{onset}");
    }
}
