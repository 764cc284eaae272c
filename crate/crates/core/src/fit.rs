//! Least-squares power-law fits on log-log data.

use serde::Serialize;

use crate::error::{Error, Result};

pub const MIN_POINTS: usize = 4;
pub const MIN_DECADES: f64 = 2.0;
pub const MIN_R_SQUARED: f64 = 0.98;

/// `error ~ exp(intercept) * x^slope`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceFit {
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Slopes between consecutive points, in input order.
    pub local_slopes: Vec<f64>,
}

impl ConvergenceFit {
    /// Fit `ln(y)` against `ln(x)`. Needs at least two strictly positive
    /// points; whether the fit is conclusive is a separate question.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::FitRejected(format!(
                "need at least 2 points, got {}",
                points.len()
            )));
        }
        if let Some(&(x, y)) = points
            .iter()
            .find(|(x, y)| !(*x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite()))
        {
            return Err(Error::FitRejected(format!(
                "log-log fit needs positive finite data, got ({x}, {y})"
            )));
        }
        let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
        let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
        let n = lx.len() as f64;
        let mx = lx.iter().sum::<f64>() / n;
        let my = ly.iter().sum::<f64>() / n;
        let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
        let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
        let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
        if sxx == 0.0 {
            return Err(Error::FitRejected("all abscissae coincide".into()));
        }
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
        let local_slopes = lx
            .windows(2)
            .zip(ly.windows(2))
            .map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0]))
            .collect();
        Ok(Self {
            points,
            slope,
            intercept,
            r_squared,
            local_slopes,
        })
    }

    pub fn decades(&self) -> f64 {
        let (lo, hi) = self
            .points
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), p| (lo.min(p.0), hi.max(p.0)));
        (hi / lo).log10()
    }

    /// Enough points, enough range and a straight enough line to quote the
    /// slope as a convergence order.
    pub fn is_conclusive(&self) -> bool {
        self.points.len() >= MIN_POINTS && self.decades() >= MIN_DECADES - 1e-9 && self.r_squared >= MIN_R_SQUARED
    }

    pub fn slope_within(&self, expected: f64, tol: f64) -> bool {
        (self.slope - expected).abs() <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let pts: Vec<_> = [1e-3, 1e-2, 1e-1, 1.0]
            .iter()
            .map(|&x: &f64| (x, 3.0 * x.powf(2.5)))
            .collect();
        let f = ConvergenceFit::new(pts).unwrap();
        assert!((f.slope - 2.5).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert!(f.is_conclusive());
        assert!(f.local_slopes.iter().all(|s| (s - 2.5).abs() < 1e-12));
    }

    #[test]
    fn narrow_range_is_not_conclusive() {
        let pts: Vec<_> = [1.0, 2.0, 4.0, 8.0].iter().map(|&x| (x, x * x)).collect();
        assert!(!ConvergenceFit::new(pts).unwrap().is_conclusive());
    }

    #[test]
    fn non_positive_data_rejected() {
        assert!(ConvergenceFit::new(vec![(1.0, 1.0), (2.0, 0.0)]).is_err());
        assert!(ConvergenceFit::new(vec![(1.0, 1.0)]).is_err());
    }
}
