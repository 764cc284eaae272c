//! Convergence of the approximate models to the exact solution as
//! `eps -> 0`.

use serde::Serialize;

use super::{shell_l2_error, solve_exact, solve_ibc, truncated_expansion, CylinderBenchmark, ModalSolution};
use crate::error::{Error, Result};
use crate::fit::ConvergenceFit;

pub const MIN_STUDY_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Approximation {
    /// Impedance condition of order `k`.
    Ibc(u32),
    /// Expansion truncated after the term `eps^m u_m`.
    Truncated(u32),
}

impl Approximation {
    /// Convergence order predicted by the theory: `eps^{k+1}`.
    pub fn expected_order(&self) -> f64 {
        match *self {
            Approximation::Ibc(k) | Approximation::Truncated(k) => f64::from(k) + 1.0,
        }
    }

    pub fn solve(&self, b: &CylinderBenchmark) -> Result<ModalSolution> {
        match *self {
            Approximation::Ibc(k) => solve_ibc(b, k),
            Approximation::Truncated(m) => truncated_expansion(b, m),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StudyRow {
    pub mode: i32,
    pub eps: f64,
    pub mu_r: f64,
    pub error_e: f64,
    pub error_h: f64,
    /// Slope against the previous row; `None` on the first row.
    pub local_slope: Option<f64>,
}

impl StudyRow {
    pub fn total(&self) -> f64 {
        self.error_e + self.error_h
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub approximation: Approximation,
    pub mode: i32,
    /// Ordered by decreasing `eps`.
    pub rows: Vec<StudyRow>,
    /// Fit of `error_e + error_h` against `eps`.
    pub fit: ConvergenceFit,
}

/// `n` logarithmically spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Error of one `(mode, eps)` point.
pub fn study_point(template: &CylinderBenchmark, approx: Approximation, eps: f64) -> Result<StudyRow> {
    let b = template.for_eps(eps)?;
    let exact = solve_exact(&b)?;
    let err = shell_l2_error(&exact, &approx.solve(&b)?)?;
    Ok(StudyRow {
        mode: b.mode,
        eps,
        mu_r: b.physical.mu_r(),
        error_e: err.e,
        error_h: err.h,
        local_slope: None,
    })
}

/// Assemble a study from already computed points (any order).
pub fn assemble_study(approx: Approximation, mut rows: Vec<StudyRow>) -> Result<ConvergenceStudy> {
    if rows.len() < MIN_STUDY_POINTS {
        return Err(Error::FitRejected(format!(
            "need at least {MIN_STUDY_POINTS} eps values, got {}",
            rows.len()
        )));
    }
    rows.sort_by(|a, b| b.eps.total_cmp(&a.eps));
    let mode = rows[0].mode;
    if rows.iter().any(|r| r.mode != mode) {
        return Err(Error::Mismatch("study rows mix azimuthal modes".into()));
    }
    for w in rows.windows(2) {
        if w[1].eps == w[0].eps {
            return Err(Error::FitRejected(format!("repeated eps value {}", w[0].eps)));
        }
        if !(w[1].total() < w[0].total()) {
            return Err(Error::FitRejected(format!(
                "error does not decrease with eps: {:e} at eps = {:e} vs {:e} at eps = {:e}",
                w[1].total(),
                w[1].eps,
                w[0].total(),
                w[0].eps
            )));
        }
    }
    let ratios: Vec<f64> = rows.windows(2).map(|w| (w[0].eps / w[1].eps).ln()).collect();
    if ratios.iter().any(|r| (r / ratios[0] - 1.0).abs() > 1e-6) {
        log::warn!("eps values are not logarithmically spaced");
    }
    let fit = ConvergenceFit::new(rows.iter().map(|r| (r.eps, r.total())).collect())?;
    for (row, slope) in rows.iter_mut().skip(1).zip(&fit.local_slopes) {
        row.local_slope = Some(*slope);
    }
    Ok(ConvergenceStudy {
        approximation: approx,
        mode,
        rows,
        fit,
    })
}

/// Shell errors of `approx` against the exact solution for every `eps` and
/// the power-law fit of their sum. Rejected unless the error decreases
/// strictly with `eps`.
pub fn convergence_study(
    template: &CylinderBenchmark,
    approx: Approximation,
    eps_list: &[f64],
) -> Result<ConvergenceStudy> {
    template.validate()?;
    let rows = eps_list
        .iter()
        .map(|&eps| study_point(template, approx, eps))
        .collect::<Result<Vec<_>>>()?;
    assemble_study(approx, rows)
}
