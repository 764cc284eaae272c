//! Condition estimates for the small dense modal systems.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Condition numbers above this are logged as near-singular.
pub const CONDITION_WARNING: f64 = 1e12;

fn inf_norm(m: &DMatrix<Complex64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn max_norm<'a>(it: impl Iterator<Item = &'a Complex64>) -> f64 {
    it.map(|v| v.norm()).fold(0.0, f64::max)
}

/// Infinity-norm condition number of `a` after scaling every row and column
/// to unit infinity norm; infinite when the scaled matrix is numerically
/// singular. Logs a warning above [`CONDITION_WARNING`].
pub fn equilibrated_condition(a: DMatrix<Complex64>) -> f64 {
    let condition = scaled_condition(a).unwrap_or(f64::INFINITY);
    if condition > CONDITION_WARNING {
        log::warn!("near-singular modal system, condition number {condition:e}");
    }
    condition
}

fn scaled_condition(mut a: DMatrix<Complex64>) -> Option<f64> {
    for mut row in a.row_iter_mut() {
        let scale = max_norm(row.iter());
        if scale == 0.0 || !scale.is_finite() {
            return None;
        }
        row /= Complex64::new(scale, 0.0);
    }
    for mut col in a.column_iter_mut() {
        let scale = max_norm(col.iter());
        if scale == 0.0 {
            return None;
        }
        col /= Complex64::new(scale, 0.0);
    }
    let inverse = a.clone().lu().try_inverse()?;
    let condition = inf_norm(&a) * inf_norm(&inverse);
    condition.is_finite().then_some(condition)
}
