//! Impedance operators `D_0`, `D_1`, `D_2` and their reduction to scalar
//! Robin coefficients for axially polarised (TM) cylinder modes.
//!
//! The conditions read `H x n = D((n x E) x n)` on the interface. The
//! operators are built from a [`PhysicalConfig`] each time: sweeping `eps`
//! means rebuilding the configuration with `mu_minus = mu_plus / eps^2`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::ConvergenceFit;
use crate::geometry::{Surface, TangentVector};
use crate::params::{derive_params, leontovich_factor, DerivedParams, PhysicalConfig};

/// Sign relating the impedance condition to `u'(R) + gamma u(R) = 0` for
/// `E = u(r) e^{i m theta} z`. Derived from `curl E x n = -u' z` with the
/// normal pointing into the conductor, and confirmed by the convergence of
/// the first-order condition to the exact solution (see the reference
/// solver tests).
pub const TM_ROBIN_SIGN: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImpedanceOperator {
    pub order: u32,
    /// Coefficient of the identity (1/Ohm); zero for `k = 0`.
    pub scalar_part: Complex64,
    /// Coefficient of `H - C`; present for `k = 2` only.
    pub curvature_part: Option<Complex64>,
}

impl ImpedanceOperator {
    /// `D v` for a tangential field `v` in the principal frame.
    pub fn apply(&self, s: &Surface, v: TangentVector) -> TangentVector {
        let base = v * self.scalar_part;
        match self.curvature_part {
            Some(c) => base + s.mean_minus_curvature(v) * c,
            None => base,
        }
    }
}

/// `(1/sqrt(mu_minus)) (eps0^2 + (sigma_minus/omega)^2)^{1/4} e^{(i/2) atan(sigma_minus/(omega eps0))}`.
fn d1_scalar(cfg: &PhysicalConfig) -> Complex64 {
    let ratio = cfg.sigma_minus / cfg.omega;
    // (eps0^2 + r^2)^{1/4} without overflow
    let big = cfg.eps0.max(ratio);
    let small = cfg.eps0.min(ratio);
    let modulus = big.sqrt() * (1.0 + (small / big).powi(2)).powf(0.25) / cfg.mu_minus.sqrt();
    Complex64::from_polar(modulus, 0.5 * ratio.atan2(cfg.eps0))
}

pub fn impedance_operator(k: u32, cfg: &PhysicalConfig) -> Result<ImpedanceOperator> {
    cfg.validate()?;
    match k {
        0 => Ok(ImpedanceOperator {
            order: 0,
            scalar_part: Complex64::new(0.0, 0.0),
            curvature_part: None,
        }),
        1 => Ok(ImpedanceOperator {
            order: 1,
            scalar_part: d1_scalar(cfg),
            curvature_part: None,
        }),
        2 => Ok(ImpedanceOperator {
            order: 2,
            scalar_part: d1_scalar(cfg),
            curvature_part: Some(1.0 / (Complex64::i() * cfg.omega * cfg.mu_minus)),
        }),
        _ => Err(Error::UnsupportedOrder(k)),
    }
}

/// Relative mismatch between `scalar_part` and `-eps lambda / (i omega mu_plus)`.
pub fn consistency_with_lambda(op: &ImpedanceOperator, dp: &DerivedParams, cfg: &PhysicalConfig) -> Result<f64> {
    if op.order == 0 {
        return Err(Error::Unsupported(
            "the zeroth-order operator has no scalar part".into(),
        ));
    }
    let target = -dp.eps_small * dp.lambda / (Complex64::i() * cfg.omega * cfg.mu_plus);
    Ok((op.scalar_part - target).norm() / target.norm())
}

/// `|1/D_1 - Z_L| / |Z_L|` with `Z_L` the Leontovich factor.
pub fn leontovich_gap(cfg: &PhysicalConfig) -> Result<f64> {
    let z = leontovich_factor(cfg)?;
    let d1 = d1_scalar(cfg);
    Ok((d1.inv() - z).norm() / z.norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeontovichRow {
    pub sigma_minus: f64,
    pub delta_minus: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeontovichTable {
    pub rows: Vec<LeontovichRow>,
    /// Power-law fit of the gap against `delta_minus`; expected slope 2.
    pub fit: ConvergenceFit,
    pub warnings: Vec<String>,
}

/// Upper end of the small-`delta_minus` regime of the Leontovich limit.
pub const SMALL_DELTA: f64 = 0.1;

/// Gap to the Leontovich condition along a sweep of `sigma_minus`.
pub fn leontovich_limit_check(base: &PhysicalConfig, sigmas: &[f64]) -> Result<LeontovichTable> {
    let mut rows = Vec::with_capacity(sigmas.len());
    let mut warnings = Vec::new();
    for &sigma in sigmas {
        let cfg = PhysicalConfig {
            sigma_minus: sigma,
            ..*base
        };
        let dp = derive_params(&cfg)?;
        // the endpoint 0.1 itself belongs to the regime
        if dp.delta_minus > SMALL_DELTA * (1.0 + 1e-9) {
            let msg = format!(
                "sigma_minus = {sigma:e} gives delta_minus = {:e}, outside the small-delta regime",
                dp.delta_minus
            );
            log::warn!("{msg}");
            warnings.push(msg);
        }
        rows.push(LeontovichRow {
            sigma_minus: sigma,
            delta_minus: dp.delta_minus,
            gap: leontovich_gap(&cfg)?,
        });
    }
    let fit = ConvergenceFit::new(rows.iter().map(|r| (r.delta_minus, r.gap)).collect())?;
    // delta ~ sigma^{-1/2}: decades of sigma are twice those of delta
    let sigma_decades = 2.0 * fit.decades();
    if sigma_decades < 4.0 - 1e-9 {
        let msg = format!("sweep spans {sigma_decades:.2} decades of sigma_minus, fewer than 4");
        log::warn!("{msg}");
        warnings.push(msg);
    }
    Ok(LeontovichTable { rows, fit, warnings })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RobinCoefficient {
    pub mode: i32,
    pub gamma: Complex64,
}

/// Principal curvature of the direction carrying the TM field (the
/// generator on a cylinder).
fn field_direction(s: &Surface) -> TangentVector {
    match s {
        Surface::Cylinder { .. } => TangentVector::real(0.0, 1.0),
        _ => TangentVector::real(1.0, 0.0),
    }
}

/// `gamma = sign * i omega mu_plus (D_1 + D_2curv (H - kappa_field))` for
/// the condition `u' + gamma u = 0`; zero (Neumann) for `k = 0`.
pub fn robin_coefficient(k: u32, mode: i32, s: &Surface, cfg: &PhysicalConfig) -> Result<RobinCoefficient> {
    s.validate()?;
    let op = impedance_operator(k, cfg)?;
    let e = field_direction(s);
    let d = op.apply(s, e);
    let along = d.inner(&e);
    Ok(RobinCoefficient {
        mode,
        gamma: TM_ROBIN_SIGN * Complex64::i() * cfg.omega * cfg.mu_plus * along,
    })
}
