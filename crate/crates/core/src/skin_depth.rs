//! Skin depth: the smallest depth at which the field modulus falls to
//! `e^{-1}` of its surface value, its asymptotic law and the
//! literature comparison formulas.

use std::f64::consts::E;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Surface, TangentVector};
use crate::params::DerivedParams;
use crate::profiles::{full_modulus_sqr, TraceData};

const SCAN_STEPS_PER_SCALE: f64 = 50.0;
const BISECTION_TOL: f64 = 1e-6;
const POLISH_STEPS: usize = 3;

/// Field modulus along the inward normal at a fixed surface point.
pub struct DecayTrace<F: Fn(f64) -> f64> {
    pub sampler: F,
    /// Expected e-folding length; sets the scan step and tolerances.
    pub scale: f64,
    pub max_depth: f64,
}

impl<F: Fn(f64) -> f64> DecayTrace<F> {
    /// Trace scanned over `[0, 10 * scale]`.
    pub fn new(sampler: F, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidParameter {
                name: "scale",
                value: scale,
            });
        }
        Ok(Self {
            sampler,
            scale,
            max_depth: 10.0 * scale,
        })
    }

    pub fn with_max_depth(mut self, max_depth: f64) -> Result<Self> {
        if !(max_depth.is_finite() && max_depth > 0.0) {
            return Err(Error::InvalidParameter {
                name: "max_depth",
                value: max_depth,
            });
        }
        self.max_depth = max_depth;
        Ok(self)
    }
}

/// Smallest `h > 0` with `|W(h)| = e^{-1} |W(0)|`.
///
/// A uniform scan with step `scale/50` brackets the first crossing, which
/// is bisected to `1e-6 * scale` and polished by Newton steps on the
/// quadratic through the final bracket and its midpoint.
pub fn skin_depth_numeric<F: Fn(f64) -> f64>(trace: &DecayTrace<F>) -> Result<f64> {
    let w0 = (trace.sampler)(0.0);
    if !(w0.is_finite() && w0 > 0.0) {
        return Err(Error::DegenerateTrace);
    }
    let f = |h: f64| (trace.sampler)(h) / w0 - 1.0 / E;

    let step = trace.scale / SCAN_STEPS_PER_SCALE;
    let n = (trace.max_depth / step).ceil() as usize;
    let mut lo = 0.0;
    let mut bracket = None;
    for k in 1..=n {
        let h = (k as f64 * step).min(trace.max_depth);
        let v = f(h);
        if !v.is_finite() {
            return Err(Error::Domain(format!("sampler returned {v} at depth {h}")));
        }
        if v <= 0.0 {
            bracket = Some((lo, h));
            break;
        }
        lo = h;
    }
    let (mut a, mut b) = bracket.ok_or(Error::NoRoot {
        max_depth: trace.max_depth,
    })?;
    if f(b) == 0.0 {
        return Ok(b);
    }

    let tol = BISECTION_TOL * trace.scale;
    let mut fa = f(a);
    while b - a > tol {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm > 0.0 {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);

    // Quadratic through (a, fa), (m, fm), (b, fb) in Newton form.
    let d1 = (fm - fa) / (m - a);
    let d2 = ((fb - fm) / (b - m) - d1) / (b - a);
    let q = |x: f64| fa + (x - a) * (d1 + (x - m) * d2);
    let dq = |x: f64| d1 + d2 * ((x - a) + (x - m));
    let mut x = m;
    for _ in 0..POLISH_STEPS {
        let slope = dq(x);
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        x -= q(x) / slope;
    }
    Ok(if x.is_finite() { x.clamp(a, b) } else { m })
}

/// `ell phi (1 + H ell phi)`.
pub fn skin_depth_asymptotic(dp: &DerivedParams, mean_curvature: f64) -> f64 {
    let lp = dp.ell_phi();
    lp * (1.0 + mean_curvature * lp)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SkinDepthReport {
    pub numeric: f64,
    pub asymptotic: f64,
    pub classical: f64,
    /// Two-dimensional eddy-current law `ell (1 + kappa/2 ell)` with
    /// `kappa = 2H`.
    pub eddy2d: f64,
    /// Non-magnetic high-conductivity law `ell0 (1 + H ell0)` with `ell0`
    /// the classical skin depth at the exterior permeability.
    pub high_conductivity: f64,
}

/// Representative unit trace used for the report: along the generator on a
/// cylinder (where the curvature correction is felt through `H - C`), along
/// the first principal direction otherwise.
pub fn reference_trace(s: &Surface) -> TraceData {
    let e0 = match s {
        Surface::Cylinder { .. } => TangentVector::real(0.0, 1.0),
        _ => TangentVector::real(1.0, 0.0),
    };
    TraceData::constant(e0, TangentVector::ZERO, 0.0.into())
}

/// Modulus of the two-term profile `W0 + eps W1` at physical depth `h`.
pub fn profile_sampler<'a>(s: &'a Surface, tr: &'a TraceData, dp: &'a DerivedParams) -> impl Fn(f64) -> f64 + 'a {
    move |h| {
        full_modulus_sqr(s, tr, dp.lambda, [0.0, 0.0], h, dp.eps_small)
            .map(f64::sqrt)
            .unwrap_or(f64::NAN)
    }
}

pub fn comparison_report(dp: &DerivedParams, s: &Surface) -> Result<SkinDepthReport> {
    s.validate()?;
    let h = s.mean_curvature();
    let lp = dp.ell_phi();
    let tr = reference_trace(s);
    let sampler = profile_sampler(s, &tr, dp);
    let collar = 0.999 * s.tubular_limit();
    let trace = DecayTrace::new(sampler, lp)?;
    let trace = if trace.max_depth > collar {
        trace.with_max_depth(collar)?
    } else {
        trace
    };
    let ell = dp.ell;
    let ell0 = dp.ell / dp.eps_small;
    Ok(SkinDepthReport {
        numeric: skin_depth_numeric(&trace)?,
        asymptotic: skin_depth_asymptotic(dp, h),
        classical: ell,
        eddy2d: ell * (1.0 + h * ell),
        high_conductivity: ell0 * (1.0 + h * ell0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{derive_params, PhysicalConfig};

    #[test]
    fn pure_exponential() {
        for d in [1e-6, 0.37, 12.0] {
            let t = DecayTrace::new(|h: f64| (-h / d).exp(), d).unwrap();
            let l = skin_depth_numeric(&t).unwrap();
            assert!((l / d - 1.0).abs() < 1e-12, "{l} vs {d}");
        }
    }

    #[test]
    fn constant_has_no_root() {
        let t = DecayTrace::new(|_| 2.0, 1.0).unwrap();
        assert_eq!(skin_depth_numeric(&t), Err(Error::NoRoot { max_depth: 10.0 }));
        let t = DecayTrace::new(|_| 0.0, 1.0).unwrap();
        assert_eq!(skin_depth_numeric(&t), Err(Error::DegenerateTrace));
    }

    #[test]
    fn first_of_several_crossings() {
        // dips below e^-1 near h = 1, recovers, and dips again later
        let f = |h: f64| (-h).exp() * (1.0 + 4.0 * (h - 1.0).max(0.0).powi(2));
        let t = DecayTrace::new(f, 1.0).unwrap();
        let l = skin_depth_numeric(&t).unwrap();
        assert!((l - 1.0).abs() < 1e-12);
    }

    #[test]
    fn asymptotic_examples() {
        let cfg = PhysicalConfig::new(1.0, 1.0, 1.0, 1e4, 1e-2, 1.0).unwrap();
        let dp = derive_params(&cfg).unwrap();
        assert_eq!(skin_depth_asymptotic(&dp, 0.0), dp.ell_phi());
        let lp = dp.ell_phi();
        let r = 0.8;
        let expected = lp * (1.0 + lp / (2.0 * r));
        assert!((skin_depth_asymptotic(&dp, 1.0 / (2.0 * r)) - expected).abs() < 1e-16);

        let mut fake = dp;
        fake.ell = 1e-3;
        fake.phi_value = 1.0;
        assert!((skin_depth_asymptotic(&fake, 50.0) - 1.05e-3).abs() < 1e-18);
    }

    #[test]
    fn plane_report_collapses() {
        let cfg = PhysicalConfig::new(1.0, 1.0, 1.0, 1e6, 1e-2, 1.0).unwrap();
        let dp = derive_params(&cfg).unwrap();
        let r = comparison_report(&dp, &Surface::Plane).unwrap();
        assert!((r.numeric / r.asymptotic - 1.0).abs() < 1e-8);
        assert_eq!(r.asymptotic, dp.ell_phi());
        assert_eq!(r.eddy2d, r.classical);
    }
}
