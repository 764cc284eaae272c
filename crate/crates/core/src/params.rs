//! Material/frequency inputs and every scalar derived from them.
//!
//! Complex powers are always built from modulus and argument so that the
//! branch of `lambda` (and of the impedance factors downstream) is fixed
//! explicitly: `arg(lambda) = (theta - pi)/2` with `theta = atan(1/delta^2)`
//! in `(0, pi/2)`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Raw SI inputs of the two-material problem.
///
/// `plus` refers to the non-magnetic exterior region, `minus` to the
/// magnetic conductor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalConfig {
    #[serde(rename = "omega_rad_per_s")]
    pub omega: f64,
    #[serde(rename = "eps0_f_per_m")]
    pub eps0: f64,
    #[serde(rename = "mu_plus_h_per_m")]
    pub mu_plus: f64,
    #[serde(rename = "mu_minus_h_per_m")]
    pub mu_minus: f64,
    #[serde(rename = "sigma_plus_s_per_m")]
    pub sigma_plus: f64,
    #[serde(rename = "sigma_minus_s_per_m")]
    pub sigma_minus: f64,
}

impl PhysicalConfig {
    pub fn new(omega: f64, eps0: f64, mu_plus: f64, mu_minus: f64, sigma_plus: f64, sigma_minus: f64) -> Result<Self> {
        let cfg = Self {
            omega,
            eps0,
            mu_plus,
            mu_minus,
            sigma_plus,
            sigma_minus,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega", self.omega),
            ("eps0", self.eps0),
            ("mu_plus", self.mu_plus),
            ("mu_minus", self.mu_minus),
            ("sigma_plus", self.sigma_plus),
            ("sigma_minus", self.sigma_minus),
        ];
        for (name, value) in fields {
            positive(name, value)?;
        }
        Ok(())
    }

    pub fn mu_r(&self) -> f64 {
        self.mu_minus / self.mu_plus
    }

    /// Same configuration with `mu_minus = mu_plus / eps^2`.
    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        positive("eps", eps)?;
        let cfg = Self {
            mu_minus: self.mu_plus / (eps * eps),
            ..*self
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_mu_r(&self, mu_r: f64) -> Result<Self> {
        positive("mu_r", mu_r)?;
        let cfg = Self {
            mu_minus: self.mu_plus * mu_r,
            ..*self
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// True when the asymptotic regime `mu_r >= 1` holds. Construction does
    /// not require it.
    pub fn is_asymptotic_regime(&self) -> bool {
        self.mu_r() >= 1.0
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

/// Every scalar of the model computed from a [`PhysicalConfig`].
///
/// `lambda` carries the unit of `kappa_plus` (1/m) and is the decay rate in
/// the stretched normal variable `Y3 = y3/eps`; the decay rate in physical
/// depth is [`DerivedParams::physical_decay_rate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedParams {
    pub mu_r: f64,
    pub eps_small: f64,
    pub delta_plus: f64,
    pub delta_minus: f64,
    pub kappa_plus: f64,
    pub theta: f64,
    pub lambda: Complex64,
    pub alpha_plus: Complex64,
    pub alpha_minus: Complex64,
    pub ell: f64,
    pub phi_value: f64,
}

impl DerivedParams {
    /// `lambda * sqrt(mu_r)`: decay rate per metre of depth inside the
    /// conductor.
    pub fn physical_decay_rate(&self) -> Complex64 {
        self.lambda / self.eps_small
    }

    /// The product `ell * phi`, which equals `eps / Re(lambda)`.
    pub fn ell_phi(&self) -> f64 {
        self.ell * self.phi_value
    }

    /// Relative mismatch of `-lambda^2 = kappa^2 (1 + i/delta^2)`.
    pub fn lambda_identity_residual(&self) -> f64 {
        let lhs = -self.lambda * self.lambda;
        let rhs = self.kappa_plus * self.kappa_plus * self.alpha_minus;
        (lhs - rhs).norm() / rhs.norm()
    }

    /// Relative mismatch of `eps / Re(lambda) = ell * phi(delta_minus)`.
    pub fn skin_depth_identity_residual(&self) -> f64 {
        let lhs = self.eps_small / self.lambda.re;
        let rhs = self.ell_phi();
        ((lhs - rhs) / rhs).abs()
    }
}

pub fn derive_params(cfg: &PhysicalConfig) -> Result<DerivedParams> {
    cfg.validate()?;
    let mu_r = cfg.mu_r();
    let eps_small = 1.0 / mu_r.sqrt();
    let delta_plus = (cfg.omega * cfg.eps0 / cfg.sigma_plus).sqrt();
    let delta_minus = (cfg.omega * cfg.eps0 / cfg.sigma_minus).sqrt();
    let kappa_plus = cfg.omega * (cfg.eps0 * cfg.mu_plus).sqrt();
    let theta = theta_of(delta_minus);

    // (1 + delta^-4)^(1/4) = (1 + delta^4)^(1/4) / delta, overflow-free
    let d4 = delta_minus.powi(4);
    let modulus = kappa_plus * (1.0 + d4).powf(0.25) / delta_minus;
    // arg = (theta - pi)/2; sin/cos of theta/2 keep Re(lambda) accurate as theta -> 0
    let half = 0.5 * theta;
    let lambda = Complex64::new(modulus * half.sin(), -modulus * half.cos());

    Ok(DerivedParams {
        mu_r,
        eps_small,
        delta_plus,
        delta_minus,
        kappa_plus,
        theta,
        lambda,
        alpha_plus: Complex64::new(1.0, 1.0 / (delta_plus * delta_plus)),
        alpha_minus: Complex64::new(1.0, 1.0 / (delta_minus * delta_minus)),
        ell: classical_skin_depth(cfg.omega, cfg.mu_minus, cfg.sigma_minus),
        phi_value: phi(delta_minus)?,
    })
}

/// `theta(delta) = atan(1/delta^2)` on the principal branch.
pub fn theta_of(delta: f64) -> f64 {
    1.0f64.atan2(delta * delta)
}

/// Classical skin depth `sqrt(2 / (omega mu sigma))`.
pub fn classical_skin_depth(omega: f64, mu: f64, sigma: f64) -> f64 {
    (2.0 / (omega * mu * sigma)).sqrt()
}

/// Dimensionless correction `phi(delta)` relating `eps / Re(lambda)` to the
/// classical skin depth. Tends to 1 as `delta -> 0` and to `sqrt(2) delta`
/// as `delta -> infinity`.
pub fn phi(delta: f64) -> Result<f64> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::Domain(format!("phi requires delta > 0, got {delta}")));
    }
    let half_theta = 0.5 * theta_of(delta);
    Ok(FRAC_1_SQRT_2 / (1.0 + delta.powi(4)).powf(0.25) / half_theta.sin())
}

/// Leontovich impedance factor `sqrt(mu_minus omega / sigma_minus) e^{-i pi/4}` (Ohm).
pub fn leontovich_factor(cfg: &PhysicalConfig) -> Result<Complex64> {
    cfg.validate()?;
    let modulus = (cfg.mu_minus * cfg.omega / cfg.sigma_minus).sqrt();
    Ok(Complex64::from_polar(modulus, -FRAC_PI_4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn unit() -> PhysicalConfig {
        PhysicalConfig::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn unit_inputs_give_closed_form_lambda() {
        let dp = derive_params(&unit()).unwrap();
        let expected = Complex64::from_polar(2f64.powf(0.25), -3.0 * PI / 8.0);
        assert_relative_eq!(dp.lambda.re, expected.re, max_relative = 1e-14);
        assert_relative_eq!(dp.lambda.im, expected.im, max_relative = 1e-14);
        let minus_sq = -dp.lambda * dp.lambda;
        assert_relative_eq!(minus_sq.re, 1.0, max_relative = 1e-14);
        assert_relative_eq!(minus_sq.im, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn equal_permeabilities_give_unit_eps() {
        let dp = derive_params(&unit()).unwrap();
        assert_eq!(dp.mu_r, 1.0);
        assert_eq!(dp.eps_small, 1.0);
    }

    #[test]
    fn mains_frequency_skin_depth() {
        let cfg = PhysicalConfig::new(2.0 * PI * 50.0, 8.854e-12, 4e-7 * PI, 4e-4 * PI, 1.0, 1e7).unwrap();
        let dp = derive_params(&cfg).unwrap();
        // 50-digit reference: 7.1176254341717705848e-4
        assert_relative_eq!(dp.ell, 7.117_625_434_171_770_6e-4, max_relative = 1e-13);
    }

    #[test]
    fn non_positive_fields_are_named() {
        let err = PhysicalConfig::new(1.0, 1.0, 1.0, 0.0, 1.0, 1.0).unwrap_err();
        assert_eq!(
            err,
            Error::InvalidParameter {
                name: "mu_minus",
                value: 0.0
            }
        );
        let err = PhysicalConfig::new(1.0, 1.0, 1.0, 1.0, 1.0, f64::NAN).unwrap_err();
        assert!(matches!(
            err,
            Error::InvalidParameter {
                name: "sigma_minus",
                ..
            }
        ));
    }

    #[test]
    fn phi_reference_values() {
        // 50-digit reference: 1.5537739740300373073
        assert_relative_eq!(phi(1.0).unwrap(), 1.553_773_974_030_037_3, max_relative = 1e-14);
        assert!((phi(1e-4).unwrap() - 1.0).abs() <= 1e-6);
        assert!((phi(1e4).unwrap() / (2f64.sqrt() * 1e4) - 1.0).abs() <= 1e-6);
        assert!(phi(0.0).is_err());
        assert!(phi(-1.0).is_err());
    }

    #[test]
    fn leontovich_reference_values() {
        let z = leontovich_factor(&unit()).unwrap();
        assert_relative_eq!(z.re, FRAC_1_SQRT_2, max_relative = 1e-15);
        assert_relative_eq!(z.im, -FRAC_1_SQRT_2, max_relative = 1e-15);

        let mut cfg = unit();
        cfg.sigma_minus = 1e12;
        assert!(leontovich_factor(&cfg).unwrap().norm() < 1e-5 * z.norm());

        let cfg = PhysicalConfig::new(2.0 * PI * 50.0, 8.854e-12, 4e-7 * PI, 4e-4 * PI, 1.0, 1e7).unwrap();
        // 50-digit reference: 1.9869176531592202469e-4
        assert_relative_eq!(
            leontovich_factor(&cfg).unwrap().norm(),
            1.986_917_653_159_220_2e-4,
            max_relative = 1e-13
        );
    }

    #[test]
    fn theta_stays_in_open_quarter_turn() {
        for d in [1e-6, 1e-3, 1.0, 1e3, 1e8] {
            let t = theta_of(d);
            assert!(t > 0.0 && t < PI / 2.0, "theta({d}) = {t}");
        }
    }
}
