//! Boundary-layer profiles inside the conductor and the operators acting on
//! them.
//!
//! A profile is a vector field `W = (W_a, e)` of the surface point `y` and
//! the stretched depth `Y3 = y3/eps`. Every profile handled here has the
//! form
//!
//! ```text
//! W_a(y, Y3) = (c0_a + c1_a Y3) e^{i k.y} e^{-lambda Y3}
//! e(y, Y3)   = (n0 + n1 Y3)     e^{i k.y} e^{-lambda Y3}
//! ```
//!
//! so normal derivatives are exact and, on intrinsically flat surfaces
//! (plane, cylinder in arc-length coordinates), surface derivatives are
//! multiplication by `i k`.

use std::ops::Add;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Surface, TangentVector};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Surface traces driving the profiles, all varying as `e^{i k.y}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceData {
    /// Amplitude of the tangential trace `E0` of the leading exterior term.
    pub e0: TangentVector,
    /// Amplitude of the tangential trace `E1` of the first corrector.
    pub e1: TangentVector,
    /// Amplitude of `div_S E0`.
    pub div_e0: Complex64,
    /// Surface wavevector in the principal frame (1/m).
    pub wavevector: [f64; 2],
}

impl TraceData {
    /// Single-harmonic traces on an intrinsically flat surface; the surface
    /// divergence follows from the wavevector.
    pub fn single_harmonic(s: &Surface, e0: TangentVector, e1: TangentVector, wavevector: [f64; 2]) -> Result<Self> {
        if !s.is_intrinsically_flat() {
            return Err(Error::Unsupported(
                "harmonic traces need an intrinsically flat surface; pass the divergence explicitly".into(),
            ));
        }
        Ok(Self {
            e0,
            e1,
            div_e0: I * e0.dot(wavevector),
            wavevector,
        })
    }

    /// Traces that are constant in the principal frame, with a prescribed
    /// surface divergence.
    pub fn constant(e0: TangentVector, e1: TangentVector, div_e0: Complex64) -> Self {
        Self {
            e0,
            e1,
            div_e0,
            wavevector: [0.0, 0.0],
        }
    }

    fn phase(&self, y: [f64; 2]) -> Complex64 {
        Complex64::from_polar(1.0, self.wavevector[0] * y[0] + self.wavevector[1] * y[1])
    }

    pub fn e0_at(&self, y: [f64; 2]) -> TangentVector {
        self.e0 * self.phase(y)
    }

    pub fn e1_at(&self, y: [f64; 2]) -> TangentVector {
        self.e1 * self.phase(y)
    }
}

/// One profile term `W_j` with closed-form derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileTerm {
    pub order: u8,
    pub decay_rate: Complex64,
    pub wavevector: [f64; 2],
    /// `(c0, c1)`: tangential amplitude is `c0 + c1 Y3`.
    pub tangential: [TangentVector; 2],
    /// `(n0, n1)`: normal amplitude is `n0 + n1 Y3`.
    pub normal: [Complex64; 2],
}

impl ProfileTerm {
    pub fn zero(order: u8, decay_rate: Complex64) -> Self {
        Self {
            order,
            decay_rate,
            wavevector: [0.0, 0.0],
            tangential: [TangentVector::ZERO; 2],
            normal: [Complex64::new(0.0, 0.0); 2],
        }
    }

    /// `W0 = E0 e^{-lambda Y3}` with vanishing normal part.
    pub fn leading(tr: &TraceData, lambda: Complex64) -> Self {
        Self {
            order: 0,
            decay_rate: lambda,
            wavevector: tr.wavevector,
            tangential: [tr.e0, TangentVector::ZERO],
            normal: [Complex64::new(0.0, 0.0); 2],
        }
    }

    /// `W1 = [E1 + Y3 (H - C) E0] e^{-lambda Y3}` with normal part
    /// `lambda^{-1} div_S E0 e^{-lambda Y3}`.
    pub fn first(s: &Surface, tr: &TraceData, lambda: Complex64) -> Self {
        Self {
            order: 1,
            decay_rate: lambda,
            wavevector: tr.wavevector,
            tangential: [tr.e1, s.mean_minus_curvature(tr.e0)],
            normal: [tr.div_e0 / lambda, Complex64::new(0.0, 0.0)],
        }
    }

    fn envelope(&self, y: [f64; 2], big_y: f64) -> Result<Complex64> {
        if !(big_y >= 0.0) {
            return Err(Error::Domain(format!("normal variable must be >= 0, got {big_y}")));
        }
        let phase = self.wavevector[0] * y[0] + self.wavevector[1] * y[1];
        Ok(Complex64::from_polar(1.0, phase) * (-self.decay_rate * big_y).exp())
    }

    pub fn tangential_at(&self, y: [f64; 2], big_y: f64) -> Result<TangentVector> {
        let e = self.envelope(y, big_y)?;
        Ok((self.tangential[0] + self.tangential[1] * big_y) * e)
    }

    pub fn normal_at(&self, y: [f64; 2], big_y: f64) -> Result<Complex64> {
        let e = self.envelope(y, big_y)?;
        Ok((self.normal[0] + self.normal[1] * big_y) * e)
    }

    /// `d/dY3` of the tangential part.
    pub fn d3_tangential(&self, y: [f64; 2], big_y: f64) -> Result<TangentVector> {
        let e = self.envelope(y, big_y)?;
        let [c0, c1] = self.tangential;
        Ok((c1 - (c0 + c1 * big_y) * self.decay_rate) * e)
    }

    /// `d^2/dY3^2` of the tangential part.
    pub fn d33_tangential(&self, y: [f64; 2], big_y: f64) -> Result<TangentVector> {
        let e = self.envelope(y, big_y)?;
        let [c0, c1] = self.tangential;
        let l = self.decay_rate;
        Ok((c1 * (-2.0 * l) + (c0 + c1 * big_y) * (l * l)) * e)
    }

    pub fn d3_normal(&self, y: [f64; 2], big_y: f64) -> Result<Complex64> {
        let e = self.envelope(y, big_y)?;
        let [n0, n1] = self.normal;
        Ok((n1 - (n0 + n1 * big_y) * self.decay_rate) * e)
    }

    pub fn d33_normal(&self, y: [f64; 2], big_y: f64) -> Result<Complex64> {
        let e = self.envelope(y, big_y)?;
        let [n0, n1] = self.normal;
        let l = self.decay_rate;
        Ok((-2.0 * l * n1 + (n0 + n1 * big_y) * l * l) * e)
    }

    /// Surface gradient `D_a` applied to a scalar harmonic `f e^{i k.y}`.
    fn grad(&self, f: Complex64) -> TangentVector {
        TangentVector::new(I * self.wavevector[0] * f, I * self.wavevector[1] * f)
    }

    /// Surface divergence of a harmonic tangent field.
    fn div(&self, v: TangentVector) -> Complex64 {
        I * v.dot(self.wavevector)
    }

    fn compatible(&self, other: &ProfileTerm) -> Result<()> {
        let zero_a = self.tangential == [TangentVector::ZERO; 2] && self.normal == [Complex64::new(0.0, 0.0); 2];
        let zero_b = other.tangential == [TangentVector::ZERO; 2] && other.normal == [Complex64::new(0.0, 0.0); 2];
        if zero_a || zero_b || (self.wavevector == other.wavevector && self.decay_rate == other.decay_rate) {
            Ok(())
        } else {
            Err(Error::Mismatch(
                "profiles carry different wavevectors or decay rates".into(),
            ))
        }
    }

    /// Linear combination `self + c * other`.
    pub fn axpy(&self, c: Complex64, other: &ProfileTerm) -> Result<ProfileTerm> {
        self.compatible(other)?;
        let base = if self.tangential == [TangentVector::ZERO; 2] && self.normal == [Complex64::new(0.0, 0.0); 2] {
            ProfileTerm {
                order: self.order,
                ..*other
            }
        } else {
            *self
        };
        Ok(ProfileTerm {
            tangential: [
                self.tangential[0] + other.tangential[0] * c,
                self.tangential[1] + other.tangential[1] * c,
            ],
            normal: [
                self.normal[0] + c * other.normal[0],
                self.normal[1] + c * other.normal[1],
            ],
            ..base
        })
    }
}

impl Add for ProfileTerm {
    type Output = Result<ProfileTerm>;
    fn add(self, o: ProfileTerm) -> Result<ProfileTerm> {
        self.axpy(Complex64::new(1.0, 0.0), &o)
    }
}

pub fn eval_w0(tr: &TraceData, lambda: Complex64, y: [f64; 2], big_y: f64) -> Result<TangentVector> {
    ProfileTerm::leading(tr, lambda).tangential_at(y, big_y)
}

pub fn eval_fke1(tr: &TraceData, lambda: Complex64, y: [f64; 2], big_y: f64) -> Result<Complex64> {
    ProfileTerm::first(&Surface::Plane, tr, lambda).normal_at(y, big_y)
}

pub fn eval_w1(s: &Surface, tr: &TraceData, lambda: Complex64, y: [f64; 2], big_y: f64) -> Result<TangentVector> {
    ProfileTerm::first(s, tr, lambda).tangential_at(y, big_y)
}

fn require_flat(s: &Surface) -> Result<()> {
    if s.is_intrinsically_flat() {
        Ok(())
    } else {
        Err(Error::Unsupported(
            "surface derivatives of harmonic profiles are closed-form only on the plane and the cylinder".into(),
        ))
    }
}

/// First-order operator coefficient `L^1` applied to `w`: surface part
/// `-2 b_a^b d3 W_b + d3 D_a e + b_b^b d3 W_a` and transverse part
/// `gamma_a^a(d3 W) + b_b^b d3 e`.
pub fn apply_l1(s: &Surface, w: &ProfileTerm, y: [f64; 2], big_y: f64) -> Result<(TangentVector, Complex64)> {
    require_flat(s)?;
    let dw = w.d3_tangential(y, big_y)?;
    let de = w.d3_normal(y, big_y)?;
    let trace_b = 2.0 * s.mean_curvature();
    let surface = s.curvature_apply(dw) * -2.0 + w.grad(de) + dw * trace_b;
    // gamma_ab(V) = (D_a V_b + D_b V_a)/2 - b_ab v, traced
    let gamma_trace = w.div(dw) - trace_b * de;
    Ok((surface, gamma_trace + trace_b * de))
}

/// Boundary datum `B^0(next) + B^1(prev)` at `Y3 = 0`, i.e.
/// `d3 W_next - D e_prev`.
pub fn apply_b(next: &ProfileTerm, prev: Option<&ProfileTerm>, y: [f64; 2]) -> Result<TangentVector> {
    let b0 = next.d3_tangential(y, 0.0)?;
    match prev {
        None => Ok(b0),
        Some(p) => Ok(b0 - p.grad(p.normal_at(y, 0.0)?)),
    }
}

/// Residual of the `W0` equation `d3^2 W0 - lambda^2 W0 = 0`, relative to
/// the size of its terms.
pub fn w0_ode_residual(tr: &TraceData, lambda: Complex64, y: [f64; 2], big_y: f64) -> Result<f64> {
    let w = ProfileTerm::leading(tr, lambda);
    let a = w.d33_tangential(y, big_y)?;
    let b = w.tangential_at(y, big_y)? * (lambda * lambda);
    Ok(relative(&[a, -b]))
}

/// Residual of the `W1` equation
/// `d3^2 W1 - lambda^2 W1 = -2 b_a^s d3 W0_s + b_b^b d3 W0_a`,
/// relative to the size of its terms.
pub fn w1_ode_residual(s: &Surface, tr: &TraceData, lambda: Complex64, y: [f64; 2], big_y: f64) -> Result<f64> {
    let w0 = ProfileTerm::leading(tr, lambda);
    let w1 = ProfileTerm::first(s, tr, lambda);
    let lhs_a = w1.d33_tangential(y, big_y)?;
    let lhs_b = w1.tangential_at(y, big_y)? * -(lambda * lambda);
    let dw0 = w0.d3_tangential(y, big_y)?;
    let rhs_a = s.curvature_apply(dw0) * -2.0;
    let rhs_b = dw0 * (2.0 * s.mean_curvature());
    Ok(relative(&[lhs_a, lhs_b, -rhs_a, -rhs_b]))
}

/// `|sum v| / max |v|`.
fn relative(terms: &[TangentVector]) -> f64 {
    let sum = terms.iter().fold(TangentVector::ZERO, |acc, v| acc + *v);
    let scale = terms.iter().map(TangentVector::norm).fold(0.0, f64::max);
    if scale == 0.0 {
        0.0
    } else {
        sum.norm() / scale
    }
}

fn nonzero_trace(tr: &TraceData, y: [f64; 2]) -> Result<TangentVector> {
    let e0 = tr.e0_at(y);
    if e0.norm_sqr() == 0.0 {
        Err(Error::DegenerateTrace)
    } else {
        Ok(e0)
    }
}

/// Truncated modulus factor
/// `g = 1 + 2 y3 H + 2 eps Re<E0, E1> / |E0|^2`.
pub fn modulus_expansion_gm(s: &Surface, tr: &TraceData, y: [f64; 2], y3: f64, eps: f64) -> Result<f64> {
    let e0 = nonzero_trace(tr, y)?;
    let e1 = tr.e1_at(y);
    Ok(1.0 + 2.0 * y3 * s.mean_curvature() + 2.0 * eps * e0.inner(&e1).re / e0.norm_sqr())
}

/// `|W_(eps)(y, y3)|^2` for `W_(eps) = W0 + eps W1` at `Y3 = y3/eps`,
/// measured with the exact shifted metric.
pub fn full_modulus_sqr(s: &Surface, tr: &TraceData, lambda: Complex64, y: [f64; 2], y3: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter {
            name: "eps",
            value: eps,
        });
    }
    let big_y = y3 / eps;
    let w0 = ProfileTerm::leading(tr, lambda);
    let w1 = ProfileTerm::first(s, tr, lambda);
    let w = w0.tangential_at(y, big_y)? + w1.tangential_at(y, big_y)? * eps;
    let e = w1.normal_at(y, big_y)? * eps;
    let metric = s.shifted_inverse_metric(y3)?;
    Ok(w.contract(&metric.exact, &w).re + e.norm_sqr())
}

/// `|W_(eps)|^2 e^{2 Re(lambda) Y3} / |E0|^2`, the quantity approximated
/// by [`modulus_expansion_gm`].
pub fn full_modulus_ratio(
    s: &Surface,
    tr: &TraceData,
    lambda: Complex64,
    y: [f64; 2],
    y3: f64,
    eps: f64,
) -> Result<f64> {
    let e0 = nonzero_trace(tr, y)?;
    let m = full_modulus_sqr(s, tr, lambda, y, y3, eps)?;
    Ok(m * (2.0 * lambda.re * y3 / eps).exp() / e0.norm_sqr())
}

/// C^2 cut-off equal to 1 on `[0, h0/2]` and 0 beyond `h0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff {
    pub h0: f64,
}

impl Cutoff {
    pub fn new(h0: f64) -> Result<Self> {
        if h0.is_finite() && h0 > 0.0 {
            Ok(Self { h0 })
        } else {
            Err(Error::InvalidParameter { name: "h0", value: h0 })
        }
    }

    /// Default collar: half the tubular-neighbourhood radius (unit collar on
    /// the plane).
    pub fn for_surface(s: &Surface) -> Self {
        let t = s.tubular_limit();
        Self {
            h0: if t.is_finite() { 0.5 * t } else { 1.0 },
        }
    }

    pub fn eval(&self, y3: f64) -> f64 {
        let half = 0.5 * self.h0;
        if y3 <= half {
            1.0
        } else if y3 >= self.h0 {
            0.0
        } else {
            let t = (y3 - half) / half;
            1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam() -> Complex64 {
        Complex64::from_polar(2f64.powf(0.25), -3.0 * std::f64::consts::PI / 8.0)
    }

    #[test]
    fn w0_examples() {
        let tr = TraceData::constant(TangentVector::real(1.0, 0.0), TangentVector::ZERO, 0.0.into());
        assert_eq!(eval_w0(&tr, lam(), [0.3, 0.1], 0.0).unwrap(), tr.e0);
        let v = eval_w0(&tr, lam(), [0.0, 0.0], 1.0).unwrap();
        // 50-digit reference for e^{-lambda}: 0.28850099685570608617 + 0.56499474620659011951i
        assert!((v.c[0] - Complex64::new(0.288_500_996_855_706_09, 0.564_994_746_206_590_12)).norm() < 1e-15);
        assert!(eval_w0(&tr, lam(), [0.0, 0.0], -1e-3).is_err());
        let zero = TraceData::constant(TangentVector::ZERO, TangentVector::ZERO, 0.0.into());
        assert_eq!(eval_w0(&zero, lam(), [1.0, 2.0], 3.0).unwrap(), TangentVector::ZERO);
    }

    #[test]
    fn w1_on_cylinder_axial_trace() {
        let s = Surface::cylinder(1.0).unwrap();
        let tr = TraceData::constant(TangentVector::real(0.0, 1.0), TangentVector::ZERO, 0.0.into());
        let v = eval_w1(&s, &tr, lam(), [0.0, 0.0], 2.0).unwrap();
        let expected = (-2.0 * lam()).exp();
        assert!((v.c[1] - expected).norm() < 1e-15 && v.c[0].norm() == 0.0);
    }

    #[test]
    fn fke1_vanishes_for_axial_mode() {
        let s = Surface::cylinder(2.0).unwrap();
        let tr =
            TraceData::single_harmonic(&s, TangentVector::real(0.0, 1.0), TangentVector::ZERO, [1.5, 0.0]).unwrap();
        assert_eq!(tr.div_e0, Complex64::new(0.0, 0.0));
        assert_eq!(
            eval_fke1(&tr, lam(), [0.4, 0.0], 1.0).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        let tr = TraceData::constant(TangentVector::ZERO, TangentVector::ZERO, Complex64::new(2.0, 1.0));
        assert!((eval_fke1(&tr, lam(), [0.0, 0.0], 0.0).unwrap() - Complex64::new(2.0, 1.0) / lam()).norm() < 1e-15);
    }

    #[test]
    fn l1_examples() {
        let tr = TraceData::constant(TangentVector::real(0.0, 1.0), TangentVector::ZERO, 0.0.into());
        let w0 = ProfileTerm::leading(&tr, lam());
        let y3 = 0.7;
        let (surf, _) = apply_l1(&Surface::Plane, &w0, [0.0, 0.0], y3).unwrap();
        assert_eq!(surf, TangentVector::ZERO);

        let r = 3.0;
        let (surf, _) = apply_l1(&Surface::cylinder(r).unwrap(), &w0, [0.0, 0.0], y3).unwrap();
        let expected = -lam() * (-lam() * y3).exp() / r;
        assert!((surf.c[1] - expected).norm() < 1e-15 && surf.c[0].norm() == 0.0);

        let zero = ProfileTerm::zero(1, lam());
        let (surf, normal) = apply_l1(&Surface::cylinder(r).unwrap(), &zero, [0.2, 0.0], y3).unwrap();
        assert_eq!((surf, normal), (TangentVector::ZERO, Complex64::new(0.0, 0.0)));

        assert!(apply_l1(&Surface::sphere(1.0).unwrap(), &w0, [0.0, 0.0], y3).is_err());
    }

    #[test]
    fn b_examples() {
        let s = Surface::cylinder(2.0).unwrap();
        let e0 = TangentVector::new(Complex64::new(0.3, -0.1), Complex64::new(1.0, 0.5));
        let e1 = TangentVector::new(Complex64::new(-0.2, 0.0), Complex64::new(0.1, 0.7));
        let tr = TraceData::constant(e0, e1, 0.0.into());
        let w0 = ProfileTerm::leading(&tr, lam());
        let w1 = ProfileTerm::first(&s, &tr, lam());
        assert_eq!(apply_b(&w0, None, [0.0, 0.0]).unwrap(), e0 * -lam());
        let got = apply_b(&w1, Some(&w0), [0.0, 0.0]).unwrap();
        let expected = e1 * -lam() + s.mean_minus_curvature(e0);
        assert!((got - expected).norm() < 1e-15);
        let z = ProfileTerm::zero(0, lam());
        assert_eq!(apply_b(&z, Some(&z), [0.0, 0.0]).unwrap(), TangentVector::ZERO);
    }

    #[test]
    fn gm_examples() {
        let tr = TraceData::constant(TangentVector::real(1.0, 0.0), TangentVector::ZERO, 0.0.into());
        let cyl = Surface::cylinder(1.0).unwrap();
        assert_eq!(modulus_expansion_gm(&cyl, &tr, [0.0, 0.0], 0.0, 0.0).unwrap(), 1.0);
        assert_eq!(
            modulus_expansion_gm(&Surface::Plane, &tr, [0.0, 0.0], 0.3, 0.1).unwrap(),
            1.0
        );
        assert!((modulus_expansion_gm(&cyl, &tr, [0.0, 0.0], 0.01, 0.0).unwrap() - 1.01).abs() < 1e-15);
        let zero = TraceData::constant(TangentVector::ZERO, TangentVector::ZERO, 0.0.into());
        assert_eq!(
            modulus_expansion_gm(&cyl, &zero, [0.0, 0.0], 0.0, 0.0),
            Err(Error::DegenerateTrace)
        );
    }

    #[test]
    fn cutoff_shape() {
        let c = Cutoff::new(1.0).unwrap();
        assert_eq!(c.eval(0.0), 1.0);
        assert_eq!(c.eval(0.5), 1.0);
        assert_eq!(c.eval(1.0), 0.0);
        assert!((c.eval(0.75) - 0.5).abs() < 1e-15);
        // C^1 and C^2 at the joins: one-sided differences vanish
        let h = 1e-5;
        assert!((c.eval(0.5 + h) - 1.0).abs() < 1e-12);
        assert!(c.eval(1.0 - h).abs() < 1e-12);
    }
}
