//! Normalised radial Bessel bases for one azimuthal mode.

use num_complex::Complex64;

use crate::bessel::{bessel_h1, bessel_j, BesselEval};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Family {
    J,
    H1,
}

/// `f(k r) / N` with `f` in `{J_m, H_m^(1)}` and a fixed complex
/// normalisation `N` chosen so that values stay O(1) on the region of use.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RadialFn {
    family: Family,
    order: u32,
    k: Complex64,
    /// `ln N`.
    ln_norm: Complex64,
}

fn eval(family: Family, order: u32, z: Complex64) -> Result<BesselEval> {
    match family {
        Family::J => bessel_j(order, z),
        Family::H1 => bessel_h1(order, z),
    }
}

impl RadialFn {
    /// Normalised to equal 1 at `r0`.
    pub(crate) fn unit_at(family: Family, order: u32, k: Complex64, r0: f64) -> Result<Self> {
        let e = eval(family, order, k * r0)?;
        Ok(Self {
            family,
            order,
            k,
            ln_norm: e.ln_value(),
        })
    }

    /// Normalised by the real size `|f(k r0)| + |r0 k f'(k r0)|`, which never
    /// vanishes.
    pub(crate) fn sized_at(family: Family, order: u32, k: Complex64, r0: f64) -> Result<Self> {
        let e = eval(family, order, k * r0)?;
        let size = e.value.norm() + (r0 * k * e.derivative).norm();
        Ok(Self {
            family,
            order,
            k,
            ln_norm: Complex64::new(size.ln(), 0.0) + e.exponent(),
        })
    }

    /// `(u(r), u'(r))`.
    pub(crate) fn at(&self, r: f64) -> Result<(Complex64, Complex64)> {
        let e = eval(self.family, self.order, self.k * r)?;
        let shift = e.exponent() - self.ln_norm;
        Ok((rescale(e.value, shift), self.k * rescale(e.derivative, shift)))
    }
}

/// `v e^{shift}` without intermediate overflow or underflow.
fn rescale(v: Complex64, shift: Complex64) -> Complex64 {
    if v == Complex64::new(0.0, 0.0) {
        v
    } else {
        (v.ln() + shift).exp()
    }
}
