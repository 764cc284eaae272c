//! Canonical interfaces: plane, circular cylinder and sphere.
//!
//! The unit normal points into the conductor. Principal curvatures are taken
//! positive for a convex conductor, so a cylinder of radius `R` has
//! curvatures `(1/R, 0)` in the (azimuthal, axial) frame and a sphere has
//! `(1/R, 1/R)`. All tangent fields are expressed in that orthonormal
//! principal frame.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Surface {
    Plane,
    Cylinder {
        #[serde(alias = "radius_m")]
        radius: f64,
    },
    Sphere {
        #[serde(alias = "radius_m")]
        radius: f64,
    },
}

/// Symmetric 2x2 tensor in the principal frame.
pub type Tensor2 = [[f64; 2]; 2];

/// Exact shifted inverse metric together with its first-order truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftedMetric {
    pub exact: Tensor2,
    pub first_order: Tensor2,
}

impl ShiftedMetric {
    /// Frobenius norm of `exact - first_order`.
    pub fn truncation_gap(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let d = self.exact[i][j] - self.first_order[i][j];
                s += d * d;
            }
        }
        s.sqrt()
    }
}

impl Surface {
    pub fn cylinder(radius: f64) -> Result<Self> {
        let s = Surface::Cylinder { radius };
        s.validate()?;
        Ok(s)
    }

    pub fn sphere(radius: f64) -> Result<Self> {
        let s = Surface::Sphere { radius };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Surface::Plane => Ok(()),
            Surface::Cylinder { radius } | Surface::Sphere { radius } => {
                if radius.is_finite() && radius > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter {
                        name: "radius",
                        value: radius,
                    })
                }
            }
        }
    }

    pub fn principal_curvatures(&self) -> [f64; 2] {
        match *self {
            Surface::Plane => [0.0, 0.0],
            Surface::Cylinder { radius } => [1.0 / radius, 0.0],
            Surface::Sphere { radius } => [1.0 / radius, 1.0 / radius],
        }
    }

    /// Half the trace of the curvature tensor.
    pub fn mean_curvature(&self) -> f64 {
        let [k1, k2] = self.principal_curvatures();
        0.5 * (k1 + k2)
    }

    /// Shape-operator action `(C v)_a = b_a^b v_b`.
    pub fn curvature_apply(&self, v: TangentVector) -> TangentVector {
        let [k1, k2] = self.principal_curvatures();
        TangentVector::new(v.c[0] * k1, v.c[1] * k2)
    }

    /// `(H - C) v`, the combination entering the second-order terms.
    pub fn mean_minus_curvature(&self, v: TangentVector) -> TangentVector {
        v * self.mean_curvature() - self.curvature_apply(v)
    }

    /// The curvature tensor as a matrix in the principal frame.
    pub fn curvature_matrix(&self) -> Tensor2 {
        let [k1, k2] = self.principal_curvatures();
        [[k1, 0.0], [0.0, k2]]
    }

    /// True when both tangent directions of the surface have zero intrinsic
    /// curvature, so covariant derivatives reduce to partial derivatives in
    /// the arc-length coordinates.
    pub fn is_intrinsically_flat(&self) -> bool {
        !matches!(self, Surface::Sphere { .. })
    }

    /// Upper bound (exclusive) on the depth `h` accepted by
    /// [`Surface::shifted_inverse_metric`].
    pub fn tubular_limit(&self) -> f64 {
        match *self {
            Surface::Plane => f64::INFINITY,
            Surface::Cylinder { radius } | Surface::Sphere { radius } => 0.5 * radius,
        }
    }

    /// Inverse of `a_ab(h) = a_ab - 2 b_ab h + b_ac b^c_b h^2` at depth `h`
    /// below the surface, with its truncation `a^ab + 2 b^ab h`.
    pub fn shifted_inverse_metric(&self, h: f64) -> Result<ShiftedMetric> {
        if !(h >= 0.0 && h < self.tubular_limit()) {
            return Err(Error::Domain(format!(
                "depth {h} outside the tubular neighbourhood [0, {})",
                self.tubular_limit()
            )));
        }
        let [k1, k2] = self.principal_curvatures();
        let exact = |k: f64| 1.0 / ((1.0 - k * h) * (1.0 - k * h));
        Ok(ShiftedMetric {
            exact: [[exact(k1), 0.0], [0.0, exact(k2)]],
            first_order: [[1.0 + 2.0 * k1 * h, 0.0], [0.0, 1.0 + 2.0 * k2 * h]],
        })
    }
}

/// Complex tangent field value in the orthonormal principal frame.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TangentVector {
    pub c: [Complex64; 2],
}

impl TangentVector {
    pub const ZERO: TangentVector = TangentVector {
        c: [Complex64::new(0.0, 0.0); 2],
    };

    pub fn new(c1: Complex64, c2: Complex64) -> Self {
        Self { c: [c1, c2] }
    }

    pub fn real(c1: f64, c2: f64) -> Self {
        Self::new(Complex64::new(c1, 0.0), Complex64::new(c2, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c[0].norm_sqr() + self.c[1].norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Hermitian product `<self, other> = sum self_a * conj(other_a)`.
    pub fn inner(&self, other: &TangentVector) -> Complex64 {
        self.c[0] * other.c[0].conj() + self.c[1] * other.c[1].conj()
    }

    /// `g^ab self_a conj(other_b)` for a real symmetric tensor `g`.
    pub fn contract(&self, g: &Tensor2, other: &TangentVector) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (row, a) in g.iter().zip(&self.c) {
            for (gij, b) in row.iter().zip(&other.c) {
                s += gij * a * b.conj();
            }
        }
        s
    }

    /// Euclidean dot product without conjugation.
    pub fn dot(&self, k: [f64; 2]) -> Complex64 {
        self.c[0] * k[0] + self.c[1] * k[1]
    }
}

impl Add for TangentVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.c[0] + o.c[0], self.c[1] + o.c[1])
    }
}

impl Sub for TangentVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.c[0] - o.c[0], self.c[1] - o.c[1])
    }
}

impl Neg for TangentVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.c[0], -self.c[1])
    }
}

impl Mul<Complex64> for TangentVector {
    type Output = Self;
    fn mul(self, s: Complex64) -> Self {
        Self::new(self.c[0] * s, self.c[1] * s)
    }
}

impl Mul<f64> for TangentVector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.c[0] * s, self.c[1] * s)
    }
}
