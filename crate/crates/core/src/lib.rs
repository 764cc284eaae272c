//! Asymptotic model of the skin effect in magnetic conductors at large
//! relative permeability.
//!
//! The crate covers the closed-form parameter model ([`params`]), the
//! geometry of canonical interfaces ([`geometry`]), the boundary-layer
//! profiles inside the conductor ([`profiles`]), the skin-depth law
//! ([`skin_depth`]), impedance boundary conditions ([`ibc`]), complex
//! cylinder functions ([`bessel`]) and exact per-mode reference solutions
//! of the transmission problem on a layered cylinder ([`reference`]).
//!
//! All quantities are SI. The small parameter is `eps = 1/sqrt(mu_r)` with
//! `mu_r = mu_minus / mu_plus`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod error;
pub mod fit;
pub mod geometry;
pub mod ibc;
mod linalg;
pub mod params;
pub mod profiles;
pub mod reference;

pub mod skin_depth;

pub use error::{Error, Result};
pub use geometry::{Surface, TangentVector};
pub use params::{DerivedParams, PhysicalConfig};

pub use num_complex::Complex64;
