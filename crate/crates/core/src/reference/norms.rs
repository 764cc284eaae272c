//! Weighted L2 norms on the shell and in the conductor.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use serde::Serialize;

use super::{contributions, sum, ModalSolution};
use crate::error::{Error, Result};

/// Relative stability required between successive node doublings.
pub const QUADRATURE_TOL: f64 = 1e-12;
const START_NODES: usize = 16;
const MAX_NODES: usize = 1024;
/// Conductor integration stops this many decay lengths below the surface.
const CONDUCTOR_DEPTHS: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShellError {
    /// `sqrt(int |u|^2 r dr)`.
    pub e: f64,
    /// Same for the magnetic field `curl E / (i omega mu_plus)`.
    pub h: f64,
}

impl ShellError {
    pub fn total(&self) -> f64 {
        self.e + self.h
    }
}

fn rule(n: usize) -> GaussLegendre {
    GaussLegendre::new(NonZeroUsize::new(n).expect("positive node count"))
}

/// Integrate a vector-valued `f` over each panel with `rule`.
fn integrate<const N: usize>(
    rule: &GaussLegendre,
    panels: &[(f64, f64)],
    f: &mut impl FnMut(f64) -> Result<[f64; N]>,
) -> Result<[f64; N]> {
    let mut acc = [0.0; N];
    for &(a, b) in panels {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        for &(x, w) in rule.as_node_weight_pairs() {
            let v = f(mid + half * x)?;
            for (s, vi) in acc.iter_mut().zip(v) {
                *s += half * w * vi;
            }
        }
    }
    Ok(acc)
}

/// Doubles the node count until every component is stable to
/// [`QUADRATURE_TOL`].
fn integrate_stable<const N: usize>(
    panels: &[(f64, f64)],
    mut f: impl FnMut(f64) -> Result<[f64; N]>,
) -> Result<[f64; N]> {
    let mut n = START_NODES;
    let mut prev = integrate(&rule(n), panels, &mut f)?;
    while n < MAX_NODES {
        n *= 2;
        let next = integrate(&rule(n), panels, &mut f)?;
        if next
            .iter()
            .zip(&prev)
            .all(|(a, b)| (a - b).abs() <= QUADRATURE_TOL * a.abs())
        {
            return Ok(next);
        }
        prev = next;
    }
    log::warn!("quadrature not stable to {QUADRATURE_TOL:e} with {MAX_NODES} nodes per panel");
    Ok(prev)
}

pub(super) fn shell_norm_of(sol: &ModalSolution, coeffs: [[Complex64; 2]; 2]) -> Result<ShellError> {
    let b = &sol.benchmark;
    let m2 = f64::from(b.mode).powi(2);
    let h_scale = 1.0 / (b.physical.omega * b.physical.mu_plus).powi(2);
    let fns = sol.basis.shell;
    let panels = [(b.r_in, b.r_source), (b.r_source, b.r_out)];
    let [e2, h2] = integrate_stable(&panels, |r| {
        let i = usize::from(r > b.r_source);
        let (u, du) = sum(&contributions(&fns[i], coeffs[i], r)?);
        let u2 = u.norm_sqr();
        Ok([u2 * r, (du.norm_sqr() + m2 * u2 / (r * r)) * h_scale * r])
    })?;
    Ok(ShellError {
        e: e2.sqrt(),
        h: h2.sqrt(),
    })
}

/// Shell L2 distance between two solutions of the same benchmark, for the
/// electric field (`u`) and the magnetic field (`(u', i m u / r)` scaled by
/// `1 / (omega mu_plus)`).
pub fn shell_l2_error(a: &ModalSolution, b: &ModalSolution) -> Result<ShellError> {
    if a.benchmark != b.benchmark {
        return Err(Error::Mismatch(format!("{:?} vs {:?}", a.kind, b.kind)));
    }
    let mut diff = a.shell;
    for (d, c) in diff.iter_mut().flatten().zip(b.shell.iter().flatten()) {
        *d -= c;
    }
    shell_norm_of(a, diff)
}

/// `sqrt(int_0^{r_in} |u|^2 r dr)` for an exact solution. The integrand is
/// negligible more than 40 decay lengths below the surface, and the range
/// is split into panels two decay lengths wide.
pub fn conductor_norm(sol: &ModalSolution) -> Result<f64> {
    let b = &sol.benchmark;
    let c = sol
        .conductor
        .ok_or_else(|| Error::Domain(format!("{:?} solution has no conductor field", sol.kind)))?;
    let (_, km) = b.wavenumbers()?;
    let ell = 1.0 / km.im;
    let start = (b.r_in - CONDUCTOR_DEPTHS * ell).max(0.0);
    let n_panels = ((b.r_in - start) / (2.0 * ell)).ceil().max(1.0) as usize;
    let width = (b.r_in - start) / n_panels as f64;
    let panels: Vec<(f64, f64)> = (0..n_panels)
        .map(|i| (start + i as f64 * width, start + (i + 1) as f64 * width))
        .collect();
    let fns = sol.basis.conductor;
    let [n2] = integrate_stable(&panels, |r| {
        let (u, _) = sum(&contributions(&fns, c, r)?);
        Ok([u.norm_sqr() * r])
    })?;
    Ok(n2.sqrt())
}
