//! Exact per-mode solutions of the transmission problem on a layered
//! cylinder, of its impedance-reduced approximations and of the terms of its
//! asymptotic expansion, with the error norms used for convergence studies.
//!
//! Polarisation is TM: `E = u(r) e^{i m theta} z`. The conductor fills
//! `r < r_in`, the shell `r_in < r < r_out` carries a ring source at
//! `r_source` imposing a jump of `u'`, and `u'(r_out) = 0`. Across the
//! interface `u` is continuous and `u'_shell = eps^2 u'_conductor`.
//!
//! Coefficients multiply normalised Bessel bases (`J_m`, `H_m^(1)`) and are
//! only meaningful relative to the benchmark they were solved on.

mod basis;
mod norms;
mod study;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bessel::MAX_ORDER;
use crate::error::{Error, Result};
use crate::geometry::Surface;
use crate::ibc::robin_coefficient;
use crate::linalg;
use crate::params::{derive_params, DerivedParams, PhysicalConfig};
use crate::skin_depth::{skin_depth_numeric, DecayTrace};

use basis::{Family, RadialFn};

pub use norms::{conductor_norm, shell_l2_error, ShellError};
pub use study::{
    assemble_study, convergence_study, log_grid, study_point, Approximation, ConvergenceStudy, StudyRow,
    MIN_STUDY_POINTS,
};

/// Relative tolerance on every post-solve condition residual.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Default azimuthal modes of the benchmark sweeps.
pub const DEFAULT_MODES: [i32; 9] = [0, 1, 2, 3, 4, 5, 6, 7, 8];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CylinderBenchmark {
    #[serde(rename = "r_in_m")]
    pub r_in: f64,
    #[serde(rename = "r_out_m")]
    pub r_out: f64,
    #[serde(rename = "r_source_m")]
    pub r_source: f64,
    pub mode: i32,
    pub physical: PhysicalConfig,
    #[serde(default = "one")]
    pub source_amplitude: Complex64,
}

impl Default for CylinderBenchmark {
    /// `r_in = 1`, `r_out = 2`, `r_source = 1.5`, unit `omega`, `eps0`,
    /// `mu_plus` (so `kappa_plus = 1`), `sigma_minus = 1` (`delta_minus = 1`),
    /// `sigma_plus = 0.01` (`delta_plus = 10`), `eps = 0.1`, mode 0.
    fn default() -> Self {
        Self {
            r_in: 1.0,
            r_out: 2.0,
            r_source: 1.5,
            mode: 0,
            physical: PhysicalConfig {
                omega: 1.0,
                eps0: 1.0,
                mu_plus: 1.0,
                mu_minus: 100.0,
                sigma_plus: 0.01,
                sigma_minus: 1.0,
            },
            source_amplitude: one(),
        }
    }
}

impl CylinderBenchmark {
    pub fn validate(&self) -> Result<()> {
        self.physical.validate()?;
        for (name, value) in [("r_in", self.r_in), ("r_out", self.r_out), ("r_source", self.r_source)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        if !(self.r_in < self.r_source && self.r_source < self.r_out) {
            return Err(Error::Domain(format!(
                "radii must satisfy r_in < r_source < r_out, got {} / {} / {}",
                self.r_in, self.r_source, self.r_out
            )));
        }
        if self.mode.unsigned_abs() > MAX_ORDER {
            return Err(Error::OrderTooLarge(self.mode.unsigned_abs()));
        }
        if !(self.source_amplitude.re.is_finite() && self.source_amplitude.im.is_finite()) {
            return Err(Error::Domain("source amplitude must be finite".into()));
        }
        Ok(())
    }

    /// Same benchmark with `mu_minus = mu_plus / eps^2`.
    pub fn for_eps(&self, eps: f64) -> Result<Self> {
        Ok(Self {
            physical: self.physical.with_eps(eps)?,
            ..*self
        })
    }

    pub fn for_mode(&self, mode: i32) -> Self {
        Self { mode, ..*self }
    }

    pub fn surface(&self) -> Result<Surface> {
        Surface::cylinder(self.r_in)
    }

    pub fn derived(&self) -> Result<DerivedParams> {
        derive_params(&self.physical)
    }

    pub fn eps(&self) -> f64 {
        1.0 / self.physical.mu_r().sqrt()
    }

    /// `(k_plus, k_minus)` with `k_plus^2 = kappa^2 alpha_plus` and
    /// `k_minus^2 = kappa^2 alpha_minus / eps^2`, both with `Im k >= 0`.
    pub fn wavenumbers(&self) -> Result<(Complex64, Complex64)> {
        let dp = self.derived()?;
        let k_plus = dp.kappa_plus * dp.alpha_plus.sqrt();
        let k_minus = dp.kappa_plus * dp.alpha_minus.sqrt() / dp.eps_small;
        Ok((k_plus, k_minus))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModalKind {
    Exact,
    Ibc(u32),
    ExpansionTerm(u32),
    TruncatedExpansion(u32),
}

/// Condition imposed at `r_in` by the shell-only problems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum InnerCondition {
    /// `u' + gamma u = 0`.
    Robin { gamma: Complex64 },
    /// `u' = flux`.
    Neumann { flux: Complex64 },
}

#[derive(Debug, Clone, Copy)]
struct ModalBasis {
    /// `(J, H1)` on each shell sub-interval, normalised where each is
    /// largest: `J` at the outer end, `H1` at the inner end.
    shell: [[RadialFn; 2]; 2],
    /// Both normalised to 1 at `r_in`.
    conductor: [RadialFn; 2],
}

impl ModalBasis {
    fn new(b: &CylinderBenchmark) -> Result<Self> {
        let m = b.mode.unsigned_abs();
        let (kp, km) = b.wavenumbers()?;
        Ok(Self {
            shell: [
                [
                    RadialFn::sized_at(Family::J, m, kp, b.r_source)?,
                    RadialFn::sized_at(Family::H1, m, kp, b.r_in)?,
                ],
                [
                    RadialFn::sized_at(Family::J, m, kp, b.r_out)?,
                    RadialFn::sized_at(Family::H1, m, kp, b.r_source)?,
                ],
            ],
            conductor: [
                RadialFn::unit_at(Family::J, m, km, b.r_in)?,
                RadialFn::unit_at(Family::H1, m, km, b.r_in)?,
            ],
        })
    }
}

/// Per-function contributions `(c f(r), c f'(r))`.
type Terms = [(Complex64, Complex64); 2];

fn contributions(fns: &[RadialFn; 2], c: [Complex64; 2], r: f64) -> Result<Terms> {
    let mut out = [(ZERO, ZERO); 2];
    for i in 0..2 {
        if c[i] != ZERO {
            let (v, d) = fns[i].at(r)?;
            out[i] = (c[i] * v, c[i] * d);
        }
    }
    Ok(out)
}

fn sum(t: &Terms) -> (Complex64, Complex64) {
    (t[0].0 + t[1].0, t[0].1 + t[1].1)
}

fn value_scale(t: &Terms) -> f64 {
    t[0].0.norm() + t[1].0.norm()
}

fn slope_scale(t: &Terms) -> f64 {
    t[0].1.norm() + t[1].1.norm()
}

fn ratio(residual: f64, scale: f64) -> f64 {
    if residual == 0.0 {
        0.0
    } else {
        residual / scale
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionResidual {
    pub condition: &'static str,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct ModalSolution {
    pub kind: ModalKind,
    pub benchmark: CylinderBenchmark,
    /// `(J, H1)` amplitudes in the conductor; `None` for shell-only problems.
    pub conductor: Option<[Complex64; 2]>,
    /// `(J, H1)` amplitudes on `(r_in, r_source)` and `(r_source, r_out)`.
    pub shell: [[Complex64; 2]; 2],
    /// Jump of `u'` imposed at `r_source`.
    pub source: Complex64,
    /// Condition at `r_in` for shell-only problems.
    pub inner: Option<InnerCondition>,
    /// Condition number of the equilibrated linear system (0 for
    /// combinations of solutions).
    pub condition: f64,
    basis: ModalBasis,
}

impl ModalSolution {
    fn shell_terms(&self, r: f64, outer: bool) -> Result<Terms> {
        let i = usize::from(outer);
        contributions(&self.basis.shell[i], self.shell[i], r)
    }

    fn conductor_terms(&self, r: f64) -> Result<Terms> {
        let c = self
            .conductor
            .ok_or_else(|| Error::Domain(format!("{:?} solution is not defined inside the conductor", self.kind)))?;
        contributions(&self.basis.conductor, c, r)
    }

    /// `(u(r), u'(r))` for `0 <= r <= r_out`. The conductor side
    /// (`r < r_in`) exists for exact solutions only; `u'` at `r_source` is
    /// the inner one-sided value.
    pub fn field(&self, r: f64) -> Result<(Complex64, Complex64)> {
        let b = &self.benchmark;
        if !(r.is_finite() && (0.0..=b.r_out).contains(&r)) {
            return Err(Error::Domain(format!("radius {r} outside [0, {}]", b.r_out)));
        }
        let t = if r < b.r_in {
            self.conductor_terms(r)?
        } else {
            self.shell_terms(r, r > b.r_source)?
        };
        Ok(sum(&t))
    }

    pub fn u(&self, r: f64) -> Result<Complex64> {
        self.field(r).map(|f| f.0)
    }

    pub fn du(&self, r: f64) -> Result<Complex64> {
        self.field(r).map(|f| f.1)
    }

    /// `|u(r_in - depth)|`, the modulus along the inward normal.
    pub fn conductor_modulus(&self, depth: f64) -> Result<f64> {
        let r = self.benchmark.r_in - depth;
        if !(depth >= 0.0 && r >= 0.0) {
            return Err(Error::Domain(format!("depth {depth} outside [0, r_in]")));
        }
        Ok(sum(&self.conductor_terms(r)?).0.norm())
    }

    /// Shell norms of the solution itself.
    pub fn shell_norm(&self) -> Result<ShellError> {
        norms::shell_norm_of(self, self.shell)
    }

    /// Relative residual of every condition the solution must satisfy,
    /// obtained by substituting the coefficients back into the conditions.
    /// Each residual is scaled by the sum of the moduli of its terms.
    pub fn residuals(&self) -> Result<Vec<ConditionResidual>> {
        let b = &self.benchmark;
        let mut out = Vec::with_capacity(6);
        let mut push = |condition, residual| out.push(ConditionResidual { condition, residual });

        let shell_in = self.shell_terms(b.r_in, false)?;
        let (u_in, du_in) = sum(&shell_in);
        match (self.conductor, self.inner) {
            (Some(c), _) => {
                push("regularity at the axis", ratio(c[1].norm(), c[0].norm() + c[1].norm()));
                let inside = self.conductor_terms(b.r_in)?;
                let (u_c, du_c) = sum(&inside);
                push(
                    "continuity of u at r_in",
                    ratio((u_c - u_in).norm(), value_scale(&inside) + value_scale(&shell_in)),
                );
                let eps2 = 1.0 / b.physical.mu_r();
                push(
                    "continuity of u'/mu at r_in",
                    ratio(
                        (eps2 * du_c - du_in).norm(),
                        eps2 * slope_scale(&inside) + slope_scale(&shell_in),
                    ),
                );
            }
            (None, Some(InnerCondition::Robin { gamma })) => push(
                "Robin condition at r_in",
                ratio(
                    (du_in + gamma * u_in).norm(),
                    slope_scale(&shell_in) + gamma.norm() * value_scale(&shell_in),
                ),
            ),
            (None, Some(InnerCondition::Neumann { flux })) => push(
                "Neumann condition at r_in",
                ratio((du_in - flux).norm(), slope_scale(&shell_in) + flux.norm()),
            ),
            (None, None) => return Err(Error::Domain("solution carries no inner condition".into())),
        }

        let lo = self.shell_terms(b.r_source, false)?;
        let hi = self.shell_terms(b.r_source, true)?;
        let (u_lo, du_lo) = sum(&lo);
        let (u_hi, du_hi) = sum(&hi);
        push(
            "continuity of u at r_source",
            ratio((u_hi - u_lo).norm(), value_scale(&lo) + value_scale(&hi)),
        );
        push(
            "jump of u' at r_source",
            ratio(
                (du_hi - du_lo - self.source).norm(),
                slope_scale(&lo) + slope_scale(&hi) + self.source.norm(),
            ),
        );
        let outer = self.shell_terms(b.r_out, true)?;
        push(
            "Neumann condition at r_out",
            ratio(sum(&outer).1.norm(), slope_scale(&outer)),
        );
        Ok(out)
    }

    /// Fails with [`Error::ResidualCheck`] if any residual exceeds
    /// [`RESIDUAL_TOL`].
    pub fn check(&self) -> Result<()> {
        for r in self.residuals()? {
            if !(r.residual <= RESIDUAL_TOL) {
                return Err(Error::ResidualCheck {
                    condition: r.condition.to_string(),
                    residual: r.residual,
                });
            }
        }
        Ok(())
    }
}

/// Rows enforcing continuity at `r_source`, the jump and the outer Neumann
/// condition on the four shell unknowns starting at column `col`.
fn shell_rows(a: &mut DMatrix<Complex64>, row: usize, col: usize, at: &ShellValues) {
    let [(j1, dj1, h1, dh1), (j2, dj2, h2, dh2)] = at.source;
    let (djo, dho) = at.outer;
    let rows = [[j1, h1, -j2, -h2], [-dj1, -dh1, dj2, dh2], [ZERO, ZERO, djo, dho]];
    for (i, coeffs) in rows.into_iter().enumerate() {
        for (k, c) in coeffs.into_iter().enumerate() {
            a[(row + i, col + k)] = c;
        }
    }
}

/// `(J, J', H1, H1')` of one sub-interval basis.
type Values = (Complex64, Complex64, Complex64, Complex64);

/// Shell basis values at `r_in`, `r_source` and `r_out`.
#[derive(Clone, Copy)]
struct ShellValues {
    inner: Values,
    /// Inner and outer sub-interval bases at `r_source`.
    source: [Values; 2],
    /// `(J', H1')` at `r_out`.
    outer: (Complex64, Complex64),
}

fn values(fns: &[RadialFn; 2], r: f64) -> Result<Values> {
    let (j, dj) = fns[0].at(r)?;
    let (h, dh) = fns[1].at(r)?;
    Ok((j, dj, h, dh))
}

impl ShellValues {
    fn new(basis: &ModalBasis, b: &CylinderBenchmark) -> Result<Self> {
        let [lo, hi] = &basis.shell;
        let (_, djo, _, dho) = values(hi, b.r_out)?;
        Ok(Self {
            inner: values(lo, b.r_in)?,
            source: [values(lo, b.r_source)?, values(hi, b.r_source)?],
            outer: (djo, dho),
        })
    }
}

fn checked_div(num: Complex64, den: Complex64) -> Result<Complex64> {
    let q = num / den;
    if den == ZERO || !(q.re.is_finite() && q.im.is_finite()) {
        return Err(Error::SingularSystem {
            condition: f64::INFINITY,
        });
    }
    Ok(q)
}

/// Shell amplitudes from the inner row `alpha p1 + beta q1 = g`, the
/// source conditions and the outer condition.
///
/// The system is eliminated in its natural order: the inner row fixes
/// `q1` in terms of `p1`, the outer condition fixes `q2 / p2`, and a 2x2
/// system at `r_source` closes it. Only ratios and products of accurately
/// evaluated quantities appear, so every condition holds to rounding
/// relative to its own terms even when the field spans many decades across
/// the shell, which a pivoted factorisation of the full matrix does not
/// guarantee.
fn sweep(inner: [Complex64; 3], at: &ShellValues, source: Complex64) -> Result<[[Complex64; 2]; 2]> {
    let [alpha, beta, g] = inner;
    let [(j1, dj1, h1, dh1), (j2, dj2, h2, dh2)] = at.source;
    let rho1 = checked_div(-alpha, beta)?;
    let part = checked_div(g, beta)?;
    let rho2 = checked_div(-at.outer.0, at.outer.1)?;
    let a1 = j1 + rho1 * h1;
    let b1 = dj1 + rho1 * dh1;
    let (c, d) = (part * h1, part * dh1);
    let a2 = j2 + rho2 * h2;
    let b2 = dj2 + rho2 * dh2;
    // p1 a1 + c = p2 a2 ;  p2 b2 - p1 b1 - d = source
    let det = a1 * b2 - a2 * b1;
    let p1 = checked_div(a2 * (source + d) - c * b2, det)?;
    let p2 = checked_div(a1 * (source + d) - b1 * c, det)?;
    Ok([[p1, rho1 * p1 + part], [p2, rho2 * p2]])
}

/// Full transmission problem: conductor and shell coupled at `r_in`.
pub fn solve_exact(b: &CylinderBenchmark) -> Result<ModalSolution> {
    b.validate()?;
    let basis = ModalBasis::new(b)?;
    let eps2 = 1.0 / b.physical.mu_r();
    let [cj, ch] = basis.conductor;
    let (jc, djc) = cj.at(b.r_in)?;
    let (hc, dhc) = ch.at(b.r_in)?;
    let at = ShellValues::new(&basis, b)?;
    let (js, djs, hs, dhs) = at.inner;

    let mut a = DMatrix::from_element(6, 6, ZERO);
    // unknowns: conductor J, conductor H1, inner J, inner H1, outer J, outer H1
    a[(0, 1)] = one();
    for (k, c) in [jc, hc, -js, -hs].into_iter().enumerate() {
        a[(1, k)] = c;
    }
    for (k, c) in [eps2 * djc, eps2 * dhc, -djs, -dhs].into_iter().enumerate() {
        a[(2, k)] = c;
    }
    shell_rows(&mut a, 3, 2, &at);
    let condition = linalg::equilibrated_condition(a);

    // regular conductor field (J normalised to 1 at r_in) seen from the
    // shell: u' = y u with y = eps^2 J'/J
    let y = eps2 * djc / jc;
    let shell = sweep([djs - y * js, dhs - y * hs, ZERO], &at, b.source_amplitude)?;
    let a_c = (shell[0][0] * js + shell[0][1] * hs) / jc;
    let sol = ModalSolution {
        kind: ModalKind::Exact,
        benchmark: *b,
        conductor: Some([a_c, ZERO]),
        shell,
        source: b.source_amplitude,
        inner: None,
        condition,
        basis,
    };
    sol.check()?;
    Ok(sol)
}

/// Shell-only problem with an arbitrary condition at `r_in` and source
/// amplitude `source`.
pub fn solve_shell(
    b: &CylinderBenchmark,
    kind: ModalKind,
    inner: InnerCondition,
    source: Complex64,
) -> Result<ModalSolution> {
    b.validate()?;
    let basis = ModalBasis::new(b)?;
    let at = ShellValues::new(&basis, b)?;
    let (js, djs, hs, dhs) = at.inner;

    let row = match inner {
        InnerCondition::Robin { gamma } if gamma.norm() > 1.0 => {
            // (1/gamma) u' + u = 0 stays bounded as gamma grows
            let g = gamma.inv();
            [g * djs + js, g * dhs + hs, ZERO]
        }
        InnerCondition::Robin { gamma } => [djs + gamma * js, dhs + gamma * hs, ZERO],
        InnerCondition::Neumann { flux } => [djs, dhs, flux],
    };
    let mut a = DMatrix::from_element(4, 4, ZERO);
    a[(0, 0)] = row[0];
    a[(0, 1)] = row[1];
    shell_rows(&mut a, 1, 0, &at);
    let condition = linalg::equilibrated_condition(a);

    let sol = ModalSolution {
        kind,
        benchmark: *b,
        conductor: None,
        shell: sweep(row, &at, source)?,
        source,
        inner: Some(inner),
        condition,
        basis,
    };
    sol.check()?;
    Ok(sol)
}

/// Shell problem with the impedance condition of order `k`: Neumann for
/// `k = 0`, Robin with the reduced coefficient otherwise.
pub fn solve_ibc(b: &CylinderBenchmark, k: u32) -> Result<ModalSolution> {
    b.validate()?;
    let gamma = robin_coefficient(k, b.mode, &b.surface()?, &b.physical)?.gamma;
    let inner = if k == 0 {
        InnerCondition::Neumann { flux: ZERO }
    } else {
        InnerCondition::Robin { gamma }
    };
    solve_shell(b, ModalKind::Ibc(k), inner, b.source_amplitude)
}

/// `u_j'(r_in)` for the expansion term `j`, from the traces of the terms
/// already solved (`terms[i]` is term `i`):
/// `0`, `lambda u_0`, `lambda u_1 - u_0 / (2 r_in)`.
pub fn expansion_flux(b: &CylinderBenchmark, j: u32, terms: &[ModalSolution]) -> Result<Complex64> {
    if j > 2 {
        return Err(Error::UnsupportedOrder(j));
    }
    if terms.len() < j as usize {
        return Err(Error::Domain(format!("term {j} needs the {j} previous terms")));
    }
    let lambda = b.derived()?.lambda;
    let trace = |i: usize| terms[i].u(b.r_in);
    Ok(match j {
        0 => ZERO,
        1 => lambda * trace(0)?,
        _ => lambda * trace(1)? - trace(0)? / (2.0 * b.r_in),
    })
}

/// Expansion terms `0..=up_to`, solved in order.
pub fn solve_expansion_terms(b: &CylinderBenchmark, up_to: u32) -> Result<Vec<ModalSolution>> {
    if up_to > 2 {
        return Err(Error::UnsupportedOrder(up_to));
    }
    let mut terms: Vec<ModalSolution> = Vec::with_capacity(up_to as usize + 1);
    for j in 0..=up_to {
        let flux = expansion_flux(b, j, &terms)?;
        let source = if j == 0 { b.source_amplitude } else { ZERO };
        terms.push(solve_shell(
            b,
            ModalKind::ExpansionTerm(j),
            InnerCondition::Neumann { flux },
            source,
        )?);
    }
    Ok(terms)
}

pub fn solve_expansion_term(b: &CylinderBenchmark, j: u32) -> Result<ModalSolution> {
    let mut terms = solve_expansion_terms(b, j)?;
    Ok(terms.pop().expect("at least one term"))
}

/// `sum_{j <= m} eps^j u_j`.
pub fn truncated_expansion(b: &CylinderBenchmark, m: u32) -> Result<ModalSolution> {
    let terms = solve_expansion_terms(b, m)?;
    let eps = b.eps();
    let mut shell = [[ZERO; 2]; 2];
    let mut flux = ZERO;
    let mut weight = 1.0;
    for t in &terms {
        for (acc, c) in shell.iter_mut().flatten().zip(t.shell.iter().flatten()) {
            *acc += weight * c;
        }
        if let Some(InnerCondition::Neumann { flux: g }) = t.inner {
            flux += weight * g;
        }
        weight *= eps;
    }
    let sol = ModalSolution {
        kind: ModalKind::TruncatedExpansion(m),
        benchmark: *b,
        conductor: None,
        shell,
        source: b.source_amplitude,
        inner: Some(InnerCondition::Neumann { flux }),
        condition: 0.0,
        basis: terms[0].basis,
    };
    sol.check()?;
    Ok(sol)
}

/// Skin depth of the exact conductor field: first depth below `r_in` where
/// `|u|` falls to `e^{-1}` of its surface value. The scan uses `ell phi` as
/// scale and stops short of the axis.
pub fn exact_skin_depth(sol: &ModalSolution) -> Result<f64> {
    let b = &sol.benchmark;
    let scale = b.derived()?.ell_phi();
    let sampler = |h: f64| sol.conductor_modulus(h).unwrap_or(f64::NAN);
    let trace = DecayTrace::new(sampler, scale)?;
    let cap = 0.999 * b.r_in;
    let trace = if trace.max_depth > cap {
        trace.with_max_depth(cap)?
    } else {
        trace
    };
    skin_depth_numeric(&trace)
}
