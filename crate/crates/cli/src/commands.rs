//! One function per subcommand; each returns its artifact without doing any
//! I/O.

use magskin_core::ibc::{impedance_operator, leontovich_gap};
use magskin_core::params::derive_params;
use magskin_core::profiles::{full_modulus_sqr, ProfileTerm};
use magskin_core::reference::{assemble_study, log_grid, study_point, Approximation, CylinderBenchmark, StudyRow};
use magskin_core::skin_depth::{comparison_report, reference_trace};
use magskin_core::{DerivedParams, PhysicalConfig};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{check_values, ProfileGrid, RunConfig, Sweep, SweepVariable};
use crate::output::{Cell, Format, Table};
use crate::UsageError;

/// Default `eps` grid of the convergence commands.
pub const DEFAULT_EPS: (f64, f64, usize) = (1e-3, 1e-1, 5);

pub const PARAMS_HEADER: &[&str] = &[
    "mu_r",
    "eps_small",
    "delta_plus",
    "delta_minus",
    "kappa_plus",
    "theta",
    "lambda_re",
    "lambda_im",
    "alpha_plus_re",
    "alpha_plus_im",
    "alpha_minus_re",
    "alpha_minus_im",
    "ell",
    "phi_value",
    "ell_phi",
];

pub const SKIN_DEPTH_HEADER: &[&str] = &[
    "mu_r",
    "eps",
    "ell",
    "phi",
    "H",
    "L_numeric",
    "L_asymptotic",
    "L_classical",
    "L_eddy2d",
    "L_highcond",
    "residual",
];

pub const PROFILE_HEADER: &[&str] = &[
    "y3", "Y3", "t1_re", "t1_im", "t2_re", "t2_im", "n_re", "n_im", "modulus",
];

pub const IBC_FACTORS_HEADER: &[&str] = &[
    "k",
    "scalar_part_re",
    "scalar_part_im",
    "curvature_coeff_re",
    "curvature_coeff_im",
    "leontovich_gap",
];

pub const STUDY_HEADER: &[&str] = &["mode", "eps", "mu_r", "error_E", "error_H", "local_slope"];

pub const CONVERGENCE_HEADER: &[&str] = &[
    "approximation",
    "order",
    "mode",
    "expected_order",
    "slope",
    "intercept",
    "r_squared",
    "conclusive",
];

/// Result of a command: a table plus, where the JSON form is not simply the
/// table's rows, a dedicated JSON document.
pub struct Artifact {
    pub table: Table,
    pub json: Option<Value>,
    pub default_format: Format,
}

impl Artifact {
    pub fn json(&self) -> Value {
        self.json.clone().unwrap_or_else(|| self.table.to_json())
    }
}

/// Command-line options shared by the subcommands.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub k: Option<u32>,
    pub modes: Option<Vec<i32>>,
    pub eps: Option<Vec<f64>>,
}

pub struct Context {
    pub cfg: RunConfig,
    pub opts: Options,
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

impl Context {
    /// `--eps` is shorthand for an `eps` sweep; it may not be combined with a
    /// sweep from the config file.
    fn sweep(&self) -> anyhow::Result<Option<Sweep>> {
        match (&self.opts.eps, &self.cfg.sweep) {
            (Some(_), Some(_)) => Err(usage("--eps conflicts with the `sweep` block of the config")),
            (Some(values), None) => {
                check_values(values).map_err(|e| usage(format!("--eps: {e}")))?;
                Ok(Some(Sweep {
                    variable: SweepVariable::Eps,
                    values: values.clone(),
                }))
            }
            (None, s) => Ok(s.clone()),
        }
    }

    fn no_sweep(&self, command: &str) -> anyhow::Result<()> {
        if self.sweep()?.is_some() {
            return Err(usage(format!("{command} does not take a sweep")));
        }
        Ok(())
    }

    fn physical_points(&self) -> anyhow::Result<Vec<PhysicalConfig>> {
        let base = self.cfg.physical();
        match self.sweep()? {
            None => Ok(vec![base]),
            Some(s) => Ok(s
                .values
                .iter()
                .map(|&v| s.variable.apply(&base, v))
                .collect::<magskin_core::Result<_>>()?),
        }
    }

    /// `eps` values of the convergence commands, largest first.
    fn eps_list(&self) -> anyhow::Result<Vec<f64>> {
        let mut values = match self.sweep()? {
            None => log_grid(DEFAULT_EPS.0, DEFAULT_EPS.1, DEFAULT_EPS.2),
            Some(Sweep {
                variable: SweepVariable::Eps,
                values,
            }) => values,
            Some(s) => {
                return Err(usage(format!(
                    "convergence commands sweep eps only, not {:?}",
                    s.variable
                )))
            }
        };
        values.reverse();
        Ok(values)
    }

    fn modes(&self) -> Vec<i32> {
        self.opts
            .modes
            .clone()
            .unwrap_or_else(|| magskin_core::reference::DEFAULT_MODES.to_vec())
    }

    /// The benchmark with the run's physical inputs.
    fn template(&self) -> anyhow::Result<CylinderBenchmark> {
        let b = CylinderBenchmark {
            physical: self.cfg.physical(),
            ..self.cfg.benchmark()
        };
        b.validate()?;
        Ok(b)
    }
}

fn c(z: magskin_core::Complex64) -> [Cell; 2] {
    [z.re.into(), z.im.into()]
}

fn params_row(dp: &DerivedParams) -> Vec<Cell> {
    let mut row: Vec<Cell> = vec![
        dp.mu_r.into(),
        dp.eps_small.into(),
        dp.delta_plus.into(),
        dp.delta_minus.into(),
        dp.kappa_plus.into(),
        dp.theta.into(),
    ];
    for z in [dp.lambda, dp.alpha_plus, dp.alpha_minus] {
        row.extend(c(z));
    }
    row.extend([dp.ell.into(), dp.phi_value.into(), dp.ell_phi().into()]);
    row
}

pub fn params(ctx: &Context) -> anyhow::Result<Artifact> {
    let points = ctx.physical_points()?;
    let mut table = Table::new(PARAMS_HEADER);
    for cfg in &points {
        table.push(params_row(&derive_params(cfg)?));
    }
    let json = if ctx.sweep()?.is_none() {
        Some(table.row_object(&table.rows[0]))
    } else {
        None
    };
    Ok(Artifact {
        table,
        json,
        default_format: Format::Json,
    })
}

pub fn skin_depth(ctx: &Context) -> anyhow::Result<Artifact> {
    let s = ctx.cfg.surface()?;
    let h = s.mean_curvature();
    let rows = ctx
        .physical_points()?
        .par_iter()
        .map(|cfg| {
            let dp = derive_params(cfg)?;
            let r = comparison_report(&dp, &s)?;
            Ok(vec![
                dp.mu_r.into(),
                dp.eps_small.into(),
                dp.ell.into(),
                dp.phi_value.into(),
                h.into(),
                r.numeric.into(),
                r.asymptotic.into(),
                r.classical.into(),
                r.eddy2d.into(),
                r.high_conductivity.into(),
                (r.numeric - r.asymptotic).abs().into(),
            ])
        })
        .collect::<magskin_core::Result<Vec<_>>>()?;
    Ok(Artifact {
        table: Table {
            header: SKIN_DEPTH_HEADER,
            rows,
        },
        json: None,
        default_format: Format::Csv,
    })
}

/// Two-term profile `W0 + eps W1` along the normal through the origin of
/// the principal frame.
pub fn profile_table(ctx: &Context) -> anyhow::Result<Artifact> {
    ctx.no_sweep("profile-table")?;
    let s = ctx.cfg.surface()?;
    let dp = derive_params(&ctx.cfg.physical())?;
    let tr = ctx.cfg.trace.unwrap_or_else(|| reference_trace(&s));
    let grid = ctx.cfg.profile.unwrap_or_default();
    let collar = 0.999 * s.tubular_limit();
    let max_depth = grid.max_depth_m.unwrap_or_else(|| (5.0 * dp.ell_phi()).min(collar));
    if max_depth >= s.tubular_limit() {
        return Err(usage(format!(
            "profile.max_depth_m = {max_depth} leaves the tubular neighbourhood of depth {}",
            s.tubular_limit()
        )));
    }
    let ProfileGrid { points, .. } = grid;
    let eps = dp.eps_small;
    let w0 = ProfileTerm::leading(&tr, dp.lambda);
    let w1 = ProfileTerm::first(&s, &tr, dp.lambda);
    let origin = [0.0, 0.0];
    let mut table = Table::new(PROFILE_HEADER);
    for i in 0..points {
        let y3 = max_depth * i as f64 / (points - 1) as f64;
        let big_y = y3 / eps;
        let t = w0.tangential_at(origin, big_y)? + w1.tangential_at(origin, big_y)? * eps;
        let n = w1.normal_at(origin, big_y)? * eps;
        let modulus = full_modulus_sqr(&s, &tr, dp.lambda, origin, y3, eps)?.sqrt();
        let mut row: Vec<Cell> = vec![y3.into(), big_y.into()];
        row.extend(c(t.c[0]));
        row.extend(c(t.c[1]));
        row.extend(c(n));
        row.push(modulus.into());
        table.push(row);
    }
    Ok(Artifact {
        table,
        json: None,
        default_format: Format::Csv,
    })
}

pub fn ibc_factors(ctx: &Context) -> anyhow::Result<Artifact> {
    ctx.no_sweep("ibc-factors")?;
    let cfg = ctx.cfg.physical();
    let orders: Vec<u32> = match ctx.opts.k {
        Some(k) => vec![k],
        None => vec![0, 1, 2],
    };
    let mut table = Table::new(IBC_FACTORS_HEADER);
    for &k in &orders {
        let op = impedance_operator(k, &cfg)?;
        let curvature = op.curvature_part.unwrap_or_default();
        let gap = if k == 0 { None } else { Some(leontovich_gap(&cfg)?) };
        let mut row: Vec<Cell> = vec![k.into()];
        row.extend(c(op.scalar_part));
        row.extend(c(curvature));
        row.push(gap.into());
        table.push(row);
    }
    let json = ctx.opts.k.map(|_| table.row_object(&table.rows[0]));
    Ok(Artifact {
        table,
        json,
        default_format: Format::Json,
    })
}

/// Errors of `approx` for every `(mode, eps)` pair, grouped by mode with
/// `eps` decreasing.
fn study_rows(ctx: &Context, approx: Approximation) -> anyhow::Result<Vec<Vec<StudyRow>>> {
    let template = ctx.template()?;
    let eps = ctx.eps_list()?;
    let modes = ctx.modes();
    let jobs: Vec<(i32, f64)> = modes.iter().flat_map(|&m| eps.iter().map(move |&e| (m, e))).collect();
    let rows = jobs
        .par_iter()
        .map(|&(m, e)| study_point(&template.for_mode(m), approx, e))
        .collect::<magskin_core::Result<Vec<_>>>()?;
    Ok(rows.chunks(eps.len()).map(<[StudyRow]>::to_vec).collect())
}

/// Slope of the total error against the previous row.
fn with_local_slopes(mut rows: Vec<StudyRow>) -> Vec<StudyRow> {
    for i in 1..rows.len() {
        let (a, b) = (rows[i - 1], rows[i]);
        let slope = (b.total() / a.total()).ln() / (b.eps / a.eps).ln();
        rows[i].local_slope = slope.is_finite().then_some(slope);
    }
    rows
}

fn study_table(ctx: &Context, approx: Approximation) -> anyhow::Result<Artifact> {
    let mut table = Table::new(STUDY_HEADER);
    for group in study_rows(ctx, approx)? {
        for r in with_local_slopes(group) {
            table.push(vec![
                r.mode.into(),
                r.eps.into(),
                r.mu_r.into(),
                r.error_e.into(),
                r.error_h.into(),
                r.local_slope.into(),
            ]);
        }
    }
    Ok(Artifact {
        table,
        json: None,
        default_format: Format::Csv,
    })
}

pub fn ibc_sweep(ctx: &Context) -> anyhow::Result<Artifact> {
    study_table(ctx, Approximation::Ibc(ctx.opts.k.unwrap_or(1)))
}

pub fn expansion_error(ctx: &Context) -> anyhow::Result<Artifact> {
    study_table(ctx, Approximation::Truncated(ctx.opts.k.unwrap_or(0)))
}

fn approximation_name(a: Approximation) -> (&'static str, u32) {
    match a {
        Approximation::Ibc(k) => ("ibc", k),
        Approximation::Truncated(m) => ("truncated", m),
    }
}

/// Fits of every approximation and mode. A rejected fit is reported, not
/// fatal; solver failures are.
pub fn convergence(ctx: &Context) -> anyhow::Result<Artifact> {
    let orders: Vec<u32> = match ctx.opts.k {
        Some(k) => vec![k],
        None => vec![0, 1, 2],
    };
    let approxes: Vec<Approximation> = orders
        .iter()
        .map(|&k| Approximation::Ibc(k))
        .chain(orders.iter().map(|&m| Approximation::Truncated(m)))
        .collect();
    let mut table = Table::new(CONVERGENCE_HEADER);
    let mut fits = Vec::new();
    for approx in approxes {
        let (name, order) = approximation_name(approx);
        for group in study_rows(ctx, approx)? {
            let mode = group[0].mode;
            let mut entry = json!({
                "approximation": name,
                "order": order,
                "mode": mode,
                "expected_order": approx.expected_order(),
            });
            let obj = entry.as_object_mut().expect("object literal");
            let mut row: Vec<Cell> = vec![
                Cell::Text(name),
                order.into(),
                mode.into(),
                approx.expected_order().into(),
            ];
            match assemble_study(approx, group) {
                Ok(study) => {
                    let f = &study.fit;
                    obj.insert("slope".into(), json!(f.slope));
                    obj.insert("intercept".into(), json!(f.intercept));
                    obj.insert("r_squared".into(), json!(f.r_squared));
                    obj.insert("conclusive".into(), json!(f.is_conclusive()));
                    obj.insert("local_slopes".into(), json!(f.local_slopes));
                    obj.insert("points".into(), json!(f.points));
                    obj.insert("rejected".into(), Value::Null);
                    row.extend([
                        f.slope.into(),
                        f.intercept.into(),
                        f.r_squared.into(),
                        Cell::Int(f.is_conclusive().into()),
                    ]);
                }
                Err(e) => {
                    log::warn!("{name} order {order}, mode {mode}: {e}");
                    for key in ["slope", "intercept", "r_squared", "local_slopes", "points"] {
                        obj.insert(key.into(), Value::Null);
                    }
                    obj.insert("conclusive".into(), json!(false));
                    obj.insert("rejected".into(), json!(e.to_string()));
                    row.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Int(0)]);
                }
            }
            fits.push(entry);
            table.push(row);
        }
    }
    Ok(Artifact {
        table,
        json: Some(json!({ "fits": fits })),
        default_format: Format::Json,
    })
}
