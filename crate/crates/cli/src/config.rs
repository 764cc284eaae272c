//! Run configuration read from JSON, with every quantity in SI units.

use std::path::Path;

use magskin_core::profiles::TraceData;
use magskin_core::reference::CylinderBenchmark;
use magskin_core::{PhysicalConfig, Surface};
use serde::Deserialize;

use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    MuR,
    Eps,
    SigmaMinus,
    Omega,
}

impl SweepVariable {
    pub fn apply(self, cfg: &PhysicalConfig, value: f64) -> magskin_core::Result<PhysicalConfig> {
        let out = match self {
            SweepVariable::MuR => cfg.with_mu_r(value)?,
            SweepVariable::Eps => cfg.with_eps(value)?,
            SweepVariable::SigmaMinus => PhysicalConfig {
                sigma_minus: value,
                ..*cfg
            },
            SweepVariable::Omega => PhysicalConfig { omega: value, ..*cfg },
        };
        out.validate()?;
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
}

/// Depth grid of `profile-table`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileGrid {
    #[serde(default = "default_points")]
    pub points: usize,
    /// Defaults to five `ell * phi`, kept inside the tubular neighbourhood.
    #[serde(default)]
    pub max_depth_m: Option<f64>,
}

fn default_points() -> usize {
    101
}

impl Default for ProfileGrid {
    fn default() -> Self {
        Self {
            points: default_points(),
            max_depth_m: None,
        }
    }
}

/// Contents of `--config`. Every block is optional: the benchmark falls back
/// to [`CylinderBenchmark::default`], the physical inputs to the
/// benchmark's, and the surface to the benchmark's inner cylinder.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub physical: Option<PhysicalConfig>,
    #[serde(default)]
    pub surface: Option<Surface>,
    #[serde(default)]
    pub benchmark: Option<CylinderBenchmark>,
    #[serde(default)]
    pub sweep: Option<Sweep>,
    #[serde(default)]
    pub trace: Option<TraceData>,
    #[serde(default)]
    pub profile: Option<ProfileGrid>,
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())).into())
    }

    /// Parse errors name the offending field path. A file holding a bare
    /// benchmark (recognised by `r_in_m`) is read as `{"benchmark": ...}`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut value: serde_json::Value = serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
        if value.get("r_in_m").is_some() {
            value = serde_json::json!({ "benchmark": value });
        }
        let cfg: RunConfig = serde_path_to_error::deserialize(value).map_err(|e| {
            let path = e.path().to_string();
            format!("invalid config at `{path}`: {}", e.into_inner())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), String> {
        if let Some(p) = &self.physical {
            p.validate().map_err(|e| format!("invalid config at `physical`: {e}"))?;
        }
        if let Some(s) = &self.surface {
            s.validate().map_err(|e| format!("invalid config at `surface`: {e}"))?;
        }
        if let Some(b) = &self.benchmark {
            b.validate()
                .map_err(|e| format!("invalid config at `benchmark`: {e}"))?;
        }
        if let Some(s) = &self.sweep {
            check_values(&s.values).map_err(|e| format!("invalid config at `sweep.values`: {e}"))?;
        }
        if let Some(g) = &self.profile {
            if g.points < 2 {
                return Err("invalid config at `profile.points`: need at least 2 points".into());
            }
            if let Some(d) = g.max_depth_m {
                if !(d.is_finite() && d > 0.0) {
                    return Err(format!("invalid config at `profile.max_depth_m`: {d} is not positive"));
                }
            }
        }
        Ok(())
    }

    pub fn benchmark(&self) -> CylinderBenchmark {
        self.benchmark.unwrap_or_default()
    }

    pub fn physical(&self) -> PhysicalConfig {
        self.physical.unwrap_or(self.benchmark().physical)
    }

    pub fn surface(&self) -> anyhow::Result<Surface> {
        match self.surface {
            Some(s) => Ok(s),
            None => Ok(self.benchmark().surface()?),
        }
    }
}

/// Sweep values must be non-empty, finite, positive and strictly increasing.
pub fn check_values(values: &[f64]) -> Result<(), String> {
    if values.is_empty() {
        return Err("empty sweep".into());
    }
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(format!("value {v} is not strictly positive"));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err("values must be sorted in strictly increasing order".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_uses_defaults() {
        let cfg = RunConfig::parse("{}").unwrap();
        assert_eq!(cfg.benchmark(), CylinderBenchmark::default());
        assert_eq!(cfg.surface().unwrap(), Surface::Cylinder { radius: 1.0 });
    }

    #[test]
    fn errors_name_the_field() {
        let e = RunConfig::parse(r#"{"physical": {"omega_rad_per_s": "fast"}}"#).unwrap_err();
        assert!(e.contains("`physical.omega_rad_per_s`"), "{e}");
        let e = RunConfig::parse(r#"{"sweep": {"variable": "mu_r", "values": []}}"#).unwrap_err();
        assert!(e.contains("`sweep.values`") && e.contains("empty"), "{e}");
        let e = RunConfig::parse(r#"{"surface": {"kind": "cylinder", "radius": -1}}"#).unwrap_err();
        assert!(e.contains("`surface`"), "{e}");
        assert!(RunConfig::parse(r#"{"colour": 1}"#).is_err());
        assert!(RunConfig::parse("{").unwrap_err().contains("invalid JSON"));
    }

    #[test]
    fn bare_benchmark_is_accepted() {
        let text = serde_json::to_string(&CylinderBenchmark::default().for_mode(3)).unwrap();
        let cfg = RunConfig::parse(&text).unwrap();
        assert_eq!(cfg.benchmark().mode, 3);
        let e = RunConfig::parse(&text.replace("\"mode\":3", "\"mode\":\"x\"")).unwrap_err();
        assert!(e.contains("`benchmark.mode`"), "{e}");
    }

    #[test]
    fn sweep_values_checked() {
        assert!(check_values(&[1.0, 2.0]).is_ok());
        assert!(check_values(&[2.0, 1.0]).is_err());
        assert!(check_values(&[0.0, 1.0]).is_err());
        assert!(check_values(&[1.0, 1.0]).is_err());
    }

    #[test]
    fn sweep_variables_rebuild_config() {
        let base = CylinderBenchmark::default().physical;
        assert_eq!(SweepVariable::MuR.apply(&base, 1e4).unwrap().mu_r(), 1e4);
        assert_eq!(SweepVariable::Omega.apply(&base, 3.0).unwrap().omega, 3.0);
        assert!(SweepVariable::SigmaMinus.apply(&base, -1.0).is_err());
    }
}
