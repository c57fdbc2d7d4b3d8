//! Run configuration: a TOML file with every field optional, overridden by
//! command-line flags, then materialized so outputs record what actually ran.

use std::path::Path;

use serde::{Deserialize, Serialize};
use twoquanta::{GridSpec, Interval, QuadratureConfig, Statistics, TransitionSpec};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransitionConfig {
    pub statistics: Statistics,
    /// Empty means the reference geometry for `statistics`.
    pub sources: Vec<f64>,
    pub detectors: Vec<f64>,
    pub t_i: f64,
    pub t_f: f64,
    pub width: f64,
}

impl Default for TransitionConfig {
    fn default() -> Self {
        Self {
            statistics: Statistics::Boson,
            sources: Vec::new(),
            detectors: Vec::new(),
            t_i: 0.0,
            t_f: 60.0,
            width: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub xc_range: [f64; 2],
    pub xd_range: [f64; 2],
    pub nx: usize,
    pub ny: usize,
    pub normalize: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            xc_range: [-20.0, 20.0],
            xd_range: [-20.0, 20.0],
            nx: 81,
            ny: 81,
            normalize: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FieldConfig {
    pub n_space: usize,
    pub n_time: usize,
    pub normalize: bool,
    /// Spatial extent shared by every axis; omitted means a lattice centred
    /// on the rotation centre that covers all events.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_range: Option<[f64; 2]>,
}

impl Default for FieldConfig {
    fn default() -> Self {
        Self {
            n_space: 61,
            n_time: 61,
            normalize: true,
            x_range: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AuditConfig {
    pub tolerance: f64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self { tolerance: 1e-10 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Evaluation time of the time-symmetric amplitude; defaults to `t_i`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
    pub transition: TransitionConfig,
    pub quadrature: QuadratureConfig,
    pub scan: ScanConfig,
    pub field: FieldConfig,
    pub audit: AuditConfig,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Parse { message, .. } => CliError::Parse {
                origin: path.display().to_string(),
                message,
            },
            other => other,
        })
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse {
            origin: "config".into(),
            message: e.message().to_string(),
        })
    }

    /// Fills in geometry and evaluation time, then checks every invariant,
    /// reporting all violations at once.
    pub fn materialize(mut self) -> Result<Self, CliError> {
        let t = &mut self.transition;
        let two = t.statistics.quanta() == 2;
        if t.sources.is_empty() {
            t.sources = if two { vec![10.0, -10.0] } else { vec![10.0] };
        }
        if t.detectors.is_empty() {
            t.detectors = if two { vec![7.0, -7.0] } else { vec![7.0] };
        }
        if self.time.is_none() {
            self.time = Some(t.t_i);
        }
        let problems = self.violations();
        if problems.is_empty() {
            Ok(self)
        } else {
            Err(CliError::Invalid(problems))
        }
    }

    fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let spec = self.spec();
        if let Err(twoquanta::TransitionError::InvalidSpec(list)) = spec.validate() {
            v.extend(list.iter().map(|e| format!("transition: {e}")));
        }
        if let Err(list) = self.quadrature.validate() {
            v.extend(list.iter().map(|e| format!("quadrature: {e}")));
        }
        if let Some(time) = self.time {
            let (t_i, t_f) = (self.transition.t_i, self.transition.t_f);
            if !(time >= t_i && time <= t_f) {
                v.push(format!("time: {time} is outside [{t_i}, {t_f}]"));
            }
        }
        for (name, r) in [
            ("scan.xc_range", self.scan.xc_range),
            ("scan.xd_range", self.scan.xd_range),
        ] {
            if Interval::new(r[0], r[1]).is_err() {
                v.push(format!(
                    "{name}: [{}, {}] is not a finite increasing interval",
                    r[0], r[1]
                ));
            }
        }
        if self.scan.nx < 2 || self.scan.ny < 2 {
            v.push(format!(
                "scan: needs at least 2 points per axis, got {}×{}",
                self.scan.nx, self.scan.ny
            ));
        }
        if self.field.n_space < 1 || self.field.n_time < 1 {
            v.push("field: n_space and n_time must be at least 1".into());
        }
        if let Some(r) = self.field.x_range {
            if Interval::new(r[0], r[1]).is_err() {
                v.push(format!(
                    "field.x_range: [{}, {}] is not a finite increasing interval",
                    r[0], r[1]
                ));
            }
        }
        if !(self.audit.tolerance >= 0.0 && self.audit.tolerance.is_finite()) {
            v.push(format!(
                "audit.tolerance: must be finite and non-negative, got {}",
                self.audit.tolerance
            ));
        }
        v
    }

    pub fn spec(&self) -> TransitionSpec {
        let t = &self.transition;
        TransitionSpec {
            sources: t
                .sources
                .iter()
                .map(|&x| twoquanta::SpacetimeEvent::new(x, t.t_i))
                .collect(),
            detectors: t
                .detectors
                .iter()
                .map(|&x| twoquanta::SpacetimeEvent::new(x, t.t_f))
                .collect(),
            statistics: t.statistics,
            width: t.width,
        }
    }

    pub fn time(&self) -> f64 {
        self.time.unwrap_or(self.transition.t_i)
    }

    /// Only valid after [`RunConfig::materialize`].
    pub fn grid(&self) -> GridSpec {
        let s = &self.scan;
        GridSpec {
            xc_range: Interval::new(s.xc_range[0], s.xc_range[1]).expect("validated"),
            xd_range: Interval::new(s.xd_range[0], s.xd_range[1]).expect("validated"),
            nx: s.nx,
            ny: s.ny,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }
}
