//! JSON scenario input and plan output.
//!
//! Input: `{"services": [{"mu": 0, "n_rb": 5}, ...], "target_db": 25}` with
//! optional `"convention"` (`bidirectional` | `lower-victim`) and `"scaling"`
//! (`normalized` | `direct`). Output mirrors the computed plan with every
//! bandwidth in kHz rounded to 3 decimals.

use std::path::Path;

use ini_core::scenario::Boundary;
use ini_core::{FrequencyOffset, GuardConvention, GuardScaling, PlanOptions, ScenarioPlan, ServiceSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ServiceEntry {
    pub mu: u32,
    pub n_rb: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub services: Vec<ServiceEntry>,
    pub target_db: f64,
    #[serde(default)]
    pub convention: Option<String>,
    #[serde(default)]
    pub scaling: Option<String>,
}

impl ScenarioFile {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn services(&self) -> Result<Vec<ServiceSpec>, CliError> {
        Ok(self
            .services
            .iter()
            .map(|s| ServiceSpec::new(s.mu, s.n_rb))
            .collect::<ini_core::Result<_>>()?)
    }

    /// File settings take precedence over `defaults`.
    pub fn options(&self, defaults: PlanOptions) -> Result<PlanOptions, CliError> {
        let mut opts = defaults;
        if let Some(c) = &self.convention {
            opts.convention = c.parse::<GuardConvention>().map_err(|e| CliError::Usage(e.into()))?;
        }
        if let Some(s) = &self.scaling {
            opts.scaling = s.parse::<GuardScaling>().map_err(|e| CliError::Usage(e.into()))?;
        }
        Ok(opts)
    }
}

pub fn khz3(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}

fn opt_khz(o: Option<FrequencyOffset>) -> Option<f64> {
    o.map(|f| khz3(f.khz()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryOut {
    pub lower: usize,
    pub lower_on_upper_khz: Option<f64>,
    pub upper_on_lower_khz: Option<f64>,
    pub guard_khz: f64,
}

impl From<&Boundary> for BoundaryOut {
    fn from(b: &Boundary) -> Self {
        Self {
            lower: b.lower,
            lower_on_upper_khz: opt_khz(b.lower_on_upper),
            upper_on_lower_khz: opt_khz(b.upper_on_lower),
            guard_khz: khz3(b.guard.khz()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanOut {
    pub services: Vec<ServiceEntry>,
    pub target_rejection_db: f64,
    pub convention: &'static str,
    pub scaling: &'static str,
    pub boundaries: Vec<BoundaryOut>,
    pub guard_bands_khz: Vec<f64>,
    pub service_bandwidth_khz: f64,
    pub total_bandwidth_khz: f64,
    pub efficiency: f64,
}

impl From<&ScenarioPlan> for PlanOut {
    fn from(p: &ScenarioPlan) -> Self {
        Self {
            services: p
                .services
                .iter()
                .map(|s| ServiceEntry { mu: s.mu, n_rb: s.n_rb })
                .collect(),
            target_rejection_db: p.target_rejection_db,
            convention: p.convention.as_str(),
            scaling: p.scaling.as_str(),
            boundaries: p.boundaries.iter().map(BoundaryOut::from).collect(),
            guard_bands_khz: p.guard_bands_khz.iter().map(|&g| khz3(g)).collect(),
            service_bandwidth_khz: khz3(p.service_bandwidth_khz),
            total_bandwidth_khz: khz3(p.total_bandwidth_khz),
            efficiency: p.efficiency,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_and_full_files() {
        let f: ScenarioFile =
            serde_json::from_str(r#"{"services":[{"mu":0,"n_rb":5},{"mu":1,"n_rb":5}],"target_db":25}"#).unwrap();
        assert_eq!(f.services().unwrap().len(), 2);
        assert_eq!(f.options(PlanOptions::default()).unwrap(), PlanOptions::default());
        let f: ScenarioFile = serde_json::from_str(
            r#"{"services":[{"mu":2,"n_rb":1}],"target_db":30,"convention":"lower-victim","scaling":"direct"}"#,
        )
        .unwrap();
        let o = f.options(PlanOptions::default()).unwrap();
        assert_eq!(
            (o.convention, o.scaling),
            (GuardConvention::LowerVictim, GuardScaling::Direct)
        );
    }

    #[test]
    fn rejects_bad_files() {
        assert!(serde_json::from_str::<ScenarioFile>(r#"{"services":[],"target":25}"#).is_err());
        let f: ScenarioFile = serde_json::from_str(r#"{"services":[{"mu":9,"n_rb":5}],"target_db":25}"#).unwrap();
        assert!(f.services().is_err());
        let f: ScenarioFile = serde_json::from_str(r#"{"services":[],"target_db":25,"scaling":"huge"}"#).unwrap();
        assert!(f.options(PlanOptions::default()).is_err());
    }

    #[test]
    fn rounds_khz_to_three_decimals() {
        assert_eq!(khz3(1234.56789), 1234.568);
        assert_eq!(khz3(7560.0), 7560.0);
    }
}
