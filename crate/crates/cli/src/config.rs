//! Run configuration: parseable from a JSON file and from flags, with flags
//! overriding file values; the effective config is echoed into every output
//! artifact for reproducibility.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use tfweyl_core::weights::{Weight, WeightKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Identities,
    Diagnose,
    Operator,
    Weights,
    Demo,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub l: f64,
    pub stride: usize,
    pub weight: Weight,
    pub lambda_list: Vec<f64>,
    pub mu_max: f64,
    pub mu_step: f64,
    pub out: PathBuf,
    pub seed: u64,
    pub case: Option<String>,
}

impl RunConfig {
    pub fn defaults(command: Command) -> Self {
        RunConfig {
            command,
            n: 128,
            l: 12.0,
            stride: 4,
            weight: Weight::log1p(),
            lambda_list: vec![0.5, 1.0, 2.0, 4.0],
            mu_max: 16.0,
            mu_step: 0.5,
            out: PathBuf::from("out"),
            seed: 0,
            case: None,
        }
    }

    pub fn mu_grid(&self) -> Vec<f64> {
        let steps = (self.mu_max / self.mu_step).round() as usize;
        (0..=steps).map(|i| i as f64 * self.mu_step).collect()
    }

    pub fn validate(&self) -> Result<(), String> {
        if !self.n.is_power_of_two() || self.n < 8 {
            return Err(format!("n must be a power of two ≥ 8, got {}", self.n));
        }
        if !(self.l > 0.0) {
            return Err(format!("l must be positive, got {}", self.l));
        }
        if self.stride == 0 || !self.n.is_multiple_of(self.stride) {
            return Err(format!("stride must divide n, got {}", self.stride));
        }
        if self.lambda_list.is_empty()
            || self.lambda_list.windows(2).any(|p| p[1] <= p[0])
            || self.lambda_list[0] <= 0.0
        {
            return Err("lambda list must be positive and increasing".into());
        }
        if !(self.mu_step > 0.0) || self.mu_max < self.mu_step {
            return Err("mu grid must contain at least one positive step".into());
        }
        validate_weight(&self.weight)?;
        Ok(())
    }
}

/// Partial configuration as read from `--config <json>`; every field is
/// optional and overridden by explicit flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<usize>,
    pub l: Option<f64>,
    pub stride: Option<usize>,
    pub weight: Option<WeightSpec>,
    pub lambda: Option<Vec<f64>>,
    pub mu_max: Option<f64>,
    pub mu_step: Option<f64>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub case: Option<String>,
}

/// Weight as written in JSON configs: `{"kind": "log1p"|"power"|"logpower",
/// "a": <real>, "c": <real>}`.
#[derive(Debug, Clone, Copy, Deserialize)]
pub struct WeightSpec {
    pub kind: WeightKind,
    #[serde(default = "one")]
    pub a: f64,
    #[serde(default = "one")]
    pub c: f64,
}

fn one() -> f64 {
    1.0
}

impl WeightSpec {
    pub fn build(&self) -> Result<Weight, String> {
        let base = match self.kind {
            WeightKind::Log1p => Weight::log1p(),
            WeightKind::Power => Weight::power(self.a).map_err(|e| e.to_string())?,
            WeightKind::LogPower => Weight::logpower(self.a).map_err(|e| e.to_string())?,
        };
        base.scaled(self.c).map_err(|e| e.to_string())
    }
}

fn validate_weight(w: &Weight) -> Result<(), String> {
    let spec = WeightSpec { kind: w.kind, a: w.a, c: w.c };
    spec.build().map(|_| ())
}

pub fn parse_lambda_list(raw: &str) -> Result<Vec<f64>, String> {
    raw.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| e.to_string()))
        .collect()
}
