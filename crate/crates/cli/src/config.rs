use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tdfpp::analysis::{MixingConfig, OracleConfig, ShapeConfig, SpeedConfig, VerifyConfig};
use tdfpp::{EnvironmentSpec, StartTimeMode, TravelModel, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Speed,
    Shape,
    Verify,
    Mixing,
    OracleCheck,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Experiment::Speed => "speed",
            Experiment::Shape => "shape",
            Experiment::Verify => "verify",
            Experiment::Mixing => "mixing",
            Experiment::OracleCheck => "oracle-check",
        })
    }
}

/// One experiment, as read from `--config`. Fields that do not apply to the
/// chosen experiment are ignored; missing required ones are an error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub environment: EnvironmentSpec,
    /// Required except for `mixing`; `oracle-check` runs both models if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<TravelModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vertex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_grid: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_list: Option<Vec<f64>>,
    /// Start-time modes for `shape`; both by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<Vec<StartTimeMode>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lags: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replicates: Option<usize>,
    /// Instances for `verify` (default 10000) and `oracle-check` (default 500).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Defaults to the environment seed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub envelope_constant: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

pub const DEFAULT_VERIFY_SAMPLES: usize = 10_000;
pub const DEFAULT_ORACLE_SAMPLES: usize = 500;

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    #[cfg(test)]
    pub fn emit(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn base_seed(&self) -> u64 {
        self.base_seed.unwrap_or(self.environment.seed)
    }

    fn need<T: Clone>(&self, value: &Option<T>, key: &str) -> Result<T, String> {
        value
            .clone()
            .ok_or_else(|| format!("{} config needs \"{key}\"", self.experiment))
    }

    pub fn speed(&self) -> Result<SpeedConfig, String> {
        Ok(SpeedConfig {
            environment: self.environment,
            model: self.need(&self.model, "model")?,
            direction: self.need(&self.direction, "direction")?,
            n_grid: self.need(&self.n_grid, "n_grid")?,
            replicates: self.need(&self.replicates, "replicates")?,
            base_seed: self.base_seed(),
            envelope_constant: self.envelope_constant,
        })
    }

    pub fn shape(&self) -> Result<ShapeConfig, String> {
        Ok(ShapeConfig {
            environment: self.environment,
            model: self.need(&self.model, "model")?,
            t_list: self.need(&self.t_list, "t_list")?,
            replicates: self.need(&self.replicates, "replicates")?,
            base_seed: self.base_seed(),
            modes: self
                .modes
                .clone()
                .unwrap_or_else(|| vec![StartTimeMode::FixedZero, StartTimeMode::Diagonal]),
        })
    }

    pub fn verify(&self) -> Result<VerifyConfig, String> {
        Ok(VerifyConfig::new(
            self.environment,
            self.need(&self.model, "model")?,
            self.samples.unwrap_or(DEFAULT_VERIFY_SAMPLES),
            self.base_seed(),
        ))
    }

    pub fn mixing(&self) -> Result<MixingConfig, String> {
        Ok(MixingConfig {
            environment: self.environment,
            lags: self.need(&self.lags, "lags")?,
            replicates: self.need(&self.replicates, "replicates")?,
            base_seed: self.base_seed(),
        })
    }

    pub fn oracle(&self) -> Vec<OracleConfig> {
        let models = match self.model {
            Some(m) => vec![m],
            None => vec![TravelModel::Integral, TravelModel::Departure],
        };
        let n = self.samples.unwrap_or(DEFAULT_ORACLE_SAMPLES);
        models
            .into_iter()
            .map(|m| OracleConfig::new(self.environment, m, n, self.base_seed()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPEED: &str = r#"{
        "experiment": "speed",
        "environment": {"kind": "block", "d": 2, "L": 2.0, "C": 1.0, "field": {"dist": "uniform"}, "seed": 7},
        "model": "integral",
        "direction": [1, 0],
        "n_grid": [4, 8],
        "replicates": 10
    }"#;

    #[test]
    fn round_trip() {
        let cfg = RunConfig::parse(SPEED).unwrap();
        assert_eq!(RunConfig::parse(&cfg.emit()).unwrap(), cfg);
        let mut full = cfg.clone();
        full.t_list = Some(vec![1.5, 3.0]);
        full.modes = Some(vec![StartTimeMode::Diagonal]);
        full.lags = Some(vec![0.0, 0.25]);
        full.samples = Some(3);
        full.base_seed = Some(u64::MAX);
        full.envelope_constant = Some(0.5);
        full.out = Some(PathBuf::from("x/y"));
        full.workers = Some(2);
        assert_eq!(RunConfig::parse(&full.emit()).unwrap(), full);
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = SPEED.replace("\"replicates\"", "\"replicate\"");
        assert!(RunConfig::parse(&bad)
            .unwrap_err()
            .contains("unknown field"));
        let bad = SPEED.replace("\"seed\": 7", "\"seed\": 7, \"extra\": 1");
        assert!(RunConfig::parse(&bad).is_err());
    }

    #[test]
    fn base_seed_falls_back_to_environment() {
        let cfg = RunConfig::parse(SPEED).unwrap();
        assert_eq!(cfg.base_seed(), 7);
        assert_eq!(cfg.speed().unwrap().base_seed, 7);
        assert!(cfg.shape().unwrap_err().contains("t_list"));
    }
}
