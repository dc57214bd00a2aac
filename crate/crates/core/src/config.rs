//! Run configuration: every tunable of the pipeline in one serializable
//! record, stored as JSON.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::binarize::{SauvolaConfig, ThresholdMode};
use crate::edge::EdgeConfig;
use crate::error::{Error, Result};
use crate::evolution::PdeParams;
use crate::preprocess::{AttenuationConfig, ContrastConfig};

/// Missing sections and fields take their defaults; unknown fields are
/// rejected.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub pde: PdeParams,
    pub attenuation: AttenuationConfig,
    pub contrast: ContrastConfig,
    pub edge: EdgeConfig,
    pub sauvola: SauvolaConfig,
    pub threshold: ThresholdMode,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Pretty-printed JSON with a trailing newline. Parsing this output and
    /// serializing again reproduces it byte for byte.
    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config is always serializable");
        s.push('\n');
        s
    }

    pub fn validate(&self) -> Result<()> {
        self.pde.validate()?;
        let a = &self.attenuation;
        for (name, v) in [("gain", a.gain), ("bias", a.bias), ("slope", a.slope)] {
            if !v.is_finite() {
                return Err(Error::Parameter(format!("attenuation {name} must be finite, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.edge.mix) {
            return Err(Error::Parameter(format!(
                "edge mix must lie in [0, 1], got {}",
                self.edge.mix
            )));
        }
        if !(self.contrast.epsilon > 0.0) {
            return Err(Error::Parameter(format!(
                "contrast epsilon must be positive, got {}",
                self.contrast.epsilon
            )));
        }
        if !(self.sauvola.range > 0.0) || !self.sauvola.k.is_finite() {
            return Err(Error::Parameter("sauvola range must be positive and k finite".into()));
        }
        Ok(())
    }
}
