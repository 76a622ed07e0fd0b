//! Experiment configuration, read from JSON.
//!
//! ```json
//! {"geometry": "interferometer", "T": [0.7], "model": "averages", "I_Z": 0.3}
//! ```
//!
//! | field        | type            | notes                                                     |
//! |--------------|-----------------|-----------------------------------------------------------|
//! | `geometry`   | string          | `beamsplitter`, `cascade`, `interferometer`, `entangled-pair` |
//! | `model`      | string          | `simple`, `improved`, `oracle`, `averages`                |
//! | `T`          | array of number | one per splitter; one for `beamsplitter`/`interferometer` |
//! | `a`, `b`     | number          | analyser angles (radians), `entangled-pair` only          |
//! | `I_Z`        | number          | background for `averages`; defaults to each outcome's floor |
//! | `outcome`    | `"A"` or `"B"`  | restricts `averages` to one detected outcome             |
//! | `samples`    | integer         | switches `improved` on a single splitter to Monte Carlo   |
//! | `seed`       | integer         | Monte Carlo seed (default 0)                              |
//! | `regression` | bool            | allows the known-failing `simple` + `cascade` combination |

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Geometry {
    Beamsplitter,
    Cascade,
    Interferometer,
    EntangledPair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Simple,
    Improved,
    Oracle,
    Averages,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Simple => "simple",
            Model::Improved => "improved",
            Model::Oracle => "oracle",
            Model::Averages => "averages",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Detected {
    A,
    B,
}

impl From<Detected> for cpa_core::Outcome {
    fn from(d: Detected) -> Self {
        match d {
            Detected::A => cpa_core::Outcome::A,
            Detected::B => cpa_core::Outcome::B,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub geometry: Geometry,
    pub model: Model,
    #[serde(rename = "T", default, skip_serializing_if = "Vec::is_empty")]
    pub transmissions: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(rename = "I_Z", default, skip_serializing_if = "Option::is_none")]
    pub background: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Detected>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub regression: bool,
}

/// Parses and validates a UTF-8 JSON document.
pub fn parse_config(bytes: &[u8]) -> CliResult<ExperimentConfig> {
    let config = read_config(bytes)?;
    config.validate()?;
    Ok(config)
}

/// Parses without the cross-field checks, for sweep templates whose `T` is filled in later.
pub fn read_config(bytes: &[u8]) -> CliResult<ExperimentConfig> {
    let text = std::str::from_utf8(bytes).map_err(|e| CliError::validation("$", format!("not UTF-8: {e}")))?;
    let de = &mut serde_json::Deserializer::from_str(text);
    let config: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::validation(
            if path == "." { "$".to_owned() } else { path },
            e.into_inner().to_string(),
        )
    })?;
    Ok(config)
}

impl ExperimentConfig {
    pub fn validate(&self) -> CliResult<()> {
        use Geometry::*;
        use Model::*;

        let splitters = match self.geometry {
            Beamsplitter | Interferometer => Some(1..=1),
            Cascade => Some(1..=usize::MAX),
            EntangledPair => None,
        };
        match splitters {
            Some(range) if !range.contains(&self.transmissions.len()) => {
                let want = if *range.end() == 1 {
                    "exactly one value"
                } else {
                    "at least one value"
                };
                return Err(CliError::validation("T", format!("{want} required for this geometry")));
            }
            None if !self.transmissions.is_empty() => {
                return Err(CliError::validation("T", "not used by entangled-pair"));
            }
            _ => {}
        }
        // averages needs both outputs lit; everything else accepts the endpoints
        let open = self.model == Averages;
        for (i, &t) in self.transmissions.iter().enumerate() {
            let ok = if open {
                t > 0.0 && t < 1.0
            } else {
                (0.0..=1.0).contains(&t)
            };
            if !ok {
                let range = if open { "(0, 1)" } else { "[0, 1]" };
                return Err(CliError::validation(
                    format!("T[{i}]"),
                    format!("{t} is outside {range}"),
                ));
            }
        }

        match (self.geometry, self.model) {
            (Cascade, Simple) if !self.regression => {
                return Err(CliError::validation(
                    "model",
                    "simple is wrong for cascades; set \"regression\": true to run it anyway",
                ))
            }
            (Cascade | EntangledPair, Averages) => {
                return Err(CliError::validation(
                    "model",
                    "averages requires beamsplitter or interferometer",
                ))
            }
            (Interferometer, Simple) => {
                return Err(CliError::validation("model", "simple has no interferometer solution"))
            }
            (EntangledPair, Improved) => {
                return Err(CliError::validation("model", "improved has no entangled-pair solution"))
            }
            _ => {}
        }

        if self.geometry == EntangledPair {
            for (name, v) in [("a", self.a), ("b", self.b)] {
                match v {
                    Some(x) if x.is_finite() => {}
                    Some(x) => return Err(CliError::validation(name, format!("{x} is not finite"))),
                    None => return Err(CliError::validation(name, "required for entangled-pair")),
                }
            }
        } else if self.a.is_some() || self.b.is_some() {
            let name = if self.a.is_some() { "a" } else { "b" };
            return Err(CliError::validation(name, "only used by entangled-pair"));
        }

        if let Some(iz) = self.background {
            if !(iz >= 0.0 && iz.is_finite()) {
                return Err(CliError::validation("I_Z", format!("{iz} must be finite and >= 0")));
            }
        }
        if let Some(n) = self.samples {
            if n <= 0 {
                return Err(CliError::validation("samples", format!("{n} must be positive")));
            }
        }
        Ok(())
    }

    /// Monte Carlo runs only for `improved` on a single splitter with a sample count.
    pub fn monte_carlo(&self) -> Option<usize> {
        match (self.geometry, self.model, self.samples) {
            (Geometry::Beamsplitter, Model::Improved, Some(n)) => Some(n as usize),
            _ => None,
        }
    }
}
