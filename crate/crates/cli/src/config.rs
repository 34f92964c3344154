//! Scenario configuration (JSON).
//!
//! ```json
//! {
//!   "system": {
//!     "energies": [0.0, 1.0],
//!     "pointer_values": [0.0, 1.0],
//!     "rho0": [[{"re": 0.5, "im": 0.0}, {"re": 0.5, "im": 0.0}],
//!              [{"re": 0.5, "im": 0.0}, {"re": 0.5, "im": 0.0}]]
//!   },
//!   "bath": { "discrete": { "modes": [{"omega": 1.0, "g": {"re": 0.4, "im": 0.0}}] } },
//!   "temperature": { "beta": 2.0 },
//!   "time": { "start": 0.0, "stop": 5.0, "count": 8, "spacing": "linear" },
//!   "flags": { "renormalize": false, "tolerance": 1e-6, "budget": 4096 },
//!   "output": { "path": "out.csv", "format": "csv" }
//! }
//! ```
//!
//! The bath block holds exactly one of `discrete` or
//! `spectral: {amplitude, exponent, cutoff, discretization?: {modes, omega_max}}`.
//! `beta` is a positive number or the string `"inf"`.

use std::fmt;
use std::path::Path;

use dephase::continuum::{linear_grid, log_grid};
use dephase::{Complex64, DiscreteBath, SpectralFunction, SystemSpec, Temperature};
use nalgebra::DMatrix;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemBlock>,
    pub bath: BathBlock,
    pub temperature: TemperatureBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<TimeGrid>,
    #[serde(default)]
    pub flags: Flags,
    #[serde(default)]
    pub output: OutputBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regimes: Option<RegimesBlock>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexValue {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<ComplexValue> for Complex64 {
    fn from(c: ComplexValue) -> Self {
        Complex64::new(c.re, c.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemBlock {
    pub energies: Vec<f64>,
    pub pointer_values: Vec<f64>,
    pub rho0: Vec<Vec<ComplexValue>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrete: Option<DiscreteBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectral: Option<SpectralBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscreteBlock {
    pub modes: Vec<ModeBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeBlock {
    pub omega: f64,
    pub g: ComplexValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralBlock {
    pub amplitude: f64,
    pub exponent: f64,
    pub cutoff: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discretization: Option<DiscretizationBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscretizationBlock {
    pub modes: usize,
    pub omega_max: f64,
}

/// Inverse temperature; `"inf"` for zero temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Beta {
    Finite(f64),
    Infinite,
}

impl Serialize for Beta {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            Beta::Finite(b) => s.serialize_f64(b),
            Beta::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Beta {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct BetaVisitor;
        impl Visitor<'_> for BetaVisitor {
            type Value = Beta;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a positive number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Beta, E> {
                Ok(Beta::Finite(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Beta, E> {
                Ok(Beta::Finite(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Beta, E> {
                Ok(Beta::Finite(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Beta, E> {
                match v {
                    "inf" => Ok(Beta::Infinite),
                    other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
                }
            }
        }
        d.deserialize_any(BetaVisitor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemperatureBlock {
    pub beta: Beta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    #[serde(default)]
    pub renormalize: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Tsv,
}

impl Format {
    pub fn delimiter(self) -> u8 {
        match self {
            Format::Csv => b',',
            Format::Tsv => b'\t',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default)]
    pub format: Format,
}

fn default_samples() -> usize {
    16
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegimesBlock {
    #[serde(default = "default_samples")]
    pub samples_per_window: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quiet: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantum: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thermal: Option<[f64; 2]>,
}

/// The bath after validation.
pub enum Bath {
    Discrete(DiscreteBath),
    Spectral {
        spec: SpectralFunction,
        discretized: Option<DiscreteBath>,
    },
}

impl ScenarioConfig {
    /// Parses JSON text; errors name the offending field path and line.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            CliError::validation(format!(
                "config error at line {}, column {}, field `{}`: {}",
                inner.line(),
                inner.column(),
                path,
                inner
            ))
        })?;
        config.check_shape()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::validation(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    fn check_shape(&self) -> Result<(), CliError> {
        match (&self.bath.discrete, &self.bath.spectral) {
            (Some(_), Some(_)) => {
                return Err(CliError::validation(
                    "field `bath`: exactly one of `discrete` or `spectral` must be present, found both",
                ))
            }
            (None, None) => {
                return Err(CliError::validation(
                    "field `bath`: exactly one of `discrete` or `spectral` must be present, found neither",
                ))
            }
            _ => {}
        }
        if let Some(grid) = &self.time {
            grid.check()?;
        }
        if let Some(tol) = self.flags.tolerance {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(CliError::validation(format!(
                    "field `flags.tolerance`: must be positive, got {tol}"
                )));
            }
        }
        Ok(())
    }

    /// Canonical single-line JSON, sufficient to reproduce the run.
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn system(&self) -> Result<SystemSpec, CliError> {
        let block = self
            .system
            .as_ref()
            .ok_or_else(|| CliError::validation("field `system`: required by this command"))?;
        let d = block.rho0.len();
        if let Some((i, row)) = block.rho0.iter().enumerate().find(|(_, r)| r.len() != d) {
            return Err(CliError::validation(format!(
                "field `system.rho0[{i}]`: expected {d} entries, found {}",
                row.len()
            )));
        }
        let rho0 = DMatrix::from_fn(d, d, |i, j| Complex64::from(block.rho0[i][j]));
        dephase::validate_system(block.energies.clone(), block.pointer_values.clone(), rho0)
            .map_err(|e| CliError::from(e).context("field `system`"))
    }

    pub fn temperature(&self) -> Result<Temperature, CliError> {
        match self.temperature.beta {
            Beta::Infinite => Ok(Temperature::zero_temperature()),
            Beta::Finite(b) => Temperature::new(b)
                .map_err(|e| CliError::from(e).context("field `temperature.beta`")),
        }
    }

    pub fn bath(&self) -> Result<Bath, CliError> {
        if let Some(block) = &self.bath.discrete {
            let bath = DiscreteBath::from_pairs(
                block.modes.iter().map(|m| (m.omega, Complex64::from(m.g))),
            )
            .map_err(|e| CliError::from(e).context("field `bath.discrete.modes`"))?;
            return Ok(Bath::Discrete(bath));
        }
        let block = self.bath.spectral.as_ref().expect("shape checked at load");
        let spec = SpectralFunction::new(block.amplitude, block.exponent, block.cutoff)
            .map_err(|e| CliError::from(e).context("field `bath.spectral`"))?;
        let discretized = match &block.discretization {
            Some(d) => Some(
                dephase::discretize_spectral(&spec, d.modes, d.omega_max).map_err(|e| {
                    CliError::from(e).context("field `bath.spectral.discretization`")
                })?,
            ),
            None => None,
        };
        Ok(Bath::Spectral { spec, discretized })
    }

    /// A discrete bath, discretizing a spectral one if parameters are given.
    pub fn discrete_bath(&self) -> Result<DiscreteBath, CliError> {
        match self.bath()? {
            Bath::Discrete(b) => Ok(b),
            Bath::Spectral {
                discretized: Some(b),
                ..
            } => Ok(b),
            Bath::Spectral {
                discretized: None, ..
            } => Err(CliError::validation(
                "field `bath`: this command needs a discrete bath or `spectral.discretization`",
            )),
        }
    }

    pub fn times(&self) -> Result<Vec<f64>, CliError> {
        let grid = self
            .time
            .as_ref()
            .ok_or_else(|| CliError::validation("field `time`: required by this command"))?;
        Ok(grid.points())
    }
}

impl TimeGrid {
    fn check(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::validation(format!("field `time`: {msg}")));
        if self.count == 0 {
            return bad("count must be at least 1".into());
        }
        if !(self.start >= 0.0 && self.start.is_finite() && self.stop.is_finite()) {
            return bad(format!(
                "start must be nonnegative and finite, got {}",
                self.start
            ));
        }
        if self.count > 1 && self.stop <= self.start {
            return bad(format!(
                "grid must be strictly increasing (start {}, stop {})",
                self.start, self.stop
            ));
        }
        if self.spacing == Spacing::Log && self.start <= 0.0 {
            return bad("log spacing needs start > 0".into());
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Linear => linear_grid(self.start, self.stop, self.count),
            Spacing::Log => log_grid(self.start, self.stop, self.count),
        }
    }
}
