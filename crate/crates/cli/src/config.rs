//! Run configuration: an optional JSON file overlaid by command-line flags.

use std::path::PathBuf;

use pbwsplit::field::PrimeField;
use pbwsplit::multiindex::MonomialOrder;
use pbwsplit::rootsys::Weight;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

/// Settings shared by all commands. Every field is optional in the file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// series label such as `"G2"`
    #[serde(default, rename = "type", skip_serializing_if = "Option::is_none")]
    pub type_label: Option<String>,
    /// path to a JSON Cartan matrix
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cartan: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weights: Vec<Weight>,
    /// second tensor factor for `filtration`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor: Option<Weight>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub primes: Vec<u64>,
    /// dimension cap for modules and tensor products
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<MonomialOrder>,
    #[serde(default)]
    pub verbosity: u8,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.cap == Some(0) {
            return Err(CliError::Usage("cap must be at least 1".into()));
        }
        if self.type_label.is_some() && self.cartan.is_some() {
            return Err(CliError::Usage(
                "give either a type label or a Cartan matrix, not both".into(),
            ));
        }
        for &p in &self.primes {
            PrimeField::new(p).map_err(|e| CliError::Usage(e.to_string()))?;
        }
        Ok(())
    }

    /// Fields set in `over` replace those in `self`; list fields are replaced
    /// when nonempty.
    pub fn overlay(mut self, over: RunConfig) -> Self {
        if over.type_label.is_some() || over.cartan.is_some() {
            self.type_label = over.type_label;
            self.cartan = over.cartan;
        }
        if !over.weights.is_empty() {
            self.weights = over.weights;
        }
        if over.tensor.is_some() {
            self.tensor = over.tensor;
        }
        if !over.primes.is_empty() {
            self.primes = over.primes;
        }
        self.cap = over.cap.or(self.cap);
        self.cache_dir = over.cache_dir.or(self.cache_dir);
        self.format = over.format.or(self.format);
        self.order = over.order.or(self.order);
        self.verbosity = self.verbosity.max(over.verbosity);
        self
    }
}
