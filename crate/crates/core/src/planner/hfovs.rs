use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// How exploration and judgment scores combine into the field-of-view score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HfovsMode {
    /// `exp(tau_es * es + tau_js * js)`; never below 1 for scores in [0, 1].
    PaperExp,
    /// Logistic of the temperature-weighted deviations from 0.5.
    #[default]
    Centered,
}

impl HfovsMode {
    pub fn name(self) -> &'static str {
        match self {
            HfovsMode::PaperExp => "paper_exp",
            HfovsMode::Centered => "centered",
        }
    }
}

impl fmt::Display for HfovsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown HFOVS mode `{0}` (expected paper_exp or centered)")]
pub struct UnknownHfovsMode(pub String);

impl FromStr for HfovsMode {
    type Err = UnknownHfovsMode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper_exp" => Ok(HfovsMode::PaperExp),
            "centered" => Ok(HfovsMode::Centered),
            other => Err(UnknownHfovsMode(other.to_string())),
        }
    }
}

/// Temperature weights applied to the two scores.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Temperatures {
    pub es: f64,
    pub js: f64,
}

impl Default for Temperatures {
    fn default() -> Self {
        Self { es: 2.0, js: 1.0 }
    }
}

/// Field-of-view score from an exploration score and a judgment score.
///
/// Both modes are strictly increasing in each argument for positive
/// temperatures.
pub fn hfovs(es: f64, js: f64, temps: Temperatures, mode: HfovsMode) -> f64 {
    match mode {
        HfovsMode::PaperExp => (temps.es * es + temps.js * js).exp(),
        HfovsMode::Centered => {
            let z = temps.es * (es - 0.5) + temps.js * (js - 0.5);
            1.0 / (1.0 + (-z).exp())
        }
    }
}
