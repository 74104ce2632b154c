use std::path::Path;

use serde::Deserialize;

use crate::error::HscError;
use crate::metrics::Interval;
use crate::temporal::Classification;
use crate::thermal::ThermalModel;

/// How a configured noise value is read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseScale {
    /// 0.05 means 5% of readings.
    #[default]
    Fraction,
    /// 0.05 means 0.05% of readings.
    Percent,
}

/// Mean and spread of the expected energy price per kWh by part of day.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PriceModel {
    /// Morning, afternoon, evening, night.
    pub means: [f64; 4],
    pub sd: f64,
    pub floor: f64,
}

impl Default for PriceModel {
    fn default() -> Self {
        PriceModel { means: [0.30, 0.25, 0.35, 0.15], sd: 0.03, floor: 0.01 }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HscScenario {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub noise_fraction: f64,
    #[serde(default)]
    pub noise_scale: NoiseScale,
    #[serde(default)]
    pub classification: Classification,
    #[serde(default = "default_interval")]
    pub interval: [f64; 2],
    #[serde(default)]
    pub thermal: ThermalModel,
    #[serde(default)]
    pub price: PriceModel,
    /// Inside temperature at the start of each episode.
    #[serde(default = "default_initial")]
    pub initial_inside: f64,
    /// Clean readings the outlier detector keeps; 0 disables it.
    #[serde(default = "default_window")]
    pub detector_window: usize,
    pub seed: u64,
    pub episodes: usize,
    pub steps: usize,
}

fn default_interval() -> [f64; 2] {
    [20.0, 24.0]
}

fn default_initial() -> f64 {
    18.0
}

fn default_window() -> usize {
    24
}

impl HscScenario {
    pub fn parse(text: &str) -> Result<Self, HscError> {
        let s: HscScenario = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, HscError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<(), HscError> {
        let bad = |m: String| Err(HscError::InvalidScenario(m));
        if !(0.0..=1.0).contains(&self.noise_fraction) {
            return bad(format!("noise fraction {}", self.noise_fraction));
        }
        if self.interval.iter().any(|x| x.is_nan()) || self.interval[0] >= self.interval[1] {
            return bad(format!("interval {:?}", self.interval));
        }
        if self.steps == 0 {
            return bad("steps must be positive".into());
        }
        if self.price.sd < 0.0 || self.price.floor < 0.0 {
            return bad("price spread and floor must be non-negative".into());
        }
        self.thermal.validate()
    }

    /// Probability that an outside reading is corrupted.
    pub fn noise_probability(&self) -> f64 {
        match self.noise_scale {
            NoiseScale::Fraction => self.noise_fraction,
            NoiseScale::Percent => self.noise_fraction / 100.0,
        }
    }

    pub fn comfort(&self) -> Interval {
        Interval { lower: self.interval[0], upper: self.interval[1] }
    }
}
