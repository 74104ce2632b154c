use serde::Deserialize;

use crate::error::ObservationError;

/// Which entries observation augmentation may fill.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AugmentMode {
    /// Only entries flagged Missing.
    #[default]
    MissingOnly,
    /// Missing entries, plus Noisy entries of properties some rule can
    /// derive: those readings are treated as unknown and re-derived.
    MissingAndNoisy,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    pub noise_threshold: f64,
    pub similarity_threshold: f64,
    pub ontology_distance_threshold: f64,
    pub missing_data_threshold: f64,
    pub sample_size: usize,
    pub history_capacity: usize,
    pub augment_mode: AugmentMode,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            noise_threshold: 0.01,
            similarity_threshold: 0.3,
            ontology_distance_threshold: 0.5,
            missing_data_threshold: 0.2,
            sample_size: 32,
            history_capacity: 8,
            augment_mode: AugmentMode::MissingOnly,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), ObservationError> {
        let bad = |name: &str, v: f64| Err(ObservationError::InvalidConfig(format!("{name} = {v}")));
        if self.noise_threshold.is_nan() || self.noise_threshold < 0.0 {
            return bad("noise_threshold", self.noise_threshold);
        }
        if !(self.similarity_threshold > 0.0 && self.similarity_threshold < 1.0) {
            return bad("similarity_threshold", self.similarity_threshold);
        }
        if !(self.ontology_distance_threshold > 0.0 && self.ontology_distance_threshold <= 1.0) {
            return bad("ontology_distance_threshold", self.ontology_distance_threshold);
        }
        if !(0.0..=1.0).contains(&self.missing_data_threshold) {
            return bad("missing_data_threshold", self.missing_data_threshold);
        }
        if self.sample_size == 0 {
            return bad("sample_size", 0.0);
        }
        if self.history_capacity == 0 {
            return bad("history_capacity", 0.0);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        PipelineConfig::default().validate().unwrap();
    }

    #[test]
    fn out_of_range_thresholds_rejected() {
        let d = PipelineConfig::default;
        assert!(PipelineConfig { similarity_threshold: 1.0, ..d() }.validate().is_err());
        assert!(PipelineConfig { ontology_distance_threshold: 0.0, ..d() }.validate().is_err());
        assert!(PipelineConfig { sample_size: 0, ..d() }.validate().is_err());
    }
}
