use ontodem_ontology::{schema_distance, ObservationSchema, Quality};

use crate::history::ObservationHistory;

/// Observation quality figures the recommender and the pipeline act on.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PipelineMetrics {
    /// Fraction of entries flagged Noisy.
    pub noise: f64,
    /// Fraction of entries flagged Missing.
    pub missing: f64,
    /// Number of entries.
    pub dimensionality: usize,
    /// Jaccard distance to the most recent history record, 0 without history.
    pub distance: f64,
}

pub fn pipeline_metrics(schema: &ObservationSchema, history: &ObservationHistory) -> PipelineMetrics {
    let n = schema.entries().len();
    let count = |q: Quality| schema.entries().values().filter(|r| r.quality == q).count();
    let frac = |k: usize| if n == 0 { 0.0 } else { k as f64 / n as f64 };
    PipelineMetrics {
        noise: frac(count(Quality::Noisy)),
        missing: frac(count(Quality::Missing)),
        dimensionality: n,
        distance: history.last().map_or(0.0, |prev| schema_distance(schema, prev)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ontodem_ontology::{Reading, Value};

    #[test]
    fn fractions_and_distance() {
        let mut s = ObservationSchema::new(0);
        s.add_instance("a", "A");
        s.put("a", "p", Reading::noisy(Value::Num(1.0)));
        s.put("a", "q", Reading::missing());
        s.put("a", "r", Reading::clean(Value::Num(1.0)));
        s.put("a", "t", Reading::clean(Value::Num(1.0)));
        let mut h = ObservationHistory::new(2);
        let m = pipeline_metrics(&s, &h);
        assert_eq!((m.noise, m.missing, m.dimensionality, m.distance), (0.25, 0.25, 4, 0.0));
        h.push(s.clone(), "k");
        assert_eq!(pipeline_metrics(&s, &h).distance, 0.0);
    }
}
