use ontodem_ontology::{ObservationSchema, Quality};

use crate::history::ObservationHistory;

/// Replaces each Noisy numeric reading with the mean of Clean readings of
/// the same property, on instances of the same concept, recorded under the
/// same class key. Readings without such history become Unrepaired.
pub fn abstract_observation(
    schema: &ObservationSchema,
    class_key: &str,
    history: &ObservationHistory,
) -> ObservationSchema {
    let mut out = schema.clone();
    let noisy: Vec<_> =
        schema.entries().iter().filter(|(_, r)| r.quality == Quality::Noisy).map(|(k, _)| k.clone()).collect();
    for (instance, property) in noisy {
        let concept = schema.concept_of(&instance);
        let mut sum = 0.0;
        let mut n = 0usize;
        for (past, key) in history.iter() {
            if key != class_key {
                continue;
            }
            for ((i, p), r) in past.entries() {
                if p != &property || r.quality != Quality::Clean || past.concept_of(i) != concept {
                    continue;
                }
                if let Some(v) = r.value.as_ref().and_then(|v| v.as_f64()) {
                    sum += v;
                    n += 1;
                }
            }
        }
        let reading = out.get_mut(&instance, &property).expect("key taken from schema");
        if n > 0 {
            reading.value = Some(ontodem_ontology::Value::Num(sum / n as f64));
            reading.quality = Quality::CleanImputed;
        } else {
            reading.quality = Quality::Unrepaired;
        }
    }
    out
}
