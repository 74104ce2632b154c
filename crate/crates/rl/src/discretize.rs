use ontodem_ontology::{InstanceId, ObservationSchema, PropertyId, Value};
use serde::Deserialize;

use crate::qtable::{KeyPart, StateKey};

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FeatureKind {
    /// Increasing bucket edges; `n` edges give `n - 1` buckets.
    Numeric { edges: Vec<f64> },
    /// Symbols pass through; `default` stands in for a missing reading.
    Symbolic { default: String },
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct Feature {
    pub instance: InstanceId,
    pub property: PropertyId,
    #[serde(flatten)]
    pub kind: FeatureKind,
}

impl Feature {
    pub fn numeric(instance: &str, property: &str, edges: Vec<f64>) -> Self {
        assert!(edges.len() >= 2, "need at least two edges");
        assert!(edges.windows(2).all(|w| w[0] < w[1]), "edges must increase");
        Feature { instance: instance.into(), property: property.into(), kind: FeatureKind::Numeric { edges } }
    }

    pub fn symbolic(instance: &str, property: &str, default: &str) -> Self {
        Feature {
            instance: instance.into(),
            property: property.into(),
            kind: FeatureKind::Symbolic { default: default.to_owned() },
        }
    }
}

/// Ordered features that make up a state key.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
pub struct StateDescriptor {
    pub features: Vec<Feature>,
}

impl StateDescriptor {
    pub fn new(features: Vec<Feature>) -> Self {
        StateDescriptor { features }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Discretized {
    pub key: StateKey,
    /// Numeric readings that fell outside the edges and were clamped.
    pub clamped: usize,
}

/// Bucket of `v` over half-open intervals `(e[k], e[k+1]]`: a value on an
/// edge joins the lower bucket. Out-of-range values are clamped; the flag
/// reports whether that happened.
pub fn bucket(edges: &[f64], v: f64) -> (usize, bool) {
    let last = edges.len().saturating_sub(2);
    if v <= edges[0] {
        return (0, v < edges[0]);
    }
    let below = edges.partition_point(|&e| e < v);
    if below > last + 1 {
        return (last, true);
    }
    (below - 1, false)
}

/// Maps `schema` onto the descriptor's features.
pub fn discretize_state(schema: &ObservationSchema, descriptor: &StateDescriptor) -> Discretized {
    let mut clamped = 0;
    let key = descriptor
        .features
        .iter()
        .map(|f| {
            let value = schema.get(&f.instance, &f.property).and_then(|r| r.value.as_ref());
            match &f.kind {
                FeatureKind::Numeric { edges } => match value.and_then(Value::as_f64) {
                    Some(v) if v.is_finite() => {
                        let (b, out) = bucket(edges, v);
                        clamped += usize::from(out);
                        KeyPart::Bucket(b)
                    }
                    _ => KeyPart::Absent,
                },
                FeatureKind::Symbolic { default } => match value {
                    Some(Value::Sym(s)) => KeyPart::Sym(s.clone()),
                    Some(Value::Num(n)) => KeyPart::Sym(n.to_string()),
                    None => KeyPart::Sym(default.clone()),
                },
            }
        })
        .collect();
    Discretized { key, clamped }
}
