use std::collections::BTreeMap;

use ontodem_ontology::{ObservationSchema, PropertyId};

/// Scalar summary of a schema used to measure state change.
pub trait Valuation {
    fn value(&self, schema: &ObservationSchema) -> f64;
}

impl<F: Fn(&ObservationSchema) -> f64> Valuation for F {
    fn value(&self, schema: &ObservationSchema) -> f64 {
        self(schema)
    }
}

/// Sum of numeric readings, each min-max normalized by its property's
/// declared range and clamped to [0, 1]. Properties without a range are
/// ignored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MinMaxValuation {
    ranges: BTreeMap<PropertyId, (f64, f64)>,
}

impl MinMaxValuation {
    pub fn new() -> Self {
        Self::default()
    }

    /// # Panics
    ///
    /// Panics unless `low < high`.
    pub fn with_range(mut self, property: impl Into<PropertyId>, low: f64, high: f64) -> Self {
        assert!(low < high, "empty range [{low}, {high}]");
        self.ranges.insert(property.into(), (low, high));
        self
    }
}

impl Valuation for MinMaxValuation {
    fn value(&self, schema: &ObservationSchema) -> f64 {
        schema
            .entries()
            .iter()
            .filter_map(|((_, p), r)| {
                let (lo, hi) = self.ranges.get(p)?;
                let v = r.value.as_ref()?.as_f64()?;
                Some(((v - lo) / (hi - lo)).clamp(0.0, 1.0))
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ontodem_ontology::{Reading, Value};

    #[test]
    fn normalizes_and_clamps() {
        let mut s = ObservationSchema::new(0);
        s.add_instance("a", "A");
        s.add_instance("b", "A");
        s.put("a", "hasT", Reading::clean(Value::Num(15.0)));
        s.put("b", "hasT", Reading::clean(Value::Num(40.0)));
        s.put("a", "hasU", Reading::clean(Value::Num(3.0)));
        let v = MinMaxValuation::new().with_range("hasT", 10.0, 20.0);
        assert_eq!(v.value(&s), 1.5);
    }
}
