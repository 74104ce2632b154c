use std::collections::VecDeque;

use ontodem_ontology::ObservationSchema;

/// Bounded, chronological record of past observations with their class keys.
#[derive(Clone, Debug)]
pub struct ObservationHistory {
    capacity: usize,
    records: VecDeque<(ObservationSchema, String)>,
}

impl ObservationHistory {
    /// # Panics
    ///
    /// Panics if `capacity` is zero.
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "history capacity must be positive");
        ObservationHistory { capacity, records: VecDeque::with_capacity(capacity) }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Appends a record, evicting the oldest when full.
    pub fn push(&mut self, schema: ObservationSchema, class_key: impl Into<String>) {
        if self.records.len() == self.capacity {
            self.records.pop_front();
        }
        self.records.push_back((schema, class_key.into()));
    }

    pub fn last(&self) -> Option<&ObservationSchema> {
        self.records.back().map(|(s, _)| s)
    }

    /// Records oldest first.
    pub fn iter(&self) -> impl Iterator<Item = (&ObservationSchema, &str)> {
        self.records.iter().map(|(s, k)| (s, k.as_str()))
    }

    pub fn clear(&mut self) {
        self.records.clear();
    }
}
