use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use ontodem_rules::{Atom, Term};
use serde::{Deserialize, Serialize};

use crate::error::OntologyError;
use crate::ids::{ConceptId, InstanceId, PropertyId};

/// Observed property value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Num(f64),
    Sym(String),
}

impl Value {
    pub fn sym(s: impl Into<String>) -> Self {
        Value::Sym(s.into())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Num(v) => Some(*v),
            Value::Sym(_) => None,
        }
    }

    pub fn as_sym(&self) -> Option<&str> {
        match self {
            Value::Sym(s) => Some(s),
            Value::Num(_) => None,
        }
    }

    pub fn to_term(&self) -> Term {
        match self {
            Value::Num(v) => Term::num(*v),
            Value::Sym(s) => Term::sym(s.clone()),
        }
    }

    /// Converts a ground term back into a value; variables yield `None`.
    pub fn from_term(t: &Term) -> Option<Value> {
        match t {
            Term::Num(n) => Some(Value::Num(n.get())),
            Term::Sym(s) => Some(Value::Sym(s.clone())),
            Term::Var(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(v) => write!(f, "{v}"),
            Value::Sym(s) => f.write_str(s),
        }
    }
}

/// Reliability flag attached to every observed entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Quality {
    Clean,
    Noisy,
    Missing,
    /// Noisy value replaced by a class mean from history.
    CleanImputed,
    /// Missing value filled by inference.
    CleanInferred,
    /// Noisy value that could not be repaired.
    Unrepaired,
}

impl Quality {
    pub fn is_noisy(self) -> bool {
        matches!(self, Quality::Noisy | Quality::Unrepaired)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reading {
    pub value: Option<Value>,
    pub quality: Quality,
}

impl Reading {
    pub fn clean(value: Value) -> Self {
        Reading { value: Some(value), quality: Quality::Clean }
    }

    pub fn noisy(value: Value) -> Self {
        Reading { value: Some(value), quality: Quality::Noisy }
    }

    pub fn missing() -> Self {
        Reading { value: None, quality: Quality::Missing }
    }
}

pub type EntryKey = (InstanceId, PropertyId);

/// Time-stamped view of observed instances, property readings and n-ary
/// relation tuples.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ObservationSchema {
    pub timestamp: u64,
    instances: BTreeMap<InstanceId, ConceptId>,
    entries: BTreeMap<EntryKey, Reading>,
    relations: BTreeSet<Atom>,
}

impl ObservationSchema {
    pub fn new(timestamp: u64) -> Self {
        ObservationSchema { timestamp, ..Default::default() }
    }

    pub fn add_instance(&mut self, instance: impl Into<InstanceId>, concept: impl Into<ConceptId>) {
        self.instances.insert(instance.into(), concept.into());
    }

    /// Records a reading. The instance must already be observed.
    pub fn set(
        &mut self,
        instance: impl Into<InstanceId>,
        property: impl Into<PropertyId>,
        reading: Reading,
    ) -> Result<(), OntologyError> {
        let instance = instance.into();
        if !self.instances.contains_key(&instance) {
            return Err(OntologyError::UnknownInstance(instance));
        }
        self.entries.insert((instance, property.into()), reading);
        Ok(())
    }

    /// Records a reading, panicking if the instance is unknown. For use by
    /// environments that add the instance just before.
    pub fn put(&mut self, instance: &str, property: &str, reading: Reading) {
        self.set(instance, property, reading).expect("instance must be added before its readings");
    }

    /// Adds a ground n-ary relation tuple.
    pub fn add_relation(&mut self, atom: Atom) {
        debug_assert!(atom.is_ground());
        self.relations.insert(atom);
    }

    pub fn instances(&self) -> &BTreeMap<InstanceId, ConceptId> {
        &self.instances
    }

    pub fn concept_of(&self, instance: &InstanceId) -> Option<&ConceptId> {
        self.instances.get(instance)
    }

    pub fn entries(&self) -> &BTreeMap<EntryKey, Reading> {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> impl Iterator<Item = (&EntryKey, &mut Reading)> {
        self.entries.iter_mut()
    }

    pub fn get(&self, instance: &InstanceId, property: &PropertyId) -> Option<&Reading> {
        self.entries.get(&(instance.clone(), property.clone()))
    }

    pub fn get_mut(&mut self, instance: &InstanceId, property: &PropertyId) -> Option<&mut Reading> {
        self.entries.get_mut(&(instance.clone(), property.clone()))
    }

    pub fn value(&self, instance: &str, property: &str) -> Option<&Value> {
        self.get(&InstanceId::from(instance), &PropertyId::from(property)).and_then(|r| r.value.as_ref())
    }

    pub fn relations(&self) -> &BTreeSet<Atom> {
        &self.relations
    }

    pub fn observed_concepts(&self) -> BTreeSet<&ConceptId> {
        self.instances.values().collect()
    }

    pub fn observed_properties(&self) -> BTreeSet<&PropertyId> {
        self.entries.keys().map(|(_, p)| p).collect()
    }

    /// Removes an instance with all its readings.
    pub fn remove_instance(&mut self, instance: &InstanceId) {
        self.instances.remove(instance);
        self.entries.retain(|(i, _), _| i != instance);
    }

    /// Ground facts: `concept(instance)` per instance, `property(instance,
    /// value)` per valued entry, plus the relation tuples.
    pub fn to_facts(&self) -> Vec<Atom> {
        let mut out = Vec::with_capacity(self.instances.len() + self.entries.len() + self.relations.len());
        for (i, c) in &self.instances {
            out.push(Atom::new(c.as_str(), vec![Term::sym(i.as_str())]));
        }
        for ((i, p), r) in &self.entries {
            if let Some(v) = &r.value {
                out.push(Atom::new(p.as_str(), vec![Term::sym(i.as_str()), v.to_term()]));
            }
        }
        out.extend(self.relations.iter().cloned());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn readings_require_a_known_instance() {
        let mut s = ObservationSchema::new(0);
        assert!(s.set("m1", "hasStatus", Reading::clean(Value::sym("Working"))).is_err());
        s.add_instance("m1", "Machine");
        s.set("m1", "hasStatus", Reading::clean(Value::sym("Working"))).unwrap();
        assert_eq!(s.value("m1", "hasStatus"), Some(&Value::sym("Working")));
    }

    #[test]
    fn fact_encoding() {
        let mut s = ObservationSchema::new(0);
        s.add_instance("m1", "Machine");
        s.put("m1", "hasLastBrokenStart", Reading::clean(Value::Num(50.0)));
        s.put("m1", "hasStatus", Reading::missing());
        let facts = s.to_facts();
        assert_eq!(facts.len(), 2);
        assert_eq!(facts[0].to_string(), "Machine(m1)");
        assert_eq!(facts[1].to_string(), "hasLastBrokenStart(m1, 50)");
    }
}
