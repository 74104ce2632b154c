use std::collections::BTreeSet;

use ontodem_ontology::ActionId;
use ontodem_rules::{Atom, Term};

use crate::error::ActionError;

#[derive(Clone, Debug, PartialEq)]
pub struct ActionEntry {
    pub id: ActionId,
    /// Ground facts describing the action, e.g. `assignTo(m3)`.
    pub facts: Vec<Atom>,
}

/// Ordered actions with unique ids.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ActionSet {
    entries: Vec<ActionEntry>,
}

impl ActionSet {
    pub fn new(entries: Vec<ActionEntry>) -> Result<Self, ActionError> {
        let mut seen = BTreeSet::new();
        for e in &entries {
            if !seen.insert(&e.id) {
                return Err(ActionError::DuplicateAction(e.id.clone()));
            }
        }
        Ok(ActionSet { entries })
    }

    /// Actions without metadata facts.
    pub fn from_ids<I, S>(ids: I) -> Result<Self, ActionError>
    where
        I: IntoIterator<Item = S>,
        S: Into<ActionId>,
    {
        Self::new(ids.into_iter().map(|id| ActionEntry { id: id.into(), facts: Vec::new() }).collect())
    }

    pub fn entries(&self) -> &[ActionEntry] {
        &self.entries
    }

    pub fn ids(&self) -> impl Iterator<Item = &ActionId> {
        self.entries.iter().map(|e| &e.id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn position(&self, id: &ActionId) -> Option<usize> {
        self.entries.iter().position(|e| &e.id == id)
    }

    pub fn contains(&self, id: &ActionId) -> bool {
        self.position(id).is_some()
    }

    pub(crate) fn select(&self, keep: &[bool]) -> ActionSet {
        ActionSet { entries: self.entries.iter().zip(keep).filter(|(_, k)| **k).map(|(e, _)| e.clone()).collect() }
    }
}

pub(crate) fn id_term(id: &ActionId) -> Term {
    Term::sym(id.as_str())
}
