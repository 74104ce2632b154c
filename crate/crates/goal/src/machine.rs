use std::collections::BTreeMap;
use std::fmt;

use ontodem_ontology::{Ontology, Subsumer};

use crate::reward_fn::{deduce_beliefs, extract_reward_functions, LinearConstraint, RewardFn};
use crate::symbol::PropositionalSymbol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RmState(usize);

impl RmState {
    pub const INITIAL: RmState = RmState(0);

    /// Dense index, usable as a per-state learner id.
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for RmState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{}", self.0)
    }
}

/// Result of feeding one symbol to a reward machine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RmStep {
    /// An existing transition was followed.
    Followed(RmState),
    /// The symbol is the one that led into the current state.
    Stayed,
    /// A new state and transition were created.
    Added(RmState),
    /// The state limit was reached; the machine stayed put.
    Saturated,
}

/// Deterministic reward machine grown online from observed symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct RewardMachine {
    rewards: Vec<Vec<RewardFn>>,
    entered_by: Vec<Option<PropositionalSymbol>>,
    transitions: BTreeMap<(RmState, PropositionalSymbol), RmState>,
    current: RmState,
    max_states: usize,
}

impl Default for RewardMachine {
    fn default() -> Self {
        Self::new()
    }
}

impl RewardMachine {
    /// A single-state machine without reward functions and no state limit.
    pub fn new() -> Self {
        RewardMachine {
            rewards: vec![Vec::new()],
            entered_by: vec![None],
            transitions: BTreeMap::new(),
            current: RmState::INITIAL,
            max_states: usize::MAX,
        }
    }

    /// # Panics
    ///
    /// Panics if `max_states` is zero.
    pub fn with_max_states(mut self, max_states: usize) -> Self {
        assert!(max_states > 0);
        self.max_states = max_states;
        self
    }

    pub fn initial(&self) -> RmState {
        RmState::INITIAL
    }

    pub fn current(&self) -> RmState {
        self.current
    }

    pub fn state_count(&self) -> usize {
        self.rewards.len()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn transitions(&self) -> impl Iterator<Item = (RmState, &PropositionalSymbol, RmState)> {
        self.transitions.iter().map(|((from, sym), to)| (*from, sym, *to))
    }

    pub fn reward_functions(&self, state: RmState) -> &[RewardFn] {
        &self.rewards[state.0]
    }

    /// Returns to the initial state, keeping the learned structure.
    pub fn reset(&mut self) {
        self.current = RmState::INITIAL;
    }

    /// Follows `symbol` from the current state, creating a new state with
    /// `rewards()` as its reward functions when no transition exists.
    pub fn step_with(&mut self, symbol: &PropositionalSymbol, rewards: impl FnOnce() -> Vec<RewardFn>) -> RmStep {
        if let Some(&next) = self.transitions.get(&(self.current, symbol.clone())) {
            self.current = next;
            return RmStep::Followed(next);
        }
        if self.entered_by[self.current.0].as_ref() == Some(symbol) {
            return RmStep::Stayed;
        }
        if self.state_count() >= self.max_states {
            return RmStep::Saturated;
        }
        let next = RmState(self.rewards.len());
        self.rewards.push(rewards());
        self.entered_by.push(Some(symbol.clone()));
        self.transitions.insert((self.current, symbol.clone()), next);
        self.current = next;
        RmStep::Added(next)
    }

    /// Labels the observation by its subsumer and steps the machine. New
    /// states get the reward functions implied by the subsumer's beliefs.
    pub fn update(&mut self, subsumer: &Subsumer, ontology: &Ontology, constraints: &[LinearConstraint]) -> RmStep {
        let symbol = PropositionalSymbol::from(subsumer);
        self.step_with(&symbol, || extract_reward_functions(&deduce_beliefs(subsumer, ontology), constraints))
    }
}
