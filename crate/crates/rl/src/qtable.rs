use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

/// One component of a discretized state.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum KeyPart {
    Bucket(usize),
    Sym(String),
    /// The feature had no usable reading.
    Absent,
}

impl fmt::Display for KeyPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KeyPart::Bucket(b) => write!(f, "{b}"),
            KeyPart::Sym(s) => f.write_str(s),
            KeyPart::Absent => f.write_str("?"),
        }
    }
}

/// Hashable state identity used to index Q tables.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct StateKey(Vec<KeyPart>);

impl StateKey {
    pub fn new(parts: Vec<KeyPart>) -> Self {
        StateKey(parts)
    }

    pub fn parts(&self) -> &[KeyPart] {
        &self.0
    }
}

impl FromIterator<KeyPart> for StateKey {
    fn from_iter<I: IntoIterator<Item = KeyPart>>(iter: I) -> Self {
        StateKey(iter.into_iter().collect())
    }
}

impl fmt::Display for StateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("|")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Action values per state, created lazily at `initial`.
#[derive(Clone, Debug, PartialEq)]
pub struct QTable {
    actions: usize,
    initial: f64,
    values: BTreeMap<StateKey, Vec<f64>>,
}

impl QTable {
    /// # Panics
    ///
    /// Panics if `actions` is zero.
    pub fn new(actions: usize, initial: f64) -> Self {
        assert!(actions > 0, "a Q table needs at least one action");
        QTable { actions, initial, values: BTreeMap::new() }
    }

    pub fn actions(&self) -> usize {
        self.actions
    }

    /// Number of states with stored values.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, state: &StateKey, action: usize) -> f64 {
        self.values.get(state).map_or(self.initial, |row| row[action])
    }

    pub fn set(&mut self, state: &StateKey, action: usize, value: f64) {
        self.row_mut(state)[action] = value;
    }

    /// Values of every action in `state`.
    pub fn row(&self, state: &StateKey) -> Vec<f64> {
        self.values.get(state).cloned().unwrap_or_else(|| vec![self.initial; self.actions])
    }

    pub fn max_value(&self, state: &StateKey) -> f64 {
        match self.values.get(state) {
            Some(row) => row.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            None => self.initial,
        }
    }

    /// Highest-valued action among `feasible`; ties go to the lowest index.
    ///
    /// # Panics
    ///
    /// Panics if `feasible` is empty.
    pub fn argmax(&self, state: &StateKey, feasible: &[usize]) -> usize {
        assert!(!feasible.is_empty(), "argmax over no actions");
        let row = self.values.get(state);
        let value = |a: usize| row.map_or(self.initial, |r| r[a]);
        let mut best = feasible[0];
        for &a in &feasible[1..] {
            let (va, vb) = (value(a), value(best));
            if va > vb || (va == vb && a < best) {
                best = a;
            }
        }
        best
    }

    pub fn states(&self) -> impl Iterator<Item = (&StateKey, &[f64])> {
        self.values.iter().map(|(k, v)| (k, v.as_slice()))
    }

    fn row_mut(&mut self, state: &StateKey) -> &mut Vec<f64> {
        if !self.values.contains_key(state) {
            self.values.insert(state.clone(), vec![self.initial; self.actions]);
        }
        self.values.get_mut(state).expect("row inserted")
    }
}

/// `Q(s,a) += lr · (r + γ · max Q(s', ·) - Q(s,a))`; the bootstrap term is
/// dropped when `terminal`. Returns the temporal-difference error.
#[allow(clippy::too_many_arguments)]
pub fn q_learning_update(
    q: &mut QTable,
    state: &StateKey,
    action: usize,
    reward: f64,
    next: &StateKey,
    learning_rate: f64,
    discount: f64,
    terminal: bool,
) -> f64 {
    let future = if terminal { 0.0 } else { q.max_value(next) };
    apply(q, state, action, reward + discount * future, learning_rate)
}

/// On-policy variant bootstrapping on `Q(s', a')`.
#[allow(clippy::too_many_arguments)]
pub fn sarsa_update(
    q: &mut QTable,
    state: &StateKey,
    action: usize,
    reward: f64,
    next: &StateKey,
    next_action: usize,
    learning_rate: f64,
    discount: f64,
    terminal: bool,
) -> f64 {
    let future = if terminal { 0.0 } else { q.get(next, next_action) };
    apply(q, state, action, reward + discount * future, learning_rate)
}

fn apply(q: &mut QTable, state: &StateKey, action: usize, target: f64, learning_rate: f64) -> f64 {
    let cell = &mut q.row_mut(state)[action];
    let td = target - *cell;
    *cell += learning_rate * td;
    td
}

/// Epsilon-greedy distribution over all `actions` slots: `1 - ε + ε/|F|`
/// on `greedy`, `ε/|F|` on the other feasible actions, 0 elsewhere.
///
/// # Panics
///
/// Panics if `feasible` is empty or does not contain `greedy`.
pub fn epsilon_distribution(actions: usize, feasible: &[usize], greedy: usize, epsilon: f64) -> Vec<f64> {
    assert!(feasible.contains(&greedy), "greedy action {greedy} is not feasible");
    let share = epsilon / feasible.len() as f64;
    let mut dist = vec![0.0; actions];
    for &a in feasible {
        dist[a] = share;
    }
    dist[greedy] = 1.0 - epsilon + share;
    dist
}

/// Epsilon-greedy policy of `q` in `state` restricted to `feasible`.
pub fn epsilon_greedy(q: &QTable, state: &StateKey, feasible: &[usize], epsilon: f64) -> Vec<f64> {
    epsilon_distribution(q.actions(), feasible, q.argmax(state, feasible), epsilon)
}

/// Plurality vote of the advisors' greedy actions. Ties go to the larger
/// sum of min-max normalized values, then to the lowest index.
///
/// # Panics
///
/// Panics if `advisors` or `feasible` is empty.
pub fn multi_advisor_vote(advisors: &[&QTable], state: &StateKey, feasible: &[usize]) -> usize {
    assert!(!advisors.is_empty(), "vote without advisors");
    let mut votes: BTreeMap<usize, usize> = BTreeMap::new();
    let mut support: BTreeMap<usize, f64> = feasible.iter().map(|&a| (a, 0.0)).collect();
    for q in advisors {
        *votes.entry(q.argmax(state, feasible)).or_default() += 1;
        let values: Vec<f64> = feasible.iter().map(|&a| q.get(state, a)).collect();
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            for (&a, v) in feasible.iter().zip(&values) {
                *support.get_mut(&a).expect("feasible action") += (v - lo) / (hi - lo);
            }
        }
    }
    let top = votes.values().copied().max().expect("at least one vote");
    votes
        .into_iter()
        .filter(|&(_, n)| n == top)
        .map(|(a, _)| a)
        .fold(None, |best: Option<usize>, a| match best {
            Some(b) if support[&b] >= support[&a] => Some(b),
            _ => Some(a),
        })
        .expect("at least one candidate")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(n: usize) -> StateKey {
        StateKey::new(vec![KeyPart::Bucket(n)])
    }

    #[test]
    fn epsilon_greedy_examples() {
        let mut q = QTable::new(2, 0.0);
        q.set(&key(0), 0, 1.0);
        let d = epsilon_greedy(&q, &key(0), &[0, 1], 0.2);
        assert!((d[0] - 0.9).abs() < 1e-12 && (d[1] - 0.1).abs() < 1e-12);
        let q4 = QTable::new(4, 0.0);
        assert_eq!(epsilon_greedy(&q4, &key(0), &[0, 1, 2, 3], 1.0), vec![0.25; 4]);
    }

    #[test]
    fn argmax_ties_go_to_lowest_index() {
        let mut q = QTable::new(3, 0.0);
        q.set(&key(0), 2, 1.0);
        q.set(&key(0), 1, 1.0);
        assert_eq!(q.argmax(&key(0), &[2, 1, 0]), 1);
        assert_eq!(q.argmax(&key(0), &[0]), 0);
    }

    #[test]
    fn q_update_moves_toward_target() {
        let mut q = QTable::new(2, 0.0);
        q.set(&key(1), 1, 2.0);
        let td = q_learning_update(&mut q, &key(0), 0, 1.0, &key(1), 0.5, 0.9, false);
        assert!((td - 2.8).abs() < 1e-12);
        assert!((q.get(&key(0), 0) - 1.4).abs() < 1e-12);
        sarsa_update(&mut q, &key(0), 1, 1.0, &key(1), 0, 1.0, 0.9, false);
        assert_eq!(q.get(&key(0), 1), 1.0);
    }

    #[test]
    fn vote_plurality_then_support() {
        let s = key(0);
        let table = |vals: [f64; 3]| {
            let mut q = QTable::new(3, 0.0);
            for (a, v) in vals.into_iter().enumerate() {
                q.set(&s, a, v);
            }
            q
        };
        let a = table([1.0, 0.0, 0.0]);
        let b = table([0.0, 1.0, 0.9]);
        let c = table([0.0, 1.0, 0.0]);
        assert_eq!(multi_advisor_vote(&[&a, &b, &c], &s, &[0, 1, 2]), 1);
        // One vote each for 0 and 1; action 1 has more normalized support.
        let e = table([1.0, 0.9, 0.0]);
        assert_eq!(multi_advisor_vote(&[&e, &c], &s, &[0, 1, 2]), 1);
        assert_eq!(multi_advisor_vote(&[&a, &c], &s, &[0, 1, 2]), 0);
    }
}
