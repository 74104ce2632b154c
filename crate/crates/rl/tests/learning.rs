use std::collections::BTreeMap;

use ontodem_action::{ActionEntry, ActionSet};
use ontodem_ontology::{
    ConstraintKind, ObservationSchema, Ontology, Range, Reading, Relationship, SemanticConstraint, Value,
};
use ontodem_rl::*;
use ontodem_rules::{parse_atom, parse_pattern};
use proptest::prelude::*;
use rand::Rng;

/// Two cells, two moves. `stay` keeps the cell, `switch` flips it.
/// Rewards: switching out of s0 pays 1, switching out of s1 pays 2,
/// staying pays 0. The observed cell is flagged Noisy with probability
/// `noise` (value unchanged) so the noise stream is exercised.
struct Toy {
    actions: ActionSet,
    cell: usize,
    noise: f64,
    steps: usize,
    descriptor: StateDescriptor,
}

impl Toy {
    fn new(noise: f64) -> Self {
        Toy {
            actions: ActionSet::new(
                ["stay", "switch"]
                    .into_iter()
                    .map(|a| ActionEntry { id: a.into(), facts: vec![parse_atom(&format!("chosen({a})")).unwrap()] })
                    .collect(),
            )
            .unwrap(),
            cell: 0,
            noise,
            steps: 0,
            descriptor: StateDescriptor::new(vec![Feature::symbolic("walker", "hasCell", "s0")]),
        }
    }
}

const REWARD: [[f64; 2]; 2] = [[0.0, 1.0], [0.0, 2.0]];
const NEXT: [[usize; 2]; 2] = [[0, 1], [1, 0]];

impl Environment for Toy {
    fn actions(&self) -> &ActionSet {
        &self.actions
    }

    fn reset(&mut self, rng: &mut StreamRng) {
        self.cell = rng.random_range(0..2);
        self.steps = 0;
    }

    fn observe(&mut self, rng: &mut StreamRng) -> ObservationSchema {
        let mut s = ObservationSchema::new(self.steps as u64);
        s.add_instance("walker", "Walker");
        let v = Value::sym(format!("s{}", self.cell));
        let reading = if rng.random_bool(self.noise) { Reading::noisy(v) } else { Reading::clean(v) };
        s.put("walker", "hasCell", reading);
        s
    }

    fn step(&mut self, action: usize, _rng: &mut StreamRng) -> Result<StepOutcome, RlError> {
        if action >= 2 {
            return Err(RlError::ActionOutOfRange { index: action, count: 2 });
        }
        let reward = REWARD[self.cell][action];
        self.cell = NEXT[self.cell][action];
        self.steps += 1;
        Ok(StepOutcome { reward, done: false })
    }

    fn state_key(&self, schema: &ObservationSchema) -> StateKey {
        discretize_state(schema, &self.descriptor).key
    }

    fn metrics(&self) -> BTreeMap<String, f64> {
        BTreeMap::from([("steps".to_owned(), self.steps as f64)])
    }
}

fn value_iteration(gamma: f64) -> [[f64; 2]; 2] {
    let mut q = [[0.0f64; 2]; 2];
    for _ in 0..10_000 {
        let v = [q[0][0].max(q[0][1]), q[1][0].max(q[1][1])];
        for s in 0..2 {
            for a in 0..2 {
                q[s][a] = REWARD[s][a] + gamma * v[NEXT[s][a]];
            }
        }
    }
    q
}

fn cell(n: usize) -> StateKey {
    StateKey::new(vec![KeyPart::Sym(format!("s{n}"))])
}

fn knowledge() -> Knowledge {
    let o = Ontology::builder("toy")
        .concept("Walker")
        .property("hasCell")
        .relationship(Relationship::new("Walker", "hasCell", Range::Text))
        .build()
        .unwrap();
    Knowledge::new(o)
}

fn config() -> AgentConfig {
    AgentConfig {
        learning_rate: 0.5,
        discount: 0.9,
        epsilon: 1.0,
        epsilon_decay: 1.0,
        record_transitions: true,
        ..AgentConfig::default()
    }
}

#[test]
fn q_learning_matches_value_iteration() {
    let mut env = Toy::new(0.0);
    let mut agent = Agent::new(config(), 2).unwrap();
    agent.run_episode(&mut env, &knowledge(), &mut RngStreams::new(3), 10_000).unwrap();
    let q = agent.table(0, 0).unwrap();
    let expected = value_iteration(0.9);
    for (s, row) in expected.iter().enumerate() {
        for (a, want) in row.iter().enumerate() {
            let got = q.get(&cell(s), a);
            assert!((got - want).abs() < 1e-3, "Q(s{s},{a}) = {got}, expected {want}");
        }
    }
}

/// Action values of the uniform random policy, by direct linear solve.
fn uniform_policy_q(gamma: f64) -> [[f64; 2]; 2] {
    // V = 0.5 Σ_a (R + γ V(next)), a 2x2 system.
    let (a11, a12, b1) = (1.0 - 0.5 * gamma, -0.5 * gamma, 0.5 * (REWARD[0][0] + REWARD[0][1]));
    let (a21, a22, b2) = (-0.5 * gamma, 1.0 - 0.5 * gamma, 0.5 * (REWARD[1][0] + REWARD[1][1]));
    let det = a11 * a22 - a12 * a21;
    let v = [(b1 * a22 - a12 * b2) / det, (a11 * b2 - a21 * b1) / det];
    let mut q = [[0.0; 2]; 2];
    for s in 0..2 {
        for a in 0..2 {
            q[s][a] = REWARD[s][a] + gamma * v[NEXT[s][a]];
        }
    }
    q
}

#[test]
fn sarsa_with_full_exploration_evaluates_the_uniform_policy() {
    let cfg = AgentConfig { algorithm: Algorithm::Sarsa, learning_rate: 0.01, ..config() };
    let mut agent = PlainAgent::new(cfg, 2).unwrap();
    agent.run_episode(&mut Toy::new(0.0), &mut RngStreams::new(5), 50_000).unwrap();
    let expected = uniform_policy_q(0.9);
    for (s, row) in expected.iter().enumerate() {
        for (a, want) in row.iter().enumerate() {
            let got = agent.table().get(&cell(s), a);
            assert!((got - want).abs() < 0.3, "Q(s{s},{a}) = {got}, expected {want}");
        }
    }
}

#[test]
fn runs_are_deterministic_per_seed() {
    let run = |seed| {
        let mut env = Toy::new(0.3);
        let mut agent = Agent::new(config().with_methods([Method::Abstraction]), 2).unwrap();
        agent.run(&mut env, &knowledge(), &mut RngStreams::new(seed), 3, 50).unwrap()
    };
    assert_eq!(run(11), run(11));
    assert_ne!(run(11), run(12));
}

#[test]
fn no_methods_reproduce_the_plain_learner_bit_for_bit() {
    let cfg = AgentConfig { epsilon: 0.3, epsilon_decay: 0.9, learning_rate: 0.1, ..config() };
    let mut a = Agent::new(cfg.clone(), 2).unwrap();
    let mut b = PlainAgent::new(cfg.clone(), 2).unwrap();
    let ra = a.run(&mut Toy::new(0.2), &knowledge(), &mut RngStreams::new(9), 5, 200).unwrap();
    let rb = b.run(&mut Toy::new(0.2), &mut RngStreams::new(9), 5, 200).unwrap();
    assert_eq!(ra, rb);
    assert_eq!(a.table(0, 0).unwrap(), b.table());
    let cfg = AgentConfig { algorithm: Algorithm::Sarsa, ..cfg };
    let ra = Agent::new(cfg.clone(), 2).unwrap().run(&mut Toy::new(0.2), &knowledge(), &mut RngStreams::new(4), 3, 100);
    let rb = PlainAgent::new(cfg, 2).unwrap().run(&mut Toy::new(0.2), &mut RngStreams::new(4), 3, 100);
    assert_eq!(ra.unwrap(), rb.unwrap());
}

#[test]
fn idle_methods_leave_the_trajectory_unchanged() {
    // No rules to apply and no thresholds to trigger: augmentation and goal
    // selection have nothing to do.
    let cfg = config().with_methods([Method::Augmentation, Method::GoalSelection, Method::ActionMasking]);
    let ra = Agent::new(cfg.clone(), 2).unwrap().run(&mut Toy::new(0.0), &knowledge(), &mut RngStreams::new(2), 2, 80);
    let rb = PlainAgent::new(cfg, 2).unwrap().run(&mut Toy::new(0.0), &mut RngStreams::new(2), 2, 80);
    assert_eq!(ra.unwrap(), rb.unwrap());
}

#[test]
fn action_masking_removes_forbidden_actions() {
    let mut k = knowledge();
    k.constraints.push(SemanticConstraint {
        kind: ConstraintKind::Forbid,
        pattern: parse_pattern("hasCell(walker, s1), chosen(stay)").unwrap(),
    });
    let mut agent = Agent::new(config().with_methods([Method::ActionMasking]), 2).unwrap();
    let reports = agent.run(&mut Toy::new(0.0), &k, &mut RngStreams::new(1), 2, 300).unwrap();
    let bad = reports.iter().flat_map(|r| &r.transitions).filter(|t| t.state == "s1" && t.action == "stay").count();
    assert_eq!(bad, 0);
    let stays_in_s0 =
        reports.iter().flat_map(|r| &r.transitions).filter(|t| t.state == "s0" && t.action == "stay").count();
    assert!(stays_in_s0 > 0);
}

#[test]
fn jsonl_log_has_one_line_per_step() {
    let mut agent = Agent::new(config(), 2).unwrap();
    let reports = agent.run(&mut Toy::new(0.0), &knowledge(), &mut RngStreams::new(1), 2, 25).unwrap();
    let mut buf = Vec::new();
    write_jsonl(&reports, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 50);
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    for field in ["step", "state", "action", "reward", "rm_state", "case"] {
        assert!(first.get(field).is_some(), "missing {field}");
    }
    assert_eq!(mean_metric(&reports, "steps"), Some(25.0));
}

fn table(values: &[Vec<f64>]) -> QTable {
    let mut q = QTable::new(values[0].len(), 0.0);
    for (s, row) in values.iter().enumerate() {
        for (a, v) in row.iter().enumerate() {
            q.set(&cell(s), a, *v);
        }
    }
    q
}

proptest! {
    #[test]
    fn epsilon_greedy_is_a_distribution(
        row in prop::collection::vec(-10.0f64..10.0, 1..8),
        eps in 0.0f64..=1.0,
        mask in prop::collection::vec(any::<bool>(), 8),
    ) {
        let q = table(std::slice::from_ref(&row));
        let mut feasible: Vec<usize> = (0..row.len()).filter(|&a| mask[a]).collect();
        if feasible.is_empty() {
            feasible.push(0);
        }
        let d = epsilon_greedy(&q, &cell(0), &feasible, eps);
        prop_assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let g = q.argmax(&cell(0), &feasible);
        for (a, p) in d.iter().enumerate() {
            prop_assert!(*p >= 0.0);
            if !feasible.contains(&a) {
                prop_assert_eq!(*p, 0.0);
            } else if a != g {
                prop_assert!(*p <= d[g]);
            }
        }
    }

    #[test]
    fn identical_advisors_agree_with_argmax(row in prop::collection::vec(-5i32..5, 1..6), copies in 1usize..5) {
        let q = table(&[row.iter().map(|&v| v as f64).collect()]);
        let all: Vec<usize> = (0..row.len()).collect();
        let advisors: Vec<&QTable> = std::iter::repeat_n(&q, copies).collect();
        prop_assert_eq!(multi_advisor_vote(&advisors, &cell(0), &all), q.argmax(&cell(0), &all));
    }

    #[test]
    fn buckets_are_monotone_and_in_range(
        mut edges in prop::collection::btree_set(-100i32..100, 2..8),
        a in -150.0f64..150.0,
        b in -150.0f64..150.0,
    ) {
        let edges: Vec<f64> = std::mem::take(&mut edges).into_iter().map(f64::from).collect();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (ba, _) = bucket(&edges, lo);
        let (bb, _) = bucket(&edges, hi);
        prop_assert!(ba <= bb);
        prop_assert!(bb < edges.len() - 1);
    }

    #[test]
    fn q_update_is_a_convex_step(q0 in -10.0f64..10.0, r in -10.0f64..10.0, next in -10.0f64..10.0, lr in 0.01f64..=1.0) {
        let mut q = table(&[vec![q0], vec![next]]);
        q_learning_update(&mut q, &cell(0), 0, r, &cell(1), lr, 0.9, false);
        let target = r + 0.9 * next;
        let got = q.get(&cell(0), 0);
        prop_assert!((got - (q0 + lr * (target - q0))).abs() < 1e-9);
        prop_assert!(got >= q0.min(target) - 1e-9 && got <= q0.max(target) + 1e-9);
    }
}
