use std::collections::{BTreeMap, VecDeque};

use ontodem_action::{ActionEntry, ActionSet};
use ontodem_ontology::{ObservationSchema, Reading, Value};
use ontodem_rl::{Environment, KeyPart, RlError, StateKey, StepOutcome, StreamRng};
use ontodem_rules::{Atom, Term};
use rand::seq::index::sample;
use rand::Rng;

use crate::error::JssError;
use crate::model::{FailureClass, Machine, MachineStatus, Order, Priority};
use crate::scenario::{DueClass, JssScenario, NoiseParams, UtilizationDef};

/// Name of the scheduler instance in observations.
pub const SCHEDULER: &str = "jss";

/// Fixed shop layout and dynamics.
#[derive(Clone, Debug, PartialEq)]
pub struct Topology {
    /// Machines per group.
    pub groups: Vec<usize>,
    pub sources: usize,
    /// Orders a machine holds across its three buffers.
    pub capacity: usize,
    /// Inclusive range of processing steps per order.
    pub processing: (u32, u32),
    /// Inclusive range of repair steps per breakdown.
    pub repair: (u32, u32),
    /// Per-step breakdown probability for each failure class.
    pub failure_p: [f64; 3],
    /// Failure class of each machine.
    pub failure_classes: Vec<FailureClass>,
    /// Share of low, medium and high priority orders.
    pub priority_mix: [f64; 3],
    /// Time units per step, for due dates.
    pub time_unit: u64,
}

impl Default for Topology {
    fn default() -> Self {
        use FailureClass::*;
        Topology {
            groups: vec![3, 3, 2],
            sources: 3,
            capacity: 4,
            processing: (5, 15),
            repair: (5, 15),
            failure_p: [0.002, 0.005, 0.01],
            failure_classes: vec![Low, Medium, High, Low, Low, Medium, High, Low],
            priority_mix: [0.3, 0.5, 0.2],
            time_unit: 10,
        }
    }
}

impl Topology {
    pub fn machine_count(&self) -> usize {
        self.groups.iter().sum()
    }

    fn failure_p(&self, class: FailureClass) -> f64 {
        match class {
            FailureClass::Low => self.failure_p[0],
            FailureClass::Medium => self.failure_p[1],
            FailureClass::High => self.failure_p[2],
        }
    }
}

/// Order totals, for conservation checks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OrderCounts {
    pub generated: u64,
    pub queued: u64,
    /// Held in any machine buffer.
    pub in_machines: u64,
    pub processed: u64,
    pub failed: u64,
}

/// Episode metrics of a job shop run.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct JssMetrics {
    /// Mean machine utilization under the scenario definition.
    pub avg_utilization: f64,
    pub utilization_ratio: f64,
    pub utilization_elapsed: f64,
    /// Mean steps queued over all generated orders.
    pub avg_waiting_time: f64,
    pub processed: u64,
    pub failed: u64,
    pub generated: u64,
    pub infeasible: u64,
}

impl JssMetrics {
    pub fn to_map(&self) -> BTreeMap<String, f64> {
        [
            ("avg_utilization", self.avg_utilization),
            ("utilization_ratio", self.utilization_ratio),
            ("utilization_elapsed", self.utilization_elapsed),
            ("avg_waiting_time", self.avg_waiting_time),
            ("processed", self.processed as f64),
            ("failed", self.failed as f64),
            ("generated", self.generated as f64),
            ("infeasible", self.infeasible as f64),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_owned(), v))
        .collect()
    }
}

/// Job shop with eight machines in three groups. Each agent step dispatches
/// the head of the order queue to one machine; the shop advances one time
/// step after as many decisions as orders arrive per step.
#[derive(Clone, Debug)]
pub struct JssEnv {
    scenario: JssScenario,
    topology: Topology,
    noise: NoiseParams,
    actions: ActionSet,
    machines: Vec<Machine>,
    queue: VecDeque<Order>,
    tick: u64,
    decisions_left: usize,
    next_id: u64,
    next_source: usize,
    generated: u64,
    processed: u64,
    failed: u64,
    infeasible: u64,
    /// Queue time of orders that have left the queue.
    waited_closed: u64,
    status_noisy: Vec<bool>,
    time_noisy: Vec<bool>,
    breakdown: bool,
}

impl JssEnv {
    pub fn new(scenario: JssScenario) -> Result<Self, JssError> {
        Self::with_topology(scenario, Topology::default())
    }

    pub fn with_topology(scenario: JssScenario, topology: Topology) -> Result<Self, JssError> {
        scenario.validate()?;
        let n = topology.machine_count();
        if topology.failure_classes.len() != n || n == 0 {
            return Err(JssError::InvalidScenario(format!(
                "{} failure classes for {n} machines",
                topology.failure_classes.len()
            )));
        }
        let noise = scenario.noise.params();
        if noise.status_machines > n || noise.working_time_machines > n {
            return Err(JssError::InvalidScenario("noise targets more machines than exist".into()));
        }
        let entries = (1..=n)
            .map(|k| {
                let m = format!("m{k}");
                ActionEntry { id: m.as_str().into(), facts: vec![Atom::new("assignTo", vec![Term::sym(m)])] }
            })
            .collect();
        let actions = ActionSet::new(entries)?;
        let mut env = JssEnv {
            scenario,
            topology,
            noise,
            actions,
            machines: Vec::new(),
            queue: VecDeque::new(),
            tick: 0,
            decisions_left: 0,
            next_id: 0,
            next_source: 0,
            generated: 0,
            processed: 0,
            failed: 0,
            infeasible: 0,
            waited_closed: 0,
            status_noisy: vec![false; n],
            time_noisy: vec![false; n],
            breakdown: false,
        };
        env.clear();
        Ok(env)
    }

    pub fn scenario(&self) -> &JssScenario {
        &self.scenario
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn machines(&self) -> &[Machine] {
        &self.machines
    }

    pub fn queue(&self) -> &VecDeque<Order> {
        &self.queue
    }

    /// Current time step.
    pub fn tick(&self) -> u64 {
        self.tick
    }

    /// Agent steps needed to run the scenario horizon.
    pub fn decision_budget(&self) -> usize {
        self.scenario.steps * self.scenario.load.orders_per_step()
    }

    pub fn counts(&self) -> OrderCounts {
        OrderCounts {
            generated: self.generated,
            queued: self.queue.len() as u64,
            in_machines: self.machines.iter().map(|m| m.load() as u64).sum(),
            processed: self.processed,
            failed: self.failed,
        }
    }

    pub fn jss_metrics(&self) -> JssMetrics {
        let mean = |def: UtilizationDef| {
            self.machines.iter().map(|m| m.utilization(def)).sum::<f64>() / self.machines.len() as f64
        };
        let queued: u64 = self.queue.iter().map(|o| o.waited).sum();
        JssMetrics {
            avg_utilization: mean(self.scenario.utilization),
            utilization_ratio: mean(UtilizationDef::WorkToFailure),
            utilization_elapsed: mean(UtilizationDef::Elapsed),
            avg_waiting_time: if self.generated == 0 {
                0.0
            } else {
                (self.waited_closed + queued) as f64 / self.generated as f64
            },
            processed: self.processed,
            failed: self.failed,
            generated: self.generated,
            infeasible: self.infeasible,
        }
    }

    /// Noise-free observation of the current state.
    pub fn ground_truth(&self) -> ObservationSchema {
        let mut s = ObservationSchema::new(self.tick);
        let num = |v: f64| Reading::clean(Value::Num(v));
        let sym = |v: &str| Reading::clean(Value::sym(v));
        s.add_instance(SCHEDULER, "JobShopScheduler");
        s.put(SCHEDULER, "hasQueueLength", num(self.queue.len() as f64));
        for g in 1..=self.topology.groups.len() {
            let (group, area, sink) = (format!("g{g}"), format!("wa{g}"), format!("sink{g}"));
            s.add_instance(group.as_str(), "MachineGroup");
            s.add_instance(area.as_str(), "WorkArea");
            s.add_instance(sink.as_str(), "Sink");
            s.put(&group, "hasWorkArea", sym(&area));
            s.put(&group, "hasSink", sym(&sink));
        }
        for m in &self.machines {
            let name = m.name();
            let [inp, proc, out] = ["in", "proc", "out"].map(|b| format!("{name}_{b}"));
            s.add_instance(name.as_str(), "Machine");
            for (buffer, n) in
                [(&inp, m.input.len()), (&proc, usize::from(m.processing.is_some())), (&out, m.output.len())]
            {
                s.add_instance(buffer.as_str(), "Buffer");
                s.put(buffer, "hasNumber", num(n as f64));
            }
            s.put(&name, "hasInputBuffer", sym(&inp));
            s.put(&name, "hasProcessingBuffer", sym(&proc));
            s.put(&name, "hasOutputBuffer", sym(&out));
            s.put(&name, "hasInitialCapacity", num(m.capacity as f64));
            s.put(&name, "hasRemainingCapacity", sym(if m.is_full() { "Full" } else { "Free" }));
            s.put(&name, "hasStatus", sym(m.status.as_str()));
            s.put(&name, "hasLastBrokenStart", num(m.last_broken_start as f64));
            s.put(&name, "hasLastProcessStart", num(m.last_process_start as f64));
            s.put(&name, "hasWorkingTime", num(m.working_estimate()));
            s.put(&name, "hasIdleTime", num(m.idle_time as f64));
            s.put(&name, "hasFailureTime", num(m.failure_time as f64));
            s.put(&name, "hasFailureRate", sym(m.failure_class.as_str()));
            s.put(&name, "hasGroup", sym(&format!("g{}", m.group + 1)));

            let d1 = m.processing.as_ref().map(|o| self.put_order(&mut s, o));
            if let Some(d) = &d1 {
                s.add_relation(Atom::new("inProcess", vec![Term::sym(d.as_str()), Term::sym(name.as_str())]));
            }
            let mut d2 = None;
            for o in &m.input {
                let d = self.put_order(&mut s, o);
                s.add_relation(Atom::new("inInputBuffer", vec![Term::sym(d.as_str()), Term::sym(inp.as_str())]));
                d2.get_or_insert(d);
            }
            let mut d3 = None;
            for (o, _) in &m.output {
                let d = self.put_order(&mut s, o);
                s.add_relation(Atom::new("inOutputBuffer", vec![Term::sym(d.as_str()), Term::sym(out.as_str())]));
                d3.get_or_insert(d);
            }
            if let (Some(d1), Some(d2), Some(d3)) = (d1, d2, d3) {
                s.add_relation(Atom::new("Order", vec![Term::sym(d1), Term::sym(d2), Term::sym(d3)]));
            }
        }
        if let Some(head) = self.queue.front() {
            self.put_order(&mut s, head);
        }
        s
    }

    fn put_order(&self, s: &mut ObservationSchema, o: &Order) -> String {
        let name = o.name();
        let num = |v: f64| Reading::clean(Value::Num(v));
        s.add_instance(name.as_str(), "Order");
        s.put(&name, "hasDueDate", num(o.due.time_units() as f64));
        s.put(&name, "hasPriority", Reading::clean(Value::sym(o.priority.as_str())));
        s.put(&name, "hasWaitingTime", num(o.waited as f64));
        s.put(&name, "hasActualProcessingTime", num(f64::from(o.processing)));
        s.put(&name, "hasCurrentProcessingTime", num(f64::from(o.processed)));
        name
    }

    fn apply_noise(&self, s: &mut ObservationSchema, rng: &mut StreamRng) {
        for m in &self.machines {
            let name = m.name();
            if self.noise.capacity_p > 0.0 && m.is_full() && rng.random_bool(self.noise.capacity_p) {
                s.put(&name, "hasRemainingCapacity", Reading::noisy(Value::sym("Free")));
            }
            if self.status_noisy[m.index] && m.status == MachineStatus::Failure {
                s.put(&name, "hasStatus", Reading::noisy(Value::sym("Working")));
            }
            if self.time_noisy[m.index] {
                let max = i64::from(self.noise.working_time_max);
                let offset = rng.random_range(-max..=max);
                let value = (m.working_estimate() as i64 + offset).max(0);
                s.put(&name, "hasWorkingTime", Reading::noisy(Value::Num(value as f64)));
            }
        }
    }

    fn clear(&mut self) {
        let mut index = 0;
        self.machines.clear();
        for (g, &size) in self.topology.groups.iter().enumerate() {
            for _ in 0..size {
                let class = self.topology.failure_classes[index];
                self.machines.push(Machine::new(index, g, self.topology.capacity, class));
                index += 1;
            }
        }
        self.queue.clear();
        self.tick = 0;
        self.decisions_left = self.scenario.load.orders_per_step();
        self.next_id = 0;
        self.next_source = 0;
        self.generated = 0;
        self.processed = 0;
        self.failed = 0;
        self.infeasible = 0;
        self.waited_closed = 0;
        self.status_noisy.fill(false);
        self.time_noisy.fill(false);
        self.breakdown = false;
    }

    fn generate(&mut self, rng: &mut StreamRng) {
        for _ in 0..self.scenario.load.orders_per_step() {
            let draw: f64 = rng.random();
            let mut acc = 0.0;
            let mut due = DueClass::High;
            for (class, share) in self.scenario.due_mix.shares() {
                acc += share;
                if draw < acc {
                    due = class;
                    break;
                }
            }
            let draw: f64 = rng.random();
            let [low, medium, _] = self.topology.priority_mix;
            let priority = if draw < low {
                Priority::Low
            } else if draw < low + medium {
                Priority::Medium
            } else {
                Priority::High
            };
            let (lo, hi) = self.topology.processing;
            self.queue.push_back(Order {
                id: self.next_id,
                source: self.next_source,
                arrival: self.tick,
                due,
                priority,
                processing: rng.random_range(lo..=hi),
                processed: 0,
                waited: 0,
            });
            self.next_id += 1;
            self.next_source = (self.next_source + 1) % self.topology.sources;
            self.generated += 1;
        }
    }

    /// Advances the shop by one time step.
    fn advance(&mut self, rng: &mut StreamRng) {
        let t = self.tick as i64;
        for i in 0..self.machines.len() {
            let p_fail = self.topology.failure_p(self.machines[i].failure_class);
            let (rlo, rhi) = self.topology.repair;
            let m = &mut self.machines[i];
            if let Some((_, done)) = m.output.front() {
                if (*done as i64) < t {
                    m.output.pop_front();
                    self.processed += 1;
                }
            }
            if m.status == MachineStatus::Failure {
                m.failure_time += 1;
                m.repair_left -= 1;
                if m.repair_left == 0 {
                    m.last_process_start = t;
                    m.status = if m.processing.is_some() || !m.input.is_empty() {
                        MachineStatus::Working
                    } else {
                        MachineStatus::Idle
                    };
                }
                continue;
            }
            if rng.random_bool(p_fail) {
                m.status = MachineStatus::Failure;
                m.last_broken_start = t;
                m.failure_time += 1;
                m.repair_left = rng.random_range(rlo..=rhi) - 1;
                self.breakdown = true;
                continue;
            }
            if m.processing.is_none() {
                if let Some(o) = m.input.pop_front() {
                    m.processing = Some(o);
                    m.last_process_start = t;
                }
            }
            match m.processing.as_mut() {
                Some(o) => {
                    o.processed += 1;
                    m.working_time += 1;
                    m.status = MachineStatus::Working;
                    if o.processed >= o.processing {
                        let o = m.processing.take().expect("checked above");
                        m.output.push_back((o, self.tick));
                    }
                }
                None => {
                    m.idle_time += 1;
                    m.status = MachineStatus::Idle;
                }
            }
        }
        self.tick += 1;
        let (now, unit) = (self.tick, self.topology.time_unit);
        for o in &mut self.queue {
            o.waited += 1;
        }
        let before = self.queue.len();
        let mut late_wait = 0;
        self.queue.retain(|o| {
            let late = o.is_late(now, unit);
            if late {
                late_wait += o.waited;
            }
            !late
        });
        self.failed += (before - self.queue.len()) as u64;
        self.waited_closed += late_wait;
        for m in &mut self.machines {
            let before = m.input.len();
            m.input.retain(|o| !o.is_late(now, unit));
            self.failed += (before - m.input.len()) as u64;
            if m.processing.as_ref().is_some_and(|o| o.is_late(now, unit)) {
                m.processing = None;
                self.failed += 1;
            }
        }
        self.generate(rng);
    }

    fn mean_utilization(&self) -> f64 {
        let def = self.scenario.utilization;
        self.machines.iter().map(|m| m.utilization(def)).sum::<f64>() / self.machines.len() as f64
    }
}

impl Environment for JssEnv {
    fn actions(&self) -> &ActionSet {
        &self.actions
    }

    fn reset(&mut self, rng: &mut StreamRng) {
        self.clear();
        let n = self.machines.len();
        for i in sample(rng, n, self.noise.status_machines) {
            self.status_noisy[i] = true;
        }
        for i in sample(rng, n, self.noise.working_time_machines) {
            self.time_noisy[i] = true;
        }
        self.generate(rng);
    }

    fn observe(&mut self, rng: &mut StreamRng) -> ObservationSchema {
        let mut s = self.ground_truth();
        self.apply_noise(&mut s, rng);
        s
    }

    fn step(&mut self, action: usize, rng: &mut StreamRng) -> Result<StepOutcome, RlError> {
        if action >= self.machines.len() {
            return Err(RlError::ActionOutOfRange { index: action, count: self.machines.len() });
        }
        let mut infeasible = false;
        if !self.queue.is_empty() {
            if self.machines[action].is_full() {
                infeasible = true;
                self.infeasible += 1;
            } else {
                let o = self.queue.pop_front().expect("queue is not empty");
                self.waited_closed += o.waited;
                self.machines[action].input.push_back(o);
            }
        }
        self.breakdown = false;
        self.decisions_left -= 1;
        if self.decisions_left == 0 {
            self.advance(rng);
            self.decisions_left = self.scenario.load.orders_per_step();
        }
        Ok(StepOutcome {
            reward: if infeasible { 0.0 } else { self.mean_utilization() },
            done: self.tick >= self.scenario.steps as u64,
        })
    }

    /// One bit per machine: free capacity and not failed. A missing capacity
    /// reading counts as full, a missing status as not failed.
    fn state_key(&self, schema: &ObservationSchema) -> StateKey {
        self.machines
            .iter()
            .map(|m| {
                let name = m.name();
                let free = schema.value(&name, "hasRemainingCapacity").and_then(Value::as_sym) == Some("Free");
                let failed = schema.value(&name, "hasStatus").and_then(Value::as_sym) == Some("Failure");
                KeyPart::Bucket(usize::from(free && !failed))
            })
            .collect()
    }

    fn unforeseen_event(&self) -> bool {
        self.breakdown
    }

    fn metrics(&self) -> BTreeMap<String, f64> {
        self.jss_metrics().to_map()
    }
}
