use std::collections::VecDeque;
use std::fmt;

use crate::scenario::{DueClass, UtilizationDef};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Priority {
    Low,
    Medium,
    High,
}

impl Priority {
    pub fn as_str(self) -> &'static str {
        match self {
            Priority::Low => "Low",
            Priority::Medium => "Medium",
            Priority::High => "High",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Order {
    pub id: u64,
    pub source: usize,
    /// Step at which the order entered the queue.
    pub arrival: u64,
    pub due: DueClass,
    pub priority: Priority,
    /// Steps of processing the order needs.
    pub processing: u32,
    /// Steps of processing received so far.
    pub processed: u32,
    /// Steps spent queued.
    pub waited: u64,
}

impl Order {
    pub fn name(&self) -> String {
        format!("o{}", self.id)
    }

    /// Whether the order is past its due date at step `now`.
    pub fn is_late(&self, now: u64, time_unit: u64) -> bool {
        now - self.arrival > self.due.time_units() / time_unit
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MachineStatus {
    Working,
    Idle,
    Failure,
}

impl MachineStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            MachineStatus::Working => "Working",
            MachineStatus::Idle => "Idle",
            MachineStatus::Failure => "Failure",
        }
    }
}

impl fmt::Display for MachineStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FailureClass {
    Low,
    Medium,
    High,
}

impl FailureClass {
    pub fn as_str(self) -> &'static str {
        match self {
            FailureClass::Low => "Low",
            FailureClass::Medium => "Medium",
            FailureClass::High => "High",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Machine {
    /// Zero-based index; the instance name is `m{index + 1}`.
    pub index: usize,
    pub group: usize,
    pub capacity: usize,
    pub failure_class: FailureClass,
    pub input: VecDeque<Order>,
    pub processing: Option<Order>,
    /// Finished orders with the step they finished.
    pub output: VecDeque<(Order, u64)>,
    pub status: MachineStatus,
    pub working_time: u64,
    pub failure_time: u64,
    pub idle_time: u64,
    /// Step of the last breakdown, -1 before the first.
    pub last_broken_start: i64,
    /// Step processing last started or resumed, -1 before the first.
    pub last_process_start: i64,
    pub repair_left: u32,
}

impl Machine {
    pub fn new(index: usize, group: usize, capacity: usize, failure_class: FailureClass) -> Self {
        Machine {
            index,
            group,
            capacity,
            failure_class,
            input: VecDeque::new(),
            processing: None,
            output: VecDeque::new(),
            status: MachineStatus::Idle,
            working_time: 0,
            failure_time: 0,
            idle_time: 0,
            last_broken_start: -1,
            last_process_start: -1,
            repair_left: 0,
        }
    }

    pub fn name(&self) -> String {
        format!("m{}", self.index + 1)
    }

    /// Orders held across the input, processing and output buffers.
    pub fn load(&self) -> usize {
        self.input.len() + usize::from(self.processing.is_some()) + self.output.len()
    }

    pub fn is_full(&self) -> bool {
        self.load() >= self.capacity
    }

    pub fn elapsed(&self) -> u64 {
        self.working_time + self.failure_time + self.idle_time
    }

    pub fn utilization(&self, def: UtilizationDef) -> f64 {
        utilization(self.working_time, self.failure_time, self.idle_time, def)
    }

    /// Processing already received by the order in process plus the full
    /// processing time of the input and output heads.
    pub fn working_estimate(&self) -> f64 {
        let current = self.processing.as_ref().map_or(0, |o| o.processed);
        let input = self.input.front().map_or(0, |o| o.processing);
        let output = self.output.front().map_or(0, |(o, _)| o.processing);
        f64::from(current + input + output)
    }
}

/// Utilization from working, failure and idle steps.
pub fn utilization(working: u64, failure: u64, idle: u64, def: UtilizationDef) -> f64 {
    let w = working as f64;
    match def {
        UtilizationDef::WorkToFailure => w / failure.max(1) as f64,
        UtilizationDef::Elapsed => {
            let total = working + failure + idle;
            if total == 0 {
                0.0
            } else {
                w / total as f64
            }
        }
    }
}
