use std::path::Path;

use serde::Deserialize;

use crate::error::JssError;

/// Orders generated per time step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Load {
    Light,
    Heavy,
}

impl Load {
    pub fn orders_per_step(self) -> usize {
        match self {
            Load::Light => 3,
            Load::Heavy => 6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Deserialize)]
pub enum DueClass {
    Low,
    Medium,
    High,
}

impl DueClass {
    /// Due date in time units.
    pub fn time_units(self) -> u64 {
        match self {
            DueClass::Low => 1000,
            DueClass::Medium => 3000,
            DueClass::High => 5000,
        }
    }
}

/// Share of low, medium and high due dates among new orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DueMix {
    /// 5% low, 80% medium, 15% high.
    High,
    /// 25% low, 70% medium, 5% high.
    Low,
}

impl DueMix {
    pub fn shares(self) -> [(DueClass, f64); 3] {
        match self {
            DueMix::High => [(DueClass::Low, 0.05), (DueClass::Medium, 0.80), (DueClass::High, 0.15)],
            DueMix::Low => [(DueClass::Low, 0.25), (DueClass::Medium, 0.70), (DueClass::High, 0.05)],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseLevel {
    Low,
    High,
}

/// Sensor noise, as one kind with its parameters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "params")]
pub enum NoiseSpec {
    #[default]
    None,
    /// A full machine is reported free with probability `p`.
    Capacity { p: f64 },
    /// On `machines` randomly chosen machines, Failure reads as Working.
    Status { machines: usize },
    /// On `machines` randomly chosen machines, working time is off by a
    /// uniform integer in `[-max, max]`, floored at zero.
    WorkingTime { machines: usize, max: u32 },
    /// Combined noise of a scenario level: low is capacity 0.5% plus
    /// working time on two machines, high is capacity 1% plus status on
    /// four machines.
    Level { level: NoiseLevel },
}

/// Flattened noise parameters.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NoiseParams {
    pub capacity_p: f64,
    pub status_machines: usize,
    pub working_time_machines: usize,
    pub working_time_max: u32,
}

impl NoiseSpec {
    pub fn params(self) -> NoiseParams {
        let none = NoiseParams::default();
        match self {
            NoiseSpec::None => none,
            NoiseSpec::Capacity { p } => NoiseParams { capacity_p: p, ..none },
            NoiseSpec::Status { machines } => NoiseParams { status_machines: machines, ..none },
            NoiseSpec::WorkingTime { machines, max } => {
                NoiseParams { working_time_machines: machines, working_time_max: max, ..none }
            }
            NoiseSpec::Level { level: NoiseLevel::Low } => {
                NoiseParams { capacity_p: 0.005, working_time_machines: 2, working_time_max: 4, ..none }
            }
            NoiseSpec::Level { level: NoiseLevel::High } => {
                NoiseParams { capacity_p: 0.01, status_machines: 4, ..none }
            }
        }
    }
}

/// How machine utilization is computed from working, failure and idle time.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UtilizationDef {
    /// `W / max(F, 1)`.
    WorkToFailure,
    /// `W / (W + F + idle)`.
    #[default]
    Elapsed,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JssScenario {
    #[serde(default)]
    pub name: String,
    pub load: Load,
    pub due_mix: DueMix,
    #[serde(default)]
    pub noise: NoiseSpec,
    pub seed: u64,
    pub episodes: usize,
    /// Time steps per episode.
    pub steps: usize,
    #[serde(default)]
    pub utilization: UtilizationDef,
}

impl JssScenario {
    pub fn parse(text: &str) -> Result<Self, JssError> {
        let s: JssScenario = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, JssError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<(), JssError> {
        let bad = |m: String| Err(JssError::InvalidScenario(m));
        let n = self.noise.params();
        if !(0.0..=1.0).contains(&n.capacity_p) {
            return bad(format!("capacity noise probability {}", n.capacity_p));
        }
        if n.status_machines > 8 || n.working_time_machines > 8 {
            return bad("noise targets more machines than exist".into());
        }
        if self.steps == 0 {
            return bad("steps must be positive".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixes_sum_to_one() {
        for mix in [DueMix::High, DueMix::Low] {
            let total: f64 = mix.shares().iter().map(|(_, s)| s).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn parses_scenario_json() {
        let s = JssScenario::parse(
            r#"{"load": "heavy", "due_mix": "low", "noise": {"kind": "capacity", "params": {"p": 0.01}},
                "seed": 4, "episodes": 10, "steps": 100}"#,
        )
        .unwrap();
        assert_eq!(s.load.orders_per_step(), 6);
        assert_eq!(s.noise.params().capacity_p, 0.01);
        assert_eq!(s.utilization, UtilizationDef::Elapsed);
        let level = JssScenario::parse(
            r#"{"load": "light", "due_mix": "high", "noise": {"kind": "level", "params": {"level": "high"}},
                "seed": 1, "episodes": 1, "steps": 5}"#,
        )
        .unwrap();
        assert_eq!(level.noise.params().status_machines, 4);
        assert!(JssScenario::parse(r#"{"load": "light", "due_mix": "high", "seed": 1, "episodes": 1, "steps": 0}"#)
            .is_err());
    }
}
