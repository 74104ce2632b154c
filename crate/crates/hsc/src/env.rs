use std::collections::{BTreeMap, VecDeque};
use std::sync::{Arc, OnceLock};

use chrono::{Duration, NaiveDateTime};
use ontodem_action::ActionSet;
use ontodem_ontology::{ObservationSchema, Reading, TemporalContext, Value};
use ontodem_rl::{discretize_state, Environment, Feature, RlError, StateDescriptor, StateKey, StepOutcome, StreamRng};
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::HscError;
use crate::metrics::{atsor, mse, HscMetrics};
use crate::scenario::HscScenario;
use crate::series::{parse_temperature_csv, SeriesSummary, TempSeries};
use crate::temporal::{temporal_class, PartOfDay};

/// Heating power levels in watts, one per action.
pub const POWER_LEVELS: [f64; 12] =
    [0.0, 1000.0, 2000.0, 3000.0, 4000.0, 5000.0, 6000.0, 7000.0, 8000.0, 9000.0, 10000.0, 11000.0];

const SERIES_CSV: &str = include_str!("../data/outdoor_temperature.csv");

/// The bundled hourly outdoor temperature series.
pub fn default_series() -> Arc<TempSeries> {
    static SERIES: OnceLock<Arc<TempSeries>> = OnceLock::new();
    SERIES
        .get_or_init(|| Arc::new(parse_temperature_csv(SERIES_CSV.as_bytes()).expect("bundled series parses")))
        .clone()
}

/// Heating control of one building against a recorded outdoor temperature.
/// Each step picks a heating power for the next `dt` seconds.
#[derive(Clone, Debug)]
pub struct HscEnv {
    scenario: HscScenario,
    series: Arc<TempSeries>,
    range: SeriesSummary,
    actions: ActionSet,
    descriptor: StateDescriptor,
    time: NaiveDateTime,
    inside: f64,
    power: f64,
    price: f64,
    step: usize,
    window: VecDeque<f64>,
    flagged: bool,
    trace: Vec<f64>,
    total_reward: f64,
    energy_kwh: f64,
    noisy_readings: u64,
}

impl HscEnv {
    pub fn new(scenario: HscScenario) -> Result<Self, HscError> {
        Self::with_series(scenario, default_series())
    }

    pub fn with_series(scenario: HscScenario, series: Arc<TempSeries>) -> Result<Self, HscError> {
        scenario.validate()?;
        let span = (series.end() - series.start()).num_seconds() as f64;
        if span < scenario.steps as f64 * scenario.thermal.dt {
            return Err(HscError::InvalidScenario("series is shorter than one episode".into()));
        }
        let actions = ActionSet::from_ids(POWER_LEVELS.iter().map(|p| format!("heat_{p}W")))?;
        let descriptor = StateDescriptor::new(vec![
            Feature::numeric(
                "house",
                "hasInsideTemperature",
                vec![10.0, 16.0, 18.0, 19.0, 20.0, 21.0, 22.0, 23.0, 24.0, 26.0, 35.0],
            ),
            Feature::numeric("outside", "hasTemperature", vec![-10.0, 0.0, 3.0, 6.0, 9.0, 12.0, 25.0]),
        ]);
        Ok(HscEnv {
            range: series.summary(),
            time: series.start(),
            inside: scenario.initial_inside,
            scenario,
            series,
            actions,
            descriptor,
            power: 0.0,
            price: 0.0,
            step: 0,
            window: VecDeque::new(),
            flagged: false,
            trace: Vec::new(),
            total_reward: 0.0,
            energy_kwh: 0.0,
            noisy_readings: 0,
        })
    }

    pub fn scenario(&self) -> &HscScenario {
        &self.scenario
    }

    pub fn time(&self) -> NaiveDateTime {
        self.time
    }

    pub fn inside(&self) -> f64 {
        self.inside
    }

    /// True outside temperature now.
    pub fn outside(&self) -> f64 {
        self.series.at(self.time)
    }

    /// Inside temperatures after each step of the episode.
    pub fn trace(&self) -> &[f64] {
        &self.trace
    }

    pub fn descriptor(&self) -> &StateDescriptor {
        &self.descriptor
    }

    pub fn hsc_metrics(&self) -> HscMetrics {
        let comfort = self.scenario.comfort();
        HscMetrics {
            atsor: atsor(&self.trace, comfort),
            mse: mse(&self.trace, comfort),
            total_reward: self.total_reward,
            energy_kwh: self.energy_kwh,
            noisy_readings: self.noisy_readings,
        }
    }

    /// Noise-free observation of the current state.
    pub fn ground_truth(&self) -> ObservationSchema {
        self.schema(Reading::clean(Value::Num(self.outside())))
    }

    fn schema(&self, outside: Reading) -> ObservationSchema {
        let num = |v: f64| Reading::clean(Value::Num(v));
        let mut s = ObservationSchema::new(self.step as u64);
        s.add_instance("house", "Building");
        s.put("house", "hasInsideTemperature", num(self.inside));
        s.add_instance("outside", "OutdoorTemperature");
        s.put("outside", "hasTemperature", outside);
        let ahead = self.time + self.step_duration();
        s.put("outside", "hasExpectedTemperature", num(self.series.at(ahead)));
        s.add_instance("grid", "EnergyPrice");
        s.put("grid", "hasExpectedPrice", num(self.price));
        s.add_instance("heater", "HeatingSystem");
        s.put("heater", "hasHeatingPower", num(self.power));
        s
    }

    fn step_duration(&self) -> Duration {
        Duration::milliseconds((self.scenario.thermal.dt * 1000.0).round() as i64)
    }

    fn draw_price(&mut self, rng: &mut StreamRng) {
        let p = self.scenario.price;
        let mean = match temporal_class(self.time).1 {
            PartOfDay::Morning => p.means[0],
            PartOfDay::Afternoon => p.means[1],
            PartOfDay::Evening => p.means[2],
            PartOfDay::Night => p.means[3],
        };
        let draw = if p.sd > 0.0 { Normal::new(mean, p.sd).expect("sd checked positive").sample(rng) } else { mean };
        self.price = draw.max(p.floor);
    }

    /// Whether `reading` lies beyond three standard deviations of the
    /// recent clean readings. Off when the scenario has no noise.
    fn is_outlier(&self, reading: f64) -> bool {
        let n = self.window.len();
        if self.scenario.noise_probability() == 0.0 || n < 8 {
            return false;
        }
        let mean = self.window.iter().sum::<f64>() / n as f64;
        let sd = (self.window.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
        sd > 0.0 && (reading - mean).abs() > 3.0 * sd
    }
}

impl Environment for HscEnv {
    fn actions(&self) -> &ActionSet {
        &self.actions
    }

    fn reset(&mut self, rng: &mut StreamRng) {
        let dt = self.scenario.thermal.dt;
        let span = (self.series.end() - self.series.start()).num_seconds() as f64;
        let slots = ((span - self.scenario.steps as f64 * dt) / dt).floor() as i64;
        let offset = rng.random_range(0..=slots.max(0));
        self.time = self.series.start() + Duration::milliseconds((offset as f64 * dt * 1000.0).round() as i64);
        self.inside = self.scenario.initial_inside;
        self.power = 0.0;
        self.step = 0;
        self.window.clear();
        self.flagged = false;
        self.trace.clear();
        self.total_reward = 0.0;
        self.energy_kwh = 0.0;
        self.noisy_readings = 0;
        self.draw_price(rng);
    }

    fn observe(&mut self, rng: &mut StreamRng) -> ObservationSchema {
        let truth = self.outside();
        let p = self.scenario.noise_probability();
        let corrupted = p > 0.0 && rng.random_bool(p);
        let reading = if corrupted { rng.random_range(self.range.min..=self.range.max) } else { truth };
        self.flagged = corrupted || self.is_outlier(reading);
        let outside = if self.flagged {
            self.noisy_readings += 1;
            Reading::noisy(Value::Num(reading))
        } else {
            if self.scenario.detector_window > 0 {
                if self.window.len() == self.scenario.detector_window {
                    self.window.pop_front();
                }
                self.window.push_back(reading);
            }
            Reading::clean(Value::Num(reading))
        };
        self.schema(outside)
    }

    fn step(&mut self, action: usize, rng: &mut StreamRng) -> Result<StepOutcome, RlError> {
        let Some(&power) = POWER_LEVELS.get(action) else {
            return Err(RlError::ActionOutOfRange { index: action, count: POWER_LEVELS.len() });
        };
        let model = self.scenario.thermal;
        let mut next = model.next(self.inside, self.outside(), power);
        if model.sigma > 0.0 {
            next += Normal::new(0.0, model.sigma).expect("sigma checked positive").sample(rng);
        }
        let kwh = power * model.dt / 3.6e6;
        let deviation = next - self.scenario.comfort().midpoint();
        let reward = -deviation * deviation - self.price * kwh;
        self.inside = next;
        self.power = power;
        self.time += self.step_duration();
        self.step += 1;
        self.trace.push(next);
        self.total_reward += reward;
        self.energy_kwh += kwh;
        self.draw_price(rng);
        Ok(StepOutcome { reward, done: self.step >= self.scenario.steps })
    }

    fn state_key(&self, schema: &ObservationSchema) -> StateKey {
        discretize_state(schema, &self.descriptor).key
    }

    fn class_key(&self) -> String {
        self.scenario.classification.key(self.time)
    }

    fn temporal_context(&self) -> Option<TemporalContext> {
        Some(TemporalContext::new(self.class_key()))
    }

    fn unforeseen_event(&self) -> bool {
        self.flagged
    }

    fn metrics(&self) -> BTreeMap<String, f64> {
        self.hsc_metrics().to_map()
    }
}
