use std::collections::BTreeMap;

/// Comfort interval in degrees, lower bound below upper.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn midpoint(&self) -> f64 {
        (self.lower + self.upper) / 2.0
    }

    /// Distance from `t` to the interval, zero inside it.
    pub fn deviation(&self, t: f64) -> f64 {
        if t < self.lower {
            self.lower - t
        } else if t > self.upper {
            t - self.upper
        } else {
            0.0
        }
    }
}

/// Share of the trace spent outside the interval, with each reading
/// standing for one equal observation period.
pub fn atsor(trace: &[f64], interval: Interval) -> f64 {
    if trace.is_empty() {
        return 0.0;
    }
    trace.iter().filter(|&&t| interval.deviation(t) > 0.0).count() as f64 / trace.len() as f64
}

/// Mean squared distance from the interval midpoint.
pub fn mse(trace: &[f64], interval: Interval) -> f64 {
    if trace.is_empty() {
        return 0.0;
    }
    let mid = interval.midpoint();
    trace.iter().map(|t| (t - mid).powi(2)).sum::<f64>() / trace.len() as f64
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HscMetrics {
    pub atsor: f64,
    pub mse: f64,
    pub total_reward: f64,
    pub energy_kwh: f64,
    /// Outside readings flagged Noisy.
    pub noisy_readings: u64,
}

impl HscMetrics {
    pub fn to_map(&self) -> BTreeMap<String, f64> {
        [
            ("atsor", self.atsor),
            ("mse", self.mse),
            ("total_reward", self.total_reward),
            ("energy_kwh", self.energy_kwh),
            ("noisy_readings", self.noisy_readings as f64),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_owned(), v))
        .collect()
    }
}
