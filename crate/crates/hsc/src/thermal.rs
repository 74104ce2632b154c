use serde::Deserialize;

use crate::error::HscError;

/// First-order lumped model of a heated building.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThermalModel {
    /// Heat capacity, J per degree.
    pub capacity: f64,
    /// Heat transmission to the outside, W per degree.
    pub transmission: f64,
    /// Step length in seconds.
    pub dt: f64,
    /// Standard deviation of the per-step process noise, degrees.
    pub sigma: f64,
}

impl Default for ThermalModel {
    fn default() -> Self {
        ThermalModel { capacity: 1.1e7, transmission: 220.0, dt: 900.0, sigma: 0.05 }
    }
}

impl ThermalModel {
    pub fn validate(&self) -> Result<(), HscError> {
        let ok = self.capacity > 0.0 && self.transmission >= 0.0 && self.dt > 0.0 && self.sigma >= 0.0;
        let stable = self.dt * self.transmission / self.capacity < 1.0;
        if ok && stable {
            Ok(())
        } else {
            Err(HscError::InvalidScenario(format!("thermal model {self:?}")))
        }
    }

    /// Noise-free next inside temperature under heating power `power` watts.
    pub fn next(&self, inside: f64, outside: f64, power: f64) -> f64 {
        inside + self.dt / self.capacity * (power - self.transmission * (inside - outside))
    }

    /// Inside temperature the model settles at.
    pub fn fixed_point(&self, outside: f64, power: f64) -> f64 {
        outside + power / self.transmission
    }

    /// Continuous-time response after `steps` steps from `inside`, with
    /// constant outside temperature and power.
    pub fn analytic(&self, inside: f64, outside: f64, power: f64, steps: usize) -> f64 {
        let target = self.fixed_point(outside, power);
        let rate = self.transmission / self.capacity;
        target + (inside - target) * (-rate * self.dt * steps as f64).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilibrium_and_cooling() {
        let m = ThermalModel::default();
        let p = m.transmission * (21.0 - 3.0);
        assert!((m.next(21.0, 3.0, p) - 21.0).abs() < 1e-12);
        assert!(m.next(21.0, 3.0, 0.0) < 21.0);
        assert_eq!(m.fixed_point(3.0, p), 21.0);
        assert!(ThermalModel { capacity: 0.0, ..m }.validate().is_err());
    }
}
