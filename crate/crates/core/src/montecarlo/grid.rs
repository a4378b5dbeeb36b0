use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::spectrum::OpticalSpectrum;
use crate::units::PICOSECOND;

/// Uniform sampling of one periodic realization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationGrid {
    dt: f64,
    n_samples: usize,
}

impl SimulationGrid {
    pub fn new(dt: f64, n_samples: usize) -> Result<Self> {
        ensure_finite("dt", dt)?;
        if dt <= 0.0 {
            return Err(Error::invalid("dt", "must be positive"));
        }
        if n_samples < 64 || !n_samples.is_power_of_two() {
            return Err(Error::invalid("n_samples", format!("{n_samples} is not a power of two ≥ 64")));
        }
        Ok(Self { dt, n_samples })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn sample_rate(&self) -> f64 {
        1.0 / self.dt
    }

    pub fn duration(&self) -> f64 {
        self.n_samples as f64 * self.dt
    }

    /// Bin spacing of the full record.
    pub fn df(&self) -> f64 {
        1.0 / self.duration()
    }

    /// Frequency of FFT bin `k` (negative frequencies in the upper half).
    pub fn frequency(&self, k: usize) -> f64 {
        let n = self.n_samples as i64;
        let k = k as i64;
        let signed = if k < n / 2 { k } else { k - n };
        signed as f64 * self.df()
    }

    /// Nearest multiple of `step` to `f`, never zero for `f > 0`.
    pub fn snap_to(f: f64, step: f64) -> f64 {
        let k = (f / step).round().max(if f > 0.0 { 1.0 } else { 0.0 });
        k * step
    }

    /// Checks that the grid resolves the source and a tone at `f_m`
    /// carrying harmonics up to `order`.
    pub fn check(&self, spectrum: &OpticalSpectrum, f_m: f64, order: i32) -> Result<()> {
        let b = spectrum.bandwidth();
        let fs = self.sample_rate();
        if fs < 4.0 * (b + 2.0 * f_m) {
            return Err(Error::SamplingViolation(format!(
                "sample rate {fs:e} Hz below 4·(B + 2f_m) = {:e} Hz",
                4.0 * (b + 2.0 * f_m)
            )));
        }
        let edge = spectrum.max_abs_frequency() + order as f64 * f_m;
        if edge >= 0.5 * fs {
            return Err(Error::SamplingViolation(format!(
                "modulated field reaches {edge:e} Hz, beyond Nyquist {:e} Hz",
                0.5 * fs
            )));
        }
        if f_m > 0.0 && self.duration() < 32.0 / f_m {
            return Err(Error::SamplingViolation(format!(
                "record of {:e} s holds fewer than 32 periods of {f_m:e} Hz",
                self.duration()
            )));
        }
        if spectrum.bandwidth() < 16.0 * self.df() {
            return Err(Error::SamplingViolation("source spectrum spans fewer than 16 bins".into()));
        }
        Ok(())
    }
}

/// 0.25 ps steps, 2²⁰ samples.
impl Default for SimulationGrid {
    fn default() -> Self {
        Self { dt: 0.25 * PICOSECOND, n_samples: 1 << 20 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_resolves_nominal_source() {
        let g = SimulationGrid::default();
        assert!((g.sample_rate() - 4e12).abs() < 1.0);
        let s = OpticalSpectrum::rectangular(1.0, 4e11, 1.934e14).unwrap();
        g.check(&s, 10e9, 1).unwrap();
        let wide = OpticalSpectrum::rectangular(1.0, 8e11, 1.934e14).unwrap();
        g.check(&wide, 10e9, 1).unwrap();
    }

    #[test]
    fn nyquist_violation() {
        let g = SimulationGrid::new(1e-12, 1 << 12).unwrap();
        let s = OpticalSpectrum::rectangular(1.0, 4e11, 1.934e14).unwrap();
        assert!(matches!(g.check(&s, 10e9, 1), Err(Error::SamplingViolation(_))));
    }

    #[test]
    fn bad_sizes() {
        assert!(SimulationGrid::new(1e-12, 1000).is_err());
        assert!(SimulationGrid::new(0.0, 1024).is_err());
    }

    #[test]
    fn frequencies_and_snap() {
        let g = SimulationGrid::new(1e-12, 1024).unwrap();
        assert_eq!(g.frequency(1), g.df());
        assert_eq!(g.frequency(1023), -g.df());
        assert_eq!(SimulationGrid::snap_to(10.3, 1.0), 10.0);
        assert_eq!(SimulationGrid::snap_to(0.2, 1.0), 1.0);
        assert_eq!(SimulationGrid::snap_to(0.0, 1.0), 0.0);
    }
}
