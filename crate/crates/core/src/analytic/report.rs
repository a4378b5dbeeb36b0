use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::units::{linear_to_db, BOLTZMANN, STANDARD_NOISE_TEMPERATURE};

/// Noise power in 1 Hz at ±f, split by where the noise was converted from.
///
/// Each field already counts both sidebands.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseBreakdown {
    /// Source-beat noise already sitting at f.
    pub direct: f64,
    /// Baseband noise moved up by one RF harmonic.
    pub from_baseband: f64,
    /// Noise at f + f_m moved down by one RF harmonic.
    pub from_double: f64,
    /// Conversions by two or more harmonics.
    pub higher_order: f64,
}

impl NoiseBreakdown {
    pub fn total(&self) -> f64 {
        self.direct + self.from_baseband + self.from_double + self.higher_order
    }

    pub(crate) fn add_shift(&mut self, shift: i32, value: f64) {
        match shift {
            0 => self.direct += value,
            1 => self.from_baseband += value,
            -1 => self.from_double += value,
            _ => self.higher_order += value,
        }
    }

    pub(crate) fn scaled(&self, a: f64) -> Self {
        Self {
            direct: self.direct * a,
            from_baseband: self.from_baseband * a,
            from_double: self.from_double * a,
            higher_order: self.higher_order * a,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrReport {
    pub scheme: String,
    /// RF tone frequency the report refers to [Hz].
    pub f_m: f64,
    /// Power of the two lines at ±f_m.
    pub signal_power: f64,
    /// Continuum power in 1 Hz at ±f_m.
    pub noise_psd_at_signal: f64,
    pub breakdown: NoiseBreakdown,
    pub snr_linear: f64,
    pub snr_db_hz: f64,
    /// Ratio of the simplified signal and noise expressions, where they exist.
    pub approx_ratio_db_hz: Option<f64>,
    /// Closed-form SNR in terms of B, γ and the fringe phase, where it exists.
    pub approx_formula_db_hz: Option<f64>,
}

impl SnrReport {
    pub(crate) fn build(
        scheme: &str,
        f_m: f64,
        signal_power: f64,
        breakdown: NoiseBreakdown,
        approx_ratio: Option<f64>,
        approx_formula: Option<f64>,
    ) -> Self {
        let noise = breakdown.total();
        let snr = signal_power / noise;
        Self {
            scheme: scheme.to_string(),
            f_m,
            signal_power,
            noise_psd_at_signal: noise,
            breakdown,
            snr_linear: snr,
            snr_db_hz: linear_to_db(snr),
            approx_ratio_db_hz: approx_ratio.map(linear_to_db),
            approx_formula_db_hz: approx_formula.map(linear_to_db),
        }
    }

    /// Restores absolute power units after evaluation on a unit-peak spectrum.
    pub(crate) fn rescaled(mut self, peak: f64) -> Self {
        let p2 = peak * peak;
        self.signal_power *= p2;
        self.noise_psd_at_signal *= p2;
        self.breakdown = self.breakdown.scaled(p2);
        self
    }
}

/// `NF = 10·lg[(P_in/(k_B·T_s))/SNR]` with `T_s = 290 K` and SNR per Hz.
pub fn noise_figure(p_in: f64, snr_linear: f64) -> Result<f64> {
    ensure_finite("p_in", p_in)?;
    ensure_finite("snr", snr_linear)?;
    if p_in <= 0.0 {
        return Err(Error::invalid("p_in", "RF input power must be positive"));
    }
    if snr_linear <= 0.0 {
        return Err(Error::invalid("snr", "must be positive"));
    }
    Ok(linear_to_db(p_in / (BOLTZMANN * STANDARD_NOISE_TEMPERATURE) / snr_linear))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{db_to_linear, dbm_to_watts};

    #[test]
    fn nf_examples() {
        let nf = noise_figure(dbm_to_watts(6.0), db_to_linear(94.9)).unwrap();
        assert!((nf - 85.075).abs() < 0.01, "{nf}");
        let better = noise_figure(dbm_to_watts(6.0), db_to_linear(104.9)).unwrap();
        assert!((nf - better - 10.0).abs() < 1e-9);
        let doubled = noise_figure(2.0 * dbm_to_watts(6.0), db_to_linear(94.9)).unwrap();
        assert!((doubled - nf - 3.0103).abs() < 1e-4);
        assert!(noise_figure(0.0, 1.0).is_err());
    }

    #[test]
    fn breakdown_total() {
        let mut b = NoiseBreakdown::default();
        for (s, v) in [(0, 1.0), (1, 2.0), (-1, 3.0), (2, 0.5), (-2, 0.25)] {
            b.add_shift(s, v);
        }
        assert_eq!(b.total(), 6.75);
        assert_eq!(b.higher_order, 0.75);
    }
}
