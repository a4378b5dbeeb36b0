use serde::{Deserialize, Serialize};

use super::report::SnrReport;
use crate::error::{ensure_finite, Error, Result};
use crate::math::{frac_cycles, sin_cycles};
use crate::units::linear_to_db;

/// Cycle fraction below which an offset counts as a loop-mode frequency.
const PEAK_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OeoPoint {
    pub f_offset: f64,
    pub s_rf: f64,
    pub s_rf_db: f64,
    /// Offset is an integer multiple of the loop mode spacing `1/τ`.
    pub is_peak: bool,
}

fn check(delta: f64, tau: f64) -> Result<()> {
    ensure_finite("delta", delta)?;
    ensure_finite("tau", tau)?;
    if tau <= 0.0 {
        return Err(Error::invalid("tau", "loop delay must be positive"));
    }
    if !(delta > 0.0 && delta < tau) {
        return Err(Error::OutsideDomain(format!("need 0 < δ < τ, got δ = {delta:e} s, τ = {tau:e} s")));
    }
    Ok(())
}

/// Oscillator phase-noise spectrum `δ / [2 − δ/τ − 2√(1−δ/τ)·cos(2πf′τ)]`.
///
/// The denominator is evaluated as `(1 − √(1−x))² + 4√(1−x)·sin²(πf′τ)`,
/// which stays accurate when `x = δ/τ` is tiny and the offset sits on a mode.
pub fn oeo_phase_noise(delta: f64, tau: f64, f_offset: f64) -> Result<f64> {
    check(delta, tau)?;
    let x = delta / tau;
    let r = (1.0 - x).sqrt();
    let a = x / (1.0 + r);
    let s = sin_cycles(0.5, frac_cycles(f_offset, tau));
    Ok(delta / (a * a + 4.0 * r * s * s))
}

pub fn oeo_phase_noise_curve(delta: f64, tau: f64, f_grid: &[f64]) -> Result<Vec<OeoPoint>> {
    check(delta, tau)?;
    f_grid
        .iter()
        .map(|&f| {
            let s = oeo_phase_noise(delta, tau, f)?;
            Ok(OeoPoint {
                f_offset: f,
                s_rf: s,
                s_rf_db: linear_to_db(s),
                is_peak: frac_cycles(f, tau).abs() <= PEAK_TOLERANCE,
            })
        })
        .collect()
}

/// Input noise-to-signal ratio per Hz from a link SNR report.
pub fn delta_from_snr(report: &SnrReport) -> f64 {
    1.0 / report.snr_linear
}
