//! Dispersion and interferometer geometry: the delay/dispersion pair that
//! places the passband, and the optical fringe spacing it implies.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{ensure_finite, Error, Result};
use crate::units::SPEED_OF_LIGHT;

/// How a [`DispersionSpec`] was specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DispersionSource {
    Direct,
    /// Dispersion parameter `D` [s/m] at wavelength `lambda` [m].
    Parameter { d_param: f64, lambda: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionSpec {
    /// Accumulated group-delay dispersion [s²], signed.
    pub phi: f64,
    /// Bulk group delay [s]. A pure time shift; no PSD depends on it.
    pub group_delay: Option<f64>,
    pub source: DispersionSource,
}

impl DispersionSpec {
    pub fn from_phi(phi: f64) -> Result<Self> {
        ensure_finite("phi", phi)?;
        Ok(Self { phi, group_delay: None, source: DispersionSource::Direct })
    }

    pub fn from_parameter(d_param: f64, lambda: f64) -> Result<Self> {
        let phi = phi_from_dispersion(d_param, lambda)?;
        Ok(Self { phi, group_delay: None, source: DispersionSource::Parameter { d_param, lambda } })
    }

    pub fn with_group_delay(mut self, group_delay: f64) -> Self {
        self.group_delay = Some(group_delay);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferometerSpec {
    /// Differential arm delay [s].
    pub delay_d: f64,
    /// Complex amplitude of the delayed arm relative to the modulated arm.
    pub arm_ratio_k: Complex64,
    /// Optical carrier [Hz].
    pub carrier_f0: f64,
}

impl InterferometerSpec {
    pub fn new(delay_d: f64, arm_ratio_k: Complex64, carrier_f0: f64) -> Result<Self> {
        ensure_finite("delay_d", delay_d)?;
        ensure_finite("carrier_f0", carrier_f0)?;
        if !(arm_ratio_k.re.is_finite() && arm_ratio_k.im.is_finite()) {
            return Err(Error::invalid("arm_ratio_k", "must be finite"));
        }
        if arm_ratio_k.norm() > 1.0 + 1e-12 {
            return Err(Error::invalid(
                "arm_ratio_k",
                format!("|k| = {} exceeds 1 for a passive splitter", arm_ratio_k.norm()),
            ));
        }
        Ok(Self { delay_d, arm_ratio_k, carrier_f0 })
    }

    /// Balanced arms (`k = 1`).
    pub fn balanced(delay_d: f64, carrier_f0: f64) -> Result<Self> {
        Self::new(delay_d, Complex64::new(1.0, 0.0), carrier_f0)
    }

    /// Carrier phase factor `e^{-j2πf0·d}` picked up by the delayed arm.
    pub fn carrier_phase(&self) -> Complex64 {
        let cycles = crate::math::frac_cycles(self.carrier_f0, self.delay_d);
        Complex64::from_polar(1.0, -TAU * cycles)
    }
}

/// `φ = −D·λ²/(2πc)`.
pub fn phi_from_dispersion(d_param: f64, lambda: f64) -> Result<f64> {
    ensure_finite("dispersion", d_param)?;
    ensure_finite("wavelength", lambda)?;
    if lambda <= 0.0 {
        return Err(Error::invalid("wavelength", "must be positive"));
    }
    Ok(-d_param * lambda * lambda / (TAU * SPEED_OF_LIGHT))
}

/// Passband centre `f_c = d/(2πφ)`.
pub fn center_frequency(delay_d: f64, phi: f64) -> Result<f64> {
    ensure_finite("delay_d", delay_d)?;
    ensure_finite("phi", phi)?;
    if phi == 0.0 {
        return Err(Error::NoPassband);
    }
    if delay_d * phi < 0.0 {
        return Err(Error::PassbandSign { product: delay_d * phi });
    }
    Ok(delay_d / (TAU * phi))
}

/// Delay that centres the passband on `f_c`: `d = 2πφ·f_c`.
pub fn delay_for_center(f_c: f64, phi: f64) -> Result<f64> {
    ensure_finite("center_frequency", f_c)?;
    ensure_finite("phi", phi)?;
    if phi == 0.0 {
        return Err(Error::NoPassband);
    }
    if f_c < 0.0 {
        return Err(Error::invalid("center_frequency", "must be nonnegative"));
    }
    Ok(TAU * phi * f_c)
}

/// Optical fringe period `λ²/(c·d)` of the interferometer [m].
pub fn optical_fsr(lambda: f64, delay_d: f64) -> Result<f64> {
    ensure_finite("wavelength", lambda)?;
    ensure_finite("delay_d", delay_d)?;
    if lambda <= 0.0 {
        return Err(Error::invalid("wavelength", "must be positive"));
    }
    if delay_d == 0.0 {
        return Err(Error::invalid("delay_d", "zero delay has no fringes"));
    }
    Ok(lambda * lambda / (SPEED_OF_LIGHT * delay_d.abs()))
}
