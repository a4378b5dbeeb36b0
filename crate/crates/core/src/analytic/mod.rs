//! Closed-form and semi-analytic evaluation of the detected intensity
//! spectrum: signal lines, noise continuum, SNR and noise figure.

mod general;
mod kernel;
mod oeo;
mod phase;
mod report;
mod shared;
mod spectral;
mod sweep;

pub use general::{general_intensity_psd, GeneralLink, Line, SpectralDecomposition};
pub use kernel::{h_kernel, s_h, s_h_exact, Fringe};
pub use oeo::{delta_from_snr, oeo_phase_noise, oeo_phase_noise_curve, OeoPoint};
pub use phase::{noise_power_pm_at, pm_flat_kernel_continuum, signal_power_pm, snr_pm};
pub use report::{noise_figure, NoiseBreakdown, SnrReport};
pub use shared::{
    noise_power_ssb_at, noise_psd_shared, passband_shape, signal_power_dsb, signal_power_ssb, snr_shared,
    snr_ssb, SharedLink,
};
pub use spectral::{freq_domain_noise_psd, freq_domain_signal_power, FrequencyDomainLink};
pub use sweep::{frequency_response_sweep, signal_power, snr_at_center, ResponsePoint};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{center_frequency, DispersionSpec, InterferometerSpec};
use crate::modulation::{build_scheme, ArmModulations, SchemeConfig, Topology};
use crate::spectrum::OpticalSpectrum;

/// Which evaluator backs a signal or noise figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Model {
    /// Full interferometer kernel, no cross-term or flat-spectrum shortcuts.
    #[default]
    Exact,
    /// The simplified closed forms with cross terms dropped.
    Approx,
}

/// Everything that determines the detected intensity spectrum except the RF tone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkConfig {
    pub spectrum: OpticalSpectrum,
    pub interferometer: InterferometerSpec,
    pub dispersion: DispersionSpec,
    pub scheme: SchemeConfig,
}

impl LinkConfig {
    pub fn new(
        spectrum: OpticalSpectrum,
        interferometer: InterferometerSpec,
        dispersion: DispersionSpec,
        scheme: SchemeConfig,
    ) -> Result<Self> {
        let cfg = Self { spectrum, interferometer, dispersion, scheme };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.scheme.validate()?;
        let a = self.spectrum.carrier_f0();
        let b = self.interferometer.carrier_f0;
        if (a - b).abs() > 1e-12 * a.abs().max(b.abs()) {
            return Err(Error::invalid(
                "carrier_f0",
                format!("spectrum carrier {a} Hz differs from interferometer carrier {b} Hz"),
            ));
        }
        if !self.dispersion.phi.is_finite() {
            return Err(Error::invalid("phi", "must be finite"));
        }
        Ok(())
    }

    pub fn phi(&self) -> f64 {
        self.dispersion.phi
    }

    pub fn delay(&self) -> f64 {
        self.interferometer.delay_d
    }

    /// Passband centre `d/(2πφ)`; fails unless `d·φ > 0`.
    pub fn center_frequency(&self) -> Result<f64> {
        let fc = center_frequency(self.delay(), self.phi())?;
        if fc <= 0.0 {
            return Err(Error::OutsideDomain("zero delay places the passband at DC".into()));
        }
        Ok(fc)
    }

    /// `e^{-j2πf0·d}`.
    pub fn kappa(&self) -> Complex64 {
        self.interferometer.carrier_phase()
    }

    /// Arm modulations at `f_m` with the splitter ratio folded into the second arm.
    pub fn arms(&self, f_m: f64) -> Result<ArmModulations> {
        let mut arms = build_scheme(&self.scheme, f_m)?;
        let k = self.interferometer.arm_ratio_k;
        arms.m2 = arms.m2.scaled(k);
        arms.k *= k;
        Ok(arms)
    }

    /// Interferometer weights when both arms carry the same modulation.
    pub fn fringe(&self) -> Result<Fringe> {
        let arms = self.arms(0.0)?;
        if arms.topology != Topology::Shared {
            return Err(Error::WrongScheme {
                expected: "shared-modulator",
                found: self.scheme.kind.name().to_string(),
            });
        }
        Ok(Fringe { d: self.delay(), kappa: self.kappa(), k: arms.k })
    }

    pub fn with_spectrum(&self, spectrum: OpticalSpectrum) -> Result<Self> {
        Self::new(spectrum, self.interferometer, self.dispersion, self.scheme.clone())
    }

    pub fn with_delay(&self, delay_d: f64) -> Result<Self> {
        let mut i = self.interferometer;
        i.delay_d = delay_d;
        Self::new(self.spectrum.clone(), i, self.dispersion, self.scheme.clone())
    }

    pub fn with_scheme(&self, scheme: SchemeConfig) -> Result<Self> {
        Self::new(self.spectrum.clone(), self.interferometer, self.dispersion, scheme)
    }

    /// Copy with a unit-peak spectrum, and the peak it was divided by.
    pub fn normalized(&self) -> (Self, f64) {
        let (spectrum, peak) = self.spectrum.normalized();
        (Self { spectrum, ..self.clone() }, peak)
    }
}

pub(crate) fn require_kind(cfg: &LinkConfig, ok: bool, expected: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::WrongScheme { expected, found: cfg.scheme.kind.name().to_string() })
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    pub use crate::presets::{nominal_phi as phi, nominal_pm, nominal_ssb};

    pub fn link(scheme: SchemeConfig, b_nm: f64, delay: f64) -> LinkConfig {
        crate::presets::link_with_delay(scheme, b_nm, delay).unwrap()
    }

    pub fn tuned(scheme: SchemeConfig, b_nm: f64, fc: f64) -> LinkConfig {
        crate::presets::tuned_link(scheme, b_nm, fc).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn carrier_mismatch_rejected() {
        let cfg = nominal_ssb(3.2);
        let s = OpticalSpectrum::rectangular(1.0, 4e11, 1.9e14).unwrap();
        assert!(cfg.with_spectrum(s).is_err());
    }

    #[test]
    fn fringe_requires_shared() {
        assert!(nominal_ssb(3.2).fringe().is_ok());
        assert!(matches!(nominal_pm(3.2).fringe(), Err(Error::WrongScheme { .. })));
    }

    #[test]
    fn passband_sign_errors() {
        let cfg = nominal_ssb(3.2).with_delay(-79.4e-12).unwrap();
        assert!(cfg.center_frequency().unwrap_err().is_domain_error());
    }
}
