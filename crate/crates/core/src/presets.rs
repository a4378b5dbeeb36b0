//! The nominal operating point used throughout the tests and the CLI
//! examples: 1550 nm, −989 ps/nm of fibre, 79.4 ps interferometer delay.

use crate::analytic::LinkConfig;
use crate::error::Result;
use crate::geometry::{delay_for_center, phi_from_dispersion, DispersionSpec, InterferometerSpec};
use crate::modulation::SchemeConfig;
use crate::spectrum::OpticalSpectrum;
use crate::units::{wavelength_span_to_bandwidth, wavelength_to_frequency, NANOMETRE, PICOSECOND, PS_PER_NM};

pub const NOMINAL_WAVELENGTH: f64 = 1550.0 * NANOMETRE;
pub const NOMINAL_DISPERSION: f64 = -989.0 * PS_PER_NM;
pub const NOMINAL_DELAY: f64 = 79.4 * PICOSECOND;
pub const NOMINAL_SSB_GAMMA: f64 = 0.39;
pub const NOMINAL_PM_GAMMA: f64 = 0.41;

pub fn nominal_carrier() -> f64 {
    wavelength_to_frequency(NOMINAL_WAVELENGTH)
}

pub fn nominal_phi() -> f64 {
    phi_from_dispersion(NOMINAL_DISPERSION, NOMINAL_WAVELENGTH).expect("nominal dispersion is valid")
}

/// Optical bandwidth [Hz] of a span of `nm` nanometres at 1550 nm.
pub fn bandwidth_from_nm(nm: f64) -> f64 {
    wavelength_span_to_bandwidth(NOMINAL_WAVELENGTH, nm * NANOMETRE)
}

/// Flat source of `bandwidth_nm`, unit PSD, nominal fibre, balanced arms.
pub fn link_with_delay(scheme: SchemeConfig, bandwidth_nm: f64, delay: f64) -> Result<LinkConfig> {
    let f0 = nominal_carrier();
    LinkConfig::new(
        OpticalSpectrum::rectangular(1.0, bandwidth_from_nm(bandwidth_nm), f0)?,
        InterferometerSpec::balanced(delay, f0)?,
        DispersionSpec::from_parameter(NOMINAL_DISPERSION, NOMINAL_WAVELENGTH)?,
        scheme,
    )
}

/// Nominal link with the 79.4 ps delay (passband near 10 GHz).
pub fn nominal_link(scheme: SchemeConfig, bandwidth_nm: f64) -> Result<LinkConfig> {
    link_with_delay(scheme, bandwidth_nm, NOMINAL_DELAY)
}

/// Nominal link with the delay moved so the passband sits at `f_c`.
pub fn tuned_link(scheme: SchemeConfig, bandwidth_nm: f64, f_c: f64) -> Result<LinkConfig> {
    link_with_delay(scheme, bandwidth_nm, delay_for_center(f_c, nominal_phi())?)
}

pub fn nominal_ssb(bandwidth_nm: f64) -> LinkConfig {
    nominal_link(SchemeConfig::ssb(NOMINAL_SSB_GAMMA), bandwidth_nm).expect("nominal link is valid")
}

pub fn nominal_pm(bandwidth_nm: f64) -> LinkConfig {
    nominal_link(SchemeConfig::pm(NOMINAL_PM_GAMMA), bandwidth_nm).expect("nominal link is valid")
}
