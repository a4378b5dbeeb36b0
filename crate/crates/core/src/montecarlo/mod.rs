//! Stochastic-field oracle: sampled circular Gaussian light pushed through
//! the same interferometer, modulator and dispersion chain, with spectra
//! and SNR estimated from the detected intensity.

mod ensemble;
mod field;
mod grid;
mod welch;

pub use ensemble::{
    estimate_line, estimate_passband, estimate_snr, estimate_spectrum, LineEstimate, McEstimate, McSettings,
    PassbandPoint, ProbeEstimate, Stat, MIN_REALIZATIONS,
};
pub use field::{
    apply_dispersion, propagate, realization_rng, synthesize_field, synthesize_spectrum, Propagator,
};
pub use grid::SimulationGrid;
pub use welch::{estimate_psd, welch_psd, Periodogram, WelchConfig, Window, FLOOR_REACH, LINE_HALF_WIDTH};
