//! Simulation and analysis of single-bandpass microwave photonic filters fed
//! by an incoherent broadband optical source through a two-arm
//! interferometer and a dispersive medium.
//!
//! The [`analytic`] module evaluates signal lines, noise continuum, SNR and
//! noise figure in closed or semi-closed form; [`montecarlo`] pushes sampled
//! Gaussian light through the same chain and estimates the same quantities
//! empirically.

pub mod analytic;
pub mod error;
pub mod geometry;
pub mod math;
pub mod modulation;
pub mod montecarlo;
pub mod presets;
pub mod spectrum;
pub mod units;

pub use error::{Error, Result};
pub use geometry::{
    center_frequency, delay_for_center, optical_fsr, phi_from_dispersion, DispersionSource, DispersionSpec,
    InterferometerSpec,
};
pub use modulation::{
    build_scheme, csr_from_gamma, gamma_from_csr, ArmModulations, HarmonicModulation, SchemeConfig, SchemeKind,
    Topology,
};
pub use spectrum::{OpticalSpectrum, SpectrumShape};

pub use analytic::{LinkConfig, Model, SnrReport, SpectralDecomposition};
