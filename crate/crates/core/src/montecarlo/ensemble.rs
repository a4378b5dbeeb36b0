use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use super::field::{realization_rng, synthesize_spectrum, Propagator};
use super::grid::SimulationGrid;
use super::welch::{welch_psd, WelchConfig};
use crate::analytic::LinkConfig;
use crate::error::{Error, Result};
use crate::math::CompensatedSum;
use crate::units::linear_to_db;

/// Fewest realizations behind any reported estimate.
pub const MIN_REALIZATIONS: usize = 8;

/// Ensemble mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub standard_error: f64,
}

impl Stat {
    /// Sample mean and `std/√n`, summed in the given order.
    pub fn from_samples(x: &[f64]) -> Self {
        let n = x.len() as f64;
        let mean = x.iter().copied().collect::<CompensatedSum>().value() / n;
        let ss = x.iter().map(|v| (v - mean).powi(2)).collect::<CompensatedSum>().value();
        let std = if x.len() > 1 { (ss / (n - 1.0)).sqrt() } else { f64::NAN };
        Self { mean, standard_error: std / n.sqrt() }
    }

    pub fn db(&self) -> f64 {
        linear_to_db(self.mean)
    }

    /// First-order standard error of [`Stat::db`].
    pub fn standard_error_db(&self) -> f64 {
        10.0 / std::f64::consts::LN_10 * self.standard_error / self.mean.abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McSettings {
    pub grid: SimulationGrid,
    pub welch: WelchConfig,
    pub n_realizations: usize,
    pub seed: u64,
}

impl McSettings {
    pub fn new(grid: SimulationGrid, n_realizations: usize, seed: u64) -> Result<Self> {
        let s = Self { grid, welch: WelchConfig::for_length(grid.n_samples()), n_realizations, seed };
        s.validate()?;
        Ok(s)
    }

    /// Default grid with `n_realizations` realizations.
    pub fn with_default_grid(n_realizations: usize, seed: u64) -> Result<Self> {
        Self::new(SimulationGrid::default(), n_realizations, seed)
    }

    pub fn with_welch(mut self, welch: WelchConfig) -> Result<Self> {
        self.welch = welch;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_realizations < MIN_REALIZATIONS {
            return Err(Error::InsufficientRealizations { min: MIN_REALIZATIONS, got: self.n_realizations });
        }
        if self.welch.segment_len > self.grid.n_samples() {
            return Err(Error::SegmentTooLong { segment: self.welch.segment_len, len: self.grid.n_samples() });
        }
        Ok(())
    }

    /// Bin spacing of one Welch segment.
    pub fn segment_df(&self) -> f64 {
        1.0 / (self.welch.segment_len as f64 * self.grid.dt())
    }

    /// `f` moved to the nearest Welch bin, where lines are extracted cleanly.
    pub fn snap(&self, f: f64) -> f64 {
        SimulationGrid::snap_to(f, self.segment_df())
    }

    fn run<T, F>(&self, work: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(u64) -> Result<T> + Sync + Send,
    {
        (0..self.n_realizations as u64).into_par_iter().map(work).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeEstimate {
    /// Centre of the Welch bin actually read [Hz].
    pub frequency: f64,
    pub psd: Stat,
}

/// Ensemble estimate of signal, noise and SNR at one tone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    /// Tone frequency after snapping to the analysis grid [Hz].
    pub f_m: f64,
    pub n_realizations: usize,
    /// Both lines at ±f_m.
    pub signal_power: Stat,
    /// Continuum power in 1 Hz at ±f_m.
    pub noise_power: Stat,
    pub snr: Stat,
    pub snr_db_hz: f64,
    pub snr_stderr_db: f64,
    pub probes: Vec<ProbeEstimate>,
}

struct Sample {
    signal: f64,
    noise: f64,
    probes: Vec<f64>,
}

/// Welch-based ensemble estimate at `f_m` (snapped), reading the continuum
/// PSD at `probes` as well.
pub fn estimate_spectrum(cfg: &LinkConfig, settings: &McSettings, f_m: f64, probes: &[f64]) -> Result<McEstimate> {
    settings.validate()?;
    let f_m = settings.snap(f_m);
    let grid = settings.grid;
    let prop = Propagator::new(cfg, &grid, f_m)?;
    let samples = settings.run(|r| {
        let spec = synthesize_spectrum(&cfg.spectrum, &grid, &mut realization_rng(settings.seed, r));
        let intensity = prop.intensity_from_spectrum(&spec);
        let p = welch_psd(&intensity, grid.dt(), &settings.welch)?;
        Ok(Sample {
            signal: p.line_power(f_m) + p.line_power(-f_m),
            noise: 2.0 * p.floor_at(f_m),
            probes: probes.iter().map(|&f| p.value_at(f)).collect(),
        })
    })?;
    let col = |f: &dyn Fn(&Sample) -> f64| Stat::from_samples(&samples.iter().map(f).collect::<Vec<_>>());
    let snr = col(&|s| s.signal / s.noise);
    let probes = probes
        .iter()
        .enumerate()
        .map(|(j, &f)| ProbeEstimate {
            frequency: settings.snap(f),
            psd: col(&|s| s.probes[j]),
        })
        .collect();
    Ok(McEstimate {
        f_m,
        n_realizations: settings.n_realizations,
        signal_power: col(&|s| s.signal),
        noise_power: col(&|s| s.noise),
        snr,
        snr_db_hz: snr.db(),
        snr_stderr_db: snr.standard_error_db(),
        probes,
    })
}

/// SNR at the passband centre on `grid`, default Welch settings.
pub fn estimate_snr(cfg: &LinkConfig, grid: &SimulationGrid, n_realizations: usize, seed: u64) -> Result<McEstimate> {
    let settings = McSettings::new(*grid, n_realizations, seed)?;
    estimate_spectrum(cfg, &settings, cfg.center_frequency()?, &[])
}

/// Coherently averaged line at one tone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineEstimate {
    /// Tone frequency after snapping to the record bin spacing [Hz].
    pub f_m: f64,
    /// Mean complex Fourier coefficient of the intensity at +f_m.
    pub amplitude: Complex64,
    /// Both lines at ±f_m, with the noise bias of the coherent mean removed.
    pub power: Stat,
}

/// Line power at `f_m` from the ensemble-mean Fourier coefficient of the
/// full record, which keeps the deterministic line and averages the noise
/// down as 1/M.
pub fn estimate_line(cfg: &LinkConfig, settings: &McSettings, f_m: f64) -> Result<LineEstimate> {
    settings.validate()?;
    let grid = settings.grid;
    let n = grid.n_samples();
    let k = (f_m / grid.df()).round().max(1.0) as usize;
    let f_m = k as f64 * grid.df();
    let prop = Propagator::new(cfg, &grid, f_m)?;
    let twiddle: Vec<Complex64> = (0..n)
        .map(|i| Complex64::from_polar(1.0 / n as f64, -TAU * ((k * i) % n) as f64 / n as f64))
        .collect();
    let coeffs = settings.run(|r| {
        let spec = synthesize_spectrum(&cfg.spectrum, &grid, &mut realization_rng(settings.seed, r));
        let intensity = prop.intensity_from_spectrum(&spec);
        let mut re = CompensatedSum::default();
        let mut im = CompensatedSum::default();
        for (x, w) in intensity.iter().zip(&twiddle) {
            re.add(x * w.re);
            im.add(x * w.im);
        }
        Ok(Complex64::new(re.value(), im.value()))
    })?;
    let m = coeffs.len() as f64;
    let mean = Complex64::new(
        coeffs.iter().map(|c| c.re).collect::<CompensatedSum>().value() / m,
        coeffs.iter().map(|c| c.im).collect::<CompensatedSum>().value() / m,
    );
    let var = coeffs.iter().map(|c| (c - mean).norm_sqr()).collect::<CompensatedSum>().value() / (m - 1.0);
    let power = 2.0 * (mean.norm_sqr() - var / m);
    let se = 2.0 * mean.norm() * (2.0 * var / m).sqrt();
    Ok(LineEstimate { f_m, amplitude: mean, power: Stat { mean: power, standard_error: se } })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PassbandPoint {
    pub f_m: f64,
    /// `f_m − f_c` after snapping [Hz].
    pub detuning: f64,
    pub power: Stat,
    /// Relative to the strongest point of the sweep.
    pub normalized_db: f64,
}

/// Coherent line power at `f_c + δ` for each detuning δ.
pub fn estimate_passband(cfg: &LinkConfig, settings: &McSettings, detunings: &[f64]) -> Result<Vec<PassbandPoint>> {
    if detunings.is_empty() {
        return Err(Error::invalid("detunings", "no points requested"));
    }
    let fc = cfg.center_frequency()?;
    let mut points = detunings
        .iter()
        .map(|&d| {
            let l = estimate_line(cfg, settings, fc + d)?;
            Ok(PassbandPoint { f_m: l.f_m, detuning: l.f_m - fc, power: l.power, normalized_db: 0.0 })
        })
        .collect::<Result<Vec<_>>>()?;
    let peak = points.iter().map(|p| p.power.mean).fold(f64::MIN, f64::max);
    for p in &mut points {
        p.normalized_db = linear_to_db(p.power.mean / peak);
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::GeneralLink;
    use crate::geometry::{delay_for_center, DispersionSpec, InterferometerSpec};
    use crate::modulation::SchemeConfig;
    use crate::spectrum::OpticalSpectrum;

    const F0: f64 = 1.934e14;

    // 50 GHz source on a 2¹⁶ × 1 ps grid, passband at ~6 GHz
    fn small(scheme: SchemeConfig) -> (LinkConfig, McSettings) {
        let phi = 2e-21;
        let grid = SimulationGrid::new(1e-12, 1 << 16).unwrap();
        let welch = WelchConfig::new(8192, 0.5, crate::montecarlo::Window::Hann).unwrap();
        let settings = McSettings::new(grid, 16, 42).unwrap().with_welch(welch).unwrap();
        let fc = settings.snap(6e9);
        let cfg = LinkConfig::new(
            OpticalSpectrum::rectangular(1.0, 5e10, F0).unwrap(),
            InterferometerSpec::balanced(delay_for_center(fc, phi).unwrap(), F0).unwrap(),
            DispersionSpec::from_phi(phi).unwrap(),
            scheme,
        )
        .unwrap();
        (cfg, settings)
    }

    #[test]
    fn stat_basics() {
        let s = Stat::from_samples(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.standard_error - (5.0f64 / 3.0).sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn too_few_realizations() {
        let grid = SimulationGrid::new(1e-12, 1 << 16).unwrap();
        assert!(matches!(
            McSettings::new(grid, 4, 0),
            Err(Error::InsufficientRealizations { min: 8, got: 4 })
        ));
    }

    #[test]
    fn snr_tracks_analytic_on_small_grid() {
        let (cfg, settings) = small(SchemeConfig::ssb(0.4));
        let est = estimate_spectrum(&cfg, &settings, cfg.center_frequency().unwrap(), &[]).unwrap();
        let g = GeneralLink::new(&cfg, est.f_m).unwrap();
        let want = g.signal_power() / g.noise_at(est.f_m).total();
        let tol = (3.0 * est.snr_stderr_db).max(1.0);
        assert!((est.snr_db_hz - linear_to_db(want)).abs() < tol, "{} vs {}", est.snr_db_hz, linear_to_db(want));
    }

    #[test]
    fn unmodulated_has_no_line() {
        let (cfg, settings) = small(SchemeConfig::unmodulated());
        let est = estimate_spectrum(&cfg, &settings, 6e9, &[]).unwrap();
        let floor_bin = 0.5 * est.noise_power.mean * settings.segment_df();
        assert!(est.signal_power.mean.abs() < 5.0 * floor_bin);
    }

    #[test]
    fn coherent_line_matches_analytic() {
        let (cfg, settings) = small(SchemeConfig::pm(0.4));
        let fc = cfg.center_frequency().unwrap();
        let l = estimate_line(&cfg, &settings, fc).unwrap();
        let want = GeneralLink::new(&cfg, l.f_m).unwrap().signal_power();
        assert!((l.power.mean - want).abs() <= (3.0 * l.power.standard_error).max(0.02 * want));
    }

    #[test]
    fn bit_identical_across_thread_counts() {
        let (cfg, settings) = small(SchemeConfig::ssb(0.4));
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| estimate_spectrum(&cfg, &settings, 6e9, &[1e9, 3e9]).unwrap())
        };
        let a = run(1);
        let b = run(4);
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
        assert_eq!(a.snr_db_hz.to_bits(), b.snr_db_hz.to_bits());
        assert!(a.snr_db_hz.is_finite());
    }
}
