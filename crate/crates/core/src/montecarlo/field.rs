use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::sync::Arc;

use super::grid::SimulationGrid;
use crate::analytic::LinkConfig;
use crate::error::Result;
use crate::math::frac_cycles;
use crate::modulation::HarmonicModulation;
use crate::spectrum::OpticalSpectrum;

/// Random stream for realization `r` under root seed `root`.
pub fn realization_rng(root: u64, r: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(root);
    rng.set_stream(r);
    rng
}

/// Bin amplitudes `z_k·√(G(f_k)·df)` in FFT order, with `z_k` unit-power
/// circular Gaussian. Empty bins draw nothing.
pub fn synthesize_spectrum<R: Rng>(spectrum: &OpticalSpectrum, grid: &SimulationGrid, rng: &mut R) -> Vec<Complex64> {
    let df = grid.df();
    (0..grid.n_samples())
        .map(|k| {
            let g = spectrum.psd(grid.frequency(k));
            if g > 0.0 {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im) * (FRAC_1_SQRT_2 * (g * df).sqrt())
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect()
}

/// One realization of the source envelope `E0(t)` on `grid`.
pub fn synthesize_field(spectrum: &OpticalSpectrum, grid: &SimulationGrid, seed: u64) -> Result<Vec<Complex64>> {
    grid.check(spectrum, 0.0, 0)?;
    let mut x = synthesize_spectrum(spectrum, grid, &mut realization_rng(seed, 0));
    FftPlanner::new().plan_fft_inverse(x.len()).process(&mut x);
    Ok(x)
}

/// `T(f) = e^{-jφ(2πf)²/2}` on the grid bins.
fn dispersion_response(grid: &SimulationGrid, phi: f64) -> Vec<Complex64> {
    (0..grid.n_samples())
        .map(|k| {
            let f = grid.frequency(k);
            // φ(2πf)²/2 = 2π · πφf²
            let c = PI * phi * f;
            Complex64::from_polar(1.0, -TAU * frac_cycles(c, f))
        })
        .collect()
}

/// Multiplies the spectrum of `field` by the all-pass dispersion response.
pub fn apply_dispersion(field: &mut [Complex64], grid: &SimulationGrid, phi: f64) {
    let mut planner = FftPlanner::new();
    let n = field.len();
    planner.plan_fft_forward(n).process(field);
    let scale = 1.0 / n as f64;
    for (x, t) in field.iter_mut().zip(dispersion_response(grid, phi)) {
        *x *= t * scale;
    }
    planner.plan_fft_inverse(n).process(field);
}

fn sampled(m: &HarmonicModulation, grid: &SimulationGrid) -> Option<Vec<Complex64>> {
    if m.is_constant() {
        return None;
    }
    let dt = grid.dt();
    let terms: Vec<_> = m.terms().collect();
    Some(
        (0..grid.n_samples())
            .map(|i| {
                let t = i as f64 * dt;
                terms
                    .iter()
                    .map(|&(h, c)| c * Complex64::from_polar(1.0, TAU * frac_cycles(h as f64 * m.f_m(), t)))
                    .sum()
            })
            .collect(),
    )
}

/// Precomputed chain from source spectrum to detected intensity for one
/// link and tone. Shared read-only across realizations.
pub struct Propagator {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    delay: Vec<Complex64>,
    transfer: Option<Vec<Complex64>>,
    m1: (Complex64, Option<Vec<Complex64>>),
    m2: (Complex64, Option<Vec<Complex64>>),
}

impl Propagator {
    pub fn new(cfg: &LinkConfig, grid: &SimulationGrid, f_m: f64) -> Result<Self> {
        let arms = cfg.arms(f_m)?;
        grid.check(&cfg.spectrum, f_m, arms.m1.order().max(arms.m2.order()))?;
        let n = grid.n_samples();
        let mut planner = FftPlanner::new();
        let kappa = cfg.kappa();
        let d = cfg.delay();
        let delay = (0..n)
            .map(|k| kappa * Complex64::from_polar(1.0, -TAU * frac_cycles(grid.frequency(k), d)))
            .collect();
        let transfer = (cfg.phi() != 0.0).then(|| {
            let scale = 1.0 / n as f64;
            dispersion_response(grid, cfg.phi()).into_iter().map(|t| t * scale).collect()
        });
        let arm = |m: &HarmonicModulation| (m.coeff(0), sampled(m, grid));
        Ok(Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            delay,
            transfer,
            m1: arm(&arms.m1),
            m2: arm(&arms.m2),
        })
    }

    /// Detected intensity for source bin amplitudes `spec`.
    pub fn intensity_from_spectrum(&self, spec: &[Complex64]) -> Vec<f64> {
        assert_eq!(spec.len(), self.n, "spectrum length must match the grid");
        let mut direct = spec.to_vec();
        let mut delayed: Vec<Complex64> = spec.iter().zip(&self.delay).map(|(a, b)| a * b).collect();
        self.inverse.process(&mut direct);
        self.inverse.process(&mut delayed);
        let coeff = |arm: &(Complex64, Option<Vec<Complex64>>), i: usize| match &arm.1 {
            Some(v) => v[i],
            None => arm.0,
        };
        for (i, (a, b)) in direct.iter_mut().zip(&delayed).enumerate() {
            *a = coeff(&self.m1, i) * *a + coeff(&self.m2, i) * b;
        }
        if let Some(t) = &self.transfer {
            self.forward.process(&mut direct);
            for (x, t) in direct.iter_mut().zip(t) {
                *x *= t;
            }
            self.inverse.process(&mut direct);
        }
        direct.into_iter().map(|e| e.norm_sqr()).collect()
    }

    /// Detected intensity for a sampled source envelope.
    pub fn intensity(&self, field: &[Complex64]) -> Vec<f64> {
        let mut spec = field.to_vec();
        self.forward.process(&mut spec);
        let scale = 1.0 / self.n as f64;
        spec.iter_mut().for_each(|x| *x *= scale);
        self.intensity_from_spectrum(&spec)
    }
}

/// Pushes a sampled source envelope through interferometer, modulator and
/// dispersion, returning the detected intensity.
pub fn propagate(field: &[Complex64], cfg: &LinkConfig, grid: &SimulationGrid, f_m: f64) -> Result<Vec<f64>> {
    Ok(Propagator::new(cfg, grid, f_m)?.intensity(field))
}
