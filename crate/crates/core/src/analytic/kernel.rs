use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use super::LinkConfig;
use crate::error::Result;
use crate::math::{cos_cycles, frac_cycles};
use crate::spectrum::OpticalSpectrum;

/// Interferometer seen by a source whose two arms share one modulation:
/// `E0(t) + k·e^{-j2πf0d}·E0(t − d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fringe {
    pub d: f64,
    pub kappa: Complex64,
    pub k: Complex64,
}

impl Fringe {
    /// `(weight, lag)` triples with `H(x) = Σ w·R0(x − lag)`.
    pub fn taps(&self) -> [(Complex64, f64); 3] {
        let w0 = Complex64::new(1.0 + self.k.norm_sqr(), 0.0);
        let w1 = self.k * self.kappa;
        [(w0, 0.0), (w1, self.d), (w1.conj(), -self.d)]
    }

    /// `H(x)`, the field autocorrelation after the interferometer.
    pub fn h(&self, spectrum: &OpticalSpectrum, x: f64) -> Complex64 {
        self.taps().iter().map(|&(w, t)| w * spectrum.autocorrelation(x - t)).sum()
    }

    /// Product form `[(1+|k|²)² + 2|k|²cos(2πfd)]·S0(f)`, exact only when the
    /// delayed cross kernels vanish.
    pub fn s_h_product(&self, spectrum: &OpticalSpectrum, f: f64) -> f64 {
        let k2 = self.k.norm_sqr();
        let a = 1.0 + k2;
        (a * a + 2.0 * k2 * cos_cycles(f, self.d)) * spectrum.intensity_autoconv(f)
    }

    /// `S_H(f) = F[|H(u)|²](f)` including every cross kernel.
    pub fn s_h_exact(&self, spectrum: &OpticalSpectrum, f: f64) -> f64 {
        let taps = self.taps();
        let mut acc = Complex64::new(0.0, 0.0);
        for &(wj, tj) in &taps {
            let phase = Complex64::from_polar(1.0, -TAU * frac_cycles(f, tj));
            for &(wl, tl) in &taps {
                acc += wj * wl * phase * spectrum.cross_kernel(f, tj + tl);
            }
        }
        acc.re
    }
}

/// `H(x)` for a shared-modulator link.
pub fn h_kernel(cfg: &LinkConfig, x: f64) -> Result<Complex64> {
    Ok(cfg.fringe()?.h(&cfg.spectrum, x))
}

/// Interferometer-fringed intensity autoconvolution in the product form.
pub fn s_h(cfg: &LinkConfig, f: f64) -> Result<f64> {
    Ok(cfg.fringe()?.s_h_product(&cfg.spectrum, f))
}

/// Interferometer-fringed intensity autoconvolution, exact.
pub fn s_h_exact(cfg: &LinkConfig, f: f64) -> Result<f64> {
    Ok(cfg.fringe()?.s_h_exact(&cfg.spectrum, f))
}
