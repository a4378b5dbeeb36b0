//! Baseband optical power spectral densities of the incoherent source.
//!
//! A spectrum is either the ideal rectangular slice cut by the optical filter
//! or a tabulated, linearly interpolated PSD that is zero outside its grid.
//! All spectra live at baseband; the optical carrier is carried alongside for
//! the interferometer phase.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{ensure_finite, Error, Result};
use crate::math::{integrate_panels, sinc};

/// Minimum number of tabulated samples across the support.
pub const MIN_TABULATED_POINTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SpectrumShape {
    /// `G(f) = n0` for `|f| ≤ bandwidth/2`, else 0.
    Rectangular { n0: f64, bandwidth: f64 },
    /// Uniform grid `start + i·step`, linear interpolation, zero outside.
    Tabulated { start: f64, step: f64, values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpticalSpectrum {
    shape: SpectrumShape,
    carrier_f0: f64,
}

impl OpticalSpectrum {
    pub fn rectangular(n0: f64, bandwidth: f64, carrier_f0: f64) -> Result<Self> {
        ensure_finite("n0", n0)?;
        ensure_finite("bandwidth", bandwidth)?;
        ensure_finite("carrier_f0", carrier_f0)?;
        if n0 <= 0.0 {
            return Err(Error::invalid("n0", "PSD magnitude must be positive"));
        }
        if bandwidth <= 0.0 {
            return Err(Error::invalid("bandwidth", "optical bandwidth must be positive"));
        }
        Ok(Self { shape: SpectrumShape::Rectangular { n0, bandwidth }, carrier_f0 })
    }

    /// Tabulated spectrum on an explicit, uniformly spaced frequency grid.
    pub fn tabulated(grid: &[f64], values: Vec<f64>, carrier_f0: f64) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::invalid(
                "values",
                format!("{} values for {} grid points", values.len(), grid.len()),
            ));
        }
        if grid.len() < 2 {
            return Err(Error::invalid("grid", "needs at least two points"));
        }
        let step = (grid[grid.len() - 1] - grid[0]) / (grid.len() - 1) as f64;
        for (i, w) in grid.windows(2).enumerate() {
            let s = w[1] - w[0];
            if s <= 0.0 {
                return Err(Error::invalid("grid", format!("not strictly increasing at index {i}")));
            }
            if (s - step).abs() > 1e-9 * step {
                return Err(Error::invalid("grid", format!("non-uniform spacing at index {i}")));
            }
        }
        Self::tabulated_uniform(grid[0], step, values, carrier_f0)
    }

    pub fn tabulated_uniform(start: f64, step: f64, values: Vec<f64>, carrier_f0: f64) -> Result<Self> {
        ensure_finite("start", start)?;
        ensure_finite("step", step)?;
        ensure_finite("carrier_f0", carrier_f0)?;
        if step <= 0.0 {
            return Err(Error::invalid("step", "grid spacing must be positive"));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::invalid("values", "PSD samples must be finite and nonnegative"));
        }
        let first = values.iter().position(|&v| v > 0.0);
        let last = values.iter().rposition(|&v| v > 0.0);
        let occupied = match (first, last) {
            (Some(a), Some(b)) => b - a + 1,
            _ => return Err(Error::invalid("values", "total power must be positive")),
        };
        if occupied < MIN_TABULATED_POINTS || values.len() < MIN_TABULATED_POINTS {
            return Err(Error::invalid(
                "grid",
                format!("at least {MIN_TABULATED_POINTS} points across the support required, got {occupied}"),
            ));
        }
        Ok(Self { shape: SpectrumShape::Tabulated { start, step, values }, carrier_f0 })
    }

    /// Samples an existing spectrum on `points` uniform points spanning its support.
    pub fn tabulate(&self, points: usize) -> Result<Self> {
        let (lo, hi) = self.support();
        let step = (hi - lo) / (points.max(2) - 1) as f64;
        let values = (0..points).map(|i| self.psd(lo + i as f64 * step)).collect();
        Self::tabulated_uniform(lo, step, values, self.carrier_f0)
    }

    pub fn shape(&self) -> &SpectrumShape {
        &self.shape
    }

    pub fn carrier_f0(&self) -> f64 {
        self.carrier_f0
    }

    /// Baseband PSD `G(f)` [W/Hz].
    pub fn psd(&self, f: f64) -> f64 {
        match &self.shape {
            SpectrumShape::Rectangular { n0, bandwidth } => {
                if f.abs() <= 0.5 * bandwidth {
                    *n0
                } else {
                    0.0
                }
            }
            SpectrumShape::Tabulated { start, step, values } => {
                let x = (f - start) / step;
                let n = values.len();
                if x < 0.0 || x > (n - 1) as f64 {
                    return 0.0;
                }
                let i = (x.floor() as usize).min(n - 2);
                let t = x - i as f64;
                values[i] * (1.0 - t) + values[i + 1] * t
            }
        }
    }

    /// Closed interval outside which `G` vanishes.
    pub fn support(&self) -> (f64, f64) {
        match &self.shape {
            SpectrumShape::Rectangular { bandwidth, .. } => (-0.5 * bandwidth, 0.5 * bandwidth),
            SpectrumShape::Tabulated { start, step, values } => {
                (*start, start + step * (values.len() - 1) as f64)
            }
        }
    }

    /// Width of the support [Hz]; `B` for the rectangular model.
    pub fn bandwidth(&self) -> f64 {
        let (lo, hi) = self.support();
        hi - lo
    }

    /// Largest |f| inside the support.
    pub fn max_abs_frequency(&self) -> f64 {
        let (lo, hi) = self.support();
        lo.abs().max(hi.abs())
    }

    pub fn peak(&self) -> f64 {
        match &self.shape {
            SpectrumShape::Rectangular { n0, .. } => *n0,
            SpectrumShape::Tabulated { values, .. } => values.iter().cloned().fold(0.0, f64::max),
        }
    }

    /// `∫G(f)df` [W].
    pub fn total_power(&self) -> f64 {
        match &self.shape {
            SpectrumShape::Rectangular { n0, bandwidth } => n0 * bandwidth,
            SpectrumShape::Tabulated { step, values, .. } => {
                // trapezoid is exact for the piecewise-linear interpolant
                let inner: f64 = values.iter().sum();
                step * (inner - 0.5 * (values[0] + values[values.len() - 1]))
            }
        }
    }

    /// `α·G(f)`.
    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::invalid("alpha", "scale must be positive and finite"));
        }
        let shape = match &self.shape {
            SpectrumShape::Rectangular { n0, bandwidth } => {
                SpectrumShape::Rectangular { n0: n0 * alpha, bandwidth: *bandwidth }
            }
            SpectrumShape::Tabulated { start, step, values } => SpectrumShape::Tabulated {
                start: *start,
                step: *step,
                values: values.iter().map(|v| v * alpha).collect(),
            },
        };
        Ok(Self { shape, carrier_f0: self.carrier_f0 })
    }

    /// Unit-peak copy of the spectrum and the peak it was divided by.
    pub fn normalized(&self) -> (Self, f64) {
        let peak = self.peak();
        let shape = match &self.shape {
            SpectrumShape::Rectangular { bandwidth, .. } => {
                SpectrumShape::Rectangular { n0: 1.0, bandwidth: *bandwidth }
            }
            SpectrumShape::Tabulated { start, step, values } => SpectrumShape::Tabulated {
                start: *start,
                step: *step,
                values: values.iter().map(|v| v / peak).collect(),
            },
        };
        (Self { shape, carrier_f0: self.carrier_f0 }, peak)
    }

    /// Field autocorrelation `R0(lag) = ∫G(f)e^{j2πf·lag}df`.
    pub fn autocorrelation(&self, lag: f64) -> Complex64 {
        match &self.shape {
            SpectrumShape::Rectangular { n0, bandwidth } => {
                Complex64::new(n0 * bandwidth * sinc(PI * bandwidth * lag), 0.0)
            }
            SpectrumShape::Tabulated { .. } => self.integrate_single(0.0, lag.abs(), |nu| {
                Complex64::from_polar(1.0, 2.0 * PI * nu * lag)
            }),
        }
    }

    /// Intensity autoconvolution `S0(f) = ∫G(ν+f)G(ν)dν`.
    pub fn intensity_autoconv(&self, f: f64) -> f64 {
        match &self.shape {
            SpectrumShape::Rectangular { n0, bandwidth } => {
                if f.abs() <= *bandwidth {
                    n0 * n0 * (bandwidth - f.abs())
                } else {
                    0.0
                }
            }
            SpectrumShape::Tabulated { .. } => self.cross_kernel(f, 0.0).re,
        }
    }

    /// Phase-weighted spectral correlation `K(f, τ) = ∫G(ν+f)G(ν)e^{-j2πτν}dν`.
    ///
    /// Every transform of a product of two shifted autocorrelations reduces to
    /// this kernel: `F_u[R0(u-α)R0*(u+β)](f) = e^{-j2πfα} K(f, α+β)`.
    pub fn cross_kernel(&self, f: f64, tau: f64) -> Complex64 {
        match &self.shape {
            SpectrumShape::Rectangular { n0, bandwidth } => {
                let half = 0.5 * bandwidth;
                let lo = (-half).max(-half - f);
                let hi = half.min(half - f);
                if hi <= lo {
                    return Complex64::new(0.0, 0.0);
                }
                let w = hi - lo;
                Complex64::from_polar(
                    n0 * n0 * w * sinc(PI * tau * w),
                    -PI * tau * (hi + lo),
                )
            }
            SpectrumShape::Tabulated { .. } => {
                self.integrate_pair(f, 0.0, tau.abs(), |nu| Complex64::from_polar(1.0, -2.0 * PI * tau * nu))
            }
        }
    }

    /// `∫G(ν+shift)·h(ν)dν` by composite Gauss–Legendre quadrature.
    ///
    /// `max_lag` bounds the oscillation rate of `h` (cycles per Hz); panels
    /// are sized to a quarter cycle of it.
    pub fn integrate_single<F>(&self, shift: f64, max_lag: f64, h: F) -> Complex64
    where
        F: Fn(f64) -> Complex64,
    {
        let (lo, hi) = self.support();
        let mut breaks = self.breakpoints(shift, lo - shift, hi - shift);
        breaks.dedup();
        let mut total = Complex64::new(0.0, 0.0);
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            let panels = panel_count(b - a, max_lag);
            total += integrate_panels(a, b, panels, &|nu| h(nu) * self.psd(nu + shift));
        }
        total
    }

    /// `∫G(ν+shift_a)G(ν+shift_b)·h(ν)dν` by composite Gauss–Legendre quadrature.
    pub fn integrate_pair<F>(&self, shift_a: f64, shift_b: f64, max_lag: f64, h: F) -> Complex64
    where
        F: Fn(f64) -> Complex64,
    {
        let (lo, hi) = self.support();
        let a0 = (lo - shift_a).max(lo - shift_b);
        let a1 = (hi - shift_a).min(hi - shift_b);
        if a1 <= a0 {
            return Complex64::new(0.0, 0.0);
        }
        let mut breaks = self.breakpoints(shift_a, a0, a1);
        breaks.extend(self.breakpoints(shift_b, a0, a1));
        breaks.sort_by(|x, y| x.partial_cmp(y).unwrap());
        breaks.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * (x.abs() + y.abs()).max(1.0));
        let mut total = Complex64::new(0.0, 0.0);
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            let panels = panel_count(b - a, max_lag);
            total += integrate_panels(a, b, panels, &|nu| {
                h(nu) * (self.psd(nu + shift_a) * self.psd(nu + shift_b))
            });
        }
        total
    }

    /// Points in [a, b] where `G(ν + shift)` is not smooth, plus both ends.
    fn breakpoints(&self, shift: f64, a: f64, b: f64) -> Vec<f64> {
        let mut out = vec![a];
        if let SpectrumShape::Tabulated { start, step, values } = &self.shape {
            let first = ((a + shift - start) / step).ceil().max(0.0) as usize;
            let last = (((b + shift - start) / step).floor() as i64).min(values.len() as i64 - 1);
            for i in first as i64..=last {
                let x = start + i as f64 * step - shift;
                if x > a && x < b {
                    out.push(x);
                }
            }
        }
        out.push(b);
        out
    }
}

fn panel_count(width: f64, max_lag: f64) -> usize {
    (4.0 * width * max_lag).ceil() as usize + 1
}
