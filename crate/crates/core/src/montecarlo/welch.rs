use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::analytic::{Line, SpectralDecomposition};
use crate::error::{ensure_finite, Error, Result};

/// Bins on each side of a line that belong to it.
pub const LINE_HALF_WIDTH: usize = 2;
/// Outermost bin offset used for the local floor.
pub const FLOOR_REACH: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Window {
    /// Periodic Hann: an on-bin tone occupies exactly three bins.
    #[default]
    Hann,
    Rectangular,
}

impl Window {
    fn weights(self, len: usize) -> Vec<f64> {
        match self {
            Window::Hann => (0..len).map(|i| 0.5 - 0.5 * (TAU * i as f64 / len as f64).cos()).collect(),
            Window::Rectangular => vec![1.0; len],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WelchConfig {
    pub segment_len: usize,
    /// Fraction of a segment shared with the next one, in [0, 1).
    pub overlap: f64,
    pub window: Window,
}

impl WelchConfig {
    pub fn new(segment_len: usize, overlap: f64, window: Window) -> Result<Self> {
        ensure_finite("overlap", overlap)?;
        if !(0.0..1.0).contains(&overlap) {
            return Err(Error::invalid("overlap", "must lie in [0, 1)"));
        }
        if segment_len < 32 {
            return Err(Error::invalid("segment_len", "must be at least 32"));
        }
        Ok(Self { segment_len, overlap, window })
    }

    /// Hann, 50 % overlap, segments of n/32 samples (63 segments).
    pub fn for_length(n: usize) -> Self {
        Self { segment_len: (n / 32).max(32), overlap: 0.5, window: Window::Hann }
    }

    pub fn step(&self) -> usize {
        ((self.segment_len as f64 * (1.0 - self.overlap)).round() as usize).max(1)
    }

    pub fn segments(&self, n: usize) -> usize {
        if self.segment_len > n {
            0
        } else {
            (n - self.segment_len) / self.step() + 1
        }
    }
}

/// Averaged periodogram of a real sequence, two-sided, in FFT bin order.
///
/// Normalized as `dt·|Σ w x|² / Σ w²`: white noise of variance σ² reads σ²·dt
/// and a tone's bins sum to its power once multiplied by `df`.
#[derive(Debug, Clone, PartialEq)]
pub struct Periodogram {
    pub df: f64,
    pub psd: Vec<f64>,
    pub segments: usize,
}

impl Periodogram {
    pub fn len(&self) -> usize {
        self.psd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psd.is_empty()
    }

    fn wrap(&self, k: i64) -> usize {
        k.rem_euclid(self.len() as i64) as usize
    }

    /// Signed index of the bin nearest to `f`.
    pub fn bin(&self, f: f64) -> i64 {
        (f / self.df).round() as i64
    }

    pub fn frequency(&self, k: usize) -> f64 {
        let n = self.len() as i64;
        let k = k as i64;
        (if k < n / 2 { k } else { k - n }) as f64 * self.df
    }

    pub fn value_at(&self, f: f64) -> f64 {
        self.psd[self.wrap(self.bin(f))]
    }

    /// Least-squares `a + c·o²` through the averaged pairs of bins
    /// `o = 3..=12` away on both sides of `f`. Pair averaging removes the
    /// slope; the quadratic term absorbs curvature of the continuum.
    pub fn floor_fit(&self, f: f64) -> (f64, f64) {
        let k = self.bin(f);
        let pts: Vec<(f64, f64)> = (LINE_HALF_WIDTH as i64 + 1..=FLOOR_REACH as i64)
            .map(|o| ((o * o) as f64, 0.5 * (self.psd[self.wrap(k - o)] + self.psd[self.wrap(k + o)])))
            .collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let c = sxy / sxx;
        (my - c * mx, c)
    }

    /// Continuum PSD under a line at `f`, from [`Periodogram::floor_fit`].
    pub fn floor_at(&self, f: f64) -> f64 {
        self.floor_fit(f).0
    }

    /// Power of a line at `f`: ±2 bins minus the fitted floor, times `df`.
    pub fn line_power(&self, f: f64) -> f64 {
        let k = self.bin(f);
        let (a, c) = self.floor_fit(f);
        let w = LINE_HALF_WIDTH as i64;
        (-w..=w).map(|o| self.psd[self.wrap(k + o)] - (a + c * (o * o) as f64)).sum::<f64>() * self.df
    }
}

/// Welch estimate of the PSD of `x` sampled at `dt`.
pub fn welch_psd(x: &[f64], dt: f64, cfg: &WelchConfig) -> Result<Periodogram> {
    let len = cfg.segment_len;
    if len > x.len() {
        return Err(Error::SegmentTooLong { segment: len, len: x.len() });
    }
    let w = cfg.window.weights(len);
    let w2: f64 = w.iter().map(|v| v * v).sum();
    let fft = FftPlanner::new().plan_fft_forward(len);
    let segments = cfg.segments(x.len());
    let mut acc = vec![0.0; len];
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for s in 0..segments {
        let start = s * cfg.step();
        for ((b, &v), &wi) in buf.iter_mut().zip(&x[start..start + len]).zip(&w) {
            *b = Complex64::new(v * wi, 0.0);
        }
        fft.process(&mut buf);
        for (a, b) in acc.iter_mut().zip(&buf) {
            *a += b.norm_sqr();
        }
    }
    let scale = dt / (w2 * segments as f64);
    Ok(Periodogram { df: 1.0 / (len as f64 * dt), psd: acc.into_iter().map(|v| v * scale).collect(), segments })
}

/// Welch PSD split into lines at `line_frequencies` and the continuum,
/// with the line bins replaced by the local floor.
pub fn estimate_psd(
    intensity: &[f64],
    dt: f64,
    cfg: &WelchConfig,
    line_frequencies: &[f64],
) -> Result<SpectralDecomposition> {
    let p = welch_psd(intensity, dt, cfg)?;
    let mut continuum = p.psd.clone();
    let mut lines = Vec::with_capacity(line_frequencies.len());
    for &f in line_frequencies {
        let k = p.bin(f);
        let (a, c) = p.floor_fit(f);
        for o in -(LINE_HALF_WIDTH as i64)..=LINE_HALF_WIDTH as i64 {
            continuum[p.wrap(k + o)] = a + c * (o * o) as f64;
        }
        lines.push(Line { frequency: k as f64 * p.df, power: p.line_power(f) });
    }
    let n = p.len();
    let order: Vec<usize> = (n / 2..n).chain(0..n / 2).collect();
    let frequencies = order.iter().map(|&k| p.frequency(k)).collect();
    let continuum: Vec<f64> = order.iter().map(|&k| continuum[k]).collect();
    let min_raw = continuum.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(SpectralDecomposition { lines, frequencies, continuum, clamped: 0, min_raw })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::field::realization_rng;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn white(n: usize, sigma: f64, seed: u64) -> Vec<f64> {
        let mut rng = realization_rng(seed, 0);
        (0..n).map(|_| sigma * rng.sample::<f64, _>(StandardNormal)).collect()
    }

    #[test]
    fn default_segments() {
        let c = WelchConfig::for_length(1 << 20);
        assert_eq!(c.segment_len, 1 << 15);
        assert_eq!(c.segments(1 << 20), 63);
    }

    #[test]
    fn tone_on_flat_floor() {
        let dt = 1e-3;
        let n = 1 << 16;
        let cfg = WelchConfig::new(1024, 0.5, Window::Hann).unwrap();
        let df = 1.0 / (1024.0 * dt);
        let f = 100.0 * df;
        let amp = 0.3;
        let mut x = white(n, 0.1, 1);
        for (i, v) in x.iter_mut().enumerate() {
            *v += amp * (TAU * f * i as f64 * dt).cos();
        }
        let d = estimate_psd(&x, dt, &cfg, &[f, -f]).unwrap();
        // each side of a real cosine carries A²/4
        for l in &d.lines {
            assert!((l.power / (amp * amp / 4.0) - 1.0).abs() < 0.01, "{}", l.power);
        }
    }

    #[test]
    fn white_noise_level() {
        let dt = 1e-3;
        let sigma = 2.0;
        let x = white(1 << 17, sigma, 2);
        let cfg = WelchConfig::new(1024, 0.5, Window::Hann).unwrap();
        let p = welch_psd(&x, dt, &cfg).unwrap();
        assert!(p.segments >= 64);
        let mean = p.psd.iter().sum::<f64>() / p.len() as f64;
        assert!((mean / (sigma * sigma * dt) - 1.0).abs() < 0.02);
        let rect = welch_psd(&x, dt, &WelchConfig::new(1024, 0.0, Window::Rectangular).unwrap()).unwrap();
        let mean = rect.psd.iter().sum::<f64>() / rect.len() as f64;
        assert!((mean / (sigma * sigma * dt) - 1.0).abs() < 0.02);
    }

    #[test]
    fn real_input_is_symmetric() {
        let x = white(1 << 14, 1.0, 3);
        let p = welch_psd(&x, 1.0, &WelchConfig::for_length(x.len())).unwrap();
        for k in 1..p.len() / 2 {
            let (a, b) = (p.psd[k], p.psd[p.len() - k]);
            assert!((a - b).abs() <= 1e-9 * a.max(b));
        }
    }

    #[test]
    fn curved_floor_is_fitted() {
        let p = Periodogram { df: 1.0, psd: (0..256).map(|k| 5.0 + 0.01 * ((k as f64) - 100.0).powi(2)).collect(), segments: 1 };
        assert!((p.floor_at(100.0) - 5.0).abs() < 1e-12);
        assert!(p.line_power(100.0).abs() < 1e-12);
    }

    #[test]
    fn segment_too_long() {
        let x = vec![0.0; 100];
        let cfg = WelchConfig::new(128, 0.5, Window::Hann).unwrap();
        assert!(matches!(welch_psd(&x, 1.0, &cfg), Err(Error::SegmentTooLong { .. })));
    }

    #[test]
    fn decomposition_is_sorted_and_floor_filled() {
        let dt = 1e-3;
        let n = 1 << 14;
        let cfg = WelchConfig::new(512, 0.5, Window::Hann).unwrap();
        let f = 40.0 / (512.0 * dt);
        let x: Vec<f64> = white(n, 0.1, 4)
            .into_iter()
            .enumerate()
            .map(|(i, v)| v + (TAU * f * i as f64 * dt).cos())
            .collect();
        let d = estimate_psd(&x, dt, &cfg, &[f, -f]).unwrap();
        assert!(d.frequencies.windows(2).all(|w| w[0] < w[1]));
        let peak = d.continuum.iter().copied().fold(0.0, f64::max);
        assert!(peak < 10.0 * 0.01 * dt);
    }
}
