use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use super::report::NoiseBreakdown;
use super::LinkConfig;
use crate::error::{Error, Result};
use crate::math::frac_cycles;
use crate::modulation::HarmonicModulation;
use crate::spectrum::OpticalSpectrum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub frequency: f64,
    pub power: f64,
}

/// Detected intensity spectrum split into discrete lines and a sampled continuum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDecomposition {
    pub lines: Vec<Line>,
    pub frequencies: Vec<f64>,
    /// Continuum PSD at `frequencies`, negative round-off clamped to zero.
    pub continuum: Vec<f64>,
    /// Number of continuum samples that were clamped.
    pub clamped: usize,
    /// Smallest continuum value before clamping.
    pub min_raw: f64,
}

impl SpectralDecomposition {
    /// Sum of line powers at ±f (within `tol` Hz).
    pub fn line_power_at(&self, f: f64, tol: f64) -> f64 {
        self.lines
            .iter()
            .filter(|l| (l.frequency.abs() - f.abs()).abs() <= tol)
            .map(|l| l.power)
            .sum()
    }
}

/// Two-arm link with arbitrary arm modulations, expanded term by term over
/// the fourth-order field moment.
///
/// Arm `a` contributes `c_a·E0(t − τ_a)·m_a(t)` with `(c, τ) = (1, 0)` and
/// `(e^{-j2πf0d}, d)`. Each of the 16 arm quadruples factors into a
/// modulation coefficient and a product of two shifted source
/// autocorrelations, whose transforms are closed-form spectral kernels.
#[derive(Debug, Clone)]
pub struct GeneralLink<'a> {
    spectrum: &'a OpticalSpectrum,
    arms: [HarmonicModulation; 2],
    c: [Complex64; 2],
    tau: [f64; 2],
    phi: f64,
    f_m: f64,
    order: i32,
}

impl<'a> GeneralLink<'a> {
    pub fn new(cfg: &'a LinkConfig, f_m: f64) -> Result<Self> {
        let arms = cfg.arms(f_m)?;
        let order = arms.m1.order().max(arms.m2.order());
        Ok(Self {
            spectrum: &cfg.spectrum,
            arms: [arms.m1, arms.m2],
            c: [Complex64::new(1.0, 0.0), cfg.kappa()],
            tau: [0.0, cfg.delay()],
            phi: cfg.phi(),
            f_m,
            order,
        })
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    fn lag(&self, f: f64) -> f64 {
        TAU * self.phi * f
    }

    /// `Σ_p A*_p B_{p−n} e^{jω(p−n)v}` for arms a, b.
    fn left(&self, a: usize, b: usize, n: i32, v: f64) -> Complex64 {
        let (ma, mb) = (&self.arms[a], &self.arms[b]);
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, ap) in ma.terms() {
            let w = ap.conj() * mb.coeff(p - n);
            if w.norm_sqr() != 0.0 {
                acc += w * Complex64::from_polar(1.0, TAU * self.f_m * (p - n) as f64 * v);
            }
        }
        acc
    }

    /// `Σ_r C*_r E_{r+n} e^{−jωrv}` for arms c, e.
    fn right(&self, c: usize, e: usize, n: i32, v: f64) -> Complex64 {
        let (mc, me) = (&self.arms[c], &self.arms[e]);
        let mut acc = Complex64::new(0.0, 0.0);
        for (r, cr) in mc.terms() {
            let w = cr.conj() * me.coeff(r + n);
            if w.norm_sqr() != 0.0 {
                acc += w * Complex64::from_polar(1.0, -TAU * self.f_m * r as f64 * v);
            }
        }
        acc
    }

    fn lr_tables(&self, n: i32, v: f64) -> ([[Complex64; 2]; 2], [[Complex64; 2]; 2]) {
        let mut l = [[Complex64::new(0.0, 0.0); 2]; 2];
        let mut r = l;
        for a in 0..2 {
            for b in 0..2 {
                l[a][b] = self.c[a].conj() * self.c[b] * self.left(a, b, n, v);
                r[a][b] = self.c[a].conj() * self.c[b] * self.right(a, b, n, v);
            }
        }
        (l, r)
    }

    /// Power of the line at `n·f_m`.
    pub fn line_power(&self, n: i32) -> f64 {
        let v = self.lag(n as f64 * self.f_m);
        let (l, r) = self.lr_tables(n, v);
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..2 {
            for b in 0..2 {
                if l[a][b].norm_sqr() == 0.0 {
                    continue;
                }
                let r1 = self.spectrum.autocorrelation(v - self.tau[b] + self.tau[a]);
                for c in 0..2 {
                    for e in 0..2 {
                        if r[c][e].norm_sqr() == 0.0 {
                            continue;
                        }
                        let r2 = self.spectrum.autocorrelation(v + self.tau[e] - self.tau[c]).conj();
                        acc += l[a][b] * r[c][e] * r1 * r2;
                    }
                }
            }
        }
        acc.re.max(0.0)
    }

    /// Both lines at ±f_m.
    pub fn signal_power(&self) -> f64 {
        self.line_power(1) + self.line_power(-1)
    }

    /// `(n, contribution)` to the continuum at `f` from the source-beat
    /// spectrum shifted by `n·f_m`.
    pub fn continuum_terms(&self, f: f64) -> Vec<(i32, f64)> {
        let v = self.lag(f);
        let n_max = 2 * self.order;
        let d = self.tau[1];
        let mut out = Vec::with_capacity((2 * n_max + 1) as usize);
        for n in -n_max..=n_max {
            let (l, r) = self.lr_tables(n, v);
            if l.iter().flatten().all(|x| x.norm_sqr() == 0.0)
                || r.iter().flatten().all(|x| x.norm_sqr() == 0.0)
            {
                continue;
            }
            let g = f - n as f64 * self.f_m;
            // kernels K(g, τ) for τ ∈ {−2d, −d, 0, d, 2d}
            let kern: Vec<Complex64> = (-2..=2).map(|j| self.spectrum.cross_kernel(g, j as f64 * d)).collect();
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..2 {
                for b in 0..2 {
                    for c in 0..2 {
                        for e in 0..2 {
                            let coef = l[a][b] * r[c][e];
                            if coef.norm_sqr() == 0.0 {
                                continue;
                            }
                            // F_u[R0(u − α)R0*(u + β)](g) = e^{−j2πgα} K(g, α + β)
                            let ia = e as i32 - a as i32;
                            let ib = b as i32 - c as i32;
                            let alpha = ia as f64 * d;
                            let w = Complex64::from_polar(1.0, -TAU * frac_cycles(g, alpha)) * kern[(ia + ib + 2) as usize];
                            acc += coef * w;
                        }
                    }
                }
            }
            out.push((n, acc.re));
        }
        out
    }

    pub fn continuum(&self, f: f64) -> f64 {
        self.continuum_terms(f).iter().map(|t| t.1).sum()
    }

    /// Continuum power in 1 Hz at ±f.
    pub fn noise_at(&self, f: f64) -> NoiseBreakdown {
        let mut b = NoiseBreakdown::default();
        for (n, v) in self.continuum_terms(f) {
            b.add_shift(n, 2.0 * v);
        }
        b
    }

    /// Largest rate [s] at which the continuum oscillates in frequency.
    pub fn max_spectral_lag(&self) -> f64 {
        2.0 * self.tau[1].abs() + TAU * self.phi.abs() * 2.0 * self.order as f64 * self.f_m.abs()
    }

    pub fn lines(&self) -> Vec<Line> {
        let n_max = 2 * self.order;
        (-n_max..=n_max)
            .map(|n| Line { frequency: n as f64 * self.f_m, power: self.line_power(n) })
            .filter(|l| l.power > 0.0)
            .collect()
    }
}

/// Lines plus sampled continuum of the detected intensity for any arm modulations.
///
/// Fails when the frequency grid cannot resolve the fringe and dispersion
/// ripple of the continuum.
pub fn general_intensity_psd(cfg: &LinkConfig, f_m: f64, f_grid: &[f64]) -> Result<SpectralDecomposition> {
    let link = GeneralLink::new(cfg, f_m)?;
    if f_grid.iter().any(|f| !f.is_finite()) {
        return Err(Error::invalid("f_grid", "frequencies must be finite"));
    }
    let limit = 0.5 / link.max_spectral_lag();
    let step = f_grid.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
    if f_grid.len() > 1 && step > limit {
        return Err(Error::GridTooCoarse { step, limit });
    }
    let raw: Vec<f64> = f_grid.par_iter().map(|&f| link.continuum(f)).collect();
    let min_raw = raw.iter().cloned().fold(f64::INFINITY, f64::min);
    let clamped = raw.iter().filter(|&&x| x < 0.0).count();
    Ok(SpectralDecomposition {
        lines: link.lines(),
        frequencies: f_grid.to_vec(),
        continuum: raw.into_iter().map(|x| x.max(0.0)).collect(),
        clamped,
        min_raw,
    })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{Model, SharedLink};
    use super::*;
    use crate::modulation::{SchemeConfig, SchemeKind};
    use crate::units::PICOSECOND;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn matches_shared_closed_form() {
        for scheme in [SchemeConfig::dsb(0.4), SchemeConfig::ssb(0.39), SchemeConfig::unmodulated()] {
            let cfg = link(scheme, 3.2, 79.4 * PICOSECOND);
            let fm = 10.018e9;
            let g = GeneralLink::new(&cfg, fm).unwrap();
            let s = SharedLink::new(&cfg, fm).unwrap();
            for n in -2..=2 {
                let (a, b) = (g.line_power(n), s.line_power(n));
                assert!((a - b).abs() <= 1e-10 * b + 1e-6, "n={n}: {a} vs {b}");
            }
            for f in [0.0, 3e9, 10.018e9, 20e9, -7e9] {
                assert!(rel(g.continuum(f), s.continuum(f, Model::Exact)) < 1e-10);
            }
        }
    }

    #[test]
    fn unmodulated_is_single_dc_line() {
        let cfg = link(SchemeConfig::unmodulated(), 3.2, 79.4 * PICOSECOND);
        let grid: Vec<f64> = (0..64).map(|i| i as f64 * 0.5e9).collect();
        let psd = general_intensity_psd(&cfg, 10e9, &grid).unwrap();
        assert_eq!(psd.lines.len(), 1);
        assert_eq!(psd.lines[0].frequency, 0.0);
        let h0 = super::super::h_kernel(&cfg, 0.0).unwrap().norm_sqr();
        assert!(rel(psd.lines[0].power, h0) < 1e-12);
        for (f, s) in psd.frequencies.iter().zip(&psd.continuum) {
            assert!(rel(*s, super::super::s_h_exact(&cfg, *f).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn coarse_grid_rejected() {
        let cfg = nominal_ssb(3.2);
        let grid = [0.0, 5e9, 10e9];
        assert!(matches!(general_intensity_psd(&cfg, 10e9, &grid), Err(Error::GridTooCoarse { .. })));
    }

    #[test]
    fn continuum_is_even() {
        let cfg = nominal_pm(3.2);
        let g = GeneralLink::new(&cfg, 10e9).unwrap();
        for f in [1e9, 7.7e9, 10e9, 33e9] {
            assert!(rel(g.continuum(-f), g.continuum(f)) < 1e-9);
        }
    }

    #[test]
    fn one_arm_topologies_give_a_passband() {
        for kind in [SchemeKind::Pm, SchemeKind::PolM, SchemeKind::DualInputMzm] {
            let cfg = link(SchemeConfig::new(kind.clone(), 0.4), 3.2, 79.4 * PICOSECOND);
            let fc = cfg.center_frequency().unwrap();
            let g = GeneralLink::new(&cfg, fc).unwrap();
            let off = GeneralLink::new(&cfg, fc + 1e9).unwrap();
            assert!(g.signal_power() > 100.0 * off.signal_power(), "{kind:?}");
        }
    }
}
