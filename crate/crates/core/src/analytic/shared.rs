use std::f64::consts::TAU;

use super::report::{NoiseBreakdown, SnrReport};
use super::{require_kind, Fringe, LinkConfig, Model};
use crate::error::{Error, Result};
use crate::math::{cos_cycles, dispersion_cycles};
use crate::modulation::{HarmonicModulation, SchemeKind, Topology};
use crate::spectrum::OpticalSpectrum;

/// A link whose two arms carry the same modulation, `m2 = k·m1`.
///
/// The interferometer then acts on the source alone and the detected
/// spectrum reduces to cyclic autocorrelations of `m1` times interferometer
/// kernels.
#[derive(Debug, Clone)]
pub struct SharedLink<'a> {
    spectrum: &'a OpticalSpectrum,
    fringe: Fringe,
    m: HarmonicModulation,
    phi: f64,
}

impl<'a> SharedLink<'a> {
    pub fn new(cfg: &'a LinkConfig, f_m: f64) -> Result<Self> {
        let arms = cfg.arms(f_m)?;
        if arms.topology != Topology::Shared {
            return Err(Error::WrongScheme {
                expected: "shared-modulator",
                found: cfg.scheme.kind.name().to_string(),
            });
        }
        Ok(Self {
            spectrum: &cfg.spectrum,
            fringe: Fringe { d: cfg.delay(), kappa: cfg.kappa(), k: arms.k },
            m: arms.m1,
            phi: cfg.phi(),
        })
    }

    pub fn fringe(&self) -> &Fringe {
        &self.fringe
    }

    pub fn modulation(&self) -> &HarmonicModulation {
        &self.m
    }

    fn lag(&self, f: f64) -> f64 {
        TAU * self.phi * f
    }

    /// Power of the line at `n·f_m`: `|H(v_n)|²·|R^{(−n)}(v_n)|²`.
    pub fn line_power(&self, n: i32) -> f64 {
        let v = self.lag(n as f64 * self.m.f_m());
        self.fringe.h(self.spectrum, v).norm_sqr() * self.m.cyclic_autocorrelation(-n, v).norm_sqr()
    }

    /// Line power with the interferometer cross terms dropped.
    pub fn line_power_approx(&self, n: i32) -> f64 {
        let v = self.lag(n as f64 * self.m.f_m());
        let d = self.fringe.d;
        let k2 = self.fringe.k.norm_sqr();
        let r2 = |x: f64| self.spectrum.autocorrelation(x).norm_sqr();
        let bracket = (1.0 + k2).powi(2) * r2(v) + k2 * (r2(v - d) + r2(v + d));
        bracket * self.m.cyclic_autocorrelation(-n, v).norm_sqr()
    }

    /// Both lines at ±f_m.
    pub fn signal_power(&self, model: Model) -> f64 {
        match model {
            Model::Exact => self.line_power(1) + self.line_power(-1),
            Model::Approx => self.line_power_approx(1) + self.line_power_approx(-1),
        }
    }

    fn s_h(&self, f: f64, model: Model) -> f64 {
        match model {
            Model::Exact => self.fringe.s_h_exact(self.spectrum, f),
            Model::Approx => self.fringe.s_h_product(self.spectrum, f),
        }
    }

    /// `(n, |R^{(−n)}(v)|²·S_H(f − n·f_m))` for every harmonic shift `n`.
    pub fn continuum_terms(&self, f: f64, model: Model) -> Vec<(i32, f64)> {
        let v = self.lag(f);
        let n_max = 2 * self.m.order();
        (-n_max..=n_max)
            .filter_map(|n| {
                let r2 = self.m.cyclic_autocorrelation(-n, v).norm_sqr();
                (r2 != 0.0).then(|| (n, r2 * self.s_h(f - n as f64 * self.m.f_m(), model)))
            })
            .collect()
    }

    /// Continuum PSD `S_no(f)`.
    pub fn continuum(&self, f: f64, model: Model) -> f64 {
        self.continuum_terms(f, model).iter().map(|t| t.1).sum()
    }

    /// Continuum power in 1 Hz at ±f.
    pub fn noise_at(&self, f: f64, model: Model) -> NoiseBreakdown {
        let mut b = NoiseBreakdown::default();
        for (n, v) in self.continuum_terms(f, model) {
            b.add_shift(n, 2.0 * v);
        }
        b
    }
}

/// Signal power of a double-sideband link at `f_m`, including the dispersion fading factor.
pub fn signal_power_dsb(cfg: &LinkConfig, f_m: f64) -> Result<f64> {
    require_kind(cfg, cfg.scheme.kind == SchemeKind::Dsb, "dsb")?;
    Ok(SharedLink::new(cfg, f_m)?.signal_power(Model::Exact))
}

/// Signal power of a single-sideband link at `f_m`.
pub fn signal_power_ssb(cfg: &LinkConfig, f_m: f64, model: Model) -> Result<f64> {
    require_kind(cfg, cfg.scheme.kind == SchemeKind::Ssb, "ssb")?;
    Ok(SharedLink::new(cfg, f_m)?.signal_power(model))
}

/// Passband shape `|R0(2πφ·Δf)|² / |R0(0)|²` at detuning `Δf` from the centre.
pub fn passband_shape(cfg: &LinkConfig, detuning: f64) -> f64 {
    let r0 = cfg.spectrum.autocorrelation(0.0).norm_sqr();
    cfg.spectrum.autocorrelation(TAU * cfg.phi() * detuning).norm_sqr() / r0
}

/// Continuum PSD of a shared-modulator link driven at `f_m`, evaluated at `f`.
pub fn noise_psd_shared(cfg: &LinkConfig, f_m: f64, f: f64, model: Model) -> Result<f64> {
    Ok(SharedLink::new(cfg, f_m)?.continuum(f, model))
}

/// Noise power in 1 Hz at ±f_c of a single-sideband link tuned to `f_c`.
pub fn noise_power_ssb_at(cfg: &LinkConfig, f_c: f64, model: Model) -> Result<NoiseBreakdown> {
    require_kind(cfg, cfg.scheme.kind == SchemeKind::Ssb, "ssb")?;
    Ok(SharedLink::new(cfg, f_c)?.noise_at(f_c, model))
}

fn ssb_approximations(link: &SharedLink<'_>, cfg: &LinkConfig, f_m: f64) -> (f64, f64) {
    let g = 0.5 * cfg.scheme.gamma;
    let g2 = g * g;
    let k2 = link.fringe.k.norm_sqr();
    let r00 = cfg.spectrum.autocorrelation(0.0).norm_sqr();
    let signal = 2.0 * g2 * k2 * r00;
    let sh = |f: f64| link.fringe.s_h_product(&cfg.spectrum, f);
    let c = cos_cycles(1.0, dispersion_cycles(cfg.phi(), f_m));
    let noise = 2.0 * (1.0 + g2 * g2 + 2.0 * g2 * c) * sh(f_m) + 2.0 * g2 * sh(2.0 * f_m) + 2.0 * g2 * sh(0.0);
    let gamma = cfg.scheme.gamma;
    let b = cfg.spectrum.bandwidth();
    let formula = b / (8.0 * (c + 0.5).powi(2) + 8.0 / (gamma * gamma) * (c + 2.0) + 6.0);
    (signal / noise, formula)
}

/// SNR of a shared-modulator link at tone `f_m`.
pub fn snr_shared(cfg: &LinkConfig, f_m: f64) -> Result<SnrReport> {
    let (norm, peak) = cfg.normalized();
    let link = SharedLink::new(&norm, f_m)?;
    let signal = link.signal_power(Model::Exact);
    let noise = link.noise_at(f_m, Model::Exact);
    let (ratio, formula) = if norm.scheme.kind == SchemeKind::Ssb && norm.scheme.gamma > 0.0 {
        let (r, f) = ssb_approximations(&link, &norm, f_m);
        (Some(r), Some(f))
    } else {
        (None, None)
    };
    Ok(SnrReport::build(cfg.scheme.kind.name(), f_m, signal, noise, ratio, formula).rescaled(peak))
}

/// SNR of a single-sideband link at its passband centre.
pub fn snr_ssb(cfg: &LinkConfig) -> Result<SnrReport> {
    require_kind(cfg, cfg.scheme.kind == SchemeKind::Ssb, "ssb")?;
    snr_shared(cfg, cfg.center_frequency()?)
}
