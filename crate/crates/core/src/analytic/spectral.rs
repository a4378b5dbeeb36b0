use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use super::LinkConfig;
use crate::error::Result;
use crate::modulation::HarmonicModulation;
use crate::spectrum::OpticalSpectrum;

/// Frequency-domain evaluation of the same link.
///
/// Distinct source frequencies are uncorrelated, so the output field at
/// optical frequency `x` is `Σ_k A_k(x)·T(x)·Ẽ0(x − k·f_m)` with
/// `A_k(x) = M1_k + κ·M2_k·e^{−j2π(x − k f_m)d}` and the all-pass
/// dispersion response `T(x) = e^{−jφ(2πx)²/2}`. Lines and continuum follow
/// from second and fourth moments of `Ẽ0` by direct quadrature over the
/// source spectrum; nothing here goes through lag-domain correlations.
#[derive(Debug, Clone)]
pub struct FrequencyDomainLink<'a> {
    spectrum: &'a OpticalSpectrum,
    m1: HarmonicModulation,
    m2: HarmonicModulation,
    kappa: Complex64,
    d: f64,
    phi: f64,
    f_m: f64,
    order: i32,
}

impl<'a> FrequencyDomainLink<'a> {
    pub fn new(cfg: &'a LinkConfig, f_m: f64) -> Result<Self> {
        let arms = cfg.arms(f_m)?;
        let order = arms.m1.order().max(arms.m2.order());
        Ok(Self {
            spectrum: &cfg.spectrum,
            m1: arms.m1,
            m2: arms.m2,
            kappa: cfg.kappa(),
            d: cfg.delay(),
            phi: cfg.phi(),
            f_m,
            order,
        })
    }

    fn a(&self, k: i32, x: f64) -> Complex64 {
        let delayed = self.m2.coeff(k);
        let direct = self.m1.coeff(k);
        if delayed.norm_sqr() == 0.0 {
            return direct;
        }
        let cycles = (x - k as f64 * self.f_m) * self.d;
        direct + self.kappa * delayed * Complex64::from_polar(1.0, -TAU * cycles)
    }

    fn active(&self, k: i32) -> bool {
        self.m1.coeff(k).norm_sqr() != 0.0 || self.m2.coeff(k).norm_sqr() != 0.0
    }

    /// Complex amplitude of the mean intensity at `n·f_m`.
    pub fn line_amplitude(&self, n: i32) -> Complex64 {
        let big_f = n as f64 * self.f_m;
        let v = TAU * self.phi * big_f;
        let max_lag = 2.0 * self.d.abs() + v.abs();
        let mut acc = Complex64::new(0.0, 0.0);
        for l in -self.order..=self.order {
            let k = l + n;
            if !self.active(k) || !self.active(l) {
                continue;
            }
            acc += self.spectrum.integrate_single(-(l as f64) * self.f_m, max_lag, |nu| {
                // T(ν+F)·T*(ν) = e^{−j2π²φF(2ν+F)}
                let disp = Complex64::from_polar(1.0, -TAU * (PI * self.phi * big_f * (2.0 * nu + big_f)));
                self.a(k, nu + big_f) * self.a(l, nu).conj() * disp
            });
        }
        acc
    }

    pub fn line_power(&self, n: i32) -> f64 {
        self.line_amplitude(n).norm_sqr()
    }

    /// Both lines at ±f_m.
    pub fn signal_power(&self) -> f64 {
        self.line_power(1) + self.line_power(-1)
    }

    /// Continuum PSD at intensity frequency `big_f`.
    pub fn noise_psd(&self, big_f: f64) -> f64 {
        let n = self.order;
        let max_lag = 2.0 * self.d.abs();
        let mut acc = Complex64::new(0.0, 0.0);
        for k in -n..=n {
            for l in -n..=n {
                for p in -n..=n {
                    let q = l + p - k;
                    if q.abs() > n || !(self.active(k) && self.active(l) && self.active(p) && self.active(q)) {
                        continue;
                    }
                    let delta = (q - l) as f64 * self.f_m;
                    // the four dispersion phases collapse to e^{j4π²φΔF}
                    let disp = Complex64::from_polar(1.0, TAU * (TAU * self.phi * delta * big_f));
                    let integral = self.spectrum.integrate_pair(
                        big_f - k as f64 * self.f_m,
                        -(l as f64) * self.f_m,
                        max_lag,
                        |nu| {
                            self.a(k, nu + big_f)
                                * self.a(l, nu).conj()
                                * self.a(p, nu + delta + big_f).conj()
                                * self.a(q, nu + delta)
                        },
                    );
                    acc += disp * integral;
                }
            }
        }
        acc.re
    }
}

/// Signal power at `f_m` through the frequency-domain route.
pub fn freq_domain_signal_power(cfg: &LinkConfig, f_m: f64) -> Result<f64> {
    Ok(FrequencyDomainLink::new(cfg, f_m)?.signal_power())
}

/// Continuum PSD at `f` of a link driven at `f_m`, through the frequency-domain route.
pub fn freq_domain_noise_psd(cfg: &LinkConfig, f_m: f64, f: f64) -> Result<f64> {
    Ok(FrequencyDomainLink::new(cfg, f_m)?.noise_psd(f))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{GeneralLink, Model, SharedLink};
    use super::*;
    use crate::modulation::SchemeConfig;
    use crate::units::PICOSECOND;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn ssb_nominal_point_matches_time_domain() {
        let cfg = nominal_ssb(3.2);
        let fc = cfg.center_frequency().unwrap();
        let fd = FrequencyDomainLink::new(&cfg, fc).unwrap();
        let td = SharedLink::new(&cfg, fc).unwrap();
        assert!(rel(fd.signal_power(), td.signal_power(Model::Exact)) < 1e-9);
        assert!(rel(fd.noise_psd(fc), td.continuum(fc, Model::Exact)) < 1e-9);
    }

    #[test]
    fn unmodulated_noise_is_s_h() {
        let cfg = link(SchemeConfig::unmodulated(), 3.2, 79.4 * PICOSECOND);
        let fd = FrequencyDomainLink::new(&cfg, 10e9).unwrap();
        for f in [0.0, 10e9, 25e9] {
            let sh = super::super::s_h_exact(&cfg, f).unwrap();
            assert!(rel(fd.noise_psd(f), sh) < 1e-9);
        }
    }

    #[test]
    fn pm_matches_general_evaluator() {
        let cfg = nominal_pm(3.2);
        let fc = cfg.center_frequency().unwrap();
        let fd = FrequencyDomainLink::new(&cfg, fc).unwrap();
        let g = GeneralLink::new(&cfg, fc).unwrap();
        for n in [-2, -1, 0, 1, 2] {
            let (a, b) = (fd.line_power(n), g.line_power(n));
            assert!((a - b).abs() <= 1e-9 * b.max(1e-6 * g.line_power(0)), "n={n}: {a} vs {b}");
        }
        for f in [0.0, 4e9, fc, 2.0 * fc] {
            assert!(rel(fd.noise_psd(f), g.continuum(f)) < 1e-9, "f={f}");
        }
    }
}
