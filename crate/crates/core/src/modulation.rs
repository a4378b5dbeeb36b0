//! Periodic modulation functions as finite Fourier series and the scheme
//! constructors that map each modulator topology onto the two-arm model.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{ensure_finite, Error, Result};
use crate::math::bessel_j;

/// Largest harmonic index a modulation function may carry.
pub const MAX_HARMONIC: i32 = 8;

/// Largest modulation index accepted by the small-signal constructors.
pub const MAX_SMALL_SIGNAL_GAMMA: f64 = 1.5;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// `m(t) = Σ_n M_n e^{j2πn f_m t}` with `|n| ≤ order`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicModulation {
    f_m: f64,
    order: i32,
    coeffs: Vec<Complex64>,
}

impl HarmonicModulation {
    pub fn new<I>(f_m: f64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i32, Complex64)>,
    {
        ensure_finite("f_m", f_m)?;
        if f_m < 0.0 {
            return Err(Error::invalid("f_m", "must be nonnegative"));
        }
        let mut dense = vec![ZERO; (2 * MAX_HARMONIC + 1) as usize];
        for (n, c) in terms {
            if n.abs() > MAX_HARMONIC {
                return Err(Error::invalid(
                    "harmonic",
                    format!("index {n} outside ±{MAX_HARMONIC}"),
                ));
            }
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::invalid("harmonic", format!("coefficient {n} not finite")));
            }
            dense[(n + MAX_HARMONIC) as usize] += c;
        }
        let order = (-MAX_HARMONIC..=MAX_HARMONIC)
            .filter(|&n| dense[(n + MAX_HARMONIC) as usize] != ZERO)
            .map(i32::abs)
            .max()
            .unwrap_or(0);
        let lo = (MAX_HARMONIC - order) as usize;
        let coeffs = dense[lo..lo + (2 * order + 1) as usize].to_vec();
        Ok(Self { f_m, order, coeffs })
    }

    pub fn constant(f_m: f64, c: Complex64) -> Result<Self> {
        Self::new(f_m, [(0, c)])
    }

    pub fn f_m(&self) -> f64 {
        self.f_m
    }

    /// Largest |n| with a nonzero coefficient.
    pub fn order(&self) -> i32 {
        self.order
    }

    /// `M_n`, zero outside the support.
    pub fn coeff(&self, n: i32) -> Complex64 {
        if n.abs() > self.order {
            ZERO
        } else {
            self.coeffs[(n + self.order) as usize]
        }
    }

    /// Nonzero `(n, M_n)` pairs in increasing `n`.
    pub fn terms(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        (-self.order..=self.order)
            .map(move |n| (n, self.coeff(n)))
            .filter(|(_, c)| *c != ZERO)
    }

    pub fn is_constant(&self) -> bool {
        self.order == 0
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.terms()
            .map(|(n, c)| c * Complex64::from_polar(1.0, TAU * n as f64 * self.f_m * t))
            .sum()
    }

    /// `Σ|M_n|²`.
    pub fn mean_power(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn scaled(&self, k: Complex64) -> Self {
        Self { f_m: self.f_m, order: self.order, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
            .trimmed()
    }

    fn trimmed(self) -> Self {
        let terms: Vec<_> = self.terms().collect();
        Self::new(self.f_m, terms).expect("trimming preserves validity")
    }

    /// `R^{(s)}(v) = Σ_q M_q M*_{q−s} e^{j2πf_m q v}`, the s-th Fourier
    /// coefficient of `m*(t)m(t+v)`.
    pub fn cyclic_autocorrelation(&self, s: i32, v: f64) -> Complex64 {
        let n = self.order;
        let mut acc = ZERO;
        for q in (-n).max(s - n)..=n.min(s + n) {
            let w = self.coeff(q) * self.coeff(q - s).conj();
            if w != ZERO {
                acc += w * Complex64::from_polar(1.0, TAU * self.f_m * q as f64 * v);
            }
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SchemeKind {
    /// Intensity modulator on the common path, harmonics {−1, 0, 1}.
    Dsb,
    /// Single-sideband modulator on the common path, harmonics {0, 1}.
    Ssb,
    /// Phase modulator on one arm, Bessel-truncated to {−1, 0, 1}.
    Pm,
    /// Polarization modulator topology, mapped to one modulated arm.
    PolM,
    /// Dual-input MZM biased at quadrature, mapped to one modulated arm.
    DualInputMzm,
    Unmodulated,
    /// Arbitrary arm coefficients as `(n, M_n)` lists.
    Custom { m1: Vec<(i32, Complex64)>, m2: Vec<(i32, Complex64)> },
}

impl SchemeKind {
    pub fn name(&self) -> &'static str {
        match self {
            SchemeKind::Dsb => "dsb",
            SchemeKind::Ssb => "ssb",
            SchemeKind::Pm => "pm",
            SchemeKind::PolM => "polm",
            SchemeKind::DualInputMzm => "dual-mzm",
            SchemeKind::Unmodulated => "unmodulated",
            SchemeKind::Custom { .. } => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub kind: SchemeKind,
    /// Modulation index.
    pub gamma: f64,
    /// Extra complex weight applied to the second arm's modulation.
    pub arm_ratio_k: Complex64,
}

impl SchemeConfig {
    pub fn new(kind: SchemeKind, gamma: f64) -> Self {
        Self { kind, gamma, arm_ratio_k: ONE }
    }

    pub fn dsb(gamma: f64) -> Self {
        Self::new(SchemeKind::Dsb, gamma)
    }

    pub fn ssb(gamma: f64) -> Self {
        Self::new(SchemeKind::Ssb, gamma)
    }

    pub fn pm(gamma: f64) -> Self {
        Self::new(SchemeKind::Pm, gamma)
    }

    pub fn unmodulated() -> Self {
        Self::new(SchemeKind::Unmodulated, 0.0)
    }

    pub fn with_arm_ratio(mut self, k: Complex64) -> Self {
        self.arm_ratio_k = k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("gamma", self.gamma)?;
        if self.gamma < 0.0 {
            return Err(Error::invalid("gamma", "modulation index must be nonnegative"));
        }
        let small_signal = !matches!(self.kind, SchemeKind::Custom { .. } | SchemeKind::Unmodulated);
        if small_signal && self.gamma > MAX_SMALL_SIGNAL_GAMMA {
            return Err(Error::invalid(
                "gamma",
                format!("{} exceeds the small-signal limit {MAX_SMALL_SIGNAL_GAMMA}", self.gamma),
            ));
        }
        if !(self.arm_ratio_k.re.is_finite() && self.arm_ratio_k.im.is_finite()) {
            return Err(Error::invalid("arm_ratio_k", "must be finite"));
        }
        Ok(())
    }
}

/// How the two arm modulations relate to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Topology {
    /// `m2 = k·m1`.
    Shared,
    /// `m2 = k`, a constant.
    SingleArm,
    General,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmModulations {
    pub m1: HarmonicModulation,
    pub m2: HarmonicModulation,
    /// Proportionality constant of the shared or single-arm topology; 1 otherwise.
    pub k: Complex64,
    pub topology: Topology,
}

impl ArmModulations {
    fn classify(m1: HarmonicModulation, m2: HarmonicModulation) -> Self {
        if m2.is_constant() {
            let k = m2.coeff(0);
            if !m1.is_constant() {
                return Self { m1, m2, k, topology: Topology::SingleArm };
            }
        }
        // shared if m2 is a scalar multiple of m1
        let first = m1.terms().next();
        if let Some((n, c)) = first {
            let k = m2.coeff(n) / c;
            let order = m1.order().max(m2.order());
            let proportional = (-order..=order).all(|j| {
                let diff = m2.coeff(j) - k * m1.coeff(j);
                diff.norm() <= 1e-15 * (m2.coeff(j).norm() + (k * m1.coeff(j)).norm())
            }) && k.norm() > 0.0;
            if proportional {
                return Self { m1, m2, k, topology: Topology::Shared };
            }
        }
        Self { m1, m2, k: ONE, topology: Topology::General }
    }
}

/// Arm modulations of the two-arm model for a modulator topology driven at `f_m`.
///
/// Common-path modulators give `m2 = k·m1`; one-arm topologies give a
/// constant `m2 = k`. `γ = 0` yields the unmodulated pair for every built-in kind.
pub fn build_scheme(cfg: &SchemeConfig, f_m: f64) -> Result<ArmModulations> {
    cfg.validate()?;
    let c = |x: f64| Complex64::new(x, 0.0);
    let j = Complex64::new(0.0, 1.0);
    let k = cfg.arm_ratio_k;
    let g = cfg.gamma;
    let shared = |m1: HarmonicModulation| -> ArmModulations {
        let m2 = m1.scaled(k);
        ArmModulations { m1, m2, k, topology: Topology::Shared }
    };
    let single = |m1: HarmonicModulation, ks: Complex64| -> Result<ArmModulations> {
        let kk = ks * k;
        let m2 = HarmonicModulation::constant(f_m, kk)?;
        Ok(ArmModulations { m1, m2, k: kk, topology: Topology::SingleArm })
    };
    if g == 0.0 && !matches!(cfg.kind, SchemeKind::Custom { .. }) {
        return Ok(shared(HarmonicModulation::constant(f_m, ONE)?));
    }
    match &cfg.kind {
        SchemeKind::Unmodulated => Ok(shared(HarmonicModulation::constant(f_m, ONE)?)),
        SchemeKind::Dsb => {
            let h = c(0.5 * g);
            Ok(shared(HarmonicModulation::new(f_m, [(-1, h), (0, ONE), (1, h)])?))
        }
        SchemeKind::Ssb => Ok(shared(HarmonicModulation::new(f_m, [(0, ONE), (1, c(0.5 * g))])?)),
        SchemeKind::Pm => {
            let (j0, j1) = (bessel_j(0, g), bessel_j(1, g));
            let m1 = HarmonicModulation::new(f_m, [(-1, c(-j1)), (0, c(j0)), (1, c(j1))])?;
            single(m1, ONE)
        }
        SchemeKind::PolM => {
            let (j0, j1) = (bessel_j(0, g), bessel_j(1, g));
            let m1 = HarmonicModulation::new(f_m, [(-1, j * j1), (1, j * j1)])?;
            single(m1, c(j0))
        }
        SchemeKind::DualInputMzm => {
            let (j0, j1) = (bessel_j(0, g), bessel_j(1, g));
            let m1 = HarmonicModulation::new(f_m, [(-1, c(j1)), (1, c(j1))])?;
            single(m1, j * j0)
        }
        SchemeKind::Custom { m1, m2 } => {
            let m1 = HarmonicModulation::new(f_m, m1.iter().copied())?;
            let m2 = HarmonicModulation::new(f_m, m2.iter().copied())?.scaled(k);
            Ok(ArmModulations::classify(m1, m2))
        }
    }
}

/// `γ = 2·10^{−CSR/20}`.
pub fn gamma_from_csr(csr_db: f64) -> Result<f64> {
    ensure_finite("csr", csr_db)?;
    Ok(2.0 * 10f64.powf(-csr_db / 20.0))
}

/// Carrier-to-sideband ratio [dB] of a modulation index.
pub fn csr_from_gamma(gamma: f64) -> Result<f64> {
    ensure_finite("gamma", gamma)?;
    if gamma <= 0.0 {
        return Err(Error::invalid("gamma", "must be positive to define a sideband ratio"));
    }
    Ok(-20.0 * (0.5 * gamma).log10())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn dsb_coefficients() {
        let arms = build_scheme(&SchemeConfig::dsb(0.4), 1e10).unwrap();
        for m in [&arms.m1, &arms.m2] {
            assert_eq!(m.coeff(-1), Complex64::new(0.2, 0.0));
            assert_eq!(m.coeff(0), ONE);
            assert_eq!(m.coeff(1), Complex64::new(0.2, 0.0));
            assert_eq!(m.coeff(2), ZERO);
        }
        assert_eq!(arms.topology, Topology::Shared);
    }

    #[test]
    fn pm_coefficients() {
        let arms = build_scheme(&SchemeConfig::pm(0.41), 1e10).unwrap();
        let (j0, j1) = (bessel_j(0, 0.41), bessel_j(1, 0.41));
        assert_eq!(arms.m1.coeff(-1).re, -j1);
        assert_eq!(arms.m1.coeff(0).re, j0);
        assert_eq!(arms.m1.coeff(1).re, j1);
        assert!(arms.m2.is_constant());
        assert_eq!(arms.m2.coeff(0), ONE);
        assert_eq!(arms.topology, Topology::SingleArm);
    }

    #[test]
    fn one_arm_equivalents() {
        let g = 0.5;
        let polm = build_scheme(&SchemeConfig::new(SchemeKind::PolM, g), 1e10).unwrap();
        assert_eq!(polm.k, Complex64::new(bessel_j(0, g), 0.0));
        assert_eq!(polm.m1.coeff(1), Complex64::new(0.0, bessel_j(1, g)));
        let mzm = build_scheme(&SchemeConfig::new(SchemeKind::DualInputMzm, g), 1e10).unwrap();
        assert_eq!(mzm.k, Complex64::new(0.0, bessel_j(0, g)));
        assert_eq!(mzm.m1.coeff(-1), Complex64::new(bessel_j(1, g), 0.0));
        // m(t) = 2 J1 cos(2π f_m t)
        let t = 1.3e-11;
        let want = 2.0 * bessel_j(1, g) * (TAU * 1e10 * t).cos();
        assert!(close(mzm.m1.eval(t), Complex64::new(want, 0.0), 1e-15));
    }

    #[test]
    fn zero_gamma_is_unmodulated() {
        for kind in [SchemeKind::Dsb, SchemeKind::Ssb, SchemeKind::Pm, SchemeKind::PolM, SchemeKind::DualInputMzm] {
            let arms = build_scheme(&SchemeConfig::new(kind, 0.0), 1e10).unwrap();
            assert!(arms.m1.is_constant() && arms.m2.is_constant());
            assert_eq!(arms.m1.coeff(0), ONE);
            assert_eq!(arms.m2.coeff(0), ONE);
        }
    }

    #[test]
    fn gamma_limits() {
        assert!(build_scheme(&SchemeConfig::ssb(1.6), 1e10).is_err());
        assert!(build_scheme(&SchemeConfig::ssb(-0.1), 1e10).is_err());
        assert!(build_scheme(&SchemeConfig::ssb(1.5), 1e10).is_ok());
    }

    #[test]
    fn custom_topology_detection() {
        let c = |x: f64| Complex64::new(x, 0.0);
        let shared = SchemeConfig::new(
            SchemeKind::Custom { m1: vec![(0, c(1.0)), (2, c(0.1))], m2: vec![(0, c(0.5)), (2, c(0.05))] },
            0.0,
        );
        let arms = build_scheme(&shared, 1e9).unwrap();
        assert_eq!(arms.topology, Topology::Shared);
        assert!(close(arms.k, c(0.5), 1e-15));
        let general = SchemeConfig::new(
            SchemeKind::Custom { m1: vec![(0, c(1.0)), (1, c(0.1))], m2: vec![(0, c(1.0)), (-1, c(0.1))] },
            0.0,
        );
        assert_eq!(build_scheme(&general, 1e9).unwrap().topology, Topology::General);
        let bad = SchemeConfig::new(SchemeKind::Custom { m1: vec![(9, c(1.0))], m2: vec![] }, 0.0);
        assert!(build_scheme(&bad, 1e9).is_err());
    }

    #[test]
    fn cyclic_autocorrelation_examples() {
        let g = 0.39;
        let fm = 1e10;
        let dsb = build_scheme(&SchemeConfig::dsb(g), fm).unwrap().m1;
        assert!((dsb.cyclic_autocorrelation(0, 0.0).re - (1.0 + g * g / 2.0)).abs() < 1e-15);
        let ssb = build_scheme(&SchemeConfig::ssb(g), fm).unwrap().m1;
        let v = 3.7e-11;
        let want = Complex64::from_polar(g / 2.0, TAU * fm * v);
        assert!(close(ssb.cyclic_autocorrelation(1, v), want, 1e-15));
        assert!(close(ssb.cyclic_autocorrelation(-1, v), Complex64::new(g / 2.0, 0.0), 1e-15));
        let un = build_scheme(&SchemeConfig::unmodulated(), fm).unwrap().m1;
        assert_eq!(un.cyclic_autocorrelation(1, v), ZERO);
        assert_eq!(un.cyclic_autocorrelation(-1, v), ZERO);
    }

    #[test]
    fn csr_conversions() {
        assert_eq!(gamma_from_csr(0.0).unwrap(), 2.0);
        assert!((gamma_from_csr(20.0).unwrap() - 0.2).abs() < 1e-15);
        assert!((csr_from_gamma(0.44).unwrap() - 13.1515).abs() < 1e-4);
        assert!(csr_from_gamma(0.0).is_err());
        let g = gamma_from_csr(17.3).unwrap();
        assert!((csr_from_gamma(g).unwrap() - 17.3).abs() < 1e-12);
    }
}
