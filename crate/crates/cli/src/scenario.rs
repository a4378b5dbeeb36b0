//! Scenario files: TOML with explicit units on every dimensioned value.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use mpfsim_core::analytic::Model;
use mpfsim_core::montecarlo::{McSettings, SimulationGrid, WelchConfig, Window};
use mpfsim_core::units::wavelength_span_to_bandwidth;
use mpfsim_core::{
    delay_for_center, gamma_from_csr, DispersionSpec, InterferometerSpec, LinkConfig, OpticalSpectrum, SchemeConfig,
    SchemeKind,
};

use crate::error::{CliError, CliResult};
use crate::quantity::{parse, si, Dimension, Value};

const DEFAULT_WAVELENGTH: &str = "1550 nm";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Evaluator for response curves: exact (default) or approx.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link: Option<LinkSection>,
    pub sweep: SweepSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<McSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oeo: Option<OeoSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<ExpectSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSection {
    /// dsb, ssb, pm, polm, dual-mzm or unmodulated.
    pub scheme: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Carrier-to-sideband ratio, as an alternative to `gamma`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csr: Option<String>,
    pub bandwidth: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavelength: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dispersion: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delay: Option<String>,
    /// Passband centre, as an alternative to `delay`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<String>,
    /// Delayed-arm amplitude, real or `[re, im]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arm_ratio: Option<ArmRatio>,
    /// RF input power for the noise figure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_power: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ArmRatio {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub variable: String,
    pub start: Scalar,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<Scalar>,
    pub points: usize,
    /// linear (default) or log.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSection {
    pub realizations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segment: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OeoSection {
    pub loop_delay: String,
    /// Defaults to 1/SNR of the link.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectSection {
    /// Reference SNR, e.g. "94.9 dBHz".
    pub snr: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Fm,
    Gamma,
    Csr,
    Fc,
    Delay,
    Bandwidth,
    Detuning,
    Offset,
}

impl Axis {
    fn parse(name: &str) -> CliResult<Self> {
        Ok(match name {
            "f_m" => Axis::Fm,
            "gamma" => Axis::Gamma,
            "csr" => Axis::Csr,
            "f_c" => Axis::Fc,
            "delay" => Axis::Delay,
            "bandwidth" => Axis::Bandwidth,
            "detuning" => Axis::Detuning,
            "offset" => Axis::Offset,
            _ => {
                return Err(CliError::config(format!(
                    "`sweep.variable`: unknown axis \"{name}\" (f_m, gamma, csr, f_c, delay, bandwidth, detuning, offset)"
                )))
            }
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::Fm => "f_m",
            Axis::Gamma => "gamma",
            Axis::Csr => "csr",
            Axis::Fc => "f_c",
            Axis::Delay => "delay",
            Axis::Bandwidth => "bandwidth",
            Axis::Detuning => "detuning",
            Axis::Offset => "offset",
        }
    }

    /// SI unit of the swept values as written to the output.
    pub fn unit(self) -> &'static str {
        match self {
            Axis::Fm | Axis::Fc | Axis::Bandwidth | Axis::Detuning | Axis::Offset => "Hz",
            Axis::Delay => "s",
            Axis::Csr => "dB",
            Axis::Gamma => "1",
        }
    }

    fn dimension(self) -> Option<Dimension> {
        match self {
            Axis::Fm | Axis::Fc | Axis::Detuning | Axis::Offset => Some(Dimension::Frequency),
            Axis::Delay => Some(Dimension::Time),
            Axis::Bandwidth => Some(Dimension::Bandwidth),
            Axis::Csr => Some(Dimension::Decibel),
            Axis::Gamma => None,
        }
    }
}

/// Swept variable and its values in SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub axis: Axis,
    pub values: Vec<f64>,
}

fn parse_scheme(name: &str) -> CliResult<SchemeKind> {
    Ok(match name {
        "dsb" => SchemeKind::Dsb,
        "ssb" => SchemeKind::Ssb,
        "pm" => SchemeKind::Pm,
        "polm" => SchemeKind::PolM,
        "dual-mzm" => SchemeKind::DualInputMzm,
        "unmodulated" => SchemeKind::Unmodulated,
        _ => {
            return Err(CliError::config(format!(
                "`link.scheme`: unknown scheme \"{name}\" (dsb, ssb, pm, polm, dual-mzm, unmodulated)"
            )))
        }
    })
}

fn exclusive<'a>(a: (&str, &'a Option<String>), b: (&str, &'a Option<String>)) -> CliResult<Option<(bool, &'a str)>> {
    match (a.1, b.1) {
        (Some(_), Some(_)) => Err(CliError::config(format!("`link.{}` and `link.{}` are mutually exclusive", a.0, b.0))),
        (Some(x), None) => Ok(Some((true, x))),
        (None, Some(x)) => Ok(Some((false, x))),
        (None, None) => Ok(None),
    }
}

impl Scenario {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        let s: Scenario = toml::from_str(text).map_err(|e| CliError::config(format!("scenario: {}", e.message())))?;
        s.sweep()?;
        s.model()?;
        if let Some(l) = &s.link {
            l.wavelength()?;
        }
        Ok(s)
    }

    /// SHA-256 of the canonical JSON form; stable under TOML reformatting.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_string(self).expect("scenario serializes");
        Sha256::digest(canonical.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn model(&self) -> CliResult<Model> {
        match self.model.as_deref() {
            None | Some("exact") => Ok(Model::Exact),
            Some("approx") => Ok(Model::Approx),
            Some(other) => Err(CliError::config(format!("`model`: \"{other}\" is not exact or approx"))),
        }
    }

    pub fn link(&self) -> CliResult<&LinkSection> {
        self.link.as_ref().ok_or_else(|| CliError::config("scenario has no [link] section"))
    }

    pub fn sweep(&self) -> CliResult<Sweep> {
        let s = &self.sweep;
        let axis = Axis::parse(&s.variable)?;
        if s.points == 0 {
            return Err(CliError::config("`sweep.points`: must be at least 1"));
        }
        let link = self.link.as_ref();
        let value = |field: &str, v: &Scalar| -> CliResult<f64> {
            match (axis.dimension(), v) {
                (None, Scalar::Number(x)) => Ok(*x),
                (None, Scalar::Text(t)) => {
                    Err(CliError::config(format!("`{field}`: {} is dimensionless, got \"{t}\"", axis.name())))
                }
                (Some(_), Scalar::Number(x)) => {
                    Err(CliError::config(format!("`{field}`: {x} has no unit ({} values take a unit suffix)", axis.name())))
                }
                (Some(Dimension::Bandwidth), Scalar::Text(t)) => match parse(field, t, Dimension::Bandwidth)? {
                    Value::Si(x) => Ok(x),
                    Value::WavelengthSpan(w) => {
                        let lambda = link.map(|l| l.wavelength()).transpose()?.unwrap_or(default_wavelength());
                        Ok(wavelength_span_to_bandwidth(lambda, w))
                    }
                },
                (Some(d), Scalar::Text(t)) => si(field, t, d),
            }
        };
        let start = value("sweep.start", &s.start)?;
        let stop = match &s.stop {
            Some(v) => value("sweep.stop", v)?,
            None if s.points == 1 => start,
            None => return Err(CliError::config("`sweep.stop`: required when points > 1")),
        };
        let log = match s.spacing.as_deref() {
            None | Some("linear") => false,
            Some("log") => true,
            Some(other) => return Err(CliError::config(format!("`sweep.spacing`: \"{other}\" is not linear or log"))),
        };
        if log && !(start > 0.0 && stop > 0.0) {
            return Err(CliError::config("`sweep.spacing`: log spacing needs positive start and stop"));
        }
        let n = s.points;
        let values = (0..n)
            .map(|i| {
                if n == 1 {
                    return start;
                }
                let t = i as f64 / (n - 1) as f64;
                if log {
                    (start.ln() + t * (stop.ln() - start.ln())).exp()
                } else {
                    start + t * (stop - start)
                }
            })
            .collect();
        Ok(Sweep { axis, values })
    }

    /// Monte-Carlo settings, with `seed` overriding the file.
    pub fn mc_settings(&self, seed: Option<u64>) -> CliResult<McSettings> {
        let mc = self.mc.as_ref().ok_or_else(|| CliError::config("--mc needs an [mc] section in the scenario"))?;
        let mut grid = SimulationGrid::default();
        if mc.dt.is_some() || mc.samples.is_some() {
            let dt = match &mc.dt {
                Some(t) => si("mc.dt", t, Dimension::Time)?,
                None => grid.dt(),
            };
            grid = SimulationGrid::new(dt, mc.samples.unwrap_or(grid.n_samples()))
                .map_err(|e| CliError::core("mc", e))?;
        }
        let seed = seed.or(mc.seed).unwrap_or(0);
        let mut settings = McSettings::new(grid, mc.realizations, seed).map_err(|e| CliError::core("mc.realizations", e))?;
        if let Some(len) = mc.segment {
            let welch = WelchConfig::new(len, 0.5, Window::Hann).map_err(|e| CliError::core("mc.segment", e))?;
            settings = settings.with_welch(welch).map_err(|e| CliError::core("mc.segment", e))?;
        }
        Ok(settings)
    }

    /// Root seed recorded in output headers.
    pub fn seed(&self, seed: Option<u64>) -> u64 {
        seed.or(self.mc.as_ref().and_then(|m| m.seed)).unwrap_or(0)
    }
}

fn default_wavelength() -> f64 {
    si("link.wavelength", DEFAULT_WAVELENGTH, Dimension::Wavelength).expect("default parses")
}

/// Link parameters that a sweep may override.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub gamma: Option<f64>,
    pub delay: Option<f64>,
    pub center: Option<f64>,
    pub bandwidth: Option<f64>,
}

impl Overrides {
    pub fn for_axis(axis: Axis, x: f64) -> CliResult<Self> {
        let mut o = Self::default();
        match axis {
            Axis::Gamma => o.gamma = Some(x),
            Axis::Csr => o.gamma = Some(gamma_from_csr(x).map_err(|e| CliError::core("sweep", e))?),
            Axis::Fc => o.center = Some(x),
            Axis::Delay => o.delay = Some(x),
            Axis::Bandwidth => o.bandwidth = Some(x),
            Axis::Fm | Axis::Detuning | Axis::Offset => {}
        }
        Ok(o)
    }
}

impl LinkSection {
    pub fn wavelength(&self) -> CliResult<f64> {
        match &self.wavelength {
            Some(t) => {
                let l = si("link.wavelength", t, Dimension::Wavelength)?;
                if l <= 0.0 {
                    return Err(CliError::config("`link.wavelength`: must be positive"));
                }
                Ok(l)
            }
            None => Ok(default_wavelength()),
        }
    }

    pub fn input_power(&self) -> CliResult<Option<f64>> {
        self.input_power.as_deref().map(|t| si("link.input_power", t, Dimension::Power)).transpose()
    }

    fn gamma(&self) -> CliResult<Option<f64>> {
        match (self.gamma, &self.csr) {
            (Some(_), Some(_)) => Err(CliError::config("`link.gamma` and `link.csr` are mutually exclusive")),
            (Some(g), None) => Ok(Some(g)),
            (None, Some(c)) => gamma_from_csr(si("link.csr", c, Dimension::Decibel)?)
                .map(Some)
                .map_err(|e| CliError::core("link.csr", e)),
            (None, None) => Ok(None),
        }
    }

    fn dispersion(&self, lambda: f64) -> CliResult<DispersionSpec> {
        match exclusive(("dispersion", &self.dispersion), ("phi", &self.phi))? {
            Some((true, t)) => DispersionSpec::from_parameter(si("link.dispersion", t, Dimension::Dispersion)?, lambda)
                .map_err(|e| CliError::core("link.dispersion", e)),
            Some((false, t)) => DispersionSpec::from_phi(si("link.phi", t, Dimension::GroupDelayDispersion)?)
                .map_err(|e| CliError::core("link.phi", e)),
            None => Err(CliError::config("`link.dispersion` or `link.phi` is required")),
        }
    }

    pub fn build(&self, o: Overrides) -> CliResult<LinkConfig> {
        let lambda = self.wavelength()?;
        let f0 = mpfsim_core::units::wavelength_to_frequency(lambda);
        let kind = parse_scheme(&self.scheme)?;
        let gamma = match (o.gamma, self.gamma()?) {
            (Some(g), _) | (None, Some(g)) => g,
            (None, None) if kind == SchemeKind::Unmodulated => 0.0,
            (None, None) => {
                return Err(CliError::config(format!("`link.gamma` or `link.csr` is required for {}", self.scheme)))
            }
        };
        let scheme = SchemeConfig::new(kind, gamma);
        let b = match o.bandwidth {
            Some(b) => b,
            None => match parse("link.bandwidth", &self.bandwidth, Dimension::Bandwidth)? {
                Value::Si(b) => b,
                Value::WavelengthSpan(w) => wavelength_span_to_bandwidth(lambda, w),
            },
        };
        let n0 = match &self.n0 {
            Some(t) => si("link.n0", t, Dimension::PowerDensity)?,
            None => 1.0,
        };
        let spectrum = OpticalSpectrum::rectangular(n0, b, f0).map_err(|e| CliError::core("link.bandwidth", e))?;
        let dispersion = self.dispersion(lambda)?;
        let delay = match (o.delay, o.center) {
            (Some(d), _) => d,
            (None, Some(fc)) => delay_for_center(fc, dispersion.phi).map_err(|e| CliError::core("sweep f_c", e))?,
            (None, None) => match exclusive(("delay", &self.delay), ("center", &self.center))? {
                Some((true, t)) => si("link.delay", t, Dimension::Time)?,
                Some((false, t)) => delay_for_center(si("link.center", t, Dimension::Frequency)?, dispersion.phi)
                    .map_err(|e| CliError::core("link.center", e))?,
                None => return Err(CliError::config("`link.delay` or `link.center` is required")),
            },
        };
        let k = match self.arm_ratio {
            None => Complex64::new(1.0, 0.0),
            Some(ArmRatio::Real(r)) => Complex64::new(r, 0.0),
            Some(ArmRatio::Complex([re, im])) => Complex64::new(re, im),
        };
        let interferometer = InterferometerSpec::new(delay, k, f0).map_err(|e| CliError::core("link.arm_ratio", e))?;
        LinkConfig::new(spectrum, interferometer, dispersion, scheme).map_err(|e| CliError::core("link", e))
    }
}
