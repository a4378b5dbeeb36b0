//! Numbers with mandatory unit suffixes, converted to SI.

use mpfsim_core::units::{dbm_to_watts, NANOMETRE, PICOSECOND, PS2, PS_PER_NM};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Frequency,
    Time,
    Wavelength,
    /// Optical span, either a frequency or a wavelength width.
    Bandwidth,
    Dispersion,
    GroupDelayDispersion,
    Power,
    PowerDensity,
    Decibel,
    /// SNR re 1 Hz.
    DecibelHertz,
}

impl Dimension {
    fn units(self) -> &'static [(&'static str, f64)] {
        match self {
            Dimension::Frequency => &[("Hz", 1.0), ("kHz", 1e3), ("MHz", 1e6), ("GHz", 1e9), ("THz", 1e12)],
            Dimension::Time => &[
                ("s", 1.0),
                ("ms", 1e-3),
                ("us", 1e-6),
                ("µs", 1e-6),
                ("ns", 1e-9),
                ("ps", PICOSECOND),
                ("fs", 1e-15),
            ],
            Dimension::Wavelength => &[("m", 1.0), ("um", 1e-6), ("µm", 1e-6), ("nm", NANOMETRE)],
            Dimension::Bandwidth => &[
                ("Hz", 1.0),
                ("kHz", 1e3),
                ("MHz", 1e6),
                ("GHz", 1e9),
                ("THz", 1e12),
                ("nm", NANOMETRE),
                ("pm", 1e-12),
            ],
            Dimension::Dispersion => &[("s/m", 1.0), ("ps/nm", PS_PER_NM), ("ns/nm", 1e3 * PS_PER_NM)],
            Dimension::GroupDelayDispersion => &[("s^2", 1.0), ("s²", 1.0), ("ps^2", PS2), ("ps²", PS2)],
            Dimension::Power => &[("W", 1.0), ("mW", 1e-3), ("uW", 1e-6), ("µW", 1e-6), ("dBm", f64::NAN)],
            Dimension::PowerDensity => &[("W/Hz", 1.0), ("mW/Hz", 1e-3), ("W/GHz", 1e-9), ("mW/GHz", 1e-12)],
            Dimension::Decibel => &[("dB", 1.0)],
            Dimension::DecibelHertz => &[("dBHz", 1.0), ("dB·Hz", 1.0), ("dB-Hz", 1.0)],
        }
    }

    fn accepted(self) -> String {
        self.units().iter().map(|u| u.0).collect::<Vec<_>>().join(", ")
    }
}

/// A parsed quantity; `Bandwidth` in wavelength units stays a wavelength span.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Si(f64),
    WavelengthSpan(f64),
}

fn split(text: &str) -> Option<(f64, &str)> {
    let text = text.trim();
    let ends: Vec<usize> = text.char_indices().map(|(i, c)| i + c.len_utf8()).collect();
    ends.iter()
        .rev()
        .find_map(|&i| text[..i].trim().parse::<f64>().ok().map(|x| (x, text[i..].trim())))
}

pub fn parse(field: &str, text: &str, dim: Dimension) -> CliResult<Value> {
    let (x, unit) = split(text).ok_or_else(|| CliError::config(format!("`{field}`: cannot read a number from \"{text}\"")))?;
    if !x.is_finite() {
        return Err(CliError::config(format!("`{field}`: value must be finite")));
    }
    if unit.is_empty() {
        return Err(CliError::config(format!(
            "`{field}`: \"{text}\" has no unit (expected one of {})",
            dim.accepted()
        )));
    }
    let scale = dim
        .units()
        .iter()
        .find(|u| u.0 == unit)
        .map(|u| u.1)
        .ok_or_else(|| CliError::config(format!("`{field}`: unknown unit \"{unit}\" (expected one of {})", dim.accepted())))?;
    Ok(match (dim, unit) {
        (Dimension::Power, "dBm") => Value::Si(dbm_to_watts(x)),
        (Dimension::Bandwidth, "nm" | "pm") => Value::WavelengthSpan(x * scale),
        _ => Value::Si(x * scale),
    })
}

/// Parses a quantity that is never a wavelength span.
pub fn si(field: &str, text: &str, dim: Dimension) -> CliResult<f64> {
    match parse(field, text, dim)? {
        Value::Si(x) => Ok(x),
        Value::WavelengthSpan(_) => unreachable!("only bandwidths carry wavelength spans"),
    }
}
