use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::phase::{signal_power_pm, snr_pm};
use super::report::SnrReport;
use super::shared::snr_shared;
use super::{GeneralLink, LinkConfig, Model, SharedLink};
use crate::error::{Error, Result};
use crate::modulation::{SchemeKind, Topology};
use crate::units::linear_to_db;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResponsePoint {
    pub f_m: f64,
    pub power: f64,
    /// Power relative to the sweep maximum [dB].
    pub normalized_db: f64,
}

/// Detected RF power of the tone at `f_m` for whatever scheme the link carries.
///
/// One-arm schemes other than phase modulation have no simplified form and
/// always use the exact evaluator.
pub fn signal_power(cfg: &LinkConfig, f_m: f64, model: Model) -> Result<f64> {
    if cfg.scheme.kind == SchemeKind::Pm {
        return signal_power_pm(cfg, f_m, model);
    }
    if cfg.arms(f_m)?.topology == Topology::Shared {
        return Ok(SharedLink::new(cfg, f_m)?.signal_power(model));
    }
    Ok(GeneralLink::new(cfg, f_m)?.signal_power())
}

/// SNR at the passband centre for whatever scheme the link carries.
pub fn snr_at_center(cfg: &LinkConfig) -> Result<SnrReport> {
    if cfg.scheme.kind == SchemeKind::Pm {
        return snr_pm(cfg);
    }
    let f_c = cfg.center_frequency()?;
    if cfg.arms(f_c)?.topology == Topology::Shared {
        return snr_shared(cfg, f_c);
    }
    let (norm, peak) = cfg.normalized();
    let link = GeneralLink::new(&norm, f_c)?;
    Ok(SnrReport::build(cfg.scheme.kind.name(), f_c, link.signal_power(), link.noise_at(f_c), None, None).rescaled(peak))
}

/// Signal power against RF frequency, evaluated point by point in parallel.
pub fn frequency_response_sweep(cfg: &LinkConfig, f_grid: &[f64], model: Model) -> Result<Vec<ResponsePoint>> {
    if f_grid.is_empty() {
        return Err(Error::invalid("f_grid", "empty frequency grid"));
    }
    let powers: Vec<f64> = f_grid
        .par_iter()
        .map(|&f| signal_power(cfg, f, model))
        .collect::<Result<_>>()?;
    let max = powers.iter().cloned().fold(0.0, f64::max);
    Ok(f_grid
        .iter()
        .zip(powers)
        .map(|(&f_m, power)| ResponsePoint { f_m, power, normalized_db: linear_to_db(power / max) })
        .collect())
}
