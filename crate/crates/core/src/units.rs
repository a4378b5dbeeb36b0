//! Physical constants and the unit conversions used at API boundaries.
//!
//! Everything inside the crate is SI: seconds, hertz, watts, metres.

/// Vacuum speed of light [m/s] (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Boltzmann constant [J/K] (exact, 2019 SI).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Standard noise temperature for noise-figure definitions [K].
pub const STANDARD_NOISE_TEMPERATURE: f64 = 290.0;

pub const PICOSECOND: f64 = 1e-12;
pub const NANOMETRE: f64 = 1e-9;
pub const GIGAHERTZ: f64 = 1e9;

/// 1 ps/nm expressed in s/m.
pub const PS_PER_NM: f64 = PICOSECOND / NANOMETRE;

/// 1 ps² in s².
pub const PS2: f64 = PICOSECOND * PICOSECOND;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * db_to_linear(dbm)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    linear_to_db(w / 1e-3)
}

/// Optical frequency of a vacuum wavelength.
pub fn wavelength_to_frequency(lambda: f64) -> f64 {
    SPEED_OF_LIGHT / lambda
}

/// Frequency width of an optical band of width `delta_lambda` centred on `lambda`.
pub fn wavelength_span_to_bandwidth(lambda: f64, delta_lambda: f64) -> f64 {
    SPEED_OF_LIGHT / (lambda - 0.5 * delta_lambda) - SPEED_OF_LIGHT / (lambda + 0.5 * delta_lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn db_round_trip() {
        for db in [-30.0, 0.0, 3.0, 94.9] {
            assert!((linear_to_db(db_to_linear(db)) - db).abs() < 1e-12);
        }
        assert!((dbm_to_watts(0.0) - 1e-3).abs() < 1e-18);
        assert!((watts_to_dbm(1.0) - 30.0).abs() < 1e-12);
    }

    #[test]
    fn bandwidth_of_3p2_nm_at_1550() {
        let b = wavelength_span_to_bandwidth(1550.0 * NANOMETRE, 3.2 * NANOMETRE);
        // first-order estimate c·Δλ/λ² = 399.31 GHz
        assert!((b / 1e9 - 399.3078).abs() < 1e-3, "{b}");
    }
}
