use mpfsim_core::analytic::{
    frequency_response_sweep, noise_figure, oeo_phase_noise_curve, passband_shape, signal_power, snr_at_center,
    delta_from_snr, GeneralLink, Model,
};
use mpfsim_core::montecarlo::{estimate_line, estimate_passband, estimate_spectrum, McSettings};
use mpfsim_core::units::linear_to_db;
use mpfsim_core::LinkConfig;

use crate::error::{CliError, CliResult};
use crate::quantity::{si, Dimension};
use crate::scenario::{Axis, Overrides, Scenario, Sweep};
use crate::table::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub mc: bool,
    pub compare: bool,
    pub tol_db: f64,
    pub seed: Option<u64>,
    pub absolute: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { mc: false, compare: false, tol_db: 0.5, seed: None, absolute: false }
    }
}

/// A finished table and how many rows failed `--compare`.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub failures: usize,
}

fn expect_axis(sweep: &Sweep, allowed: &[Axis], command: &str) -> CliResult<()> {
    if allowed.contains(&sweep.axis) {
        return Ok(());
    }
    let names: Vec<_> = allowed.iter().map(|a| a.name()).collect();
    Err(CliError::config(format!(
        "`sweep.variable`: {command} sweeps {}, not {}",
        names.join(" or "),
        sweep.axis.name()
    )))
}

fn mc_settings(scn: &Scenario, opts: &RunOptions) -> CliResult<Option<McSettings>> {
    opts.mc.then(|| scn.mc_settings(opts.seed)).transpose()
}

fn core<T>(context: &str, r: mpfsim_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError::core(context, e))
}

fn normalize(values: &[f64], absolute: bool) -> Vec<f64> {
    let peak = values.iter().copied().fold(f64::MIN, f64::max);
    values.iter().map(|&v| linear_to_db(if absolute { v } else { v / peak })).collect()
}

/// Detected RF power of the tone against `f_m`.
pub fn run_response(scn: &Scenario, opts: &RunOptions) -> CliResult<Outcome> {
    let sweep = scn.sweep()?;
    expect_axis(&sweep, &[Axis::Fm], "response")?;
    if opts.compare {
        return Err(CliError::config("--compare is available for snr and passband"));
    }
    let cfg = scn.link()?.build(Overrides::default())?;
    let mc = mc_settings(scn, opts)?;
    let curve = core("response", frequency_response_sweep(&cfg, &sweep.values, scn.model()?))?;
    let analytic = normalize(&curve.iter().map(|p| p.power).collect::<Vec<_>>(), opts.absolute);
    let mut columns = vec!["f_m_hz", "signal_power_db", "scheme"];
    let mut mc_cols = Vec::new();
    if let Some(s) = &mc {
        columns.extend(["mc_f_m_hz", "mc_signal_power_db", "mc_stderr_db"]);
        let lines = sweep
            .values
            .iter()
            .map(|&f| core("mc", estimate_line(&cfg, s, f)))
            .collect::<CliResult<Vec<_>>>()?;
        let db = normalize(&lines.iter().map(|l| l.power.mean).collect::<Vec<_>>(), opts.absolute);
        mc_cols = lines.iter().zip(db).map(|(l, d)| (l.f_m, d, l.power.standard_error_db())).collect();
    }
    let mut table = Table::new(columns);
    for (i, p) in curve.iter().enumerate() {
        let mut row = vec![p.f_m.into(), analytic[i].into(), cfg.scheme.kind.name().into()];
        if let Some(&(f, d, e)) = mc_cols.get(i) {
            row.extend([f.into(), d.into(), e.into()]);
        }
        table.push(row);
    }
    Ok(Outcome { table, failures: 0 })
}

/// Exact SNR at the tone the estimator actually used.
fn exact_snr_db_at(cfg: &LinkConfig, f_m: f64) -> CliResult<f64> {
    let (norm, _) = cfg.normalized();
    let g = core("snr", GeneralLink::new(&norm, f_m))?;
    Ok(linear_to_db(g.signal_power() / g.noise_at(f_m).total()))
}

/// SNR, approximation and noise figure at the passband centre against the swept variable.
pub fn run_snr(scn: &Scenario, opts: &RunOptions) -> CliResult<Outcome> {
    let sweep = scn.sweep()?;
    expect_axis(&sweep, &[Axis::Gamma, Axis::Csr, Axis::Fc, Axis::Delay, Axis::Bandwidth], "snr")?;
    let link = scn.link()?;
    let p_in = link.input_power()?;
    let mc = mc_settings(scn, opts)?;
    let expected = match (&scn.expect, opts.compare) {
        (Some(e), true) => Some(si("expect.snr", &e.snr, Dimension::DecibelHertz)?),
        (None, true) if mc.is_none() => {
            return Err(CliError::config("--compare needs an [expect] section or --mc"));
        }
        _ => None,
    };
    let mut columns = vec!["x", "snr_exact_dbhz", "snr_approx_dbhz"];
    if p_in.is_some() {
        columns.push("nf_db");
    }
    if mc.is_some() {
        columns.extend(["mc_snr_dbhz", "mc_stderr_db"]);
    }
    if opts.compare {
        columns.push("compare");
    }
    let mut table = Table::new(columns);
    let mut failures = 0;
    for &x in &sweep.values {
        let cfg = link.build(Overrides::for_axis(sweep.axis, x)?)?;
        let report = core("snr", snr_at_center(&cfg))?;
        let mut row: Vec<Cell> = vec![x.into(), report.snr_db_hz.into(), report.approx_formula_db_hz.into()];
        if let Some(p) = p_in {
            row.push(core("link.input_power", noise_figure(p, report.snr_linear))?.into());
        }
        let mut deviation = expected.map(|e| report.snr_db_hz - e);
        if let Some(s) = &mc {
            let est = core("mc", estimate_spectrum(&cfg, s, report.f_m, &[]))?;
            row.extend([est.snr_db_hz.into(), est.snr_stderr_db.into()]);
            if deviation.is_none() {
                deviation = Some(est.snr_db_hz - exact_snr_db_at(&cfg, est.f_m)?);
            }
        }
        if opts.compare {
            let pass = deviation.is_some_and(|d| d.abs() <= opts.tol_db);
            failures += usize::from(!pass);
            row.push(if pass { "pass" } else { "fail" }.into());
        }
        table.push(row);
    }
    Ok(Outcome { table, failures })
}

/// Passband around the centre: exact, the sinc² shape, and optionally MC.
pub fn run_passband(scn: &Scenario, opts: &RunOptions) -> CliResult<Outcome> {
    let sweep = scn.sweep()?;
    expect_axis(&sweep, &[Axis::Detuning], "passband")?;
    let cfg = scn.link()?.build(Overrides::default())?;
    let fc = core("passband", cfg.center_frequency())?;
    let mc = mc_settings(scn, opts)?;
    if opts.compare && mc.is_none() {
        return Err(CliError::config("passband --compare checks Monte-Carlo against exact and needs --mc"));
    }
    let power = |f: f64| core("passband", signal_power(&cfg, f, Model::Exact));
    let exact: Vec<f64> = sweep.values.iter().map(|&d| power(fc + d)).collect::<CliResult<_>>()?;
    let exact_db = normalize(&exact, opts.absolute);
    let mut columns = vec!["detuning_hz", "f_m_hz", "exact_db", "sinc2_db"];
    let mut mc_rows = Vec::new();
    let mut failures = 0;
    if let Some(s) = &mc {
        columns.extend(["mc_f_m_hz", "mc_db", "mc_stderr_db"]);
        let pts = core("mc", estimate_passband(&cfg, s, &sweep.values))?;
        let mc_db = normalize(&pts.iter().map(|p| p.power.mean).collect::<Vec<_>>(), opts.absolute);
        let at_snapped: Vec<f64> = pts.iter().map(|p| power(p.f_m)).collect::<CliResult<_>>()?;
        let ref_db = normalize(&at_snapped, opts.absolute);
        for (i, p) in pts.iter().enumerate() {
            let pass = (mc_db[i] - ref_db[i]).abs() <= opts.tol_db;
            if opts.compare {
                failures += usize::from(!pass);
            }
            mc_rows.push((p.f_m, mc_db[i], p.power.standard_error_db(), pass));
        }
    }
    if opts.compare {
        columns.push("compare");
    }
    let mut table = Table::new(columns);
    for (i, &d) in sweep.values.iter().enumerate() {
        let mut row: Vec<Cell> =
            vec![d.into(), (fc + d).into(), exact_db[i].into(), linear_to_db(passband_shape(&cfg, d)).into()];
        if let Some(&(f, m, e, pass)) = mc_rows.get(i) {
            row.extend([f.into(), m.into(), e.into()]);
            if opts.compare {
                row.push(if pass { "pass" } else { "fail" }.into());
            }
        }
        table.push(row);
    }
    Ok(Outcome { table, failures })
}

/// Oscillator phase-noise spectrum against offset.
pub fn run_oeo(scn: &Scenario, opts: &RunOptions) -> CliResult<Outcome> {
    let sweep = scn.sweep()?;
    expect_axis(&sweep, &[Axis::Offset], "oeo")?;
    if opts.compare || opts.mc {
        return Err(CliError::config("oeo takes neither --compare nor --mc"));
    }
    let oeo = scn.oeo.as_ref().ok_or_else(|| CliError::config("oeo needs an [oeo] section"))?;
    let tau = si("oeo.loop_delay", &oeo.loop_delay, Dimension::Time)?;
    let delta = match &oeo.delta {
        Some(t) => si("oeo.delta", t, Dimension::Time)?,
        None => {
            let cfg = scn.link()?.build(Overrides::default())?;
            delta_from_snr(&core("snr", snr_at_center(&cfg))?)
        }
    };
    let curve = core("oeo", oeo_phase_noise_curve(delta, tau, &sweep.values))?;
    let mut table = Table::new(["f_offset_hz", "s_rf_db", "peak"]);
    for p in curve {
        table.push(vec![p.f_offset.into(), p.s_rf_db.into(), p.is_peak.into()]);
    }
    Ok(Outcome { table, failures: 0 })
}
