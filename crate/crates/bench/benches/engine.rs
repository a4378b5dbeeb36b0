use criterion::{black_box, criterion_group, criterion_main, Criterion};

use mpfsim_core::analytic::{frequency_response_sweep, general_intensity_psd, snr_pm, snr_ssb, Model};
use mpfsim_core::montecarlo::{synthesize_field, welch_psd, Propagator, SimulationGrid, WelchConfig};
use mpfsim_core::presets::{nominal_link, nominal_pm, nominal_ssb};
use mpfsim_core::SchemeConfig;

fn analytic(c: &mut Criterion) {
    let ssb = nominal_ssb(3.2);
    let pm = nominal_pm(3.2);
    c.bench_function("snr_ssb", |b| b.iter(|| snr_ssb(black_box(&ssb)).unwrap()));
    c.bench_function("snr_pm", |b| b.iter(|| snr_pm(black_box(&pm)).unwrap()));

    let grid: Vec<f64> = (0..1024).map(|i| 0.1e9 + i as f64 * 31.25e6).collect();
    let fc = ssb.center_frequency().unwrap();
    c.bench_function("general_intensity_psd_1024", |b| {
        b.iter(|| general_intensity_psd(black_box(&pm), fc, &grid).unwrap())
    });

    let dsb = nominal_link(SchemeConfig::dsb(0.39), 3.2).unwrap();
    let sweep: Vec<f64> = (1..=400).map(|i| i as f64 * 50e6).collect();
    c.bench_function("dsb_response_400", |b| {
        b.iter(|| frequency_response_sweep(black_box(&dsb), &sweep, Model::Exact).unwrap())
    });
}

fn montecarlo(c: &mut Criterion) {
    let cfg = nominal_ssb(3.2);
    let grid = SimulationGrid::default();
    let fc = cfg.center_frequency().unwrap();
    let prop = Propagator::new(&cfg, &grid, fc).unwrap();
    let field = synthesize_field(&cfg.spectrum, &grid, 1).unwrap();
    let intensity = prop.intensity(&field);
    let welch = WelchConfig::for_length(grid.n_samples());

    let mut g = c.benchmark_group("realization_2e20");
    g.sample_size(10);
    g.bench_function("synthesize", |b| b.iter(|| synthesize_field(&cfg.spectrum, &grid, black_box(1)).unwrap()));
    g.bench_function("propagate", |b| b.iter(|| prop.intensity(black_box(&field))));
    g.bench_function("welch", |b| b.iter(|| welch_psd(black_box(&intensity), grid.dt(), &welch).unwrap()));
    g.finish();
}

criterion_group!(benches, analytic, montecarlo);
criterion_main!(benches);
