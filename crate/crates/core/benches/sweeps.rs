use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use cjlab_core::choice::interdep::{check_interdependency, row, InterdepOptions};
use cjlab_core::consequence::correspondence_sweep;
use cjlab_core::par::Exec;
use cjlab_core::sweeps;

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn soundness(c: &mut Criterion) {
    let mut g = c.benchmark_group("soundness_100");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(sweeps::soundness(7, 100, 4, exec)))
        });
    }
    g.finish();
}

fn normalization(c: &mut Criterion) {
    let mut g = c.benchmark_group("normalization_z3");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(sweeps::normalization(3, exec)))
        });
    }
    g.finish();
}

fn interdependency(c: &mut Criterion) {
    let mut g = c.benchmark_group("interdep_row_19");
    g.sample_size(10);
    let r = row("19").expect("row");
    for (name, exec) in MODES {
        let opts = InterdepOptions {
            exec,
            ..InterdepOptions::default()
        };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(check_interdependency(r, &opts)))
        });
    }
    g.finish();
}

fn correspondence(c: &mut Criterion) {
    let mut g = c.benchmark_group("correspondence_2atoms_2000");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(correspondence_sweep(2, Some((1, 2000)), exec)))
        });
    }
    g.finish();
}

fn modal(c: &mut Criterion) {
    let mut g = c.benchmark_group("modal_w3");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(sweeps::modal_agreement(3, exec)))
        });
    }
    g.finish();
}

criterion_group!(
    benches,
    soundness,
    normalization,
    interdependency,
    correspondence,
    modal
);
criterion_main!(benches);
