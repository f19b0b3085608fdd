use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spiralarc::model::{endpoint_set, SpiralModel};
use spiralarc::oval::{closeness_sweep, frame, OvalSpec, Split, SweepOptions};
use spiralarc::Exec;

const POLICIES: [(&str, Exec); 2] = [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)];

fn spiral_cloud(c: &mut Criterion) {
    let model = SpiralModel::new(0.3, 1.0, 3.0).unwrap();
    let mut g = c.benchmark_group("endpoint_set");
    g.sample_size(10);
    for grid in [16, 32] {
        for (name, exec) in POLICIES {
            g.bench_with_input(BenchmarkId::new(name, grid), &grid, |b, &grid| {
                b.iter(|| endpoint_set(black_box(&model), grid, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn oval(c: &mut Criterion) {
    let spec = OvalSpec::new([0.25, 0.8, 0.07, 0.85], [3.5, 3.2, 4.3, 4.0]).unwrap();
    let mut g = c.benchmark_group("oval");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        g.bench_function(BenchmarkId::new("frame", name), |b| {
            b.iter(|| frame(black_box(&spec), Split::Mu, 0.9 * PI, 10, exec).unwrap())
        });
        let opts = SweepOptions {
            steps: 12,
            exec,
            ..SweepOptions::default()
        };
        g.bench_function(BenchmarkId::new("sweep", name), |b| {
            b.iter(|| closeness_sweep(black_box(&spec), Split::Mu, &opts).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, spiral_cloud, oval);
criterion_main!(benches);
