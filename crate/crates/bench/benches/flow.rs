use criterion::{black_box, criterion_group, criterion_main, Criterion};
use homflow_bench::{flow_start, generic_metric};
use homflow_core::{integrate, ricci_closed, ricci_oracle, Case, IntegratorOptions};

fn ricci(c: &mut Criterion) {
    for case in Case::ALL {
        let model = case.model();
        let m = generic_metric(case);
        c.bench_function(&format!("ricci_oracle/{case}"), |b| {
            b.iter(|| ricci_oracle(black_box(&model), black_box(&m)).unwrap())
        });
        c.bench_function(&format!("ricci_closed/{case}"), |b| {
            b.iter(|| ricci_closed(black_box(&m)).unwrap())
        });
    }
}

fn flow(c: &mut Criterion) {
    let mut group = c.benchmark_group("integrate");
    group.sample_size(10);
    for case in Case::ALL {
        let m0 = flow_start(case);
        let opts = IntegratorOptions::default();
        group.bench_function(case.as_str(), |b| {
            b.iter(|| integrate(black_box(&m0), &opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, ricci, flow);
criterion_main!(benches);
