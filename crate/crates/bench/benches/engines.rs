use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use tvrt::rt::SkeinEvaluator;
use tvrt::{census, rt_invariant, tv_state_sum, FramedLink, Level, Method, ModularData, TvOptions};

fn modular_data(c: &mut Criterion) {
    let mut group = c.benchmark_group("modular_data");
    for r in [5, 8] {
        group.bench_with_input(BenchmarkId::from_parameter(r), &r, |b, &r| {
            b.iter(|| ModularData::new(Level::new(black_box(r)).unwrap()))
        });
    }
    group.finish();
}

fn state_sums(c: &mut Criterion) {
    let md = ModularData::new(Level::new(5).unwrap());
    let mut group = c.benchmark_group("tv_r5");
    group.sample_size(20);
    for name in ["S3_2tet", "L5_1", "L2_1#L2_1"] {
        let t = &census()[name];
        for method in [Method::Brute, Method::Pruned, Method::Contract] {
            if method == Method::Brute && name == "L2_1#L2_1" {
                continue;
            }
            let opts = TvOptions { threads: Some(1), ..TvOptions::with_method(method) };
            group.bench_function(BenchmarkId::new(method.to_string(), name), |b| {
                b.iter(|| tv_state_sum(black_box(t), &md, &opts).unwrap())
            });
        }
    }
    group.finish();
}

fn skein(c: &mut Criterion) {
    let md = ModularData::new(Level::new(6).unwrap());
    let ev = SkeinEvaluator::new(&md);
    let hopf = FramedLink::hopf(0, 0);
    c.bench_function("hopf_bracket_4_4_r6", |b| b.iter(|| ev.bracket(black_box(&hopf), &[4, 4]).unwrap()));
    c.bench_function("rt_hopf_5_1_r6", |b| b.iter(|| rt_invariant(black_box(&FramedLink::hopf(5, 1)), &md).unwrap()));
}

criterion_group!(benches, modular_data, state_sums, skein);
criterion_main!(benches);
