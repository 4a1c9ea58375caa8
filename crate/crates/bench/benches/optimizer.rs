// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;

use aop_bench::{instance, signal_arrivals};
use aop_core::baselines::{optimize_baseline, BaselineFamily};
use aop_core::bounds::exact_optimum;
use aop_core::huffman::huffman_delay;
use aop_core::{optimize, Mode};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn dp(c: &mut Criterion) {
    let mut g = c.benchmark_group("optimize");
    for m in [8, 14, 20, 28] {
        let inst = instance(m, 0);
        for mode in [Mode::Delay, Mode::DelaySize] {
            g.bench_with_input(BenchmarkId::new(format!("{mode:?}"), m), &inst, |b, inst| {
                b.iter(|| optimize(black_box(inst), mode).unwrap())
            });
        }
    }
    g.finish();
}

fn baselines(c: &mut Criterion) {
    let mut g = c.benchmark_group("baseline");
    let inst = instance(20, 0);
    for f in BaselineFamily::ALL {
        g.bench_function(f.name(), |b| b.iter(|| optimize_baseline(black_box(&inst), f).unwrap()));
    }
    g.finish();
}

fn huffman(c: &mut Criterion) {
    let mut g = c.benchmark_group("huffman_delay");
    for n in [8, 64, 512] {
        let a = signal_arrivals(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| b.iter(|| huffman_delay(black_box(a)).unwrap()));
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let inst = instance(5, 0);
    c.bench_function("exact_optimum_m5", |b| b.iter(|| exact_optimum(black_box(&inst)).unwrap()));
}

criterion_group!(benches, dp, baselines, huffman, oracle);
criterion_main!(benches);
