use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use coverstream_bench::{medium_instance, small_instance};
use coverstream_core::baselines::exact_cover;
use coverstream_core::edifice::{verify_edifice, Edifice, VerifyMode, DEFAULT_VERTEX_CAP};
use coverstream_core::er::partial_cover_solve;
use coverstream_core::generators::tightness_instance;
use coverstream_core::{prog_greedy, prog_greedy_naive, Field, Frac, MeteredStream, SpaceMeter};

fn bench_progressive_greedy(c: &mut Criterion) {
    let instance = medium_instance(7);
    let mut group = c.benchmark_group("progressive_greedy");
    for p in [1u32, 2, 3] {
        group.bench_with_input(BenchmarkId::new("folded", p), &p, |b, &p| {
            b.iter(|| {
                let mut meter = SpaceMeter::new();
                let run = prog_greedy(&mut MeteredStream::new(&instance), p, &mut meter);
                black_box(run.cert.sol_size())
            })
        });
        group.bench_with_input(BenchmarkId::new("naive", p + 1), &p, |b, &p| {
            b.iter(|| {
                let mut meter = SpaceMeter::new();
                let run = prog_greedy_naive(&mut MeteredStream::new(&instance), p + 1, &mut meter);
                black_box(run.cert.sol_size())
            })
        });
    }
    group.finish();
}

fn bench_partial_cover(c: &mut Criterion) {
    let instance = medium_instance(11);
    let eps = Frac::new(1, 4).unwrap();
    c.bench_function("partial_cover_p2_eps0.25", |b| {
        b.iter(|| {
            let mut meter = SpaceMeter::new();
            let cert = partial_cover_solve(&mut MeteredStream::new(&instance), 2, eps, &mut meter)
                .unwrap();
            black_box(cert.sol_size())
        })
    });
}

fn bench_exact_oracle(c: &mut Criterion) {
    let instance = small_instance(3);
    c.bench_function("exact_oracle_n30", |b| {
        b.iter(|| black_box(exact_cover(&instance, instance.n(), 10_000_000).opt_size))
    });
}

fn bench_edifice_verification(c: &mut Criterion) {
    let edifice = Edifice::new(3, 0, Field::new(3, 1).unwrap()).unwrap();
    c.bench_function("verify_edifice_3_0_3", |b| {
        b.iter(|| {
            let report =
                verify_edifice(&edifice, VerifyMode::Exhaustive, DEFAULT_VERTEX_CAP).unwrap();
            black_box(report.max_intersection)
        })
    });
}

fn bench_tightness_generation(c: &mut Criterion) {
    c.bench_function("tightness_gen_p3_q5", |b| {
        b.iter(|| black_box(tightness_instance(3, 5).unwrap().m()))
    });
}

criterion_group!(
    benches,
    bench_progressive_greedy,
    bench_partial_cover,
    bench_exact_oracle,
    bench_edifice_verification,
    bench_tightness_generation
);
criterion_main!(benches);
