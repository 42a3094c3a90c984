use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use burgers_core::analysis;
use burgers_core::closed_form::{self, EvalPoint, SolverConfig};
use burgers_core::greens_engine::{recurse, QuadratureSpec};
use burgers_core::grid::GridField;
use burgers_core::reference::{cole_hopf, fd_solve, fd_stability_bound, ColeHopfSpec};
use burgers_core::transform::{untag, TruncatedSequence};
use burgers_core::C64;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

fn series_benches(c: &mut Criterion) {
    let cfg = SolverConfig::new(1.0, 30).unwrap();
    let p = EvalPoint::new(0.5, 1.5).unwrap();
    c.bench_function("closed_form_term_m30", |b| {
        b.iter(|| closed_form::term(black_box(30), &cfg, &p).unwrap())
    });
    c.bench_function("closed_form_partial_sum_n30", |b| {
        b.iter(|| closed_form::partial_sum(&cfg, black_box(&p)).unwrap())
    });
    c.bench_function("closed_form_term_bound_m50", |b| {
        b.iter(|| closed_form::term_bound(black_box(50), &cfg, 1.0).unwrap())
    });
    c.bench_function("ratio_sequence_m100", |b| {
        b.iter(|| analysis::estimate_r(black_box(100)).unwrap())
    });
}

fn reference_benches(c: &mut Criterion) {
    let spec = ColeHopfSpec::default();
    c.bench_function("cole_hopf_point", |b| {
        b.iter(|| cole_hopf(1.0, black_box(0.5), 1.0, &spec).unwrap())
    });
    let nx = 64;
    let ic: Vec<C64> = (0..nx)
        .map(|j| C64::new(0.0, TWO_PI * j as f64 / nx as f64).exp())
        .collect();
    let dt = 0.8 * fd_stability_bound(nx, TWO_PI, 1.0);
    c.bench_function("fd_solve_to_t0p5", |b| {
        b.iter(|| fd_solve(black_box(&ic), 0.0, TWO_PI, 1.0, dt, &[0.5]).unwrap())
    });
}

fn engine_benches(c: &mut Criterion) {
    let ts: Vec<f64> = (0..33).map(|j| j as f64 / 32.0).collect();
    let template = GridField::zeros_periodic(0.0, TWO_PI, 64, ts);
    c.bench_function("greens_recurse_n3_64x33", |b| {
        b.iter(|| {
            recurse(
                |x| C64::new(0.0, x).exp(),
                1.0,
                black_box(&template),
                3,
                &QuadratureSpec::default(),
            )
            .unwrap()
        })
    });
    let seq = TruncatedSequence::from_closed_form(SolverConfig::new(1.0, 8).unwrap());
    c.bench_function("untag_m4_of_8", |b| {
        b.iter(|| untag(&seq, (black_box(0.7), 0.5), 4, 32).unwrap())
    });
}

criterion_group!(benches, series_benches, reference_benches, engine_benches);
criterion_main!(benches);
