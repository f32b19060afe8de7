use criterion::{black_box, criterion_group, criterion_main, Criterion};

use motbiv_core::genus::chi_y;
use motbiv_core::harness::{blowup_suite, generate, run_suite, DEFAULT_BUDGET};
use motbiv_core::varmodel::{make_blowup_linear, make_proj};

fn genus(c: &mut Criterion) {
    c.bench_function("chi_y P(6)", |b| b.iter(|| chi_y(black_box(&make_proj(6)))));
    let bl = make_blowup_linear(3, 1).unwrap();
    c.bench_function("chi_y blowup(P(3),P(1))", |b| {
        b.iter(|| chi_y(black_box(&bl)))
    });
}

fn suites(c: &mut Criterion) {
    let mut g = c.benchmark_group("suites");
    g.sample_size(10);
    g.bench_function("blowup (2,0)", |b| b.iter(|| blowup_suite(2, 0)));
    let s = generate(0, DEFAULT_BUDGET);
    g.bench_function("seed 0", |b| b.iter(|| run_suite(black_box(&s))));
    g.finish();
}

criterion_group!(benches, genus, suites);
criterion_main!(benches);
