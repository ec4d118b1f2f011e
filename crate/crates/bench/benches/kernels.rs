use criterion::{black_box, criterion_group, criterion_main, Criterion};
use dphase_core::airy::{ai_general, ai_root};
use dphase_core::airy_integrals::varphi;
use dphase_core::deformed_exp::{find_root, EntireFnSpec, GGFKind};
use dphase_core::families::{probability_at_prec, EdgeProb, FamilySpec, ModelKind};
use dphase_core::series::TruncatedSeries;
use dphase_core::strong::s_r;
use rug::{Complex, Float, Rational};

fn series(c: &mut Criterion) {
    let f = TruncatedSeries::from_fn(200, |k| Rational::from((1, k as u64 + 1)));
    c.bench_function("series_log_200", |b| b.iter(|| black_box(&f).log().unwrap()));
    c.bench_function("strong_s4", |b| b.iter(|| s_r(black_box(4)).unwrap()));
}

fn airy(c: &mut Criterion) {
    let z = Complex::with_val(128, ai_root(1, true, 128).unwrap());
    c.bench_function("ai_minus_two_at_first_derivative_zero", |b| b.iter(|| ai_general(-2, black_box(&z))));
    let mu = Float::with_val(128, 1);
    c.bench_function("varphi_mu_1", |b| b.iter(|| varphi(black_box(&mu)).unwrap()));
}

fn roots(c: &mut Criterion) {
    let w = Float::with_val(96, 1);
    c.bench_function("first_simple_root", |b| {
        b.iter(|| find_root(1, black_box(&w), 0, &EntireFnSpec::One, GGFKind::SimpleGraphic).unwrap())
    });
}

fn probabilities(c: &mut Criterion) {
    let mut g = c.benchmark_group("probability");
    g.sample_size(10);
    let p = EdgeProb::Window(Rational::from(1));
    for n in [100u32, 400] {
        g.bench_function(format!("acyclic_md_n{n}"), |b| {
            b.iter(|| probability_at_prec(FamilySpec::Acyclic, ModelKind::MD, black_box(n), &p, 2 * n + 128).unwrap())
        });
    }
    g.finish();
}

criterion_group!(kernels, series, airy, roots, probabilities);
criterion_main!(kernels);
