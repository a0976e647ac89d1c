//! Compare the rayon data-parallel enumeration paths against the
//! always-compiled sequential fallbacks.
//!
//! Schemes memoize their enumerations, so every iteration builds a fresh
//! instance to measure the real work.

use criterion::{criterion_group, criterion_main, Criterion};
use nclf::ff::FqField;
use nclf::lfun::{l_function, l_function_sequential};
use nclf::ring::Ring;
use nclf::sheaf::{GaloisCovering, SheafRep};
use nclf::variety::{Poly, Scheme};

fn f5() -> FqField {
    FqField::new(5, 1).unwrap()
}

fn f3() -> FqField {
    FqField::new(3, 1).unwrap()
}

fn curve_f3() -> Scheme {
    let f3 = f3();
    let y2 = Poly::monomial(&f3, 2, 1, 2, f3.one());
    let rhs = Poly::monomial(&f3, 2, 0, 3, f3.one()).sub(&Poly::var(&f3, 2, 0));
    Scheme::affine(&f3, 2, vec![y2.sub(&rhs)], vec![]).unwrap()
}

fn bench_point_counts(c: &mut Criterion) {
    let mut g = c.benchmark_group("point_count_curve_f3_n6");
    g.sample_size(10);
    g.bench_function("parallel", |b| {
        b.iter(|| curve_f3().point_count(6).unwrap())
    });
    g.bench_function("sequential", |b| {
        b.iter(|| curve_f3().point_count_sequential(6).unwrap())
    });
    g.finish();
}

fn bench_closed_points(c: &mut Criterion) {
    let mut g = c.benchmark_group("closed_points_gm_f5_deg6");
    g.sample_size(10);
    g.bench_function("parallel", |b| {
        b.iter(|| {
            Scheme::builtin("Gm", &f5())
                .unwrap()
                .closed_points(6)
                .unwrap()
                .len()
        })
    });
    g.bench_function("sequential", |b| {
        b.iter(|| {
            Scheme::builtin("Gm", &f5())
                .unwrap()
                .closed_points_sequential(6)
                .unwrap()
                .len()
        })
    });
    g.finish();
}

fn bench_l_function(c: &mut Criterion) {
    let z13 = Ring::zmod(13).unwrap();
    let make = || {
        let gm = Scheme::builtin("Gm", &f5()).unwrap();
        let cov = GaloisCovering::kummer(gm.clone(), 4, Poly::var(&f5(), 1, 0)).unwrap();
        (SheafRep::regular(cov, &z13), gm)
    };
    let mut g = c.benchmark_group("l_function_regular_c4_gm_f5_m6");
    g.sample_size(10);
    g.bench_function("parallel", |b| {
        b.iter(|| {
            let (sheaf, gm) = make();
            l_function(&sheaf, &gm, 6).unwrap()
        })
    });
    g.bench_function("sequential", |b| {
        b.iter(|| {
            let (sheaf, gm) = make();
            l_function_sequential(&sheaf, &gm, 6).unwrap()
        })
    });
    g.finish();
}

criterion_group!(
    benches,
    bench_point_counts,
    bench_closed_points,
    bench_l_function
);
criterion_main!(benches);
