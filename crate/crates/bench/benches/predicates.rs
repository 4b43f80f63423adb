use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fibcat::constructions::{arrow_category, artin_gluing, codomain_fibration};
use fibcat::corpus::{random_lattice, rng, sample_functor};
use fibcat::fibration::Fibration;
use fibcat::fixtures::f_bad;
use fibcat::moens::{bcc_via_transport, is_generalized_moens, is_moens, satisfies_bcc};
use fibcat::theorem::{roundtrip_psi_phi, TheoremMode};

// Flags are cached per fibration, so every iteration starts from a fresh copy
// of the projection.
fn fresh(p: &Fibration) -> Fibration {
    Fibration::new(p.proj().clone())
}

fn constructions(c: &mut Criterion) {
    let mut g = c.benchmark_group("construct");
    for n in [4usize, 6, 8] {
        let l = Arc::new(random_lattice(n, &mut rng(1)));
        g.bench_with_input(BenchmarkId::new("arrow", n), &l, |b, l| {
            b.iter(|| arrow_category(black_box(l)).unwrap())
        });
        let f = sample_functor(2, n).unwrap();
        g.bench_with_input(BenchmarkId::new("gluing", n), &f, |b, f| {
            b.iter(|| artin_gluing(black_box(f)).unwrap())
        });
    }
    g.finish();
}

fn predicates(c: &mut Criterion) {
    let mut g = c.benchmark_group("predicate");
    g.sample_size(20);
    let mut inputs = vec![("gl(F_bad)".to_string(), artin_gluing(&f_bad()).unwrap().fibration)];
    for n in [4usize, 6] {
        let l = Arc::new(random_lattice(n, &mut rng(3)));
        inputs.push((format!("cod(L{n})"), codomain_fibration(&l).unwrap()));
    }
    for (name, p) in &inputs {
        g.bench_with_input(BenchmarkId::new("bcc", name), p, |b, p| {
            b.iter(|| satisfies_bcc(&fresh(p)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("bcc-transport", name), p, |b, p| {
            b.iter(|| bcc_via_transport(&fresh(p)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("moens", name), p, |b, p| {
            b.iter(|| is_moens(&fresh(p)))
        });
        g.bench_with_input(BenchmarkId::new("gen-moens", name), p, |b, p| {
            b.iter(|| is_generalized_moens(&fresh(p)))
        });
    }
    g.finish();
}

fn round_trips(c: &mut Criterion) {
    let l = Arc::new(random_lattice(5, &mut rng(7)));
    let p = codomain_fibration(&l).unwrap();
    c.bench_function("roundtrip/psi-phi cod(L5)", |b| {
        b.iter(|| roundtrip_psi_phi(&fresh(&p), TheoremMode::Moens).unwrap())
    });
}

criterion_group!(benches, constructions, predicates, round_trips);
criterion_main!(benches);
