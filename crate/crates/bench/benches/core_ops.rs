use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use k3lat_core::clifford_ks::kuga_satake_report;
use k3lat_core::disc_form::{discriminant_form, find_anti_isometry, isometry_orbits, Discriminant};
use k3lat_core::elliptic_fib::verify_scenario;
use k3lat_core::group_iso::{phi, random_words, su22_generators};
use k3lat_core::lattice::parse_sum;
use k3lat_core::symbolic::verify_conic_nodes;
use k3lat_core::wall_orbits::orbit_table;

fn lattices(c: &mut Criterion) {
    let ns = parse_sum("U+D6^2+A1^2").unwrap();
    let t = parse_sum("U(2)^2+A1^2").unwrap();
    c.bench_function("determinant rank 16", |b| b.iter(|| black_box(&ns).determinant()));
    c.bench_function("discriminant form rank 16", |b| b.iter(|| discriminant_form(black_box(&ns)).unwrap()));
    let (qn, qt) = (discriminant_form(&ns).unwrap(), discriminant_form(&t).unwrap());
    c.bench_function("anti-isometry search 2^6", |b| b.iter(|| find_anti_isometry(&qn, &qt).unwrap()));
    let disc = Discriminant::scaled_basis(&t, 2).unwrap();
    c.bench_function("orbits of q_T(2)", |b| b.iter(|| isometry_orbits(disc.form()).unwrap()));
}

fn classification(c: &mut Criterion) {
    c.bench_function("orbit table to 200", |b| b.iter(|| orbit_table(black_box(200))));
    c.bench_function("kuga-satake delta 210", |b| b.iter(|| kuga_satake_report(black_box(210)).unwrap()));
    c.bench_function("verify generic-standard", |b| b.iter(|| verify_scenario("generic-standard").unwrap()));
}

fn groups_and_polynomials(c: &mut Criterion) {
    let words = random_words(&su22_generators(), 16, 6, 7);
    c.bench_function("phi on 16 words", |b| b.iter(|| words.iter().map(|w| phi(w).unwrap()).collect::<Vec<_>>()));
    let mut slow = c.benchmark_group("symbolic");
    slow.sample_size(10);
    slow.bench_function("conic nodes", |b| b.iter(|| verify_conic_nodes().unwrap()));
    slow.finish();
}

criterion_group!(benches, lattices, classification, groups_and_polynomials);
criterion_main!(benches);
