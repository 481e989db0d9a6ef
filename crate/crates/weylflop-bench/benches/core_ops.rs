//! Benchmarks for the heavy core operations: root generation, Garside
//! normal forms, group closures with character tables, and flop traces.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use weylflop_core::artin::{normal_form, ArtinWord};
use weylflop_core::diagram::DynkinDiagram;
use weylflop_core::family::{braid_flop_trace, generic_section, BaseModel};
use weylflop_core::folding::Folding;
use weylflop_core::mckay::{build_group, character_table, GroupKind};
use weylflop_core::roots::RootSystem;

fn bench_root_generation(c: &mut Criterion) {
    c.bench_function("positive_roots_e8", |b| {
        b.iter(|| {
            let sys = RootSystem::new(DynkinDiagram::parse_str("E8").unwrap());
            black_box(sys.positive_roots().len())
        })
    });
}

fn bench_normal_form(c: &mut Criterion) {
    let sys = RootSystem::new(DynkinDiagram::parse_str("D5").unwrap());
    let word = ArtinWord::new(5, &[1, -3, 2, 5, -4, 1, 2, -2, 3, 4, -1, 5, 2, 3]).unwrap();
    c.bench_function("normal_form_d5_len14", |b| {
        b.iter(|| black_box(normal_form(&sys, &word).unwrap().canonical_length()))
    });
}

fn bench_folding(c: &mut Criterion) {
    c.bench_function("fold_e6_to_f4", |b| {
        b.iter(|| {
            let folding = Folding::parse_desc("E6/(1 5)(2 4)").unwrap();
            black_box(folding.xi().rank())
        })
    });
    let folding = Folding::parse_desc("E6/(1 5)(2 4)").unwrap();
    c.bench_function("verify_folded_braid_f4", |b| {
        b.iter(|| black_box(folding.verify_folded_braid().all_ok()))
    });
}

fn bench_mckay(c: &mut Criterion) {
    c.bench_function("binary_icosahedral_closure", |b| {
        b.iter(|| black_box(build_group(GroupKind::BinaryIcosahedral, 0).unwrap().order()))
    });
    let group = build_group(GroupKind::BinaryIcosahedral, 0).unwrap();
    c.bench_function("character_table_2i", |b| {
        b.iter(|| black_box(character_table(&group).unwrap().class_count()))
    });
}

fn bench_flop_trace(c: &mut Criterion) {
    let folding = Folding::parse_desc("trivial:A2").unwrap();
    let base = BaseModel::default_for(&folding);
    let (section, _) = generic_section(&folding, &base, 7).unwrap();
    c.bench_function("braid_flop_trace_a2", |b| {
        b.iter(|| black_box(braid_flop_trace(0, 1, &section).unwrap().all_ok()))
    });
}

criterion_group!(
    benches,
    bench_root_generation,
    bench_normal_form,
    bench_folding,
    bench_mckay,
    bench_flop_trace
);
criterion_main!(benches);
