//! Acceptance gate: eight end-to-end criteria, one test (and one printed
//! pass line) each. Every criterion asserts both its mathematical content
//! and its time budget.

use std::time::Instant;

use weylflop_core::artin::{words_equal, ArtinWord};
use weylflop_core::diagram::{DynkinDiagram, TypeTag};
use weylflop_core::family::{
    braid_flop_trace, curve_configuration, flop, generic_section, weyl_act, BaseModel,
    CurveConfiguration,
};
use weylflop_core::folding::{fold, DiagramAutomorphism, Folding};
use weylflop_core::mckay::{build_group, character_table, classify_affine, mckay_graph, GroupKind};
use weylflop_core::roots::RootSystem;
use weylflop_core::seed::{child_seed, rng_from};
use weylflop_core::weyl::verify_coxeter;
use rand::Rng;

fn report(n: usize, what: &str, started: Instant, budget_secs: f64) {
    let elapsed = started.elapsed().as_secs_f64();
    println!("acceptance criterion {n} ({what}): PASS in {elapsed:.2}s");
    assert!(
        elapsed < budget_secs,
        "criterion {n} exceeded its {budget_secs}s budget: {elapsed:.2}s"
    );
}

#[test]
fn criterion_1_folding_table() {
    let started = Instant::now();
    let table = [
        ("A3/(1 3)", TypeTag::C(2)),
        ("A5/(1 5)(2 4)", TypeTag::C(3)),
        ("A7/(1 7)(2 6)(3 5)", TypeTag::C(4)),
        ("D5/(4 5)", TypeTag::B(4)),
        ("D6/(5 6)", TypeTag::B(5)),
        ("E6/(1 5)(2 4)", TypeTag::F4),
        ("D4/(1 3 4)", TypeTag::G2),
        ("D4/(3 4)", TypeTag::C(3)),
    ];
    for (desc, expect) in table {
        let folding = Folding::parse_desc(desc).unwrap_or_else(|e| panic!("{desc}: {e}"));
        assert_eq!(folding.xi().tag(), expect, "{desc}");
    }
    // The order-2 fold of D4 lands on the B3 = C3 Coxeter system; the
    // realization picks the C-normalization, and the two tags agree as
    // Coxeter data.
    let d4 = Folding::parse_desc("D4/(3 4)").unwrap();
    assert!(d4.xi().tag().coxeter_eq(TypeTag::B(3)));
    // Even-rank A diagrams have no valid half-turn fold.
    for desc in ["A2/(1 2)", "A4/(1 4)(2 3)", "A6/(1 6)(2 5)(3 4)"] {
        let (ty, cycles) = desc.split_once('/').unwrap();
        let delta = DynkinDiagram::parse_str(ty).unwrap();
        let auto = DiagramAutomorphism::parse(cycles, delta.rank()).unwrap();
        let id = DiagramAutomorphism::identity(delta.rank());
        assert!(fold(&delta, &[id, auto]).is_err(), "{desc} must be rejected");
    }
    report(1, "folding table", started, 1.0);
}

#[test]
fn criterion_2_mckay_classification() {
    let started = Instant::now();
    let mut cases: Vec<(GroupKind, usize, String)> = Vec::new();
    for n in 2..=8 {
        cases.push((GroupKind::Cyclic, n, format!("A~{}", n - 1)));
    }
    for n in 2..=6 {
        cases.push((GroupKind::BinaryDihedral, n, format!("D~{}", n + 2)));
    }
    cases.push((GroupKind::BinaryTetrahedral, 0, "E~6".to_string()));
    cases.push((GroupKind::BinaryOctahedral, 0, "E~7".to_string()));
    cases.push((GroupKind::BinaryIcosahedral, 0, "E~8".to_string()));
    for (kind, n, affine) in cases {
        let group = build_group(kind, n).unwrap();
        let chars = character_table(&group).unwrap();
        let graph = mckay_graph(&group, &chars).unwrap();
        assert_eq!(graph.node_count(), chars.class_count(), "{kind:?} {n}");
        for a in 0..graph.node_count() {
            for b in 0..graph.node_count() {
                assert_eq!(
                    graph.adjacency[a][b], graph.adjacency[b][a],
                    "{kind:?} {n} adjacency symmetry"
                );
            }
        }
        let class = classify_affine(&graph).unwrap();
        assert_eq!(class.affine_label, affine, "{kind:?} {n}");
    }
    report(2, "McKay classification", started, 60.0);
}

#[test]
fn criterion_3_braid_relations_all_pairs() {
    let started = Instant::now();
    let diagrams = [
        DynkinDiagram::parse_str("A4").unwrap(),
        DynkinDiagram::parse_str("B4").unwrap(),
        DynkinDiagram::parse_str("C4").unwrap(),
        DynkinDiagram::parse_str("D4").unwrap(),
        DynkinDiagram::parse_str("F4").unwrap(),
        DynkinDiagram::parse_str("G2").unwrap(),
    ];
    let mut pairs = 0usize;
    for diagram in diagrams {
        let sys = RootSystem::new(diagram.clone());
        let rank = diagram.rank();
        for i in 0..rank {
            for j in i + 1..rank {
                let m = diagram.label(i, j) as usize;
                let lhs: Vec<usize> = (0..m).map(|t| if t % 2 == 0 { i } else { j }).collect();
                let rhs: Vec<usize> = (0..m).map(|t| if t % 2 == 0 { j } else { i }).collect();
                let u = ArtinWord::from_indices(rank, &lhs);
                let v = ArtinWord::from_indices(rank, &rhs);
                assert!(
                    words_equal(&sys, &u, &v).unwrap(),
                    "{} nodes {} {}",
                    diagram.tag(),
                    i + 1,
                    j + 1
                );
                pairs += 1;
            }
        }
    }
    assert_eq!(pairs, 6 + 6 + 6 + 6 + 6 + 1);
    report(3, "braid relations on all node pairs", started, 10.0);
}

#[test]
fn criterion_4_folded_braid_oracle() {
    let started = Instant::now();
    for desc in [
        "A5/(1 5)(2 4)",
        "D5/(4 5)",
        "E6/(1 5)(2 4)",
        "D4/(1 3 4)",
        "D4/(3 4)",
    ] {
        let folding = Folding::parse_desc(desc).unwrap();
        let verdict = folding.verify_folded_braid();
        assert!(verdict.all_ok(), "{desc}: {:?}", verdict.json());
    }
    report(4, "folded generators satisfy the quotient braid relations", started, 30.0);
}

#[test]
fn criterion_5_flop_braid_coherence() {
    let started = Instant::now();
    let cases = [
        ("trivial:A1xA1", 2usize),
        ("trivial:A2", 3),
        ("A3/(1 3)", 4),
        ("D4/(1 3 4)", 6),
    ];
    let mut passed = 0usize;
    for (desc, m) in cases {
        let folding = Folding::parse_desc(desc).unwrap();
        let base = BaseModel::default_for(&folding);
        for trial in 0..100u64 {
            let (section, _) =
                generic_section(&folding, &base, child_seed(0xacce_2255, trial)).unwrap();
            let verdict = braid_flop_trace(0, 1, &section).unwrap();
            assert_eq!(verdict.braid_label, m, "{desc} trial {trial}");
            assert!(verdict.all_ok(), "{desc} trial {trial}: {:?}", verdict.json());
            assert_eq!(verdict.traces[0].len(), m);
            assert_eq!(verdict.traces[1].len(), m);
            passed += 1;
        }
    }
    assert_eq!(passed, 400);
    report(5, "flop braid coherence 400/400", started, 60.0);
}

#[test]
fn criterion_6_conservation_and_involution() {
    let started = Instant::now();
    let loci_multiset = |c: &CurveConfiguration| {
        let mut all: Vec<(String, u32)> = c
            .entries
            .iter()
            .flat_map(|e| {
                e.factors
                    .iter()
                    .map(|f| (f.poly.primitive().display_with("x"), f.multiplicity))
            })
            .collect();
        all.sort();
        all
    };
    for desc in ["trivial:A1xA1", "trivial:A2", "A3/(1 3)", "D4/(1 3 4)"] {
        let folding = Folding::parse_desc(desc).unwrap();
        let base = BaseModel::default_for(&folding);
        let xi_rank = folding.xi().rank();
        for trial in 0..100u64 {
            let (section, _) =
                generic_section(&folding, &base, child_seed(0xc0a5_e57e, trial)).unwrap();
            let mut rng = rng_from(child_seed(0x14f0_1a7e, trial));
            let word: Vec<usize> = (0..rng.gen_range(1..=6))
                .map(|_| rng.gen_range(0..xi_rank))
                .collect();
            let before = curve_configuration(&section);
            let after = curve_configuration(&weyl_act(&word, &section));
            assert_eq!(before.curve_count(), after.curve_count(), "{desc} {trial}");
            assert_eq!(loci_multiset(&before), loci_multiset(&after), "{desc} {trial}");

            let node = rng.gen_range(0..xi_rank);
            let once = flop(&[node], &section).unwrap();
            let twice = flop(&[node], &once.target).unwrap();
            let original = serde_json::to_string(&section.json()).unwrap();
            let returned = serde_json::to_string(&twice.target.json()).unwrap();
            assert_eq!(original, returned, "{desc} {trial} double flop");
        }
    }
    report(6, "conservation and flop involution", started, 60.0);
}

#[test]
fn criterion_7_invariant_root_audit() {
    let started = Instant::now();
    // The order-2 fold of A3: the C2 quotient system has 4 positive roots
    // (one per automorphism orbit of A3 positives), while only 2 positive
    // roots of A3 are literally fixed by the swap. Both counts are part of
    // the contract; conflating them is the classic off-by-convention trap.
    let folding = Folding::parse_desc("A3/(1 3)").unwrap();
    let orbit_roots = folding.xi_positive_roots().len();
    let literally_invariant = folding.invariant_positive_roots().len();
    assert_eq!(orbit_roots, 4);
    assert_eq!(literally_invariant, 2);
    assert_eq!(folding.xi_system().positive_roots().len(), orbit_roots);
    report(7, "invariant-root convention audit (2 vs 4)", started, 1.0);
}

#[test]
fn criterion_8_coxeter_matrices() {
    let started = Instant::now();
    let mut tags: Vec<TypeTag> = Vec::new();
    for n in 1..=8 {
        tags.push(TypeTag::A(n));
    }
    for n in 2..=8 {
        tags.push(TypeTag::B(n));
        tags.push(TypeTag::C(n));
    }
    for n in 4..=8 {
        tags.push(TypeTag::D(n));
    }
    tags.extend([
        TypeTag::E(6),
        TypeTag::E(7),
        TypeTag::E(8),
        TypeTag::F4,
        TypeTag::G2,
        TypeTag::A1xA1,
    ]);
    for tag in tags {
        let sys = RootSystem::new(DynkinDiagram::new(tag).unwrap());
        let verdict = verify_coxeter(&sys);
        assert!(verdict.ok(), "{tag}: {:?}", verdict.json());
    }
    report(8, "Coxeter matrix relations for all finite types", started, 5.0);
}
