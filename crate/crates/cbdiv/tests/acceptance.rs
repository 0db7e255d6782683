//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the instance counts it covered. Every comparison is exact
//! rational or integer equality; there are no tolerances anywhere.

use std::time::Instant;

use itertools::Itertools;
use num_rational::BigRational;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use cbdiv::chern::{c1_boundary_form, c1_psi_form, ChernQuery};
use cbdiv::duality::{
    boundary_coefficient_for_side, verify_critical_vanishing, verify_divisor_identity,
    DualityInstance, TheoremOutcome,
};
use cbdiv::embedding::{make_slrs_embedding, weight_box_count, YoungDiagram};
use cbdiv::fusionrank::{rank_block, rank_block_with_split, RankQuery};
use cbdiv::liealg::{fusion_coefficient, Family, RootSystem, Weight};
use cbdiv::picm0n::{enumerate_boundary, equal_mod_relations, keel_relations, psi_class, DivisorClass};

fn a(rank: usize) -> RootSystem {
    RootSystem::new(Family::A, rank).unwrap()
}

fn level_weights(rs: &RootSystem, level: u64) -> Vec<Weight> {
    rs.level_weights(level).into_iter().map(|l| l.weight).collect()
}

/// Closed-form A1 fusion oracle: parity plus the two triangle bounds.
fn a1_fusion_oracle(level: i64, x: i64, y: i64, z: i64) -> u64 {
    let ok = (x + y + z) % 2 == 0
        && (x - y).abs() <= z
        && z <= (x + y).min(2 * level - x - y);
    u64::from(ok)
}

/// All diagram tuples (full tuples, not multisets) in the r x s box with
/// the given total box count.
fn diagram_tuples_with_total(r: usize, s: u64, n: usize, total: u64) -> Vec<Vec<YoungDiagram>> {
    let shapes = YoungDiagram::enumerate(r, s);
    let mut out = Vec::new();
    let mut current: Vec<YoungDiagram> = Vec::new();
    fn rec(
        shapes: &[YoungDiagram],
        n: usize,
        remaining: i64,
        current: &mut Vec<YoungDiagram>,
        out: &mut Vec<Vec<YoungDiagram>>,
    ) {
        if current.len() == n {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        for d in shapes {
            let b = d.boxes() as i64;
            if b <= remaining {
                current.push(d.clone());
                rec(shapes, n, remaining - b, current, out);
                current.pop();
            }
        }
    }
    rec(&shapes, n, total as i64, &mut current, &mut out);
    out
}

#[test]
fn criterion_1_dual_formula_agreement() {
    let start = Instant::now();
    let cap = 500usize;
    let mut checked = 0usize;

    'outer: for level in 1..=3u64 {
        let rs = a(1);
        let weights = level_weights(&rs, level);
        for n in [4usize, 5, 6] {
            for tuple in weights.iter().cloned().combinations_with_replacement(n) {
                let q = ChernQuery::new(rs.clone(), level, tuple.clone()).unwrap();
                assert_eq!(
                    c1_boundary_form(&q).unwrap(),
                    c1_psi_form(&q).unwrap(),
                    "A1 level {level}, tuple {tuple:?}"
                );
                checked += 1;
                if checked >= cap {
                    break 'outer;
                }
            }
        }
    }

    let rs = a(2);
    let pool = level_weights(&rs, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(0x1729);
    let mut random_checked = 0usize;
    for k in 0..100usize {
        let n = [4, 5, 6][k % 3];
        let tuple: Vec<Weight> = (0..n)
            .map(|_| pool[rng.random_range(0..pool.len())].clone())
            .collect();
        let q = ChernQuery::new(rs.clone(), 2, tuple.clone()).unwrap();
        assert_eq!(
            c1_boundary_form(&q).unwrap(),
            c1_psi_form(&q).unwrap(),
            "A2 level 2, tuple {tuple:?}"
        );
        random_checked += 1;
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "expected < 60 s, took {elapsed:?}");
    println!(
        "[acceptance] criterion 1 (dual-formula agreement): PASS \
         ({checked} exhaustive + {random_checked} random instances, {elapsed:.2?})"
    );
}

#[test]
fn criterion_2_divisor_identity_verification() {
    let start = Instant::now();
    let embedding = make_slrs_embedding(2, 2).unwrap();
    let shapes = YoungDiagram::enumerate(2, 2);
    let mut verified = 0usize;
    let mut with_nonzero_b = 0usize;

    for n in [4usize, 6] {
        for tuple in shapes.iter().cloned().combinations_with_replacement(n) {
            let total: u64 = tuple.iter().map(YoungDiagram::boxes).sum();
            if total % 4 != 0 {
                continue;
            }
            let inst = DualityInstance::from_diagrams(embedding.clone(), &tuple).unwrap();
            match verify_divisor_identity(&inst).unwrap() {
                TheoremOutcome::Checked(rep) => {
                    assert!(
                        rep.passed,
                        "identity failed for {tuple:?}: diff {:?}",
                        rep.per_index_diff
                    );
                    assert!(rep.mod_keel_equal);
                    if rep.b_table.values().any(|&b| b != 0) {
                        with_nonzero_b += 1;
                    }
                    verified += 1;
                }
                TheoremOutcome::NotApplicable { reason } => {
                    panic!("instance {tuple:?} unexpectedly not applicable: {reason}");
                }
            }
        }
    }
    assert!(
        with_nonzero_b > 0,
        "the sweep must include instances with a non-trivial boundary table"
    );

    // One (2, 3) instance at n = 4.
    let e23 = make_slrs_embedding(2, 3).unwrap();
    let d = |rows: &[u64]| YoungDiagram::new(rows.to_vec(), 2, 3).unwrap();
    let tuple = vec![d(&[1]), d(&[1]), d(&[2]), d(&[2])];
    let inst = DualityInstance::from_diagrams(e23, &tuple).unwrap();
    match verify_divisor_identity(&inst).unwrap() {
        TheoremOutcome::Checked(rep) => assert!(rep.passed, "(2,3) instance failed"),
        TheoremOutcome::NotApplicable { reason } => {
            panic!("(2,3) instance not applicable: {reason}")
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "expected < 5 min, took {elapsed:?}");
    println!(
        "[acceptance] criterion 2 (divisor identity): PASS \
         ({verified} instances verified exactly, {with_nonzero_b} with non-zero boundary table, \
         plus one (2,3) instance, {elapsed:.2?})"
    );
}

#[test]
fn criterion_3_critical_vanishing_sweeps() {
    let start = Instant::now();
    let mut tuples_checked = 0usize;
    let mut pairs_checked = 0usize;

    for n in [4usize, 5, 6] {
        for tuple in diagram_tuples_with_total(2, 2, n, 4) {
            let report = verify_critical_vanishing(2, 2, &tuple).unwrap();
            assert!(
                report.passed,
                "counterexample at {tuple:?}: {:?}",
                report.counterexamples
            );
            tuples_checked += 1;
            pairs_checked += report.pairs_checked;
        }
    }
    for tuple in diagram_tuples_with_total(2, 3, 4, 6) {
        let report = verify_critical_vanishing(2, 3, &tuple).unwrap();
        assert!(
            report.passed,
            "counterexample at {tuple:?}: {:?}",
            report.counterexamples
        );
        tuples_checked += 1;
        pairs_checked += report.pairs_checked;
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "expected < 2 min, took {elapsed:?}");
    println!(
        "[acceptance] criterion 3 (critical-level vanishing): PASS \
         ({tuples_checked} tuples, {pairs_checked} gapped pairs, zero counterexamples, {elapsed:.2?})"
    );
}

#[test]
fn criterion_4_critical_level_chern_vanishing() {
    let start = Instant::now();
    let mut classes_checked = 0usize;

    let mut check = |r: usize, s: u64, n: usize, total: u64| {
        let g1 = a(r - 1);
        let g2 = a(s as usize - 1);
        let ambient = a(r * s as usize - 1);
        let m = r * s as usize;
        for tuple in diagram_tuples_with_total(r, s, n, total) {
            let lambda: Vec<Weight> = tuple.iter().map(YoungDiagram::to_weight).collect();
            let lambda_t: Vec<Weight> =
                tuple.iter().map(|d| d.transpose().to_weight()).collect();
            let big: Vec<Weight> = tuple
                .iter()
                .map(|d| Weight::fundamental(m - 1, d.boxes() as usize % m))
                .collect();
            for (rs_, level, ws) in [
                (&g1, s, lambda),
                (&g2, r as u64, lambda_t),
                (&ambient, 1u64, big),
            ] {
                let q = ChernQuery::new(rs_.clone(), level, ws.clone()).unwrap();
                let class = c1_psi_form(&q).unwrap();
                // Zero as a class in the Picard group. Tuples containing
                // vacuum entries can produce a non-zero canonical
                // representative that reduces to zero under the relations.
                let zero = DivisorClass::zero(n).unwrap();
                assert!(
                    class.is_zero() || equal_mod_relations(&class, &zero).unwrap(),
                    "critical-level class must vanish for {tuple:?} on {}",
                    rs_.name()
                );
                classes_checked += 1;
            }
        }
    };
    check(2, 2, 4, 4);
    check(2, 2, 5, 4);
    check(2, 2, 6, 4);
    check(2, 3, 4, 6);

    let elapsed = start.elapsed();
    println!(
        "[acceptance] criterion 4 (critical-level class vanishing): PASS \
         ({classes_checked} classes all exactly zero, {elapsed:.2?})"
    );
}

#[test]
fn criterion_5_fusion_oracle_equivalence() {
    let start = Instant::now();

    // A1 fusion against the closed-form table, levels 1..=4, all triples.
    let rs = a(1);
    let mut triples = 0usize;
    for level in 1..=4i64 {
        for x in 0..=level {
            for y in 0..=level {
                for z in 0..=level {
                    let got = fusion_coefficient(
                        &rs,
                        level as u64,
                        &Weight::new(vec![x]).unwrap(),
                        &Weight::new(vec![y]).unwrap(),
                        &Weight::new(vec![z]).unwrap(),
                    )
                    .unwrap();
                    assert_eq!(got, a1_fusion_oracle(level, x, y, z), "({x},{y},{z}) at {level}");
                    triples += 1;
                }
            }
        }
    }

    // Factorization order does not matter, n <= 6.
    let mut split_checks = 0usize;
    for (rs, level) in [(a(1), 2u64), (a(1), 3u64), (a(2), 1u64)] {
        let ws = level_weights(&rs, level);
        for n in [4usize, 5, 6] {
            for tuple in ws.iter().cloned().combinations_with_replacement(n).take(150) {
                let q = RankQuery::new(rs.clone(), level, tuple.clone()).unwrap();
                let base = rank_block(&q);
                for i in 0..n {
                    for j in (i + 1)..n {
                        assert_eq!(
                            rank_block_with_split(&q, i, j),
                            base,
                            "split ({i},{j}) of {tuple:?}"
                        );
                        split_checks += 1;
                    }
                }
            }
        }
    }

    // Level-one special-linear ranks follow the charge rule, m <= 6,
    // n <= 6, exhaustively over all index tuples.
    let mut charge_checks = 0usize;
    for m in 2..=6usize {
        let rs = a(m - 1);
        for n in 1..=6usize {
            let mut indices = vec![0usize; n];
            loop {
                let ws: Vec<Weight> = indices
                    .iter()
                    .map(|&d| Weight::fundamental(m - 1, d))
                    .collect();
                let rank = rank_block(&RankQuery::new(rs.clone(), 1, ws).unwrap());
                let expected = u64::from(indices.iter().sum::<usize>() % m == 0);
                assert_eq!(rank, expected, "sl({m}) level 1 indices {indices:?}");
                charge_checks += 1;
                let mut k = 0;
                loop {
                    if k == n {
                        break;
                    }
                    indices[k] += 1;
                    if indices[k] < m {
                        break;
                    }
                    indices[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
        }
    }

    let elapsed = start.elapsed();
    println!(
        "[acceptance] criterion 5 (fusion oracle equivalence): PASS \
         ({triples} truth-table triples, {split_checks} split checks, \
         {charge_checks} charge-rule ranks, {elapsed:.2?})"
    );
}

#[test]
fn criterion_6_branching_consistency() {
    let start = Instant::now();
    let mut tables = 0usize;

    for (r, s) in [(2usize, 2usize), (2, 3), (3, 2), (3, 3)] {
        let e = make_slrs_embedding(r, s).unwrap();
        let m = r * s;
        for d in 0..m {
            let big = Weight::fundamental(m - 1, d);
            let pairs = e.branch_affine(&big).unwrap();

            // Finiteness with the exact cardinality of the congruence class.
            let domain = e.congruent_level_weights(&big).unwrap();
            assert_eq!(pairs.len(), domain.len(), "({r},{s}) d={d}: |B~| = |P^L|");

            // Gap-zero pairs coincide with the transpose pairs of the
            // diagrams with exactly d boxes, enumerated independently.
            let mut cauchy: Vec<(Weight, Weight)> = YoungDiagram::enumerate(r, s as u64)
                .into_iter()
                .filter(|dg| dg.boxes() == d as u64)
                .map(|dg| (dg.to_weight(), dg.transpose().to_weight()))
                .collect();
            cauchy.sort();
            let mut zeros: Vec<(Weight, Weight)> = pairs
                .iter()
                .filter(|p| p.n_gap == 0)
                .map(|p| (p.lambda.clone(), p.mu.clone()))
                .collect();
            zeros.sort();
            assert_eq!(zeros, cauchy, "({r},{s}) d={d}: gap-zero set");

            // Bijectivity with image in the right congruence class.
            let mut images: Vec<&Weight> = pairs.iter().map(|p| &p.mu).collect();
            images.sort();
            images.dedup();
            assert_eq!(images.len(), pairs.len(), "({r},{s}) d={d}: injective");
            let targets = e.congruent_level_weights_second(&big).unwrap();
            assert_eq!(images.len(), targets.len(), "({r},{s}) d={d}: surjective");
            for img in &images {
                assert_eq!(
                    weight_box_count(img) % s as u64,
                    (d % s) as u64,
                    "({r},{s}) d={d}: image congruence"
                );
            }
            tables += 1;
        }
    }

    let elapsed = start.elapsed();
    println!(
        "[acceptance] criterion 6 (branching consistency): PASS \
         ({tables} branching tables across r,s <= 3, {elapsed:.2?})"
    );
}

#[test]
fn criterion_7_divisor_algebra_sanity() {
    let start = Instant::now();

    for n in 4..=10usize {
        assert_eq!(
            enumerate_boundary(n).unwrap().len(),
            (1usize << (n - 1)) - n - 1,
            "boundary count for n={n}"
        );
    }

    let mut psi_coeffs = 0usize;
    for n in 4..=8usize {
        let den = ((n - 1) * (n - 2)) as i64;
        for i in 1..=n {
            let class = psi_class(n, i).unwrap();
            for idx in enumerate_boundary(n).unwrap() {
                let a_ = if idx.side_contains(i) {
                    idx.side().len()
                } else {
                    n - idx.side().len()
                };
                let expected =
                    BigRational::new((((n - a_) * (n - a_ - 1)) as i64).into(), den.into());
                assert_eq!(class.coefficient(&idx), expected, "psi n={n} i={i} {idx}");
                psi_coeffs += 1;
            }
        }
    }

    let mut keel_vectors = 0usize;
    for n in [4usize, 5, 6] {
        let zero = DivisorClass::zero(n).unwrap();
        for rel in keel_relations(n).unwrap() {
            assert!(equal_mod_relations(&rel, &zero).unwrap());
            keel_vectors += 1;
        }
    }

    for (n, expected_pic) in [(4usize, 1usize), (5, 5)] {
        let order = enumerate_boundary(n).unwrap();
        let rows: Vec<Vec<BigRational>> = keel_relations(n)
            .unwrap()
            .iter()
            .map(|r| r.to_vector(&order))
            .collect();
        let rank = cbdiv::linalg::row_rank(&rows);
        assert_eq!(order.len() - rank, expected_pic, "Picard dimension n={n}");
    }

    let elapsed = start.elapsed();
    println!(
        "[acceptance] criterion 7 (divisor algebra sanity): PASS \
         ({psi_coeffs} psi coefficients, {keel_vectors} relation vectors, \
         quotient dims 1 and 5, {elapsed:.2?})"
    );
}

#[test]
fn criterion_8_boundary_table_properties() {
    let start = Instant::now();
    let embedding = make_slrs_embedding(2, 2).unwrap();
    let shapes = YoungDiagram::enumerate(2, 2);
    let mut instances = 0usize;
    let mut coefficients = 0usize;
    let mut nonzero = 0usize;

    for n in [4usize, 6] {
        for tuple in shapes.iter().cloned().combinations_with_replacement(n) {
            let total: u64 = tuple.iter().map(YoungDiagram::boxes).sum();
            if total % 4 != 0 {
                continue;
            }
            let inst = DualityInstance::from_diagrams(embedding.clone(), &tuple).unwrap();
            for idx in enumerate_boundary(n).unwrap() {
                // The coefficient type already enforces non-negative
                // integrality; the content here is the side symmetry.
                let b_side = boundary_coefficient_for_side(&inst, idx.side()).unwrap();
                let b_comp = boundary_coefficient_for_side(&inst, &idx.complement()).unwrap();
                assert_eq!(b_side, b_comp, "b symmetry at {idx} for {tuple:?}");
                coefficients += 1;
                if b_side != 0 {
                    nonzero += 1;
                }
            }
            instances += 1;
        }
    }
    assert!(nonzero > 0, "the sweep must exercise non-zero coefficients");

    let elapsed = start.elapsed();
    println!(
        "[acceptance] criterion 8 (boundary-table properties): PASS \
         ({instances} instances, {coefficients} coefficients symmetric, \
         {nonzero} non-zero, {elapsed:.2?})"
    );
}
