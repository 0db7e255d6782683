//! Verifier for the divisor identity relating block bundles of the two
//! embedded algebras to the level-one ambient bundle: assumption checks,
//! boundary coefficients, exact left/right-hand-side comparison, and the
//! critical-level vanishing sweep.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::chern::{c1_psi_form, ChernQuery};
use crate::embedding::{ConformalEmbedding, YoungDiagram};
use crate::fusionrank::{rank_block, RankQuery};
use crate::liealg::Weight;
use crate::picm0n::{add_scaled, enumerate_boundary, equal_mod_relations, psi_class, BoundaryIndex, DivisorClass};
use crate::rational::{ratio_from_i64, ratio_to_string};
use crate::{Error, Result};

/// One verification instance: an embedding with the three weight tuples
/// attached to the marked points.
#[derive(Debug, Clone)]
pub struct DualityInstance {
    embedding: ConformalEmbedding,
    big_weights: Vec<Weight>,
    lambda: Vec<Weight>,
    mu: Vec<Weight>,
}

impl DualityInstance {
    pub fn new(
        embedding: ConformalEmbedding,
        big_weights: Vec<Weight>,
        lambda: Vec<Weight>,
        mu: Vec<Weight>,
    ) -> Result<Self> {
        let n = big_weights.len();
        if n < 4 {
            return Err(Error::TooFewPoints(n));
        }
        if lambda.len() != n {
            return Err(Error::PointCountMismatch(lambda.len(), n));
        }
        if mu.len() != n {
            return Err(Error::PointCountMismatch(mu.len(), n));
        }
        let (l1, l2) = embedding.levels();
        for w in &big_weights {
            embedding.ambient().assert_in_level(w, 1)?;
        }
        for w in &lambda {
            embedding.g1().assert_in_level(w, l1)?;
        }
        for w in &mu {
            embedding.g2().assert_in_level(w, l2)?;
        }
        Ok(DualityInstance {
            embedding,
            big_weights,
            lambda,
            mu,
        })
    }

    /// Builds the instance attached to a tuple of diagrams: the first
    /// factor gets the diagram weights, the second the transpose weights,
    /// and the ambient algebra the fundamental weight of the box count.
    pub fn from_diagrams(
        embedding: ConformalEmbedding,
        diagrams: &[YoungDiagram],
    ) -> Result<Self> {
        let ambient_rank = embedding.ambient().rank();
        let m = ambient_rank + 1;
        let mut big_weights = Vec::with_capacity(diagrams.len());
        let mut lambda = Vec::with_capacity(diagrams.len());
        let mut mu = Vec::with_capacity(diagrams.len());
        for d in diagrams {
            let boxes = d.boxes() as usize % m;
            big_weights.push(Weight::fundamental(ambient_rank, boxes));
            lambda.push(d.to_weight());
            mu.push(d.transpose().to_weight());
        }
        DualityInstance::new(embedding, big_weights, lambda, mu)
    }

    pub fn embedding(&self) -> &ConformalEmbedding {
        &self.embedding
    }

    pub fn n(&self) -> usize {
        self.big_weights.len()
    }

    pub fn big_weights(&self) -> &[Weight] {
        &self.big_weights
    }

    pub fn lambda_weights(&self) -> &[Weight] {
        &self.lambda
    }

    pub fn mu_weights(&self) -> &[Weight] {
        &self.mu
    }

    fn ambient_rank_query(&self, weights: Vec<Weight>) -> RankQuery {
        RankQuery::new(self.embedding.ambient().clone(), 1, weights)
            .expect("instance weights validated at construction")
    }

    fn g1_rank(&self, weights: Vec<Weight>) -> u64 {
        let (l1, _) = self.embedding.levels();
        rank_block(
            &RankQuery::new(self.embedding.g1().clone(), l1, weights)
                .expect("instance weights validated at construction"),
        )
    }

    fn g2_rank(&self, weights: Vec<Weight>) -> u64 {
        let (_, l2) = self.embedding.levels();
        rank_block(
            &RankQuery::new(self.embedding.g2().clone(), l2, weights)
                .expect("instance weights validated at construction"),
        )
    }

    fn select(&self, weights: &[Weight], side: &[usize]) -> Vec<Weight> {
        side.iter().map(|&a| weights[a - 1].clone()).collect()
    }

    /// Anomaly gaps of the marked-point pairs, one per point.
    pub fn point_gaps(&self) -> Result<Vec<u64>> {
        (0..self.n())
            .map(|i| {
                let gap = self.embedding.anomaly_gap(
                    &self.big_weights[i],
                    &self.lambda[i],
                    &self.mu[i],
                )?;
                crate::rational::ratio_to_i64(&gap)
                    .filter(|&g| g >= 0)
                    .map(|g| g as u64)
                    .ok_or_else(|| {
                        Error::BranchingInconsistency(format!(
                            "pair {} has non-integral or negative gap {}",
                            i + 1,
                            gap
                        ))
                    })
            })
            .collect()
    }
}

/// Outcome of the assumption check; `first_violation` names the first
/// failing condition when `holds` is false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssumptionCheck {
    pub holds: bool,
    pub first_violation: Option<String>,
}

impl AssumptionCheck {
    fn ok() -> Self {
        AssumptionCheck {
            holds: true,
            first_violation: None,
        }
    }

    fn fail(msg: String) -> Self {
        AssumptionCheck {
            holds: false,
            first_violation: Some(msg),
        }
    }
}

/// Checks the three duality assumptions: the ambient block has rank one
/// and the point pairs branch correctly; the two factor blocks have
/// equal rank, also after factoring at every boundary partition; and
/// the branching rule is a bijection on every intermediate class.
pub fn check_assumptions(inst: &DualityInstance) -> Result<AssumptionCheck> {
    let e = inst.embedding();

    let ambient_rank = rank_block(&inst.ambient_rank_query(inst.big_weights().to_vec()));
    if ambient_rank != 1 {
        return Ok(AssumptionCheck::fail(format!(
            "ambient level-one block has rank {ambient_rank}, expected 1"
        )));
    }

    for i in 0..inst.n() {
        let expected = match e.branching_partner(&inst.big_weights[i], &inst.lambda[i]) {
            Ok(mu) => mu,
            Err(_) => {
                return Ok(AssumptionCheck::fail(format!(
                    "pair {} not in the branching set of {}",
                    i + 1,
                    inst.big_weights[i]
                )))
            }
        };
        if expected != inst.mu[i] {
            return Ok(AssumptionCheck::fail(format!(
                "pair {} not in the branching set of {}",
                i + 1,
                inst.big_weights[i]
            )));
        }
    }

    let r1 = inst.g1_rank(inst.lambda.clone());
    let r2 = inst.g2_rank(inst.mu.clone());
    if r1 != r2 {
        return Ok(AssumptionCheck::fail(format!(
            "factor blocks have unequal ranks {r1} vs {r2}"
        )));
    }

    for idx in enumerate_boundary(inst.n())? {
        for side in [idx.side().to_vec(), idx.complement()] {
            let big = intermediate_weight(inst, &side);
            for pair in e.branch_affine(&big)? {
                let mut left = inst.select(&inst.lambda, &side);
                left.push(pair.lambda.clone());
                let mut right = inst.select(&inst.mu, &side);
                right.push(pair.mu.clone());
                let a = inst.g1_rank(left);
                let b = inst.g2_rank(right);
                if a != b {
                    return Ok(AssumptionCheck::fail(format!(
                        "factored ranks differ at side {side:?}, pair (lambda={}, mu={}): {a} vs {b}",
                        pair.lambda, pair.mu
                    )));
                }
            }
            // Bijectivity of the branching rule on this class.
            let pairs = e.branch_affine(&big)?;
            let mut images: Vec<&Weight> = pairs.iter().map(|p| &p.mu).collect();
            images.sort();
            images.dedup();
            let targets = e.congruent_level_weights_second(&big)?;
            if images.len() != pairs.len() || images.len() != targets.len() {
                return Ok(AssumptionCheck::fail(format!(
                    "branching rule is not a bijection over {big}"
                )));
            }
            for img in images {
                if !targets.contains(img) {
                    return Ok(AssumptionCheck::fail(format!(
                        "branching image {img} lands outside the congruence class of {big}"
                    )));
                }
            }
        }
    }

    Ok(AssumptionCheck::ok())
}

/// The unique level-one ambient weight completing the side to a rank-one
/// block; exists and is unique whenever the full ambient block has rank
/// one.
pub fn intermediate_weight(inst: &DualityInstance, side: &[usize]) -> Weight {
    let g = inst.embedding().ambient();
    let sided = inst.select(inst.big_weights(), side);
    let mut found = Vec::new();
    for lw in g.level_weights(1) {
        let mut ws = sided.clone();
        ws.push(lw.weight.clone());
        if rank_block(&inst.ambient_rank_query(ws)) == 1 {
            found.push(lw.weight);
        }
    }
    assert_eq!(
        found.len(),
        1,
        "factorization of a rank-one block must single out one weight"
    );
    found.pop().unwrap()
}

/// The boundary coefficient at a partition: gaps weighted by the product
/// of the complementary factored ranks, summed over the branching set of
/// the intermediate weight. Symmetric in the two sides.
pub fn boundary_coefficient(inst: &DualityInstance, idx: &BoundaryIndex) -> Result<u64> {
    boundary_coefficient_for_side(inst, idx.side())
}

/// Same coefficient with an explicit choice of which side plays the role
/// of `A`; exercising both orientations checks the symmetry claim.
pub fn boundary_coefficient_for_side(inst: &DualityInstance, side: &[usize]) -> Result<u64> {
    let comp: Vec<usize> = (1..=inst.n()).filter(|i| !side.contains(i)).collect();
    let big = intermediate_weight(inst, side);
    let mut total = 0u64;
    for pair in inst.embedding().branch_affine(&big)? {
        if pair.n_gap == 0 {
            continue;
        }
        let mut left = inst.select(&inst.lambda, side);
        left.push(pair.lambda.clone());
        let a = inst.g1_rank(left);
        if a == 0 {
            continue;
        }
        let mut right = inst.select(&inst.lambda, &comp);
        right.push(inst.embedding().g1().dual_weight(&pair.lambda));
        let b = inst.g1_rank(right);
        total += pair.n_gap * a * b;
    }
    Ok(total)
}

/// Sum of the first Chern classes of the two factor-block bundles.
pub fn identity_lhs(inst: &DualityInstance) -> Result<DivisorClass> {
    let (l1, l2) = inst.embedding().levels();
    let q1 = ChernQuery::new(inst.embedding().g1().clone(), l1, inst.lambda.clone())?;
    let q2 = ChernQuery::new(inst.embedding().g2().clone(), l2, inst.mu.clone())?;
    add_scaled(&c1_psi_form(&q1)?, &ratio_from_i64(1), &c1_psi_form(&q2)?)
}

/// Rank-scaled ambient Chern class plus gap-weighted psi classes, minus
/// the boundary coefficients.
pub fn identity_rhs(inst: &DualityInstance) -> Result<DivisorClass> {
    let b_table = boundary_table(inst)?;
    identity_rhs_with_table(inst, &b_table)
}

fn boundary_table(inst: &DualityInstance) -> Result<BTreeMap<BoundaryIndex, u64>> {
    let mut table = BTreeMap::new();
    for idx in enumerate_boundary(inst.n())? {
        let b = boundary_coefficient(inst, &idx)?;
        table.insert(idx, b);
    }
    Ok(table)
}

fn identity_rhs_with_table(
    inst: &DualityInstance,
    b_table: &BTreeMap<BoundaryIndex, u64>,
) -> Result<DivisorClass> {
    let n = inst.n();
    let rank = ratio_from_i64(inst.g1_rank(inst.lambda.clone()) as i64);
    let ambient_query = ChernQuery::new(
        inst.embedding().ambient().clone(),
        1,
        inst.big_weights().to_vec(),
    )?;
    let mut acc = DivisorClass::zero(n)?;
    acc = add_scaled(&acc, &rank, &c1_psi_form(&ambient_query)?)?;
    let gaps = inst.point_gaps()?;
    for (j, &gap) in gaps.iter().enumerate() {
        if gap == 0 {
            continue;
        }
        let scale = &rank * ratio_from_i64(gap as i64);
        acc = add_scaled(&acc, &scale, &psi_class(n, j + 1)?)?;
    }
    for (idx, &b) in b_table {
        if b != 0 {
            acc.add_to(idx.clone(), ratio_from_i64(-(b as i64)))?;
        }
    }
    Ok(acc)
}

/// Structured outcome of a verification: both sides, the per-index
/// difference, the boundary coefficients, the point gaps, and the
/// class-level equality flag.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub passed: bool,
    pub lhs: DivisorClass,
    pub rhs: DivisorClass,
    pub per_index_diff: BTreeMap<BoundaryIndex, BigRational>,
    pub b_table: BTreeMap<BoundaryIndex, u64>,
    pub n_gaps: Vec<u64>,
    pub mod_keel_equal: bool,
}

/// Verification outcome: a full report when the assumptions hold, or the
/// reason they do not.
#[derive(Debug, Clone)]
pub enum TheoremOutcome {
    Checked(VerificationReport),
    NotApplicable { reason: String },
}

impl TheoremOutcome {
    pub fn passed(&self) -> Option<bool> {
        match self {
            TheoremOutcome::Checked(r) => Some(r.passed),
            TheoremOutcome::NotApplicable { .. } => None,
        }
    }

    pub fn report(&self) -> Option<&VerificationReport> {
        match self {
            TheoremOutcome::Checked(r) => Some(r),
            TheoremOutcome::NotApplicable { .. } => None,
        }
    }
}

#[derive(Serialize)]
struct DiffEntry {
    side: Vec<usize>,
    value: String,
}

#[derive(Serialize)]
struct BEntry {
    side: Vec<usize>,
    value: u64,
}

#[derive(Serialize)]
struct ReportRepr<'a> {
    passed: bool,
    lhs: &'a DivisorClass,
    rhs: &'a DivisorClass,
    diff: Vec<DiffEntry>,
    b_table: Vec<BEntry>,
    n_gaps: &'a [u64],
    mod_keel_equal: bool,
}

#[derive(Serialize)]
struct NotApplicableRepr<'a> {
    not_applicable: bool,
    reason: &'a str,
}

impl Serialize for TheoremOutcome {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TheoremOutcome::Checked(r) => ReportRepr {
                passed: r.passed,
                lhs: &r.lhs,
                rhs: &r.rhs,
                diff: r
                    .per_index_diff
                    .iter()
                    .map(|(idx, v)| DiffEntry {
                        side: idx.side().to_vec(),
                        value: ratio_to_string(v),
                    })
                    .collect(),
                b_table: r
                    .b_table
                    .iter()
                    .map(|(idx, &v)| BEntry {
                        side: idx.side().to_vec(),
                        value: v,
                    })
                    .collect(),
                n_gaps: &r.n_gaps,
                mod_keel_equal: r.mod_keel_equal,
            }
            .serialize(serializer),
            TheoremOutcome::NotApplicable { reason } => NotApplicableRepr {
                not_applicable: true,
                reason,
            }
            .serialize(serializer),
        }
    }
}

/// Verifies the divisor identity for the instance. Exact coefficientwise
/// equality of the two canonical representatives is required to pass;
/// equality in the Picard group is reported as a separate flag. When the
/// assumptions fail the outcome is "not applicable", never "failed".
pub fn verify_divisor_identity(inst: &DualityInstance) -> Result<TheoremOutcome> {
    let check = check_assumptions(inst)?;
    if !check.holds {
        return Ok(TheoremOutcome::NotApplicable {
            reason: check.first_violation.unwrap_or_else(|| "assumptions violated".into()),
        });
    }
    let b_table = boundary_table(inst)?;
    let lhs = identity_lhs(inst)?;
    let rhs = identity_rhs_with_table(inst, &b_table)?;
    let mut per_index_diff = BTreeMap::new();
    for idx in enumerate_boundary(inst.n())? {
        let d = lhs.coefficient(&idx) - rhs.coefficient(&idx);
        if !d.is_zero() {
            per_index_diff.insert(idx, d);
        }
    }
    let passed = per_index_diff.is_empty();
    let mod_keel_equal = equal_mod_relations(&lhs, &rhs)?;
    Ok(TheoremOutcome::Checked(VerificationReport {
        passed,
        lhs,
        rhs,
        per_index_diff,
        b_table,
        n_gaps: inst.point_gaps()?,
        mod_keel_equal,
    }))
}

/// A counterexample to the vanishing statement: a strictly-gapped pair
/// whose two factored ranks are both non-zero.
#[derive(Debug, Clone, Serialize)]
pub struct VanishingCounterexample {
    pub side: Vec<usize>,
    pub lambda: Weight,
    pub rank_side: u64,
    pub rank_complement: u64,
}

/// Outcome of the critical-level vanishing sweep.
#[derive(Debug, Clone, Serialize)]
pub struct VanishingReport {
    pub passed: bool,
    pub partitions_checked: usize,
    pub pairs_checked: usize,
    pub counterexamples: Vec<VanishingCounterexample>,
}

/// For diagrams with total box count exactly r*s: at every partition and
/// for every strictly-gapped pair of the intermediate branching set, at
/// least one of the two factored blocks must vanish. A counterexample
/// would indicate an implementation bug.
pub fn verify_critical_vanishing(r: usize, s: usize, diagrams: &[YoungDiagram]) -> Result<VanishingReport> {
    let embedding = crate::embedding::make_slrs_embedding(r, s)?;
    let total: u64 = diagrams.iter().map(YoungDiagram::boxes).sum();
    if total != (r * s) as u64 {
        return Err(Error::InvalidInput(format!(
            "total box count {total} must equal r*s = {}",
            r * s
        )));
    }
    let inst = DualityInstance::from_diagrams(embedding, diagrams)?;
    let ambient_rank = rank_block(&inst.ambient_rank_query(inst.big_weights().to_vec()));
    if ambient_rank != 1 {
        return Err(Error::BranchingInconsistency(format!(
            "ambient block of a critical tuple must have rank 1, got {ambient_rank}"
        )));
    }
    let mut partitions_checked = 0;
    let mut pairs_checked = 0;
    let mut counterexamples = Vec::new();
    for idx in enumerate_boundary(inst.n())? {
        for side in [idx.side().to_vec(), idx.complement()] {
            partitions_checked += 1;
            let comp: Vec<usize> = (1..=inst.n()).filter(|i| !side.contains(i)).collect();
            let big = intermediate_weight(&inst, &side);
            for pair in inst.embedding().branch_affine(&big)? {
                if pair.n_gap == 0 {
                    continue;
                }
                pairs_checked += 1;
                let mut left = inst.select(&inst.lambda, &side);
                left.push(pair.lambda.clone());
                let a = inst.g1_rank(left);
                let mut right = inst.select(&inst.lambda, &comp);
                right.push(inst.embedding().g1().dual_weight(&pair.lambda));
                let b = inst.g1_rank(right);
                if a != 0 && b != 0 {
                    counterexamples.push(VanishingCounterexample {
                        side: side.clone(),
                        lambda: pair.lambda.clone(),
                        rank_side: a,
                        rank_complement: b,
                    });
                }
            }
        }
    }
    Ok(VanishingReport {
        passed: counterexamples.is_empty(),
        partitions_checked,
        pairs_checked,
        counterexamples,
    })
}

/// Exact equality of the two double sums that exchange the intermediate
/// branching classes for ambient level-one weights, at subset size `i`.
pub fn anomaly_sum_exchange_check(inst: &DualityInstance, i: usize) -> Result<bool> {
    let n = inst.n();
    if i < 2 || i > n - 2 {
        return Err(Error::InvalidInput(format!(
            "subset size {i} out of range 2..={}",
            n - 2
        )));
    }
    use itertools::Itertools;
    let g = inst.embedding().ambient();
    let mut lhs = BigRational::zero();
    let mut rhs_inner = BigRational::zero();
    for side in (1..=n).combinations(i) {
        let comp: Vec<usize> = (1..=n).filter(|a| !side.contains(a)).collect();
        let big = intermediate_weight(inst, &side);
        let delta = g.trace_anomaly(1, &big)?;

        for pair in inst.embedding().branch_affine(&big)? {
            let mut left = inst.select(&inst.lambda, &side);
            left.push(pair.lambda.clone());
            let a = inst.g1_rank(left);
            if a == 0 {
                continue;
            }
            let mut right = inst.select(&inst.lambda, &comp);
            right.push(inst.embedding().g1().dual_weight(&pair.lambda));
            let b = inst.g1_rank(right);
            lhs += &delta * ratio_from_i64((a * b) as i64);
        }

        for lw in g.level_weights(1) {
            let mut left = inst.select(inst.big_weights(), &side);
            left.push(lw.weight.clone());
            let a = rank_block(&inst.ambient_rank_query(left));
            if a == 0 {
                continue;
            }
            let mut right = inst.select(inst.big_weights(), &comp);
            right.push(g.dual_weight(&lw.weight));
            let b = rank_block(&inst.ambient_rank_query(right));
            rhs_inner += g.trace_anomaly(1, &lw.weight)? * ratio_from_i64((a * b) as i64);
        }
    }
    let rank = ratio_from_i64(inst.g1_rank(inst.lambda.clone()) as i64);
    Ok(lhs == rank * rhs_inner)
}
