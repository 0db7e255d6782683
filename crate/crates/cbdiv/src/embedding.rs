//! Conformal-embedding data: Dynkin indices, the conformality test, the
//! branching sets attached to level-one weights, and the concrete
//! transpose-plus-rotation branching rule for the tensor-product
//! embedding of two special linear algebras.

use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::liealg::{Family, RootSystem, Weight};
use crate::rational::{ratio_from_i64, ratio_to_i64};
use crate::{Error, Result};

/// Young diagram bounded by an `rows_bound x cols_bound` box.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YoungDiagram {
    rows: Vec<u64>,
    rows_bound: usize,
    cols_bound: u64,
}

impl YoungDiagram {
    pub fn new(rows: Vec<u64>, rows_bound: usize, cols_bound: u64) -> Result<Self> {
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!(
                "rows {rows:?} must be weakly decreasing"
            )));
        }
        let rows: Vec<u64> = rows.into_iter().filter(|&r| r > 0).collect();
        if rows.len() > rows_bound {
            return Err(Error::InvalidInput(format!(
                "diagram {rows:?} has more than {rows_bound} rows"
            )));
        }
        if rows.first().is_some_and(|&r| r > cols_bound) {
            return Err(Error::InvalidInput(format!(
                "diagram {rows:?} is wider than {cols_bound} columns"
            )));
        }
        Ok(YoungDiagram {
            rows,
            rows_bound,
            cols_bound,
        })
    }

    pub fn empty(rows_bound: usize, cols_bound: u64) -> Self {
        YoungDiagram {
            rows: Vec::new(),
            rows_bound,
            cols_bound,
        }
    }

    /// Non-zero row lengths, weakly decreasing.
    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn boxes(&self) -> u64 {
        self.rows.iter().sum()
    }

    /// Reflection across the main diagonal; lands in the transposed box.
    pub fn transpose(&self) -> YoungDiagram {
        let width = self.rows.first().copied().unwrap_or(0);
        let rows: Vec<u64> = (1..=width)
            .map(|c| self.rows.iter().filter(|&&r| r >= c).count() as u64)
            .collect();
        YoungDiagram {
            rows,
            rows_bound: self.cols_bound as usize,
            cols_bound: self.rows_bound as u64,
        }
    }

    /// The special-linear weight of the diagram: coordinate `i` is
    /// `row_i - row_{i+1}`; full columns drop out.
    pub fn to_weight(&self) -> Weight {
        let r = self.rows_bound;
        let padded = |i: usize| -> i64 {
            self.rows.get(i).copied().unwrap_or(0) as i64
        };
        let coords: Vec<i64> = (0..r.saturating_sub(1))
            .map(|i| padded(i) - padded(i + 1))
            .collect();
        Weight::new(coords).expect("row differences of a diagram are non-negative")
    }

    /// All diagrams in the box, lexicographically sorted by row vector.
    pub fn enumerate(rows_bound: usize, cols_bound: u64) -> Vec<YoungDiagram> {
        let mut out = Vec::new();
        let mut rows: Vec<u64> = Vec::new();
        fn rec(
            rows: &mut Vec<u64>,
            max_len: usize,
            max_val: u64,
            out: &mut Vec<Vec<u64>>,
        ) {
            out.push(rows.iter().copied().filter(|&r| r > 0).collect());
            if rows.len() == max_len {
                return;
            }
            for v in (1..=max_val).rev() {
                rows.push(v);
                rec(rows, max_len, v, out);
                rows.pop();
            }
        }
        let mut collected = Vec::new();
        rec(&mut rows, rows_bound, cols_bound, &mut collected);
        collected.sort();
        collected.dedup();
        for rows in collected {
            out.push(YoungDiagram {
                rows,
                rows_bound,
                cols_bound,
            });
        }
        out
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, r) in self.rows.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// Minimal diagram of a dominant special-linear weight: row `i` is the
/// partial sum of the coordinates from `i` on. Errors when the diagram
/// does not fit the `rows_bound x cols_bound` box.
pub fn weight_to_diagram(w: &Weight, rows_bound: usize, cols_bound: u64) -> Result<YoungDiagram> {
    if w.rank() + 1 != rows_bound {
        return Err(Error::RankMismatch {
            got: w.rank(),
            rank: rows_bound.saturating_sub(1),
        });
    }
    let mut rows = Vec::with_capacity(rows_bound);
    let mut acc = 0i64;
    for &c in w.coords().iter().rev() {
        acc += c;
        rows.push(acc as u64);
    }
    rows.reverse();
    YoungDiagram::new(rows, rows_bound, cols_bound)
}

/// Number of boxes of the minimal diagram of a special-linear weight.
pub fn weight_box_count(w: &Weight) -> u64 {
    w.coords()
        .iter()
        .enumerate()
        .map(|(i, &c)| (i as u64 + 1) * c as u64)
        .sum()
}

/// One component of a branching decomposition, with the non-negative
/// integer gap of trace anomalies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchingPair {
    pub lambda: Weight,
    pub mu: Weight,
    pub n_gap: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rotation {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbeddingKind {
    /// sl(r) + sl(s) inside sl(rs) via the tensor product of the
    /// defining modules.
    TensorProduct { r: usize, s: usize },
}

/// The pair of subalgebras with their levels inside a level-one ambient
/// algebra, together with the resolved branching rule.
#[derive(Debug, Clone)]
pub struct ConformalEmbedding {
    g1: RootSystem,
    g2: RootSystem,
    g: RootSystem,
    level1: u64,
    level2: u64,
    kind: EmbeddingKind,
    rotation: Rotation,
}

/// Dynkin index of the irreducible module with highest weight `w`,
/// normalized so the defining module of a special linear algebra has
/// index 1: `dim V * (w, w + 2 rho) / dim g`.
pub fn dynkin_index_irrep(rs: &RootSystem, w: &Weight) -> Result<BigRational> {
    let mut shifted = w.coords().to_vec();
    for c in shifted.iter_mut() {
        *c += 2;
    }
    let casimir = rs.inner_product(w.coords(), &shifted)?;
    let dim = rs.weyl_dimension(w);
    let dim = BigRational::from_integer(dim.into());
    Ok(dim * casimir / ratio_from_i64(rs.dimension() as i64))
}

/// Builds the tensor-product embedding of sl(r) + sl(s) in sl(rs) with
/// levels (s, r), verifying conformality exactly and resolving the
/// branching rotation direction by an integrality sweep.
pub fn make_slrs_embedding(r: usize, s: usize) -> Result<ConformalEmbedding> {
    if r < 2 || s < 2 {
        return Err(Error::InvalidInput(format!(
            "tensor-product embedding needs r, s >= 2, got ({r}, {s})"
        )));
    }
    let g1 = RootSystem::new(Family::A, r - 1)?;
    let g2 = RootSystem::new(Family::A, s - 1)?;
    let g = RootSystem::new(Family::A, r * s - 1)?;
    let level1 = s as u64;
    let level2 = r as u64;

    let c_sum = g1.conformal_anomaly(level1) + g2.conformal_anomaly(level2);
    let c_ambient = g.conformal_anomaly(1);
    if c_sum != c_ambient {
        return Err(Error::BranchingInconsistency(format!(
            "embedding is not conformal: {} + {} != {}",
            g1.conformal_anomaly(level1),
            g2.conformal_anomaly(level2),
            c_ambient
        )));
    }

    let mut emb = ConformalEmbedding {
        g1,
        g2,
        g,
        level1,
        level2,
        kind: EmbeddingKind::TensorProduct { r, s },
        rotation: Rotation::Forward,
    };
    let forward_ok = emb.rotation_sweep_ok(Rotation::Forward);
    let backward_ok = emb.rotation_sweep_ok(Rotation::Backward);
    emb.rotation = match (forward_ok, backward_ok) {
        (true, _) => Rotation::Forward,
        (false, true) => Rotation::Backward,
        (false, false) => {
            return Err(Error::BranchingInconsistency(
                "no rotation direction yields integral anomaly gaps".into(),
            ))
        }
    };
    Ok(emb)
}

impl ConformalEmbedding {
    pub fn g1(&self) -> &RootSystem {
        &self.g1
    }

    pub fn g2(&self) -> &RootSystem {
        &self.g2
    }

    pub fn ambient(&self) -> &RootSystem {
        &self.g
    }

    pub fn levels(&self) -> (u64, u64) {
        (self.level1, self.level2)
    }

    pub fn kind(&self) -> EmbeddingKind {
        self.kind
    }

    fn dims(&self) -> (usize, usize) {
        let EmbeddingKind::TensorProduct { r, s } = self.kind;
        (r, s)
    }

    /// The index d of a level-one weight `omega_d` of the ambient
    /// algebra; the zero weight gives 0.
    pub fn fundamental_index(&self, big: &Weight) -> Result<usize> {
        self.g.assert_in_level(big, 1)?;
        Ok(big
            .coords()
            .iter()
            .position(|&c| c == 1)
            .map_or(0, |i| i + 1))
    }

    /// Level weights of the first factor congruent to `omega_d`: box
    /// count congruent to d mod r.
    pub fn congruent_level_weights(&self, big: &Weight) -> Result<Vec<Weight>> {
        let (r, _) = self.dims();
        let d = self.fundamental_index(big)? as u64;
        Ok(self
            .g1
            .level_weights(self.level1)
            .into_iter()
            .map(|lw| lw.weight)
            .filter(|w| weight_box_count(w) % r as u64 == d % r as u64)
            .collect())
    }

    /// Level weights of the second factor congruent to `omega_d`: box
    /// count congruent to d mod s.
    pub fn congruent_level_weights_second(&self, big: &Weight) -> Result<Vec<Weight>> {
        let (_, s) = self.dims();
        let d = self.fundamental_index(big)? as u64;
        Ok(self
            .g2
            .level_weights(self.level2)
            .into_iter()
            .map(|lw| lw.weight)
            .filter(|w| weight_box_count(w) % s as u64 == d % s as u64)
            .collect())
    }

    /// Trace-anomaly gap of a candidate pair over `big`; must be a
    /// non-negative integer for pairs in the branching set.
    pub fn anomaly_gap(&self, big: &Weight, lambda: &Weight, mu: &Weight) -> Result<BigRational> {
        let d1 = self.g1.trace_anomaly(self.level1, lambda)?;
        let d2 = self.g2.trace_anomaly(self.level2, mu)?;
        let d = self.g.trace_anomaly(1, big)?;
        Ok(d1 + d2 - d)
    }

    fn gap_as_integer(&self, big: &Weight, lambda: &Weight, mu: &Weight) -> Result<u64> {
        let gap = self.anomaly_gap(big, lambda, mu)?;
        if gap.is_negative() {
            return Err(Error::BranchingInconsistency(format!(
                "negative anomaly gap {gap} for (lambda={lambda}, mu={mu}) over {big}"
            )));
        }
        ratio_to_i64(&gap)
            .map(|g| g as u64)
            .ok_or_else(|| {
                Error::BranchingInconsistency(format!(
                    "non-integral anomaly gap {gap} for (lambda={lambda}, mu={mu}) over {big}"
                ))
            })
    }

    fn rotate_labels(&self, mu: &Weight, steps: usize) -> Weight {
        let s = self.g2.rank() + 1;
        let mut labels = Vec::with_capacity(s);
        let total: i64 = mu.coords().iter().sum();
        labels.push(self.level2 as i64 - total);
        labels.extend_from_slice(mu.coords());
        debug_assert!(labels[0] >= 0);
        let rotated: Vec<i64> = match self.rotation {
            Rotation::Backward => (0..s).map(|i| labels[(i + steps) % s]).collect(),
            Rotation::Forward => (0..s).map(|i| labels[(i + s - steps % s) % s]).collect(),
        };
        Weight::new(rotated[1..].to_vec()).expect("rotated labels stay non-negative")
    }

    fn partner_with_rotation(&self, big: &Weight, lambda: &Weight) -> Result<Weight> {
        let (r, s) = self.dims();
        let d = self.fundamental_index(big)? as i64;
        let boxes = weight_box_count(lambda) as i64;
        if (boxes - d).rem_euclid(r as i64) != 0 {
            return Err(Error::BranchingInconsistency(format!(
                "{lambda} is outside the congruence class of {big}"
            )));
        }
        let t = ((boxes - d) / r as i64).rem_euclid(s as i64) as usize;
        let diagram = weight_to_diagram(lambda, r, self.level1)?;
        let mu0 = diagram.transpose().to_weight();
        Ok(self.rotate_labels(&mu0, t))
    }

    /// The branching partner of `lambda` over `big`: transpose of the
    /// minimal diagram followed by a cyclic rotation of affine labels,
    /// one step per r boxes separating `lambda` from `big`'s class
    /// representative. The gap integrality check runs on every call.
    pub fn branching_partner(&self, big: &Weight, lambda: &Weight) -> Result<Weight> {
        let mu = self.partner_with_rotation(big, lambda)?;
        self.gap_as_integer(big, lambda, &mu)?;
        Ok(mu)
    }

    fn rotation_sweep_ok(&mut self, rotation: Rotation) -> bool {
        self.rotation = rotation;
        let ambient_rank = self.g.rank();
        for d in 0..=ambient_rank {
            let big = Weight::fundamental(ambient_rank, d);
            let Ok(lams) = self.congruent_level_weights(&big) else {
                return false;
            };
            for lambda in lams {
                let Ok(mu) = self.partner_with_rotation(&big, &lambda) else {
                    return false;
                };
                if self.gap_as_integer(&big, &lambda, &mu).is_err() {
                    return false;
                }
            }
        }
        true
    }

    /// Finite branching set of `big`: the pairs coming from diagrams with
    /// exactly d boxes under transpose, all with gap zero.
    pub fn branch_finite(&self, big: &Weight) -> Result<Vec<BranchingPair>> {
        let (r, s) = self.dims();
        let d = self.fundamental_index(big)? as u64;
        let mut out = Vec::new();
        for diagram in YoungDiagram::enumerate(r, s as u64) {
            if diagram.boxes() != d {
                continue;
            }
            let lambda = diagram.to_weight();
            let mu = diagram.transpose().to_weight();
            let gap = self.gap_as_integer(big, &lambda, &mu)?;
            if gap != 0 {
                return Err(Error::BranchingInconsistency(format!(
                    "transpose pair (lambda={lambda}, mu={mu}) over {big} has gap {gap}, expected 0"
                )));
            }
            out.push(BranchingPair {
                lambda,
                mu,
                n_gap: 0,
            });
        }
        out.sort_by(|a, b| a.lambda.cmp(&b.lambda));
        Ok(out)
    }

    /// Affine branching set of `big`: one pair per congruent level weight
    /// of the first factor, with its non-negative integer gap. Gap-zero
    /// pairs must reproduce `branch_finite` exactly.
    pub fn branch_affine(&self, big: &Weight) -> Result<Vec<BranchingPair>> {
        let mut out = Vec::new();
        for lambda in self.congruent_level_weights(big)? {
            let mu = self.partner_with_rotation(big, &lambda)?;
            let n_gap = self.gap_as_integer(big, &lambda, &mu)?;
            out.push(BranchingPair { lambda, mu, n_gap });
        }
        out.sort_by(|a, b| a.lambda.cmp(&b.lambda));

        let finite = self.branch_finite(big)?;
        let zeros: Vec<&BranchingPair> = out.iter().filter(|p| p.n_gap == 0).collect();
        if zeros.len() != finite.len()
            || zeros
                .iter()
                .zip(&finite)
                .any(|(a, b)| a.lambda != b.lambda || a.mu != b.mu)
        {
            return Err(Error::BranchingInconsistency(format!(
                "gap-zero pairs over {big} do not match the finite branching set"
            )));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::RootSystem;
    use crate::rational::ratio_from_i64;
    use proptest::prelude::*;

    fn w(coords: &[i64]) -> Weight {
        Weight::new(coords.to_vec()).unwrap()
    }

    fn diag(rows: &[u64], r: usize, s: u64) -> YoungDiagram {
        YoungDiagram::new(rows.to_vec(), r, s).unwrap()
    }

    #[test]
    fn dynkin_index_of_defining_module_is_one() {
        for r in 2..=6usize {
            let rs = RootSystem::new(Family::A, r - 1).unwrap();
            let fw = Weight::fundamental(r - 1, 1);
            assert_eq!(
                dynkin_index_irrep(&rs, &fw).unwrap(),
                ratio_from_i64(1),
                "defining module of sl({r})"
            );
        }
    }

    #[test]
    fn dynkin_index_special_values() {
        let a1 = RootSystem::new(Family::A, 1).unwrap();
        assert_eq!(
            dynkin_index_irrep(&a1, &w(&[0])).unwrap(),
            ratio_from_i64(0)
        );
        // Adjoint: twice the dual Coxeter number.
        assert_eq!(
            dynkin_index_irrep(&a1, &w(&[2])).unwrap(),
            ratio_from_i64(4)
        );
        let a2 = RootSystem::new(Family::A, 2).unwrap();
        assert_eq!(
            dynkin_index_irrep(&a2, &w(&[1, 1])).unwrap(),
            ratio_from_i64(6)
        );
    }

    #[test]
    fn embedding_construction_and_conformality() {
        let e = make_slrs_embedding(2, 2).unwrap();
        assert_eq!(e.levels(), (2, 2));
        assert_eq!(e.ambient().rank(), 3);
        let e23 = make_slrs_embedding(2, 3).unwrap();
        assert_eq!(e23.levels(), (3, 2));
        assert_eq!(
            e23.g1().conformal_anomaly(3),
            BigRational::new(9.into(), 5.into())
        );
        assert_eq!(
            e23.g2().conformal_anomaly(2),
            BigRational::new(16.into(), 5.into())
        );
        assert_eq!(e23.ambient().conformal_anomaly(1), ratio_from_i64(5));
        assert!(make_slrs_embedding(1, 3).is_err());
    }

    #[test]
    fn factor_indices_match_levels() {
        // The defining ambient module restricts to s copies of the
        // defining module of the first factor, and r copies for the
        // second: indices (s, r) = the levels.
        for (r, s) in [(2usize, 2usize), (2, 3), (3, 2), (3, 3)] {
            let e = make_slrs_embedding(r, s).unwrap();
            let i1 = dynkin_index_irrep(e.g1(), &Weight::fundamental(r - 1, 1)).unwrap();
            let i2 = dynkin_index_irrep(e.g2(), &Weight::fundamental(s - 1, 1)).unwrap();
            assert_eq!(ratio_from_i64(s as i64) * i1, ratio_from_i64(s as i64));
            assert_eq!(ratio_from_i64(r as i64) * i2, ratio_from_i64(r as i64));
            let (l1, l2) = e.levels();
            assert_eq!((l1, l2), (s as u64, r as u64));
        }
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(diag(&[2], 2, 2).transpose(), diag(&[1, 1], 2, 2));
        assert_eq!(
            YoungDiagram::empty(2, 2).transpose(),
            YoungDiagram::empty(2, 2)
        );
        assert_eq!(diag(&[2, 1], 2, 2).transpose(), diag(&[2, 1], 2, 2));
    }

    #[test]
    fn diagram_weight_examples() {
        assert_eq!(diag(&[1, 1], 2, 2).to_weight(), w(&[0]));
        assert_eq!(diag(&[2], 2, 2).to_weight(), w(&[2]));
        assert_eq!(diag(&[2, 1], 2, 2).to_weight(), w(&[1]));
        // Round trip through the minimal representative.
        let d = weight_to_diagram(&w(&[1]), 2, 2).unwrap();
        assert_eq!(d, diag(&[1], 2, 2));
        assert_eq!(weight_box_count(&w(&[1, 2])), 5);
    }

    #[test]
    fn diagram_validation() {
        assert!(YoungDiagram::new(vec![1, 2], 2, 2).is_err());
        assert!(YoungDiagram::new(vec![3], 2, 2).is_err());
        assert!(YoungDiagram::new(vec![1, 1, 1], 2, 2).is_err());
        assert_eq!(YoungDiagram::new(vec![2, 0], 2, 2).unwrap().rows(), &[2]);
    }

    #[test]
    fn diagram_enumeration_counts() {
        // |Y_{r,s}| = C(r+s, r).
        assert_eq!(YoungDiagram::enumerate(2, 2).len(), 6);
        assert_eq!(YoungDiagram::enumerate(2, 3).len(), 10);
        assert_eq!(YoungDiagram::enumerate(3, 3).len(), 20);
    }

    #[test]
    fn finite_branching_examples() {
        let e = make_slrs_embedding(2, 2).unwrap();
        let vac = Weight::zero(3);
        let pairs = e.branch_finite(&vac).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!((pairs[0].lambda.clone(), pairs[0].mu.clone()), (w(&[0]), w(&[0])));

        let omega2 = Weight::fundamental(3, 2);
        let pairs = e.branch_finite(&omega2).unwrap();
        let set: Vec<(Weight, Weight)> = pairs
            .iter()
            .map(|p| (p.lambda.clone(), p.mu.clone()))
            .collect();
        assert_eq!(set, vec![(w(&[0]), w(&[2])), (w(&[2]), w(&[0]))]);

        let e23 = make_slrs_embedding(2, 3).unwrap();
        let omega1 = Weight::fundamental(5, 1);
        let pairs = e23.branch_finite(&omega1).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(
            (pairs[0].lambda.clone(), pairs[0].mu.clone()),
            (w(&[1]), w(&[1, 0]))
        );
    }

    #[test]
    fn branching_partner_examples() {
        let e = make_slrs_embedding(2, 2).unwrap();
        let vac = Weight::zero(3);
        assert_eq!(e.branching_partner(&vac, &w(&[0])).unwrap(), w(&[0]));
        assert_eq!(e.branching_partner(&vac, &w(&[2])).unwrap(), w(&[2]));
        assert_eq!(
            e.anomaly_gap(&vac, &w(&[2]), &w(&[2])).unwrap(),
            ratio_from_i64(1)
        );
        let omega2 = Weight::fundamental(3, 2);
        assert_eq!(e.branching_partner(&omega2, &w(&[0])).unwrap(), w(&[2]));
        assert_eq!(e.branching_partner(&omega2, &w(&[2])).unwrap(), w(&[0]));
        // Outside the congruence class.
        assert!(e.branching_partner(&omega2, &w(&[1])).is_err());
    }

    #[test]
    fn affine_branching_tables() {
        let e = make_slrs_embedding(2, 2).unwrap();
        let table = |big: &Weight| -> Vec<(Vec<i64>, Vec<i64>, u64)> {
            e.branch_affine(big)
                .unwrap()
                .into_iter()
                .map(|p| (p.lambda.coords().to_vec(), p.mu.coords().to_vec(), p.n_gap))
                .collect()
        };
        assert_eq!(
            table(&Weight::zero(3)),
            vec![(vec![0], vec![0], 0), (vec![2], vec![2], 1)]
        );
        assert_eq!(
            table(&Weight::fundamental(3, 2)),
            vec![(vec![0], vec![2], 0), (vec![2], vec![0], 0)]
        );
        assert_eq!(
            table(&Weight::fundamental(3, 1)),
            vec![(vec![1], vec![1], 0)]
        );
    }

    #[test]
    fn branching_rule_reproduces_transpose_on_all_diagrams() {
        // For any diagram in the box, the rotation rule applied to the
        // weight of the diagram recovers the weight of its transpose over
        // the fundamental weight of the box count.
        for (r, s) in [(2usize, 2u64), (2, 3), (3, 2), (3, 3)] {
            let e = make_slrs_embedding(r, s as usize).unwrap();
            let m = r * s as usize;
            for d in YoungDiagram::enumerate(r, s) {
                let big = Weight::fundamental(m - 1, d.boxes() as usize % m);
                let got = e.branching_partner(&big, &d.to_weight()).unwrap();
                assert_eq!(
                    got,
                    d.transpose().to_weight(),
                    "diagram {d} in the {r}x{s} box"
                );
            }
        }
    }

    #[test]
    fn branching_bijectivity_and_congruence() {
        for (r, s) in [(2usize, 2usize), (2, 3), (3, 2), (3, 3)] {
            let e = make_slrs_embedding(r, s).unwrap();
            let m = r * s;
            for dd in 0..m {
                let big = Weight::fundamental(m - 1, dd);
                let pairs = e.branch_affine(&big).unwrap();
                let domain = e.congruent_level_weights(&big).unwrap();
                assert_eq!(pairs.len(), domain.len(), "|B~| = |P^Lambda| for d={dd}");
                let mut images: Vec<&Weight> = pairs.iter().map(|p| &p.mu).collect();
                images.sort();
                images.dedup();
                assert_eq!(images.len(), pairs.len(), "injectivity for d={dd}");
                let targets = e.congruent_level_weights_second(&big).unwrap();
                assert_eq!(images.len(), targets.len());
                for img in images {
                    assert!(targets.contains(img), "image congruence for d={dd}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn transpose_involution(rows in proptest::collection::vec(0u64..4, 0..3)) {
            let mut rows = rows;
            rows.sort_unstable_by(|a, b| b.cmp(a));
            let d = YoungDiagram::new(rows, 3, 3).unwrap();
            let t = d.transpose();
            prop_assert_eq!(t.boxes(), d.boxes());
            prop_assert_eq!(t.transpose(), d);
        }
    }
}
