//! Divisor-class bookkeeping on the moduli space of stable n-pointed
//! genus-0 curves: canonical boundary indices, psi classes expanded in
//! the boundary basis, Keel relations, and class arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{ratio_from_i64, ratio_from_str, ratio_to_string};
use crate::{linalg, Error, Result};

/// Canonical label of a boundary divisor: the side of the partition not
/// containing the last marked point, so each unordered partition is
/// stored exactly once.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundaryIndex {
    n: usize,
    side: Vec<usize>,
}

impl BoundaryIndex {
    /// Accepts either side of the partition and canonicalizes.
    pub fn new(n: usize, side: &[usize]) -> Result<Self> {
        if n < 4 {
            return Err(Error::TooFewPoints(n));
        }
        let mut side: Vec<usize> = side.to_vec();
        side.sort_unstable();
        side.dedup();
        if side.iter().any(|&i| i < 1 || i > n) {
            return Err(Error::InvalidBoundary(format!(
                "side {side:?} is not a subset of 1..={n}"
            )));
        }
        if side.len() < 2 || side.len() > n - 2 {
            return Err(Error::InvalidBoundary(format!(
                "side {side:?} must have between 2 and {} elements",
                n - 2
            )));
        }
        if side.contains(&n) {
            side = (1..=n).filter(|i| !side.contains(i)).collect();
        }
        Ok(BoundaryIndex { n, side })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The canonical side (sorted, never containing `n`).
    pub fn side(&self) -> &[usize] {
        &self.side
    }

    pub fn complement(&self) -> Vec<usize> {
        (1..=self.n).filter(|i| !self.side.contains(i)).collect()
    }

    /// True iff marked point `i` lies on the canonical side.
    pub fn side_contains(&self, i: usize) -> bool {
        self.side.binary_search(&i).is_ok()
    }
}

impl fmt::Display for BoundaryIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.side.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// All canonical boundary indices for `n` marked points, in lexicographic
/// order of their sides; exactly `2^(n-1) - n - 1` of them.
pub fn enumerate_boundary(n: usize) -> Result<Vec<BoundaryIndex>> {
    if n < 4 {
        return Err(Error::TooFewPoints(n));
    }
    let mut out = Vec::new();
    for size in 2..=(n - 2) {
        for side in (1..n).combinations(size) {
            out.push(BoundaryIndex { n, side });
        }
    }
    out.sort();
    Ok(out)
}

/// Element of the Picard group written in the boundary spanning set,
/// with exact rational coefficients; absent indices are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorClass {
    n: usize,
    coeffs: BTreeMap<BoundaryIndex, BigRational>,
}

impl DivisorClass {
    pub fn zero(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::TooFewPoints(n));
        }
        Ok(DivisorClass {
            n,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficient(&self, idx: &BoundaryIndex) -> BigRational {
        self.coeffs.get(idx).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&BoundaryIndex, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Adds `value` to the coefficient at `idx`, dropping exact zeros.
    pub fn add_to(&mut self, idx: BoundaryIndex, value: BigRational) -> Result<()> {
        if idx.n != self.n {
            return Err(Error::PointCountMismatch(idx.n, self.n));
        }
        let entry = self
            .coeffs
            .entry(idx.clone())
            .or_insert_with(BigRational::zero);
        *entry += value;
        if entry.is_zero() {
            self.coeffs.remove(&idx);
        }
        Ok(())
    }

    /// Coefficient vector over the canonical index order.
    pub fn to_vector(&self, order: &[BoundaryIndex]) -> Vec<BigRational> {
        order.iter().map(|i| self.coefficient(i)).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct ClassEntry {
    side: Vec<usize>,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct ClassRepr {
    n: usize,
    coeffs: Vec<ClassEntry>,
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = ClassRepr {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|(idx, v)| ClassEntry {
                    side: idx.side.clone(),
                    value: ratio_to_string(v),
                })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ClassRepr::deserialize(deserializer)?;
        let mut class = DivisorClass::zero(repr.n).map_err(D::Error::custom)?;
        for e in repr.coeffs {
            let idx = BoundaryIndex::new(repr.n, &e.side).map_err(D::Error::custom)?;
            let v = ratio_from_str(&e.value).map_err(D::Error::custom)?;
            class.add_to(idx, v).map_err(D::Error::custom)?;
        }
        Ok(class)
    }
}

/// Coefficientwise `c1 + s * c2`.
pub fn add_scaled(c1: &DivisorClass, s: &BigRational, c2: &DivisorClass) -> Result<DivisorClass> {
    if c1.n != c2.n {
        return Err(Error::PointCountMismatch(c1.n, c2.n));
    }
    let mut out = c1.clone();
    for (idx, v) in &c2.coeffs {
        out.add_to(idx.clone(), s * v)?;
    }
    Ok(out)
}

/// The i-th psi class expanded over boundary divisors: the coefficient
/// of a partition is `(n-a)(n-a-1) / ((n-1)(n-2))` where `a` is the size
/// of the side containing `i`.
pub fn psi_class(n: usize, i: usize) -> Result<DivisorClass> {
    if n < 4 {
        return Err(Error::TooFewPoints(n));
    }
    if i < 1 || i > n {
        return Err(Error::InvalidInput(format!(
            "marked point {i} out of range 1..={n}"
        )));
    }
    let mut class = DivisorClass::zero(n)?;
    let den = ratio_from_i64(((n - 1) * (n - 2)) as i64);
    for idx in enumerate_boundary(n)? {
        let a = if idx.side_contains(i) {
            idx.side.len()
        } else {
            n - idx.side.len()
        };
        let num = ratio_from_i64(((n - a) * (n - a - 1)) as i64);
        class.add_to(idx, num / den.clone())?;
    }
    Ok(class)
}

/// Spanning set of the relation space: for every 4-subset `{i,j,k,l}`,
/// the differences `S(ij|kl) - S(ik|jl)` and `S(ij|kl) - S(il|jk)`,
/// where `S(ab|cd)` sums the boundary classes separating `{a,b}` from
/// `{c,d}`.
pub fn keel_relations(n: usize) -> Result<Vec<DivisorClass>> {
    let indices = enumerate_boundary(n)?;
    let separating_sum = |a: usize, b: usize, c: usize, d: usize| -> Result<DivisorClass> {
        let mut class = DivisorClass::zero(n)?;
        for idx in &indices {
            let (sa, sb, sc, sd) = (
                idx.side_contains(a),
                idx.side_contains(b),
                idx.side_contains(c),
                idx.side_contains(d),
            );
            if sa == sb && sc == sd && sa != sc {
                class.add_to(idx.clone(), ratio_from_i64(1))?;
            }
        }
        Ok(class)
    };
    let minus_one = ratio_from_i64(-1);
    let mut out = Vec::new();
    for q in (1..=n).combinations(4) {
        let (i, j, k, l) = (q[0], q[1], q[2], q[3]);
        let ij_kl = separating_sum(i, j, k, l)?;
        let ik_jl = separating_sum(i, k, j, l)?;
        let il_jk = separating_sum(i, l, j, k)?;
        out.push(add_scaled(&ij_kl, &minus_one, &ik_jl)?);
        out.push(add_scaled(&ij_kl, &minus_one, &il_jk)?);
    }
    Ok(out)
}

/// True iff `c1 - c2` lies in the rational span of the Keel relations,
/// i.e. the classes agree in the Picard group.
pub fn equal_mod_relations(c1: &DivisorClass, c2: &DivisorClass) -> Result<bool> {
    if c1.n != c2.n {
        return Err(Error::PointCountMismatch(c1.n, c2.n));
    }
    let order = enumerate_boundary(c1.n)?;
    let rows: Vec<Vec<BigRational>> = keel_relations(c1.n)?
        .iter()
        .map(|r| r.to_vector(&order))
        .collect();
    let diff = add_scaled(c1, &ratio_from_i64(-1), c2)?;
    Ok(linalg::in_row_span(&rows, &diff.to_vector(&order)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn canonicalization_and_idempotence() {
        let idx = BoundaryIndex::new(4, &[1, 2]).unwrap();
        assert_eq!(idx.side(), &[1, 2]);
        // The complement canonicalizes to the same index.
        let comp = BoundaryIndex::new(4, &[3, 4]).unwrap();
        assert_eq!(idx, comp);
        let again = BoundaryIndex::new(4, &comp.side()).unwrap();
        assert_eq!(again, idx, "canonicalizing twice is stable");
        assert!(idx.side_contains(1));
        assert!(!idx.side_contains(3));
        assert_eq!(idx.complement(), vec![3, 4]);
    }

    #[test]
    fn boundary_validation() {
        assert!(BoundaryIndex::new(3, &[1, 2]).is_err());
        assert!(BoundaryIndex::new(5, &[1]).is_err());
        assert!(BoundaryIndex::new(5, &[1, 2, 3, 4]).is_err());
        assert!(BoundaryIndex::new(5, &[0, 1]).is_err());
        assert!(BoundaryIndex::new(5, &[5, 6]).is_err());
    }

    #[test]
    fn enumeration_counts_and_order() {
        let b4 = enumerate_boundary(4).unwrap();
        let sides: Vec<&[usize]> = b4.iter().map(BoundaryIndex::side).collect();
        assert_eq!(sides, vec![&[1, 2][..], &[1, 3][..], &[2, 3][..]]);
        assert_eq!(enumerate_boundary(5).unwrap().len(), 10);
        assert_eq!(enumerate_boundary(6).unwrap().len(), 25);
        for n in 4..=10 {
            assert_eq!(
                enumerate_boundary(n).unwrap().len(),
                (1 << (n - 1)) - n - 1,
                "count for n={n}"
            );
        }
        assert!(enumerate_boundary(3).is_err());
    }

    #[test]
    fn psi_class_small_cases() {
        let p1 = psi_class(4, 1).unwrap();
        for idx in enumerate_boundary(4).unwrap() {
            assert_eq!(p1.coefficient(&idx), q(1, 3), "psi_1 at {idx}");
        }
        let p = psi_class(5, 1).unwrap();
        let idx = BoundaryIndex::new(5, &[1, 2]).unwrap();
        assert_eq!(p.coefficient(&idx), q(1, 2));
        assert!(psi_class(4, 0).is_err());
        assert!(psi_class(4, 5).is_err());
        assert!(psi_class(3, 1).is_err());
    }

    #[test]
    fn psi_sum_is_linear() {
        let mut total = DivisorClass::zero(4).unwrap();
        for i in 1..=4 {
            total = add_scaled(&total, &q(1, 1), &psi_class(4, i).unwrap()).unwrap();
        }
        for idx in enumerate_boundary(4).unwrap() {
            assert_eq!(total.coefficient(&idx), q(4, 3));
        }
    }

    #[test]
    fn psi_coefficients_match_closed_form_up_to_n8() {
        for n in 4..=8usize {
            for i in 1..=n {
                let class = psi_class(n, i).unwrap();
                for idx in enumerate_boundary(n).unwrap() {
                    let a = if idx.side_contains(i) {
                        idx.side().len()
                    } else {
                        n - idx.side().len()
                    };
                    let expected = q(((n - a) * (n - a - 1)) as i64, ((n - 1) * (n - 2)) as i64);
                    assert_eq!(class.coefficient(&idx), expected, "n={n} i={i} {idx}");
                }
            }
        }
    }

    #[test]
    fn add_scaled_examples() {
        let c = psi_class(4, 1).unwrap();
        let same = add_scaled(&c, &q(0, 1), &psi_class(4, 2).unwrap()).unwrap();
        assert_eq!(same, c);
        let zero = add_scaled(&c, &q(-1, 1), &c).unwrap();
        assert!(zero.is_zero());
        let other = DivisorClass::zero(5).unwrap();
        assert!(add_scaled(&c, &q(1, 1), &other).is_err());
    }

    #[test]
    fn keel_relation_examples() {
        let rels = keel_relations(4).unwrap();
        // First vector: [D_{12}] - [D_{13}].
        let d12 = BoundaryIndex::new(4, &[1, 2]).unwrap();
        let d13 = BoundaryIndex::new(4, &[1, 3]).unwrap();
        assert_eq!(rels[0].coefficient(&d12), q(1, 1));
        assert_eq!(rels[0].coefficient(&d13), q(-1, 1));
        // Every relation vector is zero in the Picard group.
        for n in 4..=6 {
            let zero = DivisorClass::zero(n).unwrap();
            for rel in keel_relations(n).unwrap() {
                assert!(equal_mod_relations(&rel, &zero).unwrap());
            }
        }
    }

    #[test]
    fn picard_quotient_dimensions() {
        // dim Pic = 2^{n-1} - n(n-1)/2 - 1.
        for n in 4..=6usize {
            let order = enumerate_boundary(n).unwrap();
            let rows: Vec<Vec<BigRational>> = keel_relations(n)
                .unwrap()
                .iter()
                .map(|r| r.to_vector(&order))
                .collect();
            let relation_rank = crate::linalg::row_rank(&rows);
            let expected_pic = (1 << (n - 1)) - n * (n - 1) / 2 - 1;
            assert_eq!(order.len() - relation_rank, expected_pic, "n={n}");
        }
    }

    #[test]
    fn equality_mod_relations() {
        let d12 = BoundaryIndex::new(4, &[1, 2]).unwrap();
        let d13 = BoundaryIndex::new(4, &[1, 3]).unwrap();
        let mut c12 = DivisorClass::zero(4).unwrap();
        c12.add_to(d12.clone(), q(1, 1)).unwrap();
        let mut c13 = DivisorClass::zero(4).unwrap();
        c13.add_to(d13, q(1, 1)).unwrap();
        assert!(equal_mod_relations(&c12, &c12).unwrap());
        assert!(equal_mod_relations(&c12, &c13).unwrap());
        let mut double = DivisorClass::zero(4).unwrap();
        double.add_to(d12, q(2, 1)).unwrap();
        assert!(!equal_mod_relations(&c12, &double).unwrap());
        let other = DivisorClass::zero(5).unwrap();
        assert!(equal_mod_relations(&c12, &other).is_err());
    }

    #[test]
    fn golden_json_for_psi() {
        let p = psi_class(4, 1).unwrap();
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"{"n":4,"coeffs":[{"side":[1,2],"value":"1/3"},{"side":[1,3],"value":"1/3"},{"side":[2,3],"value":"1/3"}]}"#
        );
    }

    proptest! {
        #[test]
        fn divisor_class_json_round_trip(
            n in 4usize..7,
            picks in proptest::collection::vec((0usize..25, -20i64..20, 1i64..9), 0..8)
        ) {
            let order = enumerate_boundary(n).unwrap();
            let mut class = DivisorClass::zero(n).unwrap();
            for (k, num, den) in picks {
                let idx = order[k % order.len()].clone();
                class.add_to(idx, q(num, den)).unwrap();
            }
            let json = serde_json::to_string(&class).unwrap();
            let back: DivisorClass = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, class);
        }

        #[test]
        fn psi_coefficient_depends_only_on_side_size(n in 4usize..9, i in 1usize..9) {
            prop_assume!(i <= n);
            let class = psi_class(n, i).unwrap();
            let mut by_profile: std::collections::HashMap<(usize, bool), BigRational> =
                std::collections::HashMap::new();
            for idx in enumerate_boundary(n).unwrap() {
                let key = (idx.side().len(), idx.side_contains(i));
                let v = class.coefficient(&idx);
                if let Some(prev) = by_profile.insert(key, v.clone()) {
                    prop_assert_eq!(prev, v);
                }
            }
        }
    }
}
