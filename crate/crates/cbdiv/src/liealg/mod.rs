//! Exact root-system, weight, tensor-product, fusion, and anomaly
//! computations for the classical simple Lie algebras.
//!
//! Weights are held in fundamental-weight coordinates (Dynkin labels).
//! The invariant form is normalized so the highest root has squared
//! length 2, which makes every quantity downstream an exact rational.
//! Integrable modules never get materialized; all operations work on
//! `(weight, level)` labels.

mod fusion;
mod tensor;

pub use fusion::fusion_coefficient;
pub use tensor::tensor_decompose;

use std::collections::HashSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::ratio_from_i64;
use crate::{linalg, Error, Result};

/// Classical family label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl Family {
    pub fn from_char(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'A' => Ok(Family::A),
            'B' => Ok(Family::B),
            'C' => Ok(Family::C),
            'D' => Ok(Family::D),
            other => Err(Error::UnsupportedAlgebra(format!("family {other}"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
        };
        write!(f, "{c}")
    }
}

/// Dominant integral weight in fundamental-weight coordinates.
///
/// Serialized as a plain JSON array of non-negative integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    coords: Vec<i64>,
}

impl Weight {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.iter().any(|&c| c < 0) {
            return Err(Error::NotDominant(coords));
        }
        Ok(Weight { coords })
    }

    pub fn zero(rank: usize) -> Self {
        Weight {
            coords: vec![0; rank],
        }
    }

    /// The i-th fundamental weight, 1-based; `i = 0` gives the zero weight.
    pub fn fundamental(rank: usize, i: usize) -> Self {
        assert!(i <= rank, "fundamental index {i} out of range for rank {rank}");
        let mut coords = vec![0; rank];
        if i > 0 {
            coords[i - 1] = 1;
        }
        Weight { coords }
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<i64>::deserialize(deserializer)?;
        Weight::new(coords).map_err(D::Error::custom)
    }
}

/// A dominant weight together with a level bound it satisfies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelWeight {
    pub weight: Weight,
    pub level: u64,
}

impl LevelWeight {
    pub fn new(rs: &RootSystem, weight: Weight, level: u64) -> Result<Self> {
        let l = rs.level_of(weight.coords())?;
        if l > level as i64 {
            return Err(Error::LevelExceeded {
                weight: weight.coords().to_vec(),
                level: l,
                max: level as i64,
            });
        }
        Ok(LevelWeight { weight, level })
    }
}

/// Cartan data of a simple classical Lie algebra with the invariant form
/// normalized so the highest root has squared length 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    family: Family,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    form: Vec<Vec<BigRational>>,
    inv_cartan: Vec<Vec<BigRational>>,
    positive_roots: Vec<Vec<i64>>,
    theta: Vec<i64>,
    rho: Vec<i64>,
    comarks: Vec<i64>,
    dual_coxeter: u64,
    dimension: u64,
}

/// Builds the root system for a classical family.
///
/// Rank bounds: A needs rank >= 1, B and C rank >= 2, D rank >= 3.
pub fn build_root_system(family: Family, rank: usize) -> Result<RootSystem> {
    RootSystem::new(family, rank)
}

impl RootSystem {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let min_rank = match family {
            Family::A => 1,
            Family::B | Family::C => 2,
            Family::D => 3,
        };
        if rank < min_rank {
            return Err(Error::UnsupportedAlgebra(format!(
                "{family}{rank} (family {family} needs rank >= {min_rank})"
            )));
        }

        let cartan = cartan_matrix(family, rank);
        let half_norms = simple_root_half_norms(family, rank);
        let inv_cartan =
            linalg::invert(&cartan).expect("Cartan matrix of a simple algebra is invertible");

        // (omega_i, omega_j) = d_i * (A^{-1})_{ji} with d_i = (alpha_i, alpha_i)/2.
        let mut form = vec![vec![BigRational::zero(); rank]; rank];
        for i in 0..rank {
            for j in 0..rank {
                form[i][j] = &half_norms[i] * &inv_cartan[j][i];
            }
        }
        for i in 0..rank {
            for j in 0..i {
                assert_eq!(form[i][j], form[j][i], "invariant form must be symmetric");
            }
        }

        let positive_roots = positive_roots(&cartan);
        let expected = match family {
            Family::A => rank * (rank + 1) / 2,
            Family::B | Family::C => rank * rank,
            Family::D => rank * (rank - 1),
        };
        assert_eq!(positive_roots.len(), expected, "positive root count");

        // The highest root is the unique positive root of maximal height.
        let height = |root: &RootCoords| root.root.iter().sum::<i64>();
        let max_h = positive_roots.iter().map(height).max().unwrap();
        let highest: Vec<_> = positive_roots
            .iter()
            .filter(|r| height(r) == max_h)
            .collect();
        assert_eq!(highest.len(), 1, "highest root must be unique");
        let theta = highest[0].weight.clone();

        let rho = vec![1i64; rank];
        let positive_roots: Vec<Vec<i64>> =
            positive_roots.into_iter().map(|r| r.weight).collect();

        let mut rs = RootSystem {
            family,
            rank,
            cartan,
            form,
            inv_cartan,
            positive_roots,
            theta,
            rho,
            comarks: Vec::new(),
            dual_coxeter: 0,
            dimension: 0,
        };

        let two = ratio_from_i64(2);
        assert_eq!(
            rs.inner_product(&rs.theta, &rs.theta)?,
            two,
            "normalization (theta, theta) = 2 violated"
        );

        let mut comarks = Vec::with_capacity(rank);
        for i in 0..rank {
            let mut e = vec![0i64; rank];
            e[i] = 1;
            let v = rs.inner_product(&e, &rs.theta)?;
            let c = crate::rational::ratio_to_i64(&v)
                .expect("comarks of a normalized root system are integers");
            assert!(c >= 1);
            comarks.push(c);
        }
        rs.comarks = comarks;

        let rho_theta = rs.inner_product(&rs.rho, &rs.theta)?;
        let g_star = crate::rational::ratio_to_i64(&rho_theta)
            .expect("(rho, theta) is an integer for a normalized root system")
            + 1;
        rs.dual_coxeter = g_star as u64;
        rs.dimension = (2 * rs.positive_roots.len() + rank) as u64;
        Ok(rs)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Cartan matrix with entries `<alpha_i, alpha_j^v>`; row i gives the
    /// fundamental coordinates of the simple root alpha_i.
    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Gram matrix of the fundamental weights under the normalized form.
    pub fn form_matrix(&self) -> &[Vec<BigRational>] {
        &self.form
    }

    /// Positive roots in fundamental-weight coordinates.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub(crate) fn inv_cartan_matrix(&self) -> &[Vec<BigRational>] {
        &self.inv_cartan
    }

    /// Highest root in fundamental-weight coordinates.
    pub fn theta(&self) -> &[i64] {
        &self.theta
    }

    /// Half-sum of positive roots: all-ones fundamental coordinates.
    pub fn rho(&self) -> &[i64] {
        &self.rho
    }

    pub fn dual_coxeter(&self) -> u64 {
        self.dual_coxeter
    }

    pub fn dimension(&self) -> u64 {
        self.dimension
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family, self.rank)
    }

    /// Normalized invariant form on weight space, exact.
    pub fn inner_product(&self, a: &[i64], b: &[i64]) -> Result<BigRational> {
        self.check_len(a)?;
        self.check_len(b)?;
        let mut acc = BigRational::zero();
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                acc += &self.form[i][j] * ratio_from_i64(ai * bj);
            }
        }
        Ok(acc)
    }

    fn check_len(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.rank {
            return Err(Error::RankMismatch {
                got: v.len(),
                rank: self.rank,
            });
        }
        Ok(())
    }

    /// `(lambda, theta)` as an integer; the level of the weight.
    pub fn level_of(&self, coords: &[i64]) -> Result<i64> {
        self.check_len(coords)?;
        Ok(coords
            .iter()
            .zip(&self.comarks)
            .map(|(&c, &m)| c * m)
            .sum())
    }

    pub fn assert_in_level(&self, w: &Weight, level: u64) -> Result<()> {
        let l = self.level_of(w.coords())?;
        if l > level as i64 {
            return Err(Error::LevelExceeded {
                weight: w.coords().to_vec(),
                level: l,
                max: level as i64,
            });
        }
        Ok(())
    }

    /// All dominant weights of level at most `level`, in lexicographic
    /// order on coordinates.
    pub fn level_weights(&self, level: u64) -> Vec<LevelWeight> {
        let mut found = Vec::new();
        let mut coords = vec![0i64; self.rank];
        self.enumerate_level(level as i64, 0, &mut coords, &mut found);
        found.sort();
        found
            .into_iter()
            .map(|coords| LevelWeight {
                weight: Weight { coords },
                level,
            })
            .collect()
    }

    fn enumerate_level(
        &self,
        budget: i64,
        pos: usize,
        coords: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        if pos == self.rank {
            out.push(coords.clone());
            return;
        }
        let m = self.comarks[pos];
        let mut c = 0;
        while c * m <= budget {
            coords[pos] = c;
            self.enumerate_level(budget - c * m, pos + 1, coords, out);
            c += 1;
        }
        coords[pos] = 0;
    }

    /// The dual weight `-w0(lambda)`; an involution.
    pub fn dual_weight(&self, w: &Weight) -> Weight {
        let mut coords = w.coords.clone();
        match self.family {
            Family::A => coords.reverse(),
            Family::B | Family::C => {}
            Family::D => {
                if self.rank % 2 == 1 {
                    coords.swap(self.rank - 2, self.rank - 1);
                }
            }
        }
        Weight { coords }
    }

    /// Trace anomaly `(lambda, lambda + 2 rho) / (2 (g* + level))`.
    pub fn trace_anomaly(&self, level: u64, w: &Weight) -> Result<BigRational> {
        let mut shifted = w.coords.clone();
        for c in shifted.iter_mut() {
            *c += 2;
        }
        let num = self.inner_product(w.coords(), &shifted)?;
        let den = ratio_from_i64(2 * (self.dual_coxeter as i64 + level as i64));
        Ok(num / den)
    }

    /// Conformal anomaly `level * dim / (g* + level)`.
    pub fn conformal_anomaly(&self, level: u64) -> BigRational {
        ratio_from_i64(level as i64 * self.dimension as i64)
            / ratio_from_i64(self.dual_coxeter as i64 + level as i64)
    }

    /// True iff `coords` lies in the root lattice (integer combination of
    /// simple roots), decided by an exact linear solve.
    pub fn in_root_lattice(&self, coords: &[i64]) -> Result<bool> {
        self.check_len(coords)?;
        // Solve A^T c = coords, i.e. c_i = sum_j (A^{-1})_{ji} coords_j.
        for i in 0..self.rank {
            let mut acc = BigRational::zero();
            for j in 0..self.rank {
                if coords[j] != 0 {
                    acc += &self.inv_cartan[j][i] * ratio_from_i64(coords[j]);
                }
            }
            if !acc.denom().is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True iff `reference - w` lies in the root lattice.
    pub fn in_congruence_class(&self, w: &Weight, reference: &Weight) -> Result<bool> {
        self.check_len(w.coords())?;
        self.check_len(reference.coords())?;
        let diff: Vec<i64> = reference
            .coords
            .iter()
            .zip(&w.coords)
            .map(|(&a, &b)| a - b)
            .collect();
        self.in_root_lattice(&diff)
    }

    /// Dimension of the irreducible module with highest weight `w`, by the
    /// Weyl product formula.
    pub fn weyl_dimension(&self, w: &Weight) -> BigUint {
        let mut num = BigRational::one();
        let shifted: Vec<i64> = w.coords.iter().zip(&self.rho).map(|(&a, &b)| a + b).collect();
        for root in &self.positive_roots {
            let a = self.inner_product(&shifted, root).unwrap();
            let b = self.inner_product(&self.rho, root).unwrap();
            num *= a / b;
        }
        assert!(num.denom().is_one() && !num.is_negative(), "Weyl dimension must be a positive integer");
        num.numer().to_biguint().unwrap()
    }

    /// Reflection in the i-th simple root, on raw coordinates.
    pub(crate) fn reflect(&self, coords: &mut [i64], i: usize) {
        let c = coords[i];
        if c == 0 {
            return;
        }
        for (j, x) in coords.iter_mut().enumerate() {
            *x -= c * self.cartan[i][j];
        }
    }

    /// Dominant representative of the Weyl orbit of `coords`.
    pub(crate) fn dominantize(&self, coords: &[i64]) -> Vec<i64> {
        let mut v = coords.to_vec();
        for _ in 0..REFLECTION_BUDGET {
            match v.iter().position(|&c| c < 0) {
                Some(i) => self.reflect(&mut v, i),
                None => return v,
            }
        }
        panic!("dominantization did not terminate for {coords:?}");
    }

    /// Sends `coords` to the interior of the dominant chamber with the
    /// sign of the Weyl element used; `None` if the orbit meets a wall.
    pub(crate) fn dominantize_strict(&self, coords: &[i64]) -> Option<(Vec<i64>, i64)> {
        let mut v = coords.to_vec();
        let mut sign = 1i64;
        for _ in 0..REFLECTION_BUDGET {
            match v.iter().position(|&c| c < 0) {
                Some(i) => {
                    self.reflect(&mut v, i);
                    sign = -sign;
                }
                None => {
                    if v.iter().any(|&c| c == 0) {
                        return None;
                    }
                    return Some((v, sign));
                }
            }
        }
        panic!("strict dominantization did not terminate for {coords:?}");
    }

    pub(crate) fn cache_key(&self) -> (Family, usize) {
        (self.family, self.rank)
    }
}

const REFLECTION_BUDGET: usize = 1_000_000;

fn cartan_matrix(family: Family, rank: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; rank]; rank];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let chain = |a: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match family {
        Family::A => {
            for i in 0..rank.saturating_sub(1) {
                chain(&mut a, i, i + 1);
            }
        }
        Family::B => {
            for i in 0..rank - 1 {
                chain(&mut a, i, i + 1);
            }
            // Short simple root at the end: <alpha_{r-1}, alpha_r^v> = -2.
            a[rank - 2][rank - 1] = -2;
            a[rank - 1][rank - 2] = -1;
        }
        Family::C => {
            for i in 0..rank - 1 {
                chain(&mut a, i, i + 1);
            }
            a[rank - 2][rank - 1] = -1;
            a[rank - 1][rank - 2] = -2;
        }
        Family::D => {
            for i in 0..rank - 2 {
                chain(&mut a, i, i + 1);
            }
            chain(&mut a, rank - 3, rank - 1);
        }
    }
    a
}

/// `(alpha_i, alpha_i) / 2` under the normalization `(theta, theta) = 2`.
fn simple_root_half_norms(family: Family, rank: usize) -> Vec<BigRational> {
    let one = BigRational::one();
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    match family {
        Family::A | Family::D => vec![one; rank],
        Family::B => {
            let mut v = vec![one; rank];
            v[rank - 1] = half;
            v
        }
        Family::C => {
            let mut v = vec![half; rank];
            v[rank - 1] = one;
            v
        }
    }
}

struct RootCoords {
    root: Vec<i64>,   // coordinates in the simple-root basis
    weight: Vec<i64>, // fundamental-weight coordinates
}

/// Closure of the simple roots under root-string extension.
fn positive_roots(cartan: &[Vec<i64>]) -> Vec<RootCoords> {
    let rank = cartan.len();
    let mut known: HashSet<Vec<i64>> = HashSet::new();
    let mut order: Vec<Vec<i64>> = Vec::new();
    let mut frontier: Vec<Vec<i64>> = Vec::new();
    for i in 0..rank {
        let mut e = vec![0i64; rank];
        e[i] = 1;
        known.insert(e.clone());
        order.push(e.clone());
        frontier.push(e);
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for rc in &frontier {
            let wc: Vec<i64> = (0..rank)
                .map(|j| (0..rank).map(|i| rc[i] * cartan[i][j]).sum())
                .collect();
            for i in 0..rank {
                // p = depth of the root string below rc in direction alpha_i.
                let mut p = 0i64;
                let mut down = rc.clone();
                loop {
                    down[i] -= 1;
                    if down[i] < 0 || !known.contains(&down) {
                        break;
                    }
                    p += 1;
                }
                if p - wc[i] > 0 {
                    let mut up = rc.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        order.push(up.clone());
                        next.push(up);
                    }
                }
            }
        }
        frontier = next;
    }
    order
        .into_iter()
        .map(|rc| {
            let weight = (0..rank)
                .map(|j| (0..rank).map(|i| rc[i] * cartan[i][j]).sum())
                .collect();
            RootCoords { root: rc, weight }
        })
        .collect()
}
