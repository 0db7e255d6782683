//! First Chern classes of block bundles in two algebraically equal
//! presentations: directly over boundary divisors, and as an anomaly-
//! weighted psi sum with boundary corrections. Their coefficientwise
//! agreement is the central cross-check of the crate.

use num_rational::BigRational;
use num_traits::Zero;

use crate::fusionrank::{rank_block, RankQuery};
use crate::liealg::{RootSystem, Weight};
use crate::picm0n::{enumerate_boundary, psi_class, DivisorClass};
use crate::rational::ratio_from_i64;
use crate::{Error, Result};

/// Inputs of a first-Chern-class computation; n >= 4 marked points,
/// every weight in `P_level`.
#[derive(Debug, Clone)]
pub struct ChernQuery {
    pub rs: RootSystem,
    pub level: u64,
    pub weights: Vec<Weight>,
}

impl ChernQuery {
    pub fn new(rs: RootSystem, level: u64, weights: Vec<Weight>) -> Result<Self> {
        if weights.len() < 4 {
            return Err(Error::TooFewPoints(weights.len()));
        }
        for w in &weights {
            rs.assert_in_level(w, level)?;
        }
        Ok(ChernQuery { rs, level, weights })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    fn rank(&self) -> u64 {
        rank_block(
            &RankQuery::new(self.rs.clone(), self.level, self.weights.clone())
                .expect("query validated at construction"),
        )
    }

    fn anomaly(&self, w: &Weight) -> BigRational {
        self.rs
            .trace_anomaly(self.level, w)
            .expect("query weights have the right rank")
    }

    /// `sum_mu Delta_mu rk(side + mu) rk(complement + mu*)` over the level
    /// weights, restricted to the congruence class that can contribute.
    fn boundary_correction(&self, side: &[usize]) -> BigRational {
        let side_weights: Vec<Weight> = side
            .iter()
            .map(|&a| self.weights[a - 1].clone())
            .collect();
        let comp_weights: Vec<Weight> = (1..=self.n())
            .filter(|i| !side.contains(i))
            .map(|i| self.weights[i - 1].clone())
            .collect();
        let mut side_sum = vec![0i64; self.rs.rank()];
        for w in &side_weights {
            for (t, &c) in side_sum.iter_mut().zip(w.coords()) {
                *t += c;
            }
        }
        let mut acc = BigRational::zero();
        for lw in self.rs.level_weights(self.level) {
            let mu = lw.weight;
            // Off-congruence intermediates cannot contribute invariants.
            let total: Vec<i64> = side_sum
                .iter()
                .zip(mu.coords())
                .map(|(&a, &b)| a + b)
                .collect();
            if !self.rs.in_root_lattice(&total).expect("validated") {
                continue;
            }
            let delta = self.anomaly(&mu);
            if delta.is_zero() {
                continue;
            }
            let mut left = side_weights.clone();
            left.push(mu.clone());
            let r1 = rank_block(&RankQuery::new(self.rs.clone(), self.level, left).unwrap());
            if r1 == 0 {
                continue;
            }
            let mut right = comp_weights.clone();
            right.push(self.rs.dual_weight(&mu));
            let r2 = rank_block(&RankQuery::new(self.rs.clone(), self.level, right).unwrap());
            if r2 == 0 {
                continue;
            }
            acc += delta * ratio_from_i64((r1 * r2) as i64);
        }
        acc
    }
}

/// First Chern class with every coefficient computed directly on its
/// boundary divisor. Each unordered partition contributes exactly once.
pub fn c1_boundary_form(q: &ChernQuery) -> Result<DivisorClass> {
    let n = q.n();
    let rank = ratio_from_i64(q.rank() as i64);
    let den = ratio_from_i64(((n - 1) * (n - 2)) as i64);
    let mut class = DivisorClass::zero(n)?;
    for idx in enumerate_boundary(n)? {
        let i = idx.side().len();
        let sum_side: BigRational = idx
            .side()
            .iter()
            .map(|&a| q.anomaly(&q.weights[a - 1]))
            .sum();
        let sum_comp: BigRational = idx
            .complement()
            .iter()
            .map(|&a| q.anomaly(&q.weights[a - 1]))
            .sum();
        let first = &rank
            * (ratio_from_i64(((n - i) * (n - i - 1)) as i64) * sum_side
                + ratio_from_i64((i * (i - 1)) as i64) * sum_comp)
            / den.clone();
        let coeff = first - q.boundary_correction(idx.side());
        class.add_to(idx, coeff)?;
    }
    Ok(class)
}

/// First Chern class as the rank-scaled anomaly-weighted psi sum minus
/// boundary corrections, psi classes expanded over boundary divisors.
pub fn c1_psi_form(q: &ChernQuery) -> Result<DivisorClass> {
    let n = q.n();
    let rank = ratio_from_i64(q.rank() as i64);
    let mut class = DivisorClass::zero(n)?;
    for j in 1..=n {
        let scale = &rank * q.anomaly(&q.weights[j - 1]);
        if scale.is_zero() {
            continue;
        }
        class = crate::picm0n::add_scaled(&class, &scale, &psi_class(n, j)?)?;
    }
    for idx in enumerate_boundary(n)? {
        let corr = q.boundary_correction(idx.side());
        if !corr.is_zero() {
            class.add_to(idx, -corr)?;
        }
    }
    Ok(class)
}
