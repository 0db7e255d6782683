//! Weight systems, Freudenthal multiplicities, and tensor-product
//! decomposition.
//!
//! Weight systems are generated by closing the highest weight under
//! root strings; multiplicities come from the Freudenthal recursion;
//! products are decomposed with the signed dominantization rule applied
//! to the weights of the smaller factor. Results are memoized in
//! process-wide idempotent caches.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use num_traits::Zero;
use once_cell::sync::Lazy;

use super::{Family, RootSystem, Weight};
use crate::rational::{ratio_from_i64, ratio_to_i64};
use crate::Result;

pub(crate) struct WeightSystem {
    /// Every weight of the module with its multiplicity.
    pub all: Vec<(Vec<i64>, u64)>,
}

type AlgKey = (Family, usize);

static WEIGHT_SYSTEMS: Lazy<Mutex<HashMap<(AlgKey, Vec<i64>), Arc<WeightSystem>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

static TENSOR_CACHE: Lazy<Mutex<HashMap<(AlgKey, Vec<i64>, Vec<i64>), Arc<BTreeMap<Weight, u64>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// All weights of the irreducible module with highest weight `top`.
pub(crate) fn weight_system(rs: &RootSystem, top: &Weight) -> Arc<WeightSystem> {
    let key = (rs.cache_key(), top.coords().to_vec());
    if let Some(ws) = WEIGHT_SYSTEMS.lock().unwrap().get(&key) {
        return ws.clone();
    }
    let ws = Arc::new(compute_weight_system(rs, top));
    WEIGHT_SYSTEMS
        .lock()
        .unwrap()
        .entry(key)
        .or_insert(ws)
        .clone()
}

fn compute_weight_system(rs: &RootSystem, top: &Weight) -> WeightSystem {
    let rank = rs.rank();
    // Close under root strings: from any weight v with v_i > 0, the string
    // v - alpha_i, ..., v - v_i * alpha_i stays inside the module.
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue = vec![top.coords().to_vec()];
    seen.insert(queue[0].clone());
    while let Some(v) = queue.pop() {
        for i in 0..rank {
            let m = v[i];
            let mut w = v.clone();
            for _ in 0..m {
                for (j, x) in w.iter_mut().enumerate() {
                    *x -= rs.cartan_matrix()[i][j];
                }
                if seen.insert(w.clone()) {
                    queue.push(w.clone());
                }
            }
        }
    }

    // Freudenthal recursion on the dominant weights, ordered by depth
    // below the highest weight.
    let mut dominant: Vec<Vec<i64>> = seen
        .iter()
        .filter(|v| v.iter().all(|&c| c >= 0))
        .cloned()
        .collect();
    let inv = rs.inv_cartan_matrix();
    let depth = |v: &[i64]| -> i64 {
        // Height of top - v in the simple-root basis: sum_i of
        // c_i = sum_j (A^{-1})_{ji} (top - v)_j.
        let mut h = BigRational::zero();
        for i in 0..rank {
            for (j, (&t, &x)) in top.coords().iter().zip(v).enumerate() {
                h += &inv[j][i] * ratio_from_i64(t - x);
            }
        }
        ratio_to_i64(&h).expect("weights of a module differ from the top by root-lattice vectors")
    };
    dominant.sort_by_key(|v| (depth(v), v.clone()));

    let rho = rs.rho().to_vec();
    let plus_rho = |v: &[i64]| -> Vec<i64> { v.iter().zip(&rho).map(|(&a, &b)| a + b).collect() };
    let top_shift = plus_rho(top.coords());
    let top_norm = rs.inner_product(&top_shift, &top_shift).unwrap();

    let mut mults: HashMap<Vec<i64>, u64> = HashMap::new();
    for v in &dominant {
        if v == top.coords() {
            mults.insert(v.clone(), 1);
            continue;
        }
        let mut num = BigRational::zero();
        for alpha in rs.positive_roots() {
            let mut w: Vec<i64> = v.clone();
            loop {
                for (x, a) in w.iter_mut().zip(alpha) {
                    *x += a;
                }
                if !seen.contains(&w) {
                    break;
                }
                let m = mults[&rs.dominantize(&w)];
                num += ratio_from_i64(m as i64) * rs.inner_product(&w, alpha).unwrap();
            }
        }
        num *= ratio_from_i64(2);
        let shift = plus_rho(v);
        let den = &top_norm - rs.inner_product(&shift, &shift).unwrap();
        let m = ratio_to_i64(&(num / den)).expect("Freudenthal multiplicity must be an integer");
        assert!(m > 0, "multiplicity of a module weight must be positive");
        mults.insert(v.clone(), m as u64);
    }

    let mut all: Vec<(Vec<i64>, u64)> = seen
        .into_iter()
        .map(|v| {
            let m = mults[&rs.dominantize(&v)];
            (v, m)
        })
        .collect();
    all.sort();
    WeightSystem { all }
}

/// Decomposition of the tensor product of two irreducible modules into
/// irreducibles with multiplicities.
pub fn tensor_decompose(
    rs: &RootSystem,
    a: &Weight,
    b: &Weight,
) -> Result<BTreeMap<Weight, u64>> {
    if a.coords().len() != rs.rank() {
        return Err(crate::Error::RankMismatch {
            got: a.coords().len(),
            rank: rs.rank(),
        });
    }
    if b.coords().len() != rs.rank() {
        return Err(crate::Error::RankMismatch {
            got: b.coords().len(),
            rank: rs.rank(),
        });
    }
    let (lo, hi) = if a.coords() <= b.coords() {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    let key = (
        rs.cache_key(),
        lo.coords().to_vec(),
        hi.coords().to_vec(),
    );
    if let Some(t) = TENSOR_CACHE.lock().unwrap().get(&key) {
        return Ok(t.as_ref().clone());
    }

    // Expand the factor with the smaller weight system.
    let ws_lo = weight_system(rs, &lo);
    let ws_hi = weight_system(rs, &hi);
    let (expand, anchor) = if ws_lo.all.len() <= ws_hi.all.len() {
        (&ws_lo, &hi)
    } else {
        (&ws_hi, &lo)
    };

    let mut signed: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for (w, mult) in &expand.all {
        let mut xi: Vec<i64> = w
            .iter()
            .zip(anchor.coords())
            .zip(rs.rho())
            .map(|((&x, &y), &r)| x + y + r)
            .collect();
        let Some((dom, sign)) = rs.dominantize_strict(&xi) else {
            continue;
        };
        xi = dom;
        for (x, r) in xi.iter_mut().zip(rs.rho()) {
            *x -= r;
        }
        *signed.entry(xi).or_insert(0) += sign * *mult as i64;
    }

    let mut out: BTreeMap<Weight, u64> = BTreeMap::new();
    for (coords, m) in signed {
        if m == 0 {
            continue;
        }
        assert!(m > 0, "tensor multiplicities must be non-negative");
        out.insert(Weight::new(coords).unwrap(), m as u64);
    }

    let arc = Arc::new(out);
    let stored = TENSOR_CACHE
        .lock()
        .unwrap()
        .entry(key)
        .or_insert(arc)
        .clone();
    Ok(stored.as_ref().clone())
}
