//! Fusion coefficients at a fixed level, computed by folding tensor
//! multiplicities into the level-`l` alcove with signs.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;

use super::{tensor_decompose, Family, RootSystem, Weight};
use crate::Result;

type AlgKey = (Family, usize);

static FUSED_CACHE: Lazy<
    Mutex<HashMap<(AlgKey, u64, Vec<i64>, Vec<i64>), Arc<BTreeMap<Weight, u64>>>>,
> = Lazy::new(|| Mutex::new(HashMap::new()));

/// `N_{a,b,c}` at the given level: the rank of the three-point block with
/// inputs `a`, `b`, `c`. Symmetric in its three arguments.
pub fn fusion_coefficient(
    rs: &RootSystem,
    level: u64,
    a: &Weight,
    b: &Weight,
    c: &Weight,
) -> Result<u64> {
    rs.assert_in_level(a, level)?;
    rs.assert_in_level(b, level)?;
    rs.assert_in_level(c, level)?;
    let table = fused_product(rs, level, a, b)?;
    Ok(table.get(&rs.dual_weight(c)).copied().unwrap_or(0))
}

/// The fusion product of `a` and `b` at `level` as a map from dominant
/// weights to multiplicities.
pub(crate) fn fused_product(
    rs: &RootSystem,
    level: u64,
    a: &Weight,
    b: &Weight,
) -> Result<Arc<BTreeMap<Weight, u64>>> {
    let (lo, hi) = if a.coords() <= b.coords() {
        (a, b)
    } else {
        (b, a)
    };
    let key = (
        rs.cache_key(),
        level,
        lo.coords().to_vec(),
        hi.coords().to_vec(),
    );
    if let Some(t) = FUSED_CACHE.lock().unwrap().get(&key) {
        return Ok(t.clone());
    }

    let tensor = tensor_decompose(rs, lo, hi)?;
    let kappa = level as i64 + rs.dual_coxeter() as i64;
    let mut signed: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for (comp, mult) in &tensor {
        let mut xi: Vec<i64> = comp
            .coords()
            .iter()
            .zip(rs.rho())
            .map(|(&c, &r)| c + r)
            .collect();
        let Some((folded, sign)) = fold_into_alcove(rs, &mut xi, kappa) else {
            continue;
        };
        let coords: Vec<i64> = folded
            .iter()
            .zip(rs.rho())
            .map(|(&c, &r)| c - r)
            .collect();
        *signed.entry(coords).or_insert(0) += sign * *mult as i64;
    }

    let mut out = BTreeMap::new();
    for (coords, m) in signed {
        if m == 0 {
            continue;
        }
        assert!(m > 0, "fusion multiplicities must be non-negative");
        out.insert(Weight::new(coords).unwrap(), m as u64);
    }

    let arc = Arc::new(out);
    Ok(FUSED_CACHE
        .lock()
        .unwrap()
        .entry(key)
        .or_insert(arc)
        .clone())
}

/// Moves the shifted weight `xi` into the interior of the alcove at the
/// shifted level `kappa`, tracking the sign of the affine Weyl element.
/// Returns `None` when `xi` lies on a wall of the alcove.
fn fold_into_alcove(rs: &RootSystem, xi: &mut Vec<i64>, kappa: i64) -> Option<(Vec<i64>, i64)> {
    let mut sign = 1i64;
    for _ in 0..super::REFLECTION_BUDGET {
        if let Some(i) = xi.iter().position(|&c| c < 0) {
            rs.reflect(xi, i);
            sign = -sign;
            continue;
        }
        if xi.iter().any(|&c| c == 0) {
            return None;
        }
        let lv = rs.level_of(xi).expect("length is checked");
        if lv > kappa {
            // Affine reflection across (xi, theta) = kappa.
            for (x, t) in xi.iter_mut().zip(rs.theta()) {
                *x += (kappa - lv) * t;
            }
            sign = -sign;
            continue;
        }
        if lv == kappa {
            return None;
        }
        return Some((xi.clone(), sign));
    }
    panic!("alcove folding did not terminate");
}
