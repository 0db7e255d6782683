//! Ranks of n-point genus-0 blocks by factorization over fusion
//! coefficients, with a process-wide memo table keyed by
//! `(family, rank, level, sorted weights)`.

use std::collections::HashMap;
use std::sync::Mutex;

use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::liealg::{fusion_coefficient, Family, RootSystem, Weight};
use crate::{Error, Result};

/// An n-point rank query; every weight must lie in `P_level`.
#[derive(Debug, Clone)]
pub struct RankQuery {
    pub rs: RootSystem,
    pub level: u64,
    pub weights: Vec<Weight>,
}

impl RankQuery {
    pub fn new(rs: RootSystem, level: u64, weights: Vec<Weight>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidInput("rank query needs at least one weight".into()));
        }
        for w in &weights {
            rs.assert_in_level(w, level)?;
        }
        Ok(RankQuery { rs, level, weights })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct RankKey {
    family: Family,
    rank: usize,
    level: u64,
    weights: Vec<Vec<i64>>,
}

static RANK_CACHE: Lazy<Mutex<HashMap<RankKey, u64>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Rank of the block; the recursion splits off the two lexicographically
/// largest weights, which the splitting-independence property makes safe.
pub fn rank_block(q: &RankQuery) -> u64 {
    rank_of(&q.rs, q.level, q.weights.clone())
}

/// Rank computed by first splitting off the weights at positions `i` and
/// `j` (0-based); the result must not depend on the choice.
pub fn rank_block_with_split(q: &RankQuery, i: usize, j: usize) -> u64 {
    assert!(q.n() >= 4, "splitting needs at least 4 points");
    assert!(i != j && i < q.n() && j < q.n(), "invalid split positions");
    let a = q.weights[i].clone();
    let b = q.weights[j].clone();
    let rest: Vec<Weight> = q
        .weights
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i && k != j)
        .map(|(_, w)| w.clone())
        .collect();
    contract_pair(&q.rs, q.level, &a, &b, &rest)
}

/// Fast sound pre-filter: `true` guarantees the rank is zero (the weight
/// sum is outside the root lattice, so there are no invariants).
pub fn rank_vanishes_off_congruence(q: &RankQuery) -> bool {
    let rank = q.rs.rank();
    let mut total = vec![0i64; rank];
    for w in &q.weights {
        for (t, &c) in total.iter_mut().zip(w.coords()) {
            *t += c;
        }
    }
    !q.rs.in_root_lattice(&total).expect("lengths validated")
}

fn rank_of(rs: &RootSystem, level: u64, mut weights: Vec<Weight>) -> u64 {
    weights.sort_by(|a, b| b.cmp(a)); // descending
    let key = RankKey {
        family: rs.family(),
        rank: rs.rank(),
        level,
        weights: weights.iter().map(|w| w.coords().to_vec()).collect(),
    };
    if let Some(&r) = RANK_CACHE.lock().unwrap().get(&key) {
        return r;
    }
    let r = match weights.len() {
        1 => u64::from(weights[0].is_zero()),
        2 => u64::from(weights[1] == rs.dual_weight(&weights[0])),
        3 => fusion_coefficient(rs, level, &weights[0], &weights[1], &weights[2])
            .expect("query weights validated against the level"),
        _ => {
            let a = weights[0].clone();
            let b = weights[1].clone();
            let rest = weights[2..].to_vec();
            contract_pair(rs, level, &a, &b, &rest)
        }
    };
    RANK_CACHE.lock().unwrap().insert(key, r);
    r
}

fn contract_pair(rs: &RootSystem, level: u64, a: &Weight, b: &Weight, rest: &[Weight]) -> u64 {
    let mut total = 0u64;
    for lw in rs.level_weights(level) {
        let mu = lw.weight;
        let n = fusion_coefficient(rs, level, a, b, &mu)
            .expect("level weights are in the level by construction");
        if n == 0 {
            continue;
        }
        let mut sub = rest.to_vec();
        sub.push(rs.dual_weight(&mu));
        total += n * rank_of(rs, level, sub);
    }
    total
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    algebra: String,
    level: u64,
    weights: Vec<Vec<i64>>,
    rank: u64,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    entries: Vec<CacheEntry>,
}

const CACHE_VERSION: u32 = 1;

/// Serializes the rank memo table as versioned, binary-agnostic JSON.
pub fn rank_cache_to_json() -> String {
    let cache = RANK_CACHE.lock().unwrap();
    let mut entries: Vec<CacheEntry> = cache
        .iter()
        .map(|(k, &rank)| CacheEntry {
            algebra: format!("{}{}", k.family, k.rank),
            level: k.level,
            weights: k.weights.clone(),
            rank,
        })
        .collect();
    drop(cache);
    entries.sort_by(|a, b| {
        (&a.algebra, a.level, &a.weights).cmp(&(&b.algebra, b.level, &b.weights))
    });
    serde_json::to_string(&CacheFile {
        version: CACHE_VERSION,
        entries,
    })
    .expect("cache serialization cannot fail")
}

/// Merges a previously saved cache dump; returns the number of entries
/// loaded. Rejects dumps with a different version.
pub fn rank_cache_load_json(data: &str) -> Result<usize> {
    let file: CacheFile = serde_json::from_str(data)
        .map_err(|e| Error::InvalidInput(format!("malformed rank cache: {e}")))?;
    if file.version != CACHE_VERSION {
        return Err(Error::InvalidInput(format!(
            "rank cache version {} not supported (expected {CACHE_VERSION})",
            file.version
        )));
    }
    let mut n = 0;
    let mut cache = RANK_CACHE.lock().unwrap();
    for e in file.entries {
        let mut chars = e.algebra.chars();
        let family = chars
            .next()
            .ok_or_else(|| Error::InvalidInput("empty algebra in cache".into()))
            .and_then(Family::from_char)?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad algebra {:?} in cache", e.algebra)))?;
        cache.insert(
            RankKey {
                family,
                rank,
                level: e.level,
                weights: e.weights,
            },
            e.rank,
        );
        n += 1;
    }
    Ok(n)
}
