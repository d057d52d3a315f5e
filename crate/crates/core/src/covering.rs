//! Finite set coverings, algebraically essential indices and subcover search.
//!
//! Points and indices are plain `usize` identifiers. A family lists its index
//! pool in a fixed order; every iteration and every tie-break follows that
//! order, so reports are deterministic.

use serde::{Deserialize, Serialize};

use crate::error::{GaloisError, Result};

/// Default bound on the pool size accepted by [`smallest_subcover`].
pub const SMALLEST_SUBCOVER_LIMIT: usize = 20;

/// A family `{F(z)}` indexed by `pool`, read as a candidate cover of `universe`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverFamily {
    universe: Vec<usize>,
    pool: Vec<usize>,
    /// Per pool entry, positions into `universe`.
    sets: Vec<Vec<usize>>,
}

impl CoverFamily {
    /// Builds a family; each set is intersected with `universe` and deduplicated.
    pub fn new<I, S>(universe: impl IntoIterator<Item = usize>, indexed_sets: I) -> Self
    where
        I: IntoIterator<Item = (usize, S)>,
        S: IntoIterator<Item = usize>,
    {
        let mut universe: Vec<usize> = universe.into_iter().collect();
        universe.sort_unstable();
        universe.dedup();
        let mut pool = Vec::new();
        let mut sets = Vec::new();
        for (index, set) in indexed_sets {
            let mut positions: Vec<usize> =
                set.into_iter().filter_map(|w| universe.binary_search(&w).ok()).collect();
            positions.sort_unstable();
            positions.dedup();
            pool.push(index);
            sets.push(positions);
        }
        Self { universe, pool, sets }
    }

    pub fn universe(&self) -> &[usize] {
        &self.universe
    }

    pub fn pool(&self) -> &[usize] {
        &self.pool
    }

    /// The set of the `k`-th pool entry, as universe points.
    pub fn set(&self, k: usize) -> Vec<usize> {
        self.sets[k].iter().map(|&p| self.universe[p]).collect()
    }

    /// The subfamily of the given pool indices, in pool order.
    pub fn subfamily(&self, indices: &[usize]) -> Self {
        let keep: Vec<usize> = (0..self.pool.len()).filter(|&k| indices.contains(&self.pool[k])).collect();
        Self {
            universe: self.universe.clone(),
            pool: keep.iter().map(|&k| self.pool[k]).collect(),
            sets: keep.iter().map(|&k| self.sets[k].clone()).collect(),
        }
    }

    fn counts(&self, active: impl Iterator<Item = usize>) -> Vec<u32> {
        let mut counts = vec![0u32; self.universe.len()];
        for k in active {
            for &p in &self.sets[k] {
                counts[p] += 1;
            }
        }
        counts
    }
}

/// Outcome of [`check_cover`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub is_cover: bool,
    pub uncovered: Vec<usize>,
    /// Algebraically essential indices, in pool order.
    pub essential: Vec<usize>,
    /// `(index, point)` with the point covered by that index alone.
    pub privately_covered: Vec<(usize, usize)>,
    pub is_minimal: bool,
}

pub fn check_cover(family: &CoverFamily) -> CoverReport {
    let counts = family.counts(0..family.pool.len());
    let uncovered: Vec<usize> =
        (0..counts.len()).filter(|&p| counts[p] == 0).map(|p| family.universe[p]).collect();
    let mut essential = Vec::new();
    let mut privately_covered = Vec::new();
    for (k, set) in family.sets.iter().enumerate() {
        if let Some(&p) = set.iter().find(|&&p| counts[p] == 1) {
            essential.push(family.pool[k]);
            privately_covered.push((family.pool[k], family.universe[p]));
        }
    }
    let is_cover = uncovered.is_empty();
    let is_minimal = is_cover && essential.len() == family.pool.len();
    CoverReport { is_cover, uncovered, essential, privately_covered, is_minimal }
}

/// Drops indices in pool order while the remainder still covers.
///
/// Every index of the result is essential in the resulting subfamily.
pub fn irredundant_subcover(family: &CoverFamily) -> Result<Vec<usize>> {
    let mut counts = family.counts(0..family.pool.len());
    if counts.contains(&0) {
        return Err(GaloisError::NotACover);
    }
    let mut kept = Vec::new();
    for (k, set) in family.sets.iter().enumerate() {
        if set.iter().all(|&p| counts[p] >= 2) {
            for &p in set {
                counts[p] -= 1;
            }
        } else {
            kept.push(family.pool[k]);
        }
    }
    Ok(kept)
}

/// A minimum-cardinality subcover, searched exhaustively by size.
///
/// Among subcovers of the least size, the lexicographically first in pool
/// order is returned.
pub fn smallest_subcover(family: &CoverFamily, limit: usize) -> Result<Vec<usize>> {
    let n = family.pool.len();
    if n > limit {
        return Err(GaloisError::LimitExceeded { size: n, limit });
    }
    let words = family.universe.len().div_ceil(64);
    let masks: Vec<Vec<u64>> = family
        .sets
        .iter()
        .map(|set| {
            let mut m = vec![0u64; words];
            for &p in set {
                m[p / 64] |= 1 << (p % 64);
            }
            m
        })
        .collect();
    let mut full = vec![u64::MAX; words];
    if let Some(last) = full.last_mut() {
        let rem = family.universe.len() % 64;
        if rem != 0 {
            *last = (1u64 << rem) - 1;
        }
    }
    let covers = |choice: &[usize]| {
        let mut acc = vec![0u64; words];
        for &k in choice {
            for (a, m) in acc.iter_mut().zip(&masks[k]) {
                *a |= m;
            }
        }
        acc == full
    };
    for size in 0..=n {
        let mut choice: Vec<usize> = (0..size).collect();
        loop {
            if covers(&choice) {
                return Ok(choice.iter().map(|&k| family.pool[k]).collect());
            }
            if !next_combination(&mut choice, n) {
                break;
            }
        }
    }
    Err(GaloisError::NotACover)
}

/// Advances `c` to the next `c.len()`-subset of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
        return false;
    };
    c[i] += 1;
    for j in i + 1..k {
        c[j] = c[j - 1] + 1;
    }
    true
}
