//! Sufficient conditions read off the division lattice.
//!
//! A polynomial quotient with `#A = #B` is `∏_{d∈Δ} Φ_d`. Partitioning `Δ`
//! into blocks whose cyclotomic products are known to be non-negative (or
//! flat) certifies the corresponding property blockwise.
//!
//! * `p^k ∨ D(d) = {p^k d' : d' | d}` with `p ∤ d` multiplies out to
//!   `(1 − q^(p^k d)) / (1 − q^(p^(k−1) d))`, a geometric sum.
//! * Distinct `d ≠ 1` with `ω(d) <= 1` are prime powers and `Φ_d` is a
//!   substituted geometric sum.
//! * A covering pair `d ≺ dp` with `p ∤ d` gives `Φ_d Φ_dp = Φ_d(q^p)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::certify::matching::max_matching;
use crate::cyclotomic::{divisors, omega, prime_factors, DivisorMultiset};

/// Which family of blocks to decompose `Δ` into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeMode {
    /// Blocks `p^k ∨ D(d)`; certifies non-negativity.
    NonnegPkjoin,
    /// Prime-power sets and covering pairs over `ω <= 1`; certifies non-negativity.
    NonnegOmega,
    /// Singletons with `ω <= 2` and covering pairs over `ω <= 2`; certifies
    /// that each block's product is flat.
    FlatOmega,
}

impl LatticeMode {
    fn omega_threshold(self) -> usize {
        match self {
            LatticeMode::NonnegPkjoin | LatticeMode::NonnegOmega => 1,
            LatticeMode::FlatOmega => 2,
        }
    }
}

/// The block `p^k ∨ D(d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PkJoinBlock {
    pub p: u64,
    pub k: u32,
    pub d: u64,
}

impl PkJoinBlock {
    pub fn elements(&self) -> Vec<u64> {
        let pk = self.p.pow(self.k);
        divisors(self.d).into_iter().map(|e| pk * e).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum OmegaBlock {
    /// A set of distinct indices, each with small `ω`.
    Set { elements: Vec<u64> },
    /// `lower ≺ upper` in the division lattice.
    Cover { lower: u64, upper: u64 },
}

impl OmegaBlock {
    pub fn elements(&self) -> Vec<u64> {
        match self {
            OmegaBlock::Set { elements } => elements.clone(),
            OmegaBlock::Cover { lower, upper } => vec![*lower, *upper],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    PkJoin(Vec<PkJoinBlock>),
    Omega(Vec<OmegaBlock>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeOutcome {
    Found(Decomposition),
    /// The search was exhaustive and no decomposition exists.
    NoneExists,
    /// The backtracking budget ran out first.
    SearchCapped,
}

/// Partitions `delta` into blocks of the requested family.
///
/// The omega modes reduce to a bipartite matching of high-`ω` indices onto
/// their lower covers and are exact. The `p^k ∨ D(d)` mode backtracks,
/// largest element first, visiting at most `backtrack_cap` states.
pub fn lattice_decompose(delta: &DivisorMultiset, mode: LatticeMode, backtrack_cap: usize) -> LatticeOutcome {
    match mode {
        LatticeMode::NonnegPkjoin => pkjoin(delta, backtrack_cap),
        LatticeMode::NonnegOmega | LatticeMode::FlatOmega => omega_blocks(delta, mode),
    }
}

fn pkjoin(delta: &DivisorMultiset, cap: usize) -> LatticeOutcome {
    let mut remaining: BTreeMap<u64, usize> = BTreeMap::new();
    for &x in delta.entries() {
        *remaining.entry(x).or_default() += 1;
    }
    let mut blocks = Vec::new();
    let mut states = 0usize;
    match pkjoin_search(&mut remaining, &mut blocks, &mut states, cap) {
        Some(true) => {
            blocks.sort_by_key(|b: &PkJoinBlock| (b.p, b.k, b.d));
            LatticeOutcome::Found(Decomposition::PkJoin(blocks))
        }
        Some(false) => LatticeOutcome::NoneExists,
        None => LatticeOutcome::SearchCapped,
    }
}

/// `Some(found)`, or `None` once the state budget is exhausted.
fn pkjoin_search(
    remaining: &mut BTreeMap<u64, usize>,
    blocks: &mut Vec<PkJoinBlock>,
    states: &mut usize,
    cap: usize,
) -> Option<bool> {
    *states += 1;
    if *states > cap {
        return None;
    }
    // The largest remaining element must be the top p^k d of its block.
    let Some((&top, _)) = remaining.iter().next_back() else {
        return Some(true);
    };
    for p in prime_factors(top).into_iter().rev() {
        let mut k = 0;
        let mut d = top;
        while d % p == 0 {
            d /= p;
            k += 1;
        }
        let block = PkJoinBlock { p, k, d };
        let elements = block.elements();
        if !elements.iter().all(|e| remaining.get(e).is_some_and(|&c| c > 0)) {
            continue;
        }
        for e in &elements {
            take(remaining, *e);
        }
        blocks.push(block);
        match pkjoin_search(remaining, blocks, states, cap) {
            Some(false) => {}
            other => return other,
        }
        blocks.pop();
        for e in elements {
            *remaining.entry(e).or_default() += 1;
        }
    }
    Some(false)
}

fn take(map: &mut BTreeMap<u64, usize>, x: u64) {
    let c = map.get_mut(&x).expect("element present");
    *c -= 1;
    if *c == 0 {
        map.remove(&x);
    }
}

fn omega_blocks(delta: &DivisorMultiset, mode: LatticeMode) -> LatticeOutcome {
    let threshold = mode.omega_threshold();
    let entries = delta.entries();
    if mode == LatticeMode::NonnegOmega && entries.contains(&1) {
        // Φ_1 = q − 1 is negative at 0 and cannot sit in a non-negative block.
        return LatticeOutcome::NoneExists;
    }
    let mut high = Vec::new();
    let mut low = Vec::new();
    for &x in entries.iter().rev() {
        match omega(x) {
            w if w <= threshold => low.push(x),
            w if w == threshold + 1 => high.push(x),
            _ => return LatticeOutcome::NoneExists,
        }
    }
    // high[i] may pair with low[j] = high[i] / p; try smaller p first.
    let adj: Vec<Vec<usize>> = high
        .iter()
        .map(|&x| {
            prime_factors(x)
                .into_iter()
                .filter(|&p| (x / p) % p != 0)
                .flat_map(|p| {
                    let target = x / p;
                    low.iter()
                        .enumerate()
                        .filter(move |(_, &l)| l == target)
                        .map(|(j, _)| j)
                })
                .collect()
        })
        .collect();
    let matching = max_matching(&adj, low.len(), Vec::new());
    if matching.iter().any(Option::is_none) {
        return LatticeOutcome::NoneExists;
    }
    let mut used = vec![false; low.len()];
    let mut blocks = Vec::new();
    for (i, j) in matching.into_iter().enumerate() {
        let j = j.unwrap();
        used[j] = true;
        blocks.push(OmegaBlock::Cover {
            lower: low[j],
            upper: high[i],
        });
    }
    let mut rest: Vec<u64> = low
        .iter()
        .zip(&used)
        .filter(|(_, &u)| !u)
        .map(|(&x, _)| x)
        .collect();
    rest.sort_unstable();
    match mode {
        LatticeMode::FlatOmega => {
            // Products of several flat polynomials need not be flat.
            blocks.extend(rest.into_iter().map(|x| OmegaBlock::Set { elements: vec![x] }));
        }
        _ => {
            // Peel off one copy of each distinct value per set.
            while !rest.is_empty() {
                let mut set = rest.clone();
                set.dedup();
                for x in &set {
                    let pos = rest.iter().position(|y| y == x).unwrap();
                    rest.remove(pos);
                }
                blocks.push(OmegaBlock::Set { elements: set });
            }
        }
    }
    blocks.sort_by_key(|b| b.elements());
    LatticeOutcome::Found(Decomposition::Omega(blocks))
}
