//! Numerical semigroups: membership, Apéry sets, Frobenius numbers and
//! Selmer's upper bound.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_integer::Integer;

use crate::error::SemigroupError;

/// A finite generating set `S` of the semigroup `⟨S⟩`.
///
/// Generators are kept sorted and deduplicated. Membership for `gcd(S) = g > 1`
/// reduces to `g | x` and `x/g ∈ ⟨S/g⟩`; the Apéry table of `S/g` with respect
/// to its smallest element is computed on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    gens: Vec<u64>,
    gcd: u64,
    reduced: Vec<u64>,
    apery: Vec<u64>,
}

impl GeneratorSet {
    pub fn new(gens: &[u64]) -> Result<Self, SemigroupError> {
        let mut gens = gens.to_vec();
        gens.sort_unstable();
        gens.dedup();
        if gens.is_empty() {
            return Err(SemigroupError::Empty);
        }
        if gens[0] == 0 {
            return Err(SemigroupError::ZeroGenerator);
        }
        let gcd = gens.iter().fold(0, |g, &x| g.gcd(&x));
        let reduced: Vec<u64> = gens.iter().map(|&x| x / gcd).collect();
        let apery = apery_table(&reduced);
        Ok(GeneratorSet {
            gens,
            gcd,
            reduced,
            apery,
        })
    }

    pub fn generators(&self) -> &[u64] {
        &self.gens
    }

    pub fn gcd(&self) -> u64 {
        self.gcd
    }

    /// `S / gcd(S)`.
    pub fn reduced(&self) -> &[u64] {
        &self.reduced
    }

    /// Apéry table of the reduced set with respect to its minimum.
    pub fn apery(&self) -> &[u64] {
        &self.apery
    }

    pub fn contains(&self, x: u64) -> bool {
        if x % self.gcd != 0 {
            return false;
        }
        let y = x / self.gcd;
        let m = self.reduced[0];
        y >= self.apery[(y % m) as usize]
    }

    /// Frobenius number of `S / gcd(S)`; `-1` when every non-negative integer
    /// is representable.
    pub fn reduced_frobenius(&self) -> i64 {
        *self.apery.iter().max().unwrap() as i64 - self.reduced[0] as i64
    }

    /// The unique minimal generating system of `⟨S⟩`, ascending.
    pub fn minimal_generators(&self) -> Vec<u64> {
        let mut minimal: Vec<u64> = Vec::new();
        let mut current: Option<GeneratorSet> = None;
        for &s in &self.gens {
            if current.as_ref().is_some_and(|c| c.contains(s)) {
                continue;
            }
            minimal.push(s);
            current = Some(GeneratorSet::new(&minimal).expect("non-empty positive generators"));
        }
        minimal
    }
}

/// Least element of `⟨gens⟩` in each residue class modulo `min(gens)`, by
/// Dijkstra over residues. Entries of unreachable classes (possible only when
/// the gcd exceeds 1) are `u64::MAX`.
fn apery_table(gens: &[u64]) -> Vec<u64> {
    let m = gens[0];
    let mut dist = vec![u64::MAX; m as usize];
    dist[0] = 0;
    let mut heap = BinaryHeap::from([Reverse((0u64, 0u64))]);
    while let Some(Reverse((d, r))) = heap.pop() {
        if d > dist[r as usize] {
            continue;
        }
        for &g in &gens[1..] {
            let nr = (r + g) % m;
            let nd = d + g;
            if nd < dist[nr as usize] {
                dist[nr as usize] = nd;
                heap.push(Reverse((nd, nr)));
            }
        }
    }
    dist
}

/// Apéry set of `S` with respect to `min(S)`; for `gcd(S) > 1` this is the
/// table of `S / gcd(S)`.
pub fn apery_set(s: &GeneratorSet) -> Vec<u64> {
    s.apery.clone()
}

pub fn semigroup_contains(s: &GeneratorSet, x: u64) -> bool {
    s.contains(x)
}

/// `F(S) = max(Apéry) − min(S)`, or `-1` when `1 ∈ S`.
pub fn frobenius_number(s: &GeneratorSet) -> Result<i64, SemigroupError> {
    if s.gcd != 1 {
        return Err(SemigroupError::GcdNotOne(s.gcd));
    }
    Ok(s.reduced_frobenius())
}

/// Selmer's bound `2·max·⌊min/k⌋ − min` evaluated on the minimal generating
/// system (`k` generators) of `⟨S⟩`.
///
/// Redundant generators would shrink `⌊min/k⌋` without changing the semigroup,
/// and the formula is not an upper bound for such non-minimal sets.
pub fn selmer_bound(s: &GeneratorSet) -> Result<i64, SemigroupError> {
    if s.gens.len() < 2 {
        return Err(SemigroupError::TooFewGenerators(s.gens.len()));
    }
    if s.gcd != 1 {
        return Err(SemigroupError::GcdNotOne(s.gcd));
    }
    let minimal = s.minimal_generators();
    Ok(selmer_formula(&minimal))
}

/// The raw formula `2·max(S)·⌊min(S)/#S⌋ − min(S)` on sorted `S`.
pub fn selmer_formula(sorted: &[u64]) -> i64 {
    let k = sorted.len() as i64;
    let min = sorted[0] as i64;
    let max = sorted[sorted.len() - 1] as i64;
    2 * max * (min / k) - min
}

/// `#(A ∩̄ ⟨S⟩)`, counted with multiplicity.
pub fn count_representable(a: &[u64], s: &GeneratorSet) -> usize {
    a.iter().filter(|&&x| s.contains(x)).count()
}
