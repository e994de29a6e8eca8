use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::certify::matching::max_matching;
use crate::certify::Certificate;
use crate::cyclotomic::polynomiality_delta;
use crate::error::CertifyError;
use crate::polyq::{IntPoly, QuotientSpec};

/// A pairing `j ↦ f(j)` with `b_j | a_{f(j)}` for every `j`, found by maximum
/// bipartite matching on the divisibility graph. Equal values are paired
/// first, so `A = B` yields the identity.
///
/// When present the quotient is the product of the local quotients
/// `(1 − q^{a_f(j)}) / (1 − q^{b_j})`, each a flat geometric sum.
pub fn bijection_criterion(a: &[u64], b: &[u64]) -> Result<Option<Vec<usize>>, CertifyError> {
    if a.len() != b.len() {
        return Err(CertifyError::SizeMismatch {
            numerator: a.len(),
            denominator: b.len(),
        });
    }
    let adj: Vec<Vec<usize>> = b
        .iter()
        .map(|&bj| {
            let mut v: Vec<usize> = (0..a.len()).filter(|&i| a[i] % bj == 0).collect();
            v.sort_by_key(|&i| a[i] != bj);
            v
        })
        .collect();
    let mut seed = vec![None; b.len()];
    let mut taken = vec![false; a.len()];
    for (j, &bj) in b.iter().enumerate() {
        if let Some(i) = (0..a.len()).find(|&i| !taken[i] && a[i] == bj) {
            taken[i] = true;
            seed[j] = Some(i);
        }
    }
    let matching = max_matching(&adj, a.len(), seed);
    Ok(matching.into_iter().collect())
}

/// The left-hand side `2·b_n·⌊b_{n−1}/2⌋ − b_1` of the fast-path inequality,
/// for sorted `b` with at least two entries.
pub fn fast_path_bound(b: &[u64]) -> i128 {
    let n = b.len();
    2 * b[n - 1] as i128 * (b[n - 2] / 2) as i128 - b[0] as i128
}

/// Certifies HSOP membership (hence non-negativity) of a balanced polynomial
/// quotient when `2·b_n·⌊b_{n−1}/2⌋ − b_1 < a_1`, with `A`, `B` ascending.
/// For `n = 1` polynomiality alone suffices.
pub fn selmer_fast_path(spec: &QuotientSpec) -> Result<Option<Certificate>, CertifyError> {
    let (a, b) = (spec.numerator(), spec.denominator());
    if a.len() != b.len() {
        return Err(CertifyError::SizeMismatch {
            numerator: a.len(),
            denominator: b.len(),
        });
    }
    if a.is_empty() {
        return Ok(None);
    }
    if polynomiality_delta(spec)
        .expect("balanced spec")
        .is_none()
    {
        return Ok(None);
    }
    let a1 = a[0];
    if b.len() == 1 {
        return Ok(Some(Certificate::SelmerFastPath { bound: None, a1 }));
    }
    let bound = fast_path_bound(b);
    Ok((bound < a1 as i128).then_some(Certificate::SelmerFastPath {
        bound: Some(bound as i64),
        a1,
    }))
}

/// The least `k <= k_max` such that `(1 + q)^k · p` has no negative
/// coefficient.
pub fn polya_multiplier(p: &IntPoly, k_max: u32) -> Option<u32> {
    if p.is_zero() {
        return Some(0);
    }
    // The lowest and highest nonzero coefficients survive every multiplication.
    let low = &p.coeffs()[p.valuation()];
    if low.is_negative() || p.leading_coeff().is_some_and(Signed::is_negative) {
        return None;
    }
    let mut current = p.clone();
    for k in 0..=k_max {
        if current.coeffs().iter().all(|c| *c >= BigInt::zero()) {
            return Some(k);
        }
        if k < k_max {
            current = current.mul_one_plus_q();
        }
    }
    None
}
