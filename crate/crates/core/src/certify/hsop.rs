//! The HSOP-monoid membership test and its sub-critical variant.
//!
//! Both ask, for every index set `I`, whether enough numerator degrees lie in
//! the semigroup generated by the denominator degrees indexed by `I`. The
//! semigroup only depends on `T = toset(B_I)`, and the largest `I` with that
//! value set is `I_T = {i : b_i ∈ T}`. The required count is monotone in `#I`,
//! so checking `I_T` for each of the `2^#toset(B)` value sets suffices.

use crate::certify::Certificate;
use crate::error::{CertifyError, HypothesisViolation};
use crate::semigroup::{count_representable, GeneratorSet};
use num_integer::Integer;

/// Result of scanning all value subsets against a required count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum SubsetScan {
    Holds {
        subsets_checked: u64,
    },
    Fails {
        witness: Vec<u64>,
        index_count: usize,
        representable: usize,
    },
}

/// Distinct values of a sorted multiset with their multiplicities.
pub(crate) fn value_counts(sorted: &[u64]) -> Vec<(u64, usize)> {
    let mut out: Vec<(u64, usize)> = Vec::new();
    for &x in sorted {
        match out.last_mut() {
            Some((v, c)) if *v == x => *c += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

/// Checks `#(A ∩̄ ⟨T⟩) >= required(#I_T)` for every non-empty value set `T`
/// of `b`, in increasing bitmask order. Stops at the first violation.
pub(crate) fn scan_value_subsets(
    a: &[u64],
    b: &[u64],
    required: impl Fn(usize) -> usize,
) -> SubsetScan {
    let values = value_counts(b);
    let k = values.len();
    assert!(k < 64, "too many distinct denominator values for subset enumeration");
    // divides[i]: bitmask of the values t with t | a_i, each of which puts a_i in ⟨T⟩.
    let divides: Vec<u64> = a
        .iter()
        .map(|&x| {
            values
                .iter()
                .enumerate()
                .filter(|(_, (t, _))| x % t == 0)
                .fold(0u64, |m, (i, _)| m | (1 << i))
        })
        .collect();
    let total = 1u64 << k;
    for mask in 1..total {
        let index_count: usize = (0..k)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| values[i].1)
            .sum();
        let need = required(index_count);
        let cheap = divides.iter().filter(|&&d| d & mask != 0).count();
        if cheap >= need {
            continue;
        }
        let witness: Vec<u64> = (0..k)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| values[i].0)
            .collect();
        let representable = if need > a.len() {
            cheap
        } else {
            let semigroup = GeneratorSet::new(&witness).expect("positive generators");
            count_representable(a, &semigroup)
        };
        if representable < need {
            return SubsetScan::Fails {
                witness,
                index_count,
                representable,
            };
        }
    }
    SubsetScan::Holds {
        subsets_checked: total,
    }
}

/// Decides whether a regular sequence of degrees `A` exists in a polynomial
/// ring with variable degrees `B` (`#A = #B`), i.e. whether the quotient lies
/// in the HSOP monoid.
///
/// On failure the witness is the value set `T` with its maximal index set;
/// `deficit = #I_T − #(A ∩̄ ⟨T⟩)`.
pub fn hsop_test(a: &[u64], b: &[u64]) -> Result<Certificate, CertifyError> {
    if a.len() != b.len() {
        return Err(CertifyError::SizeMismatch {
            numerator: a.len(),
            denominator: b.len(),
        });
    }
    let mut b = b.to_vec();
    b.sort_unstable();
    Ok(match scan_value_subsets(a, &b, |n| n) {
        SubsetScan::Holds { subsets_checked } => Certificate::HsopHolds { subsets_checked },
        SubsetScan::Fails {
            witness,
            index_count,
            representable,
        } => Certificate::HsopFails {
            witness,
            index_count,
            representable,
            deficit: index_count - representable,
        },
    })
}

/// For `#A = m < n = #B`: whether `#(A ∩̄ ⟨toset(B_I)⟩) >= min(m, #I)` for
/// every index set `I`. True implies a weighted complete intersection of
/// degrees `A` exists; false proves nothing.
///
/// The two hypotheses (no `a_i` equal to a `b_j`; every `(n−1)`-subset of `B`
/// coprime) are checked first and reported as errors.
pub fn hall_condition_subcritical(a: &[u64], b: &[u64]) -> Result<bool, CertifyError> {
    let (m, n) = (a.len(), b.len());
    if m >= n {
        return Err(CertifyError::NotSubcritical {
            numerator: m,
            denominator: n,
        });
    }
    if let Some(&x) = a.iter().find(|x| b.contains(x)) {
        return Err(CertifyError::Hypothesis(HypothesisViolation::LinearCone(x)));
    }
    for skip in 0..n {
        let gcd = b
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != skip)
            .fold(0u64, |g, (_, &x)| g.gcd(&x));
        if gcd != 1 {
            return Err(CertifyError::Hypothesis(HypothesisViolation::NotWellFormed {
                index: skip,
                gcd,
            }));
        }
    }
    let mut b = b.to_vec();
    b.sort_unstable();
    Ok(matches!(
        scan_value_subsets(a, &b, |i| i.min(m)),
        SubsetScan::Holds { .. }
    ))
}
