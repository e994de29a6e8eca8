use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::certify::criteria::fast_path_bound;
use crate::certify::hsop::{scan_value_subsets, value_counts, SubsetScan};
use crate::certify::lattice::OmegaBlock;
use crate::certify::Certificate;
use crate::cyclotomic::{is_prime, omega, polynomiality_delta, DivisorMultiset};
use crate::error::CapExceeded;
use crate::polyq::{expand_quotient, IntPoly, QuotientSpec};
use crate::semigroup::{count_representable, GeneratorSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("certificate rejected: {0}")]
    Rejected(String),
    #[error(transparent)]
    Cap(#[from] CapExceeded),
}

fn reject<T>(msg: impl Into<String>) -> Result<T, VerifyError> {
    Err(VerifyError::Rejected(msg.into()))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), VerifyError> {
    if cond {
        Ok(())
    } else {
        reject(msg)
    }
}

fn require_delta(spec: &QuotientSpec) -> Result<DivisorMultiset, VerifyError> {
    match polynomiality_delta(spec) {
        Ok(Some(delta)) => Ok(delta),
        _ => reject("quotient is not a polynomial"),
    }
}

fn require_balanced(spec: &QuotientSpec) -> Result<(), VerifyError> {
    ensure(spec.is_balanced(), "numerator and denominator sizes differ")
}

fn require_expansion(spec: &QuotientSpec, degree_cap: u64) -> Result<IntPoly, VerifyError> {
    match expand_quotient(spec, degree_cap)? {
        Some(p) => Ok(p),
        None => reject("quotient is not a polynomial"),
    }
}

fn check_partition(delta: &DivisorMultiset, elements: Vec<u64>) -> Result<(), VerifyError> {
    ensure(
        DivisorMultiset::from_entries(elements) == *delta,
        "blocks do not partition Δ",
    )
}

fn check_omega_blocks(delta: &DivisorMultiset, blocks: &[OmegaBlock], threshold: usize, singletons: bool) -> Result<(), VerifyError> {
    for block in blocks {
        match block {
            OmegaBlock::Set { elements } => {
                ensure(!elements.is_empty(), "empty block")?;
                ensure(!singletons || elements.len() == 1, "flatness blocks of type a must be single indices")?;
                let mut sorted = elements.clone();
                sorted.sort_unstable();
                sorted.dedup();
                ensure(sorted.len() == elements.len(), "set block repeats an index")?;
                for &d in elements {
                    ensure(d >= 1 && omega(d) <= threshold, format!("ω({d}) exceeds {threshold}"))?;
                    ensure(singletons || d != 1, "Φ_1 in a non-negativity block")?;
                }
            }
            OmegaBlock::Cover { lower, upper } => {
                ensure(*lower >= 1 && upper % lower == 0, "cover pair is not a division")?;
                let p = upper / lower;
                ensure(is_prime(p) && lower % p != 0, format!("{lower} ≺ {upper} is not a coprime covering"))?;
                ensure(omega(*lower) <= threshold, format!("ω({lower}) exceeds {threshold}"))?;
                ensure(singletons || *lower != 1, "Φ_1 in a non-negativity block")?;
            }
        }
    }
    check_partition(delta, blocks.iter().flat_map(OmegaBlock::elements).collect())
}

/// Re-checks `cert` against `spec` from its witness data.
///
/// Oracle and Pólya certificates re-expand the quotient; `degree_cap` bounds
/// that expansion.
pub fn verify_certificate(spec: &QuotientSpec, cert: &Certificate, degree_cap: u64) -> Result<(), VerifyError> {
    let (a, b) = (spec.numerator(), spec.denominator());
    match cert {
        Certificate::NotPolynomial => ensure(
            a.len() < b.len() || matches!(polynomiality_delta(spec), Ok(None)),
            "quotient is a polynomial",
        ),
        Certificate::HsopHolds { subsets_checked } => {
            require_balanced(spec)?;
            ensure(
                *subsets_checked == 1u64 << value_counts(b).len(),
                "subset count does not match the denominator's distinct values",
            )?;
            ensure(
                matches!(scan_value_subsets(a, b, |n| n), SubsetScan::Holds { .. }),
                "some value subset violates the inequality",
            )
        }
        Certificate::HsopFails {
            witness,
            index_count,
            representable,
            deficit,
        } => {
            require_balanced(spec)?;
            ensure(!witness.is_empty(), "empty witness")?;
            ensure(witness.iter().all(|t| b.contains(t)), "witness is not a subset of B")?;
            let actual_index = b.iter().filter(|x| witness.contains(x)).count();
            let semigroup = GeneratorSet::new(witness).map_err(|e| VerifyError::Rejected(e.to_string()))?;
            let actual_rep = count_representable(a, &semigroup);
            ensure(
                actual_index == *index_count && actual_rep == *representable,
                "witness counts do not match",
            )?;
            ensure(
                actual_rep < actual_index && *deficit == actual_index - actual_rep,
                "witness does not violate the inequality",
            )
        }
        Certificate::SelmerFastPath { bound, a1 } => {
            require_balanced(spec)?;
            require_delta(spec)?;
            ensure(!a.is_empty() && a[0] == *a1, "a1 is not the least numerator exponent")?;
            if b.len() == 1 {
                ensure(bound.is_none(), "single factor carries no bound")
            } else {
                let expected = fast_path_bound(b);
                ensure(*bound == Some(expected as i64), "bound does not match the formula")?;
                ensure(expected < *a1 as i128, "bound is not below a1")
            }
        }
        Certificate::LatticePkJoin { blocks } => {
            require_balanced(spec)?;
            let delta = require_delta(spec)?;
            for blk in blocks {
                ensure(
                    is_prime(blk.p) && blk.k >= 1 && blk.d >= 1 && blk.d % blk.p != 0,
                    format!("invalid block p={} k={} d={}", blk.p, blk.k, blk.d),
                )?;
            }
            check_partition(&delta, blocks.iter().flat_map(|b| b.elements()).collect())
        }
        Certificate::LatticeOmega { blocks, .. } => {
            require_balanced(spec)?;
            let delta = require_delta(spec)?;
            check_omega_blocks(&delta, blocks, 1, false)
        }
        Certificate::FlatnessLocal { blocks } => {
            let delta = require_delta(spec)?;
            check_omega_blocks(&delta, blocks, 2, true)
        }
        Certificate::DivisibilityBijection { pairing } => {
            require_balanced(spec)?;
            ensure(pairing.len() == b.len(), "pairing has the wrong length")?;
            let mut seen = vec![false; a.len()];
            for (j, &i) in pairing.iter().enumerate() {
                ensure(i < a.len() && !seen[i], "pairing is not a bijection")?;
                seen[i] = true;
                ensure(a[i] % b[j] == 0, format!("{} does not divide {}", b[j], a[i]))?;
            }
            Ok(())
        }
        Certificate::OracleNonNegative { min_coefficient } => {
            let poly = require_expansion(spec, degree_cap)?;
            let actual = poly.min_coefficient().map_err(|e| VerifyError::Rejected(e.to_string()))?;
            ensure(actual == *min_coefficient && !actual.is_negative(), "minimum coefficient mismatch")
        }
        Certificate::OracleNegative { exponent, value } => {
            let poly = require_expansion(spec, degree_cap)?;
            ensure(value.is_negative(), "recorded value is not negative")?;
            ensure(
                poly.first_negative() == Some((*exponent, value.clone())),
                "first negative coefficient mismatch",
            )
        }
        Certificate::PolyaMultiplier { k } => {
            let poly = require_expansion(spec, degree_cap)?;
            let mut prev = poly;
            for _ in 1..*k {
                prev = prev.mul_one_plus_q();
            }
            let current = if *k == 0 { prev.clone() } else { prev.mul_one_plus_q() };
            ensure(current.coeffs().iter().all(|c| *c >= Zero::zero()), "product has a negative coefficient")?;
            ensure(*k == 0 || !prev.is_nonnegative(), "a smaller power already suffices")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyq::DEFAULT_DEGREE_CAP;
    use num_bigint::BigInt;

    fn spec(a: &[u64], b: &[u64]) -> QuotientSpec {
        QuotientSpec::new(a.to_vec(), b.to_vec()).unwrap()
    }

    fn check(s: &QuotientSpec, c: Certificate) -> bool {
        verify_certificate(s, &c, DEFAULT_DEGREE_CAP).is_ok()
    }

    #[test]
    fn rejects_forged_certificates() {
        let s = spec(&[2, 3, 3, 8, 12], &[1, 1, 4, 4, 6]);
        assert!(!check(&s, Certificate::HsopHolds { subsets_checked: 8 }));
        assert!(!check(
            &s,
            Certificate::HsopFails { witness: vec![1], index_count: 2, representable: 5, deficit: 0 }
        ));
        assert!(!check(&s, Certificate::DivisibilityBijection { pairing: vec![0, 1, 2, 3, 4] }));
        assert!(!check(&s, Certificate::NotPolynomial));
        assert!(!check(&s, Certificate::OracleNonNegative { min_coefficient: BigInt::from(1) }));
        assert!(check(&s, Certificate::OracleNonNegative { min_coefficient: BigInt::from(0) }));
        assert!(!check(&s, Certificate::SelmerFastPath { bound: Some(23), a1: 2 }));

        let phi105 = spec(&[105, 3, 5, 7], &[35, 21, 15, 1]);
        assert!(!check(&phi105, Certificate::OracleNonNegative { min_coefficient: BigInt::from(1) }));
        assert!(!check(&phi105, Certificate::LatticeOmega {
            mode: crate::certify::LatticeMode::NonnegOmega,
            blocks: vec![OmegaBlock::Set { elements: vec![105] }],
        }));
        assert!(!check(&phi105, Certificate::FlatnessLocal {
            blocks: vec![OmegaBlock::Cover { lower: 35, upper: 105 }],
        }));
    }

    #[test]
    fn accepts_genuine_certificates() {
        let s = spec(&[60, 66, 72], &[10, 11, 12]);
        assert!(check(&s, Certificate::DivisibilityBijection { pairing: vec![0, 1, 2] }));
        let s = spec(&[3, 5], &[1, 1]);
        // Δ = {3, 5}
        assert!(check(&s, Certificate::LatticePkJoin {
            blocks: vec![
                crate::certify::PkJoinBlock { p: 3, k: 1, d: 1 },
                crate::certify::PkJoinBlock { p: 5, k: 1, d: 1 },
            ],
        }));
        let s = spec(&[105, 3, 5, 7], &[35, 21, 15, 1]);
        assert!(check(&s, Certificate::PolyaMultiplier { k: crate::certify::polya_multiplier(
            &crate::cyclotomic::cyclotomic_poly(105), 4096).unwrap() }));
        assert!(!check(&s, Certificate::PolyaMultiplier { k: 0 }));
    }
}
