//! Cyclotomic polynomials, divisor multisets and the polynomiality test.
//!
//! Convention: `Φ_n` is monic, so `Φ_1 = q - 1` and `∏_{d|n} Φ_d = q^n - 1`.
//! Consequently `1 - q^n = -∏_{d|n} Φ_d`, and a polynomial quotient
//! `∏(1 - q^a) / ∏(1 - q^b)` equals `(-1)^(#A-#B) ∏_{d∈Δ} Φ_d`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::CyclotomicError;
use crate::polyq::{IntPoly, QuotientSpec};

/// Prime factorization data of a positive integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorProfile {
    pub n: u64,
    /// `P(n)`, ascending.
    pub primes: Vec<u64>,
    /// `ω(n)`
    pub omega: usize,
    pub radical: u64,
}

pub fn factor_profile(n: u64) -> Result<FactorProfile, CyclotomicError> {
    if n == 0 {
        return Err(CyclotomicError::Zero);
    }
    let primes = prime_factors(n);
    Ok(FactorProfile {
        n,
        omega: primes.len(),
        radical: primes.iter().product(),
        primes,
    })
}

/// Distinct prime factors by trial division, ascending. Empty for `n <= 1`.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn omega(n: u64) -> usize {
    prime_factors(n).len()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [n]
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

/// Sorted divisors of `n >= 1`.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

type CyclotomicCache = RwLock<HashMap<u64, Arc<IntPoly>>>;

fn cache() -> &'static CyclotomicCache {
    static CACHE: OnceLock<CyclotomicCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The monic cyclotomic polynomial `Φ_n`, memoized process-wide.
///
/// # Panics
///
/// Panics if `n == 0`.
pub fn cyclotomic_poly(n: u64) -> Arc<IntPoly> {
    assert!(n >= 1, "cyclotomic polynomial index must be positive");
    if let Some(hit) = cache().read().unwrap().get(&n) {
        return Arc::clone(hit);
    }
    let poly = Arc::new(compute_cyclotomic(n));
    let mut guard = cache().write().unwrap();
    Arc::clone(guard.entry(n).or_insert(poly))
}

fn compute_cyclotomic(n: u64) -> IntPoly {
    if n == 1 {
        return IntPoly::from_coeffs([-1, 1]);
    }
    let primes = prime_factors(n);
    let radical: u64 = primes.iter().product();
    if radical < n {
        // Φ_n(q) = Φ_rad(n)(q^(n/rad(n)))
        return cyclotomic_poly(radical).substitute_power((n / radical) as usize);
    }
    if primes.len() == 1 {
        return IntPoly::from_coeffs(std::iter::repeat_n(1, n as usize));
    }
    // Squarefree composite: Φ_m(q^p) = Φ_m(q) Φ_mp(q) with p ∤ m.
    let p = *primes.last().unwrap();
    let m = n / p;
    let base = cyclotomic_poly(m);
    base.substitute_power(p as usize)
        .div_exact(&base)
        .expect("cyclotomic polynomials are nonzero")
        .expect("Φ_m(q) divides Φ_m(q^p)")
}

/// `∏_{d ∈ indices} Φ_d`.
pub fn cyclotomic_product<'a, I: IntoIterator<Item = &'a u64>>(indices: I) -> IntPoly {
    indices
        .into_iter()
        .fold(IntPoly::one(), |acc, &d| &acc * &cyclotomic_poly(d))
}

/// A sorted multiset of positive integers, typically a union of divisor sets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorMultiset {
    entries: Vec<u64>,
}

impl DivisorMultiset {
    pub fn from_entries(mut entries: Vec<u64>) -> Self {
        entries.sort_unstable();
        DivisorMultiset { entries }
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn multiplicity(&self, x: u64) -> usize {
        let lo = self.entries.partition_point(|&e| e < x);
        let hi = self.entries.partition_point(|&e| e <= x);
        hi - lo
    }

    /// Multiset inclusion `self ⊆ other`.
    pub fn is_submultiset_of(&self, other: &DivisorMultiset) -> bool {
        let mut it = other.entries.iter();
        'outer: for &x in &self.entries {
            for &y in it.by_ref() {
                if y == x {
                    continue 'outer;
                }
                if y > x {
                    return false;
                }
            }
            return false;
        }
        true
    }

    /// `self ∖ other`, or `None` unless `other ⊆ self`.
    pub fn difference(&self, other: &DivisorMultiset) -> Option<DivisorMultiset> {
        let mut out = Vec::with_capacity(self.entries.len().saturating_sub(other.entries.len()));
        let mut it = self.entries.iter().peekable();
        for &x in &other.entries {
            loop {
                match it.next() {
                    Some(&y) if y < x => out.push(y),
                    Some(&y) if y == x => break,
                    _ => return None,
                }
            }
        }
        out.extend(it);
        Some(DivisorMultiset { entries: out })
    }

    /// Multiset sum.
    pub fn union(&self, other: &DivisorMultiset) -> DivisorMultiset {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        DivisorMultiset::from_entries(entries)
    }
}

/// `⨄_{m ∈ M} D(m)`.
pub fn divisor_multiset(values: &[u64]) -> DivisorMultiset {
    DivisorMultiset::from_entries(values.iter().flat_map(|&m| divisors(m)).collect())
}

/// The multiset `Δ = ⨄D(a) ∖ ⨄D(b)` when `⨄D(b) ⊆ ⨄D(a)`, i.e. exactly when
/// the quotient is a polynomial; `None` otherwise.
pub fn polynomiality_delta(spec: &QuotientSpec) -> Result<Option<DivisorMultiset>, CyclotomicError> {
    let (a, b) = (spec.numerator(), spec.denominator());
    if a.len() < b.len() {
        return Err(CyclotomicError::MoreDenominators {
            numerator: a.len(),
            denominator: b.len(),
        });
    }
    Ok(divisor_multiset(a).difference(&divisor_multiset(b)))
}

/// `(-1)^(#A-#B) ∏_{d∈Δ} Φ_d`, the value of a polynomial quotient.
pub fn delta_product(spec: &QuotientSpec, delta: &DivisorMultiset) -> IntPoly {
    let prod = cyclotomic_product(delta.entries());
    if (spec.numerator().len() - spec.denominator().len()) % 2 == 1 {
        IntPoly::new(prod.into_coeffs().into_iter().map(|c| -c).collect())
    } else {
        prod
    }
}

/// `α q^β ∏ Φ_d` with every `d >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CgfForm {
    #[serde(with = "crate::serde_bigint")]
    pub alpha: BigInt,
    pub beta: usize,
    /// Cyclotomic indices with multiplicity, ascending.
    pub indices: Vec<u64>,
}

impl CgfForm {
    pub fn expand(&self) -> IntPoly {
        let prod = cyclotomic_product(&self.indices);
        IntPoly::new(prod.into_coeffs().into_iter().map(|c| c * &self.alpha).collect())
            .shift_up(self.beta)
    }
}

/// Writes a non-negative polynomial as `α q^β ∏ Φ_d`, or returns `None` when
/// it is not a product of cyclotomic polynomials (not a CGF).
///
/// Trial-divides by `Φ_d` for `d` descending over all `d` with
/// `φ(d) <= deg`; meant for polynomials of modest degree.
pub fn cgf_form(p: &IntPoly) -> Result<Option<CgfForm>, CyclotomicError> {
    if p.is_zero() {
        return Err(CyclotomicError::ZeroPolynomial);
    }
    if !p.is_nonnegative() {
        return Err(CyclotomicError::NegativeCoefficient);
    }
    let beta = p.valuation();
    let mut rest = p.shift_down(beta);
    let mut indices = Vec::new();
    let deg = rest.degree().unwrap_or(0) as u64;
    // n/φ(n) < 6.2 for n below the primorial 6469693230.
    let bound = 7 * deg + 2;
    for d in (2..=bound).rev() {
        if rest.degree().unwrap_or(0) == 0 {
            break;
        }
        let phi = euler_phi(d);
        while phi as usize <= rest.degree().unwrap_or(0) {
            match rest.div_exact(&cyclotomic_poly(d)) {
                Ok(Some(q)) => {
                    rest = q;
                    indices.push(d);
                }
                _ => break,
            }
        }
    }
    if rest.degree() != Some(0) {
        return Ok(None);
    }
    let alpha = rest.coeff(0);
    if !alpha.is_positive() {
        return Ok(None);
    }
    indices.sort_unstable();
    Ok(Some(CgfForm {
        alpha,
        beta,
        indices,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyq::{expand_quotient, DEFAULT_DEGREE_CAP};
    use num_traits::One;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_coeffs(c.iter().copied())
    }

    fn spec(a: &[u64], b: &[u64]) -> QuotientSpec {
        QuotientSpec::new(a.to_vec(), b.to_vec()).unwrap()
    }

    fn dm(v: &[u64]) -> DivisorMultiset {
        DivisorMultiset::from_entries(v.to_vec())
    }

    #[test]
    fn factor_profiles() {
        let f = factor_profile(105).unwrap();
        assert_eq!((f.primes.clone(), f.omega, f.radical), (vec![3, 5, 7], 3, 105));
        let f = factor_profile(12).unwrap();
        assert_eq!((f.primes.clone(), f.omega, f.radical), (vec![2, 3], 2, 6));
        let f = factor_profile(1).unwrap();
        assert_eq!((f.primes.clone(), f.omega, f.radical), (vec![], 0, 1));
        assert_eq!(factor_profile(0), Err(CyclotomicError::Zero));
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(36), 12);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(*cyclotomic_poly(1), p(&[-1, 1]));
        assert_eq!(*cyclotomic_poly(5), p(&[1, 1, 1, 1, 1]));
        assert_eq!(*cyclotomic_poly(6), p(&[1, -1, 1]));
        assert_eq!(*cyclotomic_poly(12), p(&[1, 0, -1, 0, 1]));
        let phi105 = cyclotomic_poly(105);
        assert_eq!(phi105.degree(), Some(48));
        assert_eq!(phi105.min_coefficient().unwrap(), BigInt::from(-2));
        assert!(cyclotomic_poly(15).is_flat().unwrap());
    }

    #[test]
    fn divisor_products_give_q_pow_minus_one() {
        for n in 1..=300u64 {
            let prod = cyclotomic_product(&divisors(n));
            let mut expect = IntPoly::monomial(1, n as usize).into_coeffs();
            expect[0] = BigInt::from(-1);
            assert_eq!(prod, IntPoly::new(expect), "n = {n}");
        }
    }

    #[test]
    fn flat_with_two_odd_primes() {
        for n in 1..=300u64 {
            let odd = prime_factors(n).iter().filter(|&&p| p != 2).count();
            if odd <= 2 {
                assert!(cyclotomic_poly(n).is_flat().unwrap(), "Φ_{n} not flat");
            }
        }
    }

    #[test]
    fn divisor_multisets() {
        assert_eq!(divisor_multiset(&[2, 3]), dm(&[1, 1, 2, 3]));
        assert_eq!(divisor_multiset(&[6]), dm(&[1, 2, 3, 6]));
        assert_eq!(divisor_multiset(&[4, 4]), dm(&[1, 1, 2, 2, 4, 4]));
        assert_eq!(dm(&[1, 1, 2, 3, 6]).difference(&dm(&[1, 2, 3])), Some(dm(&[1, 6])));
        assert_eq!(dm(&[1, 2]).difference(&dm(&[1, 1])), None);
        assert!(dm(&[2, 2]).is_submultiset_of(&dm(&[1, 2, 2, 3])));
        assert!(!dm(&[2, 2, 2]).is_submultiset_of(&dm(&[1, 2, 2, 3])));
        assert!(!dm(&[4]).is_submultiset_of(&dm(&[1, 2, 3])));
        assert!(dm(&[]).is_submultiset_of(&dm(&[])));
        assert_eq!(dm(&[1, 2, 2, 3]).multiplicity(2), 2);
    }

    #[test]
    fn delta_examples() {
        assert_eq!(
            polynomiality_delta(&spec(&[105, 3, 5, 7], &[35, 21, 15, 1])).unwrap(),
            Some(dm(&[105]))
        );
        assert_eq!(polynomiality_delta(&spec(&[4, 5], &[2, 3])).unwrap(), None);
        assert_eq!(polynomiality_delta(&spec(&[6, 1], &[2, 3])).unwrap(), Some(dm(&[6])));
        assert!(matches!(
            polynomiality_delta(&spec(&[6], &[2, 3])),
            Err(CyclotomicError::MoreDenominators { .. })
        ));
    }

    #[test]
    fn delta_product_sign() {
        // (1 - q^2) = -(q - 1)(q + 1)
        let s = spec(&[2], &[]);
        let delta = polynomiality_delta(&s).unwrap().unwrap();
        assert_eq!(delta_product(&s, &delta), p(&[1, 0, -1]));
    }

    #[test]
    fn cgf_forms() {
        let f = cgf_form(&p(&[1, 1, 2, 1, 1])).unwrap().unwrap();
        assert_eq!((f.alpha.clone(), f.beta, f.indices.clone()), (BigInt::one(), 0, vec![3, 4]));
        let f = cgf_form(&p(&[0, 2])).unwrap().unwrap();
        assert_eq!((f.alpha.clone(), f.beta, f.indices.clone()), (BigInt::from(2), 1, vec![]));
        assert_eq!(cgf_form(&p(&[1, 1, 0, 1])).unwrap(), None);
        assert_eq!(cgf_form(&p(&[1, -1])), Err(CyclotomicError::NegativeCoefficient));
        assert_eq!(cgf_form(&IntPoly::zero()), Err(CyclotomicError::ZeroPolynomial));

        let qbin = expand_quotient(&spec(&[7, 8, 9], &[1, 2, 3]), DEFAULT_DEGREE_CAP)
            .unwrap()
            .unwrap();
        let f = cgf_form(&qbin).unwrap().unwrap();
        assert_eq!(f.expand(), qbin);
        assert_eq!(f.indices, vec![4, 7, 8, 9]);
    }

    proptest! {
        #[test]
        fn inclusion_agrees_with_difference(x in prop::collection::vec(1u64..8, 0..8), y in prop::collection::vec(1u64..8, 0..8)) {
            let (x, y) = (dm(&x), dm(&y));
            prop_assert_eq!(x.is_submultiset_of(&y), y.difference(&x).is_some());
        }

        #[test]
        fn phi_n_times_phi_np_is_phi_n_of_q_pow_p(n in 1u64..60, pi in 0usize..6) {
            let p = [2u64, 3, 5, 7, 11, 13][pi];
            if n % p == 0 {
                prop_assert_eq!(
                    (*cyclotomic_poly(n * p)).clone(),
                    cyclotomic_poly(n).substitute_power(p as usize)
                );
            } else {
                prop_assert_eq!(
                    &*cyclotomic_poly(n) * &*cyclotomic_poly(n * p),
                    cyclotomic_poly(n).substitute_power(p as usize)
                );
            }
        }

        #[test]
        fn delta_matches_division(
            a in prop::collection::vec(1u64..=30, 0..=4),
            seed in prop::collection::vec(1u64..=30, 4),
        ) {
            let b = seed[..a.len()].to_vec();
            let s = QuotientSpec::new(a, b).unwrap();
            let delta = polynomiality_delta(&s).unwrap();
            let expanded = expand_quotient(&s, DEFAULT_DEGREE_CAP).unwrap();
            prop_assert_eq!(delta.is_some(), expanded.is_some());
            if let (Some(delta), Some(expanded)) = (delta, expanded) {
                prop_assert_eq!(cyclotomic_product(delta.entries()), expanded);
            }
        }
    }
}
