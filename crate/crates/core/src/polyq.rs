//! Dense integer polynomials and quotients of products of `1 - q^k`.
//!
//! [`IntPoly`] stores every coefficient explicitly, index = exponent, with
//! arbitrary-precision entries. [`QuotientSpec`] names a rational function
//! `∏(1 - q^a) / ∏(1 - q^b)` by its two exponent multisets, and
//! [`expand_quotient`] turns it into a polynomial when the division is exact.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CapExceeded, PolyError, SpecError};

/// Default bound on the degree of an expanded quotient.
pub const DEFAULT_DEGREE_CAP: u64 = 1_000_000;

/// A polynomial in `q` with integer coefficients.
///
/// The highest stored coefficient is never zero; the zero polynomial has no
/// coefficients at all.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_coeffs<T: Into<BigInt>, I: IntoIterator<Item = T>>(coeffs: I) -> Self {
        Self::new(coeffs.into_iter().map(Into::into).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly {
            coeffs: vec![BigInt::one()],
        }
    }

    /// `c · q^k`
    pub fn monomial(c: impl Into<BigInt>, k: usize) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        IntPoly { coeffs }
    }

    /// `1 - q^k`; for `k = 0` this is the zero polynomial.
    pub fn one_minus_q_pow(k: usize) -> Self {
        Self::one().mul_one_minus_q_pow(k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `q^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Largest `k` with `q^k` dividing the polynomial (zero for the zero polynomial).
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divides out `q^k`; the caller guarantees `k <= valuation()`.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.is_zero() || k <= self.valuation());
        IntPoly {
            coeffs: self.coeffs.iter().skip(k).cloned().collect(),
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    /// `p(q^k)` for `k >= 1`.
    pub fn substitute_power(&self, k: usize) -> Self {
        assert!(k >= 1, "substitution exponent must be positive");
        let Some(deg) = self.degree() else {
            return Self::zero();
        };
        let mut coeffs = vec![BigInt::zero(); deg * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        IntPoly { coeffs }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `self · (1 - q^k)` in linear time.
    pub fn mul_one_minus_q_pow(&self, k: usize) -> Self {
        let mut out = self.clone();
        out.mul_one_minus_q_pow_in_place(k);
        out
    }

    fn mul_one_minus_q_pow_in_place(&mut self, k: usize) {
        if k == 0 {
            self.coeffs.clear();
            return;
        }
        if self.is_zero() {
            return;
        }
        let len = self.coeffs.len();
        self.coeffs.resize(len + k, BigInt::zero());
        for i in (k..len + k).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(i);
            hi[0] -= &lo[i - k];
        }
        self.normalize();
    }

    /// `self / (1 - q^k)` when the division is exact, computed as a running
    /// prefix sum with stride `k`.
    pub fn div_one_minus_q_pow(&self, k: usize) -> Option<Self> {
        let mut out = self.clone();
        out.div_one_minus_q_pow_in_place(k).then_some(out)
    }

    fn div_one_minus_q_pow_in_place(&mut self, k: usize) -> bool {
        assert!(k >= 1, "cannot divide by 1 - q^0 = 0");
        let len = self.coeffs.len();
        if len == 0 {
            return true;
        }
        if len <= k {
            return false;
        }
        for i in k..len {
            let (lo, hi) = self.coeffs.split_at_mut(i);
            hi[0] += &lo[i - k];
        }
        // The top k running sums are the remainder.
        if self.coeffs[len - k..].iter().any(|c| !c.is_zero()) {
            return false;
        }
        self.coeffs.truncate(len - k);
        self.normalize();
        true
    }

    /// `self · (1 + q)`.
    pub fn mul_one_plus_q(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(self.coeffs[0].clone());
        for w in self.coeffs.windows(2) {
            coeffs.push(&w[0] + &w[1]);
        }
        coeffs.push(self.coeffs[self.coeffs.len() - 1].clone());
        IntPoly::new(coeffs)
    }

    /// Exact quotient `self / den` in `ℤ[q]`, or `None` when `den` does not
    /// divide `self` there.
    pub fn div_exact(&self, den: &IntPoly) -> Result<Option<IntPoly>, PolyError> {
        let Some(den_deg) = den.degree() else {
            return Err(PolyError::ZeroDivisor);
        };
        let Some(num_deg) = self.degree() else {
            return Ok(Some(Self::zero()));
        };
        if num_deg < den_deg {
            return Ok(None);
        }
        let lead = &den.coeffs[den_deg];
        let unit = lead.is_one() || (-lead).is_one();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); num_deg - den_deg + 1];
        for i in (0..quot.len()).rev() {
            let top = &rem[i + den_deg];
            if top.is_zero() {
                continue;
            }
            let c = if unit {
                top * lead
            } else {
                let (c, r) = top.div_rem(lead);
                if !r.is_zero() {
                    return Ok(None);
                }
                c
            };
            for (j, d) in den.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    rem[i + j] -= &c * d;
                }
            }
            quot[i] = c;
        }
        if rem[..den_deg].iter().any(|c| !c.is_zero()) {
            return Ok(None);
        }
        Ok(Some(IntPoly::new(quot)))
    }

    /// Smallest coefficient over exponents `0..=deg`.
    pub fn min_coefficient(&self) -> Result<BigInt, PolyError> {
        self.coeffs
            .iter()
            .min()
            .cloned()
            .ok_or(PolyError::ZeroPolynomial)
    }

    /// Height of the polynomial: the largest absolute coefficient.
    pub fn max_abs_coeff(&self) -> Result<BigInt, PolyError> {
        self.coeffs
            .iter()
            .map(Signed::abs)
            .max()
            .ok_or(PolyError::ZeroPolynomial)
    }

    /// All coefficients lie in `{-1, 0, 1}`.
    pub fn is_flat(&self) -> Result<bool, PolyError> {
        Ok(self.max_abs_coeff()? <= BigInt::one())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Lowest exponent carrying a negative coefficient, with that coefficient.
    pub fn first_negative(&self) -> Option<(usize, BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .find(|(_, c)| c.is_negative())
            .map(|(k, c)| (k, c.clone()))
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }
}

/// Exact convolution product.
pub fn poly_mul(p: &IntPoly, r: &IntPoly) -> IntPoly {
    if p.is_zero() || r.is_zero() {
        return IntPoly::zero();
    }
    let mut out = vec![BigInt::zero(); p.coeffs.len() + r.coeffs.len() - 1];
    for (i, a) in p.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in r.coeffs.iter().enumerate() {
            if !b.is_zero() {
                out[i + j] += a * b;
            }
        }
    }
    IntPoly::new(out)
}

impl Mul for &IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &IntPoly) -> IntPoly {
        poly_mul(self, rhs)
    }
}

impl Mul for IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: IntPoly) -> IntPoly {
        poly_mul(&self, &rhs)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                _ => write!(f, "{mag}")?,
            }
            match k {
                0 => {}
                1 => f.write_str("q")?,
                _ => write!(f, "q^{k}")?,
            }
        }
        Ok(())
    }
}

/// The rational function `∏(1 - q^a) / ∏(1 - q^b)` given by its exponent
/// multisets. Both multisets are kept sorted ascending with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawQuotientSpec", into = "RawQuotientSpec")]
pub struct QuotientSpec {
    numerator: Vec<u64>,
    denominator: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuotientSpec {
    a: Vec<u64>,
    b: Vec<u64>,
}

impl TryFrom<RawQuotientSpec> for QuotientSpec {
    type Error = SpecError;

    fn try_from(raw: RawQuotientSpec) -> Result<Self, SpecError> {
        QuotientSpec::new(raw.a, raw.b)
    }
}

impl From<QuotientSpec> for RawQuotientSpec {
    fn from(spec: QuotientSpec) -> Self {
        RawQuotientSpec {
            a: spec.numerator,
            b: spec.denominator,
        }
    }
}

impl QuotientSpec {
    pub fn new(mut numerator: Vec<u64>, mut denominator: Vec<u64>) -> Result<Self, SpecError> {
        if numerator.contains(&0) || denominator.contains(&0) {
            return Err(SpecError::ZeroExponent);
        }
        numerator.sort_unstable();
        denominator.sort_unstable();
        Ok(QuotientSpec {
            numerator,
            denominator,
        })
    }

    /// The empty quotient, equal to 1.
    pub fn empty() -> Self {
        Self::default()
    }

    /// The multiset `A` of numerator exponents.
    pub fn numerator(&self) -> &[u64] {
        &self.numerator
    }

    /// The multiset `B` of denominator exponents.
    pub fn denominator(&self) -> &[u64] {
        &self.denominator
    }

    pub fn is_balanced(&self) -> bool {
        self.numerator.len() == self.denominator.len()
    }

    /// `ΣA − ΣB`, the degree of the quotient when it is a polynomial.
    pub fn expected_degree(&self) -> i128 {
        let sum = |v: &[u64]| v.iter().map(|&x| x as i128).sum::<i128>();
        sum(&self.numerator) - sum(&self.denominator)
    }

    /// Removes exponents common to both sides; the rational function is unchanged.
    pub fn cancel_common(&self) -> QuotientSpec {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.numerator, &self.denominator);
        let mut num = Vec::with_capacity(a.len());
        let mut den = Vec::with_capacity(b.len());
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    num.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    den.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        num.extend_from_slice(&a[i..]);
        den.extend_from_slice(&b[j..]);
        QuotientSpec {
            numerator: num,
            denominator: den,
        }
    }
}

impl fmt::Display for QuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| {
            v.iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{}/{}", join(&self.numerator), join(&self.denominator))
    }
}

/// Expands `∏(1 - q^a) / ∏(1 - q^b)`.
///
/// Returns `Ok(None)` when the quotient is not a polynomial. Fails with
/// [`CapExceeded`] before doing any work when `ΣA − ΣB` is above `degree_cap`.
pub fn expand_quotient(spec: &QuotientSpec, degree_cap: u64) -> Result<Option<IntPoly>, CapExceeded> {
    let expected = spec.expected_degree();
    if expected > degree_cap as i128 {
        return Err(CapExceeded {
            degree: expected,
            cap: degree_cap,
        });
    }
    if expected < 0 {
        return Ok(None);
    }
    let reduced = spec.cancel_common();
    let mut poly = IntPoly::one();
    for &a in reduced.numerator() {
        poly.mul_one_minus_q_pow_in_place(a as usize);
    }
    // Every partial quotient of a polynomial quotient is itself a polynomial,
    // so the first inexact step proves non-polynomiality.
    for &b in reduced.denominator().iter().rev() {
        if !poly.div_one_minus_q_pow_in_place(b as usize) {
            return Ok(None);
        }
    }
    Ok(Some(poly))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_coeffs(c.iter().copied())
    }

    fn spec(a: &[u64], b: &[u64]) -> QuotientSpec {
        QuotientSpec::new(a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn mul_examples() {
        assert_eq!(poly_mul(&p(&[1, 1]), &p(&[1, -1])), p(&[1, 0, -1]));
        assert_eq!(poly_mul(&p(&[1, -1, 1]), &p(&[1, 1])), p(&[1, 0, 0, 1]));
        let x = p(&[3, 0, -2, 7]);
        assert_eq!(poly_mul(&x, &IntPoly::one()), x);
        assert!(poly_mul(&x, &IntPoly::zero()).is_zero());
    }

    #[test]
    fn divexact_examples() {
        let q6 = IntPoly::one_minus_q_pow(6);
        let q2 = IntPoly::one_minus_q_pow(2);
        let q3 = IntPoly::one_minus_q_pow(3);
        assert_eq!(q6.div_exact(&q2).unwrap(), Some(p(&[1, 0, 1, 0, 1])));
        assert_eq!(q3.div_exact(&q2).unwrap(), None);
        assert_eq!(q6.div_exact(&q6).unwrap(), Some(IntPoly::one()));
        assert_eq!(q6.div_exact(&IntPoly::zero()), Err(PolyError::ZeroDivisor));
        // 2q + 2 over 2: non-unit leading coefficient
        assert_eq!(p(&[2, 2]).div_exact(&p(&[2])).unwrap(), Some(p(&[1, 1])));
        assert_eq!(p(&[1, 2]).div_exact(&p(&[2])).unwrap(), None);
    }

    #[test]
    fn expand_examples() {
        assert_eq!(
            expand_quotient(&spec(&[3, 4], &[1, 2]), DEFAULT_DEGREE_CAP).unwrap(),
            Some(p(&[1, 1, 2, 1, 1]))
        );
        assert_eq!(
            expand_quotient(&spec(&[2], &[2]), DEFAULT_DEGREE_CAP).unwrap(),
            Some(IntPoly::one())
        );
        let neg = expand_quotient(&spec(&[3, 5, 14], &[2, 3, 7]), DEFAULT_DEGREE_CAP)
            .unwrap()
            .unwrap();
        assert!(neg.min_coefficient().unwrap() < BigInt::zero());
        assert_eq!(
            expand_quotient(&spec(&[3], &[2]), DEFAULT_DEGREE_CAP).unwrap(),
            None
        );
        assert_eq!(
            expand_quotient(&spec(&[2], &[1, 1]), DEFAULT_DEGREE_CAP).unwrap(),
            None
        );
        assert_eq!(
            expand_quotient(&QuotientSpec::empty(), 0).unwrap(),
            Some(IntPoly::one())
        );
    }

    #[test]
    fn expand_respects_cap() {
        let err = expand_quotient(&spec(&[10, 20], &[5]), 24).unwrap_err();
        assert_eq!(err.degree, 25);
        assert!(expand_quotient(&spec(&[10, 20], &[5]), 25).is_ok());
    }

    #[test]
    fn coefficient_queries() {
        assert_eq!(p(&[5]).min_coefficient().unwrap(), BigInt::from(5));
        assert_eq!(p(&[1, 1, 0, -1, -1]).min_coefficient().unwrap(), BigInt::from(-1));
        assert!(p(&[1, -1, 1]).is_flat().unwrap());
        assert_eq!(p(&[1, -1, 1]).max_abs_coeff().unwrap(), BigInt::from(1));
        let qb = p(&[1, 1, 2, 1, 1]);
        assert!(!qb.is_flat().unwrap());
        assert_eq!(qb.max_abs_coeff().unwrap(), BigInt::from(2));
        assert_eq!(IntPoly::zero().min_coefficient(), Err(PolyError::ZeroPolynomial));
        assert_eq!(IntPoly::zero().is_flat(), Err(PolyError::ZeroPolynomial));
        assert_eq!(p(&[1, 0, -3, -1]).first_negative(), Some((2, BigInt::from(-3))));
    }

    #[test]
    fn display_and_helpers() {
        assert_eq!(p(&[1, -1, 0, 2]).to_string(), "1 - q + 2q^3");
        assert_eq!(p(&[0, -1]).to_string(), "-q");
        assert_eq!(IntPoly::zero().to_string(), "0");
        assert_eq!(p(&[1, 2]).substitute_power(3), p(&[1, 0, 0, 2]));
        assert_eq!(p(&[1, -1, 1]).mul_one_plus_q(), p(&[1, 0, 0, 1]));
        assert_eq!(p(&[0, 0, 1, 2]).valuation(), 2);
        assert_eq!(p(&[1, 2]).eval(&BigInt::from(3)), BigInt::from(7));
        assert_eq!(spec(&[4, 3], &[2, 1]).to_string(), "3,4/1,2");
        assert_eq!(spec(&[1, 2, 2, 5], &[2, 5, 7]).cancel_common(), spec(&[1, 2], &[7]));
    }

    #[test]
    fn spec_rejects_zero() {
        assert_eq!(QuotientSpec::new(vec![0, 2], vec![1]), Err(SpecError::ZeroExponent));
    }

    fn small_poly() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-9i64..=9, 0..8).prop_map(|c| p(&c))
    }

    fn small_multiset() -> impl Strategy<Value = Vec<u64>> {
        prop::collection::vec(1u64..=12, 0..4)
    }

    proptest! {
        #[test]
        fn ring_laws(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn divexact_inverts_mul(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            let prod = &a * &b;
            prop_assert_eq!(prod.div_exact(&b).unwrap(), Some(a));
        }

        #[test]
        fn expand_agrees_with_two_step(a in small_multiset(), b in small_multiset()) {
            let s = QuotientSpec::new(a.clone(), b.clone()).unwrap();
            let num = a.iter().fold(IntPoly::one(), |acc, &x| &acc * &IntPoly::one_minus_q_pow(x as usize));
            let den = b.iter().fold(IntPoly::one(), |acc, &x| &acc * &IntPoly::one_minus_q_pow(x as usize));
            let two_step = num.div_exact(&den).unwrap();
            prop_assert_eq!(expand_quotient(&s, DEFAULT_DEGREE_CAP).unwrap(), two_step);
        }

        #[test]
        fn expand_of_equal_sides_is_one(a in small_multiset()) {
            let s = QuotientSpec::new(a.clone(), a).unwrap();
            prop_assert_eq!(expand_quotient(&s, DEFAULT_DEGREE_CAP).unwrap(), Some(IntPoly::one()));
        }
    }
}
