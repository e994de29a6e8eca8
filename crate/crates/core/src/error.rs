use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("exponents must be positive integers")]
    ZeroExponent,
}

/// The quotient would have degree `degree`, above the configured cap.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("expected degree {degree} exceeds the degree cap {cap}")]
pub struct CapExceeded {
    pub degree: i128,
    pub cap: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclotomicError {
    #[error("n must be at least 1")]
    Zero,
    #[error("numerator has {numerator} factors but denominator has {denominator}")]
    MoreDenominators { numerator: usize, denominator: usize },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("input has a negative coefficient")]
    NegativeCoefficient,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("generator set is empty")]
    Empty,
    #[error("generators must be positive")]
    ZeroGenerator,
    #[error("generators have gcd {0}, expected 1")]
    GcdNotOne(u64),
    #[error("at least two generators are required, got {0}")]
    TooFewGenerators(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("multisets must have equal size, got {numerator} and {denominator}")]
    SizeMismatch { numerator: usize, denominator: usize },
    #[error("expected fewer numerator than denominator exponents, got {numerator} and {denominator}")]
    NotSubcritical { numerator: usize, denominator: usize },
    #[error("hypothesis violated: {0}")]
    Hypothesis(HypothesisViolation),
    #[error(transparent)]
    Cap(#[from] CapExceeded),
}

/// Which precondition of the sub-critical Hall-type check failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypothesisViolation {
    #[error("exponent {0} occurs in both multisets (linear cone)")]
    LinearCone(u64),
    #[error("denominator without index {index} has gcd {gcd} (not well-formed)")]
    NotWellFormed { index: usize, gcd: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConjectureError {
    #[error("parameters must satisfy 0 <= l <= k <= n, got n={n} k={k} l={l}")]
    InvalidGk { n: u64, k: u64, l: u64 },
}
