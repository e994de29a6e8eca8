//! Cyclotomic generating functions: quotients `∏(1 − q^a) / ∏(1 − q^b)`,
//! their polynomiality, and certificates for non-negativity of coefficients.

pub mod certify;
pub mod conjectures;
pub mod cyclotomic;
pub mod error;
pub mod polyq;
pub mod semigroup;
pub mod serde_bigint;

pub use certify::{certify_nonnegativity, Certificate, CertificateReport, CertifyConfig, Verdict};
pub use cyclotomic::{cyclotomic_poly, polynomiality_delta, DivisorMultiset};
pub use error::*;
pub use polyq::{expand_quotient, IntPoly, QuotientSpec};
pub use semigroup::{frobenius_number, GeneratorSet};
