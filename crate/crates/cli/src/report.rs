//! The structured document printed by `cgf check`.

use cgf_core::certify::{
    verify_certificate, Certificate, CertificateKind, CertificateReport, SkippedStage, Stage, Verdict, VerifyError,
};
use cgf_core::cyclotomic::{polynomiality_delta, DivisorMultiset};
use cgf_core::polyq::{expand_quotient, QuotientSpec};
use cgf_core::CapExceeded;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coefficients(#[serde(with = "cgf_core::serde_bigint::vec")] pub Vec<BigInt>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageTiming {
    pub stage: Stage,
    pub micros: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub spec: QuotientSpec,
    pub polynomial: bool,
    pub nonnegative: Verdict,
    pub delta: Option<DivisorMultiset>,
    pub certificates: Vec<Certificate>,
    pub skipped: Vec<SkippedStage>,
    /// Coefficients of the expansion, constant term first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Coefficients>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<StageTiming>>,
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("unsupported schema version {0}")]
    Schema(u32),
    #[error("recorded {field} does not match recomputation")]
    Mismatch { field: &'static str },
    #[error("certificate {index}: {source}")]
    Certificate { index: usize, source: VerifyError },
    #[error(transparent)]
    Cap(#[from] CapExceeded),
}

impl ReportDocument {
    pub fn from_report(report: &CertificateReport, coefficients: bool, timings: bool) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            spec: report.spec.clone(),
            polynomial: report.polynomial,
            nonnegative: report.nonnegative,
            delta: report.delta.clone(),
            certificates: report.certificates.clone(),
            skipped: report.skipped.clone(),
            coefficients: coefficients
                .then(|| report.expansion.as_ref().map(|p| Coefficients(p.coeffs().to_vec())))
                .flatten(),
            timings: timings.then(|| {
                report
                    .timings
                    .iter()
                    .map(|(stage, d)| StageTiming {
                        stage: *stage,
                        micros: d.as_micros() as u64,
                    })
                    .collect()
            }),
        }
    }

    /// Recomputes Δ, re-checks every certificate, and checks that the verdict
    /// follows from the certificates.
    pub fn verify(&self, degree_cap: u64) -> Result<(), ReportError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(ReportError::Schema(self.schema_version));
        }
        let delta = polynomiality_delta(&self.spec).ok().flatten();
        if delta.is_some() != self.polynomial {
            return Err(ReportError::Mismatch { field: "polynomial" });
        }
        if delta != self.delta {
            return Err(ReportError::Mismatch { field: "delta" });
        }
        for (index, cert) in self.certificates.iter().enumerate() {
            verify_certificate(&self.spec, cert, degree_cap).map_err(|source| ReportError::Certificate { index, source })?;
        }
        let has = |k| self.certificates.iter().any(|c| c.kind() == k);
        let expected = if has(CertificateKind::OracleNegative) {
            Verdict::False
        } else if self.certificates.iter().any(Certificate::proves_nonnegative) {
            Verdict::True
        } else {
            Verdict::Undetermined
        };
        if expected != self.nonnegative {
            return Err(ReportError::Mismatch { field: "nonnegative" });
        }
        if let Some(Coefficients(coeffs)) = &self.coefficients {
            let poly = expand_quotient(&self.spec, degree_cap)?;
            if poly.as_ref().map(|p| p.coeffs()) != Some(coeffs.as_slice()) {
                return Err(ReportError::Mismatch { field: "coefficients" });
            }
        }
        Ok(())
    }
}
