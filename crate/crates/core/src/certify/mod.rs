//! Certificates for polynomiality and non-negativity of a quotient, and the
//! cascade that collects them.
//!
//! Every [`Certificate`] carries enough witness data to be re-checked by
//! [`verify_certificate`] without repeating the search that found it. The
//! cascade runs cheap divisibility and formula checks first, the exponential
//! HSOP test after them, and the expansion oracle last as ground truth.

mod criteria;
mod hsop;
mod lattice;
mod matching;
mod verify;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{polynomiality_delta, DivisorMultiset};
use crate::error::CertifyError;
use crate::polyq::{expand_quotient, IntPoly, QuotientSpec, DEFAULT_DEGREE_CAP};

pub use criteria::{bijection_criterion, fast_path_bound, polya_multiplier, selmer_fast_path};
pub use hsop::{hall_condition_subcritical, hsop_test};
pub use lattice::{lattice_decompose, Decomposition, LatticeMode, LatticeOutcome, OmegaBlock, PkJoinBlock};
pub use verify::{verify_certificate, VerifyError};

pub const DEFAULT_HSOP_DISTINCT_CAP: usize = 24;
pub const DEFAULT_POLYA_KMAX: u32 = 4096;
pub const DEFAULT_LATTICE_BACKTRACK_CAP: usize = 100_000;

/// Why a quotient is (or is not) known to be a non-negative polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Certificate {
    /// `⨄D(b) ⊄ ⨄D(a)` (or `#A < #B`).
    NotPolynomial,
    /// The subset condition holds for all `subsets_checked` value sets.
    HsopHolds { subsets_checked: u64 },
    /// `#(A ∩̄ ⟨witness⟩) = representable < index_count = #{i : b_i ∈ witness}`.
    HsopFails {
        witness: Vec<u64>,
        index_count: usize,
        representable: usize,
        deficit: usize,
    },
    /// `bound < a1`; `bound` is absent for a single factor.
    SelmerFastPath { bound: Option<i64>, a1: u64 },
    LatticePkJoin { blocks: Vec<PkJoinBlock> },
    /// Non-negative omega blocks.
    LatticeOmega { mode: LatticeMode, blocks: Vec<OmegaBlock> },
    /// `pairing[j]` is the numerator index matched to `b_j`.
    DivisibilityBijection { pairing: Vec<usize> },
    /// Flat-omega blocks: each block's product is flat.
    FlatnessLocal { blocks: Vec<OmegaBlock> },
    OracleNonNegative {
        #[serde(with = "crate::serde_bigint")]
        min_coefficient: BigInt,
    },
    OracleNegative {
        exponent: usize,
        #[serde(with = "crate::serde_bigint")]
        value: BigInt,
    },
    /// `(1 + q)^k` times the quotient has no negative coefficient, and `k` is least.
    PolyaMultiplier { k: u32 },
}

impl Certificate {
    pub fn kind(&self) -> CertificateKind {
        match self {
            Certificate::NotPolynomial => CertificateKind::NotPolynomial,
            Certificate::HsopHolds { .. } => CertificateKind::HsopHolds,
            Certificate::HsopFails { .. } => CertificateKind::HsopFails,
            Certificate::SelmerFastPath { .. } => CertificateKind::SelmerFastPath,
            Certificate::LatticePkJoin { .. } => CertificateKind::LatticePkJoin,
            Certificate::LatticeOmega { .. } => CertificateKind::LatticeOmega,
            Certificate::DivisibilityBijection { .. } => CertificateKind::DivisibilityBijection,
            Certificate::FlatnessLocal { .. } => CertificateKind::FlatnessLocal,
            Certificate::OracleNonNegative { .. } => CertificateKind::OracleNonNegative,
            Certificate::OracleNegative { .. } => CertificateKind::OracleNegative,
            Certificate::PolyaMultiplier { .. } => CertificateKind::PolyaMultiplier,
        }
    }

    /// Whether this certificate alone proves the quotient has no negative coefficient.
    pub fn proves_nonnegative(&self) -> bool {
        matches!(
            self,
            Certificate::SelmerFastPath { .. }
                | Certificate::LatticePkJoin { .. }
                | Certificate::LatticeOmega { .. }
                | Certificate::DivisibilityBijection { .. }
                | Certificate::HsopHolds { .. }
                | Certificate::OracleNonNegative { .. }
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    NotPolynomial,
    HsopHolds,
    HsopFails,
    SelmerFastPath,
    LatticePkJoin,
    LatticeOmega,
    DivisibilityBijection,
    FlatnessLocal,
    OracleNonNegative,
    OracleNegative,
    PolyaMultiplier,
}

/// Three-valued non-negativity verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Polynomiality,
    Bijection,
    SelmerFastPath,
    LatticePkjoin,
    LatticeOmega,
    LatticeFlat,
    Hsop,
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkippedStage {
    pub stage: Stage,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct CertifyConfig {
    pub degree_cap: u64,
    /// Skip the HSOP test when `B` has more distinct values than this.
    pub hsop_distinct_cap: usize,
    pub lattice_backtrack_cap: usize,
    pub run_oracle: bool,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            degree_cap: DEFAULT_DEGREE_CAP,
            hsop_distinct_cap: DEFAULT_HSOP_DISTINCT_CAP,
            lattice_backtrack_cap: DEFAULT_LATTICE_BACKTRACK_CAP,
            run_oracle: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CertificateReport {
    pub spec: QuotientSpec,
    pub polynomial: bool,
    pub delta: Option<DivisorMultiset>,
    pub nonnegative: Verdict,
    pub certificates: Vec<Certificate>,
    pub skipped: Vec<SkippedStage>,
    pub timings: Vec<(Stage, Duration)>,
    /// The expanded quotient, when the oracle ran.
    pub expansion: Option<IntPoly>,
}

impl CertificateReport {
    pub fn has(&self, kind: CertificateKind) -> bool {
        self.certificates.iter().any(|c| c.kind() == kind)
    }

    pub fn find(&self, kind: CertificateKind) -> Option<&Certificate> {
        self.certificates.iter().find(|c| c.kind() == kind)
    }
}

struct Timer {
    timings: Vec<(Stage, Duration)>,
}

impl Timer {
    fn run<T>(&mut self, stage: Stage, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.push((stage, start.elapsed()));
        out
    }
}

/// Runs the certificate cascade on one quotient.
///
/// Stages: polynomiality, divisibility bijection, Selmer fast path, lattice
/// decompositions, HSOP test, expansion oracle. The verdict comes from the
/// oracle when it runs, otherwise from any certificate that proves
/// non-negativity.
pub fn certify_nonnegativity(spec: &QuotientSpec, config: &CertifyConfig) -> Result<CertificateReport, CertifyError> {
    let mut timer = Timer { timings: Vec::new() };
    let mut certificates = Vec::new();
    let mut skipped = Vec::new();
    let (a, b) = (spec.numerator(), spec.denominator());

    let delta = timer.run(Stage::Polynomiality, || polynomiality_delta(spec).ok().flatten());
    let Some(delta) = delta else {
        return Ok(CertificateReport {
            spec: spec.clone(),
            polynomial: false,
            delta: None,
            nonnegative: Verdict::Undetermined,
            certificates: vec![Certificate::NotPolynomial],
            skipped,
            timings: timer.timings,
            expansion: None,
        });
    };
    let balanced = spec.is_balanced();

    if balanced {
        if let Some(pairing) = timer.run(Stage::Bijection, || bijection_criterion(a, b))? {
            certificates.push(Certificate::DivisibilityBijection { pairing });
        }
        if let Some(cert) = timer.run(Stage::SelmerFastPath, || selmer_fast_path(spec))? {
            certificates.push(cert);
        }
    } else {
        for stage in [Stage::Bijection, Stage::SelmerFastPath, Stage::Hsop] {
            skipped.push(SkippedStage {
                stage,
                reason: "numerator and denominator sizes differ".into(),
            });
        }
    }

    let cap = config.lattice_backtrack_cap;
    for (stage, mode) in [
        (Stage::LatticePkjoin, LatticeMode::NonnegPkjoin),
        (Stage::LatticeOmega, LatticeMode::NonnegOmega),
        (Stage::LatticeFlat, LatticeMode::FlatOmega),
    ] {
        match timer.run(stage, || lattice_decompose(&delta, mode, cap)) {
            LatticeOutcome::Found(Decomposition::PkJoin(blocks)) => {
                certificates.push(Certificate::LatticePkJoin { blocks })
            }
            LatticeOutcome::Found(Decomposition::Omega(blocks)) => certificates.push(match mode {
                LatticeMode::FlatOmega => Certificate::FlatnessLocal { blocks },
                _ => Certificate::LatticeOmega { mode, blocks },
            }),
            LatticeOutcome::NoneExists => {}
            LatticeOutcome::SearchCapped => skipped.push(SkippedStage {
                stage,
                reason: format!("no decomposition found within {cap} search states"),
            }),
        }
    }

    if balanced {
        let distinct = hsop::value_counts(b).len();
        if distinct > config.hsop_distinct_cap {
            skipped.push(SkippedStage {
                stage: Stage::Hsop,
                reason: format!(
                    "{distinct} distinct denominator values exceed the cap {}",
                    config.hsop_distinct_cap
                ),
            });
        } else {
            certificates.push(timer.run(Stage::Hsop, || hsop_test(a, b))?);
        }
    }

    let mut expansion = None;
    let nonnegative = if config.run_oracle {
        let poly = timer
            .run(Stage::Oracle, || expand_quotient(spec, config.degree_cap))?
            .expect("Δ present implies an exact quotient");
        let verdict = match poly.first_negative() {
            Some((exponent, value)) => {
                certificates.push(Certificate::OracleNegative { exponent, value });
                Verdict::False
            }
            None => {
                let min_coefficient = poly.min_coefficient().expect("quotient is nonzero");
                debug_assert!(!min_coefficient.is_negative());
                certificates.push(Certificate::OracleNonNegative { min_coefficient });
                Verdict::True
            }
        };
        expansion = Some(poly);
        verdict
    } else {
        skipped.push(SkippedStage {
            stage: Stage::Oracle,
            reason: "disabled by configuration".into(),
        });
        if certificates.iter().any(Certificate::proves_nonnegative) {
            Verdict::True
        } else {
            Verdict::Undetermined
        }
    };

    Ok(CertificateReport {
        spec: spec.clone(),
        polynomial: true,
        delta: Some(delta),
        nonnegative,
        certificates,
        skipped,
        timings: timer.timings,
        expansion,
    })
}
