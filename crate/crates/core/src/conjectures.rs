//! Instance families for the fake-Gaussian and binomial-ratio positivity
//! conjectures, with batch scanners over finite parameter ranges.

use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::{certify_nonnegativity, Certificate, CertificateKind, CertifyConfig, Verdict};
use crate::cyclotomic::polynomiality_delta;
use crate::error::{CertifyError, ConjectureError};
use crate::polyq::QuotientSpec;

/// The ratio `[n choose k]_q / [n choose l]_q`, stored with `k` and `l`
/// folded into `[0, n/2]` by the symmetry `j ↔ n − j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GKInstance {
    pub n: u64,
    pub k: u64,
    pub l: u64,
}

impl GKInstance {
    pub fn new(n: u64, k: u64, l: u64) -> Result<Self, ConjectureError> {
        if l > k || k > n {
            return Err(ConjectureError::InvalidGk { n, k, l });
        }
        Ok(GKInstance {
            n,
            k: k.min(n - k),
            l: l.min(n - l),
        })
    }

    /// Whether the instance lies in `1 <= l < k <= n/2`, where every
    /// conjecture case is represented.
    pub fn is_canonical(&self) -> bool {
        1 <= self.l && self.l < self.k && 2 * self.k <= self.n
    }

    /// `2k⌊(k−1)/2⌋ + k − l < n`; only meaningful for `l < k`.
    pub fn corollary_bound(&self) -> bool {
        if self.l >= self.k {
            return false;
        }
        let (n, k, l) = (self.n as i128, self.k as i128, self.l as i128);
        2 * k * ((k - 1) / 2) + k - l < n
    }
}

/// `∏(1 − q^{m+i})^{a_i} / ∏(1 − q^i)^{a_i}`, with trailing zeros of `a`
/// removed so that `n = a.len()` is the largest index in use.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StantonInstance {
    pub m: u64,
    pub a: Vec<u64>,
}

impl StantonInstance {
    pub fn new(m: u64, mut a: Vec<u64>) -> Self {
        while a.last() == Some(&0) {
            a.pop();
        }
        StantonInstance { m, a }
    }

    pub fn n(&self) -> u64 {
        self.a.len() as u64
    }

    /// `2n⌊n/2⌋ − 2 < m`; false for the empty sequence.
    pub fn corollary_bound(&self) -> bool {
        let n = self.n() as i128;
        n > 0 && 2 * n * (n / 2) - 2 < self.m as i128
    }

    /// The strengthened conjecture only asserts positivity for `m >= n`.
    pub fn in_conjecture_range(&self) -> bool {
        self.m >= self.n()
    }
}

/// `a_i = a_{n+1−i}` for all `i`, after dropping trailing zeros.
pub fn is_symmetric(a: &[u64]) -> bool {
    let end = a.iter().rposition(|&x| x != 0).map_or(0, |i| i + 1);
    let a = &a[..end];
    a.iter().eq(a.iter().rev())
}

/// `A = [n−k+1, …, n−l]`, `B = [l+1, …, k]`. When folding left `l > k` the
/// ratio is inverted: `A = [k+1, …, l]`, `B = [n−l+1, …, n−k]`.
pub fn gk_spec(inst: &GKInstance) -> QuotientSpec {
    let GKInstance { n, k, l } = *inst;
    let (a, b): (Vec<u64>, Vec<u64>) = if l <= k {
        ((n - k + 1..=n - l).collect(), (l + 1..=k).collect())
    } else {
        ((k + 1..=l).collect(), (n - l + 1..=n - k).collect())
    };
    QuotientSpec::new(a, b).expect("interval entries are positive")
}

pub fn stanton_spec(inst: &StantonInstance) -> QuotientSpec {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (i, &mult) in (1u64..).zip(&inst.a) {
        for _ in 0..mult {
            a.push(inst.m + i);
            b.push(i);
        }
    }
    QuotientSpec::new(a, b).expect("positive exponents")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Instance {
    Gk(GKInstance),
    Stanton(StantonInstance),
}

impl Instance {
    pub fn spec(&self) -> QuotientSpec {
        match self {
            Instance::Gk(g) => gk_spec(g),
            Instance::Stanton(s) => stanton_spec(s),
        }
    }

    pub fn corollary_bound(&self) -> bool {
        match self {
            Instance::Gk(g) => g.corollary_bound(),
            Instance::Stanton(s) => s.corollary_bound(),
        }
    }

    /// Stable identifier, used as the resume cursor for persisted scans.
    pub fn key(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instance::Gk(g) => write!(f, "gk:{},{},{}", g.n, g.k, g.l),
            Instance::Stanton(s) => {
                write!(f, "stanton:{};", s.m)?;
                for (i, x) in s.a.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gk,
    Stanton,
}

/// Finite parameter box for a scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum ScanRanges {
    Gk { n_max: u64 },
    Stanton { n_max: u64, m_max: u64, a_max: u64 },
}

impl ScanRanges {
    pub fn family(&self) -> Family {
        match self {
            ScanRanges::Gk { .. } => Family::Gk,
            ScanRanges::Stanton { .. } => Family::Stanton,
        }
    }
}

/// All instances in canonical order.
///
/// GK: `n` ascending, then `k` in `2..=n/2`, then `l` in `1..k`.
/// Stanton: length `n` ascending, then `m` in `1..=m_max`, then `a` in
/// lexicographic order over `{0..a_max}^{n−1} × {1..a_max}`.
pub fn instances(ranges: &ScanRanges) -> Vec<Instance> {
    let mut out = Vec::new();
    match *ranges {
        ScanRanges::Gk { n_max } => {
            for n in 1..=n_max {
                for k in 2..=n / 2 {
                    for l in 1..k {
                        out.push(Instance::Gk(GKInstance { n, k, l }));
                    }
                }
            }
        }
        ScanRanges::Stanton { n_max, m_max, a_max } => {
            if a_max == 0 {
                return out;
            }
            for n in 1..=n_max as usize {
                let sequences = sequences_of_length(n, a_max);
                for m in 1..=m_max {
                    for a in &sequences {
                        out.push(Instance::Stanton(StantonInstance { m, a: a.clone() }));
                    }
                }
            }
        }
    }
    out
}

fn sequences_of_length(n: usize, a_max: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; n];
    cur[n - 1] = 1;
    loop {
        out.push(cur.clone());
        // Odometer increment, most significant digit first.
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            let floor = if i == n - 1 { 1 } else { 0 };
            if cur[i] < a_max {
                cur[i] += 1;
                break;
            }
            cur[i] = floor;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NegativeCoefficient {
    pub exponent: usize,
    #[serde(with = "crate::serde_bigint")]
    pub value: BigInt,
}

/// Outcome of one scanned instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanRecord {
    pub key: String,
    pub instance: Instance,
    pub polynomial: bool,
    pub verdict: Verdict,
    pub certificates: Vec<CertificateKind>,
    #[serde(with = "crate::serde_bigint::option", default)]
    pub min_coefficient: Option<BigInt>,
    #[serde(default)]
    pub negative: Option<NegativeCoefficient>,
    pub corollary_bound: bool,
    /// Whether a negative coefficient here would contradict a conjecture.
    pub conjecture_applies: bool,
    #[serde(default)]
    pub symmetric: Option<bool>,
    #[serde(default)]
    pub error: Option<String>,
    #[serde(default)]
    pub wall_time_us: Option<u64>,
}

impl ScanRecord {
    pub fn is_violation(&self) -> bool {
        self.conjecture_applies && self.verdict == Verdict::False
    }

    /// Corollary bound holds on a polynomial instance, yet the fast path
    /// did not certify it.
    pub fn is_corollary_miss(&self) -> bool {
        self.corollary_bound && self.polynomial && !self.certificates.contains(&CertificateKind::SelmerFastPath)
    }
}

/// Builds the spec, tests polynomiality, and runs the certificate cascade on
/// polynomial instances. Cap overflows are recorded, not propagated.
pub fn scan_instance(inst: &Instance, config: &CertifyConfig, record_time: bool) -> ScanRecord {
    let start = Instant::now();
    let spec = inst.spec();
    let polynomial = matches!(polynomiality_delta(&spec), Ok(Some(_)));
    let (conjecture_applies, symmetric) = match inst {
        Instance::Gk(_) => (true, None),
        Instance::Stanton(s) => (s.in_conjecture_range(), Some(is_symmetric(&s.a))),
    };
    let mut record = ScanRecord {
        key: inst.key(),
        instance: inst.clone(),
        polynomial,
        verdict: Verdict::Undetermined,
        certificates: Vec::new(),
        min_coefficient: None,
        negative: None,
        corollary_bound: inst.corollary_bound(),
        conjecture_applies,
        symmetric,
        error: None,
        wall_time_us: None,
    };
    if polynomial {
        match certify_nonnegativity(&spec, config) {
            Ok(report) => {
                record.verdict = report.nonnegative;
                record.certificates = report.certificates.iter().map(Certificate::kind).collect();
                for cert in &report.certificates {
                    match cert {
                        Certificate::OracleNonNegative { min_coefficient } => {
                            record.min_coefficient = Some(min_coefficient.clone())
                        }
                        Certificate::OracleNegative { exponent, value } => {
                            record.min_coefficient = report.expansion.as_ref().and_then(|p| p.min_coefficient().ok());
                            record.negative = Some(NegativeCoefficient {
                                exponent: *exponent,
                                value: value.clone(),
                            });
                        }
                        _ => {}
                    }
                }
            }
            Err(e @ CertifyError::Cap(_)) => record.error = Some(e.to_string()),
            Err(e) => record.error = Some(e.to_string()),
        }
    } else {
        record.certificates.push(CertificateKind::NotPolynomial);
    }
    if record_time {
        record.wall_time_us = Some(start.elapsed().as_micros() as u64);
    }
    record
}

/// Scans every instance of `ranges` in parallel; output is in canonical
/// order and, without timings, independent of the thread count.
pub fn scan_family(ranges: &ScanRanges, config: &CertifyConfig, record_time: bool) -> Vec<ScanRecord> {
    instances(ranges)
        .par_iter()
        .map(|inst| scan_instance(inst, config, record_time))
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSummary {
    pub total: u64,
    pub polynomial: u64,
    pub verdict_true: u64,
    pub verdict_false: u64,
    pub undetermined: u64,
    pub errors: u64,
    /// Negative coefficients where a conjecture asserts positivity.
    pub violations: Vec<String>,
    pub corollary_instances: u64,
    pub corollary_misses: Vec<String>,
}

impl ScanSummary {
    pub fn add(&mut self, r: &ScanRecord) {
        self.total += 1;
        if r.polynomial {
            self.polynomial += 1;
            match r.verdict {
                Verdict::True => self.verdict_true += 1,
                Verdict::False => self.verdict_false += 1,
                Verdict::Undetermined => self.undetermined += 1,
            }
        }
        if r.error.is_some() {
            self.errors += 1;
        }
        if r.is_violation() {
            self.violations.push(r.key.clone());
        }
        if r.corollary_bound && r.polynomial {
            self.corollary_instances += 1;
        }
        if r.is_corollary_miss() {
            self.corollary_misses.push(r.key.clone());
        }
    }

    pub fn from_records<'a>(records: impl IntoIterator<Item = &'a ScanRecord>) -> Self {
        let mut s = ScanSummary::default();
        for r in records {
            s.add(r);
        }
        s
    }
}
