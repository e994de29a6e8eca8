use std::ffi::OsString;
use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::PathBuf;

use cgf_core::certify::{
    certify_nonnegativity, hall_condition_subcritical, hsop_test, polya_multiplier, Certificate, CertifyConfig,
    Verdict, DEFAULT_HSOP_DISTINCT_CAP, DEFAULT_LATTICE_BACKTRACK_CAP, DEFAULT_POLYA_KMAX,
};
use cgf_core::conjectures::{ScanRanges, ScanSummary};
use cgf_core::cyclotomic::{cgf_form, cyclotomic_poly};
use cgf_core::polyq::{expand_quotient, IntPoly, DEFAULT_DEGREE_CAP};
use cgf_core::semigroup::{frobenius_number, selmer_bound, GeneratorSet};
use cgf_core::{CapExceeded, CertifyError};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::json;
use thiserror::Error;

use crate::report::ReportDocument;
use crate::scan_io::{load_records, run_scan, ScanFileError, ScanOptions};
use crate::spec_text::{parse_int_list, parse_spec, ParseError};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_UNDETERMINED: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_CAP: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "cgf", version, about = "Polynomiality and non-negativity of ∏(1−q^a)/∏(1−q^b)")]
struct Cli {
    #[command(flatten)]
    caps: Caps,
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Caps {
    /// Refuse expansions whose degree exceeds this.
    #[arg(long, global = true, env = "CGF_DEGREE_CAP", default_value_t = DEFAULT_DEGREE_CAP)]
    degree_cap: u64,
    /// Skip the HSOP test above this many distinct denominator values.
    #[arg(long, global = true, env = "CGF_HSOP_DISTINCT_CAP", default_value_t = DEFAULT_HSOP_DISTINCT_CAP)]
    hsop_distinct_cap: usize,
    /// Largest power of (1+q) tried by `polya`.
    #[arg(long, global = true, env = "CGF_POLYA_KMAX", default_value_t = DEFAULT_POLYA_KMAX)]
    polya_kmax: u32,
    /// Search-state budget for the prime-power lattice decomposition.
    #[arg(long, global = true, env = "CGF_LATTICE_BACKTRACK_CAP", default_value_t = DEFAULT_LATTICE_BACKTRACK_CAP)]
    lattice_backtrack_cap: usize,
}

impl Caps {
    fn certify_config(&self) -> CertifyConfig {
        CertifyConfig {
            degree_cap: self.degree_cap,
            hsop_distinct_cap: self.hsop_distinct_cap,
            lattice_backtrack_cap: self.lattice_backtrack_cap,
            run_oracle: true,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the certificate cascade and print a report document.
    Check {
        /// Quotient as "a1,a2,.../b1,b2,..." (either side may be empty).
        spec: String,
        /// Include the expanded coefficients.
        #[arg(long)]
        coefficients: bool,
        /// Include per-stage timings (makes output non-deterministic).
        #[arg(long)]
        timings: bool,
        /// Do not expand; the verdict comes from certificates alone.
        #[arg(long)]
        no_oracle: bool,
    },
    /// Print the coefficients of the quotient, constant term first.
    Expand {
        /// Quotient as "a1,a2,.../b1,b2,..." (either side may be empty).
        spec: String,
    },
    /// Test membership in the HSOP monoid (or the sub-critical condition when #A < #B).
    Hsop {
        /// Quotient as "a1,a2,.../b1,b2,..." (either side may be empty).
        spec: String,
    },
    /// Frobenius number, Apéry set and Selmer bound of a generator list.
    Frobenius {
        /// Comma-separated positive generators.
        generators: String,
        /// Also test membership of these integers.
        #[arg(long, value_delimiter = ',')]
        contains: Vec<u64>,
    },
    /// Print the n-th cyclotomic polynomial.
    Cyclotomic { n: u64 },
    /// Least k with (1+q)^k times the quotient non-negative.
    Polya {
        /// Quotient as "a1,a2,.../b1,b2,..." (either side may be empty).
        spec: String,
    },
    /// Write a non-negative polynomial as α·q^β·∏Φ_d. Takes a spec or a coefficient list.
    CgfForm {
        /// A quotient spec, or coefficients "c0,c1,..." constant term first.
        input: String,
    },
    /// Scan [n choose k]_q / [n choose l]_q over 1 <= l < k <= n/2, n <= n-max.
    ScanGk {
        /// Largest n.
        #[arg(long)]
        n_max: u64,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Scan ∏(1−q^{m+i})^{a_i}/∏(1−q^i)^{a_i} over the given box.
    ScanStanton {
        /// Largest length of the exponent vector a.
        #[arg(long)]
        n_max: u64,
        /// Largest shift m.
        #[arg(long)]
        m_max: u64,
        /// Largest exponent a_i.
        #[arg(long)]
        a_max: u64,
        #[command(flatten)]
        scan: ScanArgs,
    },
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// Append records to this file, skipping instances already present.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Record wall time per instance.
    #[arg(long)]
    timings: bool,
}

#[derive(Debug, Error)]
enum AppError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Cap(#[from] CapExceeded),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    ScanFile(#[from] ScanFileError),
}

impl AppError {
    fn exit_code(&self) -> i32 {
        match self {
            AppError::Cap(_) => EXIT_CAP,
            _ => EXIT_USAGE,
        }
    }
}

impl From<CertifyError> for AppError {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::Cap(c) => AppError::Cap(c),
            other => AppError::Usage(other.to_string()),
        }
    }
}

/// Parses `args` (including the program name) and runs the command. Returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_TRUE };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::True => EXIT_TRUE,
        Verdict::False => EXIT_FALSE,
        Verdict::Undetermined => EXIT_UNDETERMINED,
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn strings(coeffs: &[BigInt]) -> Vec<String> {
    coeffs.iter().map(BigInt::to_string).collect()
}

fn emit(out: &mut dyn Write, value: &serde_json::Value) -> io::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    out.write_all(b"\n")
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, AppError> {
    let caps = &cli.caps;
    match &cli.command {
        Command::Check {
            spec,
            coefficients,
            timings,
            no_oracle,
        } => {
            let spec = parse_spec(spec)?;
            let config = CertifyConfig {
                run_oracle: !no_oracle,
                ..caps.certify_config()
            };
            let report = certify_nonnegativity(&spec, &config)?;
            let doc = ReportDocument::from_report(&report, *coefficients, *timings);
            serde_json::to_writer_pretty(&mut *out, &doc).map_err(io::Error::from)?;
            out.write_all(b"\n")?;
            Ok(verdict_code(doc.nonnegative))
        }
        Command::Expand { spec } => {
            let spec = parse_spec(spec)?;
            let poly = expand_quotient(&spec, caps.degree_cap)?;
            match &poly {
                Some(p) if cli.json => emit(out, &json!({"spec": spec, "polynomial": true, "coefficients": strings(p.coeffs())}))?,
                Some(p) => writeln!(out, "{}", join(p.coeffs()))?,
                None if cli.json => emit(out, &json!({"spec": spec, "polynomial": false}))?,
                None => writeln!(out, "not a polynomial")?,
            }
            Ok(match poly {
                Some(p) if p.is_nonnegative() => EXIT_TRUE,
                Some(_) => EXIT_FALSE,
                None => EXIT_UNDETERMINED,
            })
        }
        Command::Hsop { spec } => {
            let spec = parse_spec(spec)?;
            let (a, b) = (spec.numerator(), spec.denominator());
            if a.len() < b.len() {
                let holds = hall_condition_subcritical(a, b)?;
                if cli.json {
                    emit(out, &json!({"spec": spec, "subcritical": true, "holds": holds}))?;
                } else {
                    writeln!(out, "sub-critical condition {}", if holds { "holds" } else { "fails" })?;
                }
                return Ok(if holds { EXIT_TRUE } else { EXIT_FALSE });
            }
            let cert = hsop_test(a, b)?;
            if cli.json {
                emit(out, &json!({"spec": spec, "certificate": cert}))?;
            }
            match cert {
                Certificate::HsopHolds { subsets_checked } => {
                    if !cli.json {
                        writeln!(out, "holds ({subsets_checked} value sets checked)")?;
                    }
                    Ok(EXIT_TRUE)
                }
                Certificate::HsopFails {
                    witness,
                    index_count,
                    representable,
                    deficit,
                } => {
                    if !cli.json {
                        writeln!(
                            out,
                            "fails: T={} covers {index_count} indices but only {representable} numerator degrees lie in <T> (deficit {deficit})",
                            join(&witness)
                        )?;
                    }
                    Ok(EXIT_FALSE)
                }
                _ => unreachable!("hsop_test returns an HSOP certificate"),
            }
        }
        Command::Frobenius { generators, contains } => {
            let gens = parse_int_list(generators)?;
            let s = GeneratorSet::new(&gens).map_err(|e| AppError::Usage(e.to_string()))?;
            let frob = frobenius_number(&s).ok();
            let selmer = selmer_bound(&s).ok();
            let members: Vec<(u64, bool)> = contains.iter().map(|&x| (x, s.contains(x))).collect();
            if cli.json {
                emit(
                    out,
                    &json!({
                        "generators": s.generators(),
                        "gcd": s.gcd(),
                        "frobenius": frob,
                        "apery": s.apery(),
                        "minimal_generators": s.minimal_generators(),
                        "selmer_bound": selmer,
                        "contains": members.iter().map(|(x, m)| json!({"value": x, "member": m})).collect::<Vec<_>>(),
                    }),
                )?;
            } else {
                writeln!(out, "generators: {}", join(s.generators()))?;
                writeln!(out, "gcd: {}", s.gcd())?;
                match frob {
                    Some(f) => writeln!(out, "frobenius: {f}")?,
                    None => writeln!(out, "frobenius: none (gcd {})", s.gcd())?,
                }
                writeln!(out, "apery: {}", join(s.apery()))?;
                writeln!(out, "minimal generators: {}", join(&s.minimal_generators()))?;
                if let Some(b) = selmer {
                    writeln!(out, "selmer bound: {b}")?;
                }
                for (x, m) in members {
                    writeln!(out, "contains {x}: {m}")?;
                }
            }
            Ok(EXIT_TRUE)
        }
        Command::Cyclotomic { n } => {
            if *n == 0 {
                return Err(AppError::Usage("cyclotomic index must be at least 1".into()));
            }
            let p = cyclotomic_poly(*n);
            let min = p.min_coefficient().expect("cyclotomic polynomials are nonzero");
            let flat = p.is_flat().expect("nonzero");
            if cli.json {
                emit(
                    out,
                    &json!({"n": n, "degree": p.degree(), "min_coefficient": min.to_string(), "flat": flat, "coefficients": strings(p.coeffs())}),
                )?;
            } else {
                writeln!(out, "degree: {}", p.degree().unwrap_or(0))?;
                writeln!(out, "min coefficient: {min}")?;
                writeln!(out, "flat: {flat}")?;
                writeln!(out, "coefficients: {}", join(p.coeffs()))?;
            }
            Ok(EXIT_TRUE)
        }
        Command::Polya { spec } => {
            let spec = parse_spec(spec)?;
            let Some(poly) = expand_quotient(&spec, caps.degree_cap)? else {
                writeln!(err, "not a polynomial")?;
                return Ok(EXIT_UNDETERMINED);
            };
            let k = polya_multiplier(&poly, caps.polya_kmax);
            if cli.json {
                emit(out, &json!({"spec": spec, "k": k, "k_max": caps.polya_kmax}))?;
            } else {
                match k {
                    Some(k) => writeln!(out, "k = {k}")?,
                    None => writeln!(out, "no k <= {} found", caps.polya_kmax)?,
                }
            }
            Ok(if k.is_some() { EXIT_TRUE } else { EXIT_UNDETERMINED })
        }
        Command::CgfForm { input } => {
            let poly = if input.contains('/') {
                let spec = parse_spec(input)?;
                match expand_quotient(&spec, caps.degree_cap)? {
                    Some(p) => p,
                    None => {
                        writeln!(err, "not a polynomial")?;
                        return Ok(EXIT_UNDETERMINED);
                    }
                }
            } else {
                parse_coefficients(input)?
            };
            let form = cgf_form(&poly).map_err(|e| AppError::Usage(e.to_string()))?;
            if cli.json {
                emit(out, &json!({ "form": form }))?;
            } else {
                match &form {
                    Some(f) => writeln!(out, "alpha: {}\nbeta: {}\nindices: {}", f.alpha, f.beta, join(&f.indices))?,
                    None => writeln!(out, "not a product of cyclotomic polynomials")?,
                }
            }
            Ok(if form.is_some() { EXIT_TRUE } else { EXIT_UNDETERMINED })
        }
        Command::ScanGk { n_max, scan } => run_scan_command(ScanRanges::Gk { n_max: *n_max }, scan, caps, out),
        Command::ScanStanton {
            n_max,
            m_max,
            a_max,
            scan,
        } => run_scan_command(
            ScanRanges::Stanton {
                n_max: *n_max,
                m_max: *m_max,
                a_max: *a_max,
            },
            scan,
            caps,
            out,
        ),
    }
}

fn parse_coefficients(text: &str) -> Result<IntPoly, ParseError> {
    let mut coeffs = Vec::new();
    let mut offset = 0;
    for token in text.split(',') {
        let lead = token.len() - token.trim_start().len();
        let body = token.trim();
        let parsed = (!body.is_empty() && body.trim_start_matches('-').chars().all(|c| c.is_ascii_digit()))
            .then(|| body.parse::<BigInt>().ok())
            .flatten();
        match parsed {
            Some(c) => coeffs.push(c),
            None => {
                return Err(ParseError {
                    position: text[..offset + lead].chars().count(),
                    token: body.to_string(),
                    reason: "expected an integer coefficient",
                })
            }
        }
        offset += token.len() + 1;
    }
    Ok(IntPoly::new(coeffs))
}

fn run_scan_command(ranges: ScanRanges, scan: &ScanArgs, caps: &Caps, out: &mut dyn Write) -> Result<i32, AppError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(scan.jobs)
        .build()
        .map_err(|e| AppError::Usage(e.to_string()))?;
    let opts = ScanOptions {
        ranges,
        config: caps.certify_config(),
        record_time: scan.timings,
        pool: &pool,
    };
    let summary: ScanSummary = match &scan.out {
        Some(path) => {
            let existing = load_records(path)?;
            let mut file = OpenOptions::new().create(true).append(true).open(path)?;
            let summary = run_scan(&opts, existing, &mut file)?;
            serde_json::to_writer(&mut *out, &summary).map_err(io::Error::from)?;
            out.write_all(b"\n")?;
            summary
        }
        None => {
            let summary = run_scan(&opts, Vec::new(), out)?;
            serde_json::to_writer(&mut *out, &json!({ "summary": summary })).map_err(io::Error::from)?;
            out.write_all(b"\n")?;
            summary
        }
    };
    Ok(if summary.violations.is_empty() { EXIT_TRUE } else { EXIT_FALSE })
}
