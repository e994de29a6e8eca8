//! Append-only JSON-lines scan files with key-based resume.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use cgf_core::certify::CertifyConfig;
use cgf_core::conjectures::{instances, scan_instance, ScanRanges, ScanRecord, ScanSummary};
use rayon::prelude::*;
use rayon::ThreadPool;

/// Records per parallel batch; each batch is flushed before the next starts.
const BATCH: usize = 256;

#[derive(Debug, thiserror::Error)]
pub enum ScanFileError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {source}")]
    Corrupt { line: usize, source: serde_json::Error },
}

/// Reads the complete records of an existing scan file. A trailing partial
/// line (an interrupted write) is cut off the file.
pub fn load_records(path: &Path) -> Result<Vec<ScanRecord>, ScanFileError> {
    let mut text = String::new();
    match File::open(path) {
        Ok(mut f) => f.read_to_string(&mut text)?,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let complete = text.rfind('\n').map_or(0, |i| i + 1);
    if complete < text.len() {
        OpenOptions::new().write(true).open(path)?.set_len(complete as u64)?;
    }
    text[..complete]
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|source| ScanFileError::Corrupt { line: i + 1, source }))
        .collect()
}

pub struct ScanOptions<'a> {
    pub ranges: ScanRanges,
    pub config: CertifyConfig,
    pub record_time: bool,
    pub pool: &'a ThreadPool,
}

/// Runs every instance of the range that has no record yet, writing records
/// in canonical order, and summarizes the whole range (old and new records).
pub fn run_scan(
    opts: &ScanOptions<'_>,
    existing: Vec<ScanRecord>,
    out: &mut dyn Write,
) -> Result<ScanSummary, ScanFileError> {
    let mut done: HashMap<String, ScanRecord> = existing.into_iter().map(|r| (r.key.clone(), r)).collect();
    let all = instances(&opts.ranges);
    let pending: Vec<_> = all.iter().filter(|i| !done.contains_key(&i.key())).cloned().collect();
    let mut out = BufWriter::new(out);
    for batch in pending.chunks(BATCH) {
        let records: Vec<ScanRecord> = opts.pool.install(|| {
            batch
                .par_iter()
                .map(|inst| scan_instance(inst, &opts.config, opts.record_time))
                .collect()
        });
        for r in records {
            serde_json::to_writer(&mut out, &r).map_err(io::Error::from)?;
            out.write_all(b"\n")?;
            done.insert(r.key.clone(), r);
        }
        out.flush()?;
    }
    Ok(ScanSummary::from_records(all.iter().filter_map(|i| done.get(&i.key()))))
}
