//! Parallel `(n, d)` sweeps with crash-safe checkpointing.
//!
//! Work is partitioned by `n` so each worker reuses one Pascal row across
//! the whole `d` range of that row. Committed records are appended to the
//! checkpoint as one JSON object per line under a mutex, which serializes
//! writes; the final output is merged and sorted by `(n, d)`, so it is
//! byte-identical regardless of worker count or scheduling. A resumed run
//! recomputes only the pairs missing from the checkpoint.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{classify, VerdictKind};
use crate::combinatorics::PascalRow;
use crate::weight::{Esbf, Trichotomy};

/// Version tag carried on every checkpoint line.
pub const CHECKPOINT_SCHEMA_VERSION: u32 = 1;

/// Fixed column order of the CSV report.
pub const CSV_HEADER: &str = "n,d,trichotomy,verdict_kind,rule,weight_hex";

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("checkpoint I/O: {0}")]
    Io(#[from] io::Error),
    #[error("corrupt checkpoint at line {line}: {reason}")]
    CorruptCheckpoint { line: usize, reason: String },
    #[error("sweep interrupted after {written} committed records")]
    Interrupted { written: usize },
}

/// One `(n, d)` result row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub n: u64,
    pub d: u64,
    pub trichotomy: Trichotomy,
    pub verdict_kind: VerdictKind,
    pub rule: String,
    /// Exact weight in lowercase hex; omitted under `compare_only`.
    pub weight_hex: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct CheckpointLine {
    v: u32,
    n: u64,
    d: u64,
    trichotomy: Trichotomy,
    verdict_kind: VerdictKind,
    rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight_hex: Option<String>,
}

impl CheckpointLine {
    fn from_record(r: &SweepRecord) -> Self {
        CheckpointLine {
            v: CHECKPOINT_SCHEMA_VERSION,
            n: r.n,
            d: r.d,
            trichotomy: r.trichotomy,
            verdict_kind: r.verdict_kind,
            rule: r.rule.clone(),
            weight_hex: r.weight_hex.clone(),
        }
    }

    fn into_record(self) -> SweepRecord {
        SweepRecord {
            n: self.n,
            d: self.d,
            trichotomy: self.trichotomy,
            verdict_kind: self.verdict_kind,
            rule: self.rule,
            weight_hex: self.weight_hex,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub n_max: u64,
    pub workers: usize,
    pub checkpoint: Option<PathBuf>,
    pub resume: bool,
    /// Skip storing weights in the records (they are still computed for the
    /// soundness comparison).
    pub compare_only: bool,
    /// Injected interruption: stop as if crashed once this many records have
    /// been committed this run. Exercises the resume path deterministically.
    pub interrupt_after: Option<usize>,
}

impl SweepOptions {
    pub fn new(n_max: u64) -> Self {
        SweepOptions {
            n_max,
            workers: 1,
            checkpoint: None,
            resume: false,
            compare_only: false,
            interrupt_after: None,
        }
    }
}

/// Verdict-kind tallies and soundness counters over a full sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub records: usize,
    pub counts: BTreeMap<VerdictKind, usize>,
    /// Records whose verdict contradicts the exact trichotomy. Must be zero.
    pub soundness_violations: usize,
    /// Open-case records whose exact weight is balanced: a counterexample to
    /// the conjecture if it ever goes above zero.
    pub open_equal: usize,
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub records: Vec<SweepRecord>,
    pub summary: SweepSummary,
}

fn make_record(n: u64, d: u64, row: &PascalRow, compare_only: bool) -> SweepRecord {
    let e = Esbf::new(n, d).expect("sweep enumerates valid pairs");
    let verdict = classify(&e);
    let report = e.weight_report_with_row(row);
    SweepRecord {
        n,
        d,
        trichotomy: report.trichotomy(),
        verdict_kind: verdict.kind,
        rule: verdict.rule,
        weight_hex: (!compare_only).then(|| report.weight().to_str_radix(16)),
    }
}

fn record_is_sound(r: &SweepRecord) -> bool {
    match r.verdict_kind {
        VerdictKind::BalancedLinear | VerdictKind::BalancedPow2Family => {
            r.trichotomy == Trichotomy::Equal
        }
        VerdictKind::NotBalancedLess => r.trichotomy == Trichotomy::Less,
        VerdictKind::NotBalancedGreater => r.trichotomy == Trichotomy::Greater,
        VerdictKind::OpenCase1 | VerdictKind::OpenCase2 => true,
    }
}

/// Tallies a record set.
pub fn summarize(records: &[SweepRecord]) -> SweepSummary {
    let mut counts = BTreeMap::new();
    let mut violations = 0;
    let mut open_equal = 0;
    for r in records {
        *counts.entry(r.verdict_kind).or_insert(0) += 1;
        if !record_is_sound(r) {
            violations += 1;
        }
        if r.verdict_kind.is_open() && r.trichotomy == Trichotomy::Equal {
            open_equal += 1;
        }
    }
    SweepSummary {
        records: records.len(),
        counts,
        soundness_violations: violations,
        open_equal,
    }
}

/// Loads a checkpoint, truncating a torn final line in place. A malformed
/// line anywhere else is a hard error.
fn load_checkpoint(path: &Path) -> Result<BTreeMap<(u64, u64), SweepRecord>, SweepError> {
    let content = std::fs::read_to_string(path)?;
    let mut records = BTreeMap::new();
    let mut valid_end = 0usize;
    let mut offset = 0usize;
    let chunks: Vec<&str> = content.split_inclusive('\n').collect();
    for (idx, chunk) in chunks.iter().enumerate() {
        let line_no = idx + 1;
        let is_last = idx + 1 == chunks.len();
        let line = chunk.trim_end_matches(['\n', '\r']);
        let parsed: Result<CheckpointLine, _> = serde_json::from_str(line);
        match parsed {
            Ok(cp) if cp.v == CHECKPOINT_SCHEMA_VERSION => {
                let record = cp.into_record();
                records.entry((record.n, record.d)).or_insert(record);
                offset += chunk.len();
                valid_end = offset;
            }
            Ok(cp) => {
                return Err(SweepError::CorruptCheckpoint {
                    line: line_no,
                    reason: format!("unknown schema version {}", cp.v),
                });
            }
            Err(err) => {
                if is_last {
                    // Torn tail from a crash mid-append: drop it.
                    OpenOptions::new()
                        .write(true)
                        .open(path)?
                        .set_len(valid_end as u64)?;
                    break;
                }
                return Err(SweepError::CorruptCheckpoint {
                    line: line_no,
                    reason: err.to_string(),
                });
            }
        }
    }
    Ok(records)
}

/// Runs the sweep over all `1 <= d <= n <= n_max`.
///
/// The returned records are sorted by `(n, d)` and complete; the summary is
/// computed over the merged (resumed plus fresh) set.
pub fn run_sweep(opts: &SweepOptions) -> Result<SweepOutcome, SweepError> {
    let n_max = opts.n_max;
    let workers = opts.workers.max(1);

    let mut done: BTreeMap<(u64, u64), SweepRecord> = BTreeMap::new();
    if let Some(path) = &opts.checkpoint {
        if opts.resume && path.exists() {
            done = load_checkpoint(path)?;
            done.retain(|&(n, d), _| n <= n_max && d >= 1 && d <= n);
        }
    }

    let appender: Option<File> = match &opts.checkpoint {
        Some(path) if opts.resume => Some(OpenOptions::new().create(true).append(true).open(path)?),
        Some(path) => Some(File::create(path)?),
        None => None,
    };

    let pending: Vec<(u64, Vec<u64>)> = (1..=n_max)
        .filter_map(|n| {
            let ds: Vec<u64> = (1..=n).filter(|&d| !done.contains_key(&(n, d))).collect();
            (!ds.is_empty()).then_some((n, ds))
        })
        .collect();

    let next = AtomicUsize::new(0);
    let interrupted = AtomicBool::new(false);
    let committed = AtomicUsize::new(0);
    let sink: Mutex<(Option<File>, Vec<SweepRecord>)> = Mutex::new((appender, Vec::new()));
    let io_error: Mutex<Option<io::Error>> = Mutex::new(None);

    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                if interrupted.load(Ordering::SeqCst) {
                    break;
                }
                let idx = next.fetch_add(1, Ordering::SeqCst);
                let Some((n, ds)) = pending.get(idx) else {
                    break;
                };
                let row = PascalRow::new(*n);
                for &d in ds {
                    if interrupted.load(Ordering::SeqCst) {
                        return;
                    }
                    let record = make_record(*n, d, &row, opts.compare_only);
                    let mut guard = sink.lock().unwrap();
                    if interrupted.load(Ordering::SeqCst) {
                        return;
                    }
                    if let Some(file) = guard.0.as_mut() {
                        let mut line = serde_json::to_string(&CheckpointLine::from_record(&record))
                            .expect("checkpoint lines serialize");
                        line.push('\n');
                        if let Err(err) =
                            file.write_all(line.as_bytes()).and_then(|()| file.flush())
                        {
                            *io_error.lock().unwrap() = Some(err);
                            interrupted.store(true, Ordering::SeqCst);
                            return;
                        }
                    }
                    guard.1.push(record);
                    let count = committed.fetch_add(1, Ordering::SeqCst) + 1;
                    if opts.interrupt_after == Some(count) {
                        interrupted.store(true, Ordering::SeqCst);
                        return;
                    }
                }
            });
        }
    });

    if let Some(err) = io_error.lock().unwrap().take() {
        return Err(SweepError::Io(err));
    }
    if interrupted.load(Ordering::SeqCst) {
        return Err(SweepError::Interrupted {
            written: committed.load(Ordering::SeqCst),
        });
    }

    let fresh = sink.into_inner().unwrap().1;
    let mut records: Vec<SweepRecord> = done.into_values().chain(fresh).collect();
    records.sort_by_key(|r| (r.n, r.d));
    let expected = (n_max * (n_max + 1) / 2) as usize;
    assert_eq!(records.len(), expected, "sweep must cover every pair");
    let summary = summarize(&records);
    Ok(SweepOutcome { records, summary })
}

/// Renders records as CSV with the fixed column order.
pub fn records_to_csv(records: &[SweepRecord]) -> String {
    let mut out = String::with_capacity(records.len() * 40 + CSV_HEADER.len() + 1);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n,
            r.d,
            r.trichotomy,
            r.verdict_kind,
            r.rule,
            r.weight_hex.as_deref().unwrap_or("")
        )
        .expect("writing to a String cannot fail");
    }
    out
}
