//! Range scanner: walks squarefree d, runs the continued-fraction fast path
//! mod p^k for every odd prime p | d, confirms any unit-divisibility hit
//! against the L_p(1, χ_D) unit test, and streams one JSON line per d.
//!
//! Work is partitioned by blocks of d across a bounded worker pool; exactly
//! one writer appends to the output file; workers hand completed records to
//! the writer over a channel and share no mutable state.

use crate::arith::{isqrt, primes_up_to};
use crate::bernoulli::QuadChar;
use crate::error::{Error, Result};
use crate::lp::{is_lp_unit, LpUnitStatus};
use crate::quadfield::unit_tu_mod;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::mpsc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    Primes1Mod4,
    Primes3Mod4,
    Composites,
    All,
}

impl std::str::FromStr for ScanMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "primes-1mod4" => ScanMode::Primes1Mod4,
            "primes-3mod4" => ScanMode::Primes3Mod4,
            "composites" => ScanMode::Composites,
            "all" => ScanMode::All,
            other => {
                return Err(Error::domain(format!(
                    "unknown scan mode '{other}' (primes-1mod4|primes-3mod4|composites|all)"
                )))
            }
        })
    }
}

impl std::fmt::Display for ScanMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ScanMode::Primes1Mod4 => "primes-1mod4",
            ScanMode::Primes3Mod4 => "primes-3mod4",
            ScanMode::Composites => "composites",
            ScanMode::All => "all",
        })
    }
}

/// When to evaluate the L_p(1, χ_D) unit test during a scan. Hits (p | u)
/// are always confirmed; evaluating every d costs O(D) per prime and is only
/// feasible on small ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpPolicy {
    HitsOnly,
    All,
    UpTo(u64),
}

impl std::str::FromStr for LpPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "hits" {
            return Ok(LpPolicy::HitsOnly);
        }
        if s == "all" {
            return Ok(LpPolicy::All);
        }
        if let Some(n) = s.strip_prefix("upto:") {
            let n = n
                .parse::<u64>()
                .map_err(|_| Error::domain(format!("bad lp policy bound '{n}'")))?;
            return Ok(LpPolicy::UpTo(n));
        }
        Err(Error::domain(format!(
            "unknown lp policy '{s}' (hits|all|upto:<n>)"
        )))
    }
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub from: u64,
    pub to: u64,
    pub mode: ScanMode,
    pub jobs: usize,
    /// Residue precision k for the unit fast path (u carried mod p^k).
    pub precision: u32,
    pub period_bound: u64,
    pub output: PathBuf,
    pub resume: bool,
    pub lp_policy: LpPolicy,
}

impl ScanConfig {
    pub fn new(from: u64, to: u64, output: PathBuf) -> ScanConfig {
        ScanConfig {
            from,
            to,
            mode: ScanMode::Composites,
            jobs: default_jobs(),
            precision: 2,
            period_bound: crate::quadfield::DEFAULT_PERIOD_BOUND,
            output,
            resume: false,
            lp_policy: LpPolicy::HitsOnly,
        }
    }
}

/// AACM_JOBS, else the machine's parallelism.
pub fn default_jobs() -> usize {
    if let Ok(v) = std::env::var("AACM_JOBS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                return n;
            }
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PrimeEntry {
    pub p: u64,
    pub u_mod_p: Option<u64>,
    pub u_valuation_capped: Option<u32>,
    pub lp_unit: Option<bool>,
    pub verdict: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ScanRecord {
    pub d: u64,
    #[serde(rename = "D")]
    pub disc: u64,
    pub delta: u8,
    pub primes: Vec<PrimeEntry>,
    pub period_length: u64,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Default)]
pub struct ScanSummary {
    pub scanned: u64,
    pub holds: u64,
    pub counterexamples: u64,
    pub degenerate: u64,
    pub errors: u64,
    pub counterexample_ds: Vec<u64>,
}

impl std::fmt::Display for ScanSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "scanned={} holds={} counterexamples={} degenerate={} errors={}",
            self.scanned, self.holds, self.counterexamples, self.degenerate, self.errors
        )?;
        if !self.counterexample_ds.is_empty() {
            write!(f, " counterexample_d={:?}", self.counterexample_ds)?;
        }
        Ok(())
    }
}

const BLOCK: u64 = 1 << 14;

struct BlockFactors {
    lo: u64,
    values: Vec<BlockEntry>,
}

#[derive(Clone)]
struct BlockEntry {
    squarefree: bool,
    n_factors: u8,
    factors: [u64; 8],
}

/// Factor every integer in [lo, hi) by sieving with the primes <= √(hi−1).
fn sieve_block(lo: u64, hi: u64, primes: &[u64]) -> BlockFactors {
    let len = (hi - lo) as usize;
    let mut rem: Vec<u64> = (lo..hi).collect();
    let mut entries = vec![
        BlockEntry {
            squarefree: true,
            n_factors: 0,
            factors: [0; 8],
        };
        len
    ];
    for &p in primes {
        if p * p >= hi {
            break;
        }
        let start = lo.div_ceil(p) * p;
        let mut j = start;
        while j < hi {
            let idx = (j - lo) as usize;
            let mut e = 0;
            while rem[idx] % p == 0 {
                rem[idx] /= p;
                e += 1;
            }
            if e >= 2 {
                entries[idx].squarefree = false;
            }
            if e >= 1 {
                let n = entries[idx].n_factors as usize;
                if n < 8 {
                    entries[idx].factors[n] = p;
                    entries[idx].n_factors += 1;
                }
            }
            j += p;
        }
    }
    for idx in 0..len {
        if rem[idx] > 1 {
            let n = entries[idx].n_factors as usize;
            if n < 8 {
                entries[idx].factors[n] = rem[idx];
                entries[idx].n_factors += 1;
            }
        }
    }
    BlockFactors {
        lo,
        values: entries,
    }
}

fn wanted(mode: ScanMode, d: u64, entry: &BlockEntry) -> bool {
    if !entry.squarefree || d < 3 {
        return false;
    }
    let n = entry.n_factors as usize;
    let is_prime = n == 1 && entry.factors[0] == d;
    match mode {
        ScanMode::Primes1Mod4 => is_prime && d % 4 == 1,
        ScanMode::Primes3Mod4 => is_prime && d % 4 == 3,
        ScanMode::Composites => n >= 2,
        ScanMode::All => true,
    }
}

fn scan_one(d: u64, entry: &BlockEntry, cfg: &ScanConfig) -> ScanRecord {
    let start = std::time::Instant::now();
    let (disc, delta) = if d % 4 == 1 {
        (d, 1u8)
    } else {
        (4 * d, 2u8)
    };
    let odd_primes: Vec<u64> = entry.factors[..entry.n_factors as usize]
        .iter()
        .copied()
        .filter(|&p| p != 2)
        .collect();
    let k = cfg.precision;
    let moduli: Vec<u64> = odd_primes.iter().map(|&p| p.pow(k)).collect();
    let mm = match unit_tu_mod(d, &moduli, cfg.period_bound) {
        Ok(mm) => mm,
        Err(e) => {
            let primes = odd_primes
                .iter()
                .map(|&p| PrimeEntry {
                    p,
                    u_mod_p: None,
                    u_valuation_capped: None,
                    lp_unit: None,
                    verdict: format!("error: {e}"),
                })
                .collect();
            return ScanRecord {
                d,
                disc,
                delta,
                primes,
                period_length: 0,
                elapsed_ms: start.elapsed().as_millis() as u64,
            };
        }
    };
    let chi = QuadChar::for_real_field(d).expect("d squarefree");
    let mut primes = Vec::with_capacity(odd_primes.len());
    for (i, &p) in odd_primes.iter().enumerate() {
        let (_t, u) = mm.residues[i];
        let u_mod_p = u % p;
        let mut val = 0u32;
        let mut x = u;
        while val < k && x % p == 0 {
            if x == 0 {
                val = k;
                break;
            }
            x /= p;
            val += 1;
        }
        let hit = u_mod_p == 0;
        let want_lp = hit
            || match cfg.lp_policy {
                LpPolicy::HitsOnly => false,
                LpPolicy::All => true,
                LpPolicy::UpTo(n) => d <= n,
            };
        let lp_unit = if want_lp {
            match is_lp_unit(&chi, p) {
                Ok(LpUnitStatus::Unit) => Some(true),
                Ok(LpUnitStatus::NonUnit) => Some(false),
                Err(_) => None,
            }
        } else {
            None
        };
        let verdict = if hit {
            match lp_unit {
                Some(false) => "counterexample".to_string(),
                Some(true) => "inconsistent".to_string(),
                None => "error: lp confirmation failed".to_string(),
            }
        } else {
            "holds".to_string()
        };
        primes.push(PrimeEntry {
            p,
            u_mod_p: Some(u_mod_p),
            u_valuation_capped: Some(val),
            lp_unit,
            verdict,
        });
    }
    ScanRecord {
        d,
        disc,
        delta,
        primes,
        period_length: mm.period_length,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

/// Reads all records from a JSONL file. A truncated final line (from a
/// killed run) is tolerated and reported as `trailing_garbage`; any earlier
/// parse failure is an error.
pub struct LoadedRecords {
    pub records: Vec<ScanRecord>,
    /// Byte length of the valid prefix of the file.
    pub valid_len: u64,
    pub trailing_garbage: bool,
}

pub fn load_records(path: &std::path::Path) -> Result<LoadedRecords> {
    let file = std::fs::File::open(path)?;
    let mut reader = std::io::BufReader::new(file);
    let mut records = Vec::new();
    let mut valid_len = 0u64;
    let mut line = String::new();
    loop {
        line.clear();
        let n = reader.read_line(&mut line)?;
        if n == 0 {
            return Ok(LoadedRecords {
                records,
                valid_len,
                trailing_garbage: false,
            });
        }
        match serde_json::from_str::<ScanRecord>(line.trim_end()) {
            Ok(r) => {
                records.push(r);
                valid_len += n as u64;
            }
            Err(_) => {
                // only acceptable at the very end of the file
                let mut rest = String::new();
                reader.read_line(&mut rest)?;
                if rest.is_empty() {
                    return Ok(LoadedRecords {
                        records,
                        valid_len,
                        trailing_garbage: true,
                    });
                }
                return Err(Error::domain(format!(
                    "corrupt record mid-file in {}: {}",
                    path.display(),
                    line.trim_end()
                )));
            }
        }
    }
}

pub fn read_records(path: &std::path::Path) -> Result<Vec<ScanRecord>> {
    Ok(load_records(path)?.records)
}

/// Records sorted by d with timing zeroed: the determinism contract compares
/// scans through this view (elapsed_ms is wall-clock and excluded).
pub fn normalized_sorted(mut records: Vec<ScanRecord>) -> Vec<ScanRecord> {
    for r in &mut records {
        r.elapsed_ms = 0;
    }
    records.sort_by_key(|r| r.d);
    records
}

/// Runs a scan. Returns the summary; records stream to `config.output`.
pub fn run_scan(config: &ScanConfig) -> Result<ScanSummary> {
    if config.from > config.to {
        return Err(Error::domain("scan: from must be <= to"));
    }
    if config.jobs < 1 {
        return Err(Error::domain("scan: jobs must be >= 1"));
    }
    let from = config.from.max(2);
    let to = config.to;
    // resume bookkeeping
    let mut seen: std::collections::HashSet<u64> = Default::default();
    let file = if config.resume && config.output.exists() {
        let loaded = load_records(&config.output)?;
        for r in &loaded.records {
            seen.insert(r.d);
        }
        let f = std::fs::OpenOptions::new()
            .read(true)
            .write(true)
            .open(&config.output)?;
        f.set_len(loaded.valid_len)?; // drop any torn final line
        let mut f = f;
        use std::io::Seek;
        f.seek(std::io::SeekFrom::End(0))?;
        f
    } else {
        std::fs::File::create(&config.output)?
    };

    let sieve_primes = primes_up_to(isqrt(to) + 1);
    let n_blocks = (to - from) / BLOCK + 1;
    let cursor = AtomicU64::new(0);
    let (tx, rx) = mpsc::channel::<ScanRecord>();

    let mut summary = ScanSummary::default();
    std::thread::scope(|scope| -> Result<()> {
        let writer_handle = scope.spawn(move || -> Result<ScanSummary> {
            let mut out = std::io::BufWriter::with_capacity(1 << 20, file);
            let mut summary = ScanSummary::default();
            let mut since_flush = 0u32;
            for record in rx {
                summary.scanned += 1;
                for e in &record.primes {
                    match e.verdict.as_str() {
                        "holds" => summary.holds += 1,
                        "counterexample" => {
                            summary.counterexamples += 1;
                            summary.counterexample_ds.push(record.d);
                        }
                        "degenerate" => summary.degenerate += 1,
                        _ => summary.errors += 1,
                    }
                }
                serde_json::to_writer(&mut out, &record)?;
                out.write_all(b"\n")?;
                since_flush += 1;
                if since_flush >= 4096 {
                    out.flush()?;
                    since_flush = 0;
                }
                if summary.scanned % 500_000 == 0 {
                    eprintln!("scan: {} records written", summary.scanned);
                }
            }
            out.flush()?;
            summary.counterexample_ds.sort_unstable();
            summary.counterexample_ds.dedup();
            Ok(summary)
        });

        let mut workers = Vec::new();
        for _ in 0..config.jobs {
            let tx = tx.clone();
            let cursor = &cursor;
            let sieve_primes = &sieve_primes;
            let seen = &seen;
            let cfg = config;
            workers.push(scope.spawn(move || {
                loop {
                    let b = cursor.fetch_add(1, Ordering::Relaxed);
                    if b >= n_blocks {
                        break;
                    }
                    let lo = from + b * BLOCK;
                    let hi = (lo + BLOCK).min(to + 1);
                    if lo > to {
                        break;
                    }
                    let block = sieve_block(lo, hi, sieve_primes);
                    for (i, entry) in block.values.iter().enumerate() {
                        let d = block.lo + i as u64;
                        if !wanted(cfg.mode, d, entry) || seen.contains(&d) {
                            continue;
                        }
                        if tx.send(scan_one(d, entry, cfg)).is_err() {
                            return;
                        }
                    }
                }
            }));
        }
        drop(tx);
        for w in workers {
            w.join().map_err(|_| Error::internal("scan worker panicked"))?;
        }
        summary = writer_handle
            .join()
            .map_err(|_| Error::internal("scan writer panicked"))??;
        Ok(())
    })?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn temp_path(name: &str) -> PathBuf {
        let mut p = std::env::temp_dir();
        p.push(format!("aacm-scan-test-{}-{name}.jsonl", std::process::id()));
        p
    }

    #[test]
    fn small_composite_scan_finds_430() {
        let out = temp_path("c430");
        let cfg = ScanConfig {
            jobs: 2,
            ..ScanConfig::new(2, 1000, out.clone())
        };
        let summary = run_scan(&cfg).unwrap();
        assert!(summary.counterexample_ds.contains(&430), "{summary:?}");
        assert!(summary.counterexample_ds.contains(&46), "{summary:?}");
        let records = read_records(&out).unwrap();
        let r430 = records.iter().find(|r| r.d == 430).unwrap();
        assert_eq!(r430.disc, 1720);
        assert_eq!(r430.delta, 2);
        assert_eq!(r430.period_length, 14);
        let p43 = r430.primes.iter().find(|e| e.p == 43).unwrap();
        assert_eq!(p43.u_mod_p, Some(0));
        assert_eq!(p43.lp_unit, Some(false));
        assert_eq!(p43.verdict, "counterexample");
        std::fs::remove_file(&out).ok();
    }

    #[test]
    fn record_roundtrip() {
        let r = ScanRecord {
            d: 430,
            disc: 1720,
            delta: 2,
            primes: vec![PrimeEntry {
                p: 43,
                u_mod_p: Some(0),
                u_valuation_capped: Some(1),
                lp_unit: Some(false),
                verdict: "counterexample".into(),
            }],
            period_length: 14,
            elapsed_ms: 3,
        };
        let line = serde_json::to_string(&r).unwrap();
        // wire field names are pinned
        for field in ["\"d\":", "\"D\":", "\"delta\":", "\"primes\":", "\"p\":",
                      "\"u_mod_p\":", "\"lp_unit\":", "\"verdict\":",
                      "\"period_length\":", "\"elapsed_ms\":"] {
            assert!(line.contains(field), "missing {field} in {line}");
        }
        let back: ScanRecord = serde_json::from_str(&line).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn determinism_across_job_counts() {
        let out1 = temp_path("j1");
        let out8 = temp_path("j8");
        let c1 = ScanConfig {
            jobs: 1,
            ..ScanConfig::new(2, 600, out1.clone())
        };
        let c8 = ScanConfig {
            jobs: 8,
            ..ScanConfig::new(2, 600, out8.clone())
        };
        run_scan(&c1).unwrap();
        run_scan(&c8).unwrap();
        let r1 = normalized_sorted(read_records(&out1).unwrap());
        let r8 = normalized_sorted(read_records(&out8).unwrap());
        assert_eq!(r1, r8);
        std::fs::remove_file(&out1).ok();
        std::fs::remove_file(&out8).ok();
    }

    #[test]
    fn resume_after_truncation() {
        let full = temp_path("full");
        let cut = temp_path("cut");
        let cfg_full = ScanConfig {
            jobs: 2,
            ..ScanConfig::new(2, 800, full.clone())
        };
        run_scan(&cfg_full).unwrap();
        // simulate a kill: keep 60% of the bytes, tearing the final line
        let bytes = std::fs::read(&full).unwrap();
        let keep = bytes.len() * 6 / 10;
        std::fs::write(&cut, &bytes[..keep]).unwrap();
        let cfg_resume = ScanConfig {
            jobs: 2,
            resume: true,
            ..ScanConfig::new(2, 800, cut.clone())
        };
        run_scan(&cfg_resume).unwrap();
        let want = normalized_sorted(read_records(&full).unwrap());
        let got = normalized_sorted(read_records(&cut).unwrap());
        assert_eq!(want, got);
        std::fs::remove_file(&full).ok();
        std::fs::remove_file(&cut).ok();
    }

    #[test]
    fn prime_scan_modes_filter() {
        let out = temp_path("p1");
        let cfg = ScanConfig {
            mode: ScanMode::Primes1Mod4,
            jobs: 2,
            ..ScanConfig::new(2, 200, out.clone())
        };
        let summary = run_scan(&cfg).unwrap();
        assert_eq!(summary.counterexamples, 0);
        let records = read_records(&out).unwrap();
        for r in &records {
            assert!(crate::arith::is_prime(r.d) && r.d % 4 == 1, "d={}", r.d);
            assert_eq!(r.primes.len(), 1);
        }
        std::fs::remove_file(&out).ok();
    }
}
