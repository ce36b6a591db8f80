//! Campaign driver: collect trees, run checks in parallel, write one record
//! per isomorphism class in canonical-code order.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use harmtree_core::treegen::enumerate_codes;
use harmtree_core::{CanonicalCode, Error as CoreError};
use rayon::prelude::*;
use tracing::info;

use crate::cache::Cache;
use crate::checks::{compute_record, CampaignRecord, CheckSet};
use crate::config::{CampaignConfig, Format, TreeSource};
use crate::error::CliError;

#[derive(Debug, Clone)]
pub struct CampaignReport {
    pub records: Vec<CampaignRecord>,
    pub checks: CheckSet,
    pub cache_hits: usize,
    pub elapsed_ms: u64,
}

impl CampaignReport {
    /// Records failing at least one check, with the failing check names.
    pub fn failures(&self) -> Vec<(&CampaignRecord, Vec<&'static str>)> {
        self.records
            .iter()
            .map(|r| (r, r.failures(&self.checks)))
            .filter(|(_, f)| !f.is_empty())
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn summary(&self) -> String {
        let failed = self.failures().len();
        format!(
            "campaign: {} records, {} pass, {} fail, {} cache hits, checks {}",
            self.records.len(),
            self.records.len() - failed,
            failed,
            self.cache_hits,
            self.checks
        )
    }
}

/// Trees named by the config, deduplicated and sorted by `(n, levels)`.
pub fn collect_codes(cfg: &CampaignConfig) -> Result<Vec<CanonicalCode>, CliError> {
    let mut codes: BTreeMap<(usize, Vec<u32>), CanonicalCode> = BTreeMap::new();
    let mut add = |c: CanonicalCode| {
        codes.insert((c.n(), c.levels().to_vec()), c);
    };
    match &cfg.trees {
        TreeSource::Enumerate => {
            let range = cfg.n.as_ref().ok_or_else(|| CliError::Usage("--n is required".into()))?;
            for &n in range.values() {
                enumerate_codes(n)?.into_iter().for_each(&mut add);
            }
        }
        TreeSource::File(path) => {
            for c in read_tree_file(path)? {
                if cfg.n.as_ref().is_none_or(|r| r.contains(c.n())) {
                    add(c);
                }
            }
        }
    }
    Ok(codes.into_values().collect())
}

/// Parse a file of canonical codes, reporting the line and column of the
/// first malformed entry.
pub fn read_tree_file(path: &Path) -> Result<Vec<CanonicalCode>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        let body = line.trim_start();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let indent = line.len() - body.len();
        let body = body.trim_end();
        match body.parse::<CanonicalCode>() {
            Ok(c) => out.push(c),
            Err(CoreError::Parse { column, message }) => {
                return Err(CliError::TreeFile {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    column: column + indent,
                    message,
                })
            }
            Err(e) => {
                return Err(CliError::TreeFile {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    column: indent + 1,
                    message: e.to_string(),
                })
            }
        }
    }
    Ok(out)
}

/// Run a campaign. When `cfg.out` is set the report is also written there.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport, CliError> {
    let start = Instant::now();
    let codes = collect_codes(cfg)?;
    for code in &codes {
        for check in cfg.checks.iter() {
            if code.n() > check.cap() {
                return Err(CliError::CheckCap {
                    check: check.name(),
                    n: code.n(),
                    cap: check.cap(),
                });
            }
        }
    }
    let check_id = cfg.checks.id(cfg.seed);
    let cache = cfg.cache_dir.as_ref().map(Cache::new);
    info!(trees = codes.len(), checks = %cfg.checks, jobs = cfg.jobs, "campaign start");

    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build()?;
    let results: Vec<Result<(CampaignRecord, bool), CliError>> = pool.install(|| {
        codes
            .par_iter()
            .map(|code| {
                let t0 = Instant::now();
                let hit = cache.as_ref().and_then(|c| c.lookup(code, &check_id));
                let from_cache = hit.is_some();
                let mut rec = match hit {
                    Some(r) => r,
                    None => {
                        let r = compute_record(code, &cfg.checks, cfg.seed)?;
                        if let Some(c) = &cache {
                            c.store(code, &check_id, &r)?;
                        }
                        r
                    }
                };
                if cfg.timings {
                    rec.elapsed_ms = Some(t0.elapsed().as_millis() as u64);
                }
                Ok((rec, from_cache))
            })
            .collect()
    });

    let mut records = Vec::with_capacity(results.len());
    let mut cache_hits = 0;
    for r in results {
        let (rec, hit) = r?;
        cache_hits += usize::from(hit);
        records.push(rec);
    }
    let report = CampaignReport {
        records,
        checks: cfg.checks.clone(),
        cache_hits,
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    if let Some(out) = &cfg.out {
        write_report_file(&report, cfg.format, out)?;
    }
    Ok(report)
}

/// Serialize records in report order. JSON-lines is one compact object per
/// line; CSV uses the same field order with a header row.
pub fn write_report(report: &CampaignReport, format: Format, mut w: impl Write) -> Result<(), CliError> {
    match format {
        Format::Jsonl => {
            for r in &report.records {
                serde_json::to_writer(&mut w, r)?;
                w.write_all(b"\n").map_err(|e| CliError::io("writing report", e))?;
            }
        }
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            for r in &report.records {
                csv.serialize(r)?;
            }
            csv.flush().map_err(|e| CliError::io("writing report", e))?;
        }
    }
    Ok(())
}

fn write_report_file(report: &CampaignReport, format: Format, out: &Path) -> Result<(), CliError> {
    let dir = match out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let ctx = |e| CliError::io(format!("writing {}", out.display()), e);
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(ctx)?;
    write_report(report, format, &mut tmp)?;
    tmp.persist(out).map_err(|e| ctx(e.error))?;
    Ok(())
}
