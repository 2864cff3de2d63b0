use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

/// One (circuit, method, variant, seed) run. All metrics come from the
/// oracles, never from optimizer traces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub circuit: String,
    pub method: String,
    pub variant: String,
    pub seed: u64,
    pub iterations: usize,
    pub hpwl: f64,
    pub overlap: f64,
    /// HPWL after legalization; empty when legalization did not run.
    pub lhpwl: Option<f64>,
    pub legal: Option<bool>,
    /// Optimizer wall time; left out of deterministic output.
    pub time_s: Option<f64>,
}

impl RunReport {
    fn key(&self) -> (&str, &str, &str, u64) {
        (&self.circuit, &self.method, &self.variant, self.seed)
    }
}

/// Median over the seeds of one (circuit, method, variant).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub circuit: String,
    pub method: String,
    pub variant: String,
    pub runs: usize,
    pub hpwl: f64,
    pub overlap: f64,
    pub lhpwl: Option<f64>,
    pub legal_runs: usize,
    /// HPWL of the circuit's shipped placement, when one was available.
    pub reference_hpwl: Option<f64>,
    pub published_lhpwl: Option<f64>,
}

#[derive(Serialize)]
struct TimingRow<'a> {
    circuit: &'a str,
    method: &'a str,
    variant: &'a str,
    seed: u64,
    time_s: Option<f64>,
}

pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    Some(if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    })
}

/// Sort rows by circuit order of first appearance in `circuits`, then
/// method, variant and seed.
pub fn sort_reports(reports: &mut [RunReport], circuits: &[String]) {
    let rank = |c: &str| circuits.iter().position(|x| x == c).unwrap_or(usize::MAX);
    reports.sort_by(|a, b| {
        rank(&a.circuit)
            .cmp(&rank(&b.circuit))
            .then_with(|| a.key().cmp(&b.key()))
    });
}

/// Group consecutive rows (as sorted by [`sort_reports`]) and take medians.
pub fn summarize(
    reports: &[RunReport],
    reference: impl Fn(&str) -> Option<f64>,
    published: impl Fn(&str, &str) -> Option<f64>,
) -> Vec<SummaryRow> {
    let mut out: Vec<SummaryRow> = Vec::new();
    let mut start = 0;
    while start < reports.len() {
        let head = &reports[start];
        let end = reports[start..]
            .iter()
            .position(|r| (&r.circuit, &r.method, &r.variant) != (&head.circuit, &head.method, &head.variant))
            .map_or(reports.len(), |k| start + k);
        let group = &reports[start..end];
        let mut hp: Vec<f64> = group.iter().map(|r| r.hpwl).collect();
        let mut ov: Vec<f64> = group.iter().map(|r| r.overlap).collect();
        let mut lh: Vec<f64> = group.iter().filter_map(|r| r.lhpwl).collect();
        out.push(SummaryRow {
            circuit: head.circuit.clone(),
            method: head.method.clone(),
            variant: head.variant.clone(),
            runs: group.len(),
            hpwl: median(&mut hp).unwrap_or(f64::NAN),
            overlap: median(&mut ov).unwrap_or(f64::NAN),
            lhpwl: median(&mut lh),
            legal_runs: group.iter().filter(|r| r.legal == Some(true)).count(),
            reference_hpwl: reference(&head.circuit),
            published_lhpwl: if head.variant == crate::bench::Variant::Original.label() {
                published(&head.circuit, &head.method)
            } else {
                None
            },
        });
        start = end;
    }
    out
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    csv::Writer::from_path(path).with_context(|| format!("opening {} for writing", path.display()))
}

/// Write per-run rows. With `with_time = false` the time column is left
/// empty so the file is reproducible byte for byte.
pub fn write_reports(path: &Path, reports: &[RunReport], with_time: bool) -> Result<()> {
    let mut w = writer(path)?;
    for r in reports {
        if with_time {
            w.serialize(r)?;
        } else {
            w.serialize(RunReport { time_s: None, ..r.clone() })?;
        }
    }
    w.flush().with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn write_timings(path: &Path, reports: &[RunReport]) -> Result<()> {
    let mut w = writer(path)?;
    for r in reports {
        w.serialize(TimingRow {
            circuit: &r.circuit,
            method: &r.method,
            variant: &r.variant,
            seed: r.seed,
            time_s: r.time_s,
        })?;
    }
    w.flush().with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn write_summary(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    let mut w = writer(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn read_reports(path: &Path) -> Result<Vec<RunReport>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    r.deserialize()
        .collect::<Result<Vec<RunReport>, _>>()
        .with_context(|| format!("parsing {}", path.display()))
}

/// `results.csv` → `results.<tag>.csv`.
pub fn sibling(path: &Path, tag: &str) -> std::path::PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("results");
    path.with_file_name(format!("{stem}.{tag}.csv"))
}
