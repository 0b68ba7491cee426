//! Text artifacts: per-run report and trace CSVs, front snapshots, HV
//! curves and the summary table.
//!
//! Floats are written with Rust's shortest round-trip formatting, so equal
//! values always produce equal bytes.

use std::cmp::Ordering;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::metrics::{MetricReport, WindowFront, WindowMetrics};
use crate::optimizers::RunTrace;

use super::summary::{Stats, SummaryTable};
use super::HarnessError;

pub const REPORT_HEADER: [&str; 5] = ["window", "t", "gd", "spread", "hv"];
pub const TRACE_HEADER: [&str; 4] = ["window", "t", "f1", "f2"];
pub const SUMMARY_HEADER: [&str; 9] = [
    "problem", "algorithm", "metric", "mean", "median", "sd", "min", "max", "best",
];
pub const HV_CURVE_HEADER: [&str; 6] = ["window", "t", "mean", "median", "min", "max"];

fn writer(path: &Path) -> Result<csv::Writer<File>, HarnessError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    Ok(csv::Writer::from_path(path)?)
}

fn check_header(reader: &mut csv::Reader<File>, expected: &[&str], path: &Path) -> Result<(), HarnessError> {
    let header = reader.headers()?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(HarnessError::Format(format!(
            "{}: expected header '{}'",
            path.display(),
            expected.join(",")
        )));
    }
    Ok(())
}

fn field<T: std::str::FromStr>(record: &csv::StringRecord, i: usize, path: &Path) -> Result<T, HarnessError> {
    record
        .get(i)
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| HarnessError::Format(format!("{}: bad field {i} in {record:?}", path.display())))
}

pub fn write_report(path: &Path, report: &MetricReport) -> Result<(), HarnessError> {
    let mut w = writer(path)?;
    w.write_record(REPORT_HEADER)?;
    for r in &report.rows {
        w.write_record([
            r.window.to_string(),
            r.t.to_string(),
            r.gd.to_string(),
            r.spread.to_string(),
            r.hv.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_report(path: &Path) -> Result<MetricReport, HarnessError> {
    let mut reader = csv::Reader::from_path(path)?;
    check_header(&mut reader, &REPORT_HEADER, path)?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        rows.push(WindowMetrics {
            window: field(&record, 0, path)?,
            t: field(&record, 1, path)?,
            gd: field(&record, 2, path)?,
            spread: field(&record, 3, path)?,
            hv: field(&record, 4, path)?,
        });
    }
    Ok(MetricReport { rows })
}

/// Window snapshots of a trace in objective space, one row per point.
pub fn write_trace(path: &Path, trace: &RunTrace) -> Result<(), HarnessError> {
    let mut w = writer(path)?;
    w.write_record(TRACE_HEADER)?;
    for snapshot in &trace.windows {
        for f in &snapshot.objectives {
            w.write_record([
                snapshot.window.to_string(),
                snapshot.t.to_string(),
                f[0].to_string(),
                f[1].to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_trace(path: &Path) -> Result<Vec<WindowFront>, HarnessError> {
    let mut reader = csv::Reader::from_path(path)?;
    check_header(&mut reader, &TRACE_HEADER, path)?;
    let mut fronts: Vec<WindowFront> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let window: u64 = field(&record, 0, path)?;
        let t: f64 = field(&record, 1, path)?;
        let point = vec![field(&record, 2, path)?, field(&record, 3, path)?];
        match fronts.last_mut() {
            Some(front) if front.window == window => front.objectives.push(point),
            _ => fronts.push(WindowFront {
                window,
                t,
                objectives: vec![point],
            }),
        }
    }
    Ok(fronts)
}

/// Writes window `window` of the trace as two whitespace-separated columns
/// `f1 f2`, sorted by `f1`.
pub fn emit_front_snapshot(trace: &RunTrace, window: usize, path: &Path) -> Result<(), HarnessError> {
    let snapshot = trace.windows.get(window).ok_or(HarnessError::InvalidWindow {
        window,
        available: trace.windows.len(),
    })?;
    let mut points = snapshot.objectives.clone();
    points.sort_by(|a, b| {
        a[0].partial_cmp(&b[0])
            .unwrap_or(Ordering::Equal)
            .then(a[1].partial_cmp(&b[1]).unwrap_or(Ordering::Equal))
    });
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut out = BufWriter::new(File::create(path)?);
    for p in points {
        writeln!(out, "{} {}", p[0], p[1])?;
    }
    out.flush()?;
    Ok(())
}

/// Per-window HV statistics across the runs of one cell.
pub fn write_hv_curve(path: &Path, reports: &[MetricReport]) -> Result<(), HarnessError> {
    let mut w = writer(path)?;
    w.write_record(HV_CURVE_HEADER)?;
    let windows = reports.iter().map(|r| r.rows.len()).max().unwrap_or(0);
    for k in 0..windows {
        let rows: Vec<&WindowMetrics> = reports.iter().filter_map(|r| r.rows.get(k)).collect();
        let values: Vec<f64> = rows.iter().map(|r| r.hv).collect();
        if let Some(s) = Stats::of(&values) {
            w.write_record([
                rows[0].window.to_string(),
                rows[0].t.to_string(),
                s.mean.to_string(),
                s.median.to_string(),
                s.min.to_string(),
                s.max.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary(path: &Path, table: &SummaryTable) -> Result<(), HarnessError> {
    let mut w = writer(path)?;
    w.write_record(SUMMARY_HEADER)?;
    for r in &table.rows {
        w.write_record([
            r.problem.clone(),
            r.algorithm.clone(),
            r.metric.to_string(),
            r.stats.mean.to_string(),
            r.stats.median.to_string(),
            r.stats.sd.to_string(),
            r.stats.min.to_string(),
            r.stats.max.to_string(),
            r.best.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
