use std::collections::BTreeMap;
use std::fmt;

use log::warn;

/// Run-level metric values (means over the run's windows).
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub problem: String,
    pub algorithm: String,
    pub run: u32,
    pub gd: f64,
    pub spread: f64,
    pub hv: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Gd,
    Spread,
    Hv,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Gd, Metric::Spread, Metric::Hv];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Gd => "gd",
            Metric::Spread => "spread",
            Metric::Hv => "hv",
        }
    }

    pub fn higher_is_better(self) -> bool {
        matches!(self, Metric::Hv)
    }

    fn of(self, run: &RunSummary) -> f64 {
        match self {
            Metric::Gd => run.gd,
            Metric::Spread => run.spread,
            Metric::Hv => run.hv,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation; 0 for a single value.
    pub sd: f64,
    pub min: f64,
    pub max: f64,
}

impl Stats {
    /// NaN values are dropped. `None` if nothing is left.
    pub fn of(values: &[f64]) -> Option<Self> {
        let mut v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let mean = v.iter().sum::<f64>() / n as f64;
        let median = if n % 2 == 1 {
            v[n / 2]
        } else {
            0.5 * (v[n / 2 - 1] + v[n / 2])
        };
        let sd = if n > 1 {
            (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Some(Self {
            mean,
            median,
            sd,
            min: v[0],
            max: v[n - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub problem: String,
    pub algorithm: String,
    pub metric: Metric,
    pub stats: Stats,
    pub best: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SummaryTable {
    pub rows: Vec<SummaryRow>,
}

impl SummaryTable {
    pub fn get(&self, problem: &str, algorithm: &str, metric: Metric) -> Option<&SummaryRow> {
        self.rows
            .iter()
            .find(|r| r.problem == problem && r.algorithm == algorithm && r.metric == metric)
    }
}

/// Aggregates run summaries per (problem, algorithm, metric) and flags the
/// best mean per (problem, metric). Rows are ordered by problem, algorithm
/// and metric.
pub fn summarize(runs: &[RunSummary]) -> SummaryTable {
    let mut cells: BTreeMap<(&str, &str), Vec<&RunSummary>> = BTreeMap::new();
    for run in runs {
        cells
            .entry((run.problem.as_str(), run.algorithm.as_str()))
            .or_default()
            .push(run);
    }

    let mut rows = Vec::new();
    for ((problem, algorithm), cell) in &cells {
        for metric in Metric::ALL {
            let values: Vec<f64> = cell.iter().map(|r| metric.of(r)).collect();
            match Stats::of(&values) {
                Some(stats) => rows.push(SummaryRow {
                    problem: problem.to_string(),
                    algorithm: algorithm.to_string(),
                    metric,
                    stats,
                    best: false,
                }),
                None => warn!("no finite {metric} values for {problem}/{algorithm}; row omitted"),
            }
        }
    }

    let mut best: BTreeMap<(String, Metric), f64> = BTreeMap::new();
    for row in &rows {
        let key = (row.problem.clone(), row.metric);
        let candidate = row.stats.mean;
        best.entry(key)
            .and_modify(|b| {
                let better = if row.metric.higher_is_better() {
                    candidate > *b
                } else {
                    candidate < *b
                };
                if better {
                    *b = candidate;
                }
            })
            .or_insert(candidate);
    }
    for row in &mut rows {
        row.best = best[&(row.problem.clone(), row.metric)] == row.stats.mean;
    }
    SummaryTable { rows }
}
