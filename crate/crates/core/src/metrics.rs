//! Quality indicators: generational distance, spread and hypervolume, and
//! per-window reports built from run traces.

use std::cmp::Ordering;

use thiserror::Error;

use crate::benchmarks::{BenchmarkError, BenchmarkSpec};
use crate::optimizers::RunTrace;

/// Reference point for hypervolume. Every benchmark front lies in `[0,1]^2`.
pub const REFERENCE_POINT: [f64; 2] = [1.1, 1.1];

/// Samples of the analytic front used as the GD reference set.
pub const FRONT_RESOLUTION: usize = 500;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("approximation set is empty")]
    EmptyApproximation,
    #[error("reference set is empty")]
    EmptyReference,
    #[error("spread needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("hypervolume is only defined here for 2 objectives, got {0}")]
    NotBiObjective(usize),
    #[error("reference point {0:?} is degenerate")]
    DegenerateReference(Vec<f64>),
    #[error(transparent)]
    Benchmark(#[from] BenchmarkError),
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Root mean square of each approximation point's distance to its nearest
/// reference point.
pub fn gd<A: AsRef<[f64]>, B: AsRef<[f64]>>(approx: &[A], reference: &[B]) -> Result<f64, MetricError> {
    if approx.is_empty() {
        return Err(MetricError::EmptyApproximation);
    }
    if reference.is_empty() {
        return Err(MetricError::EmptyReference);
    }
    let sum_sq: f64 = approx
        .iter()
        .map(|p| {
            reference
                .iter()
                .map(|r| distance(p.as_ref(), r.as_ref()))
                .fold(f64::INFINITY, f64::min)
                .powi(2)
        })
        .sum();
    Ok((sum_sq / approx.len() as f64).sqrt())
}

/// Mean absolute deviation of the gaps between consecutive points, after
/// sorting by the first objective. The mean runs over the `n - 1` gaps.
pub fn spread<A: AsRef<[f64]>>(front: &[A]) -> Result<f64, MetricError> {
    if front.len() < 2 {
        return Err(MetricError::TooFewPoints(front.len()));
    }
    let mut sorted: Vec<&[f64]> = front.iter().map(AsRef::as_ref).collect();
    sorted.sort_by(|a, b| {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x.partial_cmp(y).unwrap_or(Ordering::Equal))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    });
    let gaps: Vec<f64> = sorted.windows(2).map(|w| distance(w[0], w[1])).collect();
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    Ok(gaps.iter().map(|d| (d - mean).abs()).sum::<f64>() / gaps.len() as f64)
}

/// Area dominated by `front` and bounded by `reference` (minimization).
/// Points that do not strictly dominate the reference are ignored.
pub fn hypervolume<A: AsRef<[f64]>>(front: &[A], reference: &[f64]) -> Result<f64, MetricError> {
    if reference.len() != 2 {
        return Err(MetricError::NotBiObjective(reference.len()));
    }
    if !reference.iter().all(|r| r.is_finite()) {
        return Err(MetricError::DegenerateReference(reference.to_vec()));
    }
    let mut inside = Vec::with_capacity(front.len());
    for p in front {
        let p = p.as_ref();
        if p.len() != 2 {
            return Err(MetricError::NotBiObjective(p.len()));
        }
        if p[0] < reference[0] && p[1] < reference[1] {
            inside.push((p[0], p[1]));
        }
    }
    inside.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap_or(Ordering::Equal)
            .then(a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
    });

    let mut volume = 0.0;
    let mut ceiling = reference[1];
    for (f1, f2) in inside {
        if f2 < ceiling {
            volume += (reference[0] - f1) * (ceiling - f2);
            ceiling = f2;
        }
    }
    Ok(volume)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowMetrics {
    pub window: u64,
    pub t: f64,
    pub gd: f64,
    /// NaN when the window holds fewer than two points.
    pub spread: f64,
    pub hv: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricReport {
    pub rows: Vec<WindowMetrics>,
}

fn nan_mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values
        .filter(|v| !v.is_nan())
        .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        sum / n as f64
    }
}

impl MetricReport {
    pub fn mean_gd(&self) -> f64 {
        nan_mean(self.rows.iter().map(|r| r.gd))
    }

    pub fn mean_spread(&self) -> f64 {
        nan_mean(self.rows.iter().map(|r| r.spread))
    }

    pub fn mean_hv(&self) -> f64 {
        nan_mean(self.rows.iter().map(|r| r.hv))
    }

    pub fn last(&self) -> Option<&WindowMetrics> {
        self.rows.last()
    }
}

/// One window's approximation, in objective space.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowFront {
    pub window: u64,
    pub t: f64,
    pub objectives: Vec<Vec<f64>>,
}

pub fn window_metrics(front: &WindowFront, spec: &BenchmarkSpec) -> Result<WindowMetrics, MetricError> {
    let ideal = spec.ideal_point();
    if REFERENCE_POINT.iter().zip(ideal).any(|(r, i)| *r <= i) {
        return Err(MetricError::DegenerateReference(REFERENCE_POINT.to_vec()));
    }
    let reference = spec.true_pof(front.t, FRONT_RESOLUTION)?;
    let gd_value = match gd(&front.objectives, &reference) {
        Ok(v) => v,
        Err(MetricError::EmptyApproximation) => f64::NAN,
        Err(e) => return Err(e),
    };
    Ok(WindowMetrics {
        window: front.window,
        t: front.t,
        gd: gd_value,
        spread: spread(&front.objectives).unwrap_or(f64::NAN),
        hv: hypervolume(&front.objectives, &REFERENCE_POINT)?,
    })
}

pub fn report_fronts(fronts: &[WindowFront], spec: &BenchmarkSpec) -> Result<MetricReport, MetricError> {
    let rows = fronts
        .iter()
        .map(|f| window_metrics(f, spec))
        .collect::<Result<_, _>>()?;
    Ok(MetricReport { rows })
}

/// Per-window metrics of a trace. Uses the snapshot objectives evaluated
/// at each window's time, so stale archives are scored by where their
/// members actually are.
pub fn report(trace: &RunTrace, spec: &BenchmarkSpec) -> Result<MetricReport, MetricError> {
    let fronts: Vec<WindowFront> = trace
        .windows
        .iter()
        .map(|w| WindowFront {
            window: w.window,
            t: w.t,
            objectives: w.objectives.clone(),
        })
        .collect();
    report_fronts(&fronts, spec)
}
