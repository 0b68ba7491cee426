//! Type-I dynamic benchmarks: FDA1, DIMP2 and dMOP3.
//!
//! All three share the structure
//!
//! ```text
//! f1 = x_p                      (p = position variable)
//! f2 = g * (1 - sqrt(f1 / g))
//! ```
//!
//! where `g >= 1` is a distance term over the remaining variables that
//! reaches exactly 1 on the time-dependent optimal set. At `g = 1` the front
//! is `f2 = 1 - sqrt(f1)` for every `t`, so the optimal set moves while the
//! optimal front stays put.
//!
//! * FDA1: `p = 1`, `G(t) = sin(0.5 pi t)`, `g = 1 + sum_{i>=2} (x_i - G)^2`.
//!   Bounds `x1 in [0,1]`, others in `[-1,1]`.
//! * DIMP2: `p = 1`, per-variable targets
//!   `G_i(t) = sin(0.5 pi t + 2 pi i / (n + 1))^2`, and
//!   `g = 1 + 2(n-1) + sum_{i>=2} [(x_i - G_i)^2 - 2 cos(3 pi (x_i - G_i))]`.
//!   Each bracket is `d^2 + 2(1 - cos 3 pi d) - 2 >= -2` with equality only
//!   at `d = 0`, so `g >= 1` with equality exactly at `x_i = G_i`.
//!   Bounds `x1 in [0,1]`, others in `[-2,2]`.
//! * dMOP3: `p = r`, a variable index redrawn at every environment window,
//!   `G(t) = sin(0.5 pi t)`, `g = 1 + sum_{i != r} (x_i - G)^2`. All
//!   variables in `[0,1]`. `r` is a pure function of `(seed, window)` so
//!   evaluation stays deterministic.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::problem::{Bounds, DynamicProblem, ProblemError};
use crate::seed::mix64;

pub const DEFAULT_DIMENSION: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BenchmarkError {
    #[error("unknown benchmark '{0}' (expected fda1, dimp2 or dmop3)")]
    Unknown(String),
    #[error("true front resolution must be at least 2, got {0}")]
    Resolution(usize),
    #[error("benchmarks need at least 2 decision variables, got {0}")]
    Dimension(usize),
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BenchmarkId {
    Fda1,
    Dimp2,
    Dmop3,
}

impl BenchmarkId {
    pub const ALL: [BenchmarkId; 3] = [BenchmarkId::Fda1, BenchmarkId::Dimp2, BenchmarkId::Dmop3];

    pub fn as_str(self) -> &'static str {
        match self {
            BenchmarkId::Fda1 => "fda1",
            BenchmarkId::Dimp2 => "dimp2",
            BenchmarkId::Dmop3 => "dmop3",
        }
    }
}

impl fmt::Display for BenchmarkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BenchmarkId {
    type Err = BenchmarkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fda1" => Ok(BenchmarkId::Fda1),
            "dimp2" => Ok(BenchmarkId::Dimp2),
            "dmop3" => Ok(BenchmarkId::Dmop3),
            _ => Err(BenchmarkError::Unknown(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchmarkSpec {
    pub id: BenchmarkId,
    pub dimension: usize,
}

impl BenchmarkSpec {
    pub fn new(id: BenchmarkId) -> Self {
        Self {
            id,
            dimension: DEFAULT_DIMENSION,
        }
    }

    pub fn with_dimension(id: BenchmarkId, dimension: usize) -> Self {
        Self { id, dimension }
    }

    pub fn bounds(&self) -> Result<Bounds, BenchmarkError> {
        if self.dimension < 2 {
            return Err(BenchmarkError::Dimension(self.dimension));
        }
        let bounds = match self.id {
            BenchmarkId::Fda1 => Bounds::split(self.dimension, (0.0, 1.0), (-1.0, 1.0)),
            BenchmarkId::Dimp2 => Bounds::split(self.dimension, (0.0, 1.0), (-2.0, 2.0)),
            BenchmarkId::Dmop3 => Bounds::split(self.dimension, (0.0, 1.0), (0.0, 1.0)),
        };
        Ok(bounds?)
    }

    /// Builds an evaluator. `severity` and `seed` only matter for dMOP3,
    /// whose position variable is keyed by environment window.
    pub fn build(&self, severity: u32, seed: u64) -> Result<Benchmark, BenchmarkError> {
        Ok(match self.id {
            BenchmarkId::Fda1 => Benchmark::Fda1(Fda1::new(self.dimension)?),
            BenchmarkId::Dimp2 => Benchmark::Dimp2(Dimp2::new(self.dimension)?),
            BenchmarkId::Dmop3 => Benchmark::Dmop3(Dmop3::new(self.dimension, severity, seed)?),
        })
    }

    /// Evenly spaced samples of the shared front `f2 = 1 - sqrt(f1)`. The
    /// front is the same at every `t`.
    pub fn true_pof(&self, _t: f64, resolution: usize) -> Result<Vec<Vec<f64>>, BenchmarkError> {
        true_front(resolution)
    }

    /// Objective-wise lower bound of every feasible point.
    pub fn ideal_point(&self) -> [f64; 2] {
        [0.0, 0.0]
    }
}

pub fn true_front(resolution: usize) -> Result<Vec<Vec<f64>>, BenchmarkError> {
    if resolution < 2 {
        return Err(BenchmarkError::Resolution(resolution));
    }
    let last = (resolution - 1) as f64;
    Ok((0..resolution)
        .map(|k| {
            let f1 = k as f64 / last;
            vec![f1, 1.0 - f1.sqrt()]
        })
        .collect())
}

fn objectives(f1: f64, g: f64) -> Vec<f64> {
    vec![f1, g * (1.0 - (f1 / g).sqrt())]
}

/// `G(t) = sin(0.5 pi t)`, the optimal value of every distance variable in
/// FDA1 and dMOP3.
pub fn fda1_g_target(t: f64) -> f64 {
    (0.5 * PI * t).sin()
}

/// Optimal value of variable `i` (1-based, `2 <= i <= n`) in DIMP2.
pub fn dimp2_target(i: usize, n: usize, t: f64) -> f64 {
    (0.5 * PI * t + 2.0 * PI * i as f64 / (n as f64 + 1.0)).sin().powi(2)
}

pub fn fda1_g(x: &[f64], t: f64) -> f64 {
    let target = fda1_g_target(t);
    1.0 + x[1..].iter().map(|&xi| (xi - target).powi(2)).sum::<f64>()
}

pub fn dimp2_g(x: &[f64], t: f64) -> f64 {
    let n = x.len();
    let penalty: f64 = x[1..]
        .iter()
        .enumerate()
        .map(|(k, &xi)| {
            let d = xi - dimp2_target(k + 2, n, t);
            d * d - 2.0 * (3.0 * PI * d).cos()
        })
        .sum();
    1.0 + 2.0 * (n as f64 - 1.0) + penalty
}

/// `r` is the 1-based position variable.
pub fn dmop3_g(x: &[f64], t: f64, r: usize) -> f64 {
    let target = fda1_g_target(t);
    1.0 + x
        .iter()
        .enumerate()
        .filter(|&(i, _)| i + 1 != r)
        .map(|(_, &xi)| (xi - target).powi(2))
        .sum::<f64>()
}

pub fn fda1_evaluate(x: &[f64], t: f64) -> Result<Vec<f64>, BenchmarkError> {
    BenchmarkSpec::with_dimension(BenchmarkId::Fda1, x.len()).bounds()?.check(x)?;
    Ok(objectives(x[0], fda1_g(x, t)))
}

pub fn dimp2_evaluate(x: &[f64], t: f64) -> Result<Vec<f64>, BenchmarkError> {
    BenchmarkSpec::with_dimension(BenchmarkId::Dimp2, x.len()).bounds()?.check(x)?;
    Ok(objectives(x[0], dimp2_g(x, t)))
}

pub fn dmop3_evaluate(x: &[f64], t: f64, r: usize) -> Result<Vec<f64>, BenchmarkError> {
    BenchmarkSpec::with_dimension(BenchmarkId::Dmop3, x.len()).bounds()?.check(x)?;
    if r == 0 || r > x.len() {
        return Err(ProblemError::InvalidPositionIndex {
            index: r,
            dimension: x.len(),
        }
        .into());
    }
    Ok(objectives(x[r - 1], dmop3_g(x, t, r)))
}

#[derive(Debug, Clone)]
pub struct Fda1 {
    bounds: Bounds,
}

impl Fda1 {
    pub fn new(dimension: usize) -> Result<Self, BenchmarkError> {
        Ok(Self {
            bounds: BenchmarkSpec::with_dimension(BenchmarkId::Fda1, dimension).bounds()?,
        })
    }
}

impl DynamicProblem for Fda1 {
    fn name(&self) -> &str {
        "fda1"
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate_unchecked(&self, x: &[f64], t: f64) -> Vec<f64> {
        objectives(x[0], fda1_g(x, t))
    }
}

#[derive(Debug, Clone)]
pub struct Dimp2 {
    bounds: Bounds,
}

impl Dimp2 {
    pub fn new(dimension: usize) -> Result<Self, BenchmarkError> {
        Ok(Self {
            bounds: BenchmarkSpec::with_dimension(BenchmarkId::Dimp2, dimension).bounds()?,
        })
    }
}

impl DynamicProblem for Dimp2 {
    fn name(&self) -> &str {
        "dimp2"
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate_unchecked(&self, x: &[f64], t: f64) -> Vec<f64> {
        objectives(x[0], dimp2_g(x, t))
    }
}

#[derive(Debug, Clone)]
pub struct Dmop3 {
    bounds: Bounds,
    severity: u32,
    seed: u64,
}

impl Dmop3 {
    pub fn new(dimension: usize, severity: u32, seed: u64) -> Result<Self, BenchmarkError> {
        if severity == 0 {
            return Err(ProblemError::ZeroSeverity.into());
        }
        Ok(Self {
            bounds: BenchmarkSpec::with_dimension(BenchmarkId::Dmop3, dimension).bounds()?,
            severity,
            seed,
        })
    }

    /// 1-based position variable in force at time `t`.
    pub fn position_index(&self, t: f64) -> usize {
        let window = (t * f64::from(self.severity)).round().max(0.0) as u64;
        let n = self.bounds.dimension() as u64;
        1 + (mix64(self.seed ^ 0xd40b_3e9f_1c2a_5b77, window) % n) as usize
    }
}

impl DynamicProblem for Dmop3 {
    fn name(&self) -> &str {
        "dmop3"
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate_unchecked(&self, x: &[f64], t: f64) -> Vec<f64> {
        let r = self.position_index(t);
        objectives(x[r - 1], dmop3_g(x, t, r))
    }
}

#[derive(Debug, Clone)]
pub enum Benchmark {
    Fda1(Fda1),
    Dimp2(Dimp2),
    Dmop3(Dmop3),
}

impl Benchmark {
    pub fn id(&self) -> BenchmarkId {
        match self {
            Benchmark::Fda1(_) => BenchmarkId::Fda1,
            Benchmark::Dimp2(_) => BenchmarkId::Dimp2,
            Benchmark::Dmop3(_) => BenchmarkId::Dmop3,
        }
    }

    /// 0-based index of the variable that becomes `f1` at time `t`.
    pub fn position_variable(&self, t: f64) -> usize {
        match self {
            Benchmark::Dmop3(p) => p.position_index(t) - 1,
            _ => 0,
        }
    }

    /// The distance term `g(x, t) >= 1`.
    pub fn distance_term(&self, x: &[f64], t: f64) -> f64 {
        match self {
            Benchmark::Fda1(_) => fda1_g(x, t),
            Benchmark::Dimp2(_) => dimp2_g(x, t),
            Benchmark::Dmop3(p) => dmop3_g(x, t, p.position_index(t)),
        }
    }
}

impl DynamicProblem for Benchmark {
    fn name(&self) -> &str {
        self.id().as_str()
    }

    fn bounds(&self) -> &Bounds {
        match self {
            Benchmark::Fda1(p) => p.bounds(),
            Benchmark::Dimp2(p) => p.bounds(),
            Benchmark::Dmop3(p) => p.bounds(),
        }
    }

    fn evaluate_unchecked(&self, x: &[f64], t: f64) -> Vec<f64> {
        match self {
            Benchmark::Fda1(p) => p.evaluate_unchecked(x, t),
            Benchmark::Dimp2(p) => p.evaluate_unchecked(x, t),
            Benchmark::Dmop3(p) => p.evaluate_unchecked(x, t),
        }
    }
}
