//! Time-parameterized problem abstraction and the iteration-to-time mapping.
//!
//! A dynamic problem is an ordinary box-constrained vector function whose
//! shape depends on a scalar time `t`. Optimizers never see `t` directly;
//! they advance an iteration counter and derive `t` from a [`TimeContext`].

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("severity must be at least 1")]
    ZeroSeverity,
    #[error("change frequency must be at least 1")]
    ZeroFrequency,
    #[error("expected {expected} decision variables, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("component {index} = {value} lies outside [{lower}, {upper}]")]
    OutOfBounds {
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
    #[error("position index {index} outside 1..={dimension}")]
    InvalidPositionIndex { index: usize, dimension: usize },
}

/// Severity, frequency and iteration counter of a run.
///
/// The derived time is `floor(iteration / frequency) / severity`. The window
/// index `floor(iteration / frequency)` is kept as an integer so boundaries
/// are exact; only the final division happens in floating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeContext {
    severity: u32,
    frequency: u32,
    iteration: u64,
}

impl TimeContext {
    pub fn new(severity: u32, frequency: u32, iteration: u64) -> Result<Self, ProblemError> {
        if severity == 0 {
            return Err(ProblemError::ZeroSeverity);
        }
        if frequency == 0 {
            return Err(ProblemError::ZeroFrequency);
        }
        Ok(Self {
            severity,
            frequency,
            iteration,
        })
    }

    pub fn severity(&self) -> u32 {
        self.severity
    }

    pub fn frequency(&self) -> u32 {
        self.frequency
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    /// Same severity and frequency, different iteration.
    pub fn at(&self, iteration: u64) -> Self {
        Self { iteration, ..*self }
    }

    /// Index of the environment window containing the current iteration.
    pub fn window(&self) -> u64 {
        self.iteration / u64::from(self.frequency)
    }

    pub fn time(&self) -> f64 {
        time_of_window(self.window(), self.severity)
    }

    /// True when this iteration opens a new environment window.
    pub fn is_boundary(&self) -> bool {
        self.iteration > 0 && self.iteration % u64::from(self.frequency) == 0
    }
}

/// `t = floor(iteration / frequency) / severity`.
pub fn compute_time(severity: u32, frequency: u32, iteration: u64) -> Result<f64, ProblemError> {
    TimeContext::new(severity, frequency, iteration).map(|ctx| ctx.time())
}

pub(crate) fn time_of_window(window: u64, severity: u32) -> f64 {
    window as f64 / f64::from(severity)
}

/// Per-dimension closed box `[lower[i], upper[i]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, ProblemError> {
        if lower.len() != upper.len() {
            return Err(ProblemError::InvalidBounds(format!(
                "{} lower vs {} upper bounds",
                lower.len(),
                upper.len()
            )));
        }
        if lower.is_empty() {
            return Err(ProblemError::InvalidBounds("zero dimensions".into()));
        }
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(ProblemError::InvalidBounds(format!(
                    "dimension {i}: [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// First variable in `[first.0, first.1]`, the remaining `dimension - 1`
    /// in `[rest.0, rest.1]`.
    pub fn split(dimension: usize, first: (f64, f64), rest: (f64, f64)) -> Result<Self, ProblemError> {
        let mut lower = vec![rest.0; dimension];
        let mut upper = vec![rest.1; dimension];
        if dimension > 0 {
            lower[0] = first.0;
            upper[0] = first.1;
        }
        Self::new(lower, upper)
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    pub fn check(&self, x: &[f64]) -> Result<(), ProblemError> {
        if x.len() != self.dimension() {
            return Err(ProblemError::DimensionMismatch {
                expected: self.dimension(),
                actual: x.len(),
            });
        }
        for (index, &value) in x.iter().enumerate() {
            let (lower, upper) = (self.lower[index], self.upper[index]);
            // NaN fails both comparisons
            if !(value >= lower && value <= upper) {
                return Err(ProblemError::OutOfBounds {
                    index,
                    value,
                    lower,
                    upper,
                });
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.check(x).is_ok()
    }

    pub fn clamp(&self, i: usize, value: f64) -> f64 {
        value.clamp(self.lower[i], self.upper[i])
    }
}

/// A box-constrained, time-dependent vector function to be minimized.
///
/// Implementations must be pure: the same `(x, t)` always yields the same
/// objective vector.
pub trait DynamicProblem: Send + Sync {
    fn name(&self) -> &str;

    fn bounds(&self) -> &Bounds;

    fn num_objectives(&self) -> usize {
        2
    }

    fn dimension(&self) -> usize {
        self.bounds().dimension()
    }

    /// Evaluates without validating `x`. Callers guarantee the bounds.
    fn evaluate_unchecked(&self, x: &[f64], t: f64) -> Vec<f64>;

    fn evaluate(&self, x: &[f64], t: f64) -> Result<Vec<f64>, ProblemError> {
        self.bounds().check(x)?;
        Ok(self.evaluate_unchecked(x, t))
    }
}

impl<P: DynamicProblem + ?Sized> DynamicProblem for Box<P> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn bounds(&self) -> &Bounds {
        (**self).bounds()
    }

    fn num_objectives(&self) -> usize {
        (**self).num_objectives()
    }

    fn evaluate_unchecked(&self, x: &[f64], t: f64) -> Vec<f64> {
        (**self).evaluate_unchecked(x, t)
    }
}

/// Wraps a problem and pins its time at a fixed value, turning it into a
/// static problem. Used as the negative control for change detection.
pub struct TimeFrozen<P> {
    inner: P,
    time: f64,
    name: String,
}

impl<P: DynamicProblem> TimeFrozen<P> {
    pub fn new(inner: P, time: f64) -> Self {
        let name = format!("{}-frozen", inner.name());
        Self { inner, time, name }
    }
}

impl<P: DynamicProblem> DynamicProblem for TimeFrozen<P> {
    fn name(&self) -> &str {
        &self.name
    }

    fn bounds(&self) -> &Bounds {
        self.inner.bounds()
    }

    fn num_objectives(&self) -> usize {
        self.inner.num_objectives()
    }

    fn evaluate_unchecked(&self, x: &[f64], _t: f64) -> Vec<f64> {
        self.inner.evaluate_unchecked(x, self.time)
    }
}
