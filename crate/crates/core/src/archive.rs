//! Bounded external archive of mutually non-dominated solutions.
//!
//! Besides feeding leaders to the swarm, the archive is the change detector
//! of the dynamic optimizer: re-evaluating its members at a new time and
//! comparing against the stored objectives reveals whether the landscape
//! moved.

use crate::dominance::{crowding_distance, dominates, non_dominated_set};
use crate::problem::DynamicProblem;

/// Objective differences at or below this absolute value per component are
/// not counted as a change.
pub const CHANGE_TOLERANCE: f64 = 1e-12;

pub const DEFAULT_CAPACITY: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveEntry {
    pub x: Vec<f64>,
    pub f: Vec<f64>,
    /// Time at which `f` was computed.
    pub eval_time: f64,
}

impl ArchiveEntry {
    pub fn new(x: Vec<f64>, f: Vec<f64>, eval_time: f64) -> Self {
        Self { x, f, eval_time }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertOutcome {
    /// Dominated by an existing entry, or an exact copy of one.
    Rejected,
    Inserted { removed: usize, evicted: bool },
}

impl InsertOutcome {
    pub fn accepted(self) -> bool {
        matches!(self, InsertOutcome::Inserted { .. })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Reevaluation {
    /// Entries whose objectives moved by more than [`CHANGE_TOLERANCE`].
    pub changed: usize,
    /// Entries whose new objectives are dominated by their old ones.
    pub degraded: usize,
    /// Entries dropped afterwards because another entry now dominates them.
    pub pruned: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Archive {
    entries: Vec<ArchiveEntry>,
    capacity: usize,
}

impl Archive {
    /// Panics on zero capacity.
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "archive capacity must be positive");
        Self {
            entries: Vec::with_capacity(capacity + 1),
            capacity,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[ArchiveEntry] {
        &self.entries
    }

    /// Objective vectors of all entries, in storage order.
    pub fn pof_image(&self) -> Vec<Vec<f64>> {
        self.entries.iter().map(|e| e.f.clone()).collect()
    }

    pub fn crowding(&self) -> Vec<f64> {
        let fs: Vec<&[f64]> = self.entries.iter().map(|e| e.f.as_slice()).collect();
        crowding_distance(&fs)
    }

    pub fn insert(&mut self, candidate: ArchiveEntry) -> InsertOutcome {
        if self
            .entries
            .iter()
            .any(|e| dominates(&e.f, &candidate.f) || (e.f == candidate.f && e.x == candidate.x))
        {
            return InsertOutcome::Rejected;
        }
        let before = self.entries.len();
        self.entries.retain(|e| !dominates(&candidate.f, &e.f));
        let removed = before - self.entries.len();
        self.entries.push(candidate);

        let evicted = self.entries.len() > self.capacity;
        self.truncate();
        InsertOutcome::Inserted { removed, evicted }
    }

    /// Evicts minimal-crowding entries one at a time until the capacity
    /// bound holds. Ties go to the lowest index.
    fn truncate(&mut self) {
        while self.entries.len() > self.capacity {
            let crowding = self.crowding();
            let mut victim = 0;
            for (i, &d) in crowding.iter().enumerate() {
                if d < crowding[victim] {
                    victim = i;
                }
            }
            self.entries.remove(victim);
        }
    }

    /// Recomputes every entry at time `t`, counts changed and degraded
    /// entries, then drops the entries that became dominated.
    pub fn reevaluate<P: DynamicProblem + ?Sized>(&mut self, problem: &P, t: f64) -> Reevaluation {
        let mut summary = Reevaluation::default();
        for entry in &mut self.entries {
            let fresh = problem.evaluate_unchecked(&entry.x, t);
            let moved = fresh
                .iter()
                .zip(&entry.f)
                .any(|(a, b)| (a - b).abs() > CHANGE_TOLERANCE);
            if moved {
                summary.changed += 1;
                if dominates(&entry.f, &fresh) {
                    summary.degraded += 1;
                }
            }
            entry.f = fresh;
            entry.eval_time = t;
        }
        summary.pruned = self.prune_dominated();
        summary
    }

    fn prune_dominated(&mut self) -> usize {
        let keep = non_dominated_set(&self.pof_image());
        let before = self.entries.len();
        if keep.len() < before {
            let mut keep = keep.into_iter().peekable();
            let mut index = 0;
            self.entries.retain(|_| {
                let kept = keep.peek() == Some(&index);
                if kept {
                    keep.next();
                }
                index += 1;
                kept
            });
        }
        before - self.entries.len()
    }

    /// Number of entries whose stored objectives disagree with a fresh
    /// evaluation at `t`. Does not modify the archive.
    pub fn count_stale<P: DynamicProblem + ?Sized>(&self, problem: &P, t: f64) -> usize {
        self.entries
            .iter()
            .filter(|e| {
                problem
                    .evaluate_unchecked(&e.x, t)
                    .iter()
                    .zip(&e.f)
                    .any(|(a, b)| (a - b).abs() > CHANGE_TOLERANCE)
            })
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{fda1_g_target, Fda1};
    use crate::problem::Bounds;
    use proptest::prelude::*;

    fn entry(f: &[f64]) -> ArchiveEntry {
        ArchiveEntry::new(f.to_vec(), f.to_vec(), 0.0)
    }

    fn is_mutually_non_dominated(a: &Archive) -> bool {
        let fs = a.pof_image();
        fs.iter()
            .all(|p| fs.iter().all(|q| !dominates(p, q)))
    }

    /// Objectives equal the decision vector, independent of time.
    struct Identity(Bounds);

    impl DynamicProblem for Identity {
        fn name(&self) -> &str {
            "identity"
        }
        fn bounds(&self) -> &Bounds {
            &self.0
        }
        fn evaluate_unchecked(&self, x: &[f64], _t: f64) -> Vec<f64> {
            x.to_vec()
        }
    }

    #[test]
    fn pof_image_examples() {
        let mut a = Archive::new(10);
        assert!(a.pof_image().is_empty());
        a.insert(entry(&[0.25, 0.5]));
        assert_eq!(a.pof_image(), vec![vec![0.25, 0.5]]);
    }

    #[test]
    fn pof_image_of_fda1_optima_lies_on_front() {
        let p = Fda1::new(10).unwrap();
        let mut a = Archive::new(100);
        let g = fda1_g_target(0.0);
        for k in 0..=20 {
            let mut x = vec![g; 10];
            x[0] = k as f64 / 20.0;
            let f = p.evaluate(&x, 0.0).unwrap();
            a.insert(ArchiveEntry::new(x, f, 0.0));
        }
        assert_eq!(a.len(), 21);
        for f in a.pof_image() {
            assert!((f[1] - (1.0 - f[0].sqrt())).abs() < 1e-9);
        }
    }

    #[test]
    fn dominated_candidate_is_rejected() {
        let mut a = Archive::new(10);
        a.insert(entry(&[1.0, 1.0]));
        assert_eq!(a.insert(entry(&[2.0, 2.0])), InsertOutcome::Rejected);
        assert_eq!(a.pof_image(), vec![vec![1.0, 1.0]]);
    }

    #[test]
    fn dominating_candidate_replaces_all() {
        let mut a = Archive::new(10);
        a.insert(entry(&[1.0, 1.0]));
        a.insert(entry(&[2.0, 0.5]));
        let outcome = a.insert(entry(&[0.0, 0.0]));
        assert_eq!(
            outcome,
            InsertOutcome::Inserted {
                removed: 2,
                evicted: false
            }
        );
        assert_eq!(a.pof_image(), vec![vec![0.0, 0.0]]);
    }

    #[test]
    fn overflow_evicts_minimal_crowding_interior_point() {
        // front (0,4) (1,2.9) (2,1) (4,0) with capacity 3.
        // Interior crowding:
        //   (1,2.9): (2-0)/4 + (4-1)/4 = 0.5 + 0.75 = 1.25
        //   (2,1):   (4-1)/4 + (2.9-0)/4 = 0.75 + 0.725 = 1.475
        let mut a = Archive::new(3);
        a.insert(entry(&[0.0, 4.0]));
        a.insert(entry(&[2.0, 1.0]));
        a.insert(entry(&[4.0, 0.0]));
        let outcome = a.insert(entry(&[1.0, 2.9]));
        assert_eq!(
            outcome,
            InsertOutcome::Inserted {
                removed: 0,
                evicted: true
            }
        );
        assert_eq!(a.len(), 3);
        assert_eq!(
            a.pof_image(),
            vec![vec![0.0, 4.0], vec![2.0, 1.0], vec![4.0, 0.0]]
        );
    }

    #[test]
    fn eviction_tie_goes_to_lowest_index() {
        // evenly spaced: both interior points have crowding 1.0
        let mut a = Archive::new(3);
        a.insert(entry(&[0.0, 3.0]));
        a.insert(entry(&[1.0, 2.0]));
        a.insert(entry(&[3.0, 0.0]));
        a.insert(entry(&[2.0, 1.0]));
        assert_eq!(
            a.pof_image(),
            vec![vec![0.0, 3.0], vec![3.0, 0.0], vec![2.0, 1.0]]
        );
    }

    #[test]
    fn duplicate_objectives_with_distinct_x_are_kept() {
        let mut a = Archive::new(10);
        a.insert(ArchiveEntry::new(vec![0.0], vec![1.0, 1.0], 0.0));
        assert!(a.insert(ArchiveEntry::new(vec![1.0], vec![1.0, 1.0], 0.0)).accepted());
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn reevaluate_static_problem_is_identity() {
        let p = Identity(Bounds::new(vec![0.0; 2], vec![1.0; 2]).unwrap());
        let mut a = Archive::new(10);
        for f in [[0.1, 0.9], [0.5, 0.5], [0.9, 0.1]] {
            a.insert(entry(&f));
        }
        let before = a.clone();
        let summary = a.reevaluate(&p, 3.0);
        assert_eq!(summary, Reevaluation::default());
        assert_eq!(a.pof_image(), before.pof_image());
    }

    #[test]
    fn reevaluate_fda1_at_same_time_reports_nothing() {
        let p = Fda1::new(10).unwrap();
        let mut a = Archive::new(100);
        for k in 0..5 {
            let mut x = vec![0.1 * k as f64; 10];
            x[0] = 0.2 * k as f64;
            let f = p.evaluate(&x, 0.0).unwrap();
            a.insert(ArchiveEntry::new(x, f, 0.0));
        }
        assert_eq!(a.reevaluate(&p, 0.0).changed, 0);
    }

    #[test]
    fn reevaluate_fda1_after_shift_degrades() {
        let p = Fda1::new(10).unwrap();
        let mut x = vec![0.0; 10];
        x[0] = 0.25;
        let f0 = p.evaluate(&x, 0.0).unwrap();
        let f1 = p.evaluate(&x, 0.1).unwrap();
        assert!((fda1_g_target(0.1) - (0.05 * std::f64::consts::PI).sin()).abs() < 1e-15);
        assert!(f1[1] > f0[1]);

        let mut a = Archive::new(100);
        a.insert(ArchiveEntry::new(x, f0, 0.0));
        let summary = a.reevaluate(&p, 0.1);
        assert_eq!(summary.changed, 1);
        assert!(summary.degraded >= 1);
        assert_eq!(a.entries()[0].eval_time, 0.1);
    }

    #[test]
    fn reevaluate_prunes_newly_dominated() {
        struct Swap(Bounds);
        impl DynamicProblem for Swap {
            fn name(&self) -> &str {
                "swap"
            }
            fn bounds(&self) -> &Bounds {
                &self.0
            }
            fn evaluate_unchecked(&self, x: &[f64], t: f64) -> Vec<f64> {
                if t == 0.0 {
                    vec![x[0], 1.0 - x[0]]
                } else {
                    vec![x[0], x[0]]
                }
            }
        }
        let p = Swap(Bounds::new(vec![0.0], vec![1.0]).unwrap());
        let mut a = Archive::new(10);
        for x in [0.0, 0.5, 1.0] {
            let f = p.evaluate(&[x], 0.0).unwrap();
            a.insert(ArchiveEntry::new(vec![x], f, 0.0));
        }
        assert_eq!(a.len(), 3);
        let summary = a.reevaluate(&p, 1.0);
        assert_eq!(summary.pruned, 2);
        assert_eq!(a.entries()[0].x, vec![0.0]);
        assert!(is_mutually_non_dominated(&a));
    }

    proptest! {
        #[test]
        fn inserts_preserve_invariants(
            points in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 2), 1..300),
            capacity in 1usize..20,
        ) {
            let mut a = Archive::new(capacity);
            for p in points {
                a.insert(entry(&p));
                prop_assert!(a.len() <= capacity);
                prop_assert!(is_mutually_non_dominated(&a));
            }
        }

        #[test]
        fn insert_is_idempotent(points in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 2), 1..40)) {
            let mut a = Archive::new(100);
            for p in &points {
                a.insert(entry(p));
            }
            let snapshot = a.clone();
            for e in snapshot.entries().to_vec() {
                prop_assert_eq!(a.insert(e), InsertOutcome::Rejected);
            }
            prop_assert_eq!(a, snapshot);
        }
    }
}
