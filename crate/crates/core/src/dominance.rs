//! Pareto dominance (minimization), non-dominated filtering and crowding.

use std::cmp::Ordering;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("objective vectors have different lengths ({0} vs {1})")]
pub struct LengthMismatch(pub usize, pub usize);

/// `a` dominates `b` when it is no worse in every objective and strictly
/// better in at least one.
///
/// Panics if the lengths differ; see [`try_dominates`].
#[inline]
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    assert_eq!(a.len(), b.len(), "objective vectors have different lengths");
    let mut strictly_better = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly_better = true;
        }
    }
    strictly_better
}

pub fn try_dominates(a: &[f64], b: &[f64]) -> Result<bool, LengthMismatch> {
    if a.len() != b.len() {
        return Err(LengthMismatch(a.len(), b.len()));
    }
    Ok(dominates(a, b))
}

/// Indices of the points not dominated by any other point, in input order.
/// Equal points do not dominate each other, so duplicates are all kept.
pub fn non_dominated_set<V: AsRef<[f64]>>(points: &[V]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| {
            !points
                .iter()
                .enumerate()
                .any(|(j, q)| j != i && dominates(q.as_ref(), points[i].as_ref()))
        })
        .collect()
}

/// Partitions indices into successive Pareto fronts (Deb's fast
/// non-dominated sort). Indices within a front are ascending.
pub fn fast_non_dominated_sort<V: AsRef<[f64]>>(points: &[V]) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    let mut fronts = vec![Vec::new()];

    for i in 0..n {
        for j in (i + 1)..n {
            let (p, q) = (points[i].as_ref(), points[j].as_ref());
            if dominates(p, q) {
                dominated_by[i].push(j);
                domination_count[j] += 1;
            } else if dominates(q, p) {
                dominated_by[j].push(i);
                domination_count[i] += 1;
            }
        }
    }
    for (i, &count) in domination_count.iter().enumerate() {
        if count == 0 {
            fronts[0].push(i);
        }
    }

    let mut current = 0;
    while !fronts[current].is_empty() {
        let mut next = Vec::new();
        for &i in &fronts[current] {
            for &j in &dominated_by[i] {
                domination_count[j] -= 1;
                if domination_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(next);
        current += 1;
    }
    fronts.pop();
    fronts
}

/// Crowding distance of every point within the given set.
///
/// For each objective the points are stably sorted; the first and last get
/// `+inf`, interior points accumulate `(next - prev) / range`. An objective
/// with zero range contributes nothing to interior points.
pub fn crowding_distance<V: AsRef<[f64]>>(points: &[V]) -> Vec<f64> {
    let n = points.len();
    let mut distance = vec![0.0; n];
    if n == 0 {
        return distance;
    }
    if n <= 2 {
        distance.fill(f64::INFINITY);
        return distance;
    }

    let objectives = points[0].as_ref().len();
    let mut order: Vec<usize> = (0..n).collect();
    for m in 0..objectives {
        let value = |i: usize| points[i].as_ref()[m];
        order.sort_by(|&a, &b| value(a).partial_cmp(&value(b)).unwrap_or(Ordering::Equal));

        let first = order[0];
        let last = order[n - 1];
        distance[first] = f64::INFINITY;
        distance[last] = f64::INFINITY;

        let range = value(last) - value(first);
        if range <= 0.0 {
            continue;
        }
        for k in 1..n - 1 {
            let gap = value(order[k + 1]) - value(order[k - 1]);
            distance[order[k]] += gap / range;
        }
    }
    distance
}
