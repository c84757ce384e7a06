//! Canonical ordering and Pareto filtering of corners.

use crate::regions::RatePoint;
use std::cmp::Ordering;

/// Slack used when deciding dominance between evaluated corners.
pub const DOMINANCE_TOL: f64 = 1e-12;

/// Canonical order: `R_k` descending, then `R_w`, `Δ`, `C` ascending, then
/// the flattened channel parameters lexicographically.
pub fn canonical_cmp(a: (&RatePoint, &[f64]), b: (&RatePoint, &[f64])) -> Ordering {
    b.0.key_rate
        .total_cmp(&a.0.key_rate)
        .then(a.0.storage_rate.total_cmp(&b.0.storage_rate))
        .then(a.0.leakage_rate.total_cmp(&b.0.leakage_rate))
        .then(a.0.cost.total_cmp(&b.0.cost))
        .then_with(|| lex_cmp(a.1, b.1))
}

pub fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Indices of the non-dominated points, in the given order. `points` must
/// already be canonically sorted; a later point is dropped when some kept
/// point weakly dominates it within `tol`, and evicts kept points it
/// dominates (ties in `R_k` below `tol` can put a dominator later).
pub fn pareto_indices(points: &[RatePoint], tol: f64) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    'outer: for (i, p) in points.iter().enumerate() {
        for &k in kept.iter().rev() {
            if points[k].dominates(p, tol) {
                continue 'outer;
            }
        }
        kept.retain(|&k| !p.dominates(&points[k], tol));
        kept.push(i);
    }
    kept
}

/// Incremental front for streamed, unsorted input. Points that are weakly
/// dominated by the front are rejected; accepted points evict the members
/// they dominate.
#[derive(Debug, Default, Clone)]
pub struct StreamingFront<T> {
    items: Vec<(RatePoint, T)>,
}

impl<T> StreamingFront<T> {
    pub fn new() -> Self {
        Self { items: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn offer(&mut self, point: RatePoint, item: T) -> bool {
        if let Some(pos) = self
            .items
            .iter()
            .position(|(q, _)| q.dominates(&point, DOMINANCE_TOL))
        {
            // keep frequent dominators near the front of the scan
            if pos > 0 {
                self.items.swap(pos, pos / 2);
            }
            return false;
        }
        self.items.retain(|(q, _)| !point.dominates(q, DOMINANCE_TOL));
        self.items.push((point, item));
        true
    }

    pub fn into_items(self) -> Vec<(RatePoint, T)> {
        self.items
    }
}
