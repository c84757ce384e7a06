//! Time-sharing pass: drop corners dominated by a convex combination of
//! other corners.

use crate::regions::RatePoint;
use minilp::{ComparisonOp, OptimizationDirection, Problem};

/// Total slack below which a convex combination does not count as
/// dominating.
pub const HULL_TOL: f64 = 1e-9;

fn oriented(p: &RatePoint) -> [f64; 4] {
    [p.key_rate, -p.storage_rate, -p.leakage_rate, -p.cost]
}

/// Whether some convex combination of `others` weakly dominates `target`
/// with total slack above [`HULL_TOL`].
pub fn dominated_by_mixture(target: &RatePoint, others: &[&RatePoint]) -> bool {
    if others.is_empty() {
        return false;
    }
    let t = oriented(target);
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let lambdas: Vec<_> = others.iter().map(|_| lp.add_var(0.0, (0.0, 1.0))).collect();
    let slacks: Vec<_> = (0..4).map(|_| lp.add_var(1.0, (0.0, f64::INFINITY))).collect();
    for k in 0..4 {
        let mut row: Vec<_> = others
            .iter()
            .zip(&lambdas)
            .map(|(q, &l)| (l, oriented(q)[k]))
            .collect();
        row.push((slacks[k], -1.0));
        lp.add_constraint(row, ComparisonOp::Eq, t[k]);
    }
    lp.add_constraint(
        lambdas.iter().map(|&l| (l, 1.0)).collect::<Vec<_>>(),
        ComparisonOp::Eq,
        1.0,
    );
    match lp.solve() {
        Ok(sol) => sol.objective() > HULL_TOL,
        Err(_) => false,
    }
}

/// Indices of corners that survive time-sharing, in input order.
pub fn hull_indices(points: &[RatePoint]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| {
            let others: Vec<&RatePoint> = points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| q)
                .collect();
            !dominated_by_mixture(&points[i], &others)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_below_chord_is_removed() {
        // key/leakage trade-off; the middle point lies under the chord
        let pts = [
            RatePoint::new(0.0, 0.0, 0.0, 0.0),
            RatePoint::new(0.4, 0.0, 0.5, 0.0),
            RatePoint::new(1.0, 0.0, 1.0, 0.0),
        ];
        assert_eq!(hull_indices(&pts), vec![0, 2]);
        let concave = [
            RatePoint::new(0.0, 0.0, 0.0, 0.0),
            RatePoint::new(0.6, 0.0, 0.5, 0.0),
            RatePoint::new(1.0, 0.0, 1.0, 0.0),
        ];
        assert_eq!(hull_indices(&concave), vec![0, 1, 2]);
    }
}
