//! Search over auxiliary channels for the Pareto frontier of a region.
//!
//! [`trace_frontier`] combines a structured grid (every quantized action
//! channel paired with deterministic `V`/`U` labellings, or the full grid
//! when it is small), seeded random restarts and a step-halving local
//! search. [`brute_force_oracle`] enumerates the full quantized grid and
//! serves as the reference on small instances.

pub mod grid;
pub mod hull;
pub mod pareto;

mod oracle;
mod search;
mod space;

pub use oracle::{brute_force_oracle, OracleConfig, ORACLE_GRID_LIMIT};
pub use search::trace_frontier;

use crate::error::{Error, Result};
use crate::par::Execution;
use crate::prob::{Mode, SystemModel};
use crate::regions::{RatePoint, RegionCorner};
use std::time::Duration;

/// Cardinality bounds `(|U| bound, |V| bound)` for a mode. With
/// `n = |X||A|` (visible) these are `(n + 2, (n + 2)(n + 1))`; with
/// `n = |X̃||A|` (hidden) they are `(n + 3, (n + 3)(n + 2))`.
pub fn cardinality_bounds(model: &SystemModel, mode: Mode) -> (usize, usize) {
    let a = model.a_size();
    if mode.is_hidden() {
        let e = model.hidden().map_or(model.x_size(), |h| h.output().size());
        let n = e * a;
        (n + 3, (n + 3) * (n + 2))
    } else {
        let n = model.x_size() * a;
        (n + 2, (n + 2) * (n + 1))
    }
}

/// Working cardinality used when none is given.
pub const DEFAULT_CARDINALITY_CAP: usize = 4;

/// A rate coordinate that can be constrained in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coordinate {
    Storage,
    Leakage,
    Cost,
}

impl Coordinate {
    pub fn of(self, p: &RatePoint) -> f64 {
        match self {
            Coordinate::Storage => p.storage_rate,
            Coordinate::Leakage => p.leakage_rate,
            Coordinate::Cost => p.cost,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Coordinate::Storage => "storage",
            Coordinate::Leakage => "leakage",
            Coordinate::Cost => "cost",
        }
    }
}

impl std::str::FromStr for Coordinate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "storage" | "R_w" => Ok(Coordinate::Storage),
            "leakage" | "Delta" => Ok(Coordinate::Leakage),
            "cost" | "C" => Ok(Coordinate::Cost),
            _ => Err(Error::Structural(format!("unknown coordinate `{s}`"))),
        }
    }
}

/// What the refinement climbs.
#[derive(Debug, Clone, PartialEq)]
pub enum Objective {
    /// Maximize `w · (R_k, −R_w, −Δ, −C)`.
    Weighted([f64; 4]),
    /// For each level, maximize `R_k` subject to `coordinate ≤ level`.
    Sweep { coordinate: Coordinate, levels: Vec<f64> },
}

impl Default for Objective {
    fn default() -> Self {
        Objective::Weighted([1.0, 0.0, 0.0, 0.0])
    }
}

/// One scalarized target of the local search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Goal {
    pub weights: [f64; 4],
    pub limit: Option<(Coordinate, f64)>,
}

impl Goal {
    pub fn score(&self, p: &RatePoint) -> f64 {
        if let Some((c, level)) = self.limit {
            if c.of(p) > level + 1e-12 {
                return f64::NEG_INFINITY;
            }
        }
        let w = &self.weights;
        w[0] * p.key_rate - w[1] * p.storage_rate - w[2] * p.leakage_rate - w[3] * p.cost
    }
}

impl Objective {
    pub(crate) fn goals(&self) -> Vec<Goal> {
        match self {
            Objective::Weighted(w) => vec![Goal {
                weights: *w,
                limit: None,
            }],
            Objective::Sweep { coordinate, levels } => levels
                .iter()
                .map(|&l| Goal {
                    weights: [1.0, 0.0, 0.0, 0.0],
                    limit: Some((*coordinate, l)),
                })
                .collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Objective::Weighted(w) => {
                if w.iter().any(|v| !v.is_finite()) || w.iter().all(|&v| v == 0.0) {
                    return Err(Error::Domain(format!("objective weights {w:?} are not usable")));
                }
            }
            Objective::Sweep { levels, .. } => {
                if levels.is_empty() || levels.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Domain("sweep needs finite levels".into()));
                }
            }
        }
        Ok(())
    }
}

/// Search parameters for [`trace_frontier`].
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Use only the first `k` actions. `None` uses all.
    pub card_a_use: Option<usize>,
    /// `|U|`; `None` means `min(bound, 4)`, or the bound with
    /// `allow_full_cardinality`.
    pub card_u: Option<usize>,
    pub card_v: Option<usize>,
    pub allow_full_cardinality: bool,
    /// Simplex step; must be `1/n` for a positive integer `n`.
    pub step: f64,
    pub refinement_rounds: usize,
    pub restarts: usize,
    pub seed: u64,
    pub cost_cap: Option<f64>,
    pub objective: Objective,
    /// Drop corners dominated by time-sharing.
    pub hull: bool,
    pub execution: Execution,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            card_a_use: None,
            card_u: None,
            card_v: None,
            allow_full_cardinality: false,
            step: 1.0 / 16.0,
            refinement_rounds: 3,
            restarts: 32,
            seed: 0,
            cost_cap: None,
            objective: Objective::default(),
            hull: false,
            execution: Execution::default(),
        }
    }
}

/// Grid denominator `n` for a step `1/n`.
pub fn step_denominator(step: f64) -> Result<u32> {
    if !step.is_finite() || step <= 0.0 || step > 1.0 {
        return Err(Error::Domain(format!("grid step {step} is not in (0, 1]")));
    }
    let n = (1.0 / step).round();
    if (n * step - 1.0).abs() > 1e-9 || n > u32::MAX as f64 {
        return Err(Error::Domain(format!(
            "grid step {step} is not the reciprocal of an integer"
        )));
    }
    Ok(n as u32)
}

/// Resolved working cardinalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Cards {
    pub a_use: usize,
    pub u: usize,
    pub v: usize,
}

pub(crate) fn resolve_cards(
    model: &SystemModel,
    mode: Mode,
    card_a_use: Option<usize>,
    card_u: Option<usize>,
    card_v: Option<usize>,
    allow_full: bool,
    notices: &mut Vec<String>,
) -> Result<Cards> {
    let (bu, bv) = cardinality_bounds(model, mode);
    let na = model.a_size();
    let a_use = card_a_use.unwrap_or(na);
    if a_use == 0 || a_use > na {
        return Err(Error::Structural(format!(
            "action cardinality {a_use} is not in 1..={na}"
        )));
    }
    let mut pick = |name: &str, given: Option<usize>, bound: usize| -> Result<usize> {
        match given {
            Some(0) => Err(Error::Structural(format!("|{name}| must be at least 1"))),
            Some(k) if k > bound => Err(Error::Structural(format!(
                "|{name}| = {k} exceeds the bound {bound}"
            ))),
            Some(k) => Ok(k),
            None if allow_full => Ok(bound),
            None => {
                let k = bound.min(DEFAULT_CARDINALITY_CAP);
                if k < bound {
                    notices.push(format!(
                        "|{name}| truncated to {k} (bound {bound}); results are inner bounds"
                    ));
                }
                Ok(k)
            }
        }
    };
    let u = pick("U", card_u, bu)?;
    let v = pick("V", card_v, bv)?;
    Ok(Cards { a_use, u, v })
}

/// Smallest expected cost reachable with the first `a_use` actions.
pub(crate) fn min_cost(model: &SystemModel, a_use: usize) -> f64 {
    model.cost().values()[..a_use]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

pub(crate) fn check_cost_cap(model: &SystemModel, a_use: usize, cap: Option<f64>) -> Result<()> {
    if let Some(cap) = cap {
        let min = min_cost(model, a_use);
        if !cap.is_finite() || cap < min - 1e-12 {
            return Err(Error::InfeasibleCost { cap, min_cost: min });
        }
    }
    Ok(())
}

/// Pareto-filtered corners with search metadata.
#[derive(Debug, Clone)]
pub struct Frontier {
    /// Canonically ordered: `R_k` descending, then `R_w`, `Δ`, `C`
    /// ascending, then channel parameters.
    pub corners: Vec<RegionCorner>,
    pub mode: Mode,
    pub model_hash: u64,
    pub config: SearchConfig,
    /// Number of auxiliary choices evaluated.
    pub evaluations: u64,
    pub notices: Vec<String>,
    pub wall_time: Duration,
}

impl Frontier {
    pub fn max_key_corner(&self) -> Option<&RegionCorner> {
        self.corners.first()
    }

    pub fn max_key_rate(&self) -> f64 {
        self.corners.first().map_or(0.0, |c| c.point.key_rate)
    }

    pub fn points(&self) -> Vec<RatePoint> {
        self.corners.iter().map(|c| c.point).collect()
    }
}

/// FNV-1a over the model's sizes, probabilities (as bit patterns) and mode.
pub fn model_hash(model: &SystemModel) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    };
    eat(model.mode().region_id().as_bytes());
    let mut floats = |v: &[f64]| {
        eat(&(v.len() as u64).to_le_bytes());
        for x in v {
            eat(&x.to_bits().to_le_bytes());
        }
    };
    floats(model.source().mass());
    if let Some(hc) = model.hidden() {
        floats(hc.matrix());
    }
    floats(model.measurement().channel().matrix());
    floats(model.cost().values());
    h
}

/// FNV-1a of a flattened parameter vector; used as a short corner id.
pub fn params_hash(params: &[f64]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for x in params {
        for b in x.to_bits().to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}
