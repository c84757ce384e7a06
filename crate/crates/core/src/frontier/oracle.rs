//! Exhaustive enumeration of the quantized auxiliary grid.

use super::grid::simplex_points;
use super::space::{evaluate_indexed, Scored, Space};
use super::{
    check_cost_cap, model_hash, resolve_cards, step_denominator, Frontier, SearchConfig,
};
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::prob::{Mode, SystemModel};
use std::time::Instant;

/// Largest raw grid (before the cost filter) the oracle will enumerate.
pub const ORACLE_GRID_LIMIT: u128 = 10_000_000;

/// Grid and cardinalities for [`brute_force_oracle`].
#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub card_a_use: Option<usize>,
    pub card_u: usize,
    pub card_v: usize,
    pub step: f64,
    pub cost_cap: Option<f64>,
    pub execution: Execution,
}

impl OracleConfig {
    pub fn new(card_u: usize, card_v: usize, step: f64) -> Self {
        Self {
            card_a_use: None,
            card_u,
            card_v,
            step,
            cost_cap: None,
            execution: Execution::default(),
        }
    }
}

/// Every simplex-quantized auxiliary choice within the cost cap, reduced to
/// its Pareto frontier. The raw grid size is checked against
/// [`ORACLE_GRID_LIMIT`] before anything is evaluated.
pub fn brute_force_oracle(model: &SystemModel, mode: Mode, config: &OracleConfig) -> Result<Frontier> {
    let start = Instant::now();
    let n = step_denominator(config.step)?;
    let mut notices = Vec::new();
    let cards = resolve_cards(
        model,
        mode,
        config.card_a_use,
        Some(config.card_u),
        Some(config.card_v),
        false,
        &mut notices,
    )?;
    check_cost_cap(model, cards.a_use, config.cost_cap)?;
    let space = Space::new(model, mode, cards, config.cost_cap)?;
    let raw = space.full_grid_size(n);
    if raw > ORACLE_GRID_LIMIT {
        return Err(Error::SizeGuard {
            what: "oracle grid",
            count: raw,
            limit: ORACLE_GRID_LIMIT,
        });
    }

    let (front, evaluations) = enumerate_full_grid(&space, n, config.execution);

    Ok(Frontier {
        corners: space.corners(front)?,
        mode,
        model_hash: model_hash(model),
        config: SearchConfig {
            card_a_use: Some(cards.a_use),
            card_u: Some(cards.u),
            card_v: Some(cards.v),
            step: config.step,
            refinement_rounds: 0,
            restarts: 0,
            cost_cap: config.cost_cap,
            execution: config.execution,
            ..SearchConfig::default()
        },
        evaluations,
        notices,
        wall_time: start.elapsed(),
    })
}

/// Evaluates the full quantized grid (cost-feasible actions only).
pub(crate) fn enumerate_full_grid(space: &Space<'_>, n: u32, exec: Execution) -> (Vec<Scored>, u64) {
    let cards = space.cards;
    let actions = space.action_grid(n);
    let vpts = simplex_points(n, cards.v);
    let upts = simplex_points(n, cards.u);
    let v_rows = space.ne * space.na;
    let n_vu = (vpts.len() as u64).pow(v_rows as u32) * (upts.len() as u64).pow(cards.v as u32);
    let count = actions.len() as u64 * n_vu;
    let (vo, uo) = (space.v_offset(), space.u_offset());

    evaluate_indexed(space, count, exec, |i, params| {
        let (a, mut r) = (i / n_vu, i % n_vu);
        params[..vo].copy_from_slice(&actions[a as usize]);
        // last U row varies fastest
        for row in (0..cards.v).rev() {
            let d = (r % upts.len() as u64) as usize;
            r /= upts.len() as u64;
            let o = uo + row * cards.u;
            params[o..o + cards.u].copy_from_slice(&upts[d]);
        }
        for row in (0..v_rows).rev() {
            let d = (r % vpts.len() as u64) as usize;
            r /= vpts.len() as u64;
            let o = vo + row * cards.v;
            params[o..o + cards.v].copy_from_slice(&vpts[d]);
        }
    })
}
