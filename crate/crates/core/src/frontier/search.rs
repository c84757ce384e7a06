//! Grid search, seeded restarts and step-halving local refinement.

use super::grid::{pow_sat, restricted_growth_strings, simplex_grid_size};
use super::hull::hull_indices;
use super::oracle::enumerate_full_grid;
use super::pareto::lex_cmp;
use super::space::{evaluate_indexed, LocalFront, Scored, Space, COST_SLACK};
use super::{
    check_cost_cap, model_hash, resolve_cards, step_denominator, Frontier, Goal, SearchConfig,
};
use crate::error::Result;
use crate::par::{self, Execution};
use crate::prob::{Mode, SystemModel};
use crate::regions::{RatePoint, Scratch};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

/// Full grids up to this size are enumerated outright.
const EXHAUSTIVE_LIMIT: u128 = 250_000;
/// Largest per-input action grid; beyond it only input-independent and
/// deterministic action channels are gridded.
const ACTION_GRID_LIMIT: u128 = 100_000;
/// Deterministic `(V, U)` labellings paired with each action.
const PARTITION_BUDGET: usize = 4096;
const CANDIDATE_LIMIT: u64 = 2_000_000;
/// Best grid corners refined per goal.
const SEEDS_PER_GOAL: usize = 8;
const MAX_PASSES: usize = 32;
const IMPROVE_TOL: f64 = 1e-12;

/// Pareto frontier of evaluated corners for `mode` under `config`.
///
/// The result depends only on the model, the mode and the configuration
/// (including the seed), not on the execution strategy.
pub fn trace_frontier(model: &SystemModel, mode: Mode, config: &SearchConfig) -> Result<Frontier> {
    let start = Instant::now();
    let n = step_denominator(config.step)?;
    config.objective.validate()?;
    let mut notices = Vec::new();
    let cards = resolve_cards(
        model,
        mode,
        config.card_a_use,
        config.card_u,
        config.card_v,
        config.allow_full_cardinality,
        &mut notices,
    )?;
    check_cost_cap(model, cards.a_use, config.cost_cap)?;
    let space = Space::new(model, mode, cards, config.cost_cap)?;
    let goals = config.objective.goals();
    let exec = config.execution;
    // a unit step asks for deterministic channels only
    let deterministic_only = n == 1;

    let (grid_front, mut evaluations) = if space.full_grid_size(n) <= EXHAUSTIVE_LIMIT {
        enumerate_full_grid(&space, n, exec)
    } else {
        structured_grid(&space, n, exec, &mut notices)
    };

    let mut starts: Vec<(usize, Vec<f64>)> = Vec::new();
    for (g, goal) in goals.iter().enumerate() {
        let mut ranked: Vec<(f64, &Scored)> = grid_front
            .iter()
            .map(|s| (goal.score(&s.0), s))
            .filter(|(sc, _)| sc.is_finite())
            .collect();
        ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| lex_cmp(&a.1 .1, &b.1 .1)));
        starts.extend(ranked.iter().take(SEEDS_PER_GOAL).map(|(_, s)| (g, s.1.clone())));
    }
    if !deterministic_only {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        for k in 0..config.restarts {
            starts.push((k % goals.len(), random_start(&space, &mut rng)));
        }
    }

    let rounds = if deterministic_only { 0 } else { config.refinement_rounds };
    let deltas: Vec<f64> = (0..=rounds as i32).map(|r| config.step * 0.5f64.powi(r)).collect();
    let climbs = par::map_init(&starts, exec, Scratch::default, |scratch, (g, p)| {
        climb(&space, &goals[*g], p.clone(), &deltas, scratch)
    });

    let mut all = LocalFront::default();
    all.extend(grid_front);
    for (front, count) in climbs {
        evaluations += count;
        all.extend(front);
    }
    let mut front = all.finish();
    if config.hull {
        let points: Vec<RatePoint> = front.iter().map(|s| s.0).collect();
        let keep = hull_indices(&points);
        front = keep.into_iter().map(|i| front[i].clone()).collect();
    }

    Ok(Frontier {
        corners: space.corners(front)?,
        mode,
        model_hash: model_hash(model),
        config: config.clone(),
        evaluations,
        notices,
        wall_time: start.elapsed(),
    })
}

/// Every quantized action channel against every deterministic `(V, U)`
/// labelling, within fixed budgets.
fn structured_grid(space: &Space<'_>, n: u32, exec: Execution, notices: &mut Vec<String>) -> (Vec<Scored>, u64) {
    let cards = space.cards;
    let full_actions = pow_sat(simplex_grid_size(n, cards.a_use), space.ne);
    let actions = if full_actions <= ACTION_GRID_LIMIT {
        space.action_grid(n)
    } else {
        notices.push(format!(
            "action grid of {full_actions} points reduced to input-independent and deterministic actions"
        ));
        space.reduced_action_grid(n)
    };

    let v_rows = space.ne * space.na;
    let (v_maps, v_cut) = restricted_growth_strings(v_rows, cards.v, PARTITION_BUDGET);
    let mut pairs: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let mut cut = v_cut;
    'outer: for vm in v_maps {
        let blocks = vm.iter().copied().max().unwrap_or(0) + 1;
        let (u_maps, u_cut) = restricted_growth_strings(blocks, cards.u, PARTITION_BUDGET);
        cut |= u_cut;
        for um in u_maps {
            if pairs.len() == PARTITION_BUDGET {
                cut = true;
                break 'outer;
            }
            pairs.push((vm.clone(), um));
        }
    }
    let max_pairs = (CANDIDATE_LIMIT / actions.len().max(1) as u64).max(1) as usize;
    if pairs.len() > max_pairs {
        pairs.truncate(max_pairs);
        cut = true;
    }
    if cut {
        notices.push(format!(
            "deterministic (V, U) labellings truncated to {}",
            pairs.len()
        ));
    }

    let np = pairs.len() as u64;
    let (vo, uo) = (space.v_offset(), space.u_offset());
    let count = actions.len() as u64 * np;
    evaluate_indexed(space, count, exec, |i, params| {
        let (a, q) = ((i / np) as usize, (i % np) as usize);
        params[..vo].copy_from_slice(&actions[a]);
        params[vo..].fill(0.0);
        let (vm, um) = &pairs[q];
        for (r, &v) in vm.iter().enumerate() {
            params[vo + r * cards.v + v] = 1.0;
        }
        for v in 0..cards.v {
            let u = um.get(v).copied().unwrap_or(0);
            params[uo + v * cards.u + u] = 1.0;
        }
    })
}

/// Uniform simplex sample from sorted-uniform spacings.
fn sample_simplex(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    let mut cuts: Vec<f64> = (1..out.len()).map(|_| rng.random::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    let mut prev = 0.0;
    for (o, c) in out.iter_mut().zip(cuts.iter().chain(std::iter::once(&1.0))) {
        *o = c - prev;
        prev = *c;
    }
}

/// Random parameter vector; the action block is mixed toward the cheapest
/// usable action just enough to meet the cost cap.
fn random_start(space: &Space<'_>, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut p = vec![0.0; space.len];
    for row in &space.rows {
        sample_simplex(rng, &mut p[row.offset..row.offset + row.width]);
    }
    if let Some(cap) = space.cost_cap {
        let cost = space.cost(&p);
        if cost > cap {
            let gamma = &space.model.cost().values()[..space.cards.a_use];
            let cheapest = (0..gamma.len())
                .min_by(|&a, &b| gamma[a].total_cmp(&gamma[b]))
                .expect("at least one action");
            let cmin = gamma[cheapest];
            let mut t = ((cost - cap) / (cost - cmin)).clamp(0.0, 1.0);
            for pass in 0..2 {
                if pass == 1 {
                    t = 1.0;
                }
                let mut q = p.clone();
                for row in space.action_rows() {
                    let r = &mut q[row.offset..row.offset + row.width];
                    r.iter_mut().for_each(|v| *v *= 1.0 - t);
                    r[cheapest] += t;
                }
                if space.cost_ok(space.cost(&q)) || pass == 1 {
                    p = q;
                    break;
                }
            }
        }
    }
    p
}

/// First-improvement local search: move mass `δ` between two entries of a
/// row, for each `δ` in turn, until a full pass finds no improvement.
/// Every admissible point visited is offered to the returned front.
fn climb(
    space: &Space<'_>,
    goal: &Goal,
    start: Vec<f64>,
    deltas: &[f64],
    scratch: &mut Scratch,
) -> (Vec<Scored>, u64) {
    let mut front = LocalFront::default();
    let mut evaluations = 1u64;
    let mut cur = start;
    let mut cur_score = match space.eval(&cur, scratch) {
        Some(p) => {
            front.push(p, &cur);
            goal.score(&p)
        }
        None => f64::NEG_INFINITY,
    };
    for &delta in deltas {
        for _ in 0..MAX_PASSES {
            let mut improved = false;
            for row in &space.rows {
                for i in 0..row.width {
                    for j in 0..row.width {
                        let (oi, oj) = (row.offset + i, row.offset + j);
                        if i == j || cur[oi] <= 0.0 {
                            continue;
                        }
                        let (si, sj) = (cur[oi], cur[oj]);
                        let d = delta.min(si);
                        cur[oi] = if d == si { 0.0 } else { si - d };
                        cur[oj] = sj + d;
                        evaluations += 1;
                        let accepted = match space.eval(&cur, scratch) {
                            Some(p) => {
                                front.push(p, &cur);
                                let s = goal.score(&p);
                                if s > cur_score + IMPROVE_TOL {
                                    cur_score = s;
                                    true
                                } else {
                                    false
                                }
                            }
                            None => false,
                        };
                        if accepted {
                            improved = true;
                        } else {
                            cur[oi] = si;
                            cur[oj] = sj;
                        }
                    }
                }
            }
            if !improved {
                break;
            }
        }
    }
    debug_assert!(space.cost_ok(space.cost(&cur) - COST_SLACK) || cur_score == f64::NEG_INFINITY);
    (front.finish(), evaluations)
}
