//! Flat parameterization of auxiliary choices and shared grid machinery.
//!
//! Parameters are laid out as the action block (`|E| × |A|`), the `V`
//! block (`|E||A| × |V|`) and the `U` block (`|V| × |U|`), all row-major.
//! Only the first `a_use` entries of an action row are free.

use super::grid::{pow_sat, simplex_grid_size, simplex_points};
use super::pareto::{canonical_cmp, pareto_indices, DOMINANCE_TOL};
use super::Cards;
use crate::error::Result;
use crate::par::{self, Execution};
use crate::prob::{Alphabet, AuxiliaryChoice, Channel, Mode, SystemModel};
use crate::regions::{Evaluator, RatePoint, RegionCorner, Scratch};

/// Slack on the cost cap.
pub(crate) const COST_SLACK: f64 = 1e-12;

/// Candidates handled per parallel work item.
pub(crate) const CHUNK: u64 = 2048;

#[derive(Debug, Clone, Copy)]
pub(crate) struct RowSpec {
    pub offset: usize,
    pub width: usize,
}

pub(crate) struct Space<'m> {
    pub model: &'m SystemModel,
    pub mode: Mode,
    evaluator: Evaluator<'m>,
    pub ne: usize,
    pub na: usize,
    pub cards: Cards,
    alphabets: [Alphabet; 5],
    pe: Vec<f64>,
    pub cost_cap: Option<f64>,
    pub rows: Vec<RowSpec>,
    pub len: usize,
}

pub(crate) type Scored = (RatePoint, Vec<f64>);

impl<'m> Space<'m> {
    pub fn new(model: &'m SystemModel, mode: Mode, cards: Cards, cost_cap: Option<f64>) -> Result<Self> {
        let evaluator = Evaluator::new(model, mode, cards.v, cards.u)?;
        let ne = model.encoder_size();
        let na = model.a_size();
        let e = model.encoder_alphabet().clone();
        let a = model.cost().actions().clone();
        let ea = Alphabet::product("EA", &e, &a);
        let v = Alphabet::indexed("V", cards.v)?;
        let u = Alphabet::indexed("U", cards.u)?;
        let mut rows = Vec::new();
        for r in 0..ne {
            rows.push(RowSpec {
                offset: r * na,
                width: cards.a_use,
            });
        }
        let v_off = ne * na;
        for r in 0..ne * na {
            rows.push(RowSpec {
                offset: v_off + r * cards.v,
                width: cards.v,
            });
        }
        let u_off = v_off + ne * na * cards.v;
        for r in 0..cards.v {
            rows.push(RowSpec {
                offset: u_off + r * cards.u,
                width: cards.u,
            });
        }
        Ok(Self {
            model,
            mode,
            evaluator,
            ne,
            na,
            cards,
            alphabets: [e, a, ea, v, u],
            pe: model.encoder_marginal(),
            cost_cap,
            rows,
            len: u_off + cards.v * cards.u,
        })
    }

    pub fn action_len(&self) -> usize {
        self.ne * self.na
    }

    pub fn v_offset(&self) -> usize {
        self.ne * self.na
    }

    pub fn u_offset(&self) -> usize {
        self.v_offset() + self.ne * self.na * self.cards.v
    }

    pub fn action_rows(&self) -> &[RowSpec] {
        &self.rows[..self.ne]
    }

    pub fn cost(&self, params: &[f64]) -> f64 {
        let gamma = self.model.cost().values();
        let mut c = 0.0;
        for (e, &p) in self.pe.iter().enumerate() {
            let row = &params[e * self.na..(e + 1) * self.na];
            c += p * row.iter().zip(gamma).map(|(q, g)| q * g).sum::<f64>();
        }
        c
    }

    pub fn cost_ok(&self, cost: f64) -> bool {
        self.cost_cap.is_none_or(|cap| cost <= cap + COST_SLACK)
    }

    fn channels(&self, params: &[f64]) -> AuxiliaryChoice {
        let [e, a, ea, v, u] = &self.alphabets;
        let (vo, uo) = (self.v_offset(), self.u_offset());
        AuxiliaryChoice::new(
            Channel::from_flat_unchecked(e.clone(), a.clone(), params[..vo].to_vec()),
            Channel::from_flat_unchecked(ea.clone(), v.clone(), params[vo..uo].to_vec()),
            Channel::from_flat_unchecked(v.clone(), u.clone(), params[uo..].to_vec()),
        )
    }

    /// Validated auxiliary choice for a parameter vector.
    pub fn aux(&self, params: &[f64]) -> Result<AuxiliaryChoice> {
        let [e, a, ea, v, u] = &self.alphabets;
        let (vo, uo) = (self.v_offset(), self.u_offset());
        let mut aux = AuxiliaryChoice::new(
            Channel::from_flat(e.clone(), a.clone(), params[..vo].to_vec())?,
            Channel::from_flat(ea.clone(), v.clone(), params[vo..uo].to_vec())?,
            Channel::from_flat(v.clone(), u.clone(), params[uo..].to_vec())?,
        );
        aux.allow_oversize = true;
        Ok(aux)
    }

    /// Rate point of an admissible parameter vector: within the cost cap
    /// and with a non-negative key expression.
    pub fn eval(&self, params: &[f64], scratch: &mut Scratch) -> Option<RatePoint> {
        if !self.cost_ok(self.cost(params)) {
            return None;
        }
        let ev = self.evaluator.evaluate_unchecked(&self.channels(params), scratch);
        (!ev.key_clamped).then_some(ev.point)
    }

    pub fn corners(&self, front: Vec<Scored>) -> Result<Vec<RegionCorner>> {
        front
            .into_iter()
            .map(|(point, params)| {
                Ok(RegionCorner {
                    point,
                    aux: self.aux(&params)?,
                    mode: self.mode,
                })
            })
            .collect()
    }

    /// Size of the full quantized grid with denominator `n`, before the
    /// cost filter.
    pub fn full_grid_size(&self, n: u32) -> u128 {
        let c = &self.cards;
        pow_sat(simplex_grid_size(n, c.a_use), self.ne)
            .saturating_mul(pow_sat(simplex_grid_size(n, c.v), self.ne * self.na))
            .saturating_mul(pow_sat(simplex_grid_size(n, c.u), c.v))
    }

    /// Every quantized action block that meets the cost cap, in grid order.
    pub fn action_grid(&self, n: u32) -> Vec<Vec<f64>> {
        let pts: Vec<Vec<f64>> = simplex_points(n, self.cards.a_use);
        let mut out = Vec::new();
        let mut idx = vec![0usize; self.ne];
        loop {
            let mut block = vec![0.0; self.action_len()];
            for (e, &i) in idx.iter().enumerate() {
                block[e * self.na..e * self.na + self.cards.a_use].copy_from_slice(&pts[i]);
            }
            if self.cost_ok(self.cost(&block)) {
                out.push(block);
            }
            if !advance(&mut idx, pts.len()) {
                break;
            }
        }
        out
    }

    /// Actions that are the same for every encoder input, plus the
    /// deterministic action maps. Used when the full action grid is too big.
    pub fn reduced_action_grid(&self, n: u32) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        for p in simplex_points(n, self.cards.a_use) {
            let mut block = vec![0.0; self.action_len()];
            for e in 0..self.ne {
                block[e * self.na..e * self.na + self.cards.a_use].copy_from_slice(&p);
            }
            out.push(block);
        }
        let mut idx = vec![0usize; self.ne];
        loop {
            let mut block = vec![0.0; self.action_len()];
            for (e, &a) in idx.iter().enumerate() {
                block[e * self.na + a] = 1.0;
            }
            out.push(block);
            if !advance(&mut idx, self.cards.a_use) {
                break;
            }
        }
        out.retain(|b| self.cost_ok(self.cost(b)));
        out.sort_by(|a, b| super::pareto::lex_cmp(a, b));
        out.dedup();
        out
    }
}

/// Odometer increment, last digit fastest. Returns false on wrap-around.
pub(crate) fn advance(idx: &mut [usize], radix: usize) -> bool {
    for d in idx.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// Bounded Pareto accumulator: compacts to the front whenever it grows
/// past a threshold. The final front does not depend on when compaction
/// happened, up to tolerance effects of weak dominance.
#[derive(Debug, Default)]
pub(crate) struct LocalFront {
    items: Vec<Scored>,
    front_len: usize,
}

const COMPACT_AT: usize = 4096;

impl LocalFront {
    pub fn push(&mut self, point: RatePoint, params: &[f64]) {
        self.items.push((point, params.to_vec()));
        self.maybe_compact();
    }

    pub fn extend(&mut self, other: Vec<Scored>) {
        self.items.extend(other);
        self.maybe_compact();
    }

    fn maybe_compact(&mut self) {
        if self.items.len() >= COMPACT_AT.max(2 * self.front_len) {
            self.compact();
        }
    }

    fn compact(&mut self) {
        let items = std::mem::take(&mut self.items);
        self.items = pareto_front(items);
        self.front_len = self.items.len();
    }

    pub fn finish(mut self) -> Vec<Scored> {
        self.compact();
        self.items
    }
}

/// Canonical sort followed by the Pareto filter.
pub(crate) fn pareto_front(mut items: Vec<Scored>) -> Vec<Scored> {
    items.sort_by(|a, b| canonical_cmp((&a.0, &a.1), (&b.0, &b.1)));
    let points: Vec<RatePoint> = items.iter().map(|s| s.0).collect();
    let keep = pareto_indices(&points, DOMINANCE_TOL);
    let mut slots: Vec<Option<Scored>> = items.into_iter().map(Some).collect();
    keep.into_iter()
        .map(|i| slots[i].take().expect("index kept once"))
        .collect()
}

/// Evaluates `count` candidates produced by `build(index, params)` in fixed
/// chunks. Chunk boundaries do not depend on the execution strategy, so the
/// result is identical for sequential and parallel runs.
pub(crate) fn evaluate_indexed<B>(
    space: &Space<'_>,
    count: u64,
    exec: Execution,
    build: B,
) -> (Vec<Scored>, u64)
where
    B: Fn(u64, &mut [f64]) + Sync + Send,
{
    let starts: Vec<u64> = (0..count.div_ceil(CHUNK)).map(|c| c * CHUNK).collect();
    let parts = par::map_init(
        &starts,
        exec,
        || (Scratch::default(), vec![0.0; space.len]),
        |(scratch, params), &start| {
            let mut front = LocalFront::default();
            let end = (start + CHUNK).min(count);
            for i in start..end {
                build(i, params);
                if let Some(p) = space.eval(params, scratch) {
                    front.push(p, params);
                }
            }
            front.finish()
        },
    );
    let mut all = LocalFront::default();
    for p in parts {
        all.extend(p);
    }
    (all.finish(), count)
}
