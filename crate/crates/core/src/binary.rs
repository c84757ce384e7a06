//! Analytic path for the binary-symmetric example.
//!
//! The source `X` is uniform binary, the action channel `P_{A|X}` is a BSC
//! with crossover `alpha`, the legitimate measurement `P_{Y|AX}(·|a,·)` is a
//! BSC with crossover `p_a`, and the eavesdropper sees `Y` through a
//! further BSC with crossover `p`. Fixing `V = (A, X)`, boundary points of
//! the key-leakage trade-off follow from minimizing `H(Z|A,U)` for a fixed
//! `H(Y|A,U)`. When the convexity precondition holds, that minimum is
//! `½ ḡ(f̄⁻¹(2 H(Y|A,U)))` and is attained by BSC reverse channels
//! `P_{AX|U}(a,·|·)` with a common crossover `x̄`.

use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::prob::{
    bisect_increasing, conv, hb, Alphabet, AuxiliaryChoice, Channel, CostFunction, Distribution,
    MeasurementChannel, Mode, SystemModel, MAX_BISECTION_ITERS,
};
use crate::regions;

const EDGE_SLACK: f64 = 1e-12;

/// Parameters of the binary example.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryExampleParams {
    /// Crossover of the action channel `P_{A|X}`.
    pub alpha: f64,
    /// Crossover of `P_{Y|AX}(·|0,·)`.
    pub p0: f64,
    /// Crossover of `P_{Y|AX}(·|1,·)`.
    pub p1: f64,
    /// Crossover of the eavesdropper channel `P_{Z|Y}`.
    pub p: f64,
    /// Cost of action 0.
    pub gamma0: f64,
    /// Cost of action 1.
    pub gamma1: f64,
}

impl Default for BinaryExampleParams {
    fn default() -> Self {
        Self::reference()
    }
}

impl BinaryExampleParams {
    /// The ring-oscillator parameter set: `α = 0.2`, `p0 = 0.03`,
    /// `p1 = 0.05`, `p = 0.1277`, `Γ = (0.5, 0.3)`.
    pub const fn reference() -> Self {
        Self {
            alpha: 0.2,
            p0: 0.03,
            p1: 0.05,
            p: 0.1277,
            gamma0: 0.5,
            gamma1: 0.3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("alpha", self.alpha),
            ("p0", self.p0),
            ("p1", self.p1),
            ("p", self.p),
        ] {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain(format!("{name} = {v} is not in [0, 1]")));
            }
        }
        for (name, v) in [("gamma0", self.gamma0), ("gamma1", self.gamma1)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Domain(format!("{name} = {v} is not a nonnegative cost")));
            }
        }
        Ok(())
    }

    /// Eavesdropper crossover for action `a`: `p ∗ p_a`.
    pub fn eve_crossover(&self, a: usize) -> f64 {
        conv(self.p, self.pa(a))
    }

    fn pa(&self, a: usize) -> f64 {
        if a == 0 {
            self.p0
        } else {
            self.p1
        }
    }

    /// `H(Y|A,X) = ½ (H_b(p0) + H_b(p1))`.
    pub fn h_y_given_ax(&self) -> f64 {
        0.5 * (hb(self.p0) + hb(self.p1))
    }

    /// `H(Z|A,X) = ½ (H_b(p∗p0) + H_b(p∗p1))`.
    pub fn h_z_given_ax(&self) -> f64 {
        0.5 * (hb(self.eve_crossover(0)) + hb(self.eve_crossover(1)))
    }

    /// The full system model (visible source, generated secret).
    pub fn model(&self) -> Result<SystemModel> {
        self.validate()?;
        let bin = |n: &str| Alphabet::indexed(n, 2).expect("nonempty");
        let x = bin("X");
        let a = bin("A");
        let mut rows = Vec::with_capacity(4);
        for xv in 0..2 {
            for av in 0..2 {
                let q = self.pa(av);
                let mut row = vec![0.0; 4];
                for y in 0..2 {
                    let py = if y == xv { 1.0 - q } else { q };
                    for z in 0..2 {
                        let pz = if z == y { 1.0 - self.p } else { self.p };
                        row[y * 2 + z] = py * pz;
                    }
                }
                rows.push(row);
            }
        }
        let measurement = MeasurementChannel::new(&x, &a, bin("Y"), bin("Z"), rows)?;
        SystemModel::new(
            Distribution::uniform(x),
            None,
            measurement,
            CostFunction::new(a, vec![self.gamma0, self.gamma1])?,
            Mode::VisibleGenerated,
        )
    }

    /// `P_{A|X} = BSC(α)`, `V = (A, X)`, `U` constant.
    pub fn fixed_aux(&self) -> Result<AuxiliaryChoice> {
        self.validate()?;
        let bin = |n: &str| Alphabet::indexed(n, 2).expect("nonempty");
        let xa = Alphabet::product("XA", &bin("X"), &bin("A"));
        let v = Alphabet::indexed("V", 4)?;
        Ok(AuxiliaryChoice::new(
            Channel::bsc(bin("X"), bin("A"), self.alpha)?,
            Channel::deterministic(xa, v.clone(), &[0, 1, 2, 3])?,
            Channel::deterministic(v, Alphabet::indexed("U", 1)?, &[0, 0, 0, 0])?,
        ))
    }

    /// Auxiliary choice realizing the BSC reverse channels with crossover
    /// `x̄`: `V = (A, X)`, `P(A = a | U) = ½` and `X | (A, U)` a BSC(`x̄`)
    /// around `A` for `U = 0` and around `1 − A` for `U = 1`. The induced
    /// action channel is uniform (`A` independent of `X`).
    pub fn boundary_aux(&self, x_bar: f64) -> Result<AuxiliaryChoice> {
        check_half_interval("x̄", x_bar)?;
        let bin = |n: &str| Alphabet::indexed(n, 2).expect("nonempty");
        let xa = Alphabet::product("XA", &bin("X"), &bin("A"));
        let v = Alphabet::indexed("V", 4)?;
        let mut u_rows = Vec::with_capacity(4);
        for x in 0..2 {
            for a in 0..2 {
                u_rows.push(if x == a {
                    vec![1.0 - x_bar, x_bar]
                } else {
                    vec![x_bar, 1.0 - x_bar]
                });
            }
        }
        Ok(AuxiliaryChoice::new(
            Channel::new(bin("X"), bin("A"), vec![vec![0.5, 0.5], vec![0.5, 0.5]])?,
            Channel::deterministic(xa, v.clone(), &[0, 1, 2, 3])?,
            Channel::new(v, bin("U"), u_rows)?,
        ))
    }
}

fn check_half_interval(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && (0.0..=0.5).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {x} is not in [0, 0.5]")))
    }
}

/// The two scaled reverse-channel ratios `2x00 / (1 − 2(x11 − x00))` and
/// `2x11 / (1 − 2(x00 − x11))`.
fn pair_ratios(x00: f64, x11: f64) -> Result<(f64, f64)> {
    check_half_interval("x00", x00)?;
    check_half_interval("x11", x11)?;
    let d0 = 1.0 - 2.0 * (x11 - x00);
    let d1 = 1.0 - 2.0 * (x00 - x11);
    if d0 == 0.0 || d1 == 0.0 {
        return Err(Error::Domain(format!(
            "ratio denominator vanishes at ({x00}, {x11})"
        )));
    }
    let fix = |r: f64| -> Result<f64> {
        if (-EDGE_SLACK..=1.0 + EDGE_SLACK).contains(&r) {
            Ok(r.clamp(0.0, 1.0))
        } else {
            Err(Error::Domain(format!(
                "reverse-channel ratio {r} at ({x00}, {x11}) is not in [0, 1]"
            )))
        }
    };
    Ok((fix(2.0 * x00 / d0)?, fix(2.0 * x11 / d1)?))
}

/// `f(x00, x11) = H_b(p0 ∗ r0) + H_b(p1 ∗ r1)`.
pub fn f_pair(x00: f64, x11: f64, params: &BinaryExampleParams) -> Result<f64> {
    let (r0, r1) = pair_ratios(x00, x11)?;
    Ok(hb(conv(params.p0, r0)) + hb(conv(params.p1, r1)))
}

/// `g(x00, x11) = H_b(p ∗ p0 ∗ r0) + H_b(p ∗ p1 ∗ r1)`.
pub fn g_pair(x00: f64, x11: f64, params: &BinaryExampleParams) -> Result<f64> {
    let (r0, r1) = pair_ratios(x00, x11)?;
    Ok(hb(conv(params.eve_crossover(0), r0)) + hb(conv(params.eve_crossover(1), r1)))
}

fn f_bar_raw(x: f64, params: &BinaryExampleParams) -> f64 {
    hb(conv(params.p0, x)) + hb(conv(params.p1, x))
}

fn g_bar_raw(x: f64, params: &BinaryExampleParams) -> f64 {
    hb(conv(params.eve_crossover(0), x)) + hb(conv(params.eve_crossover(1), x))
}

/// `f̄(x̄) = f(x̄/2, x̄/2) = H_b(p0 ∗ x̄) + H_b(p1 ∗ x̄)`.
pub fn f_bar(x_bar: f64, params: &BinaryExampleParams) -> Result<f64> {
    check_half_interval("x̄", x_bar)?;
    Ok(f_bar_raw(x_bar, params))
}

/// `ḡ(x̄) = g(x̄/2, x̄/2) = H_b(p∗p0 ∗ x̄) + H_b(p∗p1 ∗ x̄)`.
pub fn g_bar(x_bar: f64, params: &BinaryExampleParams) -> Result<f64> {
    check_half_interval("x̄", x_bar)?;
    Ok(g_bar_raw(x_bar, params))
}

/// The unique `x̄ ∈ [0, 0.5]` with `f̄(x̄) = ν`, for
/// `ν ∈ [H_b(p0) + H_b(p1), 2]`.
pub fn f_bar_inverse(nu: f64, params: &BinaryExampleParams) -> Result<f64> {
    let lo = f_bar_raw(0.0, params);
    if !nu.is_finite() || nu < lo - EDGE_SLACK || nu > 2.0 + EDGE_SLACK {
        return Err(Error::Domain(format!("ν = {nu} is not in [{lo}, 2]")));
    }
    Ok(bisect_increasing(
        |x| f_bar_raw(x, params),
        nu,
        0.0,
        0.5,
        0.0,
        MAX_BISECTION_ITERS,
    ))
}

fn fold_half(q: f64) -> f64 {
    q.min(1.0 - q)
}

/// Sufficient condition for `ḡ(f̄⁻¹(ν))` to be convex:
/// `p̃ ∗ p̃0 ≥ p̃1` and `p̃ ∗ p̃1 ≥ p̃0`, with `q̃ = min(q, 1 − q)`.
pub fn convexity_precondition(params: &BinaryExampleParams) -> bool {
    let (p, p0, p1) = (fold_half(params.p), fold_half(params.p0), fold_half(params.p1));
    conv(p, p0) >= p1 && conv(p, p1) >= p0
}

fn require_precondition(params: &BinaryExampleParams) -> Result<()> {
    params.validate()?;
    if convexity_precondition(params) {
        Ok(())
    } else {
        Err(Error::Refused(format!(
            "convexity precondition fails for p = {}, p0 = {}, p1 = {}",
            params.p, params.p0, params.p1
        )))
    }
}

/// Lower bound `H(Z|A,U) ≥ ½ ḡ(f̄⁻¹(2 H(Y|A,U)))`.
pub fn jensen_lower_bound(h_y_given_au: f64, params: &BinaryExampleParams) -> Result<f64> {
    require_precondition(params)?;
    let x_bar = f_bar_inverse(2.0 * h_y_given_au, params)?;
    Ok(0.5 * g_bar_raw(x_bar, params))
}

/// Boundary `(R_k, Δ)` reached by BSC reverse channels with crossover `x̄`.
pub fn boundary_tradeoff(x_bar: f64, params: &BinaryExampleParams) -> Result<(f64, f64)> {
    check_half_interval("x̄", x_bar)?;
    require_precondition(params)?;
    let h_yau = 0.5 * f_bar_raw(x_bar, params);
    let key = h_yau - params.h_y_given_ax() - jensen_lower_bound(h_yau, params)?
        + params.h_z_given_ax();
    // H(X) = 1 for the uniform binary source
    Ok((key, 1.0 - key))
}

/// `(R_w, C)` for `V = (A, X)` and the fixed action channel `BSC(α)`.
pub fn fixed_rates(params: &BinaryExampleParams) -> Result<(f64, f64)> {
    let model = params.model()?;
    let aux = params.fixed_aux()?;
    let ev = regions::evaluate(&model, &aux)?;
    Ok((ev.point.storage_rate, ev.point.cost))
}

/// One row of the `x̄` sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffRow {
    pub x_bar: f64,
    pub key_rate: f64,
    pub leakage_rate: f64,
}

/// Sweep points `0, r, 2r, …` up to `0.5`, with `0.5` always included.
pub fn sweep_points(resolution: f64) -> Result<Vec<f64>> {
    if !resolution.is_finite() || resolution <= 0.0 || resolution > 0.5 {
        return Err(Error::Domain(format!(
            "sweep resolution {resolution} is not in (0, 0.5]"
        )));
    }
    let n = (0.5 / resolution + 1e-9).floor() as usize;
    let mut pts: Vec<f64> = (0..=n).map(|k| (k as f64 * resolution).min(0.5)).collect();
    if 0.5 - pts[pts.len() - 1] > 1e-12 {
        pts.push(0.5);
    }
    Ok(pts)
}

/// `boundary_tradeoff` over the sweep grid.
pub fn tradeoff_sweep(
    params: &BinaryExampleParams,
    resolution: f64,
    exec: Execution,
) -> Result<Vec<TradeoffRow>> {
    require_precondition(params)?;
    let pts = sweep_points(resolution)?;
    par::map(&pts, exec, |&x| {
        boundary_tradeoff(x, params).map(|(k, d)| TradeoffRow {
            x_bar: x,
            key_rate: k,
            leakage_rate: d,
        })
    })
    .into_iter()
    .collect()
}

/// Largest key rate over `x̄ ∈ [0, 0.5]`: best sweep point (ties to the
/// smaller `x̄`), then golden-section refinement between its neighbours.
pub fn max_key_rate(rows: &[TradeoffRow], params: &BinaryExampleParams) -> Result<TradeoffRow> {
    let (i, best) = rows
        .iter()
        .enumerate()
        .fold(None::<(usize, &TradeoffRow)>, |acc, (i, r)| match acc {
            Some((_, b)) if b.key_rate >= r.key_rate => acc,
            _ => Some((i, r)),
        })
        .ok_or_else(|| Error::Domain("empty sweep".into()))?;
    let lo = if i > 0 { rows[i - 1].x_bar } else { best.x_bar };
    let hi = rows.get(i + 1).map_or(best.x_bar, |r| r.x_bar);
    let key = |x: f64| boundary_tradeoff(x, params).map(|r| r.0);
    let refined = golden_section_max(key, lo, hi, 1e-12)?;
    let (k, d) = boundary_tradeoff(refined, params)?;
    if k > best.key_rate {
        Ok(TradeoffRow {
            x_bar: refined,
            key_rate: k,
            leakage_rate: d,
        })
    } else {
        Ok(*best)
    }
}

fn golden_section_max<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    if b - a <= tol {
        return Ok(a);
    }
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { c } else { d })
}

/// Reference values and tolerances checked by [`reproduce_example`].
pub mod reference {
    pub const STORAGE_RATE: f64 = 0.4731;
    pub const STORAGE_TOL: f64 = 5e-4;
    pub const COST: f64 = 0.4;
    pub const COST_TOL: f64 = 1e-9;
    pub const MAX_KEY_RATE: f64 = 0.3876;
    pub const MAX_KEY_TOL: f64 = 5e-4;
    pub const LEAKAGE_AT_MAX: f64 = 0.6124;
    pub const LEAKAGE_TOL: f64 = 5e-4;
    pub const SUM_TOL: f64 = 1e-9;
    pub const SWEEP_RESOLUTION: f64 = 1.0 / 1024.0;
}

/// One observed-versus-expected line of the example report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub observed: Option<f64>,
    pub expected: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.observed
            .is_some_and(|o| (o - self.expected).abs() <= self.tolerance)
    }
}

/// Outcome of reproducing the binary example.
#[derive(Debug, Clone, PartialEq)]
pub struct ExampleReport {
    pub params: BinaryExampleParams,
    /// Parameters differ from [`BinaryExampleParams::reference`].
    pub custom: bool,
    pub precondition: bool,
    pub checks: Vec<Check>,
    pub sweep: Vec<TradeoffRow>,
    pub max_key: Option<TradeoffRow>,
    /// Largest `|R_k + Δ − H(X)|` over the sweep.
    pub sum_deviation: Option<f64>,
}

impl ExampleReport {
    pub fn sum_ok(&self) -> bool {
        self.sum_deviation.is_some_and(|d| d <= reference::SUM_TOL)
    }

    /// For the reference parameters every check, the precondition and the
    /// sum identity must hold. For custom parameters the value checks are
    /// informational.
    pub fn passed(&self) -> bool {
        let structural = self.precondition && self.sum_ok();
        if self.custom {
            structural
        } else {
            structural && self.checks.iter().all(Check::passed)
        }
    }
}

/// Runs the fixed rates, the convexity precondition and the `x̄` sweep, and
/// compares against the reference values.
pub fn reproduce_example(
    params: &BinaryExampleParams,
    resolution: f64,
    exec: Execution,
) -> Result<ExampleReport> {
    use reference::*;
    params.validate()?;
    let (storage, cost) = fixed_rates(params)?;
    let precondition = convexity_precondition(params);
    let (sweep, max_key, sum_deviation) = if precondition {
        let sweep = tradeoff_sweep(params, resolution, exec)?;
        let best = max_key_rate(&sweep, params)?;
        let dev = sweep
            .iter()
            .map(|r| (r.key_rate + r.leakage_rate - 1.0).abs())
            .fold(0.0, f64::max);
        (sweep, Some(best), Some(dev))
    } else {
        (Vec::new(), None, None)
    };
    let checks = vec![
        Check {
            name: "storage rate R_w",
            observed: Some(storage),
            expected: STORAGE_RATE,
            tolerance: STORAGE_TOL,
        },
        Check {
            name: "expected cost C",
            observed: Some(cost),
            expected: COST,
            tolerance: COST_TOL,
        },
        Check {
            name: "maximum key rate R_k*",
            observed: max_key.map(|r| r.key_rate),
            expected: MAX_KEY_RATE,
            tolerance: MAX_KEY_TOL,
        },
        Check {
            name: "leakage at R_k*",
            observed: max_key.map(|r| r.leakage_rate),
            expected: LEAKAGE_AT_MAX,
            tolerance: LEAKAGE_TOL,
        },
    ];
    Ok(ExampleReport {
        params: *params,
        custom: *params != BinaryExampleParams::reference(),
        precondition,
        checks,
        sweep,
        max_key,
        sum_deviation,
    })
}

/// [`reproduce_example`] with the reference parameters and default sweep.
pub fn reproduce_paper_example() -> Result<ExampleReport> {
    reproduce_example(
        &BinaryExampleParams::reference(),
        reference::SWEEP_RESOLUTION,
        Execution::default(),
    )
}
