//! Corner points of the four key-storage-leakage-cost regions.
//!
//! For a fixed auxiliary choice each region is a polyhedron
//! `R_k ≤ key bound, R_w ≥ storage bound, Δ ≥ leakage bound, C ≥ E[Γ(A)]`.
//! The evaluators return its extreme point. Key and leakage bounds are the
//! same in all four regions; the storage bound depends on the secret type
//! and is measured against `X` (visible) or `X̃` (hidden):
//!
//! | region | storage bound |
//! |--------|---------------|
//! | `gs`   | `I(X;A) + I(V;X|A,Y)` |
//! | `cs`   | `I(X;A,V) − I(U;Y|A) − I(V;Z|A,U)` |
//! | `hgs`  | `I(X̃;A) + I(V;X̃|A,Y)` |
//! | `hcs`  | `I(X̃;A,V) − I(U;Y|A) − I(V;Z|A,U)` |
//!
//! with key bound `I(V;Y|A,U) − I(V;Z|A,U)` and leakage bound
//! `I(X;A,V,Y) + I(X;Z|A,U) − I(X;Y|A,U)`.

use crate::error::{Error, Result};
use crate::prob::{
    clamp_info, fill_joint, joint_layout, plan_for, var, AuxiliaryChoice, MarginalPlan, Mode,
    SystemModel, NEGATIVE_SLACK,
};

/// `(R_k, R_w, Δ, C)` in bits per source symbol and cost units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub key_rate: f64,
    pub storage_rate: f64,
    pub leakage_rate: f64,
    pub cost: f64,
}

impl RatePoint {
    pub fn new(key_rate: f64, storage_rate: f64, leakage_rate: f64, cost: f64) -> Self {
        Self {
            key_rate,
            storage_rate,
            leakage_rate,
            cost,
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.key_rate, self.storage_rate, self.leakage_rate, self.cost]
    }

    /// Largest componentwise difference.
    pub fn max_abs_diff(&self, other: &RatePoint) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Weak dominance for (max `R_k`, min `R_w`, min `Δ`, min `C`) with slack `tol`.
    pub fn dominates(&self, other: &RatePoint, tol: f64) -> bool {
        self.key_rate >= other.key_rate - tol
            && self.storage_rate <= other.storage_rate + tol
            && self.leakage_rate <= other.leakage_rate + tol
            && self.cost <= other.cost + tol
    }
}

/// The individual information terms behind one evaluation, unclamped
/// except for per-term noise clamping. `E` stands for `X` (visible) or
/// `X̃` (hidden).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionTerms {
    /// `I(V;Y|A,U)`
    pub v_y_given_au: f64,
    /// `I(V;Z|A,U)`
    pub v_z_given_au: f64,
    /// `I(E;A)`
    pub e_a: f64,
    /// `I(V;E|A,Y)`
    pub v_e_given_ay: f64,
    /// `I(E;A,V)`
    pub e_av: f64,
    /// `I(U;Y|A)`
    pub u_y_given_a: f64,
    /// `I(X;A,V,Y)`
    pub x_avy: f64,
    /// `I(X;Z|A,U)`
    pub x_z_given_au: f64,
    /// `I(X;Y|A,U)`
    pub x_y_given_au: f64,
    /// `E[Γ(A)]`
    pub cost: f64,
}

impl RegionTerms {
    pub fn key_bound(&self) -> f64 {
        self.v_y_given_au - self.v_z_given_au
    }

    pub fn generated_storage(&self) -> f64 {
        self.e_a + self.v_e_given_ay
    }

    pub fn chosen_storage(&self) -> f64 {
        self.e_av - self.u_y_given_a - self.v_z_given_au
    }

    pub fn leakage(&self) -> f64 {
        self.x_avy + self.x_z_given_au - self.x_y_given_au
    }
}

/// A rate point together with the terms that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub mode: Mode,
    pub point: RatePoint,
    pub terms: RegionTerms,
    /// The key expression was negative beyond noise and was clamped to zero.
    /// Such an auxiliary choice contributes no point to the region.
    pub key_clamped: bool,
}

/// Clamps values in `[-slack, 0)` to zero; more negative values are kept
/// and reported through `flag`.
fn nonneg(v: f64, flag: &mut bool) -> f64 {
    if v < -NEGATIVE_SLACK {
        *flag = true;
        0.0
    } else {
        v.max(0.0)
    }
}

// Entropy subsets, by role name. E is substituted with X or Xt.
const SUBSETS: &[&[&str]] = &[
    &["X"],            // 0
    &["E"],            // 1
    &["A"],            // 2
    &["E", "A"],       // 3
    &["A", "U"],       // 4
    &["Y", "A", "U"],  // 5
    &["Z", "A", "U"],  // 6
    &["V", "A", "U"],  // 7
    &["V", "Y", "A", "U"], // 8
    &["V", "Z", "A", "U"], // 9
    &["A", "Y"],       // 10
    &["E", "A", "Y"],  // 11
    &["V", "A", "Y"],  // 12
    &["V", "E", "A", "Y"], // 13
    &["A", "V"],       // 14
    &["E", "A", "V"],  // 15
    &["Y", "A"],       // 16
    &["U", "Y", "A"],  // 17
    &["A", "V", "Y"],  // 18
    &["X", "A", "V", "Y"], // 19
    &["X", "A", "U"],  // 20
    &["X", "Z", "A", "U"], // 21
    &["X", "Y", "A", "U"], // 22
];

/// Reusable evaluator for one model and one `(|V|, |U|)` shape. Marginal
/// plans are built once, so repeated evaluations (as in a search) only pay
/// for the joint assembly and the entropy sums.
#[derive(Debug, Clone)]
pub struct Evaluator<'m> {
    model: &'m SystemModel,
    mode: Mode,
    v_size: usize,
    u_size: usize,
    plans: Vec<MarginalPlan>,
}

impl<'m> Evaluator<'m> {
    /// Builds an evaluator for `mode`, which must equal the model's mode.
    pub fn new(model: &'m SystemModel, mode: Mode, v_size: usize, u_size: usize) -> Result<Self> {
        if model.mode() != mode {
            return Err(Error::Structural(format!(
                "region {} requested for a {} model",
                mode.region_id(),
                model.mode()
            )));
        }
        let (names, sizes): (Vec<String>, Vec<usize>) =
            joint_layout(model, v_size, u_size).into_iter().unzip();
        let enc = if mode.is_hidden() { var::XT } else { var::X };
        let plans = SUBSETS
            .iter()
            .map(|subset| {
                let keep: Vec<usize> = subset
                    .iter()
                    .map(|&n| {
                        let n = if n == "E" { enc } else { n };
                        names.iter().position(|m| m == n).expect("role present")
                    })
                    .collect();
                plan_for(&sizes, &keep)
            })
            .collect();
        Ok(Self {
            model,
            mode,
            v_size,
            u_size,
            plans,
        })
    }

    pub fn model(&self) -> &'m SystemModel {
        self.model
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Checks `aux` against the model and this evaluator's shape.
    pub fn check(&self, aux: &AuxiliaryChoice) -> Result<()> {
        aux.check_against(self.model)?;
        if aux.v_size() != self.v_size || aux.u_size() != self.u_size {
            return Err(Error::Structural(format!(
                "evaluator built for |V| = {}, |U| = {}, got {} and {}",
                self.v_size,
                self.u_size,
                aux.v_size(),
                aux.u_size()
            )));
        }
        Ok(())
    }

    pub fn evaluate(&self, aux: &AuxiliaryChoice) -> Result<Evaluation> {
        self.check(aux)?;
        Ok(self.evaluate_unchecked(aux, &mut Scratch::default()))
    }

    /// Evaluation without dimension checks; `aux` must fit the model and shape.
    pub fn evaluate_unchecked(&self, aux: &AuxiliaryChoice, scratch: &mut Scratch) -> Evaluation {
        fill_joint(self.model, aux, &mut scratch.joint);
        let mass = &scratch.joint;
        let mut h = [0.0f64; 23];
        for (hk, plan) in h.iter_mut().zip(&self.plans) {
            *hk = plan.entropy(mass, &mut scratch.marginal);
        }
        let terms = RegionTerms {
            v_y_given_au: clamp_info(h[7] + h[5] - h[4] - h[8]),
            v_z_given_au: clamp_info(h[7] + h[6] - h[4] - h[9]),
            e_a: clamp_info(h[1] + h[2] - h[3]),
            v_e_given_ay: clamp_info(h[12] + h[11] - h[10] - h[13]),
            e_av: clamp_info(h[1] + h[14] - h[15]),
            u_y_given_a: clamp_info(h[4] + h[16] - h[2] - h[17]),
            x_avy: clamp_info(h[0] + h[18] - h[19]),
            x_z_given_au: clamp_info(h[20] + h[6] - h[4] - h[21]),
            x_y_given_au: clamp_info(h[20] + h[5] - h[4] - h[22]),
            cost: expected_cost_unchecked(self.model, aux),
        };
        let mut key_clamped = false;
        let key_rate = nonneg(terms.key_bound(), &mut key_clamped);
        let mut other = false;
        let storage = if self.mode.is_chosen() {
            terms.chosen_storage()
        } else {
            terms.generated_storage()
        };
        let point = RatePoint {
            key_rate,
            storage_rate: nonneg(storage, &mut other),
            leakage_rate: nonneg(terms.leakage(), &mut other),
            cost: terms.cost.max(0.0),
        };
        Evaluation {
            mode: self.mode,
            point,
            terms,
            key_clamped,
        }
    }
}

/// Reusable buffers for [`Evaluator::evaluate_unchecked`].
#[derive(Debug, Default, Clone)]
pub struct Scratch {
    joint: Vec<f64>,
    marginal: Vec<f64>,
}

fn expected_cost_unchecked(model: &SystemModel, aux: &AuxiliaryChoice) -> f64 {
    let pe = model.encoder_marginal();
    let na = model.a_size();
    let mut pa = vec![0.0; na];
    for (e, &p) in pe.iter().enumerate() {
        for (a, q) in pa.iter_mut().enumerate() {
            *q += p * aux.action.get(e, a);
        }
    }
    model.cost().expectation(&pa)
}

/// `E[Γ(A)] = Σ_a P_A(a) Γ(a)` under the auxiliary action channel.
pub fn expected_cost(model: &SystemModel, aux: &AuxiliaryChoice) -> Result<f64> {
    aux.check_against(model)?;
    Ok(expected_cost_unchecked(model, aux))
}

/// Full evaluation for the model's own mode.
pub fn evaluate(model: &SystemModel, aux: &AuxiliaryChoice) -> Result<Evaluation> {
    aux.check_against(model)?;
    Evaluator::new(model, model.mode(), aux.v_size(), aux.u_size())?.evaluate(aux)
}

fn eval_in(model: &SystemModel, aux: &AuxiliaryChoice, mode: Mode) -> Result<RatePoint> {
    if model.mode() != mode {
        return Err(Error::Structural(format!(
            "evaluator for {mode} called on a {} model",
            model.mode()
        )));
    }
    evaluate(model, aux).map(|e| e.point)
}

/// Extreme point of the visible-source, generated-secret region.
pub fn eval_generated_visible(model: &SystemModel, aux: &AuxiliaryChoice) -> Result<RatePoint> {
    eval_in(model, aux, Mode::VisibleGenerated)
}

/// Extreme point of the visible-source, chosen-secret region.
pub fn eval_chosen_visible(model: &SystemModel, aux: &AuxiliaryChoice) -> Result<RatePoint> {
    eval_in(model, aux, Mode::VisibleChosen)
}

/// Extreme point of the hidden-source, generated-secret region.
pub fn eval_generated_hidden(model: &SystemModel, aux: &AuxiliaryChoice) -> Result<RatePoint> {
    eval_in(model, aux, Mode::HiddenGenerated)
}

/// Extreme point of the hidden-source, chosen-secret region.
pub fn eval_chosen_hidden(model: &SystemModel, aux: &AuxiliaryChoice) -> Result<RatePoint> {
    eval_in(model, aux, Mode::HiddenChosen)
}

/// Maps a chosen-secret point to `(R_k, R_w − R_k, Δ, C)`, a point of the
/// generated-secret region with the same source visibility.
pub fn shift_membership(point: &RatePoint, from: Mode, to: Mode) -> Result<RatePoint> {
    if !from.is_chosen() || to.is_chosen() || from.is_hidden() != to.is_hidden() {
        return Err(Error::Structural(format!(
            "shift goes from a chosen-secret region to the generated-secret region of the same source, got {} -> {}",
            from.region_id(),
            to.region_id()
        )));
    }
    if point.storage_rate < point.key_rate - NEGATIVE_SLACK {
        return Err(Error::Consistency(format!(
            "storage rate {} is below key rate {}",
            point.storage_rate, point.key_rate
        )));
    }
    Ok(RatePoint {
        storage_rate: (point.storage_rate - point.key_rate).max(0.0),
        ..*point
    })
}

/// Extreme point plus the auxiliary choice attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionCorner {
    pub point: RatePoint,
    pub aux: AuxiliaryChoice,
    pub mode: Mode,
}

impl RegionCorner {
    pub fn from_aux(model: &SystemModel, aux: AuxiliaryChoice) -> Result<Self> {
        let point = evaluate(model, &aux)?.point;
        Ok(Self {
            point,
            aux,
            mode: model.mode(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{Alphabet, Channel, CostFunction, Distribution, MeasurementChannel};

    fn bin(n: &str) -> Alphabet {
        Alphabet::indexed(n, 2).unwrap()
    }

    fn toy_model(mode: Mode) -> SystemModel {
        let x = bin("X");
        let a = bin("A");
        // Y = X through BSC(0.1 + 0.1a), Z = Y through BSC(0.2)
        let mut rows = Vec::new();
        for xv in 0..2 {
            for av in 0..2 {
                let q = 0.1 + 0.1 * av as f64;
                let mut row = vec![0.0; 4];
                for y in 0..2 {
                    let py = if y == xv { 1.0 - q } else { q };
                    for z in 0..2 {
                        row[y * 2 + z] = py * if z == y { 0.8 } else { 0.2 };
                    }
                }
                rows.push(row);
            }
        }
        let meas = MeasurementChannel::new(&x, &a, bin("Y"), bin("Z"), rows).unwrap();
        let hidden = mode
            .is_hidden()
            .then(|| Channel::bsc(x.clone(), bin("Xt"), 0.0).unwrap());
        SystemModel::new(
            Distribution::uniform(x),
            hidden,
            meas,
            CostFunction::new(a, vec![1.0, 0.0]).unwrap(),
            mode,
        )
        .unwrap()
    }

    fn v_is_x_aux(model: &SystemModel) -> AuxiliaryChoice {
        let e = model.encoder_alphabet().clone();
        let a = model.cost().actions().clone();
        let ea = Alphabet::product("EA", &e, &a);
        AuxiliaryChoice::new(
            Channel::new(e, a, vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap(),
            Channel::deterministic(ea, bin("V"), &[0, 0, 1, 1]).unwrap(),
            Channel::deterministic(bin("V"), Alphabet::indexed("U", 1).unwrap(), &[0, 0]).unwrap(),
        )
    }

    #[test]
    fn wrong_mode_is_structural() {
        let m = toy_model(Mode::VisibleGenerated);
        let aux = v_is_x_aux(&m);
        assert!(eval_generated_visible(&m, &aux).is_ok());
        assert!(matches!(eval_chosen_visible(&m, &aux), Err(Error::Structural(_))));
        assert!(matches!(eval_generated_hidden(&m, &aux), Err(Error::Structural(_))));
    }

    #[test]
    fn degraded_bsc_key_rate_is_secrecy_gap() {
        let m = toy_model(Mode::VisibleGenerated);
        let p = eval_generated_visible(&m, &v_is_x_aux(&m)).unwrap();
        let hb = crate::prob::hb;
        let conv = crate::prob::conv;
        let expect = 0.5 * (hb(conv(0.1, 0.2)) - hb(0.1)) + 0.5 * (hb(conv(0.2, 0.2)) - hb(0.2));
        assert!((p.key_rate - expect).abs() < 1e-12);
        assert!((p.cost - 0.5).abs() < 1e-15);
        assert!((p.key_rate + p.leakage_rate - 1.0).abs() < 1e-12);
    }

    #[test]
    fn shift_rejects_bad_directions() {
        let p = RatePoint::new(0.2, 0.5, 0.3, 0.1);
        assert!(shift_membership(&p, Mode::VisibleGenerated, Mode::VisibleChosen).is_err());
        assert!(shift_membership(&p, Mode::VisibleChosen, Mode::HiddenGenerated).is_err());
        let s = shift_membership(&p, Mode::VisibleChosen, Mode::VisibleGenerated).unwrap();
        assert!((s.storage_rate - 0.3).abs() < 1e-15);
        let bad = RatePoint::new(0.5, 0.2, 0.3, 0.1);
        assert!(matches!(
            shift_membership(&bad, Mode::HiddenChosen, Mode::HiddenGenerated),
            Err(Error::Consistency(_))
        ));
        let zero = RatePoint::new(0.0, 0.2, 0.3, 0.1);
        assert_eq!(
            shift_membership(&zero, Mode::VisibleChosen, Mode::VisibleGenerated).unwrap(),
            zero
        );
    }

    #[test]
    fn expected_cost_of_deterministic_action() {
        let m = toy_model(Mode::VisibleGenerated);
        let mut aux = v_is_x_aux(&m);
        aux.action = Channel::deterministic(bin("X"), bin("A"), &[0, 0]).unwrap();
        assert_eq!(expected_cost(&m, &aux).unwrap(), 1.0);
        aux.action = Channel::deterministic(bin("X"), bin("A"), &[1, 1]).unwrap();
        assert_eq!(expected_cost(&m, &aux).unwrap(), 0.0);
    }
}
