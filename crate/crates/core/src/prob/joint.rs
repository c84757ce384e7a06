//! Dense joint distributions over named variables and the entropy kernels.

use super::dist::{Alphabet, Distribution, PROB_TOLERANCE};
use super::model::{AuxiliaryChoice, SystemModel};
use super::scalar::xlog2x_neg;
use crate::error::{Error, Result};

/// Largest number of atoms a dense joint may hold.
pub const MAX_ATOMS: usize = 10_000_000;

/// Slack under which negative information values count as zero.
pub const NEGATIVE_SLACK: f64 = 1e-12;

/// Role names used for the variables of an assembled joint.
pub mod var {
    pub const X: &str = "X";
    pub const XT: &str = "Xt";
    pub const A: &str = "A";
    pub const Y: &str = "Y";
    pub const Z: &str = "Z";
    pub const V: &str = "V";
    pub const U: &str = "U";
}

/// Dense joint pmf, row-major over `vars` (last variable fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    names: Vec<String>,
    sizes: Vec<usize>,
    mass: Vec<f64>,
}

/// Precomputed atom-to-marginal index map for one variable subset.
#[derive(Debug, Clone)]
pub struct MarginalPlan {
    sizes: Vec<usize>,
    len: usize,
    map: Vec<u32>,
}

impl MarginalPlan {
    pub fn len(&self) -> usize {
        self.len
    }

    /// Sizes of the kept variables, in plan order.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Accumulates `mass` into `out` (cleared first).
    pub fn marginalize_into(&self, mass: &[f64], out: &mut Vec<f64>) {
        debug_assert_eq!(mass.len(), self.map.len());
        out.clear();
        out.resize(self.len, 0.0);
        for (&m, &k) in mass.iter().zip(&self.map) {
            out[k as usize] += m;
        }
    }

    /// Entropy of the marginal of `mass`, using `scratch` as buffer.
    pub fn entropy(&self, mass: &[f64], scratch: &mut Vec<f64>) -> f64 {
        if self.len == 1 {
            return 0.0;
        }
        self.marginalize_into(mass, scratch);
        scratch.iter().map(|&p| xlog2x_neg(p)).sum()
    }
}

impl JointDistribution {
    pub fn new(vars: Vec<(String, usize)>, mut mass: Vec<f64>) -> Result<Self> {
        let (names, sizes): (Vec<_>, Vec<_>) = vars.into_iter().unzip();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Structural(format!("variable `{n}` appears twice")));
            }
        }
        let atoms = atom_count(&sizes)?;
        if mass.len() != atoms {
            return Err(Error::Structural(format!(
                "joint needs {atoms} atoms, got {}",
                mass.len()
            )));
        }
        super::dist::validate_pmf("joint", None, &mut mass)?;
        Ok(Self { names, sizes, mass })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Structural(format!("unknown variable `{name}`")))
    }

    fn indices(&self, vars: &[&str]) -> Result<Vec<usize>> {
        let idx = vars
            .iter()
            .map(|v| self.var_index(v))
            .collect::<Result<Vec<_>>>()?;
        for (i, k) in idx.iter().enumerate() {
            if idx[..i].contains(k) {
                return Err(Error::Structural(format!(
                    "variable `{}` listed twice",
                    self.names[*k]
                )));
            }
        }
        Ok(idx)
    }

    /// Plan for the marginal over `keep` (variable positions, in that order).
    pub fn plan_indices(&self, keep: &[usize]) -> MarginalPlan {
        plan_for(&self.sizes, keep)
    }

    pub fn plan(&self, vars: &[&str]) -> Result<MarginalPlan> {
        Ok(self.plan_indices(&self.indices(vars)?))
    }

    pub fn marginal(&self, vars: &[&str]) -> Result<JointDistribution> {
        let idx = self.indices(vars)?;
        let plan = self.plan_indices(&idx);
        let mut out = Vec::new();
        plan.marginalize_into(&self.mass, &mut out);
        Ok(Self {
            names: idx.iter().map(|&i| self.names[i].clone()).collect(),
            sizes: idx.iter().map(|&i| self.sizes[i]).collect(),
            mass: out,
        })
    }

    /// Marginal of one variable as a [`Distribution`] over `alphabet`.
    pub fn marginal_distribution(&self, var: &str, alphabet: Alphabet) -> Result<Distribution> {
        let m = self.marginal(&[var])?;
        Distribution::new(alphabet, m.mass)
    }

    pub fn entropy_planned(&self, plan: &MarginalPlan, scratch: &mut Vec<f64>) -> f64 {
        plan.entropy(&self.mass, scratch)
    }
}

fn atom_count(sizes: &[usize]) -> Result<usize> {
    let mut n: u128 = 1;
    for &s in sizes {
        if s == 0 {
            return Err(Error::Structural("variable with empty alphabet".into()));
        }
        n *= s as u128;
        if n > MAX_ATOMS as u128 {
            return Err(Error::SizeGuard {
                what: "joint distribution atoms",
                count: sizes.iter().map(|&s| s as u128).product(),
                limit: MAX_ATOMS as u128,
            });
        }
    }
    Ok(n as usize)
}

pub(crate) fn plan_for(sizes: &[usize], keep: &[usize]) -> MarginalPlan {
    let atoms: usize = sizes.iter().product();
    // stride of each full-joint variable inside the marginal (0 = summed out)
    let mut mstride = vec![0usize; sizes.len()];
    let mut len = 1usize;
    for &k in keep.iter().rev() {
        mstride[k] = len;
        len *= sizes[k];
    }
    let mut map = Vec::with_capacity(atoms);
    let mut digits = vec![0usize; sizes.len()];
    let mut cur = 0usize;
    for _ in 0..atoms {
        map.push(cur as u32);
        // increment the mixed-radix counter, last digit fastest
        for d in (0..sizes.len()).rev() {
            digits[d] += 1;
            cur += mstride[d];
            if digits[d] < sizes[d] {
                break;
            }
            cur -= mstride[d] * sizes[d];
            digits[d] = 0;
        }
    }
    MarginalPlan {
        sizes: keep.iter().map(|&k| sizes[k]).collect(),
        len,
        map,
    }
}

fn check_disjoint(sets: &[&[&str]]) -> Result<()> {
    let mut seen: Vec<&str> = Vec::new();
    for set in sets {
        for v in *set {
            if seen.contains(v) {
                return Err(Error::Structural(format!(
                    "variable `{v}` appears in more than one argument set"
                )));
            }
            seen.push(v);
        }
    }
    Ok(())
}

/// `H(vars)` in bits.
pub fn entropy(joint: &JointDistribution, vars: &[&str]) -> Result<f64> {
    let plan = joint.plan(vars)?;
    Ok(joint.entropy_planned(&plan, &mut Vec::new()))
}

/// `H(target | given)` in bits; zero-probability conditioning events
/// contribute nothing.
pub fn conditional_entropy(joint: &JointDistribution, target: &[&str], given: &[&str]) -> Result<f64> {
    check_disjoint(&[target, given])?;
    let both: Vec<&str> = given.iter().chain(target).copied().collect();
    let h = entropy(joint, &both)? - entropy(joint, given)?;
    Ok(clamp_info(h))
}

/// `I(first; second | given)` in bits, clamped at zero for values within
/// floating-point noise below it.
pub fn mutual_information(
    joint: &JointDistribution,
    first: &[&str],
    second: &[&str],
    given: &[&str],
) -> Result<f64> {
    check_disjoint(&[first, second, given])?;
    fn cat<'a>(a: &[&'a str], b: &[&'a str]) -> Vec<&'a str> {
        a.iter().chain(b).copied().collect()
    }
    let i = entropy(joint, &cat(first, given))? + entropy(joint, &cat(second, given))?
        - entropy(joint, &cat(&cat(first, second), given))?
        - entropy(joint, given)?;
    Ok(clamp_info(i))
}

/// Information quantities in `[-slack, 0)` become zero; larger negatives
/// are left visible.
#[inline]
pub fn clamp_info(v: f64) -> f64 {
    if (-NEGATIVE_SLACK..0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

/// Variable layout of an assembled joint.
pub(crate) fn joint_layout(model: &SystemModel, v_size: usize, u_size: usize) -> Vec<(String, usize)> {
    let mut vars = vec![(var::X.to_string(), model.x_size())];
    if model.mode().is_hidden() {
        vars.push((var::XT.to_string(), model.encoder_size()));
    }
    vars.extend([
        (var::A.to_string(), model.a_size()),
        (var::Y.to_string(), model.measurement().y().size()),
        (var::Z.to_string(), model.measurement().z().size()),
        (var::V.to_string(), v_size),
        (var::U.to_string(), u_size),
    ]);
    vars
}

/// Fills `out` with the joint mass per the mode's factorization, in the
/// layout of [`joint_layout`]. Assumes dimensions were checked.
pub(crate) fn fill_joint(model: &SystemModel, aux: &AuxiliaryChoice, out: &mut Vec<f64>) {
    let nx = model.x_size();
    let na = model.a_size();
    let meas = model.measurement();
    let (ny, nz) = (meas.y().size(), meas.z().size());
    let (nv, nu) = (aux.v_size(), aux.u_size());
    let hidden = model.hidden();
    let nt = model.encoder_size();
    let source = model.source().mass();

    let tail = ny * nz * nv * nu;
    out.clear();
    out.resize(nx * if hidden.is_some() { nt } else { 1 } * na * tail, 0.0);

    let mut pos = 0usize;
    for (x, &px) in source.iter().enumerate() {
        let encoder_inputs: Vec<(usize, f64)> = match hidden {
            None => vec![(x, px)],
            Some(h) => (0..nt).map(|t| (t, px * h.get(x, t))).collect(),
        };
        for (e, pe) in encoder_inputs {
            for a in 0..na {
                let pea = pe * aux.action.get(e, a);
                if pea == 0.0 {
                    pos += tail;
                    continue;
                }
                let vrow = aux.v_channel.row(e * na + a);
                for y in 0..ny {
                    for z in 0..nz {
                        let pyz = pea * meas.prob(x, a, y, z);
                        for (v, &pv) in vrow.iter().enumerate() {
                            let pv = pyz * pv;
                            let urow = aux.u_channel.row(v);
                            for &pu in urow {
                                out[pos] = pv * pu;
                                pos += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    debug_assert_eq!(pos, out.len());
}

/// Joint over `(X, A, Y, Z, V, U)` (visible) or `(X, Xt, A, Y, Z, V, U)`
/// (hidden), built from the mode's factorization.
pub fn assemble_joint(model: &SystemModel, aux: &AuxiliaryChoice) -> Result<JointDistribution> {
    aux.check_against(model)?;
    let vars = joint_layout(model, aux.v_size(), aux.u_size());
    let sizes: Vec<usize> = vars.iter().map(|v| v.1).collect();
    atom_count(&sizes)?;
    let mut mass = Vec::new();
    fill_joint(model, aux, &mut mass);
    let total: f64 = mass.iter().sum();
    if (total - 1.0).abs() > PROB_TOLERANCE * mass.len().max(1) as f64 {
        return Err(Error::Consistency(format!("assembled joint sums to {total}")));
    }
    let (names, sizes) = vars.into_iter().unzip();
    Ok(JointDistribution { names, sizes, mass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_var(mass: Vec<f64>) -> JointDistribution {
        JointDistribution::new(vec![("X".into(), 2), ("Y".into(), 2)], mass).unwrap()
    }

    #[test]
    fn independent_variables_share_no_information() {
        let px = [0.3, 0.7];
        let py = [0.6, 0.4];
        let j = two_var(vec![px[0] * py[0], px[0] * py[1], px[1] * py[0], px[1] * py[1]]);
        assert!(mutual_information(&j, &["X"], &["Y"], &[]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn bsc_information_matches_direct_sum() {
        // X uniform through BSC(0.2); four atoms summed by hand
        let j = two_var(vec![0.4, 0.1, 0.1, 0.4]);
        let direct: f64 = [(0.4f64, 0.25f64), (0.1, 0.25), (0.1, 0.25), (0.4, 0.25)]
            .iter()
            .map(|&(p, q)| p * (p / q).log2())
            .sum();
        let i = mutual_information(&j, &["X"], &["Y"], &[]).unwrap();
        assert!((i - direct).abs() < 1e-12);
        assert!((i - 0.278_071_905_112_637_65).abs() < 1e-12);
        assert_eq!(entropy(&j, &["X"]).unwrap(), 1.0);
    }

    #[test]
    fn unknown_or_overlapping_variables_are_structural_errors() {
        let j = two_var(vec![0.25; 4]);
        assert!(matches!(entropy(&j, &["W"]), Err(Error::Structural(_))));
        assert!(matches!(
            mutual_information(&j, &["X"], &["X"], &[]),
            Err(Error::Structural(_))
        ));
        assert!(conditional_entropy(&j, &["X"], &["X"]).is_err());
    }

    #[test]
    fn marginal_plan_matches_marginal() {
        let j = JointDistribution::new(
            vec![("A".into(), 2), ("B".into(), 3), ("C".into(), 2)],
            (1..=12).map(|k| k as f64 / 78.0).collect(),
        )
        .unwrap();
        let m = j.marginal(&["C", "A"]).unwrap();
        // C major, A minor
        let expect = |c: usize, a: usize| -> f64 {
            (0..3).map(|b| ((a * 6 + b * 2 + c) + 1) as f64 / 78.0).sum()
        };
        for c in 0..2 {
            for a in 0..2 {
                assert!((m.mass()[c * 2 + a] - expect(c, a)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn clamp_only_touches_noise() {
        assert_eq!(clamp_info(-5e-13), 0.0);
        assert_eq!(clamp_info(-1e-9), -1e-9);
        assert_eq!(clamp_info(0.25), 0.25);
    }
}
