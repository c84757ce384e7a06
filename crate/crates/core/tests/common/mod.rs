#![allow(dead_code)]

use keyregion::prob::{
    Alphabet, AuxiliaryChoice, Channel, CostFunction, Distribution, MeasurementChannel, Mode,
    SystemModel,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn alpha(name: &str, n: usize) -> Alphabet {
    Alphabet::indexed(name, n).unwrap()
}

/// Random pmf; roughly one row in five gets a forced zero.
pub fn pmf(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
    if n > 1 && rng.random::<f64>() < 0.2 {
        v[rng.random_range(0..n)] = 0.0;
    }
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

pub fn channel(rng: &mut ChaCha8Rng, input: Alphabet, output: Alphabet) -> Channel {
    let rows = (0..input.size()).map(|_| pmf(rng, output.size())).collect();
    Channel::new(input, output, rows).unwrap()
}

#[derive(Clone, Copy, Debug)]
pub struct Dims {
    pub x: usize,
    pub xt: usize,
    pub a: usize,
    pub y: usize,
    pub z: usize,
}

impl Dims {
    pub fn binary() -> Self {
        Dims { x: 2, xt: 2, a: 2, y: 2, z: 2 }
    }

    pub fn random(rng: &mut ChaCha8Rng, max: usize) -> Self {
        let mut d = || rng.random_range(1..=max);
        Dims { x: d(), xt: d(), a: d(), y: d(), z: d() }
    }
}

pub fn random_model(rng: &mut ChaCha8Rng, d: Dims, mode: Mode) -> SystemModel {
    let x = alpha("X", d.x);
    let a = alpha("A", d.a);
    let xa = Alphabet::product("XA", &x, &a);
    let yz = Alphabet::product("YZ", &alpha("Y", d.y), &alpha("Z", d.z));
    let rows = (0..xa.size()).map(|_| pmf(rng, yz.size())).collect();
    let meas = MeasurementChannel::new(&x, &a, alpha("Y", d.y), alpha("Z", d.z), rows).unwrap();
    let hidden = mode.is_hidden().then(|| channel(rng, x.clone(), alpha("Xt", d.xt)));
    let cost = (0..d.a).map(|_| rng.random::<f64>()).collect();
    SystemModel::new(
        Distribution::new(x.clone(), pmf(rng, d.x)).unwrap(),
        hidden,
        meas,
        CostFunction::new(a, cost).unwrap(),
        mode,
    )
    .unwrap()
}

pub fn random_aux(rng: &mut ChaCha8Rng, model: &SystemModel, nv: usize, nu: usize) -> AuxiliaryChoice {
    let e = model.encoder_alphabet().clone();
    let a = model.cost().actions().clone();
    let ea = Alphabet::product("EA", &e, &a);
    let mut aux = AuxiliaryChoice::new(
        channel(rng, e, a),
        channel(rng, ea, alpha("V", nv)),
        channel(rng, alpha("V", nv), alpha("U", nu)),
    );
    aux.allow_oversize = true;
    aux
}

/// Joint built atom by atom from the factorization into a sparse map keyed
/// by `(x, xt, a, y, z, v, u)`; `xt` is `x` for visible models.
pub fn oracle_joint(model: &SystemModel, aux: &AuxiliaryChoice) -> HashMap<[usize; 7], f64> {
    let mut out = HashMap::new();
    let ne = model.encoder_size();
    let meas = model.measurement();
    for x in 0..model.x_size() {
        let px = model.source().mass()[x];
        for t in 0..ne {
            let pt = match model.hidden() {
                Some(h) => h.get(x, t),
                None if t == x => 1.0,
                None => continue,
            };
            for a in 0..model.a_size() {
                for y in 0..meas.y().size() {
                    for z in 0..meas.z().size() {
                        for v in 0..aux.v_size() {
                            for u in 0..aux.u_size() {
                                let p = px
                                    * pt
                                    * aux.action.get(t, a)
                                    * meas.prob(x, a, y, z)
                                    * aux.v_channel.get(t * model.a_size() + a, v)
                                    * aux.u_channel.get(v, u);
                                if p > 0.0 {
                                    *out.entry([x, t, a, y, z, v, u]).or_insert(0.0) += p;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

pub const X: usize = 0;
pub const XT: usize = 1;
pub const A: usize = 2;
pub const Y: usize = 3;
pub const Z: usize = 4;
pub const V: usize = 5;
pub const U: usize = 6;

pub fn h(joint: &HashMap<[usize; 7], f64>, vars: &[usize]) -> f64 {
    let mut m: HashMap<Vec<usize>, f64> = HashMap::new();
    for (k, p) in joint {
        *m.entry(vars.iter().map(|&i| k[i]).collect()).or_insert(0.0) += p;
    }
    m.values().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

/// `I(s; t | c)` from four entropies.
pub fn mi(joint: &HashMap<[usize; 7], f64>, s: &[usize], t: &[usize], c: &[usize]) -> f64 {
    let cat = |a: &[usize], b: &[usize]| -> Vec<usize> { a.iter().chain(b).copied().collect() };
    h(joint, &cat(s, c)) + h(joint, &cat(t, c)) - h(joint, &cat(&cat(s, t), c)) - h(joint, c)
}

/// Oracle rate tuple `(key bound, generated storage, chosen storage,
/// leakage, cost)`, unclamped.
pub fn oracle_terms(model: &SystemModel, aux: &AuxiliaryChoice) -> [f64; 5] {
    let j = oracle_joint(model, aux);
    let e = if model.mode().is_hidden() { XT } else { X };
    let key = mi(&j, &[V], &[Y], &[A, U]) - mi(&j, &[V], &[Z], &[A, U]);
    let gen = mi(&j, &[e], &[A], &[]) + mi(&j, &[V], &[e], &[A, Y]);
    let chosen = mi(&j, &[e], &[A, V], &[]) - mi(&j, &[U], &[Y], &[A]) - mi(&j, &[V], &[Z], &[A, U]);
    let leak = mi(&j, &[X], &[A, V, Y], &[]) + mi(&j, &[X], &[Z], &[A, U]) - mi(&j, &[X], &[Y], &[A, U]);
    let mut pa = vec![0.0; model.a_size()];
    for (k, p) in &j {
        pa[k[A]] += p;
    }
    [key, gen, chosen, leak, model.cost().expectation(&pa)]
}
