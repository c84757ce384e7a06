mod common;

use common::*;
use keyregion::binary::BinaryExampleParams;
use keyregion::prob::{
    assemble_joint, mutual_information, Alphabet, AuxiliaryChoice, Channel, CostFunction,
    Distribution, MeasurementChannel, Mode, SystemModel,
};
use keyregion::regions::{
    eval_chosen_hidden, eval_chosen_visible, eval_generated_hidden, eval_generated_visible,
    evaluate, expected_cost, shift_membership, Evaluator, RatePoint,
};
use keyregion::Error;

fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!((a - b).abs() <= tol, "{what}: {a} vs {b}");
}

#[test]
fn every_term_matches_the_sparse_oracle() {
    let mut r = rng(11);
    for trial in 0..120 {
        let mode = Mode::ALL[trial % 4];
        let d = Dims::random(&mut r, 3);
        let model = random_model(&mut r, d, mode);
        let (nv, nu) = (r_size(&mut r), r_size(&mut r));
        let aux = random_aux(&mut r, &model, nv, nu);
        let ev = evaluate(&model, &aux).unwrap();
        let [key, gen, chosen, leak, cost] = oracle_terms(&model, &aux);
        let t = &ev.terms;
        assert_close(t.key_bound(), key, 1e-10, "key");
        assert_close(t.generated_storage(), gen, 1e-10, "generated storage");
        assert_close(t.chosen_storage(), chosen, 1e-10, "chosen storage");
        assert_close(t.leakage(), leak, 1e-10, "leakage");
        assert_close(t.cost, cost, 1e-12, "cost");
        let storage = if mode.is_chosen() { chosen } else { gen };
        if key >= 0.0 {
            assert_close(ev.point.key_rate, key, 1e-10, "clamped key");
        }
        assert_close(ev.point.storage_rate, storage.max(0.0), 1e-10, "storage rate");
    }
}

fn r_size(r: &mut rand_chacha::ChaCha8Rng) -> usize {
    use rand::Rng;
    r.random_range(1..=3)
}

#[test]
fn independent_hidden_observation() {
    // X̃ independent of X: nothing the encoder does can depend on X
    let mut r = rng(5);
    for _ in 0..10 {
        let mut model = random_model(&mut r, Dims::binary(), Mode::HiddenGenerated);
        let x = model.source().alphabet().clone();
        let half = Channel::bsc(x, alpha("Xt", 2), 0.5).unwrap();
        model = SystemModel::new(
            model.source().clone(),
            Some(half),
            model.measurement().clone(),
            model.cost().clone(),
            Mode::HiddenGenerated,
        )
        .unwrap();
        let aux = random_aux(&mut r, &model, 2, 2);
        let j = assemble_joint(&model, &aux).unwrap();
        let ind = mutual_information(&j, &["X"], &["Xt", "A", "V"], &[]).unwrap();
        assert!(ind.abs() < 1e-12);
        let ev = evaluate(&model, &aux).unwrap();
        let [_, _, _, leak, _] = oracle_terms(&model, &aux);
        assert_close(ev.terms.leakage(), leak, 1e-10, "leakage");
        let o = oracle_joint(&model, &aux);
        assert_close(ev.terms.x_avy, mi(&o, &[X], &[A, V, Y], &[]), 1e-10, "I(X;A,V,Y)");
    }
}

#[test]
fn hidden_storage_is_at_least_action_information() {
    let mut r = rng(6);
    for _ in 0..50 {
        let d = Dims::random(&mut r, 3);
        let model = random_model(&mut r, d, Mode::HiddenGenerated);
        let aux = random_aux(&mut r, &model, 2, 2);
        let ev = evaluate(&model, &aux).unwrap();
        assert!(ev.point.storage_rate >= ev.terms.e_a - 1e-10);
    }
}

#[test]
fn identity_hidden_channel_collapses_to_visible() {
    let mut r = rng(7);
    for _ in 0..50 {
        let d = Dims::random(&mut r, 3);
        let vis = random_model(&mut r, d, Mode::VisibleGenerated);
        let x = vis.source().alphabet().clone();
        let n = x.size();
        let id = Channel::deterministic(x, alpha("Xt", n), &(0..n).collect::<Vec<_>>()).unwrap();
        let hid = SystemModel::new(
            vis.source().clone(),
            Some(id),
            vis.measurement().clone(),
            vis.cost().clone(),
            Mode::HiddenGenerated,
        )
        .unwrap();
        let aux = random_aux(&mut r, &vis, 2, 2);
        let hid_aux = AuxiliaryChoice {
            action: Channel::from_flat(hid.encoder_alphabet().clone(), aux.action.output().clone(), aux.action.matrix().to_vec()).unwrap(),
            ..aux.clone()
        };
        let g = eval_generated_visible(&vis, &aux).unwrap();
        let gh = eval_generated_hidden(&hid, &hid_aux).unwrap();
        assert!(g.max_abs_diff(&gh) < 1e-10, "{g:?} vs {gh:?}");
        let c = eval_chosen_visible(&vis.with_mode(Mode::VisibleChosen).unwrap(), &aux).unwrap();
        let ch = eval_chosen_hidden(&hid.with_mode(Mode::HiddenChosen).unwrap(), &hid_aux).unwrap();
        assert!(c.max_abs_diff(&ch) < 1e-10);
    }
}

#[test]
fn storage_decomposition_and_shift() {
    let mut r = rng(8);
    for trial in 0..100 {
        let mode = if trial % 2 == 0 { Mode::VisibleChosen } else { Mode::HiddenChosen };
        let d = Dims::random(&mut r, 3);
        let model = random_model(&mut r, d, mode);
        let aux = random_aux(&mut r, &model, 3, 2);
        let ch = evaluate(&model, &aux).unwrap();
        let t = ch.terms;
        assert_close(t.chosen_storage(), t.generated_storage() + t.key_bound(), 1e-10, "decomposition");
        let gen_model = model.with_mode(mode.counterpart()).unwrap();
        let gen = evaluate(&gen_model, &aux).unwrap();
        if !ch.key_clamped && ch.point.storage_rate >= ch.point.key_rate {
            let shifted = shift_membership(&ch.point, mode, mode.counterpart()).unwrap();
            assert!(shifted.max_abs_diff(&gen.point) < 1e-10);
        }
    }
}

#[test]
fn singleton_auxiliaries() {
    let mut r = rng(9);
    let model = random_model(&mut r, Dims { a: 1, ..Dims::binary() }, Mode::VisibleChosen);
    let x = model.source().alphabet().clone();
    let a = model.cost().actions().clone();
    let one = |n| alpha(n, 1);
    let aux = AuxiliaryChoice::new(
        Channel::deterministic(x.clone(), a.clone(), &[0, 0]).unwrap(),
        Channel::deterministic(Alphabet::product("XA", &x, &a), one("V"), &[0, 0]).unwrap(),
        Channel::deterministic(one("V"), one("U"), &[0]).unwrap(),
    );
    let p = eval_chosen_visible(&model, &aux).unwrap();
    assert_eq!(p.key_rate, 0.0);
    assert!(p.storage_rate.abs() < 1e-12);
    // joint reduces to P_X · P_{YZ|X,a0}
    let j = assemble_joint(&model, &aux).unwrap();
    let mass = j.mass();
    for xv in 0..2 {
        for yz in 0..4 {
            let expect = model.source().mass()[xv] * model.measurement().channel().get(xv, yz);
            assert_close(mass[xv * 4 + yz], expect, 1e-15, "joint atom");
        }
    }
}

#[test]
fn fully_informative_u_kills_the_key() {
    let mut r = rng(10);
    for _ in 0..20 {
        let model = random_model(&mut r, Dims::binary(), Mode::VisibleGenerated);
        let mut aux = random_aux(&mut r, &model, 3, 3);
        aux.u_channel = Channel::deterministic(alpha("V", 3), alpha("U", 3), &[0, 1, 2]).unwrap();
        let ev = evaluate(&model, &aux).unwrap();
        assert!(ev.point.key_rate.abs() < 1e-10);
        assert!(!ev.key_clamped);
    }
}

#[test]
fn eavesdropper_with_legitimate_view_gets_no_key() {
    let mut r = rng(12);
    for _ in 0..20 {
        let m = random_model(&mut r, Dims { z: 2, y: 2, ..Dims::binary() }, Mode::VisibleGenerated);
        // Z = Y
        let x = m.source().alphabet().clone();
        let a = m.cost().actions().clone();
        let mut rows = Vec::new();
        for row in 0..4 {
            let py = pmf(&mut r, 2);
            let _ = row;
            rows.push(vec![py[0], 0.0, 0.0, py[1]]);
        }
        let meas = MeasurementChannel::new(&x, &a, alpha("Y", 2), alpha("Z", 2), rows).unwrap();
        let model = SystemModel::new(m.source().clone(), None, meas, m.cost().clone(), Mode::VisibleGenerated).unwrap();
        let aux = random_aux(&mut r, &model, 3, 2);
        let ev = evaluate(&model, &aux).unwrap();
        assert!(ev.terms.key_bound().abs() < 1e-10);
    }
}

#[test]
fn constant_action_ignores_cost_values() {
    let mut r = rng(13);
    for _ in 0..10 {
        let d = Dims { a: 1, ..Dims::random(&mut r, 3) };
        let model = random_model(&mut r, d, Mode::VisibleGenerated);
        let aux = random_aux(&mut r, &model, 2, 2);
        let base = evaluate(&model, &aux).unwrap();
        for gamma in [0.0, 0.7, 3.0] {
            let costed = SystemModel::new(
                model.source().clone(),
                None,
                model.measurement().clone(),
                CostFunction::new(model.cost().actions().clone(), vec![gamma]).unwrap(),
                Mode::VisibleGenerated,
            )
            .unwrap();
            let p = evaluate(&costed, &aux).unwrap().point;
            assert_close(p.cost, gamma, 1e-12, "cost");
            assert_eq!(RatePoint { cost: 0.0, ..p }, RatePoint { cost: 0.0, ..base.point });
        }
        // conditioning on a constant A is vacuous
        let o = oracle_joint(&model, &aux);
        assert_close(mi(&o, &[V], &[Y], &[A, U]), mi(&o, &[V], &[Y], &[U]), 1e-12, "I(V;Y|A,U)");
        assert!(base.terms.e_a.abs() < 1e-12);
    }
}

#[test]
fn expected_cost_cases() {
    let model = BinaryExampleParams::reference().model().unwrap();
    let aux = BinaryExampleParams::reference().fixed_aux().unwrap();
    assert_close(expected_cost(&model, &aux).unwrap(), 0.4, 1e-12, "reference cost");
    let zero = SystemModel::new(
        model.source().clone(),
        None,
        model.measurement().clone(),
        CostFunction::new(model.cost().actions().clone(), vec![0.0, 0.0]).unwrap(),
        Mode::VisibleGenerated,
    )
    .unwrap();
    assert_eq!(expected_cost(&zero, &aux).unwrap(), 0.0);
}

#[test]
fn binary_fixed_aux_rates() {
    let params = BinaryExampleParams::reference();
    let model = params.model().unwrap();
    let aux = params.fixed_aux().unwrap();
    let j = assemble_joint(&model, &aux).unwrap();
    let pax = j.marginal(&["A", "X"]).unwrap();
    assert_close(pax.mass()[1], 0.1, 1e-15, "P_AX(0,1)");
    let px = j.marginal(&["X"]).unwrap();
    assert_close(px.mass()[0], 0.5, 1e-12, "P_X");
    let p = eval_generated_visible(&model, &aux).unwrap();
    assert_close(p.storage_rate, 0.4731, 5e-4, "R_w");
    assert_close(p.cost, 0.4, 1e-9, "C");
    // exact key and leakage of this aux (extended-precision oracle)
    assert_close(p.key_rate, 0.280_433_378_983_301_8, 1e-10, "R_k");
    assert_close(p.leakage_rate, 1.0 - 0.280_433_378_983_301_8, 1e-10, "Δ");
    // the aux of the boundary construction reaches the analytic optimum
    let b = eval_generated_visible(&model, &params.boundary_aux(0.5).unwrap()).unwrap();
    assert_close(b.key_rate, 0.3876, 5e-4, "boundary R_k");
    assert_close(b.leakage_rate, 0.6124, 5e-4, "boundary Δ");
    // chosen-secret view and shift back
    let chosen = model.with_mode(Mode::VisibleChosen).unwrap();
    let c = eval_chosen_visible(&chosen, &aux).unwrap();
    assert_close(c.storage_rate, p.storage_rate + p.key_rate, 1e-10, "chosen storage");
    let s = shift_membership(&c, Mode::VisibleChosen, Mode::VisibleGenerated).unwrap();
    assert!(s.max_abs_diff(&p) < 1e-10);
}

#[test]
fn structural_errors() {
    let params = BinaryExampleParams::reference();
    let model = params.model().unwrap();
    let mut aux = params.fixed_aux().unwrap();
    assert!(matches!(Evaluator::new(&model, Mode::HiddenGenerated, 4, 1), Err(Error::Structural(_))));
    // |V| above the bound needs the override
    aux.v_channel = Channel::deterministic(
        aux.v_channel.input().clone(),
        alpha("V", 31),
        &[0, 1, 2, 3],
    )
    .unwrap();
    aux.u_channel = Channel::deterministic(alpha("V", 31), alpha("U", 1), &[0; 31]).unwrap();
    assert!(matches!(evaluate(&model, &aux), Err(Error::Structural(_))));
    aux.allow_oversize = true;
    assert!(evaluate(&model, &aux).is_ok());
    let _ = Distribution::uniform(alpha("X", 2));
}
