use keyregion::binary::BinaryExampleParams;
use keyregion_cli::config::{AuxConfig, ModelConfig};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn cfg(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_keyregion"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| {
            l.split(',')
                .filter(|f| f.len() != 16 || f.contains('.'))
                .map(|f| f.parse().unwrap())
                .collect()
        })
        .collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn eval_prints_the_fixed_aux_point() {
    for model in ["binary_example.toml", "binary_explicit.toml"] {
        let o = run(&["eval", &cfg(model), &cfg("fixed_aux.toml")]);
        assert_eq!(code(&o), 0);
        let text = stdout(&o);
        assert!(text.starts_with("region gs (visible source, generated secret)"));
        let value = |k: &str| -> f64 {
            let line = text.lines().find(|l| l.starts_with(k)).unwrap();
            line[k.len()..].trim().parse().unwrap()
        };
        assert!((value("R_w") - 0.4731).abs() < 5e-4);
        assert!((value("C") - 0.4).abs() < 1e-9);
        assert!((value("R_k") - 0.280433378983).abs() < 1e-11);
        assert!((value("R_k") + value("Delta") - 1.0).abs() < 1e-11);
    }
}

#[test]
fn eval_error_exits() {
    let dir = tempfile::tempdir().unwrap();
    let bad = std::fs::read_to_string(configs().join("binary_explicit.toml"))
        .unwrap()
        .replace("mass = [0.5, 0.5]", "mass = [0.5, 0.6]");
    let bad = write(dir.path(), "bad.toml", &bad);
    let o = run(&["eval", &bad, &cfg("fixed_aux.toml")]);
    assert_eq!(code(&o), 1);

    let aux = std::fs::read_to_string(configs().join("fixed_aux.toml"))
        .unwrap()
        .replace("[0.2, 0.8]]", "[0.3, 0.8]]");
    let aux = write(dir.path(), "aux.toml", &aux);
    let o = run(&["eval", &cfg("binary_example.toml"), &aux]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("row 1"));

    let o = run(&["eval", &cfg("binary_hidden.toml"), &cfg("fixed_aux.toml")]);
    assert_eq!(code(&o), 2);
    let short = write(dir.path(), "short.toml", "mode = \"gs\"\naction = [[1.0, 0.0]]\nv_channel = [[1.0]]\nu_channel = [[1.0]]\n");
    assert_eq!(code(&run(&["eval", &cfg("binary_example.toml"), &short])), 2);
    let garbage = write(dir.path(), "garbage.toml", "mode = ");
    assert_eq!(code(&run(&["eval", &garbage, &cfg("fixed_aux.toml")])), 1);
    assert_eq!(code(&run(&["eval", "/nonexistent.toml", &cfg("fixed_aux.toml")])), 1);
    assert_eq!(code(&run(&["no-such-command"])), 1);
}

#[test]
fn config_round_trip_is_bit_exact() {
    for name in ["binary_example.toml", "binary_explicit.toml", "binary_hidden.toml"] {
        let m1 = ModelConfig::load(&configs().join(name)).unwrap().build().unwrap();
        let text = ModelConfig::from_model(&m1).to_toml();
        let m2 = ModelConfig::parse(&text).unwrap().build().unwrap();
        assert_eq!(m1, m2);
        let bits = |m: &keyregion::SystemModel| -> Vec<u64> {
            m.source().mass().iter().chain(m.measurement().channel().matrix()).map(|x| x.to_bits()).collect()
        };
        assert_eq!(bits(&m1), bits(&m2));
    }
    let model = BinaryExampleParams::reference().model().unwrap();
    let aux = BinaryExampleParams::reference().fixed_aux().unwrap();
    let text = AuxConfig::from_aux(&aux, model.mode()).to_toml();
    let back: AuxConfig = toml::from_str(&text).unwrap();
    assert_eq!(back.build(&model).unwrap().flattened(), aux.flattened());
}

#[test]
fn frontier_csv_contract() {
    let o = run(&["frontier", &cfg("binary_example.toml"), "--region", "gs", "--step", "1/16", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "x_param,R_k,R_w,Delta,C,aux_id");
    let rows = csv_rows(&text);
    assert!(rows[0][1] >= 0.3856);
    for w in rows.windows(2) {
        assert!(w[0][1] >= w[1][1]);
    }
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 6);
        assert_eq!(fields[0], fields[3]);
        for f in &fields[..5] {
            let mant = f.split('e').next().unwrap().replace(['-', '.'], "");
            assert!(mant.trim_start_matches('0').len() <= 12, "{f}");
        }
        assert_eq!(fields[5].len(), 16);
    }
    let again = run(&["frontier", &cfg("binary_example.toml"), "--region", "gs", "--step", "1/16", "--seed", "7", "--sequential"]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn unit_step_gives_deterministic_corners() {
    let base = ["frontier", &cfg("binary_example.toml"), "--step", "1", "--card-u", "2", "--card-v", "3"].map(String::from);
    let search = run(&base.iter().map(String::as_str).collect::<Vec<_>>());
    let mut oracle_args: Vec<&str> = base.iter().map(String::as_str).collect();
    oracle_args.push("--oracle");
    let oracle = run(&oracle_args);
    assert_eq!(code(&search), 0);
    assert_eq!(stdout(&search), stdout(&oracle));
}

#[test]
fn frontier_error_exits() {
    let model = cfg("binary_example.toml");
    assert_eq!(code(&run(&["frontier", &model, "--cost-cap", "0.2"])), 2);
    assert_eq!(code(&run(&["frontier", &model, "--oracle", "--card-u", "2", "--card-v", "2", "--step", "1/8"])), 3);
    assert_eq!(code(&run(&["frontier", &model, "--step", "0.3"])), 1);
    assert_eq!(code(&run(&["frontier", &model, "--card-u", "9"])), 1);
    assert_eq!(code(&run(&["frontier", &model, "--region", "hgs"])), 2);
}

#[test]
fn frontier_options() {
    let model = cfg("binary_hidden.toml");
    let common = ["frontier", &model, "--step", "1/4", "--card-u", "2", "--card-v", "2", "--restarts", "4"];
    let plain = run(&common);
    assert_eq!(code(&plain), 0);
    let mut hull_args = common.to_vec();
    hull_args.push("--hull");
    let hull = run(&hull_args);
    assert!(stdout(&hull).lines().count() <= stdout(&plain).lines().count());
    let mut sweep_args = common.to_vec();
    sweep_args.extend(["--x-param", "cost", "--sweep", "0.35,0.4"]);
    let sweep = run(&sweep_args);
    assert_eq!(code(&sweep), 0);
    for r in csv_rows(&stdout(&sweep)) {
        assert_eq!(r[0], r[4]);
    }
}

#[test]
fn verify_example_outcomes() {
    let o = run(&["verify-example"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 5);
    let o = run(&["verify-example", "--alpha", "0.5"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("custom parameters"));
    assert!(text.lines().any(|l| l.starts_with("DIFF storage rate")));
    let o = run(&["verify-example", "--p", "0"]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("precondition fails"));
    assert_eq!(code(&run(&["verify-example", "--p", "2"])), 1);
}

#[test]
fn tradeoff_sweeps() {
    let o = run(&["tradeoff", "--resolution", "1/256"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("# R_w = 0.473139400517\n# C = 0.4\nx_bar,R_k,Delta\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 129);
    assert_eq!(rows[0][..2], [0.0, 0.0]);
    let last = rows.last().unwrap();
    assert_eq!(last[0], 0.5);
    assert!((last[1] - 0.3876).abs() < 5e-4);
    for r in &rows {
        assert!((r[1] + r[2] - 1.0).abs() <= 1e-9 + 1e-12);
    }
    assert_eq!(csv_rows(&stdout(&run(&["tradeoff", "--resolution", "1/2"]))).len(), 2);
    assert_eq!(code(&run(&["tradeoff", "--p", "0"])), 4);
}
