use std::fs;
use std::process::{Command, Output};

use logiclearn::model::{read_model, write_model};
use logiclearn::pla::{read_pla, write_pla_cover, write_pla_problem, DEFAULT_EXPANSION_LIMIT};
use logiclearn::schema_text::{read_schema, write_schema};
use logiclearn_core::binarize::{infer_schema, BinarizeConfig, Encoding, Table};
use logiclearn_core::learn::{fit, FitConfig};
use logiclearn_core::synth::{random_instance, sampled_instance};
use logiclearn_core::MinimizationProblem;
use proptest::prelude::*;
use tempfile::TempDir;

const XLT4: &str = ".i 4\n.o 1\n.type fr\n0000 0\n0001 0\n0010 0\n0011 0\n01-- 1\n1--- 1\n.e\n";

fn logiclearn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logiclearn")).args(args).output().unwrap()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = path(dir, name);
    fs::write(&p, text).unwrap();
    p
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn mixed_table() -> Table {
    let header = ["age", "color", "smoker", "label"].map(String::from).to_vec();
    let rows = (0..40)
        .map(|i: u32| {
            let color = ["red", "green", "blue"][(i % 3) as usize];
            vec![(20 + i * 7 % 50).to_string(), color.into(), (i % 2).to_string(), u32::from(i % 5 == 0).to_string()]
        })
        .collect();
    Table::new(header, rows).unwrap()
}

#[test]
fn minimize_threshold_example() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "xlt4.pla", XLT4);
    for engine in ["exact", "heuristic"] {
        let out = logiclearn(&["minimize", "--engine", engine, "--in", &input]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        let cover = read_pla(&stdout(&out)).unwrap().on_cover().unwrap();
        let texts: Vec<String> = cover.iter().map(|c| c.to_text()).collect();
        assert_eq!(texts, ["-1--", "1---"]);
    }
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(logiclearn(&["minimize"]).status.code(), Some(1));
    assert_eq!(logiclearn(&["frobnicate"]).status.code(), Some(1));
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "d.csv", "x,label\n0,0\n1,1\n");
    let out = logiclearn(&["fit", "--in", &data, "--rules"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(logiclearn(&["--help"]).status.code(), Some(0));
}

#[test]
fn data_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let missing = path(&dir, "nope.pla");
    let out = logiclearn(&["minimize", "--in", &missing]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("nope.pla"));

    let bad = write(&dir, "bad.pla", ".i 2\n.o 1\n0x 1\n.e\n");
    assert_eq!(logiclearn(&["minimize", "--in", &bad]).status.code(), Some(2));

    let conflict = write(&dir, "c.pla", ".i 1\n.o 1\n.type fr\n1 1\n1 0\n.e\n");
    assert_eq!(logiclearn(&["minimize", "--in", &conflict]).status.code(), Some(2));

    let unlabeled = write(&dir, "u.csv", "x,label\n0,maybe\n");
    let model = path(&dir, "m.txt");
    assert_eq!(logiclearn(&["fit", "--in", &unlabeled, "--out", &model]).status.code(), Some(2));
}

#[test]
fn exact_over_ceiling_exits_3() {
    let dir = TempDir::new().unwrap();
    let p = sampled_instance(20, 300, 3000, 5).unwrap();
    let input = write(&dir, "w20.pla", &write_pla_problem(&p, None));
    let out = logiclearn(&["minimize", "--engine", "exact", "--max-implicants", "1000", "--in", &input]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("heuristic"), "{}", stderr(&out));
    let out = logiclearn(&["minimize", "--engine", "heuristic", "--in", &input]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn fit_predict_eval_round() {
    let dir = TempDir::new().unwrap();
    let data = path(&dir, "data.csv");
    let model = path(&dir, "model.txt");
    let pred = path(&dir, "pred.csv");
    let gen = logiclearn(&["gen", "--seed", "3", "--planted", "11------", "--rows", "300", "--out", &data]);
    assert!(gen.status.success(), "{}", stderr(&gen));
    let out = logiclearn(&["fit", "--in", &data, "--label", "y", "--engine", "exact", "--out", &model, "--rules"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "IF f1=1 AND f2=1 THEN class 1");

    let out = logiclearn(&["eval", "--model", &model, "--in", &data]);
    assert!(stdout(&out).contains("accuracy=1\n"), "{}", stdout(&out));

    assert!(logiclearn(&["predict", "--model", &model, "--in", &data, "--out", &pred]).status.success());
    let text = fs::read_to_string(&pred).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().ends_with(",y,prediction"));
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[fields.len() - 1], fields[fields.len() - 2]);
    }
}

#[test]
fn stream_state_carries_over() {
    let dir = TempDir::new().unwrap();
    let data = path(&dir, "data.csv");
    logiclearn(&["gen", "--seed", "9", "--planted", "1-0---", "--rows", "200", "--class1-fraction", "0.3", "--out", &data]);
    let text = fs::read_to_string(&data).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let half = lines.len() / 2;
    let first = write(&dir, "a.csv", &(lines[..half].join("\n") + "\n"));
    let second = write(&dir, "b.csv", &([lines[0]].iter().chain(&lines[half..]).copied().collect::<Vec<_>>().join("\n") + "\n"));

    let schema = path(&dir, "schema.txt");
    let bits = path(&dir, "bits.pla");
    let out = logiclearn(&["binarize", "--in", &data, "--label", "y", "--out", &bits, "--schema-out", &schema]);
    assert!(out.status.success(), "{}", stderr(&out));

    let state = path(&dir, "state.pla");
    let model = path(&dir, "model.txt");
    for batch in [&first, &second] {
        let out = logiclearn(&["stream", "--schema", &schema, "--state", &state, "--in", batch, "--out", &model]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let out = logiclearn(&["eval", "--model", &model, "--in", &data]);
    assert!(stdout(&out).contains("accuracy=1\n"), "{}", stdout(&out));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "xlt4.pla", XLT4);
    let config = write(&dir, "c.conf", "# defaults\nengine = exact\n");
    let out = logiclearn(&["--config", &config, "minimize", "--in", &input]);
    assert!(out.status.success(), "{}", stderr(&out));
    let bad = write(&dir, "bad.conf", "colour = blue\n");
    assert_eq!(logiclearn(&["--config", &bad, "minimize", "--in", &input]).status.code(), Some(1));
}

#[test]
fn schema_text_round_trips() {
    for encoding in [Encoding::LevelBinary, Encoding::OneHot] {
        let config = BinarizeConfig { label_column: "label".into(), encoding, ..Default::default() };
        let schema = infer_schema(&mixed_table(), &config).unwrap();
        let text = write_schema(&schema);
        let back = read_schema(&text, 1).unwrap();
        assert_eq!(back, schema);
        assert_eq!(write_schema(&back), text);
    }
}

#[test]
fn model_round_trips() {
    let config = FitConfig {
        binarize: BinarizeConfig { label_column: "label".into(), ..Default::default() },
        ..Default::default()
    };
    let model = fit(&mixed_table(), &config).unwrap();
    let text = write_model(&model);
    let back = read_model(&text).unwrap();
    assert_eq!(back, model);
    assert_eq!(write_model(&back), text);
}

fn pla_round_trip(p: &MinimizationProblem) {
    let text = write_pla_problem(p, None);
    let back = read_pla(&text).unwrap().to_problem(DEFAULT_EXPANSION_LIMIT).unwrap();
    assert_eq!(&back, p);
    assert_eq!(write_pla_problem(&back, None), text);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pla_problems_round_trip(width in 1usize..9, on in 0.0f64..0.5, off in 0.0f64..0.5, seed in any::<u64>()) {
        pla_round_trip(&random_instance(width, on, off, seed).unwrap());
    }

    #[test]
    fn pla_covers_round_trip(width in 1usize..7, seed in any::<u64>()) {
        let p = random_instance(width, 0.3, 0.3, seed).unwrap();
        let cover = logiclearn_core::exact::minimize_exact(&p, &Default::default()).unwrap();
        let labels: Vec<String> = (0..width).map(|i| format!("x{i}")).collect();
        let text = write_pla_cover(&cover, Some(&labels));
        let file = read_pla(&text).unwrap();
        prop_assert_eq!(file.input_labels.as_deref(), Some(&labels[..]));
        prop_assert_eq!(&file.on_cover().unwrap(), &cover);
    }
}

#[test]
fn wide_pla_round_trips() {
    pla_round_trip(&sampled_instance(70, 20, 20, 1).unwrap());
}
