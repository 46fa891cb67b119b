// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn run(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atomsvg")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(code(&run(&[&"tokenize"])), 2);
    assert_eq!(code(&run(&[&"no-such-command"])), 2);
    assert_eq!(code(&run(&[&"render", &"a.svg", &"-o", &"a.ppm", &"--size", &"0"])), 2);
    assert_eq!(code(&run(&[&"sample", &"--model", &"m", &"-n", &"1", &"--top-p", &"1.5", &"-o", &"d"])), 2);
}

#[test]
fn help_exits_0() {
    assert_eq!(code(&run(&[&"--help"])), 0);
}

#[test]
fn fatal_errors_exit_1() {
    let d = tempfile::tempdir().unwrap();
    let missing = d.path().join("missing.svg");
    let o = run(&[&"simplify", &missing, &"-o", &d.path().join("x.svg")]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));

    let junk = d.path().join("junk.svgt");
    fs::write(&junk, "1 3 2").unwrap();
    assert_eq!(code(&run(&[&"detokenize", &junk, &"-o", &d.path().join("y.svg")])), 1);
}

#[test]
fn tokenize_detokenize_round_trip() {
    let d = tempfile::tempdir().unwrap();
    let simple = d.path().join("s.svg");
    let back = d.path().join("back.svg");
    for binary in [false, true] {
        let tok = d.path().join(if binary { "t.svgt" } else { "t.txt" });
        assert_eq!(code(&run(&[&"simplify", &corpus("18_icon_heart.svg"), &"-o", &simple])), 0);
        let mut args: Vec<&dyn AsRef<std::ffi::OsStr>> = vec![&"tokenize", &simple, &"-o", &tok];
        if binary {
            args.push(&"--binary");
        }
        assert_eq!(code(&run(&args)), 0);
        assert_eq!(code(&run(&[&"detokenize", &tok, &"-o", &back])), 0);
        assert_eq!(fs::read_to_string(&simple).unwrap(), fs::read_to_string(&back).unwrap());
    }
}

#[test]
fn render_writes_requested_size() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("r.ppm");
    assert_eq!(code(&run(&[&"render", &corpus("01_rect.svg"), &"-o", &out, &"--size", &"64", &"--ss", &"2"])), 0);
    let img = atomsvg::raster::read_ppm(&out).unwrap();
    assert_eq!((img.width, img.height), (64, 64));
}

#[test]
fn curate_fit_sample_eval() {
    let d = tempfile::tempdir().unwrap();
    let ds = d.path().join("ds");
    let o = run(&[&"curate", &"--input", &corpus(""), &"--out", &ds, &"--seed", &"3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("emitted"));

    let stats = run(&[&"stats", &ds.join("manifest.jsonl")]);
    assert_eq!(code(&stats), 0);
    assert!(String::from_utf8_lossy(&stats.stdout).contains("25"));

    let model = d.path().join("m.bin");
    assert_eq!(code(&run(&[&"fit", &"--input", &ds.join("tokens"), &"-o", &model, &"--order", &"2"])), 0);
    let samples = d.path().join("samples");
    assert_eq!(code(&run(&[&"sample", &"--model", &model, &"-n", &"4", &"--seed", &"9", &"-o", &samples])), 0);
    let first = fs::read(samples.join("sample_00000.svgt")).unwrap();
    let again = d.path().join("again");
    run(&[&"sample", &"--model", &model, &"-n", &"4", &"--seed", &"9", &"-o", &again]);
    assert_eq!(first, fs::read(again.join("sample_00000.svgt")).unwrap());

    // one good pair, one sample scored from its token file, one broken pair
    let pairs = d.path().join("pairs.jsonl");
    let rect = corpus("01_rect.svg");
    let lines = [
        serde_json::json!({"id": "rect", "reference": rect, "candidate": ds.join("svg/01_rect.svg")}),
        serde_json::json!({"id": "s0", "reference": rect, "candidate": samples.join("sample_00000.svgt")}),
        serde_json::json!({"id": "gone", "reference": rect, "candidate": d.path().join("nope.svg")}),
    ];
    fs::write(&pairs, lines.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("\n")).unwrap();
    let report = d.path().join("report.jsonl");
    let o = run(&[&"eval", &"--pairs", &pairs, &"-o", &report]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipped gone"));
    let text = fs::read_to_string(&report).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with(r#"{"id":"rect","mse":0.0,"ssim":1.0"#));
    assert!(d.path().join("report.summary.json").exists());

    // nothing evaluable is fatal
    fs::write(&pairs, lines[2].to_string()).unwrap();
    assert_eq!(code(&run(&[&"eval", &"--pairs", &pairs, &"-o", &report])), 1);
}
