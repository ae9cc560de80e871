use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpStream;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn svmact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_svmact")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = svmact(args);
    assert!(
        out.status.success(),
        "svmact {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_train_act_compare_interpret() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("moons.csv");
    let model = dir.path().join("moons.json");

    let out = ok(&[
        "gen",
        "--kind",
        "moons",
        "--n",
        "150",
        "--seed",
        "11",
        "--out",
        p(&data),
    ]);
    assert!(out.contains("seed 11"));
    let again = dir.path().join("again.csv");
    ok(&[
        "gen",
        "--kind",
        "moons",
        "--n",
        "150",
        "--seed",
        "11",
        "--out",
        p(&again),
    ]);
    assert_eq!(std::fs::read(&data).unwrap(), std::fs::read(&again).unwrap());

    let out = ok(&[
        "train",
        "--data",
        p(&data),
        "--kernel",
        "rbf",
        "--gamma",
        "1",
        "--C",
        "10",
        "--tol",
        "1e-6",
        "--out",
        p(&model),
    ]);
    assert!(out.contains("support vectors"));
    assert!(out.contains("training accuracy"));

    let out = ok(&["act", "--model", p(&model), "--point", "x=0.2,y=0.6", "--baseline"]);
    assert!(out.contains("distance"));
    assert!(out.contains("nearest support vector"));

    let json: Value = serde_json::from_str(&ok(&[
        "act",
        "--model",
        p(&model),
        "--point",
        "0.2,0.6",
        "--weights",
        "0.5,1",
        "--static",
        "y",
        "--json",
    ]))
    .unwrap();
    assert_eq!(json["result"]["action"][1], 0.0);
    assert!(json["result"]["feasibilityResidual"].as_f64().unwrap() <= 1e-3);

    let csv = dir.path().join("points.csv");
    let report: Value = serde_json::from_str(&ok(&[
        "compare",
        "--model",
        p(&model),
        "--data",
        p(&data),
        "--json",
        "--points-out",
        p(&csv),
    ]))
    .unwrap();
    assert_eq!(report["losses"], 0);
    let rows = std::fs::read_to_string(&csv).unwrap().lines().count() - 1;
    assert_eq!(rows as u64, report["nPoints"].as_u64().unwrap());
    assert!(ok(&["compare", "--model", p(&model), "--data", p(&data)]).contains("sign-test p"));

    let out = ok(&["interpret", "--model", p(&model), "--data", p(&data)]);
    assert!(out.contains("mean |change|"));
    assert!(out.lines().any(|l| l.starts_with("x ")) && out.lines().any(|l| l.starts_with("y ")));
}

#[test]
fn raw_points_go_through_the_scaler() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("raw.csv");
    // label is the sign of a − 50; a spans [0, 100]
    let mut text = String::from("a,b,label\n");
    for i in 0..40 {
        let a = i as f64 * 100.0 / 39.0;
        let b = (i * 7 % 13) as f64;
        text.push_str(&format!("{a},{b},{}\n", if a > 50.0 { 1 } else { -1 }));
    }
    std::fs::write(&data, text).unwrap();
    let model = dir.path().join("m.json");
    ok(&["train", "--data", p(&data), "--kernel", "linear", "--out", p(&model)]);

    let raw: Value = serde_json::from_str(&ok(&[
        "act",
        "--model",
        p(&model),
        "--point",
        "a=80,b=6",
        "--raw",
        "--json",
    ]))
    .unwrap();
    // a = 80 in [0, 100] is 0.6 on the unit box
    assert!((raw["x0"][0].as_f64().unwrap() - 0.6).abs() < 1e-12);
    let scaled: Value = serde_json::from_str(&ok(&[
        "act",
        "--model",
        p(&model),
        "--point",
        &format!("{},{}", raw["x0"][0], raw["x0"][1]),
        "--json",
    ]))
    .unwrap();
    assert_eq!(raw["result"], scaled["result"]);
    assert!(raw["result"]["oracleDistance"].is_number());
}

#[test]
fn risk_command() {
    let out = ok(&[
        "risk",
        "--point",
        "SUBSC=20,TRIC=15,TRIGL=150,SYST=140,DIAST=85,BMI=27,WEIGHT=80,CHLST=240,ALCO_CONS=1,TOBA_CONS=2",
    ]);
    let score: f64 = out.trim().parse().unwrap();
    assert!(score.is_finite());

    let bad = svmact(&["risk", "--point", "SUBSC=20"]);
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("missing feature"));
}

#[test]
fn errors_exit_nonzero_with_a_message() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("none.json");
    let out = svmact(&["act", "--model", p(&missing), "--point", "1,2"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));

    let data = dir.path().join("d.csv");
    ok(&["gen", "--kind", "linear", "--n", "40", "--out", p(&data)]);
    let model = dir.path().join("m.json");
    ok(&["train", "--data", p(&data), "--kernel", "linear", "--out", p(&model)]);
    let out = svmact(&["act", "--model", p(&model), "--point", "1,2", "--weights", "0.5,2"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside (0, 1]"));
    let out = svmact(&["act", "--model", p(&model), "--point", "z=1"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing feature"));
}

#[test]
fn serve_answers_over_tcp() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    ok(&["gen", "--kind", "circles", "--n", "60", "--out", p(&data)]);
    ok(&[
        "train",
        "--data",
        p(&data),
        "--kernel",
        "poly",
        "--degree",
        "2",
        "--coef0",
        "1",
        "--out",
        p(&dir.path().join("demo.json")),
    ]);

    let mut child = Command::new(env!("CARGO_BIN_EXE_svmact"))
        .args(["serve", "--port", "0", "--models-dir", p(dir.path())])
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut stderr = BufReader::new(child.stderr.take().unwrap());
    let addr = loop {
        let mut line = String::new();
        assert!(stderr.read_line(&mut line).unwrap() > 0, "server exited early");
        if let Some(a) = line.trim().strip_prefix("listening on http://") {
            break a.to_string();
        }
    };

    let mut stream = TcpStream::connect(&addr).unwrap();
    write!(
        stream,
        "GET /models/demo HTTP/1.1\r\nHost: {addr}\r\nConnection: close\r\n\r\n"
    )
    .unwrap();
    let mut response = String::new();
    stream.read_to_string(&mut response).unwrap();
    child.kill().unwrap();
    child.wait().unwrap();

    assert!(response.starts_with("HTTP/1.1 200"), "{response}");
    let body: Value = serde_json::from_str(response.split("\r\n\r\n").nth(1).unwrap()).unwrap();
    assert_eq!(body["id"], "demo");
    assert_eq!(body["kernel"]["family"], "polynomial");
}
