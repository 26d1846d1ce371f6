use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_geoquant"))
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let status = bin().args(args).arg("--out").arg(&out).status().unwrap();
    let text = std::fs::read_to_string(&out).unwrap();
    (status.code().unwrap(), serde_json::from_str(&text).unwrap())
}

fn strip_elapsed(v: &mut Value) {
    if let Some(checks) = v["checks"].as_array_mut() {
        for c in checks {
            c.as_object_mut().unwrap().remove("elapsed_ms");
        }
    }
}

fn ids(v: &Value) -> Vec<String> {
    v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["check_id"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn sphere_at_half_hbar_passes() {
    let (code, v) = run_json(&[
        "prequant", "--model", "sphere", "--radius", "0.5", "--hbar", "1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], 1);
    let ratio = v["checks"][0]["outputs"]["report"]["cycles"][0]["ratio"]
        .as_f64()
        .unwrap();
    assert!((ratio - 1.0).abs() < 1e-12);
}

#[test]
fn incommensurable_spheres_fail() {
    let (code, v) = run_json(&[
        "prequant",
        "--model",
        "product-spheres",
        "--r1",
        "0.5",
        "--r2",
        "0.70710678",
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "fail");
}

#[test]
fn corrected_spectrum_levels() {
    let (code, v) = run_json(&["spectrum", "--n", "8"]);
    assert_eq!(code, 0);
    let c = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["check_id"] == "spectrum.corrected")
        .unwrap();
    let levels: Vec<f64> = c["outputs"]["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(levels, (0..8).map(|n| n as f64 + 0.5).collect::<Vec<_>>());
}

#[test]
fn bad_arguments_exit_with_2() {
    assert_eq!(bin().arg("nonsense").status().unwrap().code(), Some(2));
    assert_eq!(
        bin()
            .args(["spectrum", "--n", "2"])
            .status()
            .unwrap()
            .code(),
        Some(2)
    );
    assert_eq!(
        bin()
            .args(["--hbar", "-1", "bohr"])
            .status()
            .unwrap()
            .code(),
        Some(2)
    );
    assert_eq!(
        bin()
            .args(["prequant", "--model", "cube"])
            .status()
            .unwrap()
            .code(),
        Some(2)
    );
}

#[test]
fn reports_are_deterministic() {
    for args in [
        &["szego"][..],
        &["prequant"][..],
        &["pairing", "bogoliubov"][..],
    ] {
        let (_, mut a) = run_json(args);
        let (_, mut b) = run_json(args);
        strip_elapsed(&mut a);
        strip_elapsed(&mut b);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}

#[test]
fn all_is_the_union_of_suites() {
    let (_, all) = run_json(&["all"]);
    let mut expected = Vec::new();
    for args in [
        &["prequant"][..],
        &["spectrum"],
        &["dirac"],
        &["pairing", "fourier"],
        &["pairing", "segal-bargmann"],
        &["pairing", "bogoliubov"],
        &["fresnel"],
        &["szego"],
        &["bohr"],
    ] {
        expected.extend(ids(&run_json(args).1));
    }
    assert_eq!(ids(&all), expected);
}

#[test]
fn csv_tables_have_expected_headers() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["all", "--out"])
        .arg(dir.path().join("r.json"))
        .arg("--csv-dir")
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
    let header = |name: &str| {
        std::fs::read_to_string(dir.path().join(name))
            .unwrap()
            .lines()
            .next()
            .unwrap()
            .to_string()
    };
    assert_eq!(header("szego_projective_line.csv"), "k,value");
    assert_eq!(header("fresnel_standard_gaussian.csv"), "t,residual");
    assert_eq!(header("bohr_levels.csv"), "n,energy");
    assert_eq!(header("spectrum_corrected.csv"), "n,energy");
}

#[test]
fn floats_use_seventeen_significant_digits() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    bin().args(["bohr", "--out"]).arg(&out).status().unwrap();
    let text = std::fs::read_to_string(&out).unwrap();
    let start = text.find("\"action\": ").unwrap() + "\"action\": ".len();
    let token: String = text[start..]
        .chars()
        .take_while(|c| !matches!(c, ',' | '\n'))
        .collect();
    let mantissa = token.split('e').next().unwrap();
    assert_eq!(
        mantissa.chars().filter(|c| c.is_ascii_digit()).count(),
        17,
        "{token}"
    );
}
