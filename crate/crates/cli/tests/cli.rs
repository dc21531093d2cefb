use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn l2dim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_l2dim"))
        .args(args)
        .env_remove("L2DIM_CONFIG")
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = l2dim(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn circle_over_integers_has_vanishing_betti_numbers() {
    let r = report(&["betti", "--complex", &data("circle_Z.json")]);
    assert_eq!(r["format"], json!(1));
    assert_eq!(r["result"]["values"], json!([[0, 1], [0, 1]]));
    assert_eq!(r["result"]["engine"], json!("FreeAbelian"));
    assert_eq!(r["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn point_with_stabilizer_of_order_six() {
    let r = report(&["euler", "--complex", &data("point_H6.json")]);
    assert_eq!(r["result"]["chi"], json!([1, 6]));
}

#[test]
fn congruence_fails_with_witness() {
    let r = report(&["congruence", "--table", &data("zp.json"), "--eta", "1/5,0"]);
    assert_eq!(r["result"]["pass"], json!(false));
    assert_eq!(r["result"]["witnesses"], json!([{ "class": "1", "index": 0, "value": [1, 5] }]));
    let r = report(&["congruence", "--table", &data("zp.json"), "--eta", "1,0"]);
    assert_eq!(r["result"]["pass"], json!(true));
}

#[test]
fn wedge_of_circles_over_free_group() {
    let r = report(&["betti", "--complex", &data("wedge_F2.json")]);
    assert_eq!(r["result"]["values"], json!([[0, 1], [1, 1]]));
}

#[test]
fn malformed_inputs_exit_with_two() {
    for args in [
        vec!["validate", "--complex", &data("bad_boundary.json")],
        vec!["validate", "--table", &data("bad_diagonal.json")],
        vec!["betti", "--complex", "/nonexistent/file.json"],
        vec!["frobnicate"],
        vec!["betti", "--complex", &data("circle_Z.json"), "--bogus"],
        vec!["congruence", "--table", &data("zp.json"), "--eta", "1/5"],
    ] {
        let out = l2dim(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = l2dim(&["validate", "--complex", &data("bad_boundary.json")]);
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("composite boundary"), "{msg}");
}

#[test]
fn domain_errors_exit_with_one() {
    let out = l2dim(&["dim", "--module", &data("multi.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("principal ideal domain"));
    let out = l2dim(&["amenable", "--group", "Z", "--generators", "[[1]]"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not symmetric"));
}

#[test]
fn module_commands() {
    let r = report(&["dim", "--module", &data("module_z.json")]);
    assert_eq!(r["result"]["dimension"], json!([1, 1]));
    assert_eq!(r["result"]["invariant_factors"], json!([[2, 1]]));
    let r = report(&["closure", "--module", &data("module_z.json")]);
    assert_eq!(r["result"]["closure_dimension"], json!([1, 1]));
    let r = report(&["colim", "--chain", &data("projection_chain.json")]);
    assert_eq!(r["result"]["agree"], json!(true));
}

#[test]
fn burnside_and_hattori_stallings() {
    let r = report(&["burnside", "--table", &data("zp.json")]);
    assert_eq!(r["result"]["character_matrix"], json!([[[1, 1], [1, 5]], [[0, 1], [1, 1]]]));
    let r = report(&["burnside", "--example9", "3,5,2"]);
    assert_eq!(r["result"]["l2_euler"], json!([0, 1]));
    assert_eq!(r["result"]["element"]["H0"], json!([-2, 5]));
    assert_eq!(r["result"]["conditions"][0]["text"], json!("η₀ − (1/5)Σηᵢ ∈ Z"));
    let r = report(&["hs", "--matrix", &data("idempotent_Z2.json")]);
    assert_eq!(r["result"]["values"], json!([["(0)", [1, 2]], ["(1)", [1, 2]]]));
}

#[test]
fn amenability_verdicts() {
    let r = report(&["amenable", "--group", "F_2", "--steps", "30"]);
    assert_eq!(r["result"]["verdict"], json!("NonamenableEvidence"));
    let r = report(&["amenable", "--group", "Z^2", "--steps", "10"]);
    assert_eq!(r["result"]["verdict"], json!("AmenableConsistent"));
    let r = report(&["amenable", "--group", "S3", "--generators", "[1, 2]", "--steps", "12"]);
    assert_eq!(r["result"]["verdict"], json!("AmenableConsistent"));
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let args = ["betti", "--complex", &data("wedge_F2.json")];
    let a = l2dim(&args).stdout;
    assert_eq!(a, l2dim(&args).stdout);
    let r: Value = serde_json::from_slice(&a).unwrap();
    let back = l2dim::io::betti_report_from_json(&r["result"]).unwrap();
    assert_eq!(l2dim::io::betti_report_to_json(&back), r["result"]);

    let r = report(&["amenable", "--group", "F_3", "--steps", "8"]);
    let back = l2dim::io::kesten_report_from_json(&r["result"]).unwrap();
    assert_eq!(l2dim::io::kesten_report_to_json(&back), r["result"]);
}

#[test]
fn output_file_text_format_and_config() {
    let dir = std::env::temp_dir().join(format!("l2dim-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.txt");
    let status = l2dim(&["euler", "--complex", &data("point_H6.json"), "--format", "text", "-o", out.to_str().unwrap()]);
    assert_eq!(status.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("chi = 1/6"), "{text}");

    let config = dir.join("config.toml");
    std::fs::write(&config, "walk_support_bound = 20\n").unwrap();
    let run = Command::new(env!("CARGO_BIN_EXE_l2dim"))
        .args(["amenable", "--group", "Z^2", "--steps", "10"])
        .env("L2DIM_CONFIG", &config)
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&run.stderr).contains("support exceeds 20"));

    std::fs::write(&config, "output_format = \"text\"\n").unwrap();
    let run = Command::new(env!("CARGO_BIN_EXE_l2dim"))
        .args(["validate", "--module", &data("module_z.json")])
        .env("L2DIM_CONFIG", &config)
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&run.stdout).contains("module: valid"));
    std::fs::remove_dir_all(&dir).unwrap();
}
