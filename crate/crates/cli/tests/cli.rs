use std::process::Command;

use mindisc::poly::parse_upoly;
use mindisc::{parse_form, parse_poly};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, Vec<Value>) {
    let out = Command::new(env!("CARGO_BIN_EXE_mindisc")).args(args).output().expect("binary runs");
    let text = String::from_utf8(out.stdout).expect("utf-8");
    let lines = text.lines().map(|l| serde_json::from_str(l).expect("valid json")).collect();
    (out.status.code().expect("exit code"), lines)
}

fn one(args: &[&str]) -> (i32, Value) {
    let (code, mut lines) = run(args);
    assert_eq!(lines.len(), 1, "{args:?}");
    (code, lines.pop().unwrap())
}

#[test]
fn disc_example() {
    let (code, v) = one(&["disc", "y^2 - x"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "ok");
    let r = &v["result"];
    assert_eq!((r["deg"].as_u64(), r["bound"].as_u64(), r["ord_inf"].as_u64()), (Some(1), Some(2), Some(1)));
    assert_eq!(r["disc"], "4*x");
}

#[test]
fn minimal_example() {
    let (code, v) = one(&["minimal", "x*(x-y^2)^2 - 2*y*(x-y^2) + 1"]);
    assert_eq!(code, 0);
    let r = &v["result"];
    assert_eq!(r["minimal"], true);
    assert_eq!((r["d_y"].as_u64(), r["deg_disc"].as_u64()), (Some(4), Some(3)));
}

#[test]
fn classify_example() {
    let (code, v) = one(&["classify", "(Y0)*(Y1)*(Y0^2 + x*Y0*Y1 + Y1^2)"]);
    assert_eq!(code, 0);
    let r = &v["result"];
    assert_eq!(r["outcome"], "EqualityCase1");
    assert_eq!((r["deg_disc"].as_u64(), r["bound"].as_u64()), (Some(2), Some(2)));
    let (_, v) = one(&["classify", "--bound-only", "(Y0^3 + 2*Y0*Y1^2 + x*Y1^3)*(Y1)"]);
    assert_eq!(v["result"]["ok"], true);
}

#[test]
fn exit_codes() {
    let (code, v) = one(&["disc", "y^2 - "]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "SyntaxError");
    assert_eq!(v["error"]["offset"].as_u64(), Some(6));
    let (code, v) = one(&["disc", "2*x y"]);
    assert_eq!((code, v["status"].as_str()), (2, Some("error")));
    let (code, v) = one(&["resultant", "1", "x"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (1, Some("BothConstantInY")));
    let (code, v) = one(&["coordinate", "extract", "x*(x-y^2)^2 - 2*y*(x-y^2) + 1"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (1, Some("NotMonicMinimal")));
    let (code, v) = one(&["classify", "(Y0)*(Y0)"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (1, Some("FactorsNotCoprime")));
    let (code, _) = run(&["no-such-command"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["orbit", "y^2 - x"]);
    assert_eq!(code, 2);
}

#[test]
fn polynomial_outputs_reparse() {
    let (_, v) = one(&["orbit", "y^2 - x", "--matrix", "[[1, x^3], [0, 1]]"]);
    let img = parse_poly(v["result"]["image"].as_str().unwrap()).unwrap();
    assert_eq!(img, parse_poly("y^2 + 2*x^3*y + x^6 - x").unwrap());
    let (_, v) = one(&["orbit", "Y0^2 - x*Y1^2", "--matrix", "[[1, 0], [x, 1]]"]);
    let img = parse_form(v["result"]["image"].as_str().unwrap()).unwrap();
    assert_eq!(img, parse_form("(1 - x^3)*Y0^2 - 2*x^2*Y0*Y1 - x*Y1^2").unwrap());
    let (_, v) = one(&["reduce", "y^2 + 2*x^3*y + x^6 - x"]);
    assert_eq!(parse_poly(v["result"]["output"].as_str().unwrap()).unwrap(), parse_poly("y^2 - x").unwrap());
    let (_, v) = one(&["resultant", "y^2 - x", "y^2 + x"]);
    assert_eq!(parse_upoly(v["result"]["resultant"].as_str().unwrap(), 'x').unwrap(), parse_upoly("4*x^2", 'x').unwrap());
}

#[test]
fn coordinate_commands() {
    let (code, v) = one(&["coordinate", "random", "--seed", "4", "--steps", "3"]);
    assert_eq!(code, 0);
    let f = v["result"]["f"].as_str().unwrap().to_string();
    let (code, v) = one(&["coordinate", "extract", &f]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["check"], "y");
    let word = v["result"]["word"].as_str().unwrap().to_string();
    let (_, v) = one(&["orbit", &f, "--word", &word]);
    assert_eq!(v["result"]["image"], "y");
    let (code, v) = one(&["appendixc", &word]);
    assert_eq!((code, &v["result"]["all_pass"]), (0, &Value::Bool(true)));
}

#[test]
fn file_indirection() {
    let dir = std::env::temp_dir().join(format!("mindisc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("f.txt");
    std::fs::write(&path, "y^2 - x\n").unwrap();
    let arg = format!("@{}", path.display());
    let (code, v) = one(&["disc", &arg]);
    assert_eq!((code, &v["result"]["disc"]), (0, &Value::from("4*x")));
    let (code, v) = one(&["disc", "@/nonexistent/mindisc"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (1, Some("BadParams")));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn local_family_symmetry() {
    let (_, v) = one(&["local", "y^2 - x^3", "--alpha", "0"]);
    let r = &v["result"]["fibers"][0]["report"];
    assert_eq!((r["ord_disc"].as_u64(), r["delta_alpha"].as_u64()), (Some(3), Some(1)));
    assert_eq!(r["identity_holds"], true);
    let (_, v) = one(&["family", "(y^2 - x)*(y^2 - x - 1)"]);
    assert_eq!(v["result"]["attains"], true);
    let (_, v) = one(&["symmetry", "x*(x-y^2)^2 - 2*y*(x-y^2) + 1"]);
    assert_eq!((&v["result"]["eq_a"], &v["result"]["eq_b"]), (&Value::Bool(true), &Value::Bool(true)));
    let (_, v) = one(&["polytope", "x*(x-y^2)^2 - 2*y*(x-y^2) + 1"]);
    assert_eq!(v["result"]["c"].as_u64(), Some(1));
    let (code, _) = one(&["charpoly", "x*(x-y^2)^2 - 2*y*(x-y^2) + 1"]);
    assert_eq!(code, 0);
    let (_, v) = one(&["implicitize", "s^4 + 2*s", "-s^3 - 1", "s"]);
    assert_eq!(v["result"]["minimal"], true);
}

#[test]
fn search_streams_and_resumes() {
    let hits = |lines: &[Value]| -> Vec<String> {
        lines.iter().filter(|l| l.get("hit").is_some()).map(|l| l["hit"]["f"].as_str().unwrap().to_string()).collect()
    };
    let (code, full) = run(&["search", "--seed", "1", "--budget", "800"]);
    assert_eq!(code, 0);
    let summary = full.last().unwrap();
    assert_eq!(summary["result"]["next_offset"].as_u64(), Some(800));
    let (_, first) = run(&["search", "--seed", "1", "--budget", "300"]);
    let (_, second) = run(&["search", "--seed", "1", "--budget", "500", "--resume", "300", "--threads", "2"]);
    let mut joined = hits(&first);
    joined.extend(hits(&second));
    assert_eq!(joined, hits(&full));
    assert!(!joined.is_empty());
    let (code, v) = one(&["search", "--shape", "4,3"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (2, Some("SyntaxError")));
}

#[test]
fn thread_env_var_is_accepted() {
    let out = Command::new(env!("CARGO_BIN_EXE_mindisc"))
        .env("MINDISC_THREADS", "1")
        .args(["disc", "y^3 - x"])
        .output()
        .unwrap();
    assert!(out.status.success());
}
