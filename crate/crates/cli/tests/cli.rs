use rand::SeedableRng;
use std::path::PathBuf;
use std::process::{Command, Output};
use t36::field::PrimeField;
use t36::io::pencil_to_json;
use t36::pencil::{block, direct_sum, random_invertible, transform, BlockKind};

fn t36(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_t36"))
        .args(args)
        .env_remove("T36_LAMBDA")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn words_listing() {
    let o = t36(&["words", "--max-n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 24);
    let o = t36(&["words", "--max-n", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 48);
    assert_eq!(t36(&["words", "--max-n", "0"]).status.code(), Some(2));
    assert_eq!(t36(&["words"]).status.code(), Some(2));
}

#[test]
fn build_words() {
    let o = t36(&["mf", "build", "--word", "a:2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("a:2 (6×6)"), "{s}");
    assert!(s.contains("u^2, u1, u2, v1, v2, v3"));

    let o = t36(&["mf", "build", "--word", "a:2:lr", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"], 4);
    assert_eq!(v["entries"][0][0], "-x*y^2 + x^2");

    let o = t36(&["mf", "build", "--word", "cp:1", "--format", "latex"]);
    let s = stdout(&o);
    assert!(s.contains("\\begin{array}") && s.contains("\\hline"), "{s}");

    let o = t36(&["mf", "build", "--word", "d:1", "--with-complement", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["q"]["rows"], v["psi"]["rows"]);

    assert_eq!(t36(&["mf", "build", "--word", "e:2"]).status.code(), Some(2));
    assert_eq!(t36(&["mf", "build", "--word", "a:2", "--lambda", "1"]).status.code(), Some(2));
}

#[test]
fn verify_words_and_files() {
    let o = t36(&["mf", "verify", "--word", "d:2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("d:2\tok"));

    let id = scratch("identity.json", r#"{"rows": 2, "cols": 2, "entries": [["1", "0"], ["0", "1"]]}"#);
    let o = t36(&["mf", "verify", "--matrix", id.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));

    let junk = scratch("junk.json", "{\"rows\": 1}");
    assert_eq!(t36(&["mf", "verify", "--matrix", junk.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(t36(&["mf", "verify", "--matrix", "/nonexistent/q.json"]).status.code(), Some(2));
    assert_eq!(t36(&["mf", "verify"]).status.code(), Some(2));
}

#[test]
fn verify_all_sorted() {
    let o = t36(&["mf", "verify", "--all", "--max-n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 73);
    assert_eq!(lines[72], "72/72 passed");
    let expected: Vec<String> = t36::words::enumerate(3).iter().map(|w| w.to_string()).collect();
    let got: Vec<&str> = lines[..72].iter().map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(got, expected);
    // the same, run twice, is byte-identical
    assert_eq!(stdout(&t36(&["mf", "verify", "--all", "--max-n", "3"])), s);
}

#[test]
fn build_then_verify_round_trip() {
    for (word, lambda) in [("b:2:l", "symbolic"), ("dp:2", "symbolic"), ("c:3:r", "-1/2")] {
        let flag = format!("--lambda={lambda}");
        let o = t36(&["mf", "build", "--word", word, "--format", "json", &flag]);
        assert_eq!(o.status.code(), Some(0));
        let body = stdout(&o);
        let f = scratch(&format!("{}.json", word.replace(':', "_")), &body);
        let o = t36(&["mf", "verify", "--matrix", f.to_str().unwrap(), "--format", "json"]);
        assert_eq!(o.status.code(), Some(0), "{word}");
        let (m, _) = t36::io::parse_matrix_json(&body).unwrap();
        let mode = t36::io::parse_lambda(lambda).unwrap();
        assert_eq!(t36::io::matrix_to_json(&m, &mode).trim(), body.trim());
    }
}

#[test]
fn lambda_from_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_t36"))
        .args(["mf", "build", "--word", "a:1", "--format", "json"])
        .env("T36_LAMBDA", "3")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["lambda"], "3");
    let entries = v["entries"].to_string();
    assert!(!entries.contains('l'), "{entries}");
}

#[test]
fn pencil_decompose() {
    let k = PrimeField::new(101).unwrap();
    let a3 = block(&k, BlockKind::A, 3, None).unwrap();
    let f = scratch("a3.json", &pencil_to_json(&k, &a3));
    let o = t36(&["pencil", "decompose", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s.lines().next(), Some("A(3)"));
    assert!(s.contains("words: a:3"));

    let sum = direct_sum(&k, &[block(&k, BlockKind::C, 1, None).unwrap(), block(&k, BlockKind::D, 2, None).unwrap()]);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let s_m = random_invertible(&k, sum.rows, &mut rng, |r| rand::Rng::gen_range(r, 0..101));
    let t_m = random_invertible(&k, sum.cols, &mut rng, |r| rand::Rng::gen_range(r, 0..101));
    let moved = transform(&k, &s_m, &sum, &t_m);
    let f = scratch("c1d2.json", &pencil_to_json(&k, &moved));
    let o = t36(&["pencil", "decompose", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("C(1), D(2)"));

    // x² + 1 has no root mod 103
    let f = scratch("rot.json", r#"{"field": "Fp:103", "x1": [["1", "0"], ["0", "1"]], "x2": [["0", "1"], ["-1", "0"]]}"#);
    let o = t36(&["pencil", "decompose", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let f = scratch("badfield.json", r#"{"field": "Fp:12", "x1": [], "x2": []}"#);
    assert_eq!(t36(&["pencil", "decompose", f.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn invariants_table() {
    let o = t36(&["invariants", "--word", "a:2", "--format", "json", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["lambda0"], "2");
    assert_eq!(v["invariants"][0]["stable"], true);
    let o = t36(&["invariants", "--all", "--max-n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("collisions:"));
}
