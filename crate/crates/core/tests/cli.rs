use std::path::PathBuf;
use std::process::Command;

use lfw::cli::{parse_spec, run, RunOptions, Status};
use lfw::LfwError;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use serde_json::Value;

fn corpus() -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs");
    let mut out: Vec<(PathBuf, String)> = std::fs::read_dir(&dir)
        .expect("specs directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "lfw"))
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(out.len() >= 8);
    out
}

fn spec_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

#[test]
fn corpus_round_trips() {
    for (path, text) in corpus() {
        let doc = parse_spec(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let printed = doc.to_string();
        let again = parse_spec(&printed).unwrap_or_else(|e| panic!("{}: {e}\n{printed}", path.display()));
        assert_eq!(doc, again, "{}", path.display());
        assert_eq!(printed, again.to_string());
    }
}

#[test]
fn minimal_document() {
    let doc = parse_spec("field { p = 3, c = 1 }").unwrap();
    assert_eq!((doc.field.kind.p, doc.field.kind.c), (3, 1));
    assert!(doc.items.is_empty());
    let r = run(&doc, &RunOptions::default()).unwrap();
    assert!(r.entries.is_empty());
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn unknown_identifier_at_reference() {
    let text = "field { p = 3, c = 1 }\nset W1 = translate(O, u(1))\ncheck multiwavelet [W1, W2]\n";
    match parse_spec(text) {
        Err(LfwError::Parse { line, col, message }) => {
            assert_eq!((line, col), (3, 25));
            assert!(message.contains("W2"), "{message}");
        }
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn structural_errors() {
    let cases = [
        ("field { p = 3 }\nfield { p = 3 }", "more than once"),
        ("set W = O", "expected"),
        ("field { p = 3 }\nset W = O\nset W = O*", "already defined"),
        ("field { p = 3 }\nset O = empty", "reserved"),
        ("field { p = 3 }\nfn f = indicator(O)\ncheck multiwavelet [f]", "not allowed"),
        ("field { p = 3 }\nset W = ball(5*p^-1, 0)", "invalid element"),
        ("field { p = 4 }", "invalid field"),
        ("field { p = 2, c = 2, modulus = [1, 0, 1] }", "invalid field"),
        ("field { p = 3 }\nset W = ball(p^-1 0)", "{`,`}"),
    ];
    for (text, needle) in cases {
        match parse_spec(text) {
            Err(e @ LfwError::Parse { .. }) => {
                assert!(e.to_string().contains(needle), "{text:?}: {e}")
            }
            other => panic!("{text:?}: expected a parse error, got {other:?}"),
        }
    }
}

#[test]
fn shannon_q3_passes_with_order_two() {
    let doc = parse_spec(&std::fs::read_to_string(spec_path("shannon_q3.lfw")).unwrap()).unwrap();
    let r = run(&doc, &RunOptions::default()).unwrap();
    assert_eq!(r.exit_code(), 0, "{}", r.to_text());
    let v = r.entries[0].verdict.as_ref().unwrap();
    assert_eq!(v.get_fact("order"), Some("2"));
}

#[test]
fn printed_length_n_family_fails_with_measure_witness() {
    // n = 3, q = 2: the overlap measure is 1 + q^(1-n)(q-1)
    let expect = BigRational::new(5.into(), 4.into());
    let doc = parse_spec(&std::fs::read_to_string(spec_path("ex46_printed.lfw")).unwrap()).unwrap();
    let r = run(&doc, &RunOptions::default()).unwrap();
    assert_ne!(r.exit_code(), 0);
    let v = r.entries[0].verdict.as_ref().unwrap();
    assert_eq!(v.get_fact("joint_fold_measure"), Some(expect.to_string().as_str()));
    let json = r.to_json().to_string();
    assert!(json.contains(r#""measure":"5/4""#), "{json}");
}

#[test]
fn failed_definitions_poison_later_references() {
    let text = "field { p = 3 }\n\
                fn g = constant(O, 1 + qhalf)\n\
                check frame [g]\n\
                construct A = annulus(0)\n\
                check pf_multiwavelet [A]\n\
                check dilation_tiling shell(1)\n";
    let doc = parse_spec(text).unwrap();
    let r = run(&doc, &RunOptions::default()).unwrap();
    let st: Vec<Status> = r.entries.iter().map(|e| e.status).collect();
    assert_eq!(st, [Status::Error, Status::Error, Status::Error, Status::Error, Status::Pass]);
    assert!(r.entries[1].error.as_deref().unwrap().contains("line 2"));
    assert!(r.entries[3].error.as_deref().unwrap().contains("line 4"));
    assert_eq!(r.exit_code(), 1);
}

fn assert_no_floats(v: &Value) {
    match v {
        Value::Number(n) => assert!(n.is_i64() || n.is_u64(), "float {n}"),
        Value::Array(xs) => xs.iter().for_each(assert_no_floats),
        Value::Object(m) => m.values().for_each(assert_no_floats),
        _ => {}
    }
}

#[test]
fn reports_are_deterministic_and_exact() {
    for (path, text) in corpus() {
        let doc = parse_spec(&text).unwrap();
        let opts = RunOptions { seed: Some(11) };
        let a = run(&doc, &opts).unwrap().to_json();
        let b = run(&doc, &opts).unwrap().to_json();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap(),
            "{}",
            path.display()
        );
        assert_no_floats(&a);
    }
}

/// Random set expressions survive print and reparse.
#[test]
fn random_set_expressions_round_trip() {
    fn elem(rng: &mut rand_chacha::ChaCha8Rng) -> String {
        let n = rng.gen_range(1..4);
        let mut s = String::new();
        for i in 0..n {
            if i > 0 {
                s.push_str(if rng.gen_bool(0.5) { " + " } else { " - " });
            } else if rng.gen_bool(0.2) {
                s.push('-');
            }
            match rng.gen_range(0..5) {
                0 => s.push_str(&format!("{}", rng.gen_range(0..3))),
                1 => s.push_str(&format!("p^{}", rng.gen_range(-4..4))),
                2 => s.push_str(&format!("{}*p^({})", rng.gen_range(1..3), rng.gen_range(-4..4))),
                3 => s.push_str(&format!("u({})", rng.gen_range(0..50))),
                _ => s.push('p'),
            }
        }
        s
    }
    fn set(rng: &mut rand_chacha::ChaCha8Rng, depth: u32) -> String {
        let leaf = depth == 0 || rng.gen_bool(0.3);
        if leaf {
            return match rng.gen_range(0..6) {
                0 => "O".into(),
                1 => "O*".into(),
                2 => "empty".into(),
                3 => format!("shell({})", rng.gen_range(-3..4)),
                4 => format!("ideal({})", rng.gen_range(-3..4)),
                _ => format!("ball({}, {})", elem(rng), rng.gen_range(-2..5)),
            };
        }
        match rng.gen_range(0..5) {
            0 => format!("union({}, {})", set(rng, depth - 1), set(rng, depth - 1)),
            1 => format!("inter({}, {})", set(rng, depth - 1), set(rng, depth - 1)),
            2 => format!("diff({}, {})", set(rng, depth - 1), set(rng, depth - 1)),
            3 => format!("scale({}, {})", set(rng, depth - 1), rng.gen_range(-3..4)),
            _ => format!("translate({}, {})", set(rng, depth - 1), elem(rng)),
        }
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    for _ in 0..300 {
        let text = format!(
            "field {{ p = 3 }}\nset W = {}\nfn f = step{{ (ball({}, 2), -1/3*zeta^2 + (2 - zeta)*qhalf^2) }}\n",
            set(&mut rng, 4),
            elem(&mut rng)
        );
        let doc = parse_spec(&text).unwrap_or_else(|e| panic!("{text}: {e}"));
        let again = parse_spec(&doc.to_string()).unwrap();
        assert_eq!(doc, again, "{text}");
        // both forms evaluate to the same report
        let a = run(&doc, &RunOptions::default()).unwrap().to_json();
        let b = run(&again, &RunOptions::default()).unwrap().to_json();
        assert_eq!(a, b);
    }
}

fn lfw(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lfw")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn binary_exit_codes() {
    let p = |n: &str| spec_path(n).to_string_lossy().into_owned();
    assert_eq!(lfw(&["check", &p("shannon_q3.lfw")]).0, 0);
    assert_eq!(lfw(&["check", &p("empty.lfw")]).0, 0);
    let (code, out, _) = lfw(&["check", &p("ex46_printed.lfw")]);
    assert_eq!(code, 1);
    assert!(out.contains("measure 5/4"), "{out}");
    let (code, _, err) = lfw(&["check", "/nonexistent.lfw"]);
    assert_eq!(code, 2, "{err}");
    assert_eq!(lfw(&["frobnicate"]).0, 2);
    let (code, out, _) = lfw(&["bound", &p("bounds.lfw")]);
    assert_eq!(code, 0);
    assert!(out.contains("integral: 4/5") && out.contains("integral: inf"), "{out}");
}

#[test]
fn binary_json_report() {
    let spec = spec_path("annulus.lfw");
    let (code, out, _) = lfw(&["check", spec.to_str().unwrap(), "--json", "-"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], Value::Bool(false));
    assert_eq!(v["entries"][2]["verdict"]["passed"], Value::Bool(false));
}

#[test]
fn binary_construct_and_solve() {
    let (code, out, _) = lfw(&["construct", "shannon", "--p", "3"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0][0]["center"], "p^-1");
    assert_eq!(v[1][0]["center"], "2*p^-1");

    let (code, out, _) = lfw(&["construct", "ex46", "--p", "2", "--n", "3", "--printed"]);
    assert_eq!(code, 0);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap().as_array().unwrap().len(), 3);
    assert_eq!(lfw(&["construct", "annulus", "--p", "2"]).0, 2);

    let dir = std::env::temp_dir().join(format!("lfw-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let existing = dir.join("existing.lfw");
    std::fs::write(&existing, "field { p = 2 }\nfamily existing = []\n").unwrap();
    let (code, out, err) = lfw(&[
        "solve",
        "--existing",
        existing.to_str().unwrap(),
        "--shells",
        "-1..-1",
        "--max-scale",
        "0",
    ]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["outcome"], "found");
    assert_eq!(v["set"][0]["center"], "p^-1");

    let fam = dir.join("family.lfw");
    std::fs::write(&fam, "field { p = 2 }\nset W = translate(O, u(1))\nfamily psi = [W]\n").unwrap();
    let (code, out, err) = lfw(&["simulate", "gram", "--window", "2,2", "--family", fam.to_str().unwrap(), "--at", "1,0", "--with", "1,0"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["value"], "1");
    let (code, out, _) = lfw(&["simulate", "parseval", "--window", "2,2", "--family", fam.to_str().unwrap(), "--trials", "5", "--seed", "4"]);
    assert_eq!(code, 0, "{out}");
    std::fs::remove_dir_all(&dir).ok();
}
