use std::path::PathBuf;

use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qlpair_cli::exit;
use qlpair_cli::spec::{emit_pair, load_pair, pairs_equal};
use qlpair_core::catalog;
use qlpair_core::exact::{FieldScalar, NumberField};
use qlpair_core::forms::{LinearForm, PairQL, QuadraticForm};

fn pair_file(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../pairs").join(name);
    p.to_str().unwrap().to_string()
}

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("qlpair").chain(args.iter().copied());
    let code = qlpair_cli::run(argv, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

#[test]
fn canonicalize_reports_labels() {
    let r = run(&["canonicalize", &pair_file("type_one.json")]);
    assert_eq!(r.code, exit::SUCCESS, "{}", r.err);
    assert!(r.out.starts_with("# qlpair canonicalize | seed: none (deterministic)"));
    assert!(r.out.contains("TypeI s=2"));
    let r = run(&["canonicalize", &pair_file("hyperbolic_plane.json")]);
    assert!(r.out.contains("TypeII s=0"), "{}", r.out);
    assert_eq!(run(&["canonicalize", &pair_file("degenerate.json")]).code, exit::HYPOTHESES);
}

#[test]
fn check_exit_codes() {
    let r = run(&["check", &pair_file("e1.json")]);
    assert_eq!(r.code, exit::SUCCESS, "{}", r.out);
    assert!(r.out.contains("verdict: TheoremApplies"));
    let r = run(&["check", &pair_file("rational_q.json")]);
    assert_eq!(r.code, exit::HYPOTHESES);
    assert!(r.out.contains("pencil witness"));
    let r = run(&["check", &pair_file("three_dim.json")]);
    assert_eq!(r.code, exit::HYPOTHESES);
    assert!(r.out.contains("warning:"));
    // heuristic evidence is not a theorem
    let r = run(&["check", &pair_file("e1_float.json"), "--mode", "heuristic"]);
    assert_eq!(r.code, exit::HYPOTHESES);
    assert!(r.out.contains("LikelyApplies"), "{}", r.out);
}

#[test]
fn parse_failures_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"dimension": 2, "Q": {"1,1": "1 +"}, "L": ["1", "0"]}"#).unwrap();
    assert_eq!(run(&["check", bad.to_str().unwrap()]).code, exit::PARSE);
    assert_eq!(run(&["check", "/nonexistent/pair.json"]).code, exit::PARSE);
    assert_eq!(run(&["frobnicate"]).code, exit::PARSE);
    assert_eq!(run(&["approximate", &pair_file("e1.json"), "--target", "1"]).code, exit::PARSE);
}

#[test]
fn json_output_is_valid() {
    for args in [
        vec!["canonicalize", "--json"],
        vec!["check", "--json"],
        vec!["approximate", "--json", "--target", "0.5,-1", "--bound", "6"],
        vec!["gap", "--json", "--bound", "4"],
    ] {
        let mut full = args.clone();
        let file = pair_file("e1.json");
        full.insert(1, &file);
        let r = run(&full);
        assert!(r.code == exit::SUCCESS, "{args:?}: {}", r.err);
        let body: String = r.out.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n");
        let v: serde_json::Value = serde_json::from_str(&body).unwrap_or_else(|e| panic!("{args:?}: {e}\n{body}"));
        assert_eq!(v["command"], args[0]);
    }
}

#[test]
fn gap_of_definite_pair_is_exactly_one() {
    let r = run(&["gap", &pair_file("definite_pencil.json"), "--bound", "8"]);
    assert_eq!(r.code, exit::SUCCESS);
    assert!(r.out.contains("min_distance = 1 (exact)"), "{}", r.out);
}

#[test]
fn approximate_finds_exact_value() {
    let r = run(&["approximate", &pair_file("e1.json"), "--target", "5,2", "--bound", "5"]);
    assert_eq!(r.code, exit::SUCCESS);
    assert!(r.out.contains("error = 0\n"), "{}", r.out);
}

#[test]
fn scan_writes_csv_to_stdout_without_out() {
    let r = run(&["scan", &pair_file("e1.json"), "--rect", "-1,1,-1,1", "--grid", "2,3", "--bound", "5", "--eps", "0.5"]);
    assert_eq!(r.code, exit::SUCCESS, "{}", r.err);
    let rows: Vec<&str> = r.out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "cell_a,cell_b,best_err,x1,x2,x3,x4");
    assert_eq!(rows.len(), 1 + 6);
    assert!(r.err.contains("coverage at eps"));
}

#[test]
fn reduce_prints_seed_and_emits_a_valid_pair() {
    let dir = tempfile::tempdir().unwrap();
    let emit = dir.path().join("out.json");
    let r = run(&["reduce", &pair_file("e6.json"), "--seed", "3", "--emit", emit.to_str().unwrap()]);
    assert_eq!(r.code, exit::SUCCESS, "{}", r.err);
    assert!(r.out.starts_with("# qlpair reduce | seed: 3"));
    assert!(r.out.contains("final dimension: 4"));
    assert_eq!(run(&["check", emit.to_str().unwrap()]).code, exit::SUCCESS);
    // already at dimension 4 is a precondition problem for a single step
    assert_eq!(run(&["reduce", &pair_file("three_dim.json")]).code, exit::HYPOTHESES);
}

#[test]
fn shard_override_from_environment() {
    let file = pair_file("e1.json");
    let args = ["approximate", file.as_str(), "--target", "0.3,0.7", "--bound", "8", "--shards", "1"];
    let base = run(&args);
    std::env::set_var("QLPAIR_SHARDS", "3");
    let env = run(&args);
    std::env::remove_var("QLPAIR_SHARDS");
    assert_eq!(base.out, env.out);
}

fn sqrt2_pair(d: usize, entries: &[(i64, i64)], l: &[(i64, i64)]) -> Option<PairQL> {
    let f = NumberField::quadratic("t", 2).unwrap();
    let s = |(a, b): (i64, i64)| {
        FieldScalar::new(&f, vec![BigRational::from_integer(a.into()), BigRational::from_integer(b.into())])
    };
    let mut coeffs = Vec::new();
    let mut k = 0;
    for i in 0..d {
        for j in i..d {
            coeffs.push(((i, j), s(entries[k])));
            k += 1;
        }
    }
    let q = QuadraticForm::from_coefficients(&f, d, &coeffs).ok()?;
    let l = LinearForm::new(&f, l.iter().copied().map(s).collect()).ok()?;
    PairQL::new(q, l).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn emitted_files_parse_back(
        entries in prop::collection::vec((-9i64..=9, -9i64..=9), 10),
        l in prop::collection::vec((-9i64..=9, -9i64..=9), 4),
    ) {
        prop_assume!(l.iter().any(|&(a, b)| a != 0 || b != 0));
        if let Some(p) = sqrt2_pair(4, &entries, &l) {
            let back = load_pair(&emit_pair(&p, None).unwrap()).unwrap().pair;
            prop_assert!(pairs_equal(&p, &back));
        }
    }

    #[test]
    fn emitted_rational_files_parse_back(seed in any::<u64>(), d in 1usize..=6) {
        let p = catalog::random_rational_pair(&mut ChaCha8Rng::seed_from_u64(seed), d, 50);
        let back = load_pair(&emit_pair(&p, None).unwrap()).unwrap().pair;
        prop_assert!(pairs_equal(&p, &back));
    }
}
