use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use mixture_codes::{Composition, CompositionMultiset};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mixcodes"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn file(name: &str, contents: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

fn ms(items: &[&str]) -> String {
    items.iter().map(|t| t.parse::<Composition>().unwrap()).collect::<CompositionMultiset>().to_json()
}

#[test]
fn bounds_table_in_markdown() {
    let o = run(&["bounds", "--h", "4,6,8", "--mode", "gaussian", "--format", "md"], "");
    assert!(o.status.success());
    let text = stdout(&o);
    for v in ["0.4406", "0.3433", "0.2837", "0.5118", "3/5"] {
        assert!(text.contains(v), "{v} missing from\n{text}");
    }
}

#[test]
fn encode_lengths_and_errors() {
    let o = run(&["encode", "--code", "bch_255_239", "--format", "csv"], "0000000000000001\n0000000000000010\n");
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().all(|l| l.len() == 50));
    let empty = run(&["encode", "--code", "bch_255_239"], "");
    assert_eq!(empty.status.code(), Some(0));
    assert_eq!(stdout(&empty).trim(), "[]");
    let bad = file("bad_matrix.txt", "not a matrix\n");
    assert_eq!(run(&["encode", "--code", &bad], "").status.code(), Some(2));
}

#[test]
fn encode_pool_decode_round_trip() {
    let sources = "0000000000000001\n0000000000000010\n";
    let words = run(&["encode", "--code", "bch_255_239"], sources);
    let pooled = run(&["pool"], &stdout(&words));
    assert!(pooled.status.success());
    let decoded = run(&["decode", "--code", "bch_255_239", "--format", "csv"], &stdout(&pooled));
    assert_eq!(decoded.status.code(), Some(0));
    assert_eq!(stdout(&decoded), sources);
}

#[test]
fn coded_scheme_survives_a_missing_composition() {
    let sources = "0000000000000001\n0000000000000100\n";
    let code = ["--code", "bch_255_239", "--scheme", "two-step", "--t", "1"];
    let words = run(&[&["encode"][..], &code].concat(), sources);
    let pooled = stdout(&run(&["pool"], &stdout(&words)));
    let pattern = file("one_removal.json", r#"{"erase": [{"side": "prefix", "len": 20, "count": 1}]}"#);
    let damaged = run(&["corrupt", "--pattern", &pattern], &pooled);
    assert!(damaged.status.success(), "{}", String::from_utf8_lossy(&damaged.stderr));
    let decoded = run(&[&["decode", "--format", "csv"][..], &code].concat(), &stdout(&damaged));
    assert_eq!(decoded.status.code(), Some(0), "{}", String::from_utf8_lossy(&decoded.stderr));
    assert_eq!(stdout(&decoded), sources);
}

#[test]
fn two_string_pool_by_hand() {
    let o = run(&["pool"], "110100\n101010\n");
    let text = stdout(&o);
    let p = CompositionMultiset::from_json(&text).unwrap();
    assert_eq!(p.len(), 24);
    let cfg = file("pair_words.json", r#"{"h": 2, "words": ["110100", "101010", "110010"]}"#);
    let d = run(&["decode", "--code", &cfg], &text);
    assert_eq!(d.status.code(), Some(0));
    assert!(stdout(&d).contains("101010") && stdout(&d).contains("110100"));
}

#[test]
fn clean_singleton_decodes() {
    let cfg = file("single_words.json", r#"{"h": 1, "words": ["111000", "110100", "101010"]}"#);
    let pooled = stdout(&run(&["pool"], "110100\n"));
    let d = run(&["decode", "--code", &cfg, "--format", "csv"], &pooled);
    assert_eq!(d.status.code(), Some(0));
    assert_eq!(stdout(&d), "110100\n");
}

#[test]
fn ambiguous_erasure_exits_three() {
    let cfg = file("ambiguous_words.json", r#"{"h": 1, "words": ["111000", "110100", "101010"]}"#);
    let pool = ms(&["1", "1^2", "0 1^3", "0^2 1^3", "0^3 1^3", "0^3 1^3", "0^3 1^2", "0^3 1", "0^2", "0"]);
    let d = run(&["decode", "--code", &cfg, "--hbar", "1"], &pool);
    assert_eq!(d.status.code(), Some(3));
    let text = stdout(&d);
    assert!(text.contains("ambiguous") && text.contains("111000") && text.contains("110100"));
}

#[test]
fn failures_exit_four() {
    let cfg = file("fail_words.json", r#"{"h": 1, "words": ["111000", "110100"]}"#);
    let d = run(&["decode", "--code", &cfg], &ms(&["1^6"]));
    assert_eq!(d.status.code(), Some(4));
}

#[test]
fn verify_small_sets() {
    let good = run(&["verify", "--input", "-", "--h", "2"], "110100\n101010\n110010\n");
    assert_eq!(good.status.code(), Some(0));
    assert!(stdout(&good).contains("valid"));
    let bad = run(&["verify", "--input", "-", "--h", "2"], "110100\n101010\n110010\n101100\n");
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("211110") || stdout(&bad).contains("collision"));
    let hmc = run(&["verify", "--code", "bch_15_7", "--kind", "hmc"], "");
    assert_eq!(hmc.status.code(), Some(0));
}

#[test]
fn budget_overrun_exits_five() {
    let o = run(&["verify", "--code", "bch_255_239", "--budget", "10"], "");
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn greedy_search_from_seed() {
    let seed = file("seed.txt", "110100\n101010\n");
    let o = run(&["search", "--n", "6", "--h", "2", "--extend", &seed, "--format", "csv"], "");
    assert!(o.status.success());
    let found: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(&found[..2], &["110100", "101010"]);
}

#[test]
fn experiments_are_reproducible() {
    let args = ["--seed", "11", "experiment", "--code", "bch_15_7", "--hbar", "2", "--erasures", "2", "--trials", "20", "--format", "csv"];
    let (a, b) = (run(&args, ""), run(&args, ""));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("seed,n,hbar,t,placement,outcome"));
    assert_eq!(text.lines().count(), 21);
}
