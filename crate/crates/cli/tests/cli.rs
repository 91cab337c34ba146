//! End-to-end tests against the built binary: exit codes, document shape,
//! byte determinism, and the `sc`/`hg` agreement contract.

use std::path::{Path, PathBuf};
use std::process::Output;

use parcover_cli::document::{self, ResultDocument};
use parcover_cli::format::parse_instance;

const UNIT_TRIANGLE: &str = "p hg 3 3\nv 0 1\nv 1 1\nv 2 1\ne 0 1\ne 1 2\ne 0 2\n";
const UNIT_PATH: &str = "p hg 3 2\nv 0 1\nv 1 1\nv 2 1\ne 0 1\ne 1 2\n";
const TWO_SETS: &str = "p sc 2 3\ns 0 1 0 1\ns 1 2 1 2\n";
/// The hypergraph image of `TWO_SETS` under the reduction.
const TWO_SETS_IMAGE: &str = "p hg 2 3\nv 0 1\nv 1 2\ne 0\ne 0 1\ne 1\n";

fn parcover(args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_parcover"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_file(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn solve_document(args: &[&str]) -> ResultDocument {
    let out = parcover(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_str(&out));
    serde_json::from_str(&stdout_str(&out)).unwrap()
}

fn solve_args<'a>(file: &'a str, rest: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec!["solve", file];
    v.extend_from_slice(rest);
    v
}

#[test]
fn unit_triangle_solves_in_one_round_with_weight_three() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(dir.path(), "triangle.hg", UNIT_TRIANGLE);
    let doc = solve_document(&solve_args(file.to_str().unwrap(), &["--eps", "0.1"]));
    assert_eq!(doc.schema, 1);
    assert_eq!(doc.rounds, 1);
    assert_eq!(doc.cover_weight, "3");
    assert_eq!(doc.cover, vec![0, 1, 2]);
    assert_eq!(doc.mode, "rational");
    assert!(doc.certificate.all_pass);
    assert_eq!(doc.packing_total, "3/2");
}

#[test]
fn path_with_oracle_reports_ratio_one() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(dir.path(), "path.hg", UNIT_PATH);
    let doc = solve_document(&solve_args(file.to_str().unwrap(), &["--eps", "0.25", "--oracle"]));
    assert_eq!(doc.cover, vec![1]);
    assert_eq!(doc.cover_weight, "1");
    let oracle = doc.oracle.expect("requested oracle block");
    assert_eq!(oracle.optimum_weight, "1");
    assert_eq!(oracle.optimum_cover, vec![1]);
    assert_eq!(oracle.ratio.parse::<f64>().unwrap(), 1.0);
    assert_eq!(oracle.subsets_examined, 8);
}

#[test]
fn malformed_input_exits_two_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(dir.path(), "bad.hg", "p hg 2 1\nv 0 1\nv 1 2\ne 0 5\n");
    let out = parcover(&["solve", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("line 4"), "{}", stderr_str(&out));

    let out = parcover(&["solve", dir.path().join("absent.hg").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let garbled = write_file(dir.path(), "garbled.hg", "p hg x y\n");
    let out = parcover(&["solve", garbled.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("line 1"), "{}", stderr_str(&out));
}

#[test]
fn int_mode_on_decimal_weights_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(dir.path(), "dec.hg", "p hg 2 1\nv 0 1.5\nv 1 2\ne 0 1\n");
    let out = parcover(&["solve", file.to_str().unwrap(), "--mode", "int"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr_str(&out).contains("non-integer"),
        "{}",
        stderr_str(&out)
    );
}

#[test]
fn set_cover_and_its_image_agree() {
    let dir = tempfile::tempdir().unwrap();
    let sc = write_file(dir.path(), "two.sc", TWO_SETS);
    let hg = write_file(dir.path(), "two.hg", TWO_SETS_IMAGE);
    for eps in ["0.1", "0.3"] {
        let sc_doc = solve_document(&solve_args(sc.to_str().unwrap(), &["--eps", eps]));
        let hg_doc = solve_document(&solve_args(hg.to_str().unwrap(), &["--eps", eps]));
        assert_eq!(sc_doc.cover_weight, hg_doc.cover_weight);
        assert_eq!(sc_doc.packing_total, hg_doc.packing_total);
        assert_eq!(sc_doc.instance.kind, "sc");
        assert_eq!(hg_doc.instance.kind, "hg");
        // The reduction maps ids one-to-one, so the translated values match
        // edge-for-edge as well.
        assert_eq!(sc_doc.packing, hg_doc.packing);
        assert_eq!(sc_doc.cover, hg_doc.cover);
    }
}

#[test]
fn set_cover_oracle_reports_set_ids() {
    let dir = tempfile::tempdir().unwrap();
    let sc = write_file(dir.path(), "two.sc", TWO_SETS);
    let doc = solve_document(&solve_args(sc.to_str().unwrap(), &["--oracle"]));
    let oracle = doc.oracle.expect("requested oracle block");
    // Optimum takes both sets: every edge must be hit and elements 0 and 2
    // are each in only one set.
    assert_eq!(oracle.optimum_cover, vec![0, 1]);
    assert_eq!(oracle.optimum_weight, "3");
}

#[test]
fn repeated_and_parallel_solves_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("gen.hg");
    let gen = parcover(&[
        "generate",
        "random-hg",
        "--n", "60",
        "--m", "200",
        "--rank", "4",
        "--max-weight", "50",
        "--seed", "13",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(gen.status.code(), Some(0));
    let file = out_path.to_str().unwrap();
    for mode in ["rational", "float", "int"] {
        let a = parcover(&["solve", file, "--eps", "0.1", "--mode", mode]);
        let b = parcover(&["solve", file, "--eps", "0.1", "--mode", mode]);
        let c = parcover(&["solve", file, "--eps", "0.1", "--mode", mode, "--parallel"]);
        assert_eq!(a.status.code(), Some(0), "stderr: {}", stderr_str(&a));
        assert_eq!(a.stdout, b.stdout, "mode {mode} not reproducible");
        assert_eq!(a.stdout, c.stdout, "mode {mode} parallel differs");
    }
}

#[test]
fn generate_star_matches_the_worked_instance_and_seeds_are_stable() {
    let star = parcover(&["generate", "star", "--leaves", "3", "--center-weight", "2"]);
    assert_eq!(star.status.code(), Some(0));
    assert_eq!(
        stdout_str(&star),
        "p hg 4 3\nv 0 2\nv 1 1\nv 2 1\nv 3 1\ne 0 1\ne 0 2\ne 0 3\n"
    );
    let a = parcover(&["generate", "random-sc", "--sets", "12", "--elements", "30", "--seed", "9"]);
    let b = parcover(&["generate", "random-sc", "--sets", "12", "--elements", "30", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
    let bad = parcover(&["generate", "star", "--leaves", "0"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn generated_instances_solve_cleanly_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("big.hg");
    let gen = parcover(&[
        "generate",
        "random-hg",
        "--n", "100",
        "--m", "300",
        "--rank", "3",
        "--max-weight", "100",
        "--seed", "7",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(gen.status.code(), Some(0));
    let doc = solve_document(&solve_args(out_path.to_str().unwrap(), &[]));
    assert_eq!(doc.instance.n, 100);
    assert_eq!(doc.instance.m, 300);
    assert!(doc.certificate.all_pass);
    assert!(doc.bounds.rounds_within_bound);
    assert!(doc.bounds.work_within_bound);
}

#[test]
fn documents_reverify_from_disk_in_every_mode() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write_file(dir.path(), "triangle.hg", UNIT_TRIANGLE);
    let sc = write_file(dir.path(), "two.sc", TWO_SETS);
    let dec = write_file(
        dir.path(),
        "dec.hg",
        "p hg 3 2\nv 0 0.5\nv 1 1.25\nv 2 2\ne 0 1\ne 1 2\n",
    );
    let cases: Vec<(&Path, &str, &[&str])> = vec![
        (&tri, UNIT_TRIANGLE, &["--mode", "rational"]),
        (&tri, UNIT_TRIANGLE, &["--mode", "float"]),
        (&tri, UNIT_TRIANGLE, &["--mode", "int"]),
        (&sc, TWO_SETS, &["--mode", "rational"]),
        (&dec, "p hg 3 2\nv 0 0.5\nv 1 1.25\nv 2 2\ne 0 1\ne 1 2\n", &["--mode", "float"]),
    ];
    for (file, text, extra) in cases {
        let json_path = dir.path().join("out.json");
        let mut args = vec!["solve", file.to_str().unwrap(), "--json"];
        args.push(json_path.to_str().unwrap());
        args.extend_from_slice(extra);
        let out = parcover(&args);
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_str(&out));
        assert!(stdout_str(&out).contains("certificates ok"));
        let doc: ResultDocument =
            serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
        let instance = parse_instance(text).unwrap();
        let fresh = document::reverify(&doc, &instance).expect("document reverifies");
        assert_eq!(fresh, doc.certificate, "verdict drift for {extra:?}");
        assert!(fresh.all_pass);
    }
}

#[test]
fn bench_prints_a_table_and_respects_bounds() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "a.hg", UNIT_TRIANGLE);
    write_file(dir.path(), "b.hg", UNIT_PATH);
    write_file(dir.path(), "c.sc", TWO_SETS);
    let out = parcover(&[
        "bench",
        dir.path().to_str().unwrap(),
        "random-hg:n=30,m=90,rank=3,seed=2,count=2",
        "--eps",
        "0.1,0.3",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_str(&out));
    let table = stdout_str(&out);
    let mut lines = table.lines();
    let header = lines.next().unwrap();
    for column in ["instance", "m", "rank", "M", "eps", "rounds", "round_bound", "work", "work_bound"] {
        assert!(header.contains(column), "missing column {column}");
    }
    // 3 files + 2 generated instances, two eps values each.
    assert_eq!(lines.count(), 10);

    let out = parcover(&["bench", "no-such-kind:n=3"]);
    assert_eq!(out.status.code(), Some(2));
}
