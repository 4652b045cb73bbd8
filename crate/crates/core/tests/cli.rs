mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::data_path;

fn mincond(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mincond"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_barbell(dir: &Path) -> String {
    let path = dir.join("barbell.txt");
    fs::write(&path, "a b\nb c\na c\nd e\ne f\nd f\nc d\n").unwrap();
    path.to_string_lossy().into_owned()
}

fn solve(
    input: &str,
    dir: &Path,
    tag: &str,
    threads: &str,
    extra: &[&str],
) -> (Output, String, String) {
    let summary = dir.join(format!("{tag}-summary.csv"));
    let runs = dir.join(format!("{tag}-runs.csv"));
    let mut args = vec![
        "solve",
        "--input",
        input,
        "--out-summary",
        summary.to_str().unwrap(),
        "--out-runs",
        runs.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let out = Command::new(env!("CARGO_BIN_EXE_mincond"))
        .args(&args)
        .env("CONDUCTANCE_THREADS", threads)
        .output()
        .unwrap();
    let read = |p: &Path| fs::read_to_string(p).unwrap_or_default();
    (out, read(&summary), read(&runs))
}

#[test]
fn version_and_help_exit_zero() {
    let out = mincond(&["--version"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains(env!("CARGO_PKG_VERSION")));
    assert!(mincond(&["solve", "--help"]).status.success());
}

#[test]
fn solve_writes_csv_and_partition() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_barbell(dir.path());
    let part = dir.path().join("best.txt");
    let (out, summary, runs) = solve(
        &input,
        dir.path(),
        "a",
        "2",
        &[
            "--algorithm",
            "sts-ama",
            "--runs",
            "3",
            "--iterations",
            "5000",
            "--pop-size",
            "10",
            "--ls-length",
            "100",
            "--out-partition",
            part.to_str().unwrap(),
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        summary,
        "graph,algorithm,min_phi,mean_phi,success,runs\nbarbell,sts-ama,0.14285714,0.14285714,3,3\n"
    );
    assert_eq!(runs.lines().count(), 4);
    assert!(runs.starts_with("run,seed,phi,elapsed_ms,evaluations,restarts\n0,0,0.14285714,"));
    let partition = fs::read_to_string(part).unwrap();
    assert!(partition.starts_with("# conductance 0.14285714\na "));
    let side = |label: &str| {
        partition
            .lines()
            .find_map(|l| l.strip_prefix(&format!("{label} ")).map(str::to_owned))
            .unwrap()
    };
    assert_eq!(side("a"), side("c"));
    assert_ne!(side("c"), side("d"));
}

#[test]
fn iteration_mode_is_byte_identical_across_invocations_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let input = data_path("zachary.txt");
    let input = input.to_str().unwrap();
    let args = [
        "--algorithm",
        "aga-ux",
        "--runs",
        "4",
        "--iterations",
        "20000",
        "--seed",
        "9",
    ];
    let (o1, s1, _) = solve(input, dir.path(), "x", "1", &args);
    let (o2, s2, _) = solve(input, dir.path(), "y", "4", &args);
    assert!(o1.status.success() && o2.status.success());
    assert_eq!(s1, s2);
}

#[test]
fn bad_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.txt");
    let (out, _, _) = solve(
        missing.to_str().unwrap(),
        dir.path(),
        "m",
        "1",
        &["--algorithm", "ls1", "--iterations", "10"],
    );
    assert_eq!(out.status.code(), Some(1));

    let input = write_barbell(dir.path());
    for extra in [
        &["--algorithm", "nope", "--iterations", "10"][..],
        &["--algorithm", "ls1"][..],
        &[
            "--algorithm",
            "ls1",
            "--iterations",
            "10",
            "--time-limit",
            "1",
        ][..],
        &["--algorithm", "ls1", "--iterations", "10", "--runs", "0"][..],
        &[
            "--algorithm",
            "sts-ama",
            "--iterations",
            "10",
            "--pop-size",
            "1",
        ][..],
    ] {
        let (out, _, _) = solve(&input, dir.path(), "bad", "1", extra);
        assert_eq!(out.status.code(), Some(1), "{extra:?}");
    }

    let malformed = dir.path().join("bad.txt");
    fs::write(&malformed, "1 2\n3\n").unwrap();
    let out = mincond(&["verify", "--input", malformed.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn verify_reports_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_barbell(dir.path());
    let out = mincond(&["verify", "--input", &input]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("optimum 0.14285714\n"));
    assert_eq!(
        text.lines().filter(|l| l.ends_with(" optimal")).count(),
        6,
        "{text}"
    );

    let big = data_path("zachary.txt");
    let out = mincond(&["verify", "--input", big.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn lcc_flag_restricts_the_graph() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two.txt");
    fs::write(&path, "0 1\n1 2\n0 2\n2 3\n3 4\n4 2\n7 8\n").unwrap();
    let p = path.to_str().unwrap();
    let part = dir.path().join("part.txt");
    let (out, summary, _) = solve(
        p,
        dir.path(),
        "l",
        "1",
        &[
            "--lcc",
            "--algorithm",
            "ls1",
            "--iterations",
            "1000",
            "--out-partition",
            part.to_str().unwrap(),
        ],
    );
    assert!(out.status.success());
    assert!(summary.contains("two,ls1,0.50000000,"), "{summary}");
    assert_eq!(fs::read_to_string(part).unwrap().lines().count(), 6);
    // without --lcc the isolated edge gives conductance zero
    let (_, summary, _) = solve(
        p,
        dir.path(),
        "n",
        "1",
        &["--algorithm", "ls1", "--iterations", "1000"],
    );
    assert!(summary.contains("two,ls1,0.00000000,"), "{summary}");
}
