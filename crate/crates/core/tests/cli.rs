use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use alphadom::cli::experiment::CSV_HEADER;

fn alphadom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alphadom"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_p3(dir: &Path) -> String {
    let path = dir.join("p3.txt");
    fs::write(&path, "3 2\n0 1\n1 2\n").unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn gen_graph_complete_header() {
    let out = alphadom(&["gen-graph", "--gen", "5,1.0", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("5 10"));
    assert_eq!(text.lines().count(), 11);
}

#[test]
fn gen_graph_files_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for p in [&a, &b] {
        let out = alphadom(&[
            "gen-graph",
            "--gen",
            "50,0.2",
            "--seed",
            "9",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn gen_graph_infeasible_density() {
    let out = alphadom(&["gen-graph", "--gen", "100,0.005"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).to_lowercase();
    assert!(err.contains("density"), "{err}");
}

#[test]
fn simulate_p3_row() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = write_p3(dir.path());
    let trace = dir.path().join("trace.csv");
    let out = alphadom(&[
        "simulate",
        "--graph",
        &p3,
        "--alpha",
        "1/2",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER.join(",").as_str()));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..4], ["3", "2", "0.6667", "1/2"]);
    assert_eq!(row[8], "true");
    let moves: usize = row[7].parse().unwrap();
    let size: usize = row[9].parse().unwrap();
    assert!(moves <= 6);
    assert!((1..=2).contains(&size));
    assert_eq!(row[11], "");

    let dump = fs::read_to_string(trace).unwrap();
    assert_eq!(dump.lines().next(), Some("step,node,rule,pre,post"));
    assert_eq!(dump.lines().count(), moves + 1);
}

#[test]
fn simulate_transformed_mode() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = write_p3(dir.path());
    for daemon in ["transformed", "transformed:sync"] {
        let out = alphadom(&[
            "simulate", "--graph", &p3, "--alpha", "1/2", "--daemon", daemon, "--seed", "4",
        ]);
        assert_eq!(out.status.code(), Some(0), "{daemon}");
        assert!(stdout(&out).contains(",true,"));
    }
}

#[test]
fn simulate_rejects_bad_alpha() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = write_p3(dir.path());
    let out = alphadom(&["simulate", "--graph", &p3, "--alpha", "3/2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = alphadom(&["simulate", "--graph", &p3, "--alpha", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1/2"));
}

#[test]
fn simulate_not_stabilized_exits_one() {
    let out = alphadom(&[
        "simulate",
        "--gen",
        "40,0.5",
        "--alpha",
        "1/2",
        "--max-steps",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains(",false,"));
}

#[test]
fn io_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.txt");
    let out = alphadom(&[
        "verify",
        "--graph",
        missing.to_str().unwrap(),
        "--set",
        "1",
        "--alpha",
        "1/2",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let unwritable = dir.path().join("no_dir").join("g.txt");
    let out = alphadom(&[
        "gen-graph",
        "--gen",
        "5,1.0",
        "--out",
        unwritable.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_graph_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    fs::write(&path, "3 2\n0 1\n").unwrap();
    let out = alphadom(&[
        "simulate",
        "--graph",
        path.to_str().unwrap(),
        "--alpha",
        "1/2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_reports() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = write_p3(dir.path());
    let verify = |set: &str| {
        stdout(&alphadom(&[
            "verify", "--graph", &p3, "--set", set, "--alpha", "1/2",
        ]))
    };
    assert_eq!(
        verify("1").trim_end(),
        "alpha-dominating: yes; minimal: yes; minimum: 1"
    );
    assert!(verify("0,1").contains("minimal: no"));
    assert!(verify("").contains("alpha-dominating: no"));
}

#[test]
fn sweep_is_reproducible_with_golden_header() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("chart.svg");
    let args = [
        "sweep",
        "--gen",
        "30,0.2,0.8",
        "--alpha",
        "1/4,1/2,3/4",
        "--reps",
        "3",
        "--seed",
        "11",
    ];
    let first = alphadom(&args);
    let second = alphadom(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);

    let text = stdout(&first);
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,m,density,alpha,seed,init,daemon,moves,stabilized,set_size,set_ratio,wall_ms")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2 * 3 * 3 + 2 * 3);
    assert_eq!(rows.iter().filter(|r| r[4] == "mean").count(), 6);
    for r in rows.iter().filter(|r| r[4] != "mean") {
        assert!(r[7].parse::<usize>().unwrap() <= 2 * 30);
    }

    let mut with_svg = args.to_vec();
    with_svg.extend(["--svg", svg.to_str().unwrap()]);
    assert_eq!(alphadom(&with_svg).status.code(), Some(0));
    assert!(fs::read_to_string(svg).unwrap().starts_with("<svg"));
}

#[test]
fn help_exits_zero() {
    assert_eq!(alphadom(&["--help"]).status.code(), Some(0));
    assert_eq!(alphadom(&["frobnicate"]).status.code(), Some(2));
}
