use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn monopart(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monopart"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gen_partition_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = monopart(&["gen", "--n", "60", "--mode", "split", "--s", "15", "--seed", "4", "--out", "g.txt"], d);
    assert!(o.status.success());
    let o = monopart(&["partition", "--coloring", "g.txt", "--family1", "cycles", "--family2", "paths", "--seed", "2", "--cert-out", "c.txt"], d);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = monopart(&["verify", "--coloring", "g.txt", "--family1", "cycles", "--family2", "paths", "--cert", "c.txt"], d);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("accept"));
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("g.txt"), "n 3\nRB\nB\n").unwrap();
    // red path 2-1-3 would need edge (1,3) red; it is blue
    fs::write(
        d.join("c.txt"),
        "certificate n=3 pieces=1\npiece 1 color=R family=paths n=3\nmap 1:2 2:1 3:3\n",
    )
    .unwrap();
    let o = monopart(&["verify", "--coloring", "g.txt", "--family1", "paths", "--cert", "c.txt"], d);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("color: piece 1"));

    fs::write(
        d.join("c.txt"),
        "certificate n=3 pieces=2\npiece 1 color=B family=paths n=2\nmap 1:1 2:3\npiece 2 color=R family=paths n=2\nmap 1:1 2:2\n",
    )
    .unwrap();
    let o = monopart(&["verify", "--coloring", "g.txt", "--family1", "paths", "--cert", "c.txt"], d);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("disjointness: pieces 1 and 2 share vertex 1"));
}

#[test]
fn budget_exit_code_and_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    monopart(&["gen", "--n", "40", "--mode", "split", "--s", "10", "--out", "g.txt"], d);
    let o = monopart(&["partition", "--coloring", "g.txt", "--family1", "cycles", "--budget", "1", "--cert-out", "p.txt"], d);
    assert_eq!(o.status.code(), Some(3));
    let partial = fs::read_to_string(d.join("p.txt")).unwrap();
    assert!(partial.starts_with("certificate n=40 pieces=1"));
}

#[test]
fn usage_and_input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(monopart(&["frobnicate"], d).status.code(), Some(2));
    assert_eq!(monopart(&["verify", "--coloring", "missing.txt", "--family1", "paths", "--cert", "x"], d).status.code(), Some(2));
    fs::write(d.join("bad.txt"), "n 3\nRX\nB\n").unwrap();
    let o = monopart(&["oracle", "--coloring", "bad.txt", "--family1", "paths"], d);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn oracle_and_theoretical_output() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("k4.txt"), "n 4\nBBB\nBB\nB\n").unwrap();
    let o = monopart(&["oracle", "--coloring", "k4.txt", "--family1", "paths", "--family2", "cycles"], d);
    assert_eq!(stdout(&o).trim(), "minimum pieces: 1");

    let o = monopart(&["partition", "--coloring", "k4.txt", "--family1", "cycle_power(2)", "--theoretical"], d);
    assert!(o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("k     = Delta + 2 = 6"));
    assert!(err.contains("2^(2k) = 4096"));
}

#[test]
fn bench_lines_are_tab_separated() {
    let dir = tempfile::tempdir().unwrap();
    let o = monopart(&["bench", "--suite", "smoke", "--seed", "7"], dir.path());
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4);
    for line in lines {
        let cols: Vec<&str> = line.split('\t').collect();
        assert_eq!(cols.len(), 7, "{line}");
        assert_eq!(cols[4], "NA");
        assert_eq!(cols[6], "true");
    }
}
