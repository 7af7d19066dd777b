//! The `p4surf` binary: exit codes, run directories and file round trips.

use std::path::Path;
use std::process::{Command, Output};

use p4surf::construct::ConstructionReport;
use p4surf::ideal::Ideal;
use p4surf::parse::parse_ideal;
use p4surf::resolve::{BettiRecord, BettiTable};
use p4surf::Ring;

fn p4surf(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_p4surf"))
        .args(args)
        .current_dir(dir)
        .env_remove("P4SURF_CACHE")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn monad_run_directory_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let o = p4surf(&["monad", "--seed", "2", "--out", "runs", "--no-cache"], d);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let run = d.join("runs/monad-s2-p31991");
    for f in ["M.mat", "N.mat", "E.mat", "f.mat", "X.ideal", "report.json", "report.txt"] {
        assert!(run.join(f).exists(), "{f} missing");
    }
    let first = std::fs::read(run.join("report.json")).unwrap();
    let report = ConstructionReport::from_json(std::str::from_utf8(&first).unwrap()).unwrap();
    assert!(report.verdict);

    // Existing run directories need --force; the rerun is byte-identical.
    assert_eq!(code(&p4surf(&["monad", "--seed", "2", "--out", "runs"], d)), 2);
    assert_eq!(code(&p4surf(&["monad", "--seed", "2", "--out", "runs", "--force"], d)), 0);
    assert_eq!(first, std::fs::read(run.join("report.json")).unwrap());

    // The emitted ideal re-reads to the report's table of I_X, one step
    // further along in the resolution of S/I_X.
    let o = p4surf(&["betti", "runs/monad-s2-p31991/X.ideal", "--format", "json"], d);
    assert_eq!(code(&o), 0);
    let records: Vec<BettiRecord> = serde_json::from_str(&stdout(&o)).unwrap();
    let mut shifted: Vec<BettiRecord> =
        report.betti.iter().map(|r| BettiRecord { step: r.step + 1, ..r.clone() }).collect();
    shifted.push(BettiRecord { step: 0, twist: 0, rank: 1 });
    assert_eq!(BettiTable::from_records(&records), BettiTable::from_records(&shifted));

    let o = p4surf(&["invariants", "runs/monad-s2-p31991/report.json", "--format", "json"], d);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, serde_json::json!({"d":12,"pi":13,"chi":3,"pg":3,"q":1,"K2":0,"s":2}));

    let o = p4surf(&["cohomology-table", "runs/monad-s2-p31991/M.mat", "--range", "-1:3"], d);
    assert_eq!(code(&o), 0);
}

#[test]
fn link_is_an_involution_on_files() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    std::fs::write(d.join("plane.ideal"), "x0\nx1\n").unwrap();
    std::fs::write(d.join("a.poly"), "x0*x2\n").unwrap();
    std::fs::write(d.join("b.poly"), "x1*x3 + x0*x4\n").unwrap();
    let o = p4surf(&["link", "--ci", "a.poly,b.poly", "plane.ideal", "-o", "res.ideal"], d);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = p4surf(&["hilbert", "res.ideal", "--format", "json"], d);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["degree"], 3);
    let o = p4surf(&["link", "--ci", "a.poly,b.poly", "res.ideal"], d);
    assert_eq!(code(&o), 0);
    let ring = Ring::p4(31991).unwrap();
    let back = Ideal::new(&ring, parse_ideal(&ring, &stdout(&o)).unwrap()).unwrap();
    let plane = Ideal::new(&ring, parse_ideal(&ring, "x0\nx1").unwrap()).unwrap();
    assert!(back.contains_ideal(&plane) && plane.contains_ideal(&back));

    // A complete intersection not containing the ideal is a usage error.
    std::fs::write(d.join("c.poly"), "x2*x3\n").unwrap();
    assert_eq!(code(&p4surf(&["link", "--ci", "a.poly,c.poly", "plane.ideal"], d)), 2);
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    std::fs::write(d.join("planes.ideal"), "x0*x2\nx0*x3\nx1*x2\nx1*x3\n").unwrap();
    std::fs::write(d.join("plane.ideal"), "x0\nx1\n").unwrap();
    std::fs::write(d.join("bad.ideal"), "x0 +\n").unwrap();
    assert_eq!(code(&p4surf(&["smooth-check", "plane.ideal"], d)), 0);
    let o = p4surf(&["smooth-check", "planes.ideal"], d);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("SingularWithLocus"));
    assert_eq!(code(&p4surf(&["betti", "bad.ideal"], d)), 2);
    assert_eq!(code(&p4surf(&["betti", "missing.ideal"], d)), 2);
    assert_eq!(code(&p4surf(&["monad", "--char", "4"], d)), 2);
    assert_eq!(code(&p4surf(&["cohomology-table", "plane.ideal", "--range", "3:1"], d)), 2);
    assert_eq!(code(&p4surf(&["no-such-command"], d)), 2);
}
