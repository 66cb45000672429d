use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const EXAMPLE5: &str = "moip 1\nobjectives 2\nvariables 2\nvar 0 2\nvar 0 2\nC\n2 1\n1 2\nconstraints 1\n1 1 <= 2\n";
const EXAMPLE2: &str =
    "moip 1\nobjectives 2\nvariables 2\nvar 0 1\nvar 0 1\nC\n1 -1/2\n-1/2 1\nconstraints 1\n1 1 <= 1 dualized\n";

fn moip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moip")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn solve_and_supported() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ex5.moip", EXAMPLE5);
    let o = moip(&["solve", &f]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "y1,y2\n2,4\n3,3\n4,2\n");
    let o = moip(&["supported", &f]);
    assert_eq!(stdout(&o).lines().count(), 4);
    assert!(stdout(&o).contains("1 1,3,3"));
}

#[test]
fn relax_with_multipliers() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ex2.moip", EXAMPLE2);
    let o = moip(&["relax", &f, "--kind", "lr", "--lambda", "2,2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "y1,y2\n2,2\n");
    let o = moip(&["relax", &f, "--kind", "molp"]);
    assert!(o.status.success());
    let o = moip(&["relax", &f, "--kind", "lr", "--lambda", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn vsdp_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ex5.moip", EXAMPLE5);
    assert_eq!(stdout(&moip(&["vsdp", &f])), "f1,f2\n4,4\n");
    let o = moip(&["bounds", &f, "--method", "ch"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("method,convex_hull\nd,"));
    let o = moip(&["dual-approx", &f, "--grid-count", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn checks_pass_and_preconditions_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ex2.moip", EXAMPLE2);
    for prop in ["weak-duality", "prop9", "fr-lag"] {
        let o = moip(&["check", &f, "--property", prop]);
        assert!(o.status.success(), "{prop}: {}", stdout(&o));
    }
    let g = write(dir.path(), "ex5.moip", EXAMPLE5);
    let o = moip(&["check", &g, "--property", "value-fn"]);
    assert!(stdout(&o).starts_with("PASS value-fn"));
    // Boxes [0, 1] cut x₁ + x₂ ≤ 2.
    let h = write(dir.path(), "tight.moip", &EXAMPLE5.replace("var 0 2", "var 0 1"));
    let o = moip(&["check", &h, "--property", "value-fn"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_error_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.moip", &EXAMPLE5.replace("<=", ">="));
    let o = moip(&["solve", &f]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 10, column 5") && err.contains(">="), "{err}");
    assert_eq!(moip(&["solve", "/nonexistent/file"]).status.code(), Some(2));
}

#[test]
fn gen_then_experiment_with_reports() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("k.moip");
    let o = moip(&["gen", "--problem", "knapsack", "--seed", "3", "--n", "6", "-o", inst.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(moip(&["solve", inst.to_str().unwrap()]).status.success());
    let out = dir.path().join("reports");
    let args = [
        "--out",
        out.to_str().unwrap(),
        "experiment",
        "--problem",
        "knapsack",
        "--trials",
        "3",
        "--n",
        "8",
        "--grid-count",
        "5",
    ];
    let o = moip(&args);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("method,mean_d,sd_d,strong,trials\n"));
    for name in ["trials.csv", "summary.json", "figure_points.csv", "report.json"] {
        assert!(out.join(name).exists(), "{name}");
    }
    let report = fs::read_to_string(out.join("report.json")).unwrap();
    moip(&args);
    assert_eq!(report, fs::read_to_string(out.join("report.json")).unwrap());
}
