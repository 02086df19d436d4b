use std::path::PathBuf;
use std::process::{Command, Output};

use integrale::experiment::{read_csv, Record, PENTAGON, TRIANGLE, UNIT_SQUARE};

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn integrale(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_integrale")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn pentagon_volume() {
    let p = scratch("pentagon.vrep", PENTAGON);
    for method in ["triangulate", "cone-decompose"] {
        let out = integrale(&["--valuation", "volume", "--method", method, p.to_str().unwrap()]);
        assert_eq!(stdout(&out), "6\napprox 6.0000000000000000000e0\n");
    }
}

#[test]
fn integrands_from_files() {
    let triangle = scratch("triangle.vrep", TRIANGLE);
    let monomials = scratch("x_plus_y.txt", "[[1,[1,0]],[1,[0,1]]]");
    let out = integrale(&[
        "--valuation=integrate",
        "--monomials",
        monomials.to_str().unwrap(),
        triangle.to_str().unwrap(),
    ]);
    assert!(stdout(&out).starts_with("2/3\napprox 6.6666666666666666667e-1\n"));

    let square = scratch("square.hrep", UNIT_SQUARE);
    let forms = scratch("x.txt", "[[1,[1,[1,0]]]]");
    let out = integrale(&[
        "--valuation=integrate",
        "--method=cone-decompose",
        "--linear-forms",
        forms.to_str().unwrap(),
        "--timing",
        square.to_str().unwrap(),
    ]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "1/2");
    assert!(lines[2].starts_with("time ") && lines[2].ends_with(" s"), "{text}");
}

#[test]
fn exit_codes() {
    let square = scratch("square2.hrep", UNIT_SQUARE);
    let square = square.to_str().unwrap();
    let code = |args: &[&str]| integrale(args).status.code().unwrap();

    assert_eq!(code(&["--valuation=integrate", square]), 2);
    assert_eq!(code(&["--valuation=volume", "/nonexistent/polytope"]), 1);
    let bad = scratch("bad.hrep", "2 3\n0 1\n");
    assert_eq!(code(&["--valuation=volume", bad.to_str().unwrap()]), 3);
    let wrong_dim = scratch("wrong_dim.txt", "[[1,[1,0,0]]]");
    assert_eq!(code(&["--valuation=integrate", "--monomials", wrong_dim.to_str().unwrap(), square]), 3);
    assert_eq!(code(&["--valuation=volume", "--threads", "0", square]), 2);
    assert_eq!(code(&["experiment", "nonsense", "--out", "/tmp/x.csv"]), 2);
}

fn experiment(threads: &str, name: &str) -> Vec<Record> {
    let csv = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let out = integrale(&["experiment", "examples", "--out", csv.to_str().unwrap(), "--threads", threads]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    read_csv(std::fs::File::open(csv).unwrap()).unwrap()
}

#[test]
fn experiment_csv_does_not_depend_on_threads() {
    let one = experiment("1", "examples-1.csv");
    let three = experiment("3", "examples-3.csv");
    assert_eq!(one.len(), 8);
    let strip = |r: &[Record]| {
        r.iter()
            .map(|r| Record {
                seconds: 0.0,
                ..r.clone()
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&one), strip(&three));
}
