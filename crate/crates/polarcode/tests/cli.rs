use std::path::Path;
use std::process::{Command, Output};

use polarcode::io::parse_code;

fn polarcode(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polarcode"))
        .args(args)
        .current_dir(dir)
        .env_remove("POLAR_BUDGET")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn build_writes_code_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = polarcode(
        &["build", "--q", "3", "--n", "2", "-o", "code.txt"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "40 10 18\n");
    let text = std::fs::read_to_string(dir.path().join("code.txt")).unwrap();
    assert!(text.starts_with("40 10 3 2\n"));
    assert_eq!(text.lines().count(), 1 + 10 + 1);
    let (_, code) = parse_code(&text).unwrap();
    assert_eq!(code.params.d_claimed, 18);
    assert!(dir.path().join("code.txt.params.json").exists());

    let o = polarcode(&["build", "--q", "3", "--n", "3"], dir.path());
    assert_eq!(stdout(&o), "3640 21 1944\n");
}

#[test]
fn even_and_bad_fields_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = polarcode(&["build", "--q", "4", "--n", "2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("q must be odd"));
    assert_eq!(
        polarcode(&["build", "--q", "15", "--n", "2"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        polarcode(&["build", "--q", "3", "--n", "1"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        polarcode(&["build", "--q", "3"], dir.path()).status.code(),
        Some(2)
    );
}

#[test]
fn extension_flag_reads_q_as_characteristic() {
    let dir = tempfile::tempdir().unwrap();
    let o = polarcode(&["build", "--q", "3", "--e", "2", "--n", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    // q = 9
    let n9 = polar_grassmann::geometry::singular_line_count(9, 2);
    assert_eq!(stdout(&o), format!("{n9} 10 {}\n", 9u64.pow(3) - 81));
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = polarcode(
        &[
            "build",
            "--q",
            "3",
            "--n",
            "2",
            "-o",
            "missing/dir/code.txt",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_examples() {
    let dir = tempfile::tempdir().unwrap();
    let o = polarcode(
        &["verify", "--q", "3", "--n", "3", "--check", "prop-c1p1"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let top = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["params"]["r"] == 5)
        .unwrap();
    assert_eq!(top["observed"]["a"], 49);
    assert_eq!(top["observed"]["n0"], 72);
    assert_eq!(top["observed"]["n_plus"], 243);
    assert_eq!(top["observed"]["n_minus"], 0);

    let o = polarcode(
        &[
            "verify",
            "--q",
            "3",
            "--n",
            "2",
            "--check",
            "min-distance-exact",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"d_min\": 18"));

    let args = [
        "verify",
        "--q",
        "3",
        "--n",
        "3",
        "--check",
        "lemma-ldel",
        "--samples",
        "100",
        "--seed",
        "7",
    ];
    let o = polarcode(&args, dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"holding\": 100"));
}

#[test]
fn verify_all_at_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = polarcode(
        &[
            "verify",
            "--q",
            "3",
            "--n",
            "3",
            "--samples",
            "40",
            "-o",
            "r.json",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(std::fs::read(dir.path().join("r.json")).unwrap(), o.stdout);
    assert!(
        stdout(&o).contains("BudgetExceeded")
            || stdout(&o).contains("exceed the exhaustive budget")
    );
}

#[test]
fn budget_env_overrides_flag() {
    let dir = tempfile::tempdir().unwrap();
    let run = |env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_polarcode"));
        c.args([
            "verify",
            "--q",
            "3",
            "--n",
            "2",
            "--check",
            "min-distance-exact",
            "--budget",
            "10",
        ]);
        c.current_dir(dir.path()).env_remove("POLAR_BUDGET");
        if let Some(v) = env {
            c.env("POLAR_BUDGET", v);
        }
        c.output().unwrap()
    };
    assert!(stdout(&run(None)).contains("skipped"));
    assert!(stdout(&run(Some("100000"))).contains("\"d_min\": 18"));
    assert_eq!(run(Some("lots")).status.code(), Some(2));
}

#[test]
fn weight_of_canonical_forms() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = polarcode(
        &[
            "canonical",
            "--q",
            "3",
            "--n",
            "3",
            "--r",
            "5",
            "--d",
            "1",
            "--case",
            "1",
            "-o",
            "c1",
        ],
        d,
    );
    assert_eq!(o.status.code(), Some(0));
    let o = polarcode(&["weight", "--q", "3", "--n", "3", "c1/S.txt"], d);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("weight 1944 r 5\n"));

    polarcode(
        &[
            "canonical",
            "--q",
            "3",
            "--n",
            "3",
            "--r",
            "5",
            "--d",
            "0",
            "--case",
            "3",
            "-o",
            "c3",
        ],
        d,
    );
    let o = polarcode(
        &[
            "weight", "--q", "3", "--n", "3", "c3/S.txt", "--gram", "c3/M.txt",
        ],
        d,
    );
    let w: u64 = stdout(&o)
        .split_whitespace()
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!(w > 1944);
    let o = polarcode(
        &[
            "weight",
            "--q",
            "3",
            "--n",
            "3",
            "--descriptor",
            "c3/descriptor.json",
            "--format",
            "json",
        ],
        d,
    );
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["weight"], w);

    // a symmetric matrix is rejected
    let o = polarcode(&["weight", "--q", "3", "--n", "3", "c3/M.txt"], d);
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(d.join("bad.txt"), "7 7 3\n1 2\n").unwrap();
    assert_eq!(
        polarcode(&["weight", "--q", "3", "--n", "3", "bad.txt"], d)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        polarcode(&["weight", "--q", "3", "--n", "3", "nope.txt"], d)
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn inadmissible_canonical_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = polarcode(
        &[
            "canonical",
            "--q",
            "3",
            "--n",
            "3",
            "--r",
            "5",
            "--d",
            "2",
            "--case",
            "4",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    let o = polarcode(
        &[
            "canonical",
            "--q",
            "3",
            "--n",
            "3",
            "--r",
            "5",
            "--d",
            "1",
            "--case",
            "7",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn search_examples() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = polarcode(
        &[
            "search",
            "--q",
            "3",
            "--n",
            "3",
            "--samples",
            "2000",
            "--seed",
            "1",
            "--format",
            "text",
        ],
        d,
    );
    assert_eq!(o.status.code(), Some(0));
    let words: Vec<String> = stdout(&o).split_whitespace().map(String::from).collect();
    assert_eq!(&words[..2], ["upper_bound", "1944"]);
    assert!(words[3].parse::<u64>().unwrap() >= 1944);
    let o = polarcode(
        &[
            "search",
            "--q",
            "3",
            "--n",
            "2",
            "--samples",
            "1000",
            "--seed",
            "1",
            "--exact",
        ],
        d,
    );
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["upper_bound"], 18);
    assert_eq!(v["exact_d_min"], 18);
    let o = polarcode(
        &[
            "search",
            "--q",
            "5",
            "--n",
            "2",
            "--samples",
            "1000",
            "--seed",
            "1",
        ],
        d,
    );
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["upper_bound"], 100);
    assert_eq!(v["status"], "ok");
    assert!(!d.join("witness.txt").exists());
}

#[test]
fn lines_lists_every_line() {
    let dir = tempfile::tempdir().unwrap();
    let o = polarcode(&["lines", "--q", "3", "--n", "3"], dir.path());
    let text = stdout(&o);
    assert!(text.starts_with("3640 3 3\n"));
    assert_eq!(text.lines().count(), 3641);
    let o = polarcode(
        &["lines", "--q", "3", "--n", "2", "--format", "json"],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 40);
}
