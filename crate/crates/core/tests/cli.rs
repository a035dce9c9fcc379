use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("divlab-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divlab")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_examples() {
    let dir = scratch_dir("eval");
    let u4 = write(&dir, "u4.json", r#"{"masses": [0.25, 0.25, 0.25, 0.25]}"#);
    let p = write(&dir, "p.json", r#"{"masses": [0.25, 0.75]}"#);
    let q = write(&dir, "q.json", r#"{"masses": [0.5, 0.5]}"#);

    let o = run(&["eval", "kl", &u4, &u4]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0");

    let o = run(&["eval", "chi2", &p, &q]);
    assert_eq!(stdout(&o).trim(), "0.25");

    let o = run(&["eval", "kl", &p, &q, "--base", "2"]);
    let bits: f64 = stdout(&o).trim().parse().unwrap();
    let want = 0.25 * 0.5f64.log2() + 0.75 * 1.5f64.log2();
    assert!((bits - want).abs() < 1e-11);
}

#[test]
fn invalid_inputs_exit_with_code_2() {
    let dir = scratch_dir("bad");
    let q = write(&dir, "q.json", r#"{"masses": [0.5, 0.5]}"#);
    let short = write(&dir, "short.json", r#"{"masses": [0.5, 0.4]}"#);
    let o = run(&["eval", "kl", &short, &q]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sum"));

    let broken = write(&dir, "broken.json", "{\n  \"masses\": [0.5,\n  0.5,,]\n}");
    let o = run(&["eval", "kl", &broken, &q]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"), "{}", String::from_utf8_lossy(&o.stderr));

    let o = run(&["eval", "nonsense", &q, &q]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["figure", "9"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["figure", "5", "--grid", "1:0:3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let o = run(&["table1", "--out", "/nonexistent-dir/divlab/table.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn output_file_matches_stdout() {
    let dir = scratch_dir("out");
    let path = dir.join("fig5.csv");
    let o = run(&["figure", "5", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), run(&["figure", "5"]).stdout);
}

#[test]
fn figure_grid_override() {
    let o = run(&["figure", "5", "--grid", "0.01:0.1:4"]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "d,rho_exact_minus_1,rho_simple_minus_1");
    assert_eq!(rows.len(), 5);
    assert!(rows[1].starts_with("0.01,"));
}

#[test]
fn table1_from_a_joint_file() {
    let dir = scratch_dir("joint");
    let joint = write(&dir, "j.json", r#"{"matrix": [[0.3, 0.1], [0.1, 0.2], [0.1, 0.2]]}"#);
    let o = run(&["table1", "--joint", &joint]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 3);
}

#[test]
fn tunstall_tree_listing() {
    let dir = scratch_dir("tree");
    let src = write(&dir, "s.json", r#"{"masses": [0.3, 0.7]}"#);
    let o = run(&["tunstall", &src, "--leaves", "3"]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows, vec!["0,0.3,1", "10,0.21,2", "11,0.48999999999999994,2"]);
}
