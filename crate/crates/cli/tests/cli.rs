use std::fs;
use std::process::{Command, Output};

fn biorder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biorder"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn magnus_biinvariance_ball_three() {
    let o = biorder(&["biinv", "--order", "magnus", "--radius", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 violations / 53 words"));
}

#[test]
fn compare_identity_with_generator() {
    let o = biorder(&["compare", "--order", "magnus", "e", "a"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().last(), Some("less"));
}

#[test]
fn malformed_input_exits_two() {
    assert_eq!(biorder(&["compare", "e", "a^x"]).status.code(), Some(2));
    assert_eq!(biorder(&["type", "--alpha", "1/2"]).status.code(), Some(2));
    assert_eq!(
        biorder(&["noniso", "--chain", "a;b^-1"]).status.code(),
        Some(2)
    );
    assert_eq!(biorder(&["merge", "--g", "Q@0"]).status.code(), Some(2));
}

#[test]
fn mathematical_failure_exits_one() {
    let o = biorder(&["saturate", "b", "b^-1 a", "a^-1", "--expect", "consistent"]);
    assert_eq!(o.status.code(), Some(1));
    // no push word of radius 0 exists
    let o = biorder(&["noniso", "--search", "0", "--audit", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL push"));
}

#[test]
fn replay_is_byte_identical_and_out_matches() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.txt");
    let args = [
        "noniso", "--chain", "a;b;ab", "--search", "4", "--audit", "1", "--seed", "7",
    ];
    let first = biorder(&args);
    let mut with_out: Vec<&str> = args.to_vec();
    with_out.extend(["--out", out.to_str().unwrap()]);
    let second = biorder(&with_out);
    assert_eq!(first.status.code(), Some(0));
    let body = |s: &str| s.lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&stdout(&first)), body(&stdout(&second)));
    assert_eq!(fs::read_to_string(&out).unwrap(), stdout(&second));
    assert!(stdout(&first).starts_with("# biorder noniso --chain 'a;b;ab'"));
    assert_eq!(stdout(&biorder(&args)), stdout(&first));
}

#[test]
fn merged_realization_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("merged.txt");
    let o = biorder(&["merge", "--radius", "2", "--save", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = biorder(&[
        "biinv",
        "--order",
        "realized",
        "--realization",
        path.to_str().unwrap(),
        "--radius",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 violations / 17 words"));
}

#[test]
fn separation_passes() {
    let o = biorder(&["separate", "--aut-len", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS (iii)"));
}

#[test]
fn plot_writes_svg_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("g0");
    let o = biorder(&[
        "plot",
        "--generator",
        "0",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(prefix.with_extension("csv")).unwrap();
    assert_eq!(csv, "x,y\n-1/1,-1/2\n0/1,0/1\n");
    let svg = fs::read_to_string(prefix.with_extension("svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("polyline"));
    let o = biorder(&["plot", "--tau=-1/10,-1,-2,-1/2,-3/4"]);
    assert!(stdout(&o).contains("-1/1,-1/2\n-1/10,-1/10"));
}
