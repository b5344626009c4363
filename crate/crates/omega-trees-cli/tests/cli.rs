//! End-to-end tests of the binary: documented outputs byte-exact,
//! determinism, piping, and exit codes.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_omega-trees"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn omega-trees")
}

fn stdout_line(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout)
        .unwrap()
        .trim_end()
        .to_string()
}

fn run_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn omega-trees");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

const NO11: &str = r#"{"states":["after0","after1"],"initial":"after0","edges":[{"from":"after0","label":0,"to":"after0"},{"from":"after0","label":1,"to":"after1"},{"from":"after1","label":0,"to":"after0"}]}"#;

#[test]
fn documented_examples() {
    assert_eq!(
        stdout_line(&["seq", "encode", "--seq", "2,1"]),
        r#"{"code":45}"#
    );
    assert_eq!(
        stdout_line(&["kb", "cmp", "--u", "1,2", "--v", "1"]),
        r#"{"leq":true}"#
    );
    assert_eq!(
        stdout_line(&["cb", "measure", "--automaton", NO11, "--depth", "20"]),
        r#"{"upper":[17711,1048576],"positive":false}"#
    );
}

#[test]
fn outputs_are_deterministic() {
    let cases: Vec<Vec<&str>> = vec![
        vec![
            "cb",
            "measure",
            "--automaton",
            NO11,
            "--depth",
            "20",
            "--full",
        ],
        vec!["cb", "kernel", "--automaton", NO11],
        vec!["kb", "sort", r#"{"finite":[[],[0],[1],[0,0]]}"#],
        vec![
            "tree",
            "show",
            r#"{"builtin":"sg_toy","bound":4}"#,
            "--depth",
            "3",
        ],
    ];
    for args in cases {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "nondeterministic output for {args:?}");
    }
}

#[test]
fn product_pipes_into_member() {
    let product = stdout_line(&[
        "tree",
        "product",
        r#"{"finite":[[],[1],[1,2]]}"#,
        r#"{"finite":[[],[3],[4]]}"#,
    ]);
    let member = run_with_stdin(&["tree", "member", "--node", "24,5"], &product);
    assert_eq!(
        String::from_utf8_lossy(&member.stdout).trim_end(),
        r#"{"member":true}"#
    );
    let non_member = run_with_stdin(&["tree", "member", "--node", "24,6"], &product);
    assert_eq!(
        String::from_utf8_lossy(&non_member.stdout).trim_end(),
        r#"{"member":false}"#
    );
}

#[test]
fn build_outputs_feed_tree_verbs() {
    let built = stdout_line(&["build", "elementwise", "--pred", "even", "--bound", "6"]);
    assert_eq!(built, r#"{"builtin":"elementwise_even","bound":6}"#);
    let member = run_with_stdin(&["tree", "member", "--node", "2,4,0"], &built);
    assert_eq!(
        String::from_utf8_lossy(&member.stdout).trim_end(),
        r#"{"member":true}"#
    );

    let sum = stdout_line(&["tree", "sum", &built, r#"{"finite":[[],[1]]}"#]);
    // p(1,1) = 4 tags the right summand's (1).
    let member = run_with_stdin(&["tree", "member", "--node", "4"], &sum);
    assert_eq!(
        String::from_utf8_lossy(&member.stdout).trim_end(),
        r#"{"member":true}"#
    );
}

#[test]
fn exit_codes_distinguish_input_from_contract() {
    let bad_input = run(&["tree", "member", r#"{"finite":[[0]]}"#, "--node", "0"]);
    assert_eq!(bad_input.status.code(), Some(1));
    let err: serde_json::Value =
        serde_json::from_slice(&bad_input.stderr).expect("stderr is a JSON object");
    assert_eq!(err["code"], "input");

    let contract = run(&["cb", "split", "--automaton", NO11]);
    assert_eq!(contract.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&contract.stderr).unwrap();
    assert_eq!(err["code"], "no-positive-measure");

    let unknown_flag = run(&["kb", "cmp", "--u", "1", "--v", "2", "--bogus"]);
    assert_eq!(unknown_flag.status.code(), Some(1));
}

#[test]
fn space_and_adm_verbs() {
    assert_eq!(
        stdout_line(&[
            "space",
            "dist",
            "--tree",
            r#"{"finite":[[],[0],[0,1]]}"#,
            "--x",
            r#"{"node":[0,1]}"#,
            "--y",
            r#"{"node":[0]}"#,
        ]),
        r#"{"exact":[1,2]}"#
    );
    assert_eq!(
        stdout_line(&[
            "space",
            "rho",
            "--tree",
            r#"{"finite":[[],[1],[1,2]]}"#,
            "--x",
            r#"{"node":[1,2]}"#,
            "--depth",
            "5",
        ]),
        r#"{"branchPrefix":[2,3,0,0,0]}"#
    );
    let lin = r#"{"field":[0,1,2],"pairs":[[0,0],[1,1],[2,2],[0,1],[0,2],[1,2]]}"#;
    let wo = r#"{"field":[5,7],"pairs":[[5,5],[7,7],[5,7]]}"#;
    assert_eq!(
        stdout_line(&["adm", "solve", "--lin", lin, "--wo", wo]),
        r#"{"map":[[0,5],[1,7]]}"#
    );
    assert_eq!(
        stdout_line(&["adm", "brute", "--lin", lin, "--wo", wo]),
        r#"{"maps":[[[0,5],[1,7]]]}"#
    );
    assert_eq!(
        stdout_line(&[
            "adm",
            "check",
            "--lin",
            lin,
            "--wo",
            wo,
            "--map",
            "[[0,5],[1,7]]"
        ]),
        r#"{"admissible":true,"strongly":true,"violation":null}"#
    );
}

#[test]
fn dot_outputs_are_graphs() {
    let dot = stdout_line(&["cb", "kernel", "--automaton", NO11, "--dot"]);
    assert!(dot.starts_with("digraph automaton {"));
    assert!(dot.contains("firebrick"));
    let dot = stdout_line(&[
        "tree",
        "show",
        r#"{"finite":[[],[0],[0,1]]}"#,
        "--depth",
        "2",
        "--dot",
    ]);
    assert!(dot.starts_with("digraph tree {"));
    assert!(dot.contains("\"(0)\" -> \"(0,1)\""));
}
