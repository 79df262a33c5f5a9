use std::io::Write;
use std::process::{Command, Output, Stdio};

const C4: &str = "p edge 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n";
const P3: &str = "c U 2\np edge 3 2\ne 1 2\ne 2 3\n";

fn cds(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cds"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn sorted_lines(s: &str) -> Vec<String> {
    let mut v: Vec<String> = s.lines().map(str::to_string).collect();
    v.sort();
    v
}

#[test]
fn enumerate_cycle_with_both_engines() {
    let branching = cds(&["enumerate", "-"], C4);
    assert!(branching.status.success());
    assert_eq!(
        sorted_lines(&stdout(&branching)),
        ["1 2", "1 4", "2 3", "3 4"]
    );
    assert!(stderr(&branching).contains("count: 4"));
    let brute = cds(&["enumerate", "--engine", "bruteforce", "-"], C4);
    assert_eq!(stdout(&brute), "1 2\n1 4\n2 3\n3 4\n");
    let sorted = cds(&["enumerate", "--sort", "-"], C4);
    assert_eq!(stdout(&sorted), stdout(&brute));
    let threaded = cds(&["enumerate", "--threads", "2", "-"], C4);
    assert_eq!(stdout(&threaded), stdout(&brute));
}

#[test]
fn count_prints_nothing_on_stdout() {
    let out = cds(&["count", "--json", "-"], C4);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let record: serde_json::Value = serde_json::from_str(stderr(&out).trim()).unwrap();
    assert_eq!(record["count"], 4);
    assert_eq!(record["schema"], 1);
    assert!(record["stats"]["nodes"].as_u64().unwrap() > 0);
}

#[test]
fn exit_codes() {
    assert_eq!(cds(&["count", "-"], "p edge 2 0\n").status.code(), Some(3));
    assert_eq!(
        cds(&["count", "-"], "p edge 2 1\ne 1 5\n").status.code(),
        Some(2)
    );
    assert_eq!(cds(&["count", "-"], "garbage\n").status.code(), Some(2));
    assert_eq!(cds(&["count", "/no/such/file"], "").status.code(), Some(2));
    assert_eq!(cds(&["frobnicate"], "").status.code(), Some(2));
    let big = stdout(&cds(&["generate", "random", "--n", "30", "--d", "2"], ""));
    assert_eq!(
        cds(&["count", "--engine", "bruteforce", "-"], &big)
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        cds(&["count", "--budget", "3", "-"], &big).status.code(),
        Some(4)
    );
}

#[test]
fn extension_answers() {
    let yes = cds(&["extend", "-"], P3);
    assert!(yes.status.success());
    assert_eq!(stdout(&yes), "2\n");
    assert!(stderr(&yes).contains("answer: yes"));
    let no = cds(&["extend", "-u", "1,3", "-"], C4);
    assert!(no.status.success());
    assert!(no.stdout.is_empty());
    assert!(stderr(&no).contains("answer: no"));
    let empty = cds(&["extend", "--json", "-"], C4);
    let record: serde_json::Value = serde_json::from_str(stderr(&empty).trim()).unwrap();
    assert_eq!(record["answer"], "yes");
    assert_eq!(cds(&["extend", "-u", "9", "-"], C4).status.code(), Some(2));
}

#[test]
fn extension_budget_gives_unknown() {
    let gadget = stdout(&cds(
        &["generate", "sat", "-"],
        "p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n",
    ));
    let out = cds(&["extend", "--budget", "2", "-"], &gadget);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("unknown"));
}

#[test]
fn generated_graphs() {
    let gtk = stdout(&cds(&["generate", "gtk", "--t", "4", "--k", "2"], ""));
    assert!(gtk.starts_with("p edge 19 "));
    let sat = stdout(&cds(&["generate", "sat", "-"], "p cnf 3 1\n1 2 3 0\n"));
    assert!(sat.starts_with("c U 2 7 12\np edge 19 26\n"));
    let a = cds(
        &["generate", "random", "--n", "30", "--d", "2", "--seed", "7"],
        "",
    );
    let b = cds(
        &["generate", "random", "--n", "30", "--d", "2", "--seed", "7"],
        "",
    );
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let split = stdout(&cds(
        &["generate", "hssplit", "-u", "0", "-"],
        "h 2 1\n0 1\n",
    ));
    assert!(split.starts_with("c U 1\np edge 3 3\n"));
    assert_eq!(
        cds(&["generate", "gtk", "--t", "0", "--k", "2"], "")
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn generated_counts_match() {
    let g = stdout(&cds(&["generate", "gtk", "--t", "3", "--k", "2"], ""));
    let out = cds(&["count", "--json", "-"], &g);
    let record: serde_json::Value = serde_json::from_str(stderr(&out).trim()).unwrap();
    assert_eq!(record["count"], 225);
}

#[test]
fn analysis_tables() {
    let two = cds(
        &[
            "analyze", "--mode", "2deg", "--alpha", "0.106", "--delta", "0.106",
        ],
        "",
    );
    assert!(two.status.success());
    let text = stderr(&two);
    assert!(text.contains("all bounds hold: true"));
    let max: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("max: "))
        .and_then(|l| l.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!(max < 1.9767);

    let general = cds(
        &[
            "analyze", "--json", "--mode", "general", "--alpha", "0.110901", "--beta", "0.984405",
            "--delta", "0.143516",
        ],
        "",
    );
    let record: serde_json::Value = serde_json::from_str(stderr(&general).trim()).unwrap();
    assert!(record["summary"]["max"].as_f64().unwrap() < 1.9896);
    assert_eq!(record["summary"]["all_pass"], true);

    let opt = cds(
        &["analyze", "--json", "--mode", "general", "--optimize"],
        "",
    );
    let record: serde_json::Value = serde_json::from_str(stderr(&opt).trim()).unwrap();
    assert!(record["optimum"]["value"].as_f64().unwrap() <= 1.9897);

    assert_eq!(
        cds(&["analyze", "--alpha", "1.5"], "").status.code(),
        Some(2)
    );
    assert_eq!(
        cds(&["analyze", "--mode", "2deg", "--beta", "0.5"], "")
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_passes() {
    let out = cds(&["verify"], "");
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stderr(&out).matches("PASS").count(), 7);
}
