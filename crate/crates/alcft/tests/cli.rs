use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn alcft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alcft")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_model_reports_weights_and_faithfulness() {
    let kb = fixture("penguin.fkb");
    let o = alcft(&["check-model", path(&kb), path(&fixture("penguin-faithful.fint"))]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("W_Bird     reddy=120  opus=100"), "{out}");
    assert!(out.contains("W_Penguin  reddy=30  opus=120"), "{out}");
    assert!(out.contains("fm-model: yes"));

    let o = alcft(&["check-model", path(&kb), path(&fixture("penguin-unfaithful.fint"))]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("faithfulness: violated"));
    assert!(out.contains("Penguin: reddy <_Penguin opus (9/10 > 4/5)"), "{out}");
}

#[test]
fn check_model_records() {
    let o = alcft(&[
        "--format",
        "records",
        "check-model",
        path(&fixture("penguin.fkb")),
        path(&fixture("penguin-unfaithful.fint")),
    ]);
    assert_eq!(code(&o), 1);
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines[0]["record"], "header");
    assert_eq!(lines[0]["version"], 1);
    let penguin = lines.iter().find(|r| r["record"] == "weights" && r["concept"] == "Penguin").unwrap();
    assert_eq!(penguin["elements"][0]["weight"], "30");
    assert_eq!(penguin["elements"][1]["weight"], "120");
    let v = lines.iter().find(|r| r["kind"] == "preference-without-weight").unwrap();
    assert_eq!(
        (v["concept"].as_str(), v["x"].as_str(), v["y"].as_str()),
        (Some("Penguin"), Some("reddy"), Some("opus"))
    );
    let verdict = lines.last().unwrap();
    assert_eq!(verdict["fm_model"], false);
    assert_eq!(verdict["strict"], true);
}

#[test]
fn malformed_input_exits_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.fkb");
    fs::write(&bad, "logic godel\nconcepts A\ntbox: A <= B >= 1\n").unwrap();
    let o = alcft(&["check-model", path(&bad), path(&fixture("penguin-faithful.fint"))]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 3, column 12: undeclared concept `B`"), "{err}");

    assert_eq!(code(&alcft(&["parse", path(&bad)])), 2);
    assert_eq!(code(&alcft(&["entail"])), 2);
    assert_eq!(code(&alcft(&["klm-test", "--postulate", "FOO", "--logic", "godel"])), 2);
    assert_eq!(code(&alcft(&["check-model", "/nonexistent.fkb", "/nonexistent.fint"])), 2);
    let o = alcft(&["entail", path(&fixture("penguin.fkb")), "T(T(Bird)) <= Fly >= 1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn entail_countermodel_rechecks_as_fm_model() {
    let dir = tempfile::tempdir().unwrap();
    let cm = dir.path().join("cm.fint");
    let kb = fixture("penguin.fkb");
    let o = alcft(&[
        "entail",
        path(&kb),
        "T(Bird) <= Fly >= 1",
        "--mode",
        "fm",
        "--max-domain",
        "2",
        "--denominator",
        "2",
        "--countermodel-out",
        path(&cm),
    ]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    assert!(stdout(&o).contains("verdict: refuted"));
    // The emitted countermodel is an fm-model of the KB.
    let o = alcft(&["check-model", path(&kb), path(&cm)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn entail_goal_in_tbox_has_no_countermodel() {
    let o = alcft(&[
        "entail",
        path(&fixture("penguin.fkb")),
        "(and Yellow Red) <= Bot >= 1",
        "--mode",
        "plain",
        "--max-domain",
        "1",
        "--denominator",
        "2",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("examined 19683 of 19683 interpretations"));
}

#[test]
fn entail_truncation_has_its_own_exit_code() {
    let o = alcft(&["entail", path(&fixture("penguin.fkb")), "(and Yellow Red) <= Bot >= 1", "--budget", "500"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("warning: the budget of 500 stopped the search early"));
}

#[test]
fn record_output_is_reproducible_across_runs_and_jobs() {
    let kb = fixture("penguin.fkb");
    let run = |jobs: &str| {
        let o = alcft(&[
            "--format",
            "records",
            "entail",
            path(&kb),
            "T(Penguin) <= (not Fly) >= 1/2",
            "--max-domain",
            "2",
            "--denominator",
            "2",
            "--jobs",
            jobs,
        ]);
        (code(&o), o.stdout)
    };
    let first = run("1");
    assert_eq!(first, run("1"));
    assert_eq!(first, run("4"));

    let klm = || {
        alcft(&[
            "--format",
            "records",
            "klm-test",
            "--postulate",
            "OR0",
            "--logic",
            "godel",
            "--trials",
            "500",
            "--seed",
            "9",
        ])
        .stdout
    };
    assert_eq!(klm(), klm());
}

#[test]
fn klm_test_verdicts() {
    let o = alcft(&["klm-test", "--postulate", "REFL1", "--logic", "godel", "--mode", "find-counterexample"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("witness:"));

    let o = alcft(&["klm-test", "--postulate", "REFL0", "--logic", "zadeh", "--mode", "verify"]);
    assert_eq!(code(&o), 0);

    let o = alcft(&["klm-test", "--postulate", "AND1", "--logic", "zadeh", "--trials", "10000"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("violations 0"), "{}", stdout(&o));

    let o = alcft(&["klm-test", "--postulate", "CM*", "--logic", "godel", "--trials", "2000"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn mlp_writes_three_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let o = alcft(&[
        "mlp",
        "--net",
        path(&fixture("net-2-3-1.fnet")),
        "--stimuli",
        path(&fixture("net-2-3-1.fstim")),
        "--out-dir",
        path(dir.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("faithful: yes"));
    let kb = dir.path().join("net-2-3-1.fkb");
    let interp = dir.path().join("net-2-3-1.fint");
    assert!(dir.path().join("net-2-3-1.report").exists());
    // The exported pair is accepted by check-model.
    let o = alcft(&["check-model", path(&kb), path(&interp)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let kb_text = fs::read_to_string(&kb).unwrap();
    assert_eq!(kb_text.matches("wtbox").count(), 11);
    assert!(kb_text.contains("distinguished H1 H2 H3 O1\n"));
}

#[test]
fn mlp_rejects_bad_networks_and_stimuli() {
    let dir = tempfile::tempdir().unwrap();
    let cyclic = dir.path().join("cyclic.fnet");
    fs::write(&cyclic, "layer input I\nlayer hidden step A B\nsynapse I A 1\nsynapse A B 1\nsynapse B A 1\n").unwrap();
    let empty = dir.path().join("empty.fstim");
    fs::write(&empty, "# nothing\n").unwrap();
    let stim = fixture("net-2-3-1.fstim");
    let o = alcft(&["mlp", "--net", path(&cyclic), "--stimuli", path(&stim)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8(o.stderr).unwrap().contains("cycle"));
    let o = alcft(&["mlp", "--net", path(&fixture("net-2-3-1.fnet")), "--stimuli", path(&empty)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8(o.stderr).unwrap().contains("empty"));
}

#[test]
fn parse_prints_canonical_text() {
    let o = alcft(&["parse", path(&fixture("penguin.fkb")), "--canonical"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("ok: kb (7 concepts"));
    assert!(out.contains("wtbox Penguin: T(Penguin) <= Fly @ -70\n"));
    let o = alcft(&["--help"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("check-model"));
}
