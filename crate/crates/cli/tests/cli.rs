use std::process::{Command, Output};

fn shellgap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shellgap"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gen_prints_gaps() {
    let o = shellgap(&["gen", "tokuda", "--n", "600"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1 4 9 20 46 103 233 525");
    let o = shellgap(&["gen", "pratt-25", "--n", "30", "--json"]);
    assert_eq!(stdout(&o).trim(), "[1,2,4,5,8,10,16,20,25]");
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        vec!["gen", "nonsense", "--n", "10"],
        vec!["gen", "tokuda"],
        vec!["bench", "--n", "100"],
        vec!["bench", "--seq", "tokuda", "--n", "100", "--cost", "bogus"],
        vec!["optimize", "--template", "c", "--n", "100"],
        vec!["optimize", "--template", "a", "--n", "100", "--grid", "z=1"],
        vec!["reproduce", "--table", "huge"],
        vec!["frobnicate"],
    ] {
        let o = shellgap(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
    }
    assert_eq!(shellgap(&["--help"]).status.code(), Some(0));
}

#[test]
fn bench_inline_and_config_agree() {
    let inline = shellgap(&[
        "bench",
        "--seq",
        "tokuda,ciura-128",
        "--n",
        "100",
        "--trials",
        "30",
        "--cost",
        "co,exop",
        "--seed",
        "5",
    ]);
    assert!(inline.status.success());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(
        &path,
        r#"{"sequences":["tokuda","ciura-128"],"sizes":[100],"trials":30,"seed":5,
            "costs":["comparisons","exchange_ops"]}"#,
    )
    .unwrap();
    let from_file = shellgap(&["bench", "--config", path.to_str().unwrap()]);
    assert!(from_file.status.success());
    assert_eq!(stdout(&inline), stdout(&from_file));
    assert!(stdout(&inline).starts_with("sequence,n,cost,mean,sd,trials,seed\n"));
    assert_eq!(stdout(&inline).lines().count(), 5);
}

#[test]
fn bench_rejects_unknown_config_fields() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(&path, r#"{"sequences":["tokuda"],"sizes":[10],"colour":1}"#).unwrap();
    assert_eq!(
        shellgap(&["bench", "--config", path.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn optimize_writes_results_and_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results.csv");
    let ck = dir.path().join("ck.json");
    let args = [
        "optimize",
        "--template",
        "b",
        "--n",
        "100",
        "--grid",
        "a=1:4:4,b=0.5:3:4,c=1:4:3,d=0..1",
        "--trials",
        "50",
        "--seed",
        "9",
        "--top",
        "3",
        "--out",
        out.to_str().unwrap(),
        "--checkpoint",
        ck.to_str().unwrap(),
    ];
    let o = shellgap(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("rank,parameters,gap_prefix,mean,sd,trials\n"));
    let ck_json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&ck).unwrap()).unwrap();
    assert!(ck_json["stats"]["processed"].as_u64().unwrap() > 0);
    // Rerunning against the finished checkpoint reproduces the file.
    let o = shellgap(&args);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), text);
}

#[test]
fn reproduce_strict_exit_codes() {
    let o = shellgap(&[
        "reproduce",
        "--table",
        "inversions",
        "--trials",
        "20",
        "--strict",
        "--tolerance",
        "0.5",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).contains("published_mean"));
    let o = shellgap(&[
        "reproduce",
        "--table",
        "inversions",
        "--trials",
        "20",
        "--strict",
        "--tolerance",
        "0.0001",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_quick_passes() {
    let o = shellgap(&["verify", "--quick"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(),
        3
    );
}
