use std::process::{Command, Output};

fn loopconf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopconf")).args(args).output().expect("spawn loopconf")
}

#[test]
fn reports_are_byte_identical() {
    for args in [
        &["central", "--b", "5/7", "--window", "2", "--interior", "1", "--ldeg", "3"][..],
        &["ext", "--dir", "cm", "--b", "1", "--delta", "1", "--alpha", "0", "--beta", "0", "--window", "2", "--interior", "1", "--pdeg", "2", "--ldeg", "2"][..],
        &["rank1", "--b", "0", "--delta", "0", "--alpha", "1/3", "--d", "2"][..],
    ] {
        let (x, y) = (loopconf(args), loopconf(args));
        assert!(!x.stdout.is_empty());
        assert_eq!(x.stdout, y.stdout, "{args:?}");
    }
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let args = ["verify-algebra", "--b", "1/2", "--window", "2"];
    let stdout = loopconf(&args).stdout;
    let o = loopconf(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| loopconf(args).status.code();
    assert_eq!(code(&["verify-algebra", "--b", "0", "--window", "2"]), Some(0));
    assert_eq!(code(&["verify-distribution", "--a", "2", "--b", "1", "--x", "1", "--checks", "closure"]), Some(1));
    assert_eq!(
        code(&["ext", "--dir", "mc", "--b", "3", "--delta", "1", "--alpha", "0", "--beta", "0", "--window", "2", "--interior", "1", "--ldeg", "3"]),
        Some(1)
    );
    assert_eq!(code(&["verify-algebra", "--b", "1/0"]), Some(2));
    assert_eq!(code(&["verify-algebra", "--b", "x"]), Some(2));
    assert_eq!(code(&["central", "--window", "1", "--interior", "2"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
    assert_eq!(code(&["central", "--input", "/nonexistent/family.json"]), Some(2));
}

#[test]
fn report_schema() {
    let o = loopconf(&["ext", "--dir", "mc", "--b", "0", "--delta", "1", "--alpha", "0", "--beta", "0", "--window", "4", "--interior", "2", "--ldeg", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "ext");
    assert_eq!(v["status"], "pass");
    assert_eq!(v["config"]["delta"], "1");
    assert_eq!(v["result"]["dim_ext"], 2);
}
