use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_loopwhile"))
}

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name).display().to_string()
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn call(args: &[&str], stdin: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn documented_examples() {
    let o = call(&["run", &corpus("add.loop"), "--in", "2,3"], "");
    assert_eq!(stdout(&o), "x0 = 5 (steps=5)\n");
    assert_eq!(stdout(&call(&["decode", "0"], "")), "x0 := x0 + 0\n");
    let o = call(&["run", &corpus("diverge.while"), "--in", "1", "--fuel", "100"], "");
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("fuel exhausted"));
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["run"], "").status.code(), Some(1));
    assert_eq!(call(&["run", "/no/such/file.loop"], "").status.code(), Some(1));
    assert_eq!(call(&["run", "-"], "loop x1 do").status.code(), Some(2));
    assert_eq!(call(&["encode", "-"], "skip").status.code(), Some(1));
    assert_eq!(call(&["universal", "0", "--in", "1,2"], "").status.code(), Some(1));
    assert_eq!(call(&["bench", "-", "--format", "csv", "--emit", "goto"], "skip").status.code(), Some(1));
    let spin = stdout(&call(&["encode", "-"], "x1 := x1 + 1; while x1 /= 0 do x1 := x1 + 1 end"));
    let o = call(&["universal", spin.trim(), "--fuel", "10000"], "");
    assert_eq!(o.status.code(), Some(3));
}

/// Agreement of two program files on every input in `[0, 5]^arity`.
fn agree_on_grid(a: &str, b: &str, arity: usize) {
    let mut inputs: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..arity {
        inputs = inputs.into_iter().flat_map(|v| (0..=5).map(move |k| [v.clone(), vec![k]].concat())).collect();
    }
    for inp in inputs {
        let list: Vec<String> = inp.iter().map(|v| v.to_string()).collect();
        let list = list.join(",");
        let ra = call(&["run", a, "--in", &list, "--format", "json"], "");
        let rb = call(&["run", b, "--in", &list, "--format", "json"], "");
        let va: serde_json::Value = serde_json::from_slice(&ra.stdout).unwrap();
        let vb: serde_json::Value = serde_json::from_slice(&rb.stdout).unwrap();
        assert_eq!(va["output"], vb["output"], "{a} vs {b} on {list}");
        assert_eq!(ra.status.code(), rb.status.code());
    }
}

#[test]
fn desugar_for2while_normalize_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    for (name, arity) in [("max.loop", 2), ("gcd.while", 2), ("is_zero.loop", 1)] {
        let d = stdout(&call(&["desugar", &corpus(name)], ""));
        let w = stdout(&call(&["for2while", "-"], &d));
        let n = stdout(&call(&["normalize", "-"], &w));
        let path = dir.path().join(format!("{name}.normal.while"));
        std::fs::write(&path, &n).unwrap();
        agree_on_grid(&corpus(name), path.to_str().unwrap(), arity);
    }
}

#[test]
fn normal_form_of_add_matches_golden_file() {
    let d = stdout(&call(&["desugar", &corpus("add.loop")], ""));
    let w = stdout(&call(&["for2while", "-"], &d));
    let n = stdout(&call(&["normalize", "-"], &w));
    let g = stdout(&call(&["normalize", "-", "--emit", "goto"], &w));
    for (file, got) in [("add.normal.while", &n), ("add.goto", &g)] {
        let path = golden(file);
        if std::env::var_os("UPDATE_GOLDEN").is_some() {
            std::fs::write(&path, got).unwrap();
        }
        let want = std::fs::read_to_string(&path).unwrap();
        assert_eq!(got, &want, "{file} changed; rerun with UPDATE_GOLDEN=1 if intended");
    }
}

#[test]
fn json_outputs_are_valid_and_stable() {
    let args = ["bench", &corpus("mult.loop"), "--sizes", "0..4", "--format", "json"];
    let a = stdout(&call(&args, ""));
    assert_eq!(a, stdout(&call(&args, "")));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["cost_model"], "unit-cost/1");
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
    assert_eq!(v["rows"][3]["output"], 9);

    let t = stdout(&call(&["trace", "-", "--in", "2", "--format", "json"], "loop x1 do x0 := x0 + 1 end"));
    let v: serde_json::Value = serde_json::from_str(&t).unwrap();
    assert_eq!(v["events"].as_array().unwrap().len(), 3);
    assert_eq!(v["output"], 2);

    let code = stdout(&call(&["encode", "-"], "loop x1 do x0 := x0 + 2 end"));
    let u = stdout(&call(&["universal", code.trim(), "--in", "3", "--format", "json"], ""));
    let v: serde_json::Value = serde_json::from_str(&u).unwrap();
    assert_eq!(v["output"], 6);
    assert_eq!(v["simulated_steps"], 4);
}

#[test]
fn codes_round_trip_through_the_cli() {
    let add = "x0 := x1 + 0; loop x2 do x0 := x0 + 1 end";
    let code = stdout(&call(&["encode", "-"], add));
    let text = stdout(&call(&["decode", code.trim()], ""));
    let again = stdout(&call(&["encode", "-"], &text));
    assert_eq!(code, again);
    let hex = format!("{:#x}", code.trim().parse::<u128>().unwrap());
    assert_eq!(stdout(&call(&["decode", &hex], "")), text);

    let spec = stdout(&call(&["smn", code.trim(), "2"], ""));
    let p = stdout(&call(&["decode", spec.trim()], ""));
    let o = stdout(&call(&["run", "-", "--in", "3"], &p));
    assert!(o.starts_with("x0 = 5 "), "{o}");
}

#[test]
fn compile_rec_and_schema_files() {
    let p = stdout(&call(&["compile-rec", &corpus("mult.rec")], ""));
    assert!(p.contains("loop"));
    let o = stdout(&call(&["run", &corpus("mult.rec"), "--in", "4,5"], ""));
    assert!(o.starts_with("x0 = 20 "), "{o}");
}
