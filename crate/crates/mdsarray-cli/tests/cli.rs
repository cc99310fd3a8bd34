//! End-to-end tests of the `mdsarray` binary: every subcommand, the pinned
//! exit codes, and the on-disk formats.

use serde_json::Value;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mdsarray"))
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mdsarray-cli-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_spec(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn stdout_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(text.lines().last().unwrap_or("")).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {text}");
    })
}

const C1_SPEC: &str = r#"{"family":"C1","m":3,"w":2,"r":3,"s":2}"#;

#[test]
fn build_reports_instance_parameters() {
    let dir = tmpdir("build");
    let spec = write_spec(&dir, "c1.json", C1_SPEC);
    let out = bin().args(["build", "--spec"]).arg(&spec).output().unwrap();
    assert!(out.status.success(), "{out:?}");
    let v = stdout_json(&out);
    assert_eq!(v["family"], "C1");
    assert_eq!(v["n"], 12);
    assert_eq!(v["k"], 9);
    assert_eq!(v["q"], 29);
    assert_eq!(v["c"], 2);
    assert_eq!(v["N"], 8);
    assert_eq!(v["d"], 10);
    assert_eq!(v["dc"], 1);
    assert_eq!(v["ratio_num"], 11);
    assert_eq!(v["ratio_den"], 10);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn build_output_is_frozen() {
    // schema-stable, byte-deterministic machine output
    let dir = tmpdir("golden");
    let spec = write_spec(&dir, "c1.json", C1_SPEC);
    let out = bin().args(["build", "--spec"]).arg(&spec).output().unwrap();
    let expected = concat!(
        r#"{"family":"C1","nbar":6,"m":3,"w":2,"r":3,"s":2,"q":29,"c":2,"#,
        r#""n":12,"k":9,"d":10,"dc":1,"N":8,"gamma":44,"gamma_optimal":40,"#,
        r#""ratio_num":11,"ratio_den":10}"#,
        "\n"
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout), expected);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn build_with_s1_echoes_base_parameters() {
    let dir = tmpdir("build-s1");
    let spec = write_spec(
        &dir,
        "c1s1.json",
        r#"{"family":"C1","m":3,"w":2,"r":3,"s":1}"#,
    );
    let out = bin().args(["build", "--spec"]).arg(&spec).output().unwrap();
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["n"], 6);
    assert_eq!(v["dc"], 0);
    assert_eq!(v["ratio_num"], 1);
    assert_eq!(v["ratio_den"], 1);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_passes_on_c1() {
    let dir = tmpdir("verify");
    let spec = write_spec(&dir, "c1.json", C1_SPEC);
    let out = bin()
        .args(["verify", "--mds", "--repair", "--spec"])
        .arg(&spec)
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let v = stdout_json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["mds"]["patterns"], 220);
    assert_eq!(v["mds"]["optimal_update"], false);
    assert_eq!(v["repair"]["cases"], 120);
    assert_eq!(v["repair"]["passes"], 120);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_conditions_on_c2() {
    let dir = tmpdir("verify-c2");
    let spec = write_spec(
        &dir,
        "c2.json",
        r#"{"family":"C2","nbar":5,"w":2,"r":3,"s":2}"#,
    );
    let out = bin()
        .args(["verify", "--conditions", "--spec"])
        .arg(&spec)
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let v = stdout_json(&out);
    assert_eq!(v["q"], 11);
    assert_eq!(v["conditions"]["clauses"][0]["pass"], true);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn broken_field_override_exits_two_with_witness() {
    // q = 13 satisfies the base bound (12) but not the lifted one (24):
    // c^12 = 1 collapses the replica coefficients and clause ii fails.
    let dir = tmpdir("verify-bad");
    let spec = write_spec(&dir, "c1.json", C1_SPEC);
    let out = bin()
        .args(["verify", "--spec"])
        .arg(&spec)
        .args(["--q", "13"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("clause"), "stderr: {err}");
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_one() {
    let out = bin().args(["verify"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let dir = tmpdir("usage");
    let spec = write_spec(&dir, "bad.json", r#"{"family":"C9"}"#);
    let out = bin().args(["build", "--spec"]).arg(&spec).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn missing_file_exits_three() {
    let out = bin()
        .args(["build", "--spec", "/nonexistent/spec.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn table_reference_preset_rows() {
    let out = bin()
        .args(["table", "--preset", "reference", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let rows: Value = stdout_json(&out);
    let first = &rows[0];
    assert_eq!(first["n"], 10);
    assert_eq!(first["N"], "2^3");
    assert_eq!(first["ratio"], "1+0.1250");
    assert_eq!(first["ratio_num"], 9);
    assert_eq!(first["ratio_den"], 8);
    assert_eq!(first["dc_fraction"], "11.1%");
    let r4 = &rows[3];
    assert_eq!(r4["n"], 12);
    assert_eq!(r4["ratio_num"], 10);
    assert_eq!(r4["ratio_den"], 9);
    // the s = 10, nbar = 10 row: 1+0.0919 at n = 100
    assert_eq!(rows[1]["n"], 100);
    assert_eq!(rows[1]["ratio"], "1+0.0918");
    let text = bin()
        .args(["table", "--preset", "reference"])
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&text.stdout).contains("1+0.1250"));
}

#[test]
fn table_s1_ratio_is_one() {
    let out = bin()
        .args([
            "table", "--family", "C2", "--nbar", "5", "--w", "2", "--r", "3", "--s", "1", "--json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let rows = stdout_json(&out);
    assert_eq!(rows[0]["ratio_num"], 1);
    assert_eq!(rows[0]["ratio_den"], 1);
}

#[test]
fn encode_then_decode_roundtrip_with_failures() {
    let dir = tmpdir("codec");
    let spec = write_spec(&dir, "c1.json", C1_SPEC);
    let input = dir.join("payload.bin");
    let payload: Vec<u8> = (0..10_000u32).map(|i| (i * 7 % 251) as u8).collect();
    fs::write(&input, &payload).unwrap();
    let cluster_dir = dir.join("cluster");

    let out = bin()
        .args(["encode", "--spec"])
        .arg(&spec)
        .args(["--input"])
        .arg(&input)
        .args(["--out"])
        .arg(&cluster_dir)
        .args(["--json"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let v = stdout_json(&out);
    assert_eq!(v["bytes"], 10_000);
    assert!(cluster_dir.join("meta.json").exists());
    assert!(cluster_dir.join("node_0.bin").exists());

    // lose r = 3 nodes and still decode
    for node in [1, 6, 11] {
        fs::remove_file(cluster_dir.join(format!("node_{node}.bin"))).unwrap();
    }
    let restored = dir.join("restored.bin");
    let out = bin()
        .args(["decode", "--dir"])
        .arg(&cluster_dir)
        .args(["--out"])
        .arg(&restored)
        .args(["--json"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let v = stdout_json(&out);
    assert_eq!(v["down_nodes"], serde_json::json!([1, 6, 11]));
    assert_eq!(fs::read(&restored).unwrap(), payload);

    // a fourth missing node is beyond the correction radius
    fs::remove_file(cluster_dir.join("node_2.bin")).unwrap();
    let out = bin()
        .args(["decode", "--dir"])
        .arg(&cluster_dir)
        .args(["--out"])
        .arg(&restored)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn sim_runs_full_cycle() {
    let dir = tmpdir("sim");
    let spec = write_spec(&dir, "c1.json", C1_SPEC);
    let script = write_spec(
        &dir,
        "script.txt",
        "ingest 720 1\nfail 3\nrepair 3 avoid=0\nread 0\n",
    );
    let saved = dir.join("saved-cluster");
    let out = bin()
        .args(["sim", "--spec"])
        .arg(&spec)
        .args(["--script"])
        .arg(&script)
        .args(["--dir"])
        .arg(&saved)
        .args(["--json"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let v = stdout_json(&out);
    // 720 bytes over 36-byte stripes = 20 stripes, 44 symbols each repair
    assert_eq!(v["ledger_total_symbols"], 20 * 44);
    assert_eq!(v["steps"][3]["intact"], true);

    // the final cluster state was persisted and decodes back
    let restored = dir.join("restored.bin");
    let out = bin()
        .args(["decode", "--dir"])
        .arg(&saved)
        .args(["--out"])
        .arg(&restored)
        .args(["--json"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    assert_eq!(stdout_json(&out)["bytes"], 720);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn sim_repair_without_failure_is_noop() {
    let dir = tmpdir("sim-noop");
    let spec = write_spec(&dir, "c1.json", C1_SPEC);
    let script = write_spec(&dir, "script.txt", "ingest 100\nrepair 3\n");
    let out = bin()
        .args(["sim", "--spec"])
        .arg(&spec)
        .args(["--script"])
        .arg(&script)
        .args(["--json"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let v = stdout_json(&out);
    assert_eq!(v["steps"][1]["repaired"], false);
    assert_eq!(v["ledger_total_symbols"], 0);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn sim_two_failures_error_out() {
    let dir = tmpdir("sim-two");
    let spec = write_spec(&dir, "c1.json", C1_SPEC);
    let script = write_spec(&dir, "script.txt", "ingest 100\nfail 1\nfail 2\nrepair 1\n");
    let out = bin()
        .args(["sim", "--spec"])
        .arg(&spec)
        .args(["--script"])
        .arg(&script)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn sim_bad_script_exits_one() {
    let dir = tmpdir("sim-bad");
    let spec = write_spec(&dir, "c1.json", C1_SPEC);
    let script = write_spec(&dir, "script.txt", "explode 3\n");
    let out = bin()
        .args(["sim", "--spec"])
        .arg(&spec)
        .args(["--script"])
        .arg(&script)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_report_is_deterministic() {
    let dir = tmpdir("determinism");
    let spec = write_spec(
        &dir,
        "c2.json",
        r#"{"family":"C2","nbar":5,"w":2,"r":3,"s":2,"seed":9}"#,
    );
    let run = || {
        bin()
            .args(["verify", "--mds", "--spec"])
            .arg(&spec)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
    fs::remove_dir_all(&dir).unwrap();
}
