use std::path::PathBuf;
use std::process::{Command, Output};

fn rfk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rfk")).args(args).output().expect("spawn rfk")
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn stdout_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn selftest_is_byte_identical() {
    let a = rfk(&["selftest", "--seed", "7"]);
    let b = rfk(&["selftest", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["report"].as_array().unwrap().len(), 10);
}

#[test]
fn malformed_toml_exits_2_with_location() {
    let dir = std::env::temp_dir().join(format!("rfk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.toml");
    std::fs::write(&bad, "vertices = [\"1\"\narrows = 3\n").unwrap();
    let o = rfk(&["ginzburg", "--quiver", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("ginzburg"));

    let o = rfk(&["reeb", "--profile", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn popsicle_k3_has_two_strata() {
    let o = rfk(&["popsicle", "--k", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["report"]["strata"].as_array().unwrap().len(), 2);
    assert_eq!(v["report"]["dimension"], 1);
}

#[test]
fn ginzburg_fixtures_pass() {
    for (f, w) in [("a2.toml", ["-6", "0"]), ("a3.toml", ["-6", "0"]), ("star4.toml", ["-8", "0"])] {
        let q = fixture(f);
        let o = rfk(&["ginzburg", "--quiver", &q, "--window", w[0], w[1], "--format", "csv"]);
        assert_eq!(o.status.code(), Some(0), "{f}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("ginzburg: PASS"));
        let csv = String::from_utf8_lossy(&o.stdout);
        assert!(csv.starts_with("v,w,degree,chain_dim,cohomology_dim"));
    }
}

#[test]
fn reeb_windows_and_zero_maslov() {
    let o = rfk(&["reeb", "--windows", "0", "1", "2", "-3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["report"]["degree_windows"]["iterates"], serde_json::json!([4]));

    let o = rfk(&["reeb", "--windows", "0", "1", "0", "-3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reeb_good_pair_from_fixtures() {
    let (mu, nu) = (fixture("profile_mu.toml"), fixture("profile_nu.toml"));
    let o = rfk(&["reeb", "--profile", &mu, "--pair", &nu, "--spec", "1,3/2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["report"]["good_pair"]["good"], true);
    assert_eq!(v["report"]["good_pair"]["window_agrees"], true);
}

#[test]
fn pairing_scalar_and_failure_exit() {
    let o = rfk(&["pairing", "--mode", "scalar", "--scale", "3", "--field", "fp:5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["report"]["c"], "3");

    let o = rfk(&["pairing", "--mode", "scalar", "--scale", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL cy_pairing"));
}

#[test]
fn limits_and_rabinowitz_write_to_out_dir() {
    let dir = std::env::temp_dir().join(format!("rfk-out-{}", std::process::id()));
    let d = dir.to_str().unwrap();
    for cmd in ["limits", "rabinowitz"] {
        let o = rfk(&[cmd, "--levels", "2", "--format", "csv", "--out", d]);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty());
        assert!(dir.join(format!("{cmd}.csv")).exists());
    }
}

#[test]
fn bad_field_is_input_error() {
    let o = rfk(&["popsicle", "--k", "2", "--field", "fp:4"]);
    assert_eq!(o.status.code(), Some(2));
}
