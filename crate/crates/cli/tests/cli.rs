use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("inls-cli-test-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inls-lab")).args(args).output().unwrap()
}

fn write(dir: &Path, text: &str) -> String {
    let path = dir.join("run.cfg");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn constants_pass_and_write_outputs() {
    let dir = scratch("constants");
    let out = dir.join("out");
    let o = lab(&["constants", "--out", out.to_str().unwrap(), "--seed", "5"]);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("PASS ground-state constants"));
    let csv = std::fs::read_to_string(out.join("constants.csv")).unwrap();
    assert!(csv.starts_with("# inls-lab constants v1\n"));
    let json = std::fs::read_to_string(out.join("constants_summary.json")).unwrap();
    assert!(json.contains("\"seed\": 5"));
}

#[test]
fn failed_assertion_exits_with_one() {
    let dir = scratch("coarse");
    let cfg = write(&dir, "[grid]\nkind = mapped\npanels = 1\norder = 2\nscale = 1\n");
    let o = lab(&["constants", "--config", &cfg, "--out", dir.join("out").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn config_errors_exit_with_two_and_name_the_line() {
    let dir = scratch("bad");
    let cfg = write(&dir, "[time]\nt_final = 1\nwarp = 9\n");
    let o = lab(&["single-run", "--config", &cfg, "--out", dir.join("out").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3") && err.contains("warp"), "{err}");

    let o = lab(&["single-run", "--config", dir.join("missing.cfg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = lab(&["single-run", "--resolution-scale", "-1", "--out", dir.join("out").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn single_run_honours_resolution_scale() {
    let dir = scratch("single");
    let cfg = write(&dir, "[grid]\nkind = radial\npoints = 199\nextent = 20\n[time]\nt_final = 0.1\ncfl = 0.5\n");
    let out = dir.join("out");
    let o = lab(&["single-run", "--config", &cfg, "--resolution-scale", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let json = std::fs::read_to_string(out.join("single-run_summary.json")).unwrap();
    assert!(json.contains("\"points\": 399"), "{json}");
    assert!(out.join("single_run.csv").exists());
}
