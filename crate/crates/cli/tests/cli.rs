use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use krss_core::krtower::{build, default_window, Mode, Space, Variant};
use krss_core::render::PageDump;

fn krss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krss")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = krss(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    fs::read_to_string(path).unwrap()
}

#[test]
fn coefficient_tables() {
    assert_eq!(stdout(&["coeff", "--pmin", "-4", "--pmax", "4", "--qmin", "-6", "--qmax", "6"]), golden("coeff_pt.txt"));
    assert_eq!(
        stdout(&["coeff", "--theory", "hzet", "--pmin", "-2", "--pmax", "6", "--qmin", "-6", "--qmax", "2"]),
        golden("coeff_etale.txt")
    );
    assert_eq!(
        stdout(&["coeff", "--pmin", "0", "--pmax", "2", "--qmin", "-3", "--qmax", "2", "--format", "json"]),
        golden("coeff_pt_small.json")
    );
}

#[test]
fn empty_window_is_an_empty_chart() {
    let t = stdout(&["coeff", "--pmin", "1", "--pmax", "0"]);
    assert!(t.ends_with("(empty)\n"));
    assert_eq!(stdout(&["coeff", "--pmin", "1", "--pmax", "0", "--format", "json"]), "[]\n");
}

#[test]
fn adams_chart_of_the_point() {
    let t = stdout(&["ss", "--page", "3", "--indexing", "adams"]);
    assert_eq!(t, golden("ss_pt_e3_adams.txt"));
    assert!(t.contains("a = "), "Adams axes");
}

#[test]
fn serre_charts() {
    assert_eq!(stdout(&["ss", "--space", "orbit", "--page", "2"]), golden("ss_orbit_e2_serre.txt"));
    assert_eq!(stdout(&["ss", "--page", "4", "--indexing", "serre"]), golden("ss_pt_e4_serre.txt"));
}

#[test]
fn abutments() {
    assert_eq!(stdout(&["abutment", "--degree", "-1"]), golden("abutment_kr_m1.txt"));
    assert_eq!(stdout(&["abutment", "--variant", "kret", "--degree", "4"]), golden("abutment_kret_4.txt"));
}

#[test]
fn bredon_groups() {
    assert_eq!(stdout(&["bredon", "--p", "2", "--q", "2"]), "Z/2\n");
    assert_eq!(stdout(&["bredon", "--p", "0", "--q", "-3"]), "Z/2\n");
    assert_eq!(stdout(&["bredon", "--space", "orbit", "--p", "0", "--q", "-4"]), "Z\n");
    assert_eq!(stdout(&["bredon", "--space", "S(1,1)", "--p", "1", "--q", "1"]), "Z\n");
}

#[test]
fn json_page_round_trips() {
    let doc = stdout(&["ss", "--page", "3", "--format", "json"]);
    let dump = PageDump::parse(&doc).unwrap();
    let tower = build(Space::Pt, Variant::Kr, Mode::Stable, default_window()).unwrap();
    assert_eq!(dump, PageDump::from_page(&tower.e3));
    let groups = dump.groups().unwrap();
    assert_eq!(groups.len(), tower.e3.cells().count());
    assert!(tower.e3.cells().all(|(s, g)| groups[s] == *g));
}

#[test]
fn output_is_deterministic_and_can_go_to_a_file() {
    let dir = std::env::temp_dir().join(format!("krss-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("e4.svg");
    let args = ["ss", "--page", "4", "--format", "svg", "--out", path.to_str().unwrap()];
    assert!(krss(&args).status.success());
    let first = fs::read(&path).unwrap();
    assert!(krss(&args).status.success());
    assert_eq!(first, fs::read(&path).unwrap());
    assert!(first.starts_with(b"<svg"));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "bogus"][..],
        &["coeff", "--format", "xml"],
        &["ss", "--space", "nowhere"],
        &["ss", "--page", "7"],
        &["bredon", "--mackey", "Q", "--p", "0", "--q", "0"],
    ] {
        assert_eq!(krss(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_ring_passes() {
    let out = krss(&["verify", "ring"]);
    assert_eq!(out.status.code(), Some(0));
    let t = String::from_utf8(out.stdout).unwrap();
    assert!(t.contains("ring soundness: PASS"));
}

#[test]
fn flipped_transfer_fails_in_coeffs() {
    let out = krss(&["verify", "all", "--flip-transfer", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let first = report.as_array().unwrap().iter().find(|o| o["passed"] == false).unwrap();
    assert_eq!(first["suite"], "Coeffs");
    assert!(first["witness"].is_array());
}
