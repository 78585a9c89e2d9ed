use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hcontact::grid::{read_columnar, section_from_columns};
use hcontact::io::write_form;
use hcontact::{Form, Laurent, LaurentForm, VerificationReport};

fn hcontact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcontact")).args(args).output().expect("binary runs")
}

fn alpha_std() -> LaurentForm {
    Form::dz(3, 2).add(&Form::dz(3, 1).mul_function(&Laurent::z(3, 0))).unwrap()
}

fn write_std(dir: &Path) -> String {
    let p = dir.join("alpha_std.form");
    write_form(&p, &alpha_std()).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn verify_standard_form() {
    let dir = tempfile::tempdir().unwrap();
    let form = write_std(dir.path());
    let out = hcontact(&["verify", "--form", &form, "--tol", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = VerificationReport::from_text(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(r.pass);
    assert!((r.min_margin.unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(r.seed, Some(0));
}

#[test]
fn failing_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("dz.form");
    write_form(&p, &LaurentForm::dz(3, 2)).unwrap();
    let out = hcontact(&["verify", "--form", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_file_reports_position_and_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.form");
    fs::write(&p, "{\"m\": 3,\n \"degree\": 1,\n \"terms\": [ {\"wedge\": [\"dz4\"], \"coeff\": []} ]}").unwrap();
    let out_dir = dir.path().join("out");
    let out = hcontact(&["verify", "--form", p.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let r = VerificationReport::from_text(&fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert!(!r.pass);
    assert!(r.checks[0].detail.contains("terms[0].wedge[0]"), "{}", r.checks[0].detail);
}

#[test]
fn gallery_lists_every_identity_and_is_reproducible() {
    let a = hcontact(&["gallery"]);
    let b = hcontact(&["gallery"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = VerificationReport::from_text(&String::from_utf8(a.stdout).unwrap()).unwrap();
    assert_eq!(r.checks.len(), hcontact::gallery::default_names().len());
    let one = hcontact(&["gallery", "torus:2,1,3"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(hcontact(&["gallery", "nonsense:1"]).status.code(), Some(2));
}

#[test]
fn integrate_dumps_frames() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ci");
    let o = hcontact(&["integrate", "--n", "1", "--grid", "17", "--eps", "0.5", "--delta", "1e-3", "--seed", "0", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let frames = out.join("frames");
    assert!(frames.join("metadata.json").exists());
    let last = fs::File::open(frames.join("frame_0016")).unwrap();
    let (grid, comps, data) = read_columnar(std::io::BufReader::new(last)).unwrap();
    assert_eq!(grid.nodes_per_axis(), 17);
    let s = section_from_columns(grid, comps, &data).unwrap();
    assert_eq!(s.dim(), 3);
    let report = fs::read_to_string(out.join("report.json")).unwrap();
    let again = dir.path().join("ci2");
    hcontact(&["integrate", "--grid", "17", "--out", again.to_str().unwrap()]);
    assert_eq!(report, fs::read_to_string(again.join("report.json")).unwrap());
}

#[test]
fn other_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let form = write_std(dir.path());
    assert_eq!(hcontact(&["ample", "--n", "1", "--samples", "50"]).status.code(), Some(0));
    assert_eq!(hcontact(&["fit", "--form", &form, "--grid", "9", "--degree", "1"]).status.code(), Some(0));
    let ext = dir.path().join("ext");
    assert_eq!(hcontact(&["extend", "--form", &form, "--degree", "2", "--out", ext.to_str().unwrap()]).status.code(), Some(0));
    let back = hcontact::io::read_form(&ext.join("extended.form")).unwrap();
    assert_eq!(back, hcontact::io::AnyForm::Exact(alpha_std()));
    let beta = dir.path().join("beta.form");
    write_form(&beta, &alpha_std().ext_d()).unwrap();
    let o = hcontact(&["formal", "--form", &form, "--beta", beta.to_str().unwrap(), "--tol", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(hcontact(&["formal", "--form", &form]).status.code(), Some(2));
}
