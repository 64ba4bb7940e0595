use std::fs;
use std::path::Path;
use std::process::Command;

use enonet::cli::{run, Status, MANIFEST_NAME};

fn enonet(dir: &Path, args: &[&str]) -> enonet::cli::Outcome {
    let mut full = vec!["enonet", "--out-dir", dir.to_str().unwrap()];
    full.extend_from_slice(args);
    run(full).unwrap()
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    fs::read(dir.join(name)).unwrap()
}

fn column(dir: &Path, name: &str, col: usize) -> Vec<f64> {
    let text = String::from_utf8(read(dir, name)).unwrap();
    text.lines()
        .skip(1)
        .filter_map(|l| l.split(',').nth(col).and_then(|v| v.parse().ok()))
        .collect()
}

#[test]
fn eno_and_network_predictions_are_byte_identical() {
    let t = tempfile::tempdir().unwrap();
    let (a, b) = (t.path().join("eno"), t.path().join("net"));
    let args = ["interpolate", "--function", "q62", "--p", "4", "--levels", "4"];
    enonet(&a, &[&args[..], &["--method", "eno"]].concat());
    enonet(&b, &[&args[..], &["--method", "net"]].concat());
    for k in 1..=4 {
        let name = format!("level_{k}.csv");
        assert_eq!(read(&a, &name), read(&b, &name), "{name}");
    }
    assert_eq!(read(&a, "errors.csv"), read(&b, "errors.csv"));
}

#[test]
fn reruns_are_deterministic_across_thread_counts() {
    let t = tempfile::tempdir().unwrap();
    let (a, b) = (t.path().join("a"), t.path().join("b"));
    enonet(&a, &["--threads", "1", "verify-net", "--target", "sr-class", "--samples", "30000"]);
    enonet(&b, &["--threads", "3", "verify-net", "--target", "sr-class", "--samples", "30000"]);
    assert_eq!(read(&a, "verify.json"), read(&b, "verify.json"));
    enonet(&a, &["--threads", "1", "compress", "2d", "--eps", "10", "--K", "3"]);
    enonet(&b, &["--threads", "4", "compress", "2d", "--eps", "10", "--K", "3"]);
    for f in ["metrics.csv", "decoded.csv", "compressed.enomr"] {
        assert_eq!(read(&a, f), read(&b, f), "{f}");
    }
}

#[test]
fn each_artifact_directory_has_one_manifest() {
    let t = tempfile::tempdir().unwrap();
    let d = t.path().join("o");
    let o = enonet(&d, &["order-study", "--method", "eno", "--function", "f2"]);
    assert_eq!(o.status, Status::Ok);
    let manifests = fs::read_dir(&d)
        .unwrap()
        .filter(|e| e.as_ref().unwrap().file_name() == MANIFEST_NAME)
        .count();
    assert_eq!(manifests, 1);
    let m: serde_json::Value = serde_json::from_slice(&read(&d, MANIFEST_NAME)).unwrap();
    assert_eq!(m["command"], "order-study");
    assert_eq!(m["seed"], 42);
    assert_eq!(m["outputs"][0], "order_study.csv");
    let slopes = column(&d, "order_study.csv", 2);
    assert_eq!(slopes.len(), 4);
    assert!(slopes.iter().all(|s| (s - 3.0).abs() < 0.2), "{slopes:?}");
}

#[test]
fn sine_interpolation_reports_the_order() {
    let t = tempfile::tempdir().unwrap();
    let d = t.path().join("s");
    enonet(&d, &["interpolate", "--function", "sine", "--p", "3"]);
    let order = column(&d, "errors.csv", 6);
    assert!(order.iter().all(|s| (s - 3.0).abs() < 0.2), "{order:?}");
}

#[test]
fn interpolation_from_a_csv_file() {
    let t = tempfile::tempdir().unwrap();
    let input = t.path().join("in.csv");
    fs::write(&input, "x,value\n0,0\n1,1\n2,4\n3,9\n4,16\n").unwrap();
    let d = t.path().join("i");
    enonet(&d, &["interpolate", "--input", input.to_str().unwrap(), "--levels", "2"]);
    let v = column(&d, "level_2.csv", 1);
    assert_eq!(v.len(), 17);
    // ENO-3 reproduces the quadratic away from the boundary ghosts
    assert!((v[8] - 4.0).abs() < 1e-12 && (v[7] - 3.0625).abs() < 1e-12);
    fs::write(&input, "1\n2\nnope\n").unwrap();
    let r = run(["enonet", "--out-dir", d.to_str().unwrap(), "interpolate", "--input", input.to_str().unwrap()]);
    assert!(matches!(r, Err(enonet::Error::Parse(_))));
}

#[test]
fn compression_modes_write_containers_and_metrics() {
    let t = tempfile::tempdir().unwrap();
    let d = t.path().join("c1");
    enonet(&d, &["compress", "1d", "--function", "q62", "--eps", "0"]);
    let max_err = column(&d, "metrics.csv", 7)[0];
    assert!(max_err < 1e-14, "{max_err}");
    let c = enonet::multires::read_container(fs::File::open(d.join("compressed.enomr")).unwrap()).unwrap();
    assert!(matches!(c, enonet::multires::Container::OneD(_)));

    let pgm = t.path().join("in.pgm");
    enonet::multires::write_pgm(&enonet::multires::image::synthetic_scene(70, 40), &pgm).unwrap();
    let out = t.path().join("out.pgm");
    let d = t.path().join("img");
    enonet(
        &d,
        &["compress", "image", "--in", pgm.to_str().unwrap(), "--out", out.to_str().unwrap(), "--K", "3"],
    );
    let img = enonet::multires::read_pgm(&out).unwrap();
    assert_eq!((img.width, img.height), (73, 41));
    let r = run(["enonet", "compress", "2d", "--function", "q62"]);
    assert!(r.is_err());
}

#[test]
fn solve_writes_snapshot_sidecar_and_reference() {
    let t = tempfile::tempdir().unwrap();
    let d = t.path().join("sod");
    enonet(&d, &["solve", "--problem", "sod", "--N", "50", "--cfl", "0.5", "--p", "2", "--tf", "2", "--reference"]);
    let rho = column(&d, "solution.csv", 1);
    assert_eq!(rho.len(), 50);
    assert!(rho.iter().all(|r| *r > 0.0));
    let meta: serde_json::Value = serde_json::from_slice(&read(&d, "solution.json")).unwrap();
    assert_eq!(meta["splitting"], "global_lax_friedrichs");
    assert_eq!(meta["N"], 50);
    assert_eq!(meta["problem"], "sod");
    let l1 = column(&d, "reference_l1.csv", 1);
    assert_eq!(l1.len(), 3);

    let d3 = t.path().join("sod3");
    enonet(&d3, &["solve", "--problem", "sod", "--p", "3", "--reference"]);
    assert!(column(&d3, "reference_l1.csv", 1)[0] < l1[0]);
}

#[test]
fn binary_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_enonet");
    let t = tempfile::tempdir().unwrap();
    let ok = Command::new(exe)
        .args(["--out-dir", t.path().to_str().unwrap(), "verify-net", "--target", "interp3", "--samples", "2000"])
        .output()
        .unwrap();
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("100.0000%"));
    let bad = Command::new(exe).args(["verify-net", "--target", "nope"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let env = Command::new(exe)
        .env("ENONET_THREADS", "0")
        .args(["--out-dir", t.path().to_str().unwrap(), "verify-net", "--target", "rec2", "--samples", "10"])
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(2));
    assert_eq!(Status::VerificationFailed.exit_code(), 1);
}
