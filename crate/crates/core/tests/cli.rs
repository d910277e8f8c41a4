use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lensarr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lensarr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_bundle(dir: &Path) -> String {
    let path = dir.join("bundle.scene");
    let o = lensarr(&["generate", "--model", "bundle", "--n", "12", "--k", "3"]);
    assert!(o.status.success());
    fs::write(&path, &o.stdout).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn bundle_family_row() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write_bundle(dir.path());
    let o = lensarr(&["family", &scene, "--k", "3", "--mode", "exact"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,k,lenses,family_size,total_degree,mode,bound_thm1,ratio")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..6], ["12", "3", "4", "4", "12", "exact"]);
}

#[test]
fn lenses_and_cut_reports() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write_bundle(dir.path());
    let o = lensarr(&["lenses", &scene, "--k", "3"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 5);
    assert!(text.contains("0,-1,0,1,3,0 1 2"));

    let o = lensarr(&["cut", &scene, "--k", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "12");
    assert_eq!(row[5], "0", "no violations");
    assert!(row[7].parse::<f64>().unwrap().is_finite());
}

#[test]
fn verify_properties_on_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write_bundle(dir.path());
    for prop in ["duality", "coplanarity", "order-reversal", "oracle"] {
        let o = lensarr(&["verify", "--property", prop, &scene, "--k", "3"]);
        assert_eq!(o.status.code(), Some(0), "{prop}: {}", stdout(&o));
    }
}

#[test]
fn tilted_lens_fails_literal_reversal() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tilted.scene");
    fs::write(&path, "circle 0 0 2\ncircle 3 2 10\n").unwrap();
    let o = lensarr(&[
        "verify",
        "--property",
        "order-reversal",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(
        text.contains("failed 1\n") && text.contains("failed_cyclic_reversed 1\n"),
        "{text}"
    );
}

#[test]
fn bound_rows() {
    let o = lensarr(&[
        "bound",
        "--kind",
        "thm1-count",
        "--n",
        "1000000",
        "--k",
        "10",
    ]);
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..4], ["thm1-count", "1000000", "1", "10"]);
    let v: f64 = row[4].parse().unwrap();
    // n^{3/2} ln(n/k^3) / k^{5/2} + n/k, with ln 1000 = 3 ln 10
    let expect = 1e9 * 3.0 * 10f64.ln() / 10f64.powf(2.5) + 1e5;
    assert!((v - expect).abs() / expect < 1e-9, "{v} vs {expect}");
    assert!((v - 21_944_240.2).abs() < 0.1);

    let o = lensarr(&[
        "bound",
        "--kind",
        "recurrence",
        "--n",
        "1048576",
        "--k",
        "16",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("j,n_j,d_j,bound_j\n0,8192,"));

    let o = lensarr(&["bound", "--kind", "recurrence", "--n", "100", "--k", "16"]);
    assert_eq!(o.status.code(), Some(2));
    let o = lensarr(&["bound", "--kind", "nonsense", "--n", "100"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_scene_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.scene");
    fs::write(&path, "# header\ncircle 0 0 1\ncircle 1 x 2\n").unwrap();
    let o = lensarr(&["lenses", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let o = lensarr(&["lenses", dir.path().join("missing").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(lensarr(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn generation_is_deterministic_and_parallel_agnostic() {
    let dir = tempfile::tempdir().unwrap();
    for model in [
        "uniform-random",
        "random-pencils",
        "unit-circles-on-grid",
        "chord-fan",
        "bundle",
    ] {
        let args = [
            "generate", "--model", model, "--n", "12", "--k", "3", "--seed", "7",
        ];
        let a = lensarr(&args);
        assert!(a.status.success(), "{model}");
        assert_eq!(a.stdout, lensarr(&args).stdout, "{model}");
        let path = dir.path().join(format!("{model}.scene"));
        fs::write(&path, &a.stdout).unwrap();
        let p = path.to_str().unwrap();
        for cmd in ["lenses", "cut", "incidence"] {
            let par = lensarr(&[cmd, p]);
            let seq = lensarr(&["--sequential", cmd, p]);
            assert_eq!(par.stdout, seq.stdout, "{model} {cmd}");
        }
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scene.txt");
    let o = lensarr(&[
        "--out",
        out.to_str().unwrap(),
        "generate",
        "--model",
        "bundle",
        "--n",
        "6",
        "--k",
        "2",
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 6);
}
