use std::path::Path;
use std::process::{Command, Output};

use helios::harmonics::CoefficientSpectrum;
use helios::io::{SpectrumFile, CSV_HEADER};
use helios::lab::{make_spectrum, DecayKind, DecayProfile, SweepConfig};
use helios::Complex64;

fn helios(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_helios"))
        .args(args)
        .output()
        .expect("spawn helios")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .parse()
        .unwrap()
}

fn write_spectrum(dir: &Path, name: &str, k: f64, radius: f64, s: &CoefficientSpectrum) -> String {
    let path = dir.join(name);
    SpectrumFile::from_spectrum(k, radius, s)
        .write(&path)
        .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn hankel_values() {
    let o = helios(&["hankel", "0", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((field(&stdout(&o), "magnitude") - 0.398_942_280_401_432_7).abs() < 1e-15);

    let o = helios(&["hankel", "2", "1"]);
    assert!((field(&stdout(&o), "magnitude") - 2.876_813_695_875_796).abs() < 1e-14);

    let o = helios(&["hankel", "0", "2", "--deriv"]);
    assert!((field(&stdout(&o), "magnitude") - 0.446_031_029_038_192_8).abs() < 1e-15);

    assert_eq!(helios(&["hankel", "0", "0"]).status.code(), Some(2));
    assert_eq!(helios(&["hankel", "61", "1"]).status.code(), Some(2));
}

#[test]
fn bounds_check_exit_codes() {
    let o = helios(&["bounds-check"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("PASS"));

    let o = helios(&[
        "bounds-check",
        "--nmax",
        "0",
        "--tmin",
        "3",
        "--tmax",
        "3",
        "--points",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1);

    assert_eq!(
        helios(&["bounds-check", "--tmin", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        helios(&["bounds-check", "--tmin", "-1"]).status.code(),
        Some(2)
    );
    assert_eq!(helios(&["bounds-check", "--bogus"]).status.code(), Some(2));
}

#[test]
fn reconstruct_zero_and_single_mode() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write_spectrum(
        dir.path(),
        "zero.json",
        4.0,
        1.0,
        &CoefficientSpectrum::zeros(3),
    );
    let o = helios(&["reconstruct", &zero]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "norm_u_0"), 0.0);
    assert_eq!(field(&stdout(&o), "norm_dru_1"), 0.0);

    // Degree 2, |a| = 1: ‖u‖₀ = R·k·|ĥ_2(kR)|, |ĥ_2(4)| from a 40-digit evaluation.
    let mut single = CoefficientSpectrum::zeros(2);
    single.set(2, 1, Complex64::new(0.6, -0.8)).unwrap();
    let path = write_spectrum(dir.path(), "single.json", 4.0, 1.0, &single);
    let out = dir.path().join("trace.json");
    let o = helios(&["reconstruct", &path, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let h2 = 0.220_562_794_850_865_63;
    assert!((field(&stdout(&o), "norm_u_0") - 4.0 * h2).abs() < 1e-14);
    let trace = SpectrumFile::read(&out).unwrap().to_spectrum().unwrap();
    assert!((trace.get(2, 1).norm() - 4.0 * h2).abs() < 1e-14);

    let o = helios(&["reconstruct", &path, "--ncut", "1"]);
    assert_eq!(field(&stdout(&o), "norm_u_0"), 0.0);

    assert_eq!(
        helios(&["reconstruct", "/nonexistent/file.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn stability_verify_small_ensemble() {
    let o = helios(&["stability-verify", "--ensemble-size", "20", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("PASS"));

    let o = helios(&[
        "stability-verify",
        "--ensemble-size",
        "5",
        "--which",
        "T1der",
        "--kR-range",
        "2,3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("T1der: checked=5"));

    assert_eq!(
        helios(&["stability-verify", "--which", "T1der", "--kr-range", "1:10"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        helios(&["stability-verify", "--ensemble-size", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        helios(&["stability-verify", "--which", "T3"]).status.code(),
        Some(2)
    );
}

#[test]
fn stability_verify_is_byte_stable_across_thread_counts() {
    let args = [
        "stability-verify",
        "--ensemble-size",
        "40",
        "--seed",
        "9",
        "--detailed",
    ];
    let a = helios(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_helios"))
        .args(args)
        .env("HELIOS_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let bad = Command::new(env!("CARGO_BIN_EXE_helios"))
        .args(["hankel", "0", "1"])
        .env("HELIOS_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn obstacle_forward_then_invert() {
    let dir = tempfile::tempdir().unwrap();
    let d = make_spectrum(&DecayProfile {
        decay: DecayKind::Exponential { rate: 0.7 },
        max_degree: 12,
        seed: 4,
        scale: 0.05,
        real: true,
    })
    .unwrap();
    let input = write_spectrum(dir.path(), "d.json", 3.0, 1.5, &d);
    for kind in ["soft", "hard"] {
        let amp = dir.path().join(format!("{kind}-amp.json"));
        let back = dir.path().join(format!("{kind}-d.json"));
        let o = helios(&[
            "obstacle",
            "forward",
            "--kind",
            kind,
            &input,
            "--out",
            amp.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        let o = helios(&[
            "obstacle",
            "invert",
            "--kind",
            kind,
            amp.to_str().unwrap(),
            "--out",
            back.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        let recovered = SpectrumFile::read(&back).unwrap().to_spectrum().unwrap();
        assert!(recovered.sub(&d).energy().sqrt() <= 1e-9 * d.energy().sqrt());
    }

    let zero = write_spectrum(
        dir.path(),
        "zero.json",
        3.0,
        1.0,
        &CoefficientSpectrum::zeros(4),
    );
    let o = helios(&["obstacle", "forward", "--kind", "soft", &zero]);
    assert_eq!(o.status.code(), Some(0));
    let amp = SpectrumFile::parse(&stdout(&o))
        .unwrap()
        .to_spectrum()
        .unwrap();
    assert_eq!(amp.energy(), 0.0);

    assert_eq!(
        helios(&["obstacle", "forward", "--kind", "elastic", &zero])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        helios(&["obstacle", "invert", "--kind", "soft", &zero, "--ncut", "61"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn sweep_csv_output() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.json");
    std::fs::write(
        &config,
        serde_json::to_string(&SweepConfig::canonical()).unwrap(),
    )
    .unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = helios(&[
            "sweep",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    let cutoffs: Vec<&str> = rows.iter().map(|r| r[1]).collect();
    assert_eq!(cutoffs, ["1", "2", "2", "4", "5", "8"]);

    let mut empty = SweepConfig::canonical();
    empty.wavenumbers.clear();
    std::fs::write(&config, serde_json::to_string(&empty).unwrap()).unwrap();
    assert_eq!(
        helios(&["sweep", "--config", config.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        helios(&["sweep", "--config", "/nonexistent.json"])
            .status
            .code(),
        Some(2)
    );
}
