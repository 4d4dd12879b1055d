use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rppg_confounds::hr_window::{window_diff_matrix, BeatSeries, DiffMatrix, WindowSpec};
use rppg_confounds::io::{
    format_diff_matrix_csv, read_timestamped_signal, write_timestamped_signal,
};
use rppg_confounds::signal::{power_spectrum, Taper};
use rppg_confounds::{TimestampedSignal, UniformSignal};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rppg-confounds"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    let out = bin().current_dir(dir).args(args).output().unwrap();
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn fails(dir: &Path, args: &[&str]) -> String {
    let out = bin().current_dir(dir).args(args).output().unwrap();
    assert!(!out.status.success(), "{args:?} should fail");
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn key_values(path: PathBuf) -> Vec<(String, String)> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| {
            let (k, v) = l.split_once('=').unwrap();
            (k.to_string(), v.to_string())
        })
        .collect()
}

fn value(pairs: &[(String, String)], key: &str) -> f64 {
    pairs
        .iter()
        .find(|(k, _)| k == key)
        .unwrap()
        .1
        .parse()
        .unwrap()
}

fn json(path: PathBuf) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn write_camera(dir: &Path, readout: f64, extra: &str) -> PathBuf {
    let p = dir.join("cam.cfg");
    fs::write(
        &p,
        format!("fps = 30\nwidth = 640\nheight = 480\nreadout_time = {readout}\n{extra}"),
    )
    .unwrap();
    p
}

fn source_wave(dir: &Path) {
    run(
        dir,
        &[
            "gen-waveform",
            "--shape",
            "sine",
            "--freq",
            "1.2",
            "--duration",
            "22",
            "--rate",
            "44100",
            "--out",
            "wave",
        ],
    );
}

#[test]
fn sine_file_has_expected_length() {
    let d = tempfile::tempdir().unwrap();
    run(
        d.path(),
        &[
            "gen-waveform",
            "--shape",
            "sine",
            "--freq",
            "1.2",
            "--duration",
            "10",
            "--out",
            "g",
        ],
    );
    let sig = read_timestamped_signal::<f64>(&d.path().join("g/waveform.csv")).unwrap();
    assert_eq!(sig.len(), 2400);
    let cfg = json(d.path().join("g/run_config.json"));
    assert_eq!(cfg["run"]["rate"], 240.0);
    assert_eq!(cfg["run"]["seed"], 0);
}

#[test]
fn file_playback_is_passthrough() {
    let d = tempfile::tempdir().unwrap();
    let t: Vec<f64> = (0..50)
        .map(|k| k as f64 * 0.037 + (k % 3) as f64 * 0.001)
        .collect();
    let sig = TimestampedSignal::from_fn(t, |x| x.cos()).unwrap();
    write_timestamped_signal(&d.path().join("in.csv"), &sig).unwrap();
    run(
        d.path(),
        &[
            "gen-waveform",
            "--shape",
            "from-file",
            "--input",
            "in.csv",
            "--out",
            "g",
        ],
    );
    assert_eq!(
        read_timestamped_signal::<f64>(&d.path().join("g/waveform.csv")).unwrap(),
        sig
    );
}

#[test]
fn sum_of_sines_peaks_keep_power_ratio() {
    let d = tempfile::tempdir().unwrap();
    run(
        d.path(),
        &[
            "gen-waveform",
            "--shape",
            "sum-of-sines",
            "--duration",
            "10",
            "--out",
            "g",
        ],
    );
    let sig = read_timestamped_signal::<f64>(&d.path().join("g/waveform.csv")).unwrap();
    let u = UniformSignal::new(0.0, 240.0, sig.values().to_vec()).unwrap();
    let spec = power_spectrum(&u, Taper::Rectangular).unwrap();
    let p = spec.power();
    let ratio = p[12] / p[24];
    assert!((ratio - 1.0 / 0.09).abs() < 1e-6, "{ratio}");
}

#[test]
fn global_shutter_regions_are_identical() {
    let d = tempfile::tempdir().unwrap();
    source_wave(d.path());
    write_camera(
        d.path(),
        0.0,
        "jitter_kind = uniform\njitter_param = 0.004\n",
    );
    run(
        d.path(),
        &[
            "simulate",
            "--camera",
            "cam.cfg",
            "--waveform",
            "wave/waveform.csv",
            "--duration",
            "5",
            "--out",
            "s",
        ],
    );
    let top = fs::read(d.path().join("s/top.csv")).unwrap();
    for r in ["bottom", "left", "right"] {
        assert_eq!(
            fs::read(d.path().join(format!("s/{r}.csv"))).unwrap(),
            top,
            "{r}"
        );
    }
}

#[test]
fn simulation_is_reproducible() {
    let d = tempfile::tempdir().unwrap();
    source_wave(d.path());
    write_camera(
        d.path(),
        0.03,
        "jitter_kind = gaussian\njitter_param = 0.003\n",
    );
    let args = [
        "simulate",
        "--camera",
        "cam.cfg",
        "--waveform",
        "wave/waveform.csv",
        "--seed",
        "11",
    ];
    run(d.path(), &[&args[..], &["--out", "a"]].concat());
    run(d.path(), &[&args[..], &["--out", "b"]].concat());
    let files = [
        "top.csv",
        "bottom.csv",
        "left.csv",
        "right.csv",
        "frame_timestamps.txt",
    ];
    for f in files {
        assert_eq!(
            fs::read(d.path().join("a").join(f)).unwrap(),
            fs::read(d.path().join("b").join(f)).unwrap()
        );
    }
    // a replay into the original directory rewrites every file unchanged
    let before: Vec<Vec<u8>> = files
        .iter()
        .chain(&["run_config.json"])
        .map(|f| fs::read(d.path().join("a").join(f)).unwrap())
        .collect();
    run(d.path(), &["replay", "a/run_config.json"]);
    let after: Vec<Vec<u8>> = files
        .iter()
        .chain(&["run_config.json"])
        .map(|f| fs::read(d.path().join("a").join(f)).unwrap())
        .collect();
    assert_eq!(before, after);
    let other = run(
        d.path(),
        &[
            "simulate",
            "--camera",
            "cam.cfg",
            "--waveform",
            "wave/waveform.csv",
            "--seed",
            "12",
            "--out",
            "c",
        ],
    );
    assert!(other.status.success());
    assert_ne!(
        fs::read(d.path().join("a/frame_timestamps.txt")).unwrap(),
        fs::read(d.path().join("c/frame_timestamps.txt")).unwrap()
    );
}

#[test]
fn simulated_regions_feed_phase() {
    let d = tempfile::tempdir().unwrap();
    source_wave(d.path());
    write_camera(d.path(), 1.0 / 30.0, "");
    run(
        d.path(),
        &[
            "simulate",
            "--camera",
            "cam.cfg",
            "--waveform",
            "wave/waveform.csv",
            "--duration",
            "20",
            "--out",
            "s",
        ],
    );
    let out = run(
        d.path(),
        &["phase", "--regions", "s", "--window", "10", "--out", "p"],
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("top/bottom"));
    let kv = key_values(d.path().join("p/estimate.txt"));
    let readout = 1.0 / 30.0;
    assert!((value(&kv, "vertical.shift_seconds") - readout / 2.0).abs() < 1e-3);
    assert!(value(&kv, "horizontal.shift_seconds").abs() < 1e-3);
    assert!((value(&kv, "vertical.median_shift_seconds") - readout / 2.0).abs() < 1e-3);
    assert!(d.path().join("p/track_vertical.csv").exists());
    let cfg = json(d.path().join("p/run_config.json"));
    assert_eq!(cfg["run"]["band_low"], 0.7);
    assert_eq!(cfg["run"]["band_high"], 3.0);
    assert_eq!(cfg["run"]["taper"], "hann");
    assert_eq!(cfg["run"]["ref_bpm"], 60.0);
    assert_eq!(cfg["inputs"].as_array().unwrap().len(), 4);
}

fn tone(dir: &Path, name: &str, delay: f64) {
    let t: Vec<f64> = (0..600).map(|k| k as f64 / 30.0).collect();
    let sig =
        TimestampedSignal::from_fn(t, |x| (std::f64::consts::TAU * (x - delay)).sin()).unwrap();
    write_timestamped_signal(&dir.join(name), &sig).unwrap();
}

#[test]
fn phase_of_constructed_delay() {
    let d = tempfile::tempdir().unwrap();
    tone(d.path(), "a.csv", 0.0);
    tone(d.path(), "b.csv", 0.02);
    run(
        d.path(),
        &["phase", "--a", "a.csv", "--b", "a.csv", "--out", "same"],
    );
    assert!(
        value(
            &key_values(d.path().join("same/estimate.txt")),
            "shift_seconds"
        )
        .abs()
            < 1e-9
    );
    run(
        d.path(),
        &[
            "phase",
            "--a",
            "a.csv",
            "--b",
            "b.csv",
            "--ref-bpm",
            "60",
            "--out",
            "delay",
        ],
    );
    let kv = key_values(d.path().join("delay/estimate.txt"));
    assert!(
        (value(&kv, "shift_degrees_at_ref_bpm") - 7.2).abs() < 0.05,
        "{kv:?}"
    );
    assert!(!d.path().join("delay/track.csv").exists());
}

#[test]
fn compare_fps_on_regular_and_jittered_frames() {
    let d = tempfile::tempdir().unwrap();
    tone(d.path(), "regular.csv", 0.0);
    run(
        d.path(),
        &["compare-fps", "--signal", "regular.csv", "--out", "r"],
    );
    let report = json(d.path().join("r/report.json"));
    assert_eq!(report["comparison"]["amplitude"]["relative_rms"], 0.0);
    assert_eq!(report["comparison"]["spectral"]["relative_rms"], 0.0);
    assert_eq!(report["same_peak"], true);

    source_wave(d.path());
    write_camera(
        d.path(),
        1.0 / 30.0,
        "jitter_kind = uniform\njitter_param = 0.003\n",
    );
    run(
        d.path(),
        &[
            "simulate",
            "--camera",
            "cam.cfg",
            "--waveform",
            "wave/waveform.csv",
            "--out",
            "s",
        ],
    );
    run(
        d.path(),
        &[
            "compare-fps",
            "--signal",
            "s/top.csv",
            "--taper",
            "rectangular",
            "--out",
            "j",
        ],
    );
    let report = json(d.path().join("j/report.json"));
    assert_eq!(report["same_peak"], true);
    assert!(
        report["comparison"]["amplitude"]["relative_rms"]
            .as_f64()
            .unwrap()
            > 0.0
    );
    for f in [
        "good.csv",
        "bad.csv",
        "good_spectrum.csv",
        "bad_spectrum.csv",
    ] {
        assert!(d.path().join("j").join(f).exists(), "{f}");
    }
}

fn beats_file(dir: &Path, name: &str, times: &[f64]) {
    let text: String = times.iter().map(|t| format!("{t}\n")).collect();
    fs::write(dir.join(name), text).unwrap();
}

#[test]
fn window_matrix_outputs() {
    let d = tempfile::tempdir().unwrap();
    let constant: Vec<f64> = (0..200).map(|k| k as f64 * 0.75).collect();
    beats_file(d.path(), "flat.txt", &constant);
    run(d.path(), &["window-matrix", "flat.txt", "--out", "flat"]);
    let summary = json(d.path().join("flat/summary.json"));
    for cell in summary["pooled"]["cells"].as_array().unwrap() {
        assert_eq!(cell["summary"]["max"], 0.0);
    }

    let mut a = vec![0.0];
    let mut b = vec![3.0];
    for k in 1..180 {
        a.push(a[k - 1] + if k % 2 == 1 { 0.5 } else { 1.0 });
        b.push(b[k - 1] + 0.6 + 0.3 * ((k * 7) % 5) as f64 / 4.0);
    }
    beats_file(d.path(), "a.txt", &a);
    beats_file(d.path(), "b.txt", &b);
    run(
        d.path(),
        &[
            "window-matrix",
            "a.txt",
            "b.txt",
            "--decimals",
            "6",
            "--out",
            "m",
        ],
    );
    let spec = WindowSpec::default();
    let parts: Vec<DiffMatrix<f64>> = [a, b]
        .into_iter()
        .map(|t| window_diff_matrix(&BeatSeries::new(t).unwrap(), &spec).unwrap())
        .collect();
    let pooled = DiffMatrix::pooled(&parts).unwrap();
    assert_eq!(
        fs::read_to_string(d.path().join("m/pooled_matrix.csv")).unwrap(),
        format_diff_matrix_csv(&pooled, 6)
    );
    assert_eq!(
        fs::read_to_string(d.path().join("m/subject_02_b.csv")).unwrap(),
        format_diff_matrix_csv(&parts[1], 6)
    );
    let gaps = fs::read_to_string(d.path().join("m/boxplot_by_gap.csv")).unwrap();
    assert_eq!(gaps.lines().count(), 13);
    let pairs = fs::read_to_string(d.path().join("m/boxplot_by_pair.csv")).unwrap();
    assert_eq!(pairs.lines().count(), 79);

    // sample-index annotations
    fs::write(d.path().join("idx.txt"), "0\n200\n400\n600\n800\n1000\n").unwrap();
    run(
        d.path(),
        &[
            "window-matrix",
            "idx.txt",
            "--sizes",
            "0,2,4",
            "--step",
            "1",
            "--sample-rate",
            "250",
            "--out",
            "i",
        ],
    );
    let cfg = json(d.path().join("i/run_config.json"));
    assert_eq!(cfg["inputs"][0]["units"], "samples");
    assert_eq!(cfg["run"]["sizes"], serde_json::json!([0.0, 2.0, 4.0]));
}

#[test]
fn errors_exit_nonzero() {
    let d = tempfile::tempdir().unwrap();
    tone(d.path(), "a.csv", 0.0);
    let err = fails(
        d.path(),
        &[
            "compare-fps",
            "--signal",
            "a.csv",
            "--rate",
            "50000",
            "--out",
            "x",
        ],
    );
    assert!(err.contains("--rate"), "{err}");
    fails(
        d.path(),
        &["compare-fps", "--signal", "missing.csv", "--out", "x"],
    );
    fs::write(d.path().join("bad.txt"), "1.0\n2.0\n1.5\n").unwrap();
    let err = fails(d.path(), &["window-matrix", "bad.txt", "--out", "x"]);
    assert!(err.contains("line 3"), "{err}");
    fails(d.path(), &["phase", "--a", "a.csv", "--out", "x"]);
    fails(
        d.path(),
        &["gen-waveform", "--shape", "from-file", "--out", "x"],
    );
    let flat =
        TimestampedSignal::from_fn((0..300).map(|k| k as f64 / 30.0).collect(), |_| 1.0).unwrap();
    write_timestamped_signal(&d.path().join("flat.csv"), &flat).unwrap();
    let err = fails(
        d.path(),
        &["phase", "--a", "flat.csv", "--b", "flat.csv", "--out", "x"],
    );
    assert!(err.contains("phase failed"), "{err}");
}
