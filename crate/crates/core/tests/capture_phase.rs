use proptest::prelude::*;
use rppg_confounds::capture::{
    capture_region_signals, generate_frame_timestamps, sine, sum_of_sines, CameraModel,
    RegionLayout, ScanAxis, Waveform,
};
use rppg_confounds::phase::{
    axis_shift_report, estimate_phase_shift, median_shift, track_phase_shift,
};
use rppg_confounds::signal::UniformSignal;

const SOURCE_RATE: f64 = 44100.0;
const BAND: (f64, f64) = (0.7, 3.0);

/// Difference in mean scan offset between the two halves of `lines` lines,
/// the first half holding `lines / 2` lines.
fn half_delay(readout: f64, lines: usize) -> f64 {
    let mid = lines / 2;
    let first = (mid - 1) as f64 / 2.0;
    let second = (mid + lines - 1) as f64 / 2.0;
    readout * (second - first) / (lines - 1) as f64
}

fn capture_report(
    wave: &Waveform<f64>,
    model: &CameraModel<f64>,
    duration: f64,
) -> rppg_confounds::AxisShiftReport {
    let ts = generate_frame_timestamps(model, duration, 0).unwrap();
    let layout = RegionLayout::halves(model.width(), model.height());
    let regions = capture_region_signals(wave, model, &layout, &ts).unwrap();
    axis_shift_report(&regions, 240.0, BAND).unwrap()
}

#[test]
fn vertical_scan_delays_bottom_half() {
    let wave = Waveform::new(sine(1.2, 1.0, 21.0, SOURCE_RATE).unwrap());
    let model = CameraModel::new(30.0, 640, 480).unwrap();
    let report = capture_report(&wave, &model, 20.0);
    let expected = half_delay(1.0 / 30.0, 480);
    assert!(
        (report.vertical.shift_seconds - expected).abs() < 1e-4,
        "{report:?}"
    );
    assert!(report.horizontal.shift_seconds.abs() < 1e-9);
    assert!(!report.vertical.low_quality);
}

#[test]
fn rotation_swaps_the_axes() {
    let wave = Waveform::new(sine(1.2, 1.0, 21.0, SOURCE_RATE).unwrap());
    let model = CameraModel::new(30.0, 640, 480)
        .unwrap()
        .with_scan_axis(ScanAxis::Horizontal);
    let report = capture_report(&wave, &model, 20.0);
    assert!((report.horizontal.shift_seconds - half_delay(1.0 / 30.0, 640)).abs() < 1e-4);
    assert!(report.vertical.shift_seconds.abs() < 1e-9);
}

#[test]
fn jittered_capture_still_recovers_delay() {
    use rppg_confounds::capture::Jitter;
    let wave = Waveform::new(sine(1.2, 1.0, 31.0, SOURCE_RATE).unwrap());
    let model = CameraModel::new(30.0, 640, 480)
        .unwrap()
        .with_jitter(Jitter::Uniform { half_width: 0.003 })
        .unwrap();
    let report = capture_report(&wave, &model, 30.0);
    assert!((report.vertical.shift_seconds - half_delay(1.0 / 30.0, 480)).abs() < 1e-3);
}

#[test]
fn modulated_delay_is_tracked() {
    let rate = 240.0;
    let n = (120.0 * rate) as usize;
    let tau = |t: f64| 0.01 * (1.0 - (std::f64::consts::TAU * t / 30.0).cos());
    let f = 1.0;
    let wave = |t: f64| (std::f64::consts::TAU * f * t).sin();
    let a = UniformSignal::from_fn(0.0, rate, n, wave).unwrap();
    let b = UniformSignal::from_fn(0.0, rate, n, |t| wave(t - tau(t))).unwrap();
    let track = track_phase_shift(&a, &b, 6.0, 1.0, BAND).unwrap();
    assert!(track.len() > 100);
    let est: Vec<f64> = track.iter().map(|p| p.estimate.shift_seconds).collect();
    let truth: Vec<f64> = track.iter().map(|p| tau(p.time)).collect();
    let r = correlation(&est, &truth);
    assert!(r > 0.9, "correlation {r}");
    let med = median_shift(&track).unwrap();
    assert!((0.0..0.02).contains(&med));
}

fn correlation(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

fn pulse(f: f64, phase: f64, delay: f64, n: usize) -> UniformSignal<f64> {
    UniformSignal::from_fn(0.0, 240.0, n, |t| {
        let s = t - delay;
        (std::f64::consts::TAU * f * s + phase).sin()
            + 0.3 * (std::f64::consts::TAU * 2.0 * f * s + 2.0 * phase).sin()
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn zero_readout_gives_identical_regions(
        fps in 15.0f64..60.0,
        w in 8usize..700,
        h in 8usize..500,
        seed in 0u64..100,
    ) {
        let wave = Waveform::new(sine(1.1, 1.0, 3.0, 2000.0).unwrap());
        let model = CameraModel::new(fps, w, h).unwrap().with_readout_time(0.0).unwrap();
        let ts = generate_frame_timestamps(&model, 2.0, seed).unwrap();
        let layout = RegionLayout::halves(w, h);
        let regions = capture_region_signals(&wave, &model, &layout, &ts).unwrap();
        for (_, s) in regions.iter() {
            prop_assert_eq!(s.values(), regions.top.values());
        }
    }

    #[test]
    fn self_shift_is_zero(f in 0.8f64..2.8, phase in 0.0f64..std::f64::consts::TAU) {
        let a = pulse(f, phase, 0.0, 240 * 20);
        let e = estimate_phase_shift(&a, &a, BAND).unwrap();
        prop_assert!(e.shift_seconds.abs() < 1e-9);
        prop_assert!((e.quality - 1.0).abs() < 1e-9);
    }

    #[test]
    fn delayed_copy_is_recovered(f in 0.8f64..2.8, phase in 0.0f64..std::f64::consts::TAU, frac in -0.45f64..0.45) {
        let d = frac / f;
        let a = pulse(f, phase, 0.0, 240 * 30);
        let b = pulse(f, phase, d, 240 * 30);
        let e = estimate_phase_shift(&a, &b, BAND).unwrap();
        prop_assert!((e.shift_seconds - d).abs() < 1.0 / 240.0, "{} vs {}", e.shift_seconds, d);
    }

    #[test]
    fn swapping_inputs_negates_shift(f in 0.8f64..2.8, d in -0.1f64..0.1) {
        let a = pulse(f, 0.4, 0.0, 240 * 20);
        let b = pulse(f, 0.4, d, 240 * 20);
        let ab = estimate_phase_shift(&a, &b, BAND).unwrap();
        let ba = estimate_phase_shift(&b, &a, BAND).unwrap();
        prop_assert!((ab.shift_seconds + ba.shift_seconds).abs() < 1e-12);
        prop_assert!((ab.quality - ba.quality).abs() < 1e-12);
    }

    #[test]
    fn scaling_leaves_shift_unchanged(f in 0.8f64..2.8, d in -0.1f64..0.1, ka in 0.01f64..100.0, kb in 0.01f64..100.0) {
        let a = pulse(f, 0.4, 0.0, 240 * 20);
        let b = pulse(f, 0.4, d, 240 * 20);
        let base = estimate_phase_shift(&a, &b, BAND).unwrap();
        let scale = |s: &UniformSignal<f64>, k: f64| {
            UniformSignal::new(0.0, 240.0, s.values().iter().map(|v| v * k).collect()).unwrap()
        };
        let scaled = estimate_phase_shift(&scale(&a, ka), &scale(&b, kb), BAND).unwrap();
        prop_assert!((base.shift_seconds - scaled.shift_seconds).abs() < 1e-9);
        prop_assert!((base.dominant_freq - scaled.dominant_freq).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn region_delay_matches_mean_offset(f in 0.8f64..2.5, readout in 0.0f64..(1.0 / 30.0), h in 100usize..600) {
        let wave = Waveform::new(
            sum_of_sines(&[(f, 1.0), (2.0 * f, 0.4)], 21.0, SOURCE_RATE).unwrap(),
        );
        let model = CameraModel::new(30.0, 64, h).unwrap().with_readout_time(readout).unwrap();
        let report = capture_report(&wave, &model, 20.0);
        let expected = half_delay(readout, h);
        prop_assert!(
            (report.vertical.shift_seconds - expected).abs() < 1.0 / SOURCE_RATE,
            "{} vs {}", report.vertical.shift_seconds, expected
        );
    }
}
