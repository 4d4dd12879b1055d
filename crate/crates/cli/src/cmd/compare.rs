use anyhow::Result;
use rppg_confounds::io::{
    format_spectrum_csv, read_timestamped_signal, write_text, write_timestamped_signal, InputKind,
    Manifest,
};
use rppg_confounds::signal::compare_resamplers;
use serde_json::json;

use super::write_json;
use crate::args::CompareArgs;
use crate::echo;

pub fn resolve(mut a: CompareArgs) -> Result<CompareArgs> {
    a.spectral.validate()?;
    a.signal = echo::resolve(&a.signal)?;
    Ok(a)
}

pub fn run(a: &CompareArgs) -> Result<Vec<Manifest>> {
    let sig = read_timestamped_signal(&a.signal)?;
    let s = &a.spectral;
    let c = compare_resamplers(&sig, s.rate, s.taper, s.band())?;

    let out = &a.output.out;
    write_timestamped_signal(&out.join("good.csv"), &c.good.to_timestamped())?;
    write_timestamped_signal(&out.join("bad.csv"), &c.bad.to_timestamped())?;
    write_text(
        &out.join("good_spectrum.csv"),
        &format_spectrum_csv(&c.good_spectrum),
    )?;
    write_text(
        &out.join("bad_spectrum.csv"),
        &format_spectrum_csv(&c.bad_spectrum),
    )?;

    let t = sig.timestamps();
    let intervals: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
    let mean = intervals.iter().sum::<f64>() / intervals.len() as f64;
    let sd = (intervals
        .iter()
        .map(|d| (d - mean) * (d - mean))
        .sum::<f64>()
        / intervals.len() as f64)
        .sqrt();
    write_json(
        &out.join("report.json"),
        &json!({
            "frames": sig.len(),
            "mean_frame_interval_s": mean,
            "frame_interval_sd_s": sd,
            "resampled_len": c.good.len(),
            "comparison": c,
            "same_peak": c.same_peak(),
        }),
    )?;

    println!("{} frames, interval {:.5} +- {:.5} s", sig.len(), mean, sd);
    println!(
        "amplitude difference: relative rms {:.4}%, max {:.4e}",
        c.amplitude.relative_rms, c.amplitude.max_abs
    );
    println!(
        "spectral difference: relative rms {:.4}%, max {:.4e}",
        c.spectral.relative_rms, c.spectral.max_abs
    );
    println!(
        "dominant frequency: good {} Hz, bad {} Hz ({})",
        c.good_peak_hz,
        c.bad_peak_hz,
        if c.same_peak() {
            "same bin"
        } else {
            "different bins"
        }
    );
    Ok(vec![Manifest::new(InputKind::Signal, &a.signal)])
}
