use anyhow::{bail, Result};
use rppg_confounds::capture::{
    capture_region_signals_with, generate_frame_timestamps, Jitter, Region, Waveform,
};
use rppg_confounds::io::{
    read_camera_config, read_timestamped_signal, write_frame_timestamps, write_timestamped_signal,
    CameraConfig, InputKind, Manifest,
};

use super::as_uniform;
use crate::args::SimulateArgs;
use crate::echo;

pub const TIMESTAMPS: &str = "frame_timestamps.txt";

fn load(a: &SimulateArgs) -> Result<(CameraConfig<f64>, Waveform<f64>)> {
    let cfg = read_camera_config(&a.camera)?;
    let source = read_timestamped_signal(&a.waveform)?;
    Ok((cfg, Waveform::new(as_uniform(&source, &a.waveform)?)))
}

pub fn resolve(mut a: SimulateArgs) -> Result<SimulateArgs> {
    a.camera = echo::resolve(&a.camera)?;
    a.waveform = echo::resolve(&a.waveform)?;
    if a.duration.is_none() {
        let (cfg, wave) = load(&a)?;
        // leave room for the readout of the last frame and its jitter
        let m = &cfg.model;
        let room = wave.end() - wave.start() - m.readout_time() - m.frame_interval();
        if room.is_nan() || room <= 0.0 {
            bail!("{} is too short for even one frame", a.waveform.display());
        }
        a.duration = Some(room);
    }
    Ok(a)
}

pub fn run(a: &SimulateArgs) -> Result<Vec<Manifest>> {
    let (cfg, wave) = load(a)?;
    let duration = a.duration.expect("duration is resolved");
    let ts = generate_frame_timestamps(&cfg.model, duration, a.output.seed)?;
    // frames are placed from the start of the waveform
    let shift = wave.start() - ts[0];
    let ts: Vec<f64> = ts.iter().map(|t| t + shift).collect();
    let regions = capture_region_signals_with(&wave, &cfg.model, &cfg.layout, &ts, cfg.subgrid)?;

    let out = &a.output.out;
    for (region, sig) in regions.iter() {
        write_timestamped_signal(&out.join(region_file(region)), sig)?;
    }
    write_frame_timestamps(&out.join(TIMESTAMPS), &ts)?;

    let m = &cfg.model;
    let span = ts[ts.len() - 1] - ts[0];
    println!(
        "{} frames over {:.3} s (mean {:.4} fps), {} scan, readout {} s, jitter {}",
        ts.len(),
        span,
        (ts.len() - 1) as f64 / span,
        m.scan_axis(),
        m.readout_time(),
        m.jitter().kind()
    );
    println!(
        "region signals and frame timestamps written to {}",
        out.display()
    );

    let mut inputs = vec![
        Manifest::new(InputKind::CameraConfig, &a.camera),
        Manifest::new(InputKind::Signal, &a.waveform),
    ];
    if let (Jitter::Explicit(_), Some(file)) = (m.jitter(), &cfg.timestamps_file) {
        inputs.push(Manifest::new(InputKind::FrameTimestamps, file));
    }
    Ok(inputs)
}

pub fn region_file(region: Region) -> String {
    format!("{}.csv", region.name())
}
