use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use rppg_confounds::capture::{Region, RegionSignals};
use rppg_confounds::io::{
    format_key_values, format_track_csv, read_timestamped_signal, write_text, InputKind, Manifest,
};
use rppg_confounds::phase::{
    axis_shift_report_with, estimate_phase_shift_with, median_shift, seconds_to_degrees,
    track_phase_shift_with, TrackPoint,
};
use rppg_confounds::signal::{resample_aware, resample_pair};
use rppg_confounds::UniformSignal;
use serde_json::json;

use super::simulate::region_file;
use super::write_json;
use crate::args::PhaseArgs;
use crate::echo;

pub fn resolve(mut a: PhaseArgs) -> Result<PhaseArgs> {
    a.spectral.validate()?;
    if !(a.ref_bpm > 0.0 && a.ref_bpm.is_finite()) {
        bail!("--ref-bpm must be positive, got {}", a.ref_bpm);
    }
    match (&a.a, &a.b, &a.regions) {
        (Some(x), Some(y), None) => {
            a.a = Some(echo::resolve(x)?);
            a.b = Some(echo::resolve(y)?);
        }
        (None, None, Some(dir)) => a.regions = Some(echo::resolve(dir)?),
        _ => bail!("give either --a and --b, or --regions"),
    }
    Ok(a)
}

pub fn run(a: &PhaseArgs) -> Result<Vec<Manifest>> {
    match &a.regions {
        Some(dir) => run_regions(a, dir),
        None => run_pair(a, a.a.as_deref().unwrap(), a.b.as_deref().unwrap()),
    }
}

struct Track {
    name: &'static str,
    points: Vec<TrackPoint<f64>>,
}

fn track(
    a: &PhaseArgs,
    name: &'static str,
    x: &UniformSignal,
    y: &UniformSignal,
) -> Result<Option<Track>> {
    let Some(window) = a.window else {
        return Ok(None);
    };
    let s = &a.spectral;
    let points = track_phase_shift_with(x, y, window, a.track_step, s.band(), s.taper)?;
    Ok(Some(Track { name, points }))
}

/// Writes the track table and adds its median to `pairs`.
fn finish_track(
    a: &PhaseArgs,
    t: &Track,
    pairs: &mut Vec<(String, String)>,
) -> Result<serde_json::Value> {
    let file = format!(
        "track{}.csv",
        if t.name.is_empty() {
            String::new()
        } else {
            format!("_{}", t.name)
        }
    );
    write_text(&a.output.out.join(&file), &format_track_csv(&t.points))?;
    let prefix = if t.name.is_empty() {
        String::new()
    } else {
        format!("{}.", t.name)
    };
    let median = median_shift(&t.points);
    pairs.push((format!("{prefix}track_windows"), t.points.len().to_string()));
    if let Some(m) = median {
        pairs.push((format!("{prefix}median_shift_seconds"), m.to_string()));
        pairs.push((
            format!("{prefix}median_shift_degrees_at_ref_bpm"),
            seconds_to_degrees(m, a.ref_bpm)?.to_string(),
        ));
    }
    let flagged = t.points.iter().filter(|p| p.estimate.low_quality).count();
    Ok(
        json!({ "file": file, "windows": t.points.len(), "low_quality": flagged, "median_shift_seconds": median }),
    )
}

fn run_pair(a: &PhaseArgs, pa: &Path, pb: &Path) -> Result<Vec<Manifest>> {
    let sa = read_timestamped_signal(pa)?;
    let sb = read_timestamped_signal(pb)?;
    let s = &a.spectral;
    let (ua, ub) = resample_pair(&sa, &sb, s.rate)?;
    let e = estimate_phase_shift_with(&ua, &ub, s.band(), s.taper)?;
    let mut pairs = vec![
        ("ref_bpm".to_string(), a.ref_bpm.to_string()),
        ("shift_seconds".to_string(), e.shift_seconds.to_string()),
        ("shift_degrees".to_string(), e.shift_degrees.to_string()),
        (
            "shift_degrees_at_ref_bpm".to_string(),
            seconds_to_degrees(e.shift_seconds, a.ref_bpm)?.to_string(),
        ),
        ("dominant_freq_hz".to_string(), e.dominant_freq.to_string()),
        ("coherence".to_string(), e.quality.to_string()),
        ("low_quality".to_string(), e.low_quality.to_string()),
    ];
    let tracked = match track(a, "", &ua, &ub)? {
        Some(t) => Some(finish_track(a, &t, &mut pairs)?),
        None => None,
    };
    write_text(
        &a.output.out.join("estimate.txt"),
        &format_key_values(&pairs),
    )?;
    write_json(
        &a.output.out.join("report.json"),
        &json!({ "estimate": e, "track": tracked }),
    )?;

    println!(
        "shift {:.6} s ({:.3} deg at {} bpm), dominant {:.4} Hz, coherence {:.3}{}",
        e.shift_seconds,
        seconds_to_degrees(e.shift_seconds, a.ref_bpm)?,
        a.ref_bpm,
        e.dominant_freq,
        e.quality,
        if e.low_quality { " (low quality)" } else { "" }
    );
    Ok(vec![
        Manifest::new(InputKind::Signal, pa),
        Manifest::new(InputKind::Signal, pb),
    ])
}

fn run_regions(a: &PhaseArgs, dir: &Path) -> Result<Vec<Manifest>> {
    let path = |r: Region| -> PathBuf { dir.join(region_file(r)) };
    let regions = RegionSignals {
        top: read_timestamped_signal(&path(Region::Top))?,
        bottom: read_timestamped_signal(&path(Region::Bottom))?,
        left: read_timestamped_signal(&path(Region::Left))?,
        right: read_timestamped_signal(&path(Region::Right))?,
    };
    let s = &a.spectral;
    let report = axis_shift_report_with(&regions, s.rate, s.band(), s.taper)?;
    let mut pairs = report.key_values(a.ref_bpm)?;

    let mut tracks = serde_json::Map::new();
    if a.window.is_some() {
        let u = |r: Region| resample_aware(regions.get(r), s.rate);
        let (top, bottom, left, right) = (
            u(Region::Top)?,
            u(Region::Bottom)?,
            u(Region::Left)?,
            u(Region::Right)?,
        );
        // same orientation as the point estimates: earlier region lagging the later one
        for t in [
            track(a, "vertical", &bottom, &top)?,
            track(a, "horizontal", &right, &left)?,
        ]
        .into_iter()
        .flatten()
        {
            tracks.insert(t.name.to_string(), finish_track(a, &t, &mut pairs)?);
        }
    }
    write_text(
        &a.output.out.join("estimate.txt"),
        &format_key_values(&pairs),
    )?;
    write_json(
        &a.output.out.join("report.json"),
        &json!({ "axes": report, "tracks": tracks }),
    )?;

    for (axis, e) in [
        ("top/bottom", &report.vertical),
        ("left/right", &report.horizontal),
    ] {
        println!(
            "{axis}: {:.6} s ({:.3} deg at {} bpm), coherence {:.3}{}",
            e.shift_seconds,
            seconds_to_degrees(e.shift_seconds, a.ref_bpm)?,
            a.ref_bpm,
            e.quality,
            if e.low_quality { " (low quality)" } else { "" }
        );
    }
    Ok(Region::ALL
        .into_iter()
        .map(|r| Manifest::new(InputKind::Signal, path(r)))
        .collect())
}
