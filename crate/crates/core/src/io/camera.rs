use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{data_lines, read_file, read_frame_timestamps, FormatError};
use crate::capture::{CameraModel, Jitter, Rect, Region, RegionLayout, ScanAxis, DEFAULT_SUBGRID};
use crate::scalar::Real;

/// Camera, region layout and capture resolution read from a key-value file.
///
/// ```text
/// fps = 30
/// width = 640
/// height = 480
/// readout_time = 0.0333      # default: one frame interval
/// scan_axis = vertical       # or horizontal
/// jitter_kind = uniform      # none | uniform | gaussian | explicit
/// jitter_param = 0.005       # seconds; a timestamp file for explicit
/// region_top = 0,0,640,240   # x,y,width,height; default: frame halves
/// subgrid = 32
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct CameraConfig<T> {
    pub model: CameraModel<T>,
    pub layout: RegionLayout,
    pub subgrid: usize,
    /// Source of explicit timestamps, as written in the file.
    pub timestamps_file: Option<PathBuf>,
}

const KEYS: [&str; 12] = [
    "fps",
    "width",
    "height",
    "readout_time",
    "scan_axis",
    "jitter_kind",
    "jitter_param",
    "region_top",
    "region_bottom",
    "region_left",
    "region_right",
    "subgrid",
];

/// Parses a camera configuration. Relative explicit-timestamp paths are
/// resolved against `base_dir`.
pub fn parse_camera_config<T: Real>(
    text: &str,
    base_dir: Option<&Path>,
) -> Result<CameraConfig<T>, FormatError> {
    let mut entries: Vec<(usize, &str, &str)> = Vec::new();
    for (line, content) in data_lines(text) {
        let content = content.split(" #").next().unwrap_or(content).trim();
        let Some((key, value)) = content.split_once('=') else {
            return Err(FormatError::at(line, "expected `key = value`"));
        };
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(FormatError::at(line, format!("unknown key `{key}`")));
        }
        if entries.iter().any(|(_, k, _)| *k == key) {
            return Err(FormatError::at(line, format!("duplicate key `{key}`")));
        }
        entries.push((line, key, value.trim()));
    }
    let get = |key: &str| {
        entries
            .iter()
            .find(|(_, k, _)| *k == key)
            .map(|(l, _, v)| (*l, *v))
    };
    let number = |key: &str| -> Result<Option<(usize, T)>, FormatError> {
        match get(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<T>()
                .ok()
                .filter(|x| x.is_finite())
                .map(|x| Some((line, x)))
                .ok_or_else(|| FormatError::at(line, format!("`{v}` is not a number for `{key}`"))),
        }
    };
    let count = |key: &str| -> Result<Option<(usize, usize)>, FormatError> {
        match get(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<usize>()
                .map(|x| Some((line, x)))
                .map_err(|_| FormatError::at(line, format!("`{v}` is not a count for `{key}`"))),
        }
    };
    let required = |key: &str| FormatError::Invalid(format!("missing required key `{key}`"));

    let (fps_line, fps) = number("fps")?.ok_or_else(|| required("fps"))?;
    let (_, width) = count("width")?.ok_or_else(|| required("width"))?;
    let (wh_line, height) = count("height")?.ok_or_else(|| required("height"))?;
    let mut model = CameraModel::new(fps, width, height).map_err(|e| {
        let line = if fps > T::zero() { wh_line } else { fps_line };
        FormatError::at(line, e.to_string())
    })?;
    if let Some((line, readout)) = number("readout_time")? {
        model = model
            .with_readout_time(readout)
            .map_err(|e| FormatError::at(line, e.to_string()))?;
    }
    if let Some((line, axis)) = get("scan_axis") {
        let axis: ScanAxis = axis
            .parse()
            .map_err(|e: crate::capture::CaptureError| FormatError::at(line, e.to_string()))?;
        model = model.with_scan_axis(axis);
    }

    let mut timestamps_file = None;
    let kind = get("jitter_kind");
    let param = get("jitter_param");
    let jitter = match kind.map(|(l, v)| (l, v.to_ascii_lowercase())) {
        None => Jitter::None,
        Some((_, k)) if k == "none" => Jitter::None,
        Some((line, k)) => {
            let (pline, pval) = param.ok_or_else(|| {
                FormatError::at(line, format!("jitter `{k}` needs `jitter_param`"))
            })?;
            match k.as_str() {
                "uniform" | "gaussian" => {
                    let m: T = pval
                        .parse()
                        .map_err(|_| FormatError::at(pline, format!("`{pval}` is not a number")))?;
                    if k == "uniform" {
                        Jitter::Uniform { half_width: m }
                    } else {
                        Jitter::Gaussian { sigma: m }
                    }
                }
                "explicit" => {
                    let rel = PathBuf::from(pval);
                    let path = match base_dir {
                        Some(dir) if rel.is_relative() => dir.join(&rel),
                        _ => rel.clone(),
                    };
                    timestamps_file = Some(rel);
                    Jitter::Explicit(read_frame_timestamps(&path)?)
                }
                other => {
                    return Err(FormatError::at(
                        line,
                        format!("unknown jitter kind `{other}`"),
                    ))
                }
            }
        }
    };
    let jitter_line = kind.map(|(l, _)| l).unwrap_or(0);
    model = model
        .with_jitter(jitter)
        .map_err(|e| FormatError::at(jitter_line, e.to_string()))?;

    let mut layout = RegionLayout::halves(width, height);
    for region in Region::ALL {
        if let Some((line, v)) = get(&format!("region_{region}")) {
            let rect: Rect = v.parse().map_err(|e: String| FormatError::at(line, e))?;
            if !rect.fits(width, height) {
                return Err(FormatError::at(
                    line,
                    format!("{region} region {rect} does not fit the frame"),
                ));
            }
            layout.set(region, rect);
        }
    }
    let subgrid = match count("subgrid")? {
        None => DEFAULT_SUBGRID,
        Some((line, 0)) => return Err(FormatError::at(line, "subgrid must be at least 1")),
        Some((_, n)) => n,
    };
    Ok(CameraConfig {
        model,
        layout,
        subgrid,
        timestamps_file,
    })
}

pub fn read_camera_config<T: Real>(path: &Path) -> Result<CameraConfig<T>, FormatError> {
    let text = read_file(path)?;
    parse_camera_config(&text, path.parent()).map_err(|e| e.in_file(path))
}

pub fn format_camera_config<T: Real>(cfg: &CameraConfig<T>) -> Result<String, FormatError> {
    let m = &cfg.model;
    let mut out = String::new();
    let _ = writeln!(out, "fps = {}", m.nominal_fps());
    let _ = writeln!(out, "width = {}", m.width());
    let _ = writeln!(out, "height = {}", m.height());
    let _ = writeln!(out, "readout_time = {}", m.readout_time());
    let _ = writeln!(out, "scan_axis = {}", m.scan_axis());
    let _ = writeln!(out, "jitter_kind = {}", m.jitter().kind());
    match m.jitter() {
        Jitter::None => {}
        Jitter::Uniform { half_width: v } | Jitter::Gaussian { sigma: v } => {
            let _ = writeln!(out, "jitter_param = {v}");
        }
        Jitter::Explicit(_) => {
            let path = cfg.timestamps_file.as_ref().ok_or_else(|| {
                FormatError::Invalid("explicit jitter needs the timestamp file path".into())
            })?;
            let _ = writeln!(out, "jitter_param = {}", path.display());
        }
    }
    for region in Region::ALL {
        let _ = writeln!(out, "region_{region} = {}", cfg.layout.get(region));
    }
    let _ = writeln!(out, "subgrid = {}", cfg.subgrid);
    Ok(out)
}
