use std::fmt::Write as _;
use std::path::Path;

use super::{data_lines, read_file, write_text, FormatError};
use crate::hr_window::BeatSeries;
use crate::scalar::Real;
use crate::signal::TimestampedSignal;

pub const SIGNAL_HEADER: &str = "t,value";

fn parse_number<T: Real>(line: usize, field: &str, what: &str) -> Result<T, FormatError> {
    let v: T = field
        .trim()
        .parse()
        .map_err(|_| FormatError::at(line, format!("`{field}` is not a valid {what}")))?;
    if !v.is_finite() {
        return Err(FormatError::at(
            line,
            format!("{what} `{field}` is not finite"),
        ));
    }
    Ok(v)
}

fn ensure_increasing<T: Real>(
    prev: Option<T>,
    t: T,
    line: usize,
    what: &str,
) -> Result<(), FormatError> {
    match prev {
        Some(p) if t <= p => Err(FormatError::at(
            line,
            format!("{what} {t} is not greater than the previous {p}"),
        )),
        _ => Ok(()),
    }
}

/// Parses the `t,value` signal format.
pub fn parse_timestamped_signal<T: Real>(text: &str) -> Result<TimestampedSignal<T>, FormatError> {
    let mut lines = data_lines(text);
    let (hline, header) = lines.next().ok_or(FormatError::Empty)?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols != ["t", "value"] {
        return Err(FormatError::at(
            hline,
            format!("expected header `{SIGNAL_HEADER}`, found `{header}`"),
        ));
    }
    let mut timestamps = Vec::new();
    let mut values = Vec::new();
    for (line, content) in lines {
        let mut fields = content.split(',');
        let (Some(t), Some(v), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(FormatError::at(line, "expected two comma-separated fields"));
        };
        let t: T = parse_number(line, t, "time")?;
        let v: T = parse_number(line, v, "value")?;
        ensure_increasing(timestamps.last().copied(), t, line, "timestamp")?;
        timestamps.push(t);
        values.push(v);
    }
    if timestamps.len() < 2 {
        return Err(FormatError::Invalid(format!(
            "signal needs at least 2 samples, found {}",
            timestamps.len()
        )));
    }
    TimestampedSignal::new(timestamps, values).map_err(|e| FormatError::Invalid(e.to_string()))
}

pub fn format_timestamped_signal<T: Real>(sig: &TimestampedSignal<T>) -> String {
    let mut out = String::with_capacity(sig.len() * 24);
    out.push_str(SIGNAL_HEADER);
    out.push('\n');
    for (t, v) in sig.timestamps().iter().zip(sig.values()) {
        let _ = writeln!(out, "{t},{v}");
    }
    out
}

pub fn read_timestamped_signal<T: Real>(path: &Path) -> Result<TimestampedSignal<T>, FormatError> {
    parse_timestamped_signal(&read_file(path)?).map_err(|e| e.in_file(path))
}

pub fn write_timestamped_signal<T: Real>(
    path: &Path,
    sig: &TimestampedSignal<T>,
) -> Result<(), FormatError> {
    write_text(path, &format_timestamped_signal(sig))
}

fn parse_increasing_column<T: Real>(text: &str, what: &str) -> Result<Vec<T>, FormatError> {
    let mut out: Vec<T> = Vec::new();
    for (line, content) in data_lines(text) {
        let v: T = parse_number(line, content, what)?;
        ensure_increasing(out.last().copied(), v, line, what)?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(FormatError::Empty);
    }
    Ok(out)
}

/// One beat per line: seconds, or sample indices divided by `sample_rate`.
pub fn parse_beats<T: Real>(
    text: &str,
    sample_rate: Option<T>,
) -> Result<BeatSeries<T>, FormatError> {
    if let Some(rate) = sample_rate {
        if !(rate > T::zero()) || !rate.is_finite() {
            return Err(FormatError::Invalid(format!(
                "sample rate must be positive, got {rate}"
            )));
        }
    }
    let raw = parse_increasing_column::<T>(text, "beat")?;
    let times = match sample_rate {
        Some(rate) => raw.into_iter().map(|i| i / rate).collect(),
        None => raw,
    };
    BeatSeries::new(times).map_err(|e| FormatError::Invalid(e.to_string()))
}

pub fn read_beats<T: Real>(
    path: &Path,
    sample_rate: Option<T>,
) -> Result<BeatSeries<T>, FormatError> {
    parse_beats(&read_file(path)?, sample_rate).map_err(|e| e.in_file(path))
}

/// Beat times in seconds, one per line.
pub fn format_beats<T: Real>(beats: &BeatSeries<T>) -> String {
    format_column(beats.beat_times())
}

pub fn write_beats<T: Real>(path: &Path, beats: &BeatSeries<T>) -> Result<(), FormatError> {
    write_text(path, &format_beats(beats))
}

/// One timestamp in seconds per line, strictly increasing.
pub fn parse_frame_timestamps<T: Real>(text: &str) -> Result<Vec<T>, FormatError> {
    parse_increasing_column(text, "timestamp")
}

pub fn read_frame_timestamps<T: Real>(path: &Path) -> Result<Vec<T>, FormatError> {
    parse_frame_timestamps(&read_file(path)?).map_err(|e| e.in_file(path))
}

pub fn format_frame_timestamps<T: Real>(ts: &[T]) -> String {
    format_column(ts)
}

pub fn write_frame_timestamps<T: Real>(path: &Path, ts: &[T]) -> Result<(), FormatError> {
    write_text(path, &format_frame_timestamps(ts))
}

fn format_column<T: Real>(xs: &[T]) -> String {
    let mut out = String::with_capacity(xs.len() * 20);
    for x in xs {
        let _ = writeln!(out, "{x}");
    }
    out
}
