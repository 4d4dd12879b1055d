use std::fmt::Write as _;
use std::path::Path;

use super::FormatError;
use crate::hr_window::{BoxGroup, BoxRow, DiffMatrix};
use crate::phase::TrackPoint;
use crate::scalar::Real;
use crate::signal::PowerSpectrum;

/// Writes `text`, creating parent directories as needed.
pub fn write_text(path: &Path, text: &str) -> Result<(), FormatError> {
    let io = |source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, text).map_err(io)
}

/// `key=value` lines.
pub fn format_key_values(pairs: &[(String, String)]) -> String {
    let mut out = String::new();
    for (k, v) in pairs {
        let _ = writeln!(out, "{k}={v}");
    }
    out
}

pub fn format_spectrum_csv<T: Real>(spec: &PowerSpectrum<T>) -> String {
    let mut out = String::from("frequency_hz,power\n");
    for (k, p) in spec.power().iter().enumerate() {
        let _ = writeln!(out, "{},{p}", spec.frequency(k));
    }
    out
}

pub fn format_track_csv<T: Real>(track: &[TrackPoint<T>]) -> String {
    let mut out = String::from("time_s,shift_s,shift_deg,dominant_freq_hz,coherence,low_quality\n");
    for p in track {
        let e = &p.estimate;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            p.time, e.shift_seconds, e.shift_degrees, e.dominant_freq, e.quality, e.low_quality
        );
    }
    out
}

/// Lower-triangular table of mean differences in percent: one row per
/// outer size, one column per inner size, `-` above the diagonal and
/// `n/a` for pairs without samples.
pub fn format_diff_matrix_csv<T: Real>(matrix: &DiffMatrix<T>, decimals: usize) -> String {
    let mut out = String::from("s1\\s2");
    for s2 in matrix.inner_sizes() {
        let _ = write!(out, ",{s2}");
    }
    out.push('\n');
    for &s1 in matrix.outer_sizes() {
        let _ = write!(out, "{s1}");
        for &s2 in matrix.inner_sizes() {
            if s2 >= s1 {
                out.push_str(",-");
            } else {
                match matrix.mean_d(s1, s2) {
                    Some(d) => {
                        let _ = write!(out, ",{:.*}", decimals, d.to_f64_lossy());
                    }
                    None => out.push_str(",n/a"),
                }
            }
        }
        out.push('\n');
    }
    out
}

pub fn format_boxplot_csv<T: Real>(rows: &[BoxRow<T>]) -> String {
    let mut out = String::from("outer_s,inner_s,gap_s,count,min,q1,median,q3,max\n");
    for row in rows {
        let (outer, inner, gap) = match row.group {
            BoxGroup::Pair { outer, inner } => (
                outer.to_string(),
                inner.to_string(),
                (outer - inner).to_string(),
            ),
            BoxGroup::Gap { gap } => (String::new(), String::new(), gap.to_string()),
        };
        let s = &row.stats;
        let _ = writeln!(
            out,
            "{outer},{inner},{gap},{},{},{},{},{},{}",
            s.count, s.min, s.q1, s.median, s.q3, s.max
        );
    }
    out
}
