//! Plain-text formats: timestamped signals, beat annotations, frame
//! timestamp lists, camera configurations and reports.
//!
//! All formats are UTF-8 with LF line endings and `.` as the decimal point.
//! Lines starting with `#` and blank lines are skipped. Errors name the
//! first offending line, counted from 1.

mod camera;
mod manifest;
mod report;
mod text;

pub use camera::{format_camera_config, parse_camera_config, read_camera_config, CameraConfig};
pub use manifest::{Input, InputKind, Manifest};
pub use report::{
    format_boxplot_csv, format_diff_matrix_csv, format_key_values, format_spectrum_csv,
    format_track_csv, write_text,
};
pub use text::{
    format_beats, format_frame_timestamps, format_timestamped_signal, parse_beats,
    parse_frame_timestamps, parse_timestamped_signal, read_beats, read_frame_timestamps,
    read_timestamped_signal, write_beats, write_frame_timestamps, write_timestamped_signal,
    SIGNAL_HEADER,
};

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("no data lines")]
    Empty,
    #[error("{0}")]
    Invalid(String),
}

impl FormatError {
    pub(crate) fn at(line: usize, message: impl Into<String>) -> Self {
        FormatError::Line {
            line,
            message: message.into(),
        }
    }

    /// Attaches a path to errors that lack one.
    pub fn in_file(self, path: &std::path::Path) -> Self {
        match self {
            FormatError::Io { .. } => self,
            other => FormatError::Invalid(format!("{}: {other}", path.display())),
        }
    }
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Data lines with their 1-based line numbers.
pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}
