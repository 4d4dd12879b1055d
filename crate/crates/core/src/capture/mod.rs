//! Virtual progressive-scan camera looking at a spatially uniform light
//! source.
//!
//! A frame's nominal timestamp is when the first scan line is exposed; line
//! `i` of `L` follows `readout_time * i / (L - 1)` seconds later. Because the
//! source is uniform, a region's mean intensity is the waveform averaged
//! over that region's scan-offset range, which [`capture_region_signals`]
//! evaluates on a small sub-grid instead of per pixel.

mod layout;
mod sensor;
mod timestamps;
mod waveform;

pub use layout::{Rect, Region, RegionLayout};
pub use sensor::{
    capture_frame_signal, capture_rect_signal, capture_region_signals, capture_region_signals_with,
    scan_offset, RegionSignals, DEFAULT_SUBGRID,
};
pub use timestamps::generate_frame_timestamps;
pub use waveform::{ppg_like, sine, sum_of_sines, Waveform};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;
use crate::signal::SignalError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CaptureError {
    #[error("nominal frame rate must be positive and finite")]
    InvalidFps,
    #[error("readout time {readout} s outside [0, {interval}] s")]
    InvalidReadout { readout: f64, interval: f64 },
    #[error("resolution {width}x{height} is below the 4x4 minimum")]
    InvalidResolution { width: usize, height: usize },
    #[error("jitter {magnitude} s must stay below half the frame interval ({half} s)")]
    JitterTooLarge { magnitude: f64, half: f64 },
    #[error("jitter parameter must be non-negative and finite")]
    InvalidJitter,
    #[error("explicit frame timestamps invalid: {0}")]
    InvalidTimestamps(String),
    #[error("duration {duration} s must exceed two frame intervals ({min} s)")]
    DurationTooShort { duration: f64, min: f64 },
    #[error("pixel ({row}, {col}) outside {width}x{height} frame")]
    PixelOutOfRange {
        row: usize,
        col: usize,
        width: usize,
        height: usize,
    },
    #[error("{region} region {rect} does not fit in a {width}x{height} frame")]
    RegionOutOfFrame {
        region: Region,
        rect: Rect,
        width: usize,
        height: usize,
    },
    #[error("waveform queried at {t} s outside its domain [{start}, {end}] s")]
    OutOfDomain { t: f64, start: f64, end: f64 },
    #[error("unknown {what} `{value}`")]
    UnknownName { what: &'static str, value: String },
    #[error("sub-grid must have at least one offset")]
    EmptySubgrid,
    #[error(transparent)]
    Signal(#[from] SignalError),
}

/// Direction of the progressive scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ScanAxis {
    /// Rows read top to bottom.
    #[default]
    Vertical,
    /// Columns read left to right.
    Horizontal,
}

impl ScanAxis {
    /// The axis after rotating the sensor by 90 degrees.
    pub fn rotated(self) -> Self {
        match self {
            ScanAxis::Vertical => ScanAxis::Horizontal,
            ScanAxis::Horizontal => ScanAxis::Vertical,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ScanAxis::Vertical => "vertical",
            ScanAxis::Horizontal => "horizontal",
        }
    }
}

impl fmt::Display for ScanAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScanAxis {
    type Err = CaptureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "vertical" | "rows" => Ok(ScanAxis::Vertical),
            "horizontal" | "columns" => Ok(ScanAxis::Horizontal),
            other => Err(CaptureError::UnknownName {
                what: "scan axis",
                value: other.to_string(),
            }),
        }
    }
}

/// Frame timing irregularity.
///
/// `Uniform` displaces every frame time by an independent draw from
/// `[-half_width, half_width]`. `Gaussian` displaces frame times so that
/// the frame *intervals* deviate with standard deviation `sigma` (each
/// displacement has deviation `sigma / sqrt(2)`); draws are truncated to
/// less than half a frame interval. `Explicit` replays recorded timestamps.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Jitter<T> {
    #[default]
    None,
    Uniform {
        half_width: T,
    },
    Gaussian {
        sigma: T,
    },
    Explicit(Vec<T>),
}

impl<T: Real> Jitter<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            Jitter::None => "none",
            Jitter::Uniform { .. } => "uniform",
            Jitter::Gaussian { .. } => "gaussian",
            Jitter::Explicit(_) => "explicit",
        }
    }

    /// Magnitude parameter, zero for `None` and `Explicit`.
    pub fn magnitude(&self) -> T {
        match self {
            Jitter::Uniform { half_width } => *half_width,
            Jitter::Gaussian { sigma } => *sigma,
            _ => T::zero(),
        }
    }
}

/// Progressive-scan camera.
#[derive(Debug, Clone, PartialEq)]
pub struct CameraModel<T> {
    nominal_fps: T,
    jitter: Jitter<T>,
    readout_time: T,
    scan_axis: ScanAxis,
    width: usize,
    height: usize,
}

impl<T: Real> CameraModel<T> {
    /// Camera with no jitter, vertical scan and a readout spanning the full
    /// frame interval.
    pub fn new(nominal_fps: T, width: usize, height: usize) -> Result<Self, CaptureError> {
        if !(nominal_fps > T::zero()) || !nominal_fps.is_finite() {
            return Err(CaptureError::InvalidFps);
        }
        if width < 4 || height < 4 {
            return Err(CaptureError::InvalidResolution { width, height });
        }
        Ok(Self {
            nominal_fps,
            jitter: Jitter::None,
            readout_time: T::one() / nominal_fps,
            scan_axis: ScanAxis::Vertical,
            width,
            height,
        })
    }

    pub fn with_readout_time(mut self, readout_time: T) -> Result<Self, CaptureError> {
        let interval = self.frame_interval();
        // allow the rounding of 1/fps itself
        let slack = interval * T::epsilon() * T::lit(4.0);
        if !(readout_time >= T::zero()) || readout_time > interval + slack {
            return Err(CaptureError::InvalidReadout {
                readout: readout_time.to_f64_lossy(),
                interval: interval.to_f64_lossy(),
            });
        }
        self.readout_time = readout_time;
        Ok(self)
    }

    pub fn with_scan_axis(mut self, axis: ScanAxis) -> Self {
        self.scan_axis = axis;
        self
    }

    pub fn with_jitter(mut self, jitter: Jitter<T>) -> Result<Self, CaptureError> {
        let half = self.frame_interval() / T::lit(2.0);
        match &jitter {
            Jitter::Uniform { half_width: m } | Jitter::Gaussian { sigma: m } => {
                if !(*m >= T::zero()) || !m.is_finite() {
                    return Err(CaptureError::InvalidJitter);
                }
                if *m >= half {
                    return Err(CaptureError::JitterTooLarge {
                        magnitude: m.to_f64_lossy(),
                        half: half.to_f64_lossy(),
                    });
                }
            }
            Jitter::Explicit(ts) => {
                if ts.len() < 2 {
                    return Err(CaptureError::InvalidTimestamps(
                        "need at least two timestamps".into(),
                    ));
                }
                if let Some(i) = ts.iter().position(|t| !t.is_finite()) {
                    return Err(CaptureError::InvalidTimestamps(format!(
                        "entry {i} is not finite"
                    )));
                }
                if let Some(i) = crate::signal::first_non_increasing(ts) {
                    return Err(CaptureError::InvalidTimestamps(format!(
                        "entry {i} does not increase"
                    )));
                }
            }
            Jitter::None => {}
        }
        self.jitter = jitter;
        Ok(self)
    }

    pub fn nominal_fps(&self) -> T {
        self.nominal_fps
    }

    pub fn frame_interval(&self) -> T {
        T::one() / self.nominal_fps
    }

    pub fn jitter(&self) -> &Jitter<T> {
        &self.jitter
    }

    pub fn readout_time(&self) -> T {
        self.readout_time
    }

    pub fn scan_axis(&self) -> ScanAxis {
        self.scan_axis
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Number of scan lines along the scan axis.
    pub fn scan_lines(&self) -> usize {
        match self.scan_axis {
            ScanAxis::Vertical => self.height,
            ScanAxis::Horizontal => self.width,
        }
    }
}
