//! Desk-scale evaluation of three confounds in camera-based pulse
//! measurement:
//!
//! * [`capture`] simulates a progressive-scan camera filming a uniformly
//!   modulated lamp, producing the brightness of four frame regions whose
//!   relative delay is the rolling-shutter artifact;
//! * [`phase`] measures that delay from the cross-spectrum at the pulse
//!   frequency and tracks it over time;
//! * [`signal`] resamples irregularly timed frames with and without their
//!   true timestamps and compares the results and their spectra;
//! * [`hr_window`] quantifies how much heart rate averaged over windows of
//!   different lengths disagrees, from annotated beat times;
//! * [`io`] reads and writes the plain-text formats.
//!
//! All numeric code is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`, which is what the command line uses.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capture;
pub mod hr_window;
pub mod io;
pub mod phase;
pub mod scalar;
pub mod signal;

pub use scalar::Real;

pub type TimestampedSignal = signal::TimestampedSignal<f64>;
pub type UniformSignal = signal::UniformSignal<f64>;
pub type PowerSpectrum = signal::PowerSpectrum<f64>;
pub type DiffMetrics = signal::DiffMetrics<f64>;
pub type Waveform = capture::Waveform<f64>;
pub type CameraModel = capture::CameraModel<f64>;
pub type Jitter = capture::Jitter<f64>;
pub type RegionSignals = capture::RegionSignals<f64>;
pub type PhaseEstimate = phase::PhaseEstimate<f64>;
pub type AxisShiftReport = phase::AxisShiftReport<f64>;
pub type BeatSeries = hr_window::BeatSeries<f64>;
pub type WindowSpec = hr_window::WindowSpec<f64>;
pub type DiffMatrix = hr_window::DiffMatrix<f64>;
pub type CameraConfig = io::CameraConfig<f64>;

/// Single-precision variants.
pub mod f32 {
    pub type TimestampedSignal = crate::signal::TimestampedSignal<f32>;
    pub type UniformSignal = crate::signal::UniformSignal<f32>;
    pub type PowerSpectrum = crate::signal::PowerSpectrum<f32>;
    pub type Waveform = crate::capture::Waveform<f32>;
    pub type CameraModel = crate::capture::CameraModel<f32>;
    pub type PhaseEstimate = crate::phase::PhaseEstimate<f32>;
    pub type BeatSeries = crate::hr_window::BeatSeries<f32>;
    pub type DiffMatrix = crate::hr_window::DiffMatrix<f32>;
}
