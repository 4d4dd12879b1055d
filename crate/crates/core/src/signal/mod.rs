//! Signal representations, resampling, spectra and difference metrics.
//!
//! Two sampled-signal types are used throughout the crate:
//! [`TimestampedSignal`] carries an explicit (possibly irregular) time for
//! every sample, as produced by a camera with an unsteady frame rate, while
//! [`UniformSignal`] is the regularly sampled form consumed by spectra and
//! phase estimation.

mod compare;
mod metrics;
mod resample;
mod spectrum;

pub(crate) mod spectrum_internals {
    pub(crate) use super::spectrum::{bins_to_power, tapered_dft};
}

pub use compare::{compare_resamplers, ResamplerComparison};
pub use metrics::{amplitude_difference, raw_difference, DiffMetrics};
pub use resample::{
    resample_aware, resample_naive, resample_pair, synthesize_uniform_timestamps,
    DEFAULT_RESAMPLE_RATE, MAX_RESAMPLE_RATE,
};
pub use spectrum::{
    dominant_bin, dominant_frequency, power_spectrum, spectral_difference, PowerSpectrum, Taper,
    MIN_SPECTRUM_LEN,
};

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SignalError {
    #[error("signal needs at least {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("timestamps and values differ in length ({timestamps} vs {values})")]
    LengthMismatch { timestamps: usize, values: usize },
    #[error("timestamp {index} is not strictly greater than its predecessor")]
    NonIncreasing { index: usize },
    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },
    #[error("sample rate must be positive and finite")]
    InvalidRate,
    #[error("signals are on different grids: {0}")]
    GridMismatch(String),
    #[error("unknown taper `{0}` (expected `rectangular` or `hann`)")]
    UnknownTaper(String),
    #[error("invalid frequency band [{low}, {high}] Hz: {reason}")]
    InvalidBand {
        low: f64,
        high: f64,
        reason: &'static str,
    },
    #[error("no spectral bins inside [{low}, {high}] Hz")]
    EmptyBand { low: f64, high: f64 },
    #[error("reference signal has zero variance; relative difference is undefined")]
    FlatReference,
    #[error("signals do not overlap in time")]
    NoOverlap,
}

/// Intensity samples at explicit, strictly increasing times (seconds).
#[derive(Debug, Clone, PartialEq)]
pub struct TimestampedSignal<T> {
    timestamps: Vec<T>,
    values: Vec<T>,
}

impl<T: Real> TimestampedSignal<T> {
    pub fn new(timestamps: Vec<T>, values: Vec<T>) -> Result<Self, SignalError> {
        if timestamps.len() != values.len() {
            return Err(SignalError::LengthMismatch {
                timestamps: timestamps.len(),
                values: values.len(),
            });
        }
        if timestamps.len() < 2 {
            return Err(SignalError::TooShort {
                needed: 2,
                got: timestamps.len(),
            });
        }
        for (i, (t, v)) in timestamps.iter().zip(&values).enumerate() {
            if !t.is_finite() || !v.is_finite() {
                return Err(SignalError::NonFinite { index: i });
            }
        }
        if let Some(index) = first_non_increasing(&timestamps) {
            return Err(SignalError::NonIncreasing { index });
        }
        Ok(Self { timestamps, values })
    }

    /// Builds a signal by evaluating `f` at each timestamp.
    pub fn from_fn(timestamps: Vec<T>, f: impl Fn(T) -> T) -> Result<Self, SignalError> {
        let values = timestamps.iter().map(|&t| f(t)).collect();
        Self::new(timestamps, values)
    }

    pub fn timestamps(&self) -> &[T] {
        &self.timestamps
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn first_time(&self) -> T {
        self.timestamps[0]
    }

    pub fn last_time(&self) -> T {
        self.timestamps[self.timestamps.len() - 1]
    }

    pub fn into_parts(self) -> (Vec<T>, Vec<T>) {
        (self.timestamps, self.values)
    }
}

/// Index of the first timestamp that does not exceed its predecessor.
pub(crate) fn first_non_increasing<T: Real>(ts: &[T]) -> Option<usize> {
    ts.windows(2).position(|w| w[1] <= w[0]).map(|i| i + 1)
}

/// Regularly sampled signal: sample `k` sits at `start_time + k / sample_rate`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformSignal<T> {
    start_time: T,
    sample_rate: T,
    values: Vec<T>,
}

impl<T: Real> UniformSignal<T> {
    pub fn new(start_time: T, sample_rate: T, values: Vec<T>) -> Result<Self, SignalError> {
        if !(sample_rate > T::zero()) || !sample_rate.is_finite() {
            return Err(SignalError::InvalidRate);
        }
        if !start_time.is_finite() {
            return Err(SignalError::NonFinite { index: 0 });
        }
        if values.len() < 2 {
            return Err(SignalError::TooShort {
                needed: 2,
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(SignalError::NonFinite { index });
        }
        Ok(Self {
            start_time,
            sample_rate,
            values,
        })
    }

    /// Samples `f` at `n` points starting at `start_time`.
    pub fn from_fn(
        start_time: T,
        sample_rate: T,
        n: usize,
        f: impl Fn(T) -> T,
    ) -> Result<Self, SignalError> {
        let values = (0..n)
            .map(|k| f(start_time + T::from_count(k) / sample_rate))
            .collect();
        Self::new(start_time, sample_rate, values)
    }

    pub fn start_time(&self) -> T {
        self.start_time
    }

    pub fn sample_rate(&self) -> T {
        self.sample_rate
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time_at(&self, k: usize) -> T {
        self.start_time + T::from_count(k) / self.sample_rate
    }

    /// Time covered from the first sample to the last.
    pub fn span(&self) -> T {
        T::from_count(self.values.len() - 1) / self.sample_rate
    }

    pub fn timestamps(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.values.len()).map(move |k| self.time_at(k))
    }

    /// Copy of samples `range`, keeping absolute times.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Result<Self, SignalError> {
        let start = self.time_at(range.start);
        Self::new(start, self.sample_rate, self.values[range].to_vec())
    }

    pub fn to_timestamped(&self) -> TimestampedSignal<T> {
        TimestampedSignal {
            timestamps: self.timestamps().collect(),
            values: self.values.clone(),
        }
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }
}

/// Grids agree when rates match to a few ulps and lengths are equal.
pub(crate) fn check_same_grid<T: Real>(
    a: &UniformSignal<T>,
    b: &UniformSignal<T>,
) -> Result<(), SignalError> {
    let tol = T::epsilon() * T::lit(16.0) * a.sample_rate.abs();
    if (a.sample_rate - b.sample_rate).abs() > tol {
        return Err(SignalError::GridMismatch(format!(
            "rates {} Hz and {} Hz",
            a.sample_rate, b.sample_rate
        )));
    }
    if a.len() != b.len() {
        return Err(SignalError::GridMismatch(format!(
            "lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}
