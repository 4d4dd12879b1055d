use serde::Serialize;

use super::{
    amplitude_difference, dominant_bin, power_spectrum, resample_aware, resample_naive,
    spectral_difference, DiffMetrics, PowerSpectrum, SignalError, Taper, TimestampedSignal,
    UniformSignal,
};
use crate::scalar::Real;

/// Timestamp-aware ("good") against timestamp-ignorant ("bad") resampling
/// of one capture.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResamplerComparison<T> {
    #[serde(skip)]
    pub good: UniformSignal<T>,
    #[serde(skip)]
    pub bad: UniformSignal<T>,
    #[serde(skip)]
    pub good_spectrum: PowerSpectrum<T>,
    #[serde(skip)]
    pub bad_spectrum: PowerSpectrum<T>,
    pub amplitude: DiffMetrics<T>,
    pub spectral: DiffMetrics<T>,
    pub good_peak_hz: T,
    pub bad_peak_hz: T,
}

impl<T: Real> ResamplerComparison<T> {
    pub fn same_peak(&self) -> bool {
        self.good_peak_hz == self.bad_peak_hz
    }
}

/// Resamples `sig` both ways at `rate` and compares signals, spectra and
/// the strongest bin in `band`.
pub fn compare_resamplers<T: Real>(
    sig: &TimestampedSignal<T>,
    rate: T,
    taper: Taper,
    band: (T, T),
) -> Result<ResamplerComparison<T>, SignalError> {
    let good = resample_aware(sig, rate)?;
    let bad = resample_naive(sig, rate)?;
    // both grids start at the first frame and end by the last one
    let n = good.len().min(bad.len());
    let good = good.slice(0..n)?;
    let bad = bad.slice(0..n)?;
    let good_spectrum = power_spectrum(&good, taper)?;
    let bad_spectrum = power_spectrum(&bad, taper)?;
    let amplitude = amplitude_difference(&good, &bad)?;
    let spectral = spectral_difference(&good_spectrum, &bad_spectrum)?;
    let good_peak_hz = good_spectrum.frequency(dominant_bin(&good_spectrum, band)?);
    let bad_peak_hz = bad_spectrum.frequency(dominant_bin(&bad_spectrum, band)?);
    Ok(ResamplerComparison {
        good,
        bad,
        good_spectrum,
        bad_spectrum,
        amplitude,
        spectral,
        good_peak_hz,
        bad_peak_hz,
    })
}
