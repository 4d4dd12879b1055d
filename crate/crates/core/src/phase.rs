//! Time shift between two pulse signals, read from the phase of their
//! cross-spectrum at the dominant pulse frequency.
//!
//! Sign convention: a positive shift means the second signal lags the
//! first. Shifts are wrapped into `(-T/2, T/2]` with `T` the pulse period.

use rustfft::num_complex::Complex;
use serde::Serialize;
use thiserror::Error;

use crate::capture::RegionSignals;
use crate::scalar::{median, Real};
use crate::signal::spectrum_internals::{bins_to_power, tapered_dft};
use crate::signal::{
    check_same_grid, dominant_bin, resample_aware, PowerSpectrum, SignalError, Taper, UniformSignal,
};

/// Coherence below this marks an estimate as unreliable.
pub const COHERENCE_FLAG: f64 = 0.5;
/// Peak in-band power below this fraction of the total means no pulse.
pub const MIN_PEAK_FRACTION: f64 = 1e-12;
/// Minimum record length in periods of the band's low edge.
pub const MIN_PERIODS: f64 = 4.0;
/// Bins on each side of the peak pooled for the coherence estimate.
const COHERENCE_HALF_WIDTH: usize = 2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhaseError {
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error("record of {got} s is shorter than {needed} s (four periods of the band's low edge)")]
    TooFewPeriods { needed: f64, got: f64 },
    #[error("no pulse in band: peak power is below 1e-12 of total power")]
    NoPulse,
    #[error("heart rate must be positive and finite, got {0} bpm")]
    InvalidHeartRate(f64),
    #[error("track step must be positive, got {0} s")]
    InvalidStep(f64),
    #[error("window of {window} s is longer than the {available} s signal")]
    WindowTooLong { window: f64, available: f64 },
    #[error("region signals do not share frame timestamps")]
    RegionsMisaligned,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseEstimate<T> {
    /// Positive when the second signal lags the first.
    pub shift_seconds: T,
    pub dominant_freq: T,
    /// `shift_seconds * dominant_freq * 360`.
    pub shift_degrees: T,
    /// Magnitude-squared coherence around the dominant frequency.
    pub quality: T,
    /// Set when `quality` is below [`COHERENCE_FLAG`]; such estimates are kept.
    pub low_quality: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrackPoint<T> {
    /// Centre of the analysis window, seconds.
    pub time: T,
    pub estimate: PhaseEstimate<T>,
}

pub fn seconds_to_degrees<T: Real>(shift: T, heart_rate_bpm: T) -> Result<T, PhaseError> {
    check_heart_rate(heart_rate_bpm)?;
    Ok(shift * (heart_rate_bpm / T::lit(60.0)) * T::lit(360.0))
}

pub fn degrees_to_seconds<T: Real>(angle: T, heart_rate_bpm: T) -> Result<T, PhaseError> {
    check_heart_rate(heart_rate_bpm)?;
    Ok(angle / ((heart_rate_bpm / T::lit(60.0)) * T::lit(360.0)))
}

fn check_heart_rate<T: Real>(bpm: T) -> Result<(), PhaseError> {
    if bpm > T::zero() && bpm.is_finite() {
        Ok(())
    } else {
        Err(PhaseError::InvalidHeartRate(bpm.to_f64_lossy()))
    }
}

fn check_band<T: Real>(band: (T, T)) -> Result<(), PhaseError> {
    if band.0 > T::zero() && band.0 < band.1 && band.1.is_finite() {
        Ok(())
    } else {
        Err(SignalError::InvalidBand {
            low: band.0.to_f64_lossy(),
            high: band.1.to_f64_lossy(),
            reason: "phase estimation needs 0 < low < high",
        }
        .into())
    }
}

fn check_periods<T: Real>(duration: T, band_low: T) -> Result<(), PhaseError> {
    let needed = T::lit(MIN_PERIODS) / band_low;
    // tolerate rounding of a duration computed from a sample count
    if duration < needed * (T::one() - T::lit(1e-9)) {
        return Err(PhaseError::TooFewPeriods {
            needed: needed.to_f64_lossy(),
            got: duration.to_f64_lossy(),
        });
    }
    Ok(())
}

/// Offset of a single tone from bin `k`, in bins, from the magnitude ratio of
/// the larger neighbour. Exact for one tone under either taper.
fn bin_offset<T: Real>(power: &[T], k: usize, taper: Taper) -> T {
    let mag = |i: usize| power.get(i).map_or(T::zero(), |p| p.sqrt());
    let left = if k > 0 { mag(k - 1) } else { T::zero() };
    let right = mag(k + 1);
    let (side, alpha) = if right >= left {
        (T::one(), right / mag(k))
    } else {
        (-T::one(), left / mag(k))
    };
    let delta = match taper {
        Taper::Rectangular => alpha / (T::one() + alpha),
        Taper::Hann => (T::lit(2.0) * alpha - T::one()) / (alpha + T::one()),
    };
    side * delta.max(T::zero()).min(T::lit(0.5))
}

/// Shift of `b` relative to `a` at their common dominant frequency in `band`,
/// using a Hann taper.
pub fn estimate_phase_shift<T: Real>(
    a: &UniformSignal<T>,
    b: &UniformSignal<T>,
    band: (T, T),
) -> Result<PhaseEstimate<T>, PhaseError> {
    estimate_phase_shift_with(a, b, band, Taper::Hann)
}

pub fn estimate_phase_shift_with<T: Real>(
    a: &UniformSignal<T>,
    b: &UniformSignal<T>,
    band: (T, T),
    taper: Taper,
) -> Result<PhaseEstimate<T>, PhaseError> {
    check_same_grid(a, b)?;
    check_band(band)?;
    let n = a.len();
    check_periods(T::from_count(n) / a.sample_rate(), band.0)?;

    let (fa, w2) = tapered_dft(a.values(), taper);
    let (fb, _) = tapered_dft(b.values(), taper);
    let pa = bins_to_power(&fa, n, w2);
    let pb = bins_to_power(&fb, n, w2);
    let half = T::lit(0.5);
    let averaged: Vec<T> = pa.iter().zip(&pb).map(|(x, y)| (*x + *y) * half).collect();
    let total = averaged.iter().copied().fold(T::zero(), |s, p| s + p);
    let spec = PowerSpectrum::new(a.sample_rate() / T::from_count(n), averaged, taper)?;
    let k = dominant_bin(&spec, band)?;
    let peak = spec.power()[k];
    if !(total > T::zero()) || peak < T::lit(MIN_PEAK_FRACTION) * total || k == 0 {
        return Err(PhaseError::NoPulse);
    }
    let cross_mag: Vec<T> = fa
        .iter()
        .zip(&fb)
        .map(|(x, y)| (*x * y.conj()).norm())
        .collect();
    let freq = (T::from_count(k) + bin_offset(&cross_mag, k, taper)) * spec.frequency_step();

    let cross = fa[k] * fb[k].conj();
    let mut angle = cross.im.atan2(cross.re);
    if angle <= -T::PI() {
        angle = angle + T::TAU();
    }
    let shift_seconds = angle / (T::TAU() * freq);

    let lo = k.saturating_sub(COHERENCE_HALF_WIDTH).max(1);
    let hi = (k + COHERENCE_HALF_WIDTH).min(fa.len() - 1);
    let mut sxy = Complex::new(T::zero(), T::zero());
    let mut sxx = T::zero();
    let mut syy = T::zero();
    for i in lo..=hi {
        sxy = sxy + fa[i] * fb[i].conj();
        sxx = sxx + fa[i].norm_sqr();
        syy = syy + fb[i].norm_sqr();
    }
    let quality = if sxx > T::zero() && syy > T::zero() {
        (sxy.norm_sqr() / (sxx * syy)).min(T::one())
    } else {
        T::zero()
    };

    Ok(PhaseEstimate {
        shift_seconds,
        dominant_freq: freq,
        shift_degrees: shift_seconds * freq * T::lit(360.0),
        quality,
        low_quality: quality < T::lit(COHERENCE_FLAG),
    })
}

/// Phase estimates over sliding windows of `window` seconds advanced by
/// `step` seconds, each stamped with its window centre.
pub fn track_phase_shift<T: Real>(
    a: &UniformSignal<T>,
    b: &UniformSignal<T>,
    window: T,
    step: T,
    band: (T, T),
) -> Result<Vec<TrackPoint<T>>, PhaseError> {
    track_phase_shift_with(a, b, window, step, band, Taper::Hann)
}

pub fn track_phase_shift_with<T: Real>(
    a: &UniformSignal<T>,
    b: &UniformSignal<T>,
    window: T,
    step: T,
    band: (T, T),
    taper: Taper,
) -> Result<Vec<TrackPoint<T>>, PhaseError> {
    check_same_grid(a, b)?;
    check_band(band)?;
    if !(step > T::zero()) || !step.is_finite() {
        return Err(PhaseError::InvalidStep(step.to_f64_lossy()));
    }
    check_periods(window, band.0)?;
    let rate = a.sample_rate();
    let n = a.len();
    let win = (window * rate).round().to_usize().unwrap_or(usize::MAX);
    if win > n || win < 2 {
        return Err(PhaseError::WindowTooLong {
            window: window.to_f64_lossy(),
            available: (T::from_count(n) / rate).to_f64_lossy(),
        });
    }
    let hop = (step * rate).round().to_usize().unwrap_or(1).max(1);
    let mut out = Vec::new();
    let mut start = 0;
    while start + win <= n {
        let wa = a.slice(start..start + win)?;
        let wb = b.slice(start..start + win)?;
        let estimate = estimate_phase_shift_with(&wa, &wb, band, taper)?;
        let centre = a.time_at(start) + T::from_count(win - 1) / (T::lit(2.0) * rate);
        out.push(TrackPoint {
            time: centre,
            estimate,
        });
        start += hop;
    }
    Ok(out)
}

/// Median shift over a track, in seconds.
pub fn median_shift<T: Real>(track: &[TrackPoint<T>]) -> Option<T> {
    let shifts: Vec<T> = track.iter().map(|p| p.estimate.shift_seconds).collect();
    median(&shifts)
}

/// Scan delays along both frame axes.
///
/// A region read out later holds a later view of the scene under the same
/// frame timestamp, so its series leads the earlier region. Each field is the
/// lag of the earlier region (top, left) behind the later one (bottom, right),
/// which is positive for a top-to-bottom or left-to-right readout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisShiftReport<T> {
    pub vertical: PhaseEstimate<T>,
    pub horizontal: PhaseEstimate<T>,
}

impl<T: Real> AxisShiftReport<T> {
    /// Flat `key = value` pairs; degrees are given at `ref_bpm`.
    pub fn key_values(&self, ref_bpm: T) -> Result<Vec<(String, String)>, PhaseError> {
        let mut out = vec![("ref_bpm".to_string(), ref_bpm.to_string())];
        for (axis, e) in [
            ("vertical", &self.vertical),
            ("horizontal", &self.horizontal),
        ] {
            out.push((format!("{axis}.shift_seconds"), e.shift_seconds.to_string()));
            out.push((
                format!("{axis}.shift_degrees_at_ref_bpm"),
                seconds_to_degrees(e.shift_seconds, ref_bpm)?.to_string(),
            ));
            out.push((
                format!("{axis}.dominant_freq_hz"),
                e.dominant_freq.to_string(),
            ));
            out.push((format!("{axis}.coherence"), e.quality.to_string()));
            out.push((format!("{axis}.low_quality"), e.low_quality.to_string()));
        }
        Ok(out)
    }
}

/// Resamples the four region signals and estimates the shift along each axis.
pub fn axis_shift_report<T: Real>(
    regions: &RegionSignals<T>,
    rate: T,
    band: (T, T),
) -> Result<AxisShiftReport<T>, PhaseError> {
    axis_shift_report_with(regions, rate, band, Taper::Hann)
}

pub fn axis_shift_report_with<T: Real>(
    regions: &RegionSignals<T>,
    rate: T,
    band: (T, T),
    taper: Taper,
) -> Result<AxisShiftReport<T>, PhaseError> {
    let ts = regions.top.timestamps();
    if regions.iter().any(|(_, s)| s.timestamps() != ts) {
        return Err(PhaseError::RegionsMisaligned);
    }
    let top = resample_aware(&regions.top, rate)?;
    let bottom = resample_aware(&regions.bottom, rate)?;
    let left = resample_aware(&regions.left, rate)?;
    let right = resample_aware(&regions.right, rate)?;
    Ok(AxisShiftReport {
        vertical: estimate_phase_shift_with(&bottom, &top, band, taper)?,
        horizontal: estimate_phase_shift_with(&right, &left, band, taper)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const RATE: f64 = 240.0;
    const BAND: (f64, f64) = (0.7, 3.0);

    fn tone(freq: f64, delay: f64, seconds: f64) -> UniformSignal<f64> {
        let n = (seconds * RATE) as usize;
        UniformSignal::from_fn(0.0, RATE, n, |t| (2.0 * PI * freq * (t - delay)).sin()).unwrap()
    }

    #[test]
    fn conversions_match_reported_figures() {
        assert!((seconds_to_degrees(0.02_f64, 60.0).unwrap() - 7.2).abs() < 1e-12);
        assert!((seconds_to_degrees(0.02_f64, 80.0).unwrap() - 9.6).abs() < 1e-12);
        let d = seconds_to_degrees(0.067_f64, 1.43 * 60.0).unwrap();
        assert!((d - 34.0).abs() < 0.5, "{d}");
        assert_eq!(seconds_to_degrees(0.0_f64, 123.0).unwrap(), 0.0);
        assert!((degrees_to_seconds(7.2_f64, 60.0).unwrap() - 0.02).abs() < 1e-15);
        assert_eq!(degrees_to_seconds(360.0_f64, 60.0).unwrap(), 1.0);
        assert!(matches!(
            seconds_to_degrees(0.1_f64, 0.0),
            Err(PhaseError::InvalidHeartRate(_))
        ));
        assert!(degrees_to_seconds(1.0_f64, -60.0).is_err());
    }

    #[test]
    fn self_shift_is_zero() {
        let a = tone(1.2, 0.0, 10.0);
        let e = estimate_phase_shift(&a, &a, BAND).unwrap();
        assert!(e.shift_seconds.abs() < 1e-9);
        assert!((e.dominant_freq - 1.2).abs() < 1e-4);
        assert!(e.quality > 0.999);
        assert!(!e.low_quality);
    }

    #[test]
    fn recovers_constructed_delay() {
        let a = tone(1.0, 0.0, 20.0);
        let b = tone(1.0, 0.02, 20.0);
        let e = estimate_phase_shift(&a, &b, BAND).unwrap();
        assert!((e.shift_seconds - 0.02).abs() < 1.0 / RATE);
        assert!((e.shift_degrees - e.shift_seconds * e.dominant_freq * 360.0).abs() < 1e-12);
        let r = estimate_phase_shift(&b, &a, BAND).unwrap();
        assert!((r.shift_seconds + e.shift_seconds).abs() < 1.0 / RATE);
    }

    #[test]
    fn shift_wraps_into_half_period() {
        // 0.7 of a period later is the same as 0.3 of a period earlier
        let a = tone(1.0, 0.0, 20.0);
        let b = tone(1.0, 0.7, 20.0);
        let e = estimate_phase_shift(&a, &b, BAND).unwrap();
        assert!(
            (e.shift_seconds + 0.3).abs() < 1.0 / RATE,
            "{}",
            e.shift_seconds
        );
    }

    #[test]
    fn unpulsed_and_short_inputs() {
        let flat = UniformSignal::new(0.0, RATE, vec![1.0; 2400]).unwrap();
        assert_eq!(
            estimate_phase_shift(&flat, &flat, BAND),
            Err(PhaseError::NoPulse)
        );
        let short = tone(1.2, 0.0, 5.0);
        assert!(matches!(
            estimate_phase_shift(&short, &short, BAND),
            Err(PhaseError::TooFewPeriods { .. })
        ));
        let other = tone(1.2, 0.0, 9.0);
        let a = tone(1.2, 0.0, 10.0);
        assert!(matches!(
            estimate_phase_shift(&a, &other, BAND),
            Err(PhaseError::Signal(SignalError::GridMismatch(_)))
        ));
    }

    #[test]
    fn unrelated_noise_has_low_coherence() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut noise = || -> Vec<f64> { (0..4800).map(|_| rng.random_range(-1.0..1.0)).collect() };
        let a = UniformSignal::new(0.0, RATE, noise()).unwrap();
        let b = UniformSignal::new(0.0, RATE, noise()).unwrap();
        let e = estimate_phase_shift(&a, &b, BAND).unwrap();
        assert!(e.quality < 0.9);
    }

    #[test]
    fn track_of_constant_delay() {
        let a = tone(1.0, 0.0, 60.0);
        let b = tone(1.0, 0.02, 60.0);
        let track = track_phase_shift(&a, &b, 10.0, 5.0, BAND).unwrap();
        assert_eq!(track.len(), 11);
        assert!((track[0].time - (2399.0 / 2.0) / RATE).abs() < 1e-12);
        for p in &track {
            assert!((p.estimate.shift_seconds - 0.02).abs() < 1.0 / RATE);
        }
        let same = track_phase_shift(&a, &a, 10.0, 5.0, BAND).unwrap();
        assert!(same.iter().all(|p| p.estimate.shift_seconds.abs() < 1e-9));
        assert!((median_shift(&track).unwrap() - 0.02).abs() < 1.0 / RATE);
    }

    #[test]
    fn track_errors() {
        let a = tone(1.0, 0.0, 20.0);
        assert!(matches!(
            track_phase_shift(&a, &a, 30.0, 1.0, BAND),
            Err(PhaseError::WindowTooLong { .. })
        ));
        assert!(matches!(
            track_phase_shift(&a, &a, 10.0, 0.0, BAND),
            Err(PhaseError::InvalidStep(_))
        ));
        assert!(matches!(
            track_phase_shift(&a, &a, 3.0, 1.0, BAND),
            Err(PhaseError::TooFewPeriods { .. })
        ));
    }
}
