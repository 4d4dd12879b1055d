use super::{SignalError, TimestampedSignal, UniformSignal};
use crate::scalar::Real;

pub const DEFAULT_RESAMPLE_RATE: f64 = 240.0;
/// Highest rate the command line accepts (the audio-rate source used for playback).
pub const MAX_RESAMPLE_RATE: f64 = 44100.0;

/// Number of grid points at `rate` that fit in `[0, span]`.
///
/// A span that is an integer number of periods up to rounding keeps its end point.
fn grid_len<T: Real>(span: T, rate: T) -> usize {
    let steps = span * rate;
    let whole = steps.floor();
    let tol = T::lit(1e-9) * steps.abs().max(T::one());
    let n = if whole + T::one() - steps <= tol {
        whole + T::one()
    } else {
        whole
    };
    n.to_usize().unwrap_or(0) + 1
}

/// Piecewise-linear evaluation of `sig` on `start + k / rate`, `k < n`.
/// Grid points must lie in the signal's time span; the caller guarantees it
/// up to rounding, and times past the last timestamp are clamped to it.
fn interpolate_on_grid<T: Real>(sig: &TimestampedSignal<T>, start: T, rate: T, n: usize) -> Vec<T> {
    let ts = sig.timestamps();
    let vs = sig.values();
    let last = ts.len() - 1;
    let mut j = 0usize;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let t = (start + T::from_count(k) / rate).min(ts[last]).max(ts[0]);
        while j + 1 < last && ts[j + 1] <= t {
            j += 1;
        }
        let v = if t == ts[j] {
            vs[j]
        } else if t == ts[j + 1] {
            vs[j + 1]
        } else {
            let frac = (t - ts[j]) / (ts[j + 1] - ts[j]);
            vs[j] + (vs[j + 1] - vs[j]) * frac
        };
        out.push(v);
    }
    out
}

fn check_rate<T: Real>(rate: T) -> Result<(), SignalError> {
    if rate > T::zero() && rate.is_finite() {
        Ok(())
    } else {
        Err(SignalError::InvalidRate)
    }
}

/// Timestamp-aware resampling: linear interpolation at the true frame times.
///
/// The output starts at the first timestamp, samples every `1 / rate`
/// seconds and stops at the last grid point not after the last timestamp.
pub fn resample_aware<T: Real>(
    sig: &TimestampedSignal<T>,
    rate: T,
) -> Result<UniformSignal<T>, SignalError> {
    check_rate(rate)?;
    let start = sig.first_time();
    let n = grid_len(sig.last_time() - start, rate);
    if n < 2 {
        return Err(SignalError::TooShort { needed: 2, got: n });
    }
    UniformSignal::new(start, rate, interpolate_on_grid(sig, start, rate, n))
}

/// Replaces the timestamps by an equal division of `[first, last]`.
///
/// Timestamps that already sit on that division (to a few ulps) are kept
/// as they are, so regular input comes back unchanged.
pub fn synthesize_uniform_timestamps<T: Real>(
    sig: &TimestampedSignal<T>,
) -> Result<TimestampedSignal<T>, SignalError> {
    let n = sig.len();
    if n < 2 {
        return Err(SignalError::TooShort { needed: 2, got: n });
    }
    let first = sig.first_time();
    let last = sig.last_time();
    let span = last - first;
    let denom = T::from_count(n - 1);
    let grid: Vec<T> = (0..n)
        .map(|k| {
            if k == n - 1 {
                last
            } else {
                first + span * T::from_count(k) / denom
            }
        })
        .collect();
    let tol = T::epsilon() * T::lit(8.0) * first.abs().max(last.abs()).max(span);
    let on_grid = sig
        .timestamps()
        .iter()
        .zip(&grid)
        .all(|(a, b)| (*a - *b).abs() <= tol);
    let timestamps = if on_grid {
        sig.timestamps().to_vec()
    } else {
        grid
    };
    TimestampedSignal::new(timestamps, sig.values().to_vec())
}

/// Timestamp-ignorant resampling: frames are assumed equally spaced between
/// the first and last timestamp, then resampled like [`resample_aware`].
pub fn resample_naive<T: Real>(
    sig: &TimestampedSignal<T>,
    rate: T,
) -> Result<UniformSignal<T>, SignalError> {
    check_rate(rate)?;
    resample_aware(&synthesize_uniform_timestamps(sig)?, rate)
}

/// Resamples two signals onto one grid covering their common time span.
pub fn resample_pair<T: Real>(
    a: &TimestampedSignal<T>,
    b: &TimestampedSignal<T>,
    rate: T,
) -> Result<(UniformSignal<T>, UniformSignal<T>), SignalError> {
    check_rate(rate)?;
    let start = a.first_time().max(b.first_time());
    let end = a.last_time().min(b.last_time());
    if end <= start {
        return Err(SignalError::NoOverlap);
    }
    let n = grid_len(end - start, rate);
    if n < 2 {
        return Err(SignalError::TooShort { needed: 2, got: n });
    }
    let ua = UniformSignal::new(start, rate, interpolate_on_grid(a, start, rate, n))?;
    let ub = UniformSignal::new(start, rate, interpolate_on_grid(b, start, rate, n))?;
    Ok((ua, ub))
}
