use serde::Serialize;

use super::{check_same_grid, SignalError, UniformSignal};
use crate::scalar::{mean, rms, Real};

/// Element-wise comparison of two equally gridded sequences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiffMetrics<T> {
    pub max_abs: T,
    pub rms: T,
    /// RMS of the difference over RMS of the mean-removed reference, in percent.
    pub relative_rms: T,
}

impl<T: Real> DiffMetrics<T> {
    pub fn zero() -> Self {
        Self {
            max_abs: T::zero(),
            rms: T::zero(),
            relative_rms: T::zero(),
        }
    }
}

/// Difference metrics of `b - a` with `a` as the reference.
///
/// The raw difference is used (no mean removal); only the reference is
/// mean-removed for `relative_rms`.
pub fn raw_difference<T: Real>(a: &[T], b: &[T]) -> Result<DiffMetrics<T>, SignalError> {
    if a.len() != b.len() {
        return Err(SignalError::GridMismatch(format!(
            "lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    let diff: Vec<T> = a.iter().zip(b).map(|(x, y)| *y - *x).collect();
    let max_abs = diff.iter().fold(T::zero(), |m, d| m.max(d.abs()));
    let diff_rms = rms(&diff);
    let centre = mean(a);
    let centred: Vec<T> = a.iter().map(|x| *x - centre).collect();
    let ref_rms = rms(&centred);
    let relative_rms = if diff_rms == T::zero() {
        T::zero()
    } else if ref_rms == T::zero() {
        return Err(SignalError::FlatReference);
    } else {
        diff_rms / ref_rms * T::lit(100.0)
    };
    Ok(DiffMetrics {
        max_abs,
        rms: diff_rms,
        relative_rms,
    })
}

/// Amplitude difference between two signals on the same grid.
pub fn amplitude_difference<T: Real>(
    a: &UniformSignal<T>,
    b: &UniformSignal<T>,
) -> Result<DiffMetrics<T>, SignalError> {
    check_same_grid(a, b)?;
    raw_difference(a.values(), b.values())
}
