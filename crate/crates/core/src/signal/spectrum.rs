use std::fmt;
use std::str::FromStr;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::metrics::raw_difference;
use super::{DiffMetrics, SignalError, UniformSignal};
use crate::scalar::{mean, Real};

pub const MIN_SPECTRUM_LEN: usize = 16;

/// Taper applied before the transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Taper {
    Rectangular,
    #[default]
    Hann,
}

impl Taper {
    pub fn name(self) -> &'static str {
        match self {
            Taper::Rectangular => "rectangular",
            Taper::Hann => "hann",
        }
    }

    /// Symmetric window of length `n`.
    pub fn weights<T: Real>(self, n: usize) -> Vec<T> {
        match self {
            Taper::Rectangular => vec![T::one(); n],
            Taper::Hann => {
                if n < 2 {
                    return vec![T::one(); n];
                }
                let denom = T::from_count(n - 1);
                let half = T::lit(0.5);
                (0..n)
                    .map(|i| half - half * (T::TAU() * T::from_count(i) / denom).cos())
                    .collect()
            }
        }
    }
}

impl fmt::Display for Taper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Taper {
    type Err = SignalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rectangular" | "rect" | "boxcar" => Ok(Taper::Rectangular),
            "hann" | "hanning" => Ok(Taper::Hann),
            other => Err(SignalError::UnknownTaper(other.to_string())),
        }
    }
}

/// One-sided power spectrum; bin `k` is at `k * frequency_step` Hz.
///
/// Scaled so that, for the rectangular taper, the bins sum to the mean
/// square of the mean-removed signal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerSpectrum<T> {
    frequency_step: T,
    power: Vec<T>,
    taper: Taper,
}

impl<T: Real> PowerSpectrum<T> {
    pub fn new(frequency_step: T, power: Vec<T>, taper: Taper) -> Result<Self, SignalError> {
        if !(frequency_step > T::zero()) || !frequency_step.is_finite() {
            return Err(SignalError::InvalidRate);
        }
        if let Some(index) = power
            .iter()
            .position(|p| !(p.is_finite() && *p >= T::zero()))
        {
            return Err(SignalError::NonFinite { index });
        }
        Ok(Self {
            frequency_step,
            power,
            taper,
        })
    }

    pub fn frequency_step(&self) -> T {
        self.frequency_step
    }

    pub fn power(&self) -> &[T] {
        &self.power
    }

    pub fn taper(&self) -> Taper {
        self.taper
    }

    pub fn len(&self) -> usize {
        self.power.len()
    }

    pub fn is_empty(&self) -> bool {
        self.power.is_empty()
    }

    pub fn frequency(&self, bin: usize) -> T {
        T::from_count(bin) * self.frequency_step
    }

    pub fn total_power(&self) -> T {
        self.power.iter().copied().fold(T::zero(), |a, b| a + b)
    }

    /// Bins whose frequency lies in `[low, high]`.
    pub fn band_bins(
        &self,
        low: T,
        high: T,
    ) -> Result<std::ops::RangeInclusive<usize>, SignalError> {
        let invalid = |reason| SignalError::InvalidBand {
            low: low.to_f64_lossy(),
            high: high.to_f64_lossy(),
            reason,
        };
        if !(low.is_finite() && high.is_finite()) {
            return Err(invalid("bounds must be finite"));
        }
        if !(low < high) {
            return Err(invalid("low edge must be below high edge"));
        }
        if low < T::zero() {
            return Err(invalid("negative frequency"));
        }
        let top = self.frequency(self.power.len().saturating_sub(1));
        let slack = T::lit(1e-9) * self.frequency_step;
        if low > top + slack {
            return Err(invalid("band lies above the spectrum"));
        }
        let first = ((low / self.frequency_step) - T::lit(1e-9)).ceil();
        let last = ((high / self.frequency_step) + T::lit(1e-9)).floor();
        let first = first.max(T::zero()).to_usize().unwrap_or(0);
        let last = last
            .to_usize()
            .unwrap_or(usize::MAX)
            .min(self.power.len().saturating_sub(1));
        if first > last {
            return Err(SignalError::EmptyBand {
                low: low.to_f64_lossy(),
                high: high.to_f64_lossy(),
            });
        }
        Ok(first..=last)
    }
}

/// Mean-removed, tapered one-sided DFT (bins `0..=n/2`) plus the sum of
/// squared taper weights.
pub(crate) fn tapered_dft<T: Real>(values: &[T], taper: Taper) -> (Vec<Complex<T>>, T) {
    let n = values.len();
    let centre = mean(values);
    let w = taper.weights::<T>(n);
    let mut buf: Vec<Complex<T>> = values
        .iter()
        .zip(&w)
        .map(|(x, wi)| Complex::new((*x - centre) * *wi, T::zero()))
        .collect();
    let mut planner = FftPlanner::<T>::new();
    planner.plan_fft_forward(n).process(&mut buf);
    buf.truncate(n / 2 + 1);
    let w2 = w.iter().fold(T::zero(), |a, x| a + *x * *x);
    (buf, w2)
}

/// Converts one-sided DFT bins to power with the crate's normalisation.
pub(crate) fn bins_to_power<T: Real>(bins: &[Complex<T>], n: usize, w2: T) -> Vec<T> {
    let scale = T::from_count(n) * w2;
    let two = T::lit(2.0);
    bins.iter()
        .enumerate()
        .map(|(k, c)| {
            let p = c.norm_sqr() / scale;
            if k == 0 || (n.is_multiple_of(2) && k == n / 2) {
                p
            } else {
                two * p
            }
        })
        .collect()
}

/// Power spectrum of a mean-removed, tapered signal.
pub fn power_spectrum<T: Real>(
    sig: &UniformSignal<T>,
    taper: Taper,
) -> Result<PowerSpectrum<T>, SignalError> {
    let n = sig.len();
    if n < MIN_SPECTRUM_LEN {
        return Err(SignalError::TooShort {
            needed: MIN_SPECTRUM_LEN,
            got: n,
        });
    }
    let (bins, w2) = tapered_dft(sig.values(), taper);
    let mut power = bins_to_power(&bins, n, w2);
    // Mean removal leaves only rounding residue in the DC bin.
    if let Some(dc) = power.first_mut() {
        if *dc < T::epsilon() * T::epsilon() {
            *dc = T::zero();
        }
    }
    let step = sig.sample_rate() / T::from_count(n);
    PowerSpectrum::new(step, power, taper)
}

fn check_same_spectral_grid<T: Real>(
    a: &PowerSpectrum<T>,
    b: &PowerSpectrum<T>,
) -> Result<(), SignalError> {
    let tol = T::epsilon() * T::lit(16.0) * a.frequency_step;
    if (a.frequency_step - b.frequency_step).abs() > tol || a.len() != b.len() {
        return Err(SignalError::GridMismatch(format!(
            "spectra with {} bins of {} Hz and {} bins of {} Hz",
            a.len(),
            a.frequency_step,
            b.len(),
            b.frequency_step
        )));
    }
    Ok(())
}

/// Bin-wise difference of two spectra, `a` as reference.
pub fn spectral_difference<T: Real>(
    a: &PowerSpectrum<T>,
    b: &PowerSpectrum<T>,
) -> Result<DiffMetrics<T>, SignalError> {
    check_same_spectral_grid(a, b)?;
    raw_difference(&a.power, &b.power)
}

/// Index of the strongest bin inside `[low, high]`; ties go to the lower bin.
pub fn dominant_bin<T: Real>(spec: &PowerSpectrum<T>, band: (T, T)) -> Result<usize, SignalError> {
    let bins = spec.band_bins(band.0, band.1)?;
    let mut best = *bins.start();
    for k in bins {
        if spec.power[k] > spec.power[best] {
            best = k;
        }
    }
    Ok(best)
}

/// Frequency of the strongest bin inside `[low, high]`.
pub fn dominant_frequency<T: Real>(
    spec: &PowerSpectrum<T>,
    band: (T, T),
) -> Result<T, SignalError> {
    dominant_bin(spec, band).map(|k| spec.frequency(k))
}
