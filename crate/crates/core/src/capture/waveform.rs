use super::CaptureError;
use crate::scalar::Real;
use crate::signal::{SignalError, UniformSignal};

/// Light-source brightness over time, linearly interpolated between the
/// samples of a uniform source signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform<T> {
    source: UniformSignal<T>,
}

impl<T: Real> Waveform<T> {
    pub fn new(source: UniformSignal<T>) -> Self {
        Self { source }
    }

    pub fn source(&self) -> &UniformSignal<T> {
        &self.source
    }

    pub fn start(&self) -> T {
        self.source.start_time()
    }

    pub fn end(&self) -> T {
        self.source.time_at(self.source.len() - 1)
    }

    pub fn eval(&self, t: T) -> Result<T, CaptureError> {
        let start = self.start();
        let end = self.end();
        let slack = T::epsilon() * T::lit(16.0) * start.abs().max(end.abs()).max(T::one());
        if !(t >= start - slack && t <= end + slack) {
            return Err(CaptureError::OutOfDomain {
                t: t.to_f64_lossy(),
                start: start.to_f64_lossy(),
                end: end.to_f64_lossy(),
            });
        }
        let values = self.source.values();
        let last = values.len() - 1;
        let pos = ((t - start) * self.source.sample_rate()).max(T::zero());
        let i = pos.floor().to_usize().unwrap_or(0).min(last - 1);
        let frac = (pos - T::from_count(i)).min(T::one());
        if frac == T::zero() {
            return Ok(values[i]);
        }
        Ok(values[i] + (values[i + 1] - values[i]) * frac)
    }
}

fn sample_count<T: Real>(duration: T, rate: T) -> Result<usize, SignalError> {
    if !(rate > T::zero()) || !rate.is_finite() {
        return Err(SignalError::InvalidRate);
    }
    let n = (duration * rate).round().to_usize().unwrap_or(0);
    if n < 2 {
        return Err(SignalError::TooShort { needed: 2, got: n });
    }
    Ok(n)
}

/// `amplitude * sin(2 pi freq t)` sampled at `k / rate` for `k < duration * rate`.
pub fn sine<T: Real>(
    freq: T,
    amplitude: T,
    duration: T,
    rate: T,
) -> Result<UniformSignal<T>, SignalError> {
    sum_of_sines(&[(freq, amplitude)], duration, rate)
}

/// Sum of `(frequency, amplitude)` sines, zero phase, sampled from t = 0.
pub fn sum_of_sines<T: Real>(
    components: &[(T, T)],
    duration: T,
    rate: T,
) -> Result<UniformSignal<T>, SignalError> {
    let n = sample_count(duration, rate)?;
    UniformSignal::from_fn(T::zero(), rate, n, |t| {
        components.iter().fold(T::zero(), |acc, (f, a)| {
            acc + *a * (T::TAU() * *f * t).sin()
        })
    })
}

// Pulse shape in fractions of a beat period: systolic wave followed by a
// smaller, wider diastolic wave.
const SYSTOLIC: (f64, f64, f64) = (1.0, 0.25, 0.08);
const DIASTOLIC: (f64, f64, f64) = (0.45, 0.55, 0.12);

/// Strictly periodic pulse-like waveform at `bpm` beats per minute, built
/// from two wrapped Gaussian bumps per beat.
pub fn ppg_like<T: Real>(bpm: T, duration: T, rate: T) -> Result<UniformSignal<T>, SignalError> {
    if !(bpm > T::zero()) || !bpm.is_finite() {
        return Err(SignalError::InvalidRate);
    }
    let n = sample_count(duration, rate)?;
    let freq = bpm / T::lit(60.0);
    let bump = |phase: T, (amp, centre, width): (f64, f64, f64)| {
        let mut d = phase - T::lit(centre);
        d = d - d.round();
        let w = T::lit(width);
        T::lit(amp) * (-(d * d) / (T::lit(2.0) * w * w)).exp()
    };
    UniformSignal::from_fn(T::zero(), rate, n, |t| {
        let phase = (t * freq).fract();
        bump(phase, SYSTOLIC) + bump(phase, DIASTOLIC)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{dominant_frequency, power_spectrum, Taper};

    #[test]
    fn sine_sample_count() {
        let s = sine(1.2_f64, 1.0, 10.0, 240.0).unwrap();
        assert_eq!(s.len(), 2400);
        assert_eq!(s.values()[0], 0.0);
    }

    #[test]
    fn eval_interpolates_and_checks_domain() {
        let w = Waveform::new(UniformSignal::new(1.0_f64, 2.0, vec![0.0, 1.0, 4.0]).unwrap());
        assert_eq!(w.end(), 2.0);
        assert_eq!(w.eval(1.0).unwrap(), 0.0);
        assert_eq!(w.eval(1.25).unwrap(), 0.5);
        assert_eq!(w.eval(1.75).unwrap(), 2.5);
        assert_eq!(w.eval(2.0).unwrap(), 4.0);
        assert!(matches!(
            w.eval(0.99),
            Err(CaptureError::OutOfDomain { .. })
        ));
        assert!(matches!(
            w.eval(2.01),
            Err(CaptureError::OutOfDomain { .. })
        ));
    }

    #[test]
    fn ppg_like_peaks_at_beat_rate() {
        let s = ppg_like(72.0_f64, 20.0, 240.0).unwrap();
        let p = power_spectrum(&s, Taper::Hann).unwrap();
        let f = dominant_frequency(&p, (0.7, 3.0)).unwrap();
        assert!((f - 1.2).abs() <= p.frequency_step(), "{f}");
        // one period later the waveform repeats
        let v = s.values();
        assert!((v[10] - v[10 + 200]).abs() < 1e-9);
    }
}
