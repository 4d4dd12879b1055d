use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{CameraModel, CaptureError, Jitter};
use crate::scalar::Real;

/// Frame timestamps for a capture of `duration` seconds.
///
/// Frames are nominally at `k / fps` for every `k` with `k / fps < duration`.
/// Each frame time is displaced by the jitter model and the sequence is
/// shifted so the first frame sits at 0; the mean interval therefore stays
/// within two jitter magnitudes of the nominal total span. The same seed
/// always yields the same list. Explicit jitter returns the replayed list.
pub fn generate_frame_timestamps<T: Real>(
    model: &CameraModel<T>,
    duration: T,
    seed: u64,
) -> Result<Vec<T>, CaptureError> {
    let interval = model.frame_interval();
    let min = interval * T::lit(2.0);
    if !(duration > min) {
        return Err(CaptureError::DurationTooShort {
            duration: duration.to_f64_lossy(),
            min: min.to_f64_lossy(),
        });
    }
    let frames = (duration * model.nominal_fps() - T::lit(1e-9))
        .ceil()
        .to_usize()
        .unwrap_or(0);
    let nominal = |k: usize| T::from_count(k) / model.nominal_fps();
    let half = interval.to_f64_lossy() / 2.0;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let displacements: Vec<f64> = match model.jitter() {
        Jitter::None => return Ok((0..frames).map(nominal).collect()),
        Jitter::Explicit(ts) => return Ok(ts.clone()),
        Jitter::Uniform { half_width } => {
            let w = half_width.to_f64_lossy();
            if w == 0.0 {
                vec![0.0; frames]
            } else {
                (0..frames).map(|_| rng.random_range(-w..=w)).collect()
            }
        }
        Jitter::Gaussian { sigma } => {
            let sd = sigma.to_f64_lossy() / std::f64::consts::SQRT_2;
            if sd == 0.0 {
                vec![0.0; frames]
            } else {
                let normal = Normal::new(0.0, sd).map_err(|_| CaptureError::InvalidJitter)?;
                (0..frames)
                    .map(|_| loop {
                        let e: f64 = normal.sample(&mut rng);
                        if e.abs() < half {
                            break e;
                        }
                    })
                    .collect()
            }
        }
    };
    let first = displacements[0];
    Ok(displacements
        .iter()
        .enumerate()
        .map(|(k, e)| nominal(k) + T::lit(e - first))
        .collect())
}
