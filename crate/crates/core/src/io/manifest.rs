use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::{
    read_beats, read_camera_config, read_frame_timestamps, read_timestamped_signal, CameraConfig,
    FormatError,
};
use crate::hr_window::BeatSeries;
use crate::scalar::Real;
use crate::signal::TimestampedSignal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputKind {
    Signal,
    Beats,
    FrameTimestamps,
    CameraConfig,
}

/// Declares one input file together with the units its numbers are in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub kind: InputKind,
    pub path: PathBuf,
    /// `seconds`, or `samples` for index-encoded beat annotations.
    pub units: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Input<T> {
    Signal(TimestampedSignal<T>),
    Beats(BeatSeries<T>),
    FrameTimestamps(Vec<T>),
    CameraConfig(CameraConfig<T>),
}

impl Manifest {
    pub fn new(kind: InputKind, path: impl Into<PathBuf>) -> Self {
        Self {
            kind,
            path: path.into(),
            units: "seconds".into(),
            sample_rate: None,
        }
    }

    /// Beat annotations stored as sample indices at `sample_rate` Hz.
    pub fn beats_in_samples(path: impl Into<PathBuf>, sample_rate: f64) -> Self {
        Self {
            kind: InputKind::Beats,
            path: path.into(),
            units: "samples".into(),
            sample_rate: Some(sample_rate),
        }
    }

    pub fn validate(&self) -> Result<(), FormatError> {
        let bad = |msg: String| {
            Err(FormatError::Invalid(format!(
                "{}: {msg}",
                self.path.display()
            )))
        };
        match (self.kind, self.units.as_str(), self.sample_rate) {
            (_, "", _) => bad("units must be declared".into()),
            (InputKind::Beats, "samples", Some(r)) if r > 0.0 && r.is_finite() => Ok(()),
            (InputKind::Beats, "samples", _) => {
                bad("sample-index beats need a positive sample rate".into())
            }
            (_, "seconds", None) => Ok(()),
            (_, "seconds", Some(_)) => {
                bad("a sample rate only applies to sample-index beats".into())
            }
            (kind, units, _) => bad(format!("units `{units}` are not valid for {kind:?} input")),
        }
    }

    pub fn load<T: Real>(&self) -> Result<Input<T>, FormatError> {
        self.validate()?;
        let path = self.path.as_path();
        Ok(match self.kind {
            InputKind::Signal => Input::Signal(read_timestamped_signal(path)?),
            InputKind::Beats => Input::Beats(read_beats(path, self.sample_rate.map(T::lit))?),
            InputKind::FrameTimestamps => Input::FrameTimestamps(read_frame_timestamps(path)?),
            InputKind::CameraConfig => Input::CameraConfig(read_camera_config(path)?),
        })
    }
}
