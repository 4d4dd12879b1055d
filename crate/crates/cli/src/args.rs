use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rppg_confounds::signal::{Taper, MAX_RESAMPLE_RATE};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "rppg-confounds",
    version,
    about = "Rolling-shutter, irregular frame rate and temporal-window experiments on pulse signals"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Each variant is also the body of `run_config.json`, so a run can be
/// repeated from its echo.
#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Write a source waveform as a timestamped signal file.
    GenWaveform(GenArgs),
    /// Capture a waveform with a simulated camera into four region signals.
    Simulate(SimulateArgs),
    /// Compare timestamp-aware and timestamp-ignorant resampling of a capture.
    CompareFps(CompareArgs),
    /// Estimate the phase shift between two signals or across region pairs.
    Phase(PhaseArgs),
    /// Nested temporal-window heart-rate differences from beat annotations.
    WindowMatrix(WindowArgs),
    /// Run again from a `run_config.json` echo.
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::GenWaveform(_) => "gen-waveform",
            Command::Simulate(_) => "simulate",
            Command::CompareFps(_) => "compare-fps",
            Command::Phase(_) => "phase",
            Command::WindowMatrix(_) => "window-matrix",
            Command::Replay(_) => "replay",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct Output {
    /// Output directory, created when missing.
    #[arg(long)]
    pub out: PathBuf,
    /// Seed for every random draw of the run.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct Spectral {
    /// Resampling rate in Hz.
    #[arg(long, default_value_t = 240.0)]
    pub rate: f64,
    /// Lower edge of the pulse band in Hz.
    #[arg(long, default_value_t = 0.7)]
    pub band_low: f64,
    /// Upper edge of the pulse band in Hz.
    #[arg(long, default_value_t = 3.0)]
    pub band_high: f64,
    /// Spectral taper: hann or rectangular.
    #[arg(long, default_value_t = Taper::Hann)]
    pub taper: Taper,
}

impl Spectral {
    pub fn band(&self) -> (f64, f64) {
        (self.band_low, self.band_high)
    }

    pub fn validate(&self) -> Result<()> {
        check_rate(self.rate)?;
        if !(self.band_low > 0.0 && self.band_low < self.band_high && self.band_high.is_finite()) {
            bail!(
                "band must satisfy 0 < --band-low < --band-high, got [{}, {}]",
                self.band_low,
                self.band_high
            );
        }
        if self.band_high > self.rate / 2.0 {
            bail!(
                "--band-high {} Hz is above the Nyquist frequency of --rate {}",
                self.band_high,
                self.rate
            );
        }
        Ok(())
    }
}

pub fn check_rate(rate: f64) -> Result<()> {
    if !(rate > 0.0 && rate <= MAX_RESAMPLE_RATE) {
        bail!("--rate must be in (0, {MAX_RESAMPLE_RATE}] Hz, got {rate}");
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Sine,
    SumOfSines,
    /// Periodic two-wave pulse shape at `--bpm`.
    Ppg,
    /// Replay a timestamped signal file.
    FromFile,
}

/// One sine component, written `frequency:amplitude`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub freq: f64,
    pub amp: f64,
}

impl FromStr for Component {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (f, a) = s
            .split_once(':')
            .ok_or_else(|| format!("expected `frequency:amplitude`, got `{s}`"))?;
        let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
        Ok(Self {
            freq: num(f)?,
            amp: num(a)?,
        })
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.freq, self.amp)
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value_t = Shape::Sine)]
    pub shape: Shape,
    /// Sine frequency in Hz.
    #[arg(long, default_value_t = 1.2)]
    pub freq: f64,
    /// Sine amplitude.
    #[arg(long, default_value_t = 1.0)]
    pub amp: f64,
    /// Sum-of-sines component `frequency:amplitude`; repeat for more.
    /// Defaults to 1.2:1 and 2.4:0.3.
    #[arg(long = "component")]
    pub components: Vec<Component>,
    /// Pulse rate of the ppg shape.
    #[arg(long, default_value_t = 72.0)]
    pub bpm: f64,
    /// Signal file for `--shape from-file`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Length in seconds.
    #[arg(long, default_value_t = 10.0)]
    pub duration: f64,
    /// Output rate in Hz; 240 for generated shapes. A file is copied
    /// unchanged unless a rate is given.
    #[arg(long)]
    pub rate: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    /// Camera configuration file.
    #[arg(long)]
    pub camera: PathBuf,
    /// Regularly sampled source waveform (`t,value`).
    #[arg(long)]
    pub waveform: PathBuf,
    /// Capture length in seconds; defaults to what the waveform covers.
    #[arg(long)]
    pub duration: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct CompareArgs {
    /// Captured signal with its frame timestamps (`t,value`).
    #[arg(long)]
    pub signal: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub spectral: Spectral,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct PhaseArgs {
    /// Reference signal.
    #[arg(long, requires = "b", conflicts_with = "regions")]
    pub a: Option<PathBuf>,
    /// Signal compared against `--a`; positive shifts mean it lags.
    #[arg(long, requires = "a")]
    pub b: Option<PathBuf>,
    /// Directory with top.csv, bottom.csv, left.csv and right.csv.
    #[arg(long, required_unless_present = "a")]
    pub regions: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub spectral: Spectral,
    /// Sliding window in seconds for a shift track; no track without it.
    #[arg(long)]
    pub window: Option<f64>,
    /// Advance of the sliding window in seconds.
    #[arg(long, default_value_t = 1.0)]
    pub track_step: f64,
    /// Heart rate at which shifts are also given in degrees.
    #[arg(long, default_value_t = 60.0)]
    pub ref_bpm: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct WindowArgs {
    /// Beat annotation files, one subject each.
    #[arg(required = true)]
    pub beats: Vec<PathBuf>,
    /// Window sizes in seconds, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0, 55.0, 60.0])]
    pub sizes: Vec<f64>,
    /// Advance of inner windows in seconds.
    #[arg(long, default_value_t = 5.0)]
    pub step: f64,
    /// Beat files hold sample indices at this rate instead of seconds.
    #[arg(long)]
    pub sample_rate: Option<f64>,
    /// Decimals in the matrix tables.
    #[arg(long, default_value_t = 2)]
    pub decimals: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// A `run_config.json` written by an earlier run.
    pub config: PathBuf,
    /// Write to this directory instead of the recorded one.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
