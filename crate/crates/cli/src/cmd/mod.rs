mod compare;
mod gen;
mod phase;
mod simulate;
mod windows;

use std::path::Path;

use anyhow::{bail, Context, Result};
use rppg_confounds::io::{write_text, Manifest};
use rppg_confounds::{TimestampedSignal, UniformSignal};

use crate::args::{Command, ReplayArgs};
use crate::echo;

pub fn run(command: Command) -> Result<()> {
    let command = match command {
        Command::Replay(r) => return replay(r),
        other => resolve(other)?,
    };
    let inputs = execute(&command).with_context(|| format!("{} failed", command.name()))?;
    echo::write(out_dir(&command), &command, inputs)
}

/// Fills in every default that depends on the inputs and makes input
/// paths absolute.
fn resolve(command: Command) -> Result<Command> {
    Ok(match command {
        Command::GenWaveform(a) => Command::GenWaveform(gen::resolve(a)?),
        Command::Simulate(a) => Command::Simulate(simulate::resolve(a)?),
        Command::CompareFps(a) => Command::CompareFps(compare::resolve(a)?),
        Command::Phase(a) => Command::Phase(phase::resolve(a)?),
        Command::WindowMatrix(a) => Command::WindowMatrix(windows::resolve(a)?),
        Command::Replay(_) => bail!("a replay cannot be replayed"),
    })
}

fn execute(command: &Command) -> Result<Vec<Manifest>> {
    match command {
        Command::GenWaveform(a) => gen::run(a),
        Command::Simulate(a) => simulate::run(a),
        Command::CompareFps(a) => compare::run(a),
        Command::Phase(a) => phase::run(a),
        Command::WindowMatrix(a) => windows::run(a),
        Command::Replay(_) => unreachable!("replays are unwrapped before execution"),
    }
}

fn out_dir(command: &Command) -> &Path {
    match command {
        Command::GenWaveform(a) => &a.output.out,
        Command::Simulate(a) => &a.output.out,
        Command::CompareFps(a) => &a.output.out,
        Command::Phase(a) => &a.output.out,
        Command::WindowMatrix(a) => &a.output.out,
        Command::Replay(_) => unreachable!("replays are unwrapped before execution"),
    }
}

fn replay(r: ReplayArgs) -> Result<()> {
    let cfg = echo::read(&r.config)?;
    let mut command = cfg.run;
    if let Some(out) = r.out {
        match &mut command {
            Command::GenWaveform(a) => a.output.out = out,
            Command::Simulate(a) => a.output.out = out,
            Command::CompareFps(a) => a.output.out = out,
            Command::Phase(a) => a.output.out = out,
            Command::WindowMatrix(a) => a.output.out = out,
            Command::Replay(_) => bail!("{} records a replay", r.config.display()),
        }
    }
    println!("replaying {} from {}", command.name(), r.config.display());
    run(command)
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)?;
    Ok(())
}

/// Reads back a regularly sampled file as a uniform signal. The rate is
/// taken from the sample count and span, snapped to an integer when it is
/// one to within rounding.
fn as_uniform(sig: &TimestampedSignal, path: &Path) -> Result<UniformSignal> {
    let t = sig.timestamps();
    let n = t.len();
    let mut rate = (n - 1) as f64 / (t[n - 1] - t[0]);
    if (rate - rate.round()).abs() < 1e-9 * rate {
        rate = rate.round();
    }
    let tol = 1e-6 / rate;
    if let Some(k) = (0..n).find(|&k| (t[k] - (t[0] + k as f64 / rate)).abs() > tol) {
        bail!(
            "{}: sample {} at {} s is off the regular {} Hz grid",
            path.display(),
            k + 1,
            t[k],
            rate
        );
    }
    Ok(UniformSignal::new(t[0], rate, sig.values().to_vec())?)
}
