use anyhow::{bail, Context, Result};
use rppg_confounds::capture::{ppg_like, sine, sum_of_sines};
use rppg_confounds::io::{read_timestamped_signal, write_timestamped_signal, InputKind, Manifest};
use rppg_confounds::signal::{resample_aware, DEFAULT_RESAMPLE_RATE};

use crate::args::{check_rate, Component, GenArgs, Shape};
use crate::echo;

pub const OUTPUT: &str = "waveform.csv";

pub fn resolve(mut a: GenArgs) -> Result<GenArgs> {
    if a.shape == Shape::FromFile {
        let input = a
            .input
            .as_ref()
            .context("--shape from-file needs --input")?;
        a.input = Some(echo::resolve(input)?);
    } else {
        if a.input.is_some() {
            bail!("--input only applies to --shape from-file");
        }
        a.rate.get_or_insert(DEFAULT_RESAMPLE_RATE);
    }
    if a.shape == Shape::SumOfSines && a.components.is_empty() {
        a.components = vec![
            Component {
                freq: 1.2,
                amp: 1.0,
            },
            Component {
                freq: 2.4,
                amp: 0.3,
            },
        ];
    }
    if let Some(rate) = a.rate {
        check_rate(rate)?;
    }
    Ok(a)
}

pub fn run(a: &GenArgs) -> Result<Vec<Manifest>> {
    let mut inputs = Vec::new();
    let sig = if a.shape == Shape::FromFile {
        let path = a.input.as_ref().expect("input is resolved for from-file");
        inputs.push(Manifest::new(InputKind::Signal, path));
        let sig = read_timestamped_signal(path)?;
        match a.rate {
            Some(rate) => resample_aware(&sig, rate)?.to_timestamped(),
            None => sig,
        }
    } else {
        let rate = a.rate.expect("rate is resolved for generated shapes");
        let parts: Vec<(f64, f64)> = a.components.iter().map(|c| (c.freq, c.amp)).collect();
        match a.shape {
            Shape::Sine => sine(a.freq, a.amp, a.duration, rate)?,
            Shape::SumOfSines => sum_of_sines(&parts, a.duration, rate)?,
            _ => ppg_like(a.bpm, a.duration, rate)?,
        }
        .to_timestamped()
    };
    let path = a.output.out.join(OUTPUT);
    write_timestamped_signal(&path, &sig)?;
    println!(
        "{} samples from {} s to {} s written to {}",
        sig.len(),
        sig.first_time(),
        sig.last_time(),
        path.display()
    );
    Ok(inputs)
}
