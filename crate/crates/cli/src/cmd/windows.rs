use std::path::Path;

use anyhow::{Context, Result};
use rppg_confounds::hr_window::{
    boxplot_stats, window_diff_matrix, BeatSeries, DiffMatrix, Grouping, WindowSpec,
};
use rppg_confounds::io::{
    format_boxplot_csv, format_diff_matrix_csv, read_beats, write_text, InputKind, Manifest,
};
use serde_json::json;

use super::write_json;
use crate::args::WindowArgs;
use crate::echo;

pub fn resolve(mut a: WindowArgs) -> Result<WindowArgs> {
    a.beats = a
        .beats
        .iter()
        .map(|p| echo::resolve(p))
        .collect::<Result<_>>()?;
    WindowSpec::new(a.sizes.clone(), a.step)?;
    Ok(a)
}

fn subject(
    path: &Path,
    rate: Option<f64>,
    spec: &WindowSpec<f64>,
) -> Result<(BeatSeries<f64>, DiffMatrix<f64>)> {
    let beats = read_beats(path, rate)?;
    let m = window_diff_matrix(&beats, spec).with_context(|| path.display().to_string())?;
    Ok((beats, m))
}

pub fn run(a: &WindowArgs) -> Result<Vec<Manifest>> {
    let spec = WindowSpec::new(a.sizes.clone(), a.step)?;
    // one thread per file; results keep the command-line order
    let results: Vec<Result<_>> = std::thread::scope(|scope| {
        let handles: Vec<_> = a
            .beats
            .iter()
            .map(|p| scope.spawn(|| subject(p, a.sample_rate, &spec)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let subjects = results.into_iter().collect::<Result<Vec<_>>>()?;

    let out = &a.output.out;
    let mut listing = Vec::new();
    for (i, (path, (beats, m))) in a.beats.iter().zip(&subjects).enumerate() {
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let file = format!("subject_{:02}_{stem}.csv", i + 1);
        write_text(&out.join(&file), &format_diff_matrix_csv(m, a.decimals))?;
        let span = beats.last() - beats.first();
        let (so, si) = m.skipped_windows();
        listing.push(json!({
            "input": path,
            "table": file,
            "beats": beats.len(),
            "span_s": span,
            "mean_bpm": 60.0 * (beats.len() - 1) as f64 / span,
            "values": m.total_count(),
            "skipped_outer_windows": so,
            "skipped_inner_windows": si,
        }));
    }
    let matrices: Vec<DiffMatrix<f64>> = subjects.into_iter().map(|(_, m)| m).collect();
    let pooled = DiffMatrix::pooled(&matrices)?;
    let table = format_diff_matrix_csv(&pooled, a.decimals);
    write_text(&out.join("pooled_matrix.csv"), &table)?;
    write_text(
        &out.join("boxplot_by_pair.csv"),
        &format_boxplot_csv(&boxplot_stats(&pooled, Grouping::ByPair)?),
    )?;
    write_text(
        &out.join("boxplot_by_gap.csv"),
        &format_boxplot_csv(&boxplot_stats(&pooled, Grouping::BySizeGap)?),
    )?;
    let (so, si) = pooled.skipped_windows();
    write_json(
        &out.join("summary.json"),
        &json!({
            "subjects": listing,
            "pooled": {
                "values": pooled.total_count(),
                "skipped_outer_windows": so,
                "skipped_inner_windows": si,
                "cells": pooled.cells(),
            },
        }),
    )?;

    println!(
        "{} subject(s), {} differences, skipped windows: {so} outer, {si} inner",
        matrices.len(),
        pooled.total_count()
    );
    println!("mean difference (%), outer size by row, inner size by column:");
    print!("{table}");
    Ok(a.beats
        .iter()
        .map(|p| match a.sample_rate {
            Some(r) => Manifest::beats_in_samples(p, r),
            None => Manifest::new(InputKind::Beats, p),
        })
        .collect())
}
