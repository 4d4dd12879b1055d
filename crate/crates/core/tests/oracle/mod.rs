//! Brute-force reference for the nested temporal-window comparison.
//!
//! Every window is found by scanning all beats, every rate is summed from
//! scratch and the quartiles are computed here rather than through the
//! library, so agreement with `window_diff_matrix` is a meaningful check.
//! The floating point operations follow the same order as the definition
//! (sequential RR sums, `60 (N-1) / sum`, `|a - b| / a * 100`), so the two
//! agree exactly.

#![allow(dead_code)]

pub struct OracleCell {
    pub outer: f64,
    pub inner: f64,
    pub values: Vec<f64>,
}

fn beats_in(beats: &[f64], start: f64, end: f64) -> Vec<f64> {
    beats
        .iter()
        .copied()
        .filter(|t| *t >= start && *t < end)
        .collect()
}

fn rate(inside: &[f64]) -> Option<f64> {
    if inside.len() < 2 {
        return None;
    }
    let mut sum = 0.0;
    for i in 0..inside.len() - 1 {
        sum += inside[i + 1] - inside[i];
    }
    Some(60.0 * (inside.len() - 1) as f64 / sum)
}

fn diff(outer: f64, inner: f64) -> f64 {
    (outer - inner).abs() / outer * 100.0
}

pub fn cells(beats: &[f64], sizes: &[f64], step: f64) -> Vec<OracleCell> {
    let origin = beats[0];
    let end = beats[beats.len() - 1];
    let mut out = Vec::new();
    for (oi, &outer) in sizes.iter().enumerate() {
        for &inner in &sizes[..oi] {
            let mut values = Vec::new();
            let mut k = 0usize;
            loop {
                let start = origin + k as f64 * outer;
                if start + outer > end {
                    break;
                }
                k += 1;
                let inside = beats_in(beats, start, start + outer);
                let Some(hr_outer) = rate(&inside) else {
                    continue;
                };
                if inner == 0.0 {
                    for pair in inside.windows(2) {
                        values.push(diff(hr_outer, 60.0 / (pair[1] - pair[0])));
                    }
                    continue;
                }
                let mut i = 0usize;
                while i as f64 * step + inner <= outer + 1e-9 {
                    let s = start + i as f64 * step;
                    if let Some(hr_inner) = rate(&beats_in(beats, s, s + inner)) {
                        values.push(diff(hr_outer, hr_inner));
                    }
                    i += 1;
                }
            }
            out.push(OracleCell {
                outer,
                inner,
                values,
            });
        }
    }
    out
}

pub fn mean(xs: &[f64]) -> f64 {
    let mut s = 0.0;
    for x in xs {
        s += x;
    }
    s / xs.len() as f64
}

/// Linear-interpolation quantile over sorted data.
pub fn quantile(xs: &[f64], q: f64) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pos = q * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = (lo + 1).min(v.len() - 1);
    let frac = pos - lo as f64;
    if frac == 0.0 {
        v[lo]
    } else {
        v[lo] + (v[hi] - v[lo]) * frac
    }
}

/// Values pooled over all cells with `outer - inner == gap`, in cell order.
pub fn pooled_by_gap(cells: &[OracleCell]) -> Vec<(f64, Vec<f64>)> {
    let mut gaps: Vec<f64> = cells.iter().map(|c| c.outer - c.inner).collect();
    gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    gaps.dedup();
    gaps.into_iter()
        .map(|g| {
            let vals = cells
                .iter()
                .filter(|c| c.outer - c.inner == g)
                .flat_map(|c| c.values.iter().copied())
                .collect();
            (g, vals)
        })
        .filter(|(_, v): &(f64, Vec<f64>)| !v.is_empty())
        .collect()
}

/// Random beat record: RR in [0.5, 1.3] s with occasional pauses of 3-6 s.
pub fn random_beats(seed: u64, beats: usize) -> Vec<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut t = vec![rng.random_range(0.0..2.0)];
    for _ in 1..beats {
        let rr = if rng.random_bool(0.03) {
            rng.random_range(3.0..6.0)
        } else {
            rng.random_range(0.5..1.3)
        };
        let last = *t.last().unwrap();
        t.push(last + rr);
    }
    t
}
