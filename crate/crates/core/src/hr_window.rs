//! Heart rate averaged over temporal windows of different sizes, and how far
//! those averages drift apart.
//!
//! A record is cut into consecutive outer windows of `s1` seconds anchored
//! at the first beat. Inside each, inner windows of `s2 < s1` seconds slide
//! by `step`; an inner size of zero instead takes every single RR interval
//! of the outer window. Each inner heart rate is compared with the outer
//! one as a relative difference in percent.
//!
//! Window membership is half-open, `[start, start + size)`. A window's rate
//! uses the RR intervals between consecutive beats that are both inside it.

use serde::Serialize;
use thiserror::Error;

use crate::scalar::{mean, sorted_quantile, Real};
use crate::signal::first_non_increasing;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HrError {
    #[error("need at least 2 beats, got {0}")]
    TooFewBeats(usize),
    #[error("beat {index} is not later than the previous beat")]
    NonIncreasing { index: usize },
    #[error("beat {index} is not a finite time")]
    NonFinite { index: usize },
    #[error("window sizes must be finite, non-negative and strictly ascending")]
    InvalidSizes,
    #[error("window step must be positive and finite")]
    InvalidStep,
    #[error("window size must be positive, got {0} s (use the single-RR form for 0)")]
    InvalidSize(f64),
    #[error("heart rate must be positive, got {0}")]
    NonPositiveHr(f64),
    #[error("RR interval must be positive, got {0} s")]
    NonPositiveRr(f64),
    #[error("window holds {beats} beat(s); at least 2 are needed")]
    DegenerateWindow { beats: usize },
    #[error("record spans {span} s, shorter than the largest window ({needed} s)")]
    RecordTooShort { span: f64, needed: f64 },
    #[error("every window comparison was degenerate")]
    AllDegenerate,
    #[error("matrix has no differences to summarise")]
    EmptyMatrix,
    #[error("matrices use different window sizes")]
    SizeMismatch,
}

/// Annotated heartbeat times, seconds, strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct BeatSeries<T> {
    beat_times: Vec<T>,
}

impl<T: Real> BeatSeries<T> {
    pub fn new(beat_times: Vec<T>) -> Result<Self, HrError> {
        if beat_times.len() < 2 {
            return Err(HrError::TooFewBeats(beat_times.len()));
        }
        if let Some(index) = beat_times.iter().position(|t| !t.is_finite()) {
            return Err(HrError::NonFinite { index });
        }
        if let Some(index) = first_non_increasing(&beat_times) {
            return Err(HrError::NonIncreasing { index });
        }
        Ok(Self { beat_times })
    }

    pub fn beat_times(&self) -> &[T] {
        &self.beat_times
    }

    pub fn len(&self) -> usize {
        self.beat_times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beat_times.is_empty()
    }

    pub fn first(&self) -> T {
        self.beat_times[0]
    }

    pub fn last(&self) -> T {
        self.beat_times[self.beat_times.len() - 1]
    }

    /// Consecutive differences of the beat times.
    pub fn rr_intervals(&self) -> Vec<T> {
        self.beat_times.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Index range of the beats in `[start, end)`.
    fn range(&self, start: T, end: T) -> std::ops::Range<usize> {
        let lo = self.beat_times.partition_point(|t| *t < start);
        let hi = self.beat_times.partition_point(|t| *t < end);
        lo..hi.max(lo)
    }
}

/// Consecutive differences of `beats`.
pub fn rr_intervals<T: Real>(beats: &BeatSeries<T>) -> Vec<T> {
    beats.rr_intervals()
}

/// Window sizes (seconds, ascending; 0 denotes a single RR interval) and the
/// inner-window step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowSpec<T> {
    sizes: Vec<T>,
    step: T,
}

impl<T: Real> WindowSpec<T> {
    pub fn new(sizes: Vec<T>, step: T) -> Result<Self, HrError> {
        if !(step > T::zero()) || !step.is_finite() {
            return Err(HrError::InvalidStep);
        }
        let finite = sizes.iter().all(|s| s.is_finite() && *s >= T::zero());
        if sizes.is_empty() || !finite || first_non_increasing(&sizes).is_some() {
            return Err(HrError::InvalidSizes);
        }
        Ok(Self { sizes, step })
    }

    pub fn sizes(&self) -> &[T] {
        &self.sizes
    }

    pub fn step(&self) -> T {
        self.step
    }
}

impl<T: Real> Default for WindowSpec<T> {
    /// Sizes 0, 5, ..., 60 s with a 5 s step.
    fn default() -> Self {
        Self {
            sizes: (0..=12).map(|k| T::from_count(5 * k)).collect(),
            step: T::lit(5.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowHr<T> {
    pub bpm: T,
    /// Beats inside the window.
    pub beats: usize,
}

fn hr_from_range<T: Real>(rr: &[T], range: std::ops::Range<usize>) -> Result<WindowHr<T>, HrError> {
    let beats = range.len();
    if beats < 2 {
        return Err(HrError::DegenerateWindow { beats });
    }
    let total = rr[range.start..range.end - 1]
        .iter()
        .fold(T::zero(), |acc, x| acc + *x);
    Ok(WindowHr {
        bpm: T::lit(60.0) * T::from_count(beats - 1) / total,
        beats,
    })
}

/// Mean heart rate of the beats in `[window_start, window_start + size)`:
/// `60 (N - 1) / sum(RR)` over the `N - 1` intervals inside the window.
pub fn hr_of_window<T: Real>(
    beats: &BeatSeries<T>,
    window_start: T,
    size: T,
) -> Result<WindowHr<T>, HrError> {
    if !(size > T::zero()) || !size.is_finite() {
        return Err(HrError::InvalidSize(size.to_f64_lossy()));
    }
    let rr = beats.rr_intervals();
    hr_from_range(&rr, beats.range(window_start, window_start + size))
}

/// Heart rate of a single RR interval, bpm.
pub fn hr_of_rr<T: Real>(rr: T) -> Result<T, HrError> {
    if !(rr > T::zero()) || !rr.is_finite() {
        return Err(HrError::NonPositiveRr(rr.to_f64_lossy()));
    }
    Ok(T::lit(60.0) / rr)
}

/// `|outer - inner| / outer * 100`.
pub fn relative_difference<T: Real>(hr_outer: T, hr_inner: T) -> Result<T, HrError> {
    if !(hr_outer > T::zero()) {
        return Err(HrError::NonPositiveHr(hr_outer.to_f64_lossy()));
    }
    Ok((hr_outer - hr_inner).abs() / hr_outer * T::lit(100.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellSummary<T> {
    pub mean: T,
    pub count: usize,
    pub min: T,
    pub q1: T,
    pub median: T,
    pub q3: T,
    pub max: T,
}

impl<T: Real> CellSummary<T> {
    /// Summary of `values`; `None` when empty.
    pub fn of(values: &[T]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("differences are finite"));
        Some(Self {
            mean: mean(values),
            count: values.len(),
            min: sorted[0],
            q1: sorted_quantile(&sorted, T::lit(0.25)),
            median: sorted_quantile(&sorted, T::lit(0.5)),
            q3: sorted_quantile(&sorted, T::lit(0.75)),
            max: sorted[sorted.len() - 1],
        })
    }
}

/// Differences for one `(s1, s2)` pair, `s1 > s2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffCell<T> {
    pub outer: T,
    pub inner: T,
    /// Relative differences in the order they were produced.
    #[serde(skip)]
    pub values: Vec<T>,
    pub summary: Option<CellSummary<T>>,
    /// Outer windows with fewer than two beats.
    pub skipped_outer: usize,
    /// Inner windows with fewer than two beats.
    pub skipped_inner: usize,
}

impl<T: Real> DiffCell<T> {
    fn new(outer: T, inner: T) -> Self {
        Self {
            outer,
            inner,
            values: Vec::new(),
            summary: None,
            skipped_outer: 0,
            skipped_inner: 0,
        }
    }

    fn finish(&mut self) {
        self.summary = CellSummary::of(&self.values);
    }
}

/// Lower-triangular table of averaged differences, one cell per `s1 > s2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffMatrix<T> {
    sizes: Vec<T>,
    step: T,
    /// Ordered by outer size, then inner size.
    cells: Vec<DiffCell<T>>,
}

impl<T: Real> DiffMatrix<T> {
    pub fn sizes(&self) -> &[T] {
        &self.sizes
    }

    /// Sizes that appear as outer windows (all but the smallest).
    pub fn outer_sizes(&self) -> &[T] {
        &self.sizes[1..]
    }

    /// Sizes that appear as inner windows (all but the largest).
    pub fn inner_sizes(&self) -> &[T] {
        &self.sizes[..self.sizes.len() - 1]
    }

    pub fn step(&self) -> T {
        self.step
    }

    pub fn cells(&self) -> &[DiffCell<T>] {
        &self.cells
    }

    pub fn cell(&self, outer: T, inner: T) -> Option<&DiffCell<T>> {
        self.cells
            .iter()
            .find(|c| c.outer == outer && c.inner == inner)
    }

    /// Mean difference of a cell, `None` when the pair is not below the
    /// diagonal or has no samples.
    pub fn mean_d(&self, outer: T, inner: T) -> Option<T> {
        self.cell(outer, inner)?.summary.map(|s| s.mean)
    }

    pub fn total_count(&self) -> usize {
        self.cells.iter().map(|c| c.values.len()).sum()
    }

    pub fn skipped_windows(&self) -> (usize, usize) {
        self.cells.iter().fold((0, 0), |(o, i), c| {
            (o + c.skipped_outer, i + c.skipped_inner)
        })
    }

    /// Pools several records: per cell the differences are concatenated in
    /// record order, so each cell mean is the count-weighted average.
    pub fn pooled(parts: &[DiffMatrix<T>]) -> Result<Self, HrError> {
        let first = parts.first().ok_or(HrError::EmptyMatrix)?;
        let mut out = Self {
            sizes: first.sizes.clone(),
            step: first.step,
            cells: first
                .cells
                .iter()
                .map(|c| DiffCell::new(c.outer, c.inner))
                .collect(),
        };
        for part in parts {
            if part.sizes != out.sizes || part.step != out.step {
                return Err(HrError::SizeMismatch);
            }
            for (dst, src) in out.cells.iter_mut().zip(&part.cells) {
                dst.values.extend_from_slice(&src.values);
                dst.skipped_outer += src.skipped_outer;
                dst.skipped_inner += src.skipped_inner;
            }
        }
        out.cells.iter_mut().for_each(DiffCell::finish);
        Ok(out)
    }
}

/// Number of inner-window positions `i` with `i * step + inner <= outer`.
fn inner_positions<T: Real>(outer: T, inner: T, step: T) -> usize {
    let room = (outer - inner) / step;
    (room + T::lit(1e-9)).floor().to_usize().unwrap_or(0) + 1
}

/// Runs the nested-window comparison over one record.
pub fn window_diff_matrix<T: Real>(
    beats: &BeatSeries<T>,
    spec: &WindowSpec<T>,
) -> Result<DiffMatrix<T>, HrError> {
    let sizes = spec.sizes();
    if sizes.len() < 2 {
        return Err(HrError::InvalidSizes);
    }
    let largest = sizes[sizes.len() - 1];
    let span = beats.last() - beats.first();
    if span < largest {
        return Err(HrError::RecordTooShort {
            span: span.to_f64_lossy(),
            needed: largest.to_f64_lossy(),
        });
    }
    let rr = beats.rr_intervals();
    let times = beats.beat_times();
    let origin = beats.first();
    let end = beats.last();
    let step = spec.step();
    let mut cells = Vec::new();

    for (oi, &outer) in sizes.iter().enumerate() {
        for &inner in &sizes[..oi] {
            let mut cell = DiffCell::new(outer, inner);
            let mut k = 0usize;
            loop {
                let start = origin + T::from_count(k) * outer;
                if start + outer > end {
                    break;
                }
                k += 1;
                let range = beats.range(start, start + outer);
                let outer_hr = match hr_from_range(&rr, range.clone()) {
                    Ok(hr) => hr.bpm,
                    Err(_) => {
                        cell.skipped_outer += 1;
                        continue;
                    }
                };
                if inner == T::zero() {
                    for j in range.start..range.end - 1 {
                        let inner_hr = T::lit(60.0) / (times[j + 1] - times[j]);
                        cell.values.push(relative_difference(outer_hr, inner_hr)?);
                    }
                    continue;
                }
                for i in 0..inner_positions(outer, inner, step) {
                    let inner_start = start + T::from_count(i) * step;
                    match hr_from_range(&rr, beats.range(inner_start, inner_start + inner)) {
                        Ok(hr) => cell.values.push(relative_difference(outer_hr, hr.bpm)?),
                        Err(_) => cell.skipped_inner += 1,
                    }
                }
            }
            cell.finish();
            cells.push(cell);
        }
    }
    if cells.iter().all(|c| c.values.is_empty()) {
        return Err(HrError::AllDegenerate);
    }
    Ok(DiffMatrix {
        sizes: sizes.to_vec(),
        step,
        cells,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Grouping {
    ByPair,
    BySizeGap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoxGroup<T> {
    Pair { outer: T, inner: T },
    Gap { gap: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxRow<T> {
    pub group: BoxGroup<T>,
    pub stats: CellSummary<T>,
}

/// Distribution summaries per cell, or pooled over cells sharing `s1 - s2`.
/// Groups without samples are left out.
pub fn boxplot_stats<T: Real>(
    matrix: &DiffMatrix<T>,
    grouping: Grouping,
) -> Result<Vec<BoxRow<T>>, HrError> {
    if matrix.total_count() == 0 {
        return Err(HrError::EmptyMatrix);
    }
    let rows = match grouping {
        Grouping::ByPair => matrix
            .cells
            .iter()
            .filter_map(|c| {
                CellSummary::of(&c.values).map(|stats| BoxRow {
                    group: BoxGroup::Pair {
                        outer: c.outer,
                        inner: c.inner,
                    },
                    stats,
                })
            })
            .collect(),
        Grouping::BySizeGap => {
            let mut gaps: Vec<T> = matrix.cells.iter().map(|c| c.outer - c.inner).collect();
            gaps.sort_by(|a, b| a.partial_cmp(b).expect("finite sizes"));
            gaps.dedup();
            gaps.into_iter()
                .filter_map(|gap| {
                    let pooled: Vec<T> = matrix
                        .cells
                        .iter()
                        .filter(|c| c.outer - c.inner == gap)
                        .flat_map(|c| c.values.iter().copied())
                        .collect();
                    CellSummary::of(&pooled).map(|stats| BoxRow {
                        group: BoxGroup::Gap { gap },
                        stats,
                    })
                })
                .collect()
        }
    };
    Ok(rows)
}
