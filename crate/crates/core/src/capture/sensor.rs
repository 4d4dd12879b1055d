use super::{CameraModel, CaptureError, Rect, Region, RegionLayout, ScanAxis, Waveform};
use crate::scalar::Real;
use crate::signal::TimestampedSignal;

/// Offsets sampled per region when averaging the waveform over its scan range.
pub const DEFAULT_SUBGRID: usize = 32;

fn line_offset<T: Real>(model: &CameraModel<T>, line: usize) -> T {
    let lines = model.scan_lines();
    model.readout_time() * (T::from_count(line) / T::from_count(lines - 1))
}

/// Delay of pixel (`row`, `col`) after the frame timestamp.
pub fn scan_offset<T: Real>(
    model: &CameraModel<T>,
    row: usize,
    col: usize,
) -> Result<T, CaptureError> {
    if row >= model.height() || col >= model.width() {
        return Err(CaptureError::PixelOutOfRange {
            row,
            col,
            width: model.width(),
            height: model.height(),
        });
    }
    let line = match model.scan_axis() {
        ScanAxis::Vertical => row,
        ScanAxis::Horizontal => col,
    };
    Ok(line_offset(model, line))
}

/// Scan offsets covering `rect`: `subgrid` evenly spaced values between the
/// offsets of its first and last scan line. Every line of a rectangle holds
/// the same pixel count, so these points sample the pixel offset
/// distribution with the exact mean.
fn rect_offsets<T: Real>(model: &CameraModel<T>, rect: Rect, subgrid: usize) -> Vec<T> {
    let (first, last) = match model.scan_axis() {
        ScanAxis::Vertical => (rect.y, rect.last_row()),
        ScanAxis::Horizontal => (rect.x, rect.last_col()),
    };
    let lo = line_offset(model, first);
    let hi = line_offset(model, last);
    if subgrid == 1 {
        return vec![(lo + hi) / T::lit(2.0)];
    }
    let denom = T::from_count(subgrid - 1);
    (0..subgrid)
        .map(|i| lo + (hi - lo) * T::from_count(i) / denom)
        .collect()
}

/// Mean brightness of `rect` in each frame.
pub fn capture_rect_signal<T: Real>(
    wave: &Waveform<T>,
    model: &CameraModel<T>,
    rect: Rect,
    timestamps: &[T],
    subgrid: usize,
) -> Result<TimestampedSignal<T>, CaptureError> {
    if subgrid == 0 {
        return Err(CaptureError::EmptySubgrid);
    }
    if !rect.fits(model.width(), model.height()) {
        return Err(CaptureError::RegionOutOfFrame {
            region: Region::Top,
            rect,
            width: model.width(),
            height: model.height(),
        });
    }
    let offsets = rect_offsets(model, rect, subgrid);
    let count = T::from_count(offsets.len());
    let values = timestamps
        .iter()
        .map(|&t| {
            let mut acc = T::zero();
            for &off in &offsets {
                acc = acc + wave.eval(t + off)?;
            }
            Ok(acc / count)
        })
        .collect::<Result<Vec<T>, CaptureError>>()?;
    Ok(TimestampedSignal::new(timestamps.to_vec(), values)?)
}

/// Mean brightness of the whole frame in each frame.
pub fn capture_frame_signal<T: Real>(
    wave: &Waveform<T>,
    model: &CameraModel<T>,
    timestamps: &[T],
) -> Result<TimestampedSignal<T>, CaptureError> {
    let full = Rect::new(0, 0, model.width(), model.height());
    capture_rect_signal(wave, model, full, timestamps, DEFAULT_SUBGRID)
}

/// Brightness series of the four lamp regions, sharing frame timestamps.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionSignals<T> {
    pub top: TimestampedSignal<T>,
    pub bottom: TimestampedSignal<T>,
    pub left: TimestampedSignal<T>,
    pub right: TimestampedSignal<T>,
}

impl<T: Real> RegionSignals<T> {
    pub fn get(&self, region: Region) -> &TimestampedSignal<T> {
        match region {
            Region::Top => &self.top,
            Region::Bottom => &self.bottom,
            Region::Left => &self.left,
            Region::Right => &self.right,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Region, &TimestampedSignal<T>)> {
        Region::ALL.into_iter().map(move |r| (r, self.get(r)))
    }
}

pub fn capture_region_signals<T: Real>(
    wave: &Waveform<T>,
    model: &CameraModel<T>,
    layout: &RegionLayout,
    timestamps: &[T],
) -> Result<RegionSignals<T>, CaptureError> {
    capture_region_signals_with(wave, model, layout, timestamps, DEFAULT_SUBGRID)
}

/// As [`capture_region_signals`] with an explicit number of offsets per region.
pub fn capture_region_signals_with<T: Real>(
    wave: &Waveform<T>,
    model: &CameraModel<T>,
    layout: &RegionLayout,
    timestamps: &[T],
    subgrid: usize,
) -> Result<RegionSignals<T>, CaptureError> {
    layout.validate(model.width(), model.height())?;
    let grab = |rect| capture_rect_signal(wave, model, rect, timestamps, subgrid);
    Ok(RegionSignals {
        top: grab(layout.top)?,
        bottom: grab(layout.bottom)?,
        left: grab(layout.left)?,
        right: grab(layout.right)?,
    })
}
