use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CaptureError;

/// Pixel rectangle, half-open: columns `x..x + width`, rows `y..y + height`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
}

impl Rect {
    pub fn new(x: usize, y: usize, width: usize, height: usize) -> Self {
        Self {
            x,
            y,
            width,
            height,
        }
    }

    pub fn fits(&self, frame_width: usize, frame_height: usize) -> bool {
        self.width > 0
            && self.height > 0
            && self.x + self.width <= frame_width
            && self.y + self.height <= frame_height
    }

    pub fn last_row(&self) -> usize {
        self.y + self.height - 1
    }

    pub fn last_col(&self) -> usize {
        self.x + self.width - 1
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.x, self.y, self.width, self.height)
    }
}

impl FromStr for Rect {
    type Err = String;

    /// Parses `x,y,width,height`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(format!("expected x,y,width,height, got `{s}`"));
        }
        let mut nums = [0usize; 4];
        for (slot, p) in nums.iter_mut().zip(&parts) {
            *slot = p
                .parse()
                .map_err(|_| format!("`{p}` is not a pixel count"))?;
        }
        Ok(Rect::new(nums[0], nums[1], nums[2], nums[3]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Top,
    Bottom,
    Left,
    Right,
}

impl Region {
    pub const ALL: [Region; 4] = [Region::Top, Region::Bottom, Region::Left, Region::Right];

    pub fn name(self) -> &'static str {
        match self {
            Region::Top => "top",
            Region::Bottom => "bottom",
            Region::Left => "left",
            Region::Right => "right",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Region {
    type Err = CaptureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Region::ALL
            .into_iter()
            .find(|r| r.name() == s.trim())
            .ok_or_else(|| CaptureError::UnknownName {
                what: "region",
                value: s.to_string(),
            })
    }
}

/// The four lamp regions observed in every frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionLayout {
    pub top: Rect,
    pub bottom: Rect,
    pub left: Rect,
    pub right: Rect,
}

impl RegionLayout {
    /// Top and bottom halves spanning all columns, left and right halves
    /// spanning all rows.
    pub fn halves(width: usize, height: usize) -> Self {
        let h2 = height / 2;
        let w2 = width / 2;
        Self {
            top: Rect::new(0, 0, width, h2),
            bottom: Rect::new(0, h2, width, height - h2),
            left: Rect::new(0, 0, w2, height),
            right: Rect::new(w2, 0, width - w2, height),
        }
    }

    pub fn get(&self, region: Region) -> Rect {
        match region {
            Region::Top => self.top,
            Region::Bottom => self.bottom,
            Region::Left => self.left,
            Region::Right => self.right,
        }
    }

    pub fn set(&mut self, region: Region, rect: Rect) {
        match region {
            Region::Top => self.top = rect,
            Region::Bottom => self.bottom = rect,
            Region::Left => self.left = rect,
            Region::Right => self.right = rect,
        }
    }

    pub fn validate(&self, width: usize, height: usize) -> Result<(), CaptureError> {
        for region in Region::ALL {
            let rect = self.get(region);
            if !rect.fits(width, height) {
                return Err(CaptureError::RegionOutOfFrame {
                    region,
                    rect,
                    width,
                    height,
                });
            }
        }
        Ok(())
    }
}
