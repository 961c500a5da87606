//! Slice-chained 2D decomposition of grayscale images.
//!
//! Each scan line is decomposed with one FastIMD step. The first line uses
//! its own inflexion polyline as the trend estimate; every following line
//! uses the trend of the line before it, which keeps neighbouring line
//! trends consistent. Scanning rows and then columns gives the 2D trend.

use alloc::vec::Vec;

use crate::eef::EefOptions;
use crate::error::{Error, Result};
use crate::imd::imd_step_with;
use crate::math::rms;
use crate::series::Series;

/// Change below which a mode's trend is considered converged.
const CONVERGED_RMS: f64 = 1e-6;

/// Row-major grid of intensities.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(Error::InvalidImage);
        }
        if pixels.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { width, height, pixels })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    /// Pixelwise `self - other`.
    pub fn minus(&self, other: &GrayImage) -> Result<GrayImage> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::InvalidImage);
        }
        let pixels = self.pixels.iter().zip(&other.pixels).map(|(a, b)| a - b).collect();
        Ok(GrayImage {
            width: self.width,
            height: self.height,
            pixels,
        })
    }

    fn slice_count(&self, direction: Direction) -> usize {
        match direction {
            Direction::Horizontal => self.height,
            Direction::Vertical => self.width,
        }
    }

    fn slice_len(&self, direction: Direction) -> usize {
        match direction {
            Direction::Horizontal => self.width,
            Direction::Vertical => self.height,
        }
    }

    fn slice(&self, direction: Direction, k: usize) -> Vec<f64> {
        match direction {
            Direction::Horizontal => self.pixels[k * self.width..(k + 1) * self.width].to_vec(),
            Direction::Vertical => (0..self.height).map(|y| self.get(k, y)).collect(),
        }
    }

    fn set_slice(&mut self, direction: Direction, k: usize, values: &[f64]) {
        match direction {
            Direction::Horizontal => self.pixels[k * self.width..(k + 1) * self.width].copy_from_slice(values),
            Direction::Vertical => {
                for (y, v) in values.iter().enumerate() {
                    self.pixels[y * self.width + k] = *v;
                }
            }
        }
    }
}

/// Scan direction: `Horizontal` slices are rows, `Vertical` slices columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Horizontal,
    Vertical,
}

impl Direction {
    pub fn perpendicular(self) -> Self {
        match self {
            Direction::Horizontal => Direction::Vertical,
            Direction::Vertical => Direction::Horizontal,
        }
    }
}

/// Order of the two scans inside one mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScanOrder {
    #[default]
    HorizontalFirst,
    VerticalFirst,
}

impl ScanOrder {
    fn first(self) -> Direction {
        match self {
            ScanOrder::HorizontalFirst => Direction::Horizontal,
            ScanOrder::VerticalFirst => Direction::Vertical,
        }
    }
}

/// Trend and fluctuation of one 2D mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageMode {
    pub index: usize,
    pub trend: GrayImage,
    /// Input of this mode minus its trend.
    pub fluctuation: GrayImage,
}

/// Trend of every slice in `direction`, each slice using the previous
/// slice's trend as its estimate.
pub fn decompose_direction(image: &GrayImage, direction: Direction, degree: usize) -> Result<GrayImage> {
    scan(image, direction, &EefOptions::with_degree(degree), true)
}

/// Baseline without chaining: every slice gets its own inflexion estimate.
pub fn decompose_direction_independent(image: &GrayImage, direction: Direction, degree: usize) -> Result<GrayImage> {
    scan(image, direction, &EefOptions::with_degree(degree), false)
}

fn scan(image: &GrayImage, direction: Direction, options: &EefOptions, chained: bool) -> Result<GrayImage> {
    let len = image.slice_len(direction);
    if len < 4 {
        return Err(Error::ImageTooSmall);
    }
    let times: Vec<f64> = (0..len).map(|i| i as f64).collect();
    let mut out = image.clone();
    let mut previous: Option<Series> = None;
    for k in 0..image.slice_count(direction) {
        let series = Series::new(times.clone(), image.slice(direction, k))?;
        let estimate = if chained { previous.as_ref() } else { None };
        let mode = imd_step_with(&series, options, estimate)?;
        out.set_slice(direction, k, mode.trend.values());
        previous = Some(mode.trend);
    }
    Ok(out)
}

/// Modes scanned horizontally then vertically.
pub fn decompose_image(image: &GrayImage, degree: usize, max_modes: usize) -> Result<Vec<ImageMode>> {
    decompose_image_with(image, &EefOptions::with_degree(degree), max_modes, ScanOrder::default())
}

/// Repeats two-direction scans on successive trends. Stops after
/// `max_modes` modes or once a mode's trend differs from its input by less
/// than 1e-6 RMS; that last mode is still returned.
pub fn decompose_image_with(
    image: &GrayImage,
    options: &EefOptions,
    max_modes: usize,
    order: ScanOrder,
) -> Result<Vec<ImageMode>> {
    if image.width < 4 || image.height < 4 {
        return Err(Error::ImageTooSmall);
    }
    if max_modes == 0 {
        return Err(Error::InvalidParameter("max_modes must be at least 1"));
    }
    let first = order.first();
    let mut modes = Vec::new();
    let mut input = image.clone();
    while modes.len() < max_modes {
        let half = scan(&input, first, options, true)?;
        let trend = scan(&half, first.perpendicular(), options, true)?;
        let fluctuation = input.minus(&trend)?;
        let change = rms(fluctuation.pixels());
        modes.push(ImageMode {
            index: modes.len() + 1,
            trend: trend.clone(),
            fluctuation,
        });
        if change < CONVERGED_RMS {
            break;
        }
        input = trend;
    }
    Ok(modes)
}

/// RMS of the differences between neighbouring slices of `direction`, i.e.
/// across the scan lines. Zero when there is only one slice.
pub fn inter_slice_smoothness(trend: &GrayImage, direction: Direction) -> f64 {
    let count = trend.slice_count(direction);
    if count < 2 {
        return 0.0;
    }
    let mut diffs = Vec::with_capacity((count - 1) * trend.slice_len(direction));
    let mut prev = trend.slice(direction, 0);
    for k in 1..count {
        let cur = trend.slice(direction, k);
        diffs.extend(cur.iter().zip(&prev).map(|(a, b)| a - b));
        prev = cur;
    }
    rms(&diffs)
}
