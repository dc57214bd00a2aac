//! Two-dimensional sample grids and the replicate boundary rule shared by
//! every stencil in the crate.
//!
//! [`Grid`] is the unconstrained row-major container. [`ScalarField`] wraps a
//! `Grid<f64>` whose samples are finite and lie in `[0, 1]`; [`BinaryMap`]
//! wraps a `Grid<u8>` over `{0, 1}` where `0` is text (ink) and `1` is
//! background.

use std::ops::Deref;

use crate::error::{Error, Result};

/// How stencil reads outside the grid are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryRule {
    /// Out-of-range coordinates clamp to the nearest in-grid pixel
    /// (Neumann / replicate padding).
    #[default]
    Replicate,
}

/// Row-major 2-D grid of samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

/// A grid of real values with no range restriction (PDE term fields,
/// fractional differences, ...).
pub type RealGrid = Grid<f64>;

impl<T: Copy> Grid<T> {
    pub fn new(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimension(format!(
                "grid must be at least 1x1, got {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(Error::Dimension(format!(
                "{width}x{height} grid needs {} samples, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(Grid { width, height, data })
    }

    /// Builds a grid by evaluating `f(x, y)` at every pixel.
    ///
    /// Panics if either dimension is zero.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(width > 0 && height > 0, "grid must be at least 1x1");
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Grid { width, height, data }
    }

    pub fn filled(width: usize, height: usize, value: T) -> Self {
        Self::from_fn(width, height, |_, _| value)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> T {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: T) {
        self.data[y * self.width + x] = value;
    }

    /// Reads the sample at a possibly out-of-range coordinate under `rule`.
    #[inline]
    pub fn sample_with(&self, x: isize, y: isize, rule: BoundaryRule) -> T {
        match rule {
            BoundaryRule::Replicate => {
                let cx = x.clamp(0, self.width as isize - 1) as usize;
                let cy = y.clamp(0, self.height as isize - 1) as usize;
                self.data[cy * self.width + cx]
            }
        }
    }

    /// Replicate-boundary read.
    #[inline]
    pub fn sample(&self, x: isize, y: isize) -> T {
        self.sample_with(x, y, BoundaryRule::Replicate)
    }

    pub fn map<U: Copy>(&self, f: impl FnMut(T) -> U) -> Grid<U> {
        Grid {
            width: self.width,
            height: self.height,
            data: self.data.iter().copied().map(f).collect(),
        }
    }

    pub fn same_shape<U>(&self, other: &Grid<U>) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub(crate) fn ensure_same_shape<U>(&self, other: &Grid<U>, what: &str) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "{what}: {}x{} vs {}x{}",
                self.width, self.height, other.width, other.height
            )))
        }
    }
}

/// Replicate-padded read `samples[clamp(y) * width + clamp(x)]`; total over
/// all integer coordinates.
#[inline]
pub fn sample_at<T: Copy>(grid: &Grid<T>, x: isize, y: isize, rule: BoundaryRule) -> T {
    grid.sample_with(x, y, rule)
}

/// Gray-level image with every sample finite and in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField(Grid<f64>);

impl ScalarField {
    pub fn new(width: usize, height: usize, samples: Vec<f64>) -> Result<Self> {
        Self::from_grid(Grid::new(width, height, samples)?)
    }

    pub fn from_grid(grid: Grid<f64>) -> Result<Self> {
        if let Some((i, v)) = grid
            .data
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && (0.0..=1.0).contains(*v)))
        {
            return Err(Error::Domain(format!(
                "sample {i} = {v} is not a finite value in [0, 1]"
            )));
        }
        Ok(ScalarField(grid))
    }

    /// Clamps every sample into `[0, 1]`. Non-finite samples are a bug in the
    /// caller.
    pub fn from_grid_clamped(grid: Grid<f64>) -> Self {
        debug_assert!(grid.data.iter().all(|v| v.is_finite()));
        ScalarField(grid.map(|v| v.clamp(0.0, 1.0)))
    }

    pub fn constant(width: usize, height: usize, value: f64) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimension("field must be at least 1x1".into()));
        }
        Self::from_grid(Grid::filled(width, height, value))
    }

    pub fn from_fn(width: usize, height: usize, f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimension("field must be at least 1x1".into()));
        }
        Self::from_grid(Grid::from_fn(width, height, f))
    }

    pub fn as_grid(&self) -> &Grid<f64> {
        &self.0
    }

    pub fn into_grid(self) -> Grid<f64> {
        self.0
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.0
            .data
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    pub fn mean(&self) -> f64 {
        self.0.data.iter().sum::<f64>() / self.0.len() as f64
    }
}

impl Deref for ScalarField {
    type Target = Grid<f64>;

    fn deref(&self) -> &Grid<f64> {
        &self.0
    }
}

/// Binary image: `0` = text (positive class), `1` = background.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMap(Grid<u8>);

impl BinaryMap {
    pub const TEXT: u8 = 0;
    pub const BACKGROUND: u8 = 1;

    pub fn new(width: usize, height: usize, bits: Vec<u8>) -> Result<Self> {
        let grid = Grid::new(width, height, bits)?;
        if let Some((i, b)) = grid.data.iter().enumerate().find(|(_, b)| **b > 1) {
            return Err(Error::Domain(format!("bit {i} = {b} is not 0 or 1")));
        }
        Ok(BinaryMap(grid))
    }

    /// Builds a map from a text predicate.
    pub fn from_fn(width: usize, height: usize, mut is_text: impl FnMut(usize, usize) -> bool) -> Self {
        BinaryMap(Grid::from_fn(width, height, |x, y| {
            if is_text(x, y) {
                Self::TEXT
            } else {
                Self::BACKGROUND
            }
        }))
    }

    pub fn filled(width: usize, height: usize, bit: u8) -> Self {
        assert!(bit <= 1);
        BinaryMap(Grid::filled(width, height, bit))
    }

    #[inline]
    pub fn is_text(&self, x: usize, y: usize) -> bool {
        self.0.get(x, y) == Self::TEXT
    }

    pub fn text_count(&self) -> usize {
        self.0.data.iter().filter(|&&b| b == Self::TEXT).count()
    }

    pub fn complement(&self) -> BinaryMap {
        BinaryMap(self.0.map(|b| 1 - b))
    }

    pub fn as_grid(&self) -> &Grid<u8> {
        &self.0
    }

    /// `{0, 1}` as a scalar field (text = 0.0, background = 1.0).
    pub fn to_field(&self) -> ScalarField {
        ScalarField(self.0.map(f64::from))
    }
}

impl Deref for BinaryMap {
    type Target = Grid<u8>;

    fn deref(&self) -> &Grid<u8> {
        &self.0
    }
}
