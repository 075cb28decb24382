//! The 2D diffusive environment: chemoattractant trail concentrations,
//! particle occupancy, habitable geometry and the damped mean-filter
//! diffusion update.
//!
//! The arena is a fixed lattice holding a rectangular habitable region.
//! Geometric constraint shrinks the habitable region to the leftmost
//! fraction of its full width; trail deposited outside the habitable
//! region is deleted on every diffusion pass.

use std::io::Write;

use crate::error::{Error, Result};

/// Axis-aligned cell rectangle, origin at the top-left cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
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

    /// One past the rightmost column.
    pub fn right(&self) -> usize {
        self.x + self.width
    }

    /// One past the bottom row.
    pub fn bottom(&self) -> usize {
        self.y + self.height
    }

    pub fn area(&self) -> usize {
        self.width * self.height
    }

    pub fn contains_cell(&self, x: i64, y: i64) -> bool {
        x >= self.x as i64 && y >= self.y as i64 && x < self.right() as i64 && y < self.bottom() as i64
    }

    /// True when `self` lies entirely inside `outer`.
    pub fn fits_within(&self, outer: &Rect) -> bool {
        self.x >= outer.x && self.y >= outer.y && self.right() <= outer.right() && self.bottom() <= outer.bottom()
    }
}

/// Arena dimensions and the full habitable rectangle, plus the length
/// fraction used to geometrically constrain it.
///
/// The constrained region keeps the leftmost `round(fraction * width)`
/// columns of the habitable rectangle, so the sampling window at the left
/// edge stays habitable for every fraction.
#[derive(Debug, Clone, Copy)]
pub struct ArenaGeometry {
    pub lattice_width: usize,
    pub lattice_height: usize,
    pub habitable_origin_x: usize,
    pub habitable_origin_y: usize,
    pub habitable_width: usize,
    pub habitable_height: usize,
    pub fraction: f64,
}

impl Default for ArenaGeometry {
    fn default() -> Self {
        // 360x66 arena with a centred 300x20 habitable region.
        Self {
            lattice_width: 360,
            lattice_height: 66,
            habitable_origin_x: 30,
            habitable_origin_y: 23,
            habitable_width: 300,
            habitable_height: 20,
            fraction: 1.0,
        }
    }
}

impl ArenaGeometry {
    pub fn with_fraction(mut self, fraction: f64) -> Self {
        self.fraction = fraction;
        self
    }

    /// The full (unconstrained) habitable rectangle.
    pub fn full_rect(&self) -> Rect {
        Rect::new(
            self.habitable_origin_x,
            self.habitable_origin_y,
            self.habitable_width,
            self.habitable_height,
        )
    }

    /// Width of the constrained habitable region in columns.
    pub fn constrained_width(&self) -> usize {
        (self.fraction * self.habitable_width as f64).round() as usize
    }

    /// The constrained habitable rectangle: the leftmost columns of the
    /// full habitable rectangle.
    pub fn constrained_rect(&self) -> Rect {
        Rect::new(
            self.habitable_origin_x,
            self.habitable_origin_y,
            self.constrained_width(),
            self.habitable_height,
        )
    }

    pub fn full_cell_count(&self) -> usize {
        self.habitable_width * self.habitable_height
    }

    pub fn validate(&self) -> Result<()> {
        if self.lattice_width == 0 || self.lattice_height == 0 {
            return Err(Error::InvalidGeometry("lattice dimensions must be nonzero".into()));
        }
        if self.habitable_width == 0 || self.habitable_height == 0 {
            return Err(Error::InvalidGeometry("habitable dimensions must be nonzero".into()));
        }
        let lattice = Rect::new(0, 0, self.lattice_width, self.lattice_height);
        if !self.full_rect().fits_within(&lattice) {
            return Err(Error::InvalidGeometry(format!(
                "habitable region {}x{} at ({}, {}) exceeds the {}x{} lattice",
                self.habitable_width,
                self.habitable_height,
                self.habitable_origin_x,
                self.habitable_origin_y,
                self.lattice_width,
                self.lattice_height
            )));
        }
        if !self.fraction.is_finite() || self.fraction <= 0.0 || self.fraction > 1.0 {
            return Err(Error::InvalidGeometry(format!(
                "fraction must lie in (0, 1], got {}",
                self.fraction
            )));
        }
        Ok(())
    }
}

/// Boolean habitability per lattice cell.
#[derive(Debug, Clone)]
pub struct HabitableMask {
    width: usize,
    height: usize,
    cells: Vec<bool>,
    rect: Rect,
}

impl HabitableMask {
    /// Builds the mask for the geometry's constrained habitable rectangle.
    pub fn build(geometry: &ArenaGeometry) -> Result<Self> {
        geometry.validate()?;
        let rect = geometry.constrained_rect();
        let mut cells = vec![false; geometry.lattice_width * geometry.lattice_height];
        for y in rect.y..rect.bottom() {
            for x in rect.x..rect.right() {
                cells[y * geometry.lattice_width + x] = true;
            }
        }
        Ok(Self {
            width: geometry.lattice_width,
            height: geometry.lattice_height,
            cells,
            rect,
        })
    }

    /// A mask marking every cell of a `width` x `height` lattice habitable.
    pub fn full(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            cells: vec![true; width * height],
            rect: Rect::new(0, 0, width, height),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// The rectangle the mask was built from.
    pub fn rect(&self) -> Rect {
        self.rect
    }

    /// False for any coordinate outside the lattice.
    pub fn is_habitable(&self, x: i64, y: i64) -> bool {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            return false;
        }
        self.cells[y as usize * self.width + x as usize]
    }

    pub fn habitable_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }
}

/// 2D chemoattractant concentration lattice. All values stay >= 0.
#[derive(Debug, Clone)]
pub struct TrailField {
    width: usize,
    height: usize,
    values: Vec<f64>,
    scratch: Vec<f64>,
}

impl TrailField {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            values: vec![0.0; width * height],
            scratch: vec![0.0; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    fn index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    /// Concentration at a cell; 0 outside the lattice. Sensors use this so
    /// off-lattice reads are neutral rather than an error.
    #[inline]
    pub fn sample(&self, x: i64, y: i64) -> f64 {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            return 0.0;
        }
        self.values[y as usize * self.width + x as usize]
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[self.index(x, y)]
    }

    pub fn set(&mut self, x: usize, y: usize, value: f64) {
        let i = self.index(x, y);
        self.values[i] = value;
    }

    /// Adds `amount` to one cell, leaving every other cell untouched.
    pub fn deposit(&mut self, x: i64, y: i64, amount: f64) -> Result<()> {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            return Err(Error::OutOfBounds {
                x,
                y,
                width: self.width,
                height: self.height,
            });
        }
        if !amount.is_finite() || amount < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "deposit amount must be finite and non-negative, got {amount}"
            )));
        }
        let i = y as usize * self.width + x as usize;
        self.values[i] += amount;
        Ok(())
    }

    /// In-bounds deposit used by the motor stage once the target cell has
    /// already been checked against the mask.
    #[inline]
    pub(crate) fn add(&mut self, x: usize, y: usize, amount: f64) {
        let i = y * self.width + x;
        self.values[i] += amount;
    }

    /// One damped 3x3 mean-filter pass.
    ///
    /// Every habitable cell becomes `damp` times the mean of its 3x3
    /// neighbourhood; out-of-lattice neighbours contribute 0 and the
    /// divisor stays 9, so mass leaks at the lattice edge. Cells outside
    /// the mask are zeroed, deleting trail that diffuses out of the
    /// habitable region.
    pub fn diffuse(&mut self, mask: &HabitableMask, damp: f64) -> Result<()> {
        if mask.width() != self.width || mask.height() != self.height {
            return Err(Error::DimensionMismatch {
                expected_width: self.width,
                expected_height: self.height,
                width: mask.width(),
                height: mask.height(),
            });
        }
        let w = self.width as i64;
        let h = self.height as i64;
        let factor = damp / 9.0;
        self.scratch.fill(0.0);
        let rect = mask.rect();
        for y in rect.y..rect.bottom().min(self.height) {
            for x in rect.x..rect.right().min(self.width) {
                if !mask.cells[y * self.width + x] {
                    continue;
                }
                let mut sum = 0.0;
                for dy in -1i64..=1 {
                    let ny = y as i64 + dy;
                    if ny < 0 || ny >= h {
                        continue;
                    }
                    let row = ny as usize * self.width;
                    for dx in -1i64..=1 {
                        let nx = x as i64 + dx;
                        if nx < 0 || nx >= w {
                            continue;
                        }
                        sum += self.values[row + nx as usize];
                    }
                }
                self.scratch[y * self.width + x] = sum * factor;
            }
        }
        std::mem::swap(&mut self.values, &mut self.scratch);
        Ok(())
    }

    /// Arithmetic mean over a window of cells.
    pub fn mean_in_window(&self, window: Rect) -> Result<f64> {
        let lattice = Rect::new(0, 0, self.width, self.height);
        if window.area() == 0 || !window.fits_within(&lattice) {
            return Err(Error::InvalidArgument(format!(
                "window {}x{} at ({}, {}) exceeds the {}x{} lattice",
                window.width, window.height, window.x, window.y, self.width, self.height
            )));
        }
        let mut sum = 0.0;
        for y in window.y..window.bottom() {
            let row = y * self.width;
            for x in window.x..window.right() {
                sum += self.values[row + x];
            }
        }
        Ok(sum / window.area() as f64)
    }

    /// Total concentration over the whole lattice.
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Plain-text grid: one row per line, space-separated decimal values.
    pub fn write_text_grid<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        for y in 0..self.height {
            let row = &self.values[y * self.width..(y + 1) * self.width];
            let mut first = true;
            for v in row {
                if !first {
                    write!(out, " ")?;
                }
                write!(out, "{v}")?;
                first = false;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    /// 16-bit binary PGM snapshot, linearly scaled; the original value
    /// range is recorded in a header comment.
    pub fn write_pgm16<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        let min = self.values.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        writeln!(out, "P5")?;
        writeln!(out, "# min={min} max={max}")?;
        writeln!(out, "{} {}", self.width, self.height)?;
        writeln!(out, "65535")?;
        let span = max - min;
        for v in &self.values {
            let scaled = if span > 0.0 {
                ((v - min) / span * 65535.0).round() as u16
            } else {
                0
            };
            out.write_all(&scaled.to_be_bytes())?;
        }
        Ok(())
    }
}

/// Per-cell particle occupancy; at most one particle per lattice site.
#[derive(Debug, Clone)]
pub struct OccupancyGrid {
    width: usize,
    height: usize,
    cells: Vec<Option<u32>>,
}

impl OccupancyGrid {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            cells: vec![None; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    fn in_bounds(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && x < self.width as i64 && y < self.height as i64
    }

    /// The particle occupying a cell, if any. None outside the lattice.
    pub fn occupant(&self, x: i64, y: i64) -> Option<u32> {
        if !self.in_bounds(x, y) {
            return None;
        }
        self.cells[y as usize * self.width + x as usize]
    }

    pub fn is_occupied(&self, x: i64, y: i64) -> bool {
        self.occupant(x, y).is_some()
    }

    pub fn place(&mut self, id: u32, x: i64, y: i64) -> Result<()> {
        if !self.in_bounds(x, y) {
            return Err(Error::OutOfBounds {
                x,
                y,
                width: self.width,
                height: self.height,
            });
        }
        let i = y as usize * self.width + x as usize;
        if let Some(existing) = self.cells[i] {
            return Err(Error::InvalidArgument(format!(
                "cell ({x}, {y}) already holds particle {existing}"
            )));
        }
        self.cells[i] = Some(id);
        Ok(())
    }

    /// Clears a cell, returning the particle that occupied it.
    pub fn remove(&mut self, x: i64, y: i64) -> Option<u32> {
        if !self.in_bounds(x, y) {
            return None;
        }
        self.cells[y as usize * self.width + x as usize].take()
    }

    /// Relocates a particle between cells without intermediate vacancy checks
    /// beyond the exclusivity rule.
    pub(crate) fn relocate(&mut self, id: u32, from: (i64, i64), to: (i64, i64)) {
        debug_assert!(self.in_bounds(from.0, from.1) && self.in_bounds(to.0, to.1));
        let fi = from.1 as usize * self.width + from.0 as usize;
        let ti = to.1 as usize * self.width + to.0 as usize;
        debug_assert_eq!(self.cells[fi], Some(id));
        debug_assert!(self.cells[ti].is_none());
        self.cells[fi] = None;
        self.cells[ti] = Some(id);
    }

    pub fn occupied_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }
}

/// Shared mutable lattice state for one simulation run.
#[derive(Debug, Clone)]
pub struct LatticeState {
    pub field: TrailField,
    pub occupancy: OccupancyGrid,
    pub mask: HabitableMask,
}
