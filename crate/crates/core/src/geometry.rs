//! Grid cells, continuous poses and angle helpers.
//!
//! Grids use image convention: `x` grows to the right, `y` grows downward.
//! Headings are degrees in `[0, 360)` with 0° along `+x` and 90° along `+y`,
//! so on screen a positive rotation is clockwise. Bearings relative to the
//! heading follow the same sign: negative bearings are to the robot's left.

use serde::{Deserialize, Serialize};

/// Integer cell coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub x: i32,
    pub y: i32,
}

impl Cell {
    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    /// Center of the cell in continuous coordinates.
    pub fn center(self) -> (f64, f64) {
        (self.x as f64 + 0.5, self.y as f64 + 0.5)
    }

    pub fn offset(self, dx: i32, dy: i32) -> Self {
        Self::new(self.x + dx, self.y + dy)
    }

    /// Euclidean distance between cell centers, in cells.
    pub fn dist(self, other: Cell) -> f64 {
        let dx = (self.x - other.x) as f64;
        let dy = (self.y - other.y) as f64;
        dx.hypot(dy)
    }

    pub fn containing(x: f64, y: f64) -> Self {
        Self::new(x.floor() as i32, y.floor() as i32)
    }
}

/// The eight neighbour offsets, axis-aligned first.
pub const NEIGHBORS_8: [(i32, i32); 8] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)];

pub const NEIGHBORS_4: [(i32, i32); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

/// Robot pose in continuous cell coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    /// Degrees in `[0, 360)`.
    pub heading: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, heading: f64) -> Self {
        Self {
            x,
            y,
            heading: normalize_deg(heading),
        }
    }

    /// Pose at the center of `cell`.
    pub fn at_cell(cell: Cell, heading: f64) -> Self {
        let (x, y) = cell.center();
        Self::new(x, y, heading)
    }

    pub fn cell(&self) -> Cell {
        Cell::containing(self.x, self.y)
    }

    pub fn dist_to(&self, x: f64, y: f64) -> f64 {
        (self.x - x).hypot(self.y - y)
    }

    pub fn dist_to_cell(&self, cell: Cell) -> f64 {
        let (cx, cy) = cell.center();
        self.dist_to(cx, cy)
    }

    /// Pose after moving `dist` cells along the heading.
    pub fn advanced(&self, dist: f64) -> Self {
        let (sin, cos) = self.heading.to_radians().sin_cos();
        Self {
            x: self.x + dist * cos,
            y: self.y + dist * sin,
            heading: self.heading,
        }
    }

    /// Cells swept by a straight move of `dist` cells, excluding the start
    /// cell and including the cell the move ends in.
    pub fn stroke_cells(&self, dist: f64) -> Vec<Cell> {
        let start = self.cell();
        let mut cells = Vec::new();
        march_ray(self.x, self.y, self.heading, dist, |c, _| {
            if c != start {
                cells.push(c);
            }
            true
        });
        let end = self.advanced(dist).cell();
        if end != start && cells.last() != Some(&end) {
            cells.push(end);
        }
        cells
    }

    /// Same pose expressed in a frame shifted by `(dx, dy)` cells.
    pub fn translated(&self, dx: i32, dy: i32) -> Self {
        Self {
            x: self.x + dx as f64,
            y: self.y + dy as f64,
            heading: self.heading,
        }
    }
}

/// Normalize an angle in degrees to `[0, 360)`.
pub fn normalize_deg(deg: f64) -> f64 {
    let d = deg.rem_euclid(360.0);
    // rem_euclid can return 360.0 for tiny negative inputs
    if d >= 360.0 {
        0.0
    } else {
        d
    }
}

/// Signed smallest rotation from `from` to `to`, in `(-180, 180]`.
pub fn angle_diff(to: f64, from: f64) -> f64 {
    let d = (to - from).rem_euclid(360.0);
    if d > 180.0 {
        d - 360.0
    } else {
        d
    }
}

/// Heading in degrees of the vector `(dx, dy)`.
pub fn heading_of(dx: f64, dy: f64) -> f64 {
    normalize_deg(dy.atan2(dx).to_degrees())
}

/// Axis-aligned inclusive cell rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRect {
    pub min: Cell,
    pub max: Cell,
}

impl CellRect {
    pub fn point(c: Cell) -> Self {
        Self { min: c, max: c }
    }

    /// `[0, size) x [0, size)`.
    pub fn square(size: usize) -> Self {
        Self {
            min: Cell::new(0, 0),
            max: Cell::new(size as i32 - 1, size as i32 - 1),
        }
    }

    pub fn include(&mut self, c: Cell) {
        self.min.x = self.min.x.min(c.x);
        self.min.y = self.min.y.min(c.y);
        self.max.x = self.max.x.max(c.x);
        self.max.y = self.max.y.max(c.y);
    }

    pub fn expanded(&self, margin: i32) -> Self {
        Self {
            min: self.min.offset(-margin, -margin),
            max: self.max.offset(margin, margin),
        }
    }

    /// Intersection with `[0, w) x [0, h)`.
    pub fn clipped(&self, w: usize, h: usize) -> Self {
        Self {
            min: Cell::new(self.min.x.max(0), self.min.y.max(0)),
            max: Cell::new(self.max.x.min(w as i32 - 1), self.max.y.min(h as i32 - 1)),
        }
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.x >= self.min.x && c.x <= self.max.x && c.y >= self.min.y && c.y <= self.max.y
    }

    pub fn width(&self) -> usize {
        (self.max.x - self.min.x + 1).max(0) as usize
    }

    pub fn height(&self) -> usize {
        (self.max.y - self.min.y + 1).max(0) as usize
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (self.min.y..=self.max.y).flat_map(move |y| (self.min.x..=self.max.x).map(move |x| Cell::new(x, y)))
    }
}

/// Cells visited by a ray from `(x0, y0)` along `heading_deg`, with the
/// distance at which the ray enters each cell. Traversal stops before
/// `max_dist` or when `visit` returns `false`.
///
/// This is the grid-walking scheme of Amanatides and Woo; the starting cell is
/// reported with entry distance 0.
pub fn march_ray<F>(x0: f64, y0: f64, heading_deg: f64, max_dist: f64, mut visit: F)
where
    F: FnMut(Cell, f64) -> bool,
{
    let (dy, dx) = heading_deg.to_radians().sin_cos();
    let mut cell = Cell::containing(x0, y0);
    let step_x = if dx > 0.0 { 1 } else { -1 };
    let step_y = if dy > 0.0 { 1 } else { -1 };
    let t_delta_x = if dx.abs() < 1e-12 {
        f64::INFINITY
    } else {
        1.0 / dx.abs()
    };
    let t_delta_y = if dy.abs() < 1e-12 {
        f64::INFINITY
    } else {
        1.0 / dy.abs()
    };
    let mut t_max_x = if dx.abs() < 1e-12 {
        f64::INFINITY
    } else if dx > 0.0 {
        (cell.x as f64 + 1.0 - x0) / dx
    } else {
        (x0 - cell.x as f64) / -dx
    };
    let mut t_max_y = if dy.abs() < 1e-12 {
        f64::INFINITY
    } else if dy > 0.0 {
        (cell.y as f64 + 1.0 - y0) / dy
    } else {
        (y0 - cell.y as f64) / -dy
    };
    let mut t = 0.0;
    loop {
        if t >= max_dist || !visit(cell, t) {
            return;
        }
        if t_max_x < t_max_y {
            t = t_max_x;
            t_max_x += t_delta_x;
            cell.x += step_x;
        } else {
            t = t_max_y;
            t_max_y += t_delta_y;
            cell.y += step_y;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_wraps_both_ways() {
        assert_eq!(normalize_deg(-30.0), 330.0);
        assert_eq!(normalize_deg(360.0), 0.0);
        assert_eq!(normalize_deg(725.0), 5.0);
    }

    #[test]
    fn angle_diff_prefers_short_way() {
        assert_eq!(angle_diff(10.0, 350.0), 20.0);
        assert_eq!(angle_diff(350.0, 10.0), -20.0);
        assert_eq!(angle_diff(180.0, 0.0), 180.0);
    }

    #[test]
    fn stroke_includes_end_cell_on_a_boundary() {
        let pose = Pose::new(10.5, 10.0, 90.0);
        let cells = pose.stroke_cells(5.0);
        assert_eq!(cells.first(), Some(&Cell::new(10, 11)));
        assert_eq!(cells.last(), Some(&Cell::new(10, 15)));
        assert_eq!(cells.len(), 5);
    }

    #[test]
    fn march_visits_straight_line() {
        let mut cells = Vec::new();
        march_ray(0.5, 0.5, 0.0, 3.2, |c, _| {
            cells.push(c);
            true
        });
        assert_eq!(
            cells,
            vec![Cell::new(0, 0), Cell::new(1, 0), Cell::new(2, 0), Cell::new(3, 0)]
        );
    }

    #[test]
    fn march_entry_distances_increase() {
        let mut last = -1.0;
        march_ray(3.3, 7.1, 123.0, 40.0, |_, t| {
            assert!(t > last);
            last = t;
            true
        });
    }
}
