use serde::{Deserialize, Serialize};

use crate::category::{Category, NUM_CATEGORIES};
use crate::geometry::Cell;

/// Total channel count: K category layers plus obstacle, explored, current
/// position and past positions.
pub const NUM_CHANNELS: usize = NUM_CATEGORIES + 4;

/// A channel of the semantic map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Layer {
    Category(Category),
    Obstacle,
    Explored,
    Current,
    Past,
}

impl Layer {
    pub fn index(self) -> usize {
        match self {
            Layer::Category(c) => c.index(),
            Layer::Obstacle => NUM_CATEGORIES,
            Layer::Explored => NUM_CATEGORIES + 1,
            Layer::Current => NUM_CATEGORIES + 2,
            Layer::Past => NUM_CATEGORIES + 3,
        }
    }

    pub fn from_index(i: usize) -> Option<Layer> {
        match i {
            i if i < NUM_CATEGORIES => Category::from_index(i).map(Layer::Category),
            i if i == NUM_CATEGORIES => Some(Layer::Obstacle),
            i if i == NUM_CATEGORIES + 1 => Some(Layer::Explored),
            i if i == NUM_CATEGORIES + 2 => Some(Layer::Current),
            i if i == NUM_CATEGORIES + 3 => Some(Layer::Past),
            _ => None,
        }
    }
}

/// Cells whose obstacle value reaches this count as occupied.
pub const OBSTACLE_THRESHOLD: f32 = 0.5;

/// Dense `(K + 4) x M x M` grid of values in `[0, 1]`, channel-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SemanticMap {
    size: usize,
    data: Vec<f32>,
}

impl SemanticMap {
    /// All-zero map of side `size`.
    pub fn new(size: usize) -> Self {
        Self {
            size,
            data: vec![0.0; NUM_CHANNELS * size * size],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn in_bounds(&self, c: Cell) -> bool {
        c.x >= 0 && c.y >= 0 && (c.x as usize) < self.size && (c.y as usize) < self.size
    }

    #[inline]
    fn offset(&self, channel: usize, c: Cell) -> usize {
        channel * self.size * self.size + c.y as usize * self.size + c.x as usize
    }

    /// Value at `c`; zero outside the map.
    #[inline]
    pub fn get(&self, layer: Layer, c: Cell) -> f32 {
        self.get_channel(layer.index(), c)
    }

    #[inline]
    pub fn get_channel(&self, channel: usize, c: Cell) -> f32 {
        if self.in_bounds(c) {
            self.data[self.offset(channel, c)]
        } else {
            0.0
        }
    }

    /// Overwrites a value; ignored outside the map.
    pub fn set(&mut self, layer: Layer, c: Cell, v: f32) {
        if self.in_bounds(c) {
            let i = self.offset(layer.index(), c);
            self.data[i] = v;
        }
    }

    /// `cell = max(cell, v)`; returns the previous value. Ignored (returning 1)
    /// outside the map.
    pub fn raise(&mut self, channel: usize, c: Cell, v: f32) -> f32 {
        if !self.in_bounds(c) {
            return 1.0;
        }
        let i = self.offset(channel, c);
        let old = self.data[i];
        if v > old {
            self.data[i] = v;
        }
        old
    }

    /// Raw channel slice, row-major.
    pub fn channel(&self, channel: usize) -> &[f32] {
        let n = self.size * self.size;
        &self.data[channel * n..(channel + 1) * n]
    }

    pub fn is_explored(&self, c: Cell) -> bool {
        self.get(Layer::Explored, c) > 0.0
    }

    pub fn is_obstacle(&self, c: Cell) -> bool {
        self.get(Layer::Obstacle, c) >= OBSTACLE_THRESHOLD
    }

    /// Explored and not occupied.
    pub fn is_explored_free(&self, c: Cell) -> bool {
        self.is_explored(c) && !self.is_obstacle(c)
    }

    /// Occupied and not carrying any category label, i.e. structure.
    pub fn is_wall(&self, c: Cell) -> bool {
        self.is_obstacle(c) && !self.has_category(c)
    }

    pub fn has_category(&self, c: Cell) -> bool {
        (0..NUM_CATEGORIES).any(|k| self.get_channel(k, c) > 0.0)
    }

    pub fn explored_count(&self) -> usize {
        self.channel(Layer::Explored.index())
            .iter()
            .filter(|&&v| v > 0.0)
            .count()
    }

    /// Cell-wise maximum with `other` placed at `offset` in this frame.
    /// Cells of `other` that fall outside this map are dropped.
    pub fn max_with(&mut self, other: &SemanticMap, offset: (i32, i32)) {
        let n = other.size as i32;
        for ch in 0..NUM_CHANNELS {
            for y in 0..n {
                for x in 0..n {
                    let v = other.data[other.offset(ch, Cell::new(x, y))];
                    if v > 0.0 {
                        self.raise(ch, Cell::new(x + offset.0, y + offset.1), v);
                    }
                }
            }
        }
    }

    /// Raw little-endian f32 dump, channel-major then row-major.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        self.data.iter().flat_map(|v| v.to_le_bytes()).collect()
    }
}
