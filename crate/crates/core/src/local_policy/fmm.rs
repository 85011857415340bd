use std::collections::VecDeque;

use super::LocalPolicyError;
use crate::geometry::{Cell, CellRect, NEIGHBORS_4};
use crate::mapping::SemanticMap;

/// Which cells of a rectangular window may be traversed.
#[derive(Debug, Clone, PartialEq)]
pub struct Traversability {
    pub rect: CellRect,
    free: Vec<bool>,
}

impl Traversability {
    /// `free` is row-major over `rect`.
    pub fn new(rect: CellRect, free: Vec<bool>) -> Self {
        assert_eq!(free.len(), rect.width() * rect.height(), "one flag per cell");
        Self { rect, free }
    }

    /// Planning view of a semantic map: structure (occupied cells without a
    /// category) is blocked and inflated by `inflation` cells; unexplored
    /// cells and mapped objects are traversable. `always_free` cells override.
    pub fn from_map(map: &SemanticMap, rect: CellRect, inflation: i32, always_free: &[Cell]) -> Self {
        let rect = rect.clipped(map.size(), map.size());
        let (w, h) = (rect.width(), rect.height());
        let mut free = vec![true; w * h];
        let outer = rect.expanded(inflation).clipped(map.size(), map.size());
        for c in outer.cells() {
            if !map.is_wall(c) {
                continue;
            }
            for dy in -inflation..=inflation {
                for dx in -inflation..=inflation {
                    if dx * dx + dy * dy > inflation * inflation {
                        continue;
                    }
                    let n = c.offset(dx, dy);
                    if rect.contains(n) {
                        free[(n.y - rect.min.y) as usize * w + (n.x - rect.min.x) as usize] = false;
                    }
                }
            }
        }
        let mut t = Self { rect, free };
        for &c in always_free {
            if let Some(i) = t.index(c) {
                t.free[i] = true;
            }
        }
        t
    }

    #[inline]
    pub fn index(&self, c: Cell) -> Option<usize> {
        self.rect
            .contains(c)
            .then(|| (c.y - self.rect.min.y) as usize * self.rect.width() + (c.x - self.rect.min.x) as usize)
    }

    #[inline]
    pub fn is_free(&self, c: Cell) -> bool {
        self.index(c).is_some_and(|i| self.free[i])
    }

    /// Nearest traversable cell to `c` by breadth-first search over the
    /// window, or `None` if nothing is free.
    pub fn nearest_free(&self, c: Cell) -> Option<Cell> {
        let clamped = Cell::new(
            c.x.clamp(self.rect.min.x, self.rect.max.x),
            c.y.clamp(self.rect.min.y, self.rect.max.y),
        );
        if self.is_free(clamped) {
            return Some(clamped);
        }
        let mut seen = vec![false; self.free.len()];
        let mut queue = VecDeque::from([clamped]);
        seen[self.index(clamped)?] = true;
        while let Some(cur) = queue.pop_front() {
            for (dx, dy) in NEIGHBORS_4 {
                let n = cur.offset(dx, dy);
                if let Some(i) = self.index(n) {
                    if !seen[i] {
                        if self.free[i] {
                            return Some(n);
                        }
                        seen[i] = true;
                        queue.push_back(n);
                    }
                }
            }
        }
        None
    }
}

/// Travel-time field to a goal; infinite where unreachable or not computed.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceField {
    pub rect: CellRect,
    pub goal: Cell,
    // row-major over `rect` grown by one cell on every side
    values: Vec<f64>,
}

impl DistanceField {
    #[inline]
    pub fn get(&self, c: Cell) -> f64 {
        if !self.rect.contains(c) {
            return f64::INFINITY;
        }
        let stride = self.rect.width() + 2;
        self.values[(c.y - self.rect.min.y + 1) as usize * stride + (c.x - self.rect.min.x + 1) as usize]
    }
}

// First-order upwind update from the smaller accepted neighbor along each
// axis, unit speed.
fn eikonal_update(a: f64, b: f64) -> f64 {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    if !b.is_finite() || b - a >= 1.0 {
        a + 1.0
    } else {
        0.5 * (a + b + (2.0 - (b - a) * (b - a)).sqrt())
    }
}

// Binary min-heap over cell indices keyed by tentative value, with
// decrease-key through a position table.
struct FrontHeap {
    items: Vec<u32>,
    pos: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl FrontHeap {
    fn new(n: usize) -> Self {
        Self {
            items: Vec::with_capacity(1024),
            pos: vec![ABSENT; n],
        }
    }

    fn push_or_decrease(&mut self, i: usize, values: &[f64]) {
        let at = if self.pos[i] == ABSENT {
            self.items.push(i as u32);
            self.items.len() - 1
        } else {
            self.pos[i] as usize
        };
        self.pos[i] = at as u32;
        self.sift_up(at, values);
    }

    fn pop(&mut self, values: &[f64]) -> Option<usize> {
        let top = *self.items.first()? as usize;
        let last = self.items.pop().expect("non-empty");
        self.pos[top] = ABSENT;
        if !self.items.is_empty() {
            self.items[0] = last;
            self.pos[last as usize] = 0;
            self.sift_down(0, values);
        }
        Some(top)
    }

    fn sift_up(&mut self, mut at: usize, values: &[f64]) {
        let item = self.items[at];
        let v = values[item as usize];
        while at > 0 {
            let parent = (at - 1) / 2;
            let p = self.items[parent];
            if values[p as usize] <= v {
                break;
            }
            self.items[at] = p;
            self.pos[p as usize] = at as u32;
            at = parent;
        }
        self.items[at] = item;
        self.pos[item as usize] = at as u32;
    }

    fn sift_down(&mut self, mut at: usize, values: &[f64]) {
        let n = self.items.len();
        let item = self.items[at];
        let v = values[item as usize];
        loop {
            let left = 2 * at + 1;
            if left >= n {
                break;
            }
            let right = left + 1;
            let child = if right < n && values[self.items[right] as usize] < values[self.items[left] as usize] {
                right
            } else {
                left
            };
            let c = self.items[child];
            if values[c as usize] >= v {
                break;
            }
            self.items[at] = c;
            self.pos[c as usize] = at as u32;
            at = child;
        }
        self.items[at] = item;
        self.pos[item as usize] = at as u32;
    }
}

const FAR: u8 = 0;
const ACCEPTED: u8 = 1;
const BLOCKED: u8 = 2;

/// Solves `|grad T| = 1` on the free cells of `grid` with `T(goal) = 0`.
///
/// With `stop_near = Some((cell, slack))` the march ends once every cell with
/// `T <= T(cell) + slack` is accepted; cells beyond stay infinite.
pub fn fmm_field(
    grid: &Traversability,
    goal: Cell,
    stop_near: Option<(Cell, f64)>,
) -> Result<DistanceField, LocalPolicyError> {
    if !grid.is_free(goal) {
        return Err(LocalPolicyError::GoalBlocked(goal));
    }
    let (w, h) = (grid.rect.width(), grid.rect.height());
    let stride = w + 2;
    let padded = |c: Cell| (c.y - grid.rect.min.y + 1) as usize * stride + (c.x - grid.rect.min.x + 1) as usize;
    let mut state = vec![BLOCKED; stride * (h + 2)];
    for y in 0..h {
        let row = &grid.free[y * w..(y + 1) * w];
        let out = &mut state[(y + 1) * stride + 1..(y + 1) * stride + 1 + w];
        for (o, &f) in out.iter_mut().zip(row) {
            *o = if f { FAR } else { BLOCKED };
        }
    }
    let mut values = vec![f64::INFINITY; state.len()];
    let mut heap = FrontHeap::new(state.len());
    let gi = padded(goal);
    values[gi] = 0.0;
    heap.push_or_decrease(gi, &values);
    let stop_index = stop_near
        .filter(|(c, _)| grid.rect.contains(*c))
        .map(|(c, _)| padded(c));
    let slack = stop_near.map_or(0.0, |(_, s)| s);
    let mut stop_at = f64::INFINITY;
    let known = |state: &[u8], values: &[f64], i: usize| if state[i] == ACCEPTED { values[i] } else { f64::INFINITY };
    while let Some(i) = heap.pop(&values) {
        let t = values[i];
        if t > stop_at {
            break;
        }
        state[i] = ACCEPTED;
        if Some(i) == stop_index {
            stop_at = t + slack;
        }
        for n in [i + 1, i - 1, i + stride, i - stride] {
            if state[n] != FAR {
                continue;
            }
            let a = known(&state, &values, n - 1).min(known(&state, &values, n + 1));
            let b = known(&state, &values, n - stride).min(known(&state, &values, n + stride));
            let candidate = eikonal_update(a, b);
            if candidate < values[n] {
                values[n] = candidate;
                heap.push_or_decrease(n, &values);
            }
        }
    }
    for (v, s) in values.iter_mut().zip(&state) {
        if *s != ACCEPTED {
            *v = f64::INFINITY;
        }
    }
    Ok(DistanceField {
        rect: grid.rect,
        goal,
        values,
    })
}
