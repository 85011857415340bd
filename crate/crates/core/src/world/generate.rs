//! Procedural house layouts: a grid of rectangular rooms joined by doors,
//! furnished according to a room type.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ObjectInstance, SceneGrid, WorldError};
use crate::category::Category;
use crate::geometry::Cell;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenParams {
    /// Number of rooms, 1..=16.
    pub rooms: usize,
    /// Interior room side lengths are drawn from this inclusive range, cells.
    pub room_min: usize,
    pub room_max: usize,
    pub wall_thickness: usize,
    pub door_width: usize,
    /// Upper bound on objects per room; 0 leaves the house empty.
    pub max_objects_per_room: usize,
    /// Categories that must appear at least once.
    pub required: Vec<Category>,
    pub cell_size_m: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            rooms: 4,
            room_min: 50,
            room_max: 70,
            wall_thickness: 2,
            door_width: 16,
            max_objects_per_room: 4,
            required: Vec::new(),
            cell_size_m: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RoomType {
    Bedroom,
    Bathroom,
    Living,
    Kitchen,
}

impl RoomType {
    const ALL: [RoomType; 4] = [
        RoomType::Bedroom,
        RoomType::Bathroom,
        RoomType::Living,
        RoomType::Kitchen,
    ];

    fn furniture(self) -> &'static [Category] {
        use Category::*;
        match self {
            RoomType::Bedroom => &[Bed, Wardrobe, Chair, Plant],
            RoomType::Bathroom => &[Toilet, Sink, Shower],
            RoomType::Living => &[Sofa, Tv, Plant, Chair, Table],
            RoomType::Kitchen => &[Fridge, Counter, Sink, Table, Chair],
        }
    }
}

// Footprint in meters (short side, long side).
fn footprint_m(c: Category) -> (f64, f64) {
    match c {
        Category::Chair => (0.4, 0.4),
        Category::Bed => (1.2, 1.6),
        Category::Plant => (0.3, 0.3),
        Category::Toilet => (0.4, 0.6),
        Category::Tv => (0.2, 0.8),
        Category::Sofa => (0.8, 1.8),
        Category::Sink => (0.4, 0.5),
        Category::Shower => (0.8, 0.8),
        Category::Table => (0.8, 1.2),
        Category::Fridge => (0.6, 0.7),
        Category::Counter => (0.5, 1.5),
        Category::Wardrobe => (0.5, 1.2),
    }
}

// Free margin kept around furniture, cells.
const CLEARANCE: i32 = 4;
// Furniture keeps this far from door openings, cells.
const DOOR_KEEPOUT: i32 = 12;

#[derive(Debug, Clone, Copy)]
struct Rect {
    x0: i32,
    y0: i32,
    x1: i32, // exclusive
    y1: i32, // exclusive
}

impl Rect {
    fn overlaps(&self, o: &Rect) -> bool {
        self.x0 < o.x1 && o.x0 < self.x1 && self.y0 < o.y1 && o.y0 < self.y1
    }

    fn grow(&self, m: i32) -> Rect {
        Rect {
            x0: self.x0 - m,
            y0: self.y0 - m,
            x1: self.x1 + m,
            y1: self.y1 + m,
        }
    }

    fn contains_rect(&self, o: &Rect) -> bool {
        o.x0 >= self.x0 && o.y0 >= self.y0 && o.x1 <= self.x1 && o.y1 <= self.y1
    }
}

impl GenParams {
    fn validate(&self) -> Result<(), WorldError> {
        let bad = |m: String| Err(WorldError::Infeasible(m));
        if !(1..=16).contains(&self.rooms) {
            return bad(format!("rooms must be in 1..=16, got {}", self.rooms));
        }
        if self.room_min < 20 || self.room_min > self.room_max || self.room_max > 400 {
            return bad(format!(
                "room size range {}..={} must satisfy 20 <= min <= max <= 400",
                self.room_min, self.room_max
            ));
        }
        if self.wall_thickness == 0 {
            return bad("wall thickness must be at least 1".into());
        }
        if self.door_width < 4 || self.door_width + 8 > self.room_min {
            return bad(format!(
                "door width {} must be at least 4 and leave 4 cells either side in a {}-cell room",
                self.door_width, self.room_min
            ));
        }
        if self.cell_size_m.is_nan() || self.cell_size_m <= 0.0 {
            return bad("cell size must be positive".into());
        }
        if self.max_objects_per_room == 0 && !self.required.is_empty() {
            return bad(format!(
                "no objects allowed but {} required categories requested",
                self.required.len()
            ));
        }
        if self.required.len() > self.rooms * self.max_objects_per_room {
            return bad("more required categories than object slots".into());
        }
        Ok(())
    }
}

/// Generates a scene. Deterministic for a given seed; all free space is
/// connected and every required category gets at least one instance.
pub fn generate_scene(seed: u64, params: &GenParams) -> Result<SceneGrid, WorldError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let wall = params.wall_thickness as i32;
    let cols = (params.rooms as f64).sqrt().ceil() as usize;
    let rows = params.rooms.div_ceil(cols);
    let col_w: Vec<i32> = (0..cols)
        .map(|_| rng.gen_range(params.room_min..=params.room_max) as i32)
        .collect();
    let row_h: Vec<i32> = (0..rows)
        .map(|_| rng.gen_range(params.room_min..=params.room_max) as i32)
        .collect();
    let width = col_w.iter().sum::<i32>() + (cols as i32 + 1) * wall;
    let height = row_h.iter().sum::<i32>() + (rows as i32 + 1) * wall;

    let mut rooms = Vec::with_capacity(params.rooms);
    for i in 0..params.rooms {
        let (r, c) = (i / cols, i % cols);
        let x0 = wall + col_w[..c].iter().sum::<i32>() + c as i32 * wall;
        let y0 = wall + row_h[..r].iter().sum::<i32>() + r as i32 * wall;
        rooms.push(Rect {
            x0,
            y0,
            x1: x0 + col_w[c],
            y1: y0 + row_h[r],
        });
    }

    let (w, h) = (width as usize, height as usize);
    let mut walls = vec![true; w * h];
    let carve = |r: &Rect, walls: &mut Vec<bool>| {
        for y in r.y0..r.y1 {
            for x in r.x0..r.x1 {
                walls[y as usize * w + x as usize] = false;
            }
        }
    };
    for r in &rooms {
        carve(r, &mut walls);
    }

    // Doors: random spanning tree over adjacent rooms plus a few extra links.
    let mut edges = Vec::new();
    for i in 0..params.rooms {
        if i % cols + 1 < cols && i + 1 < params.rooms {
            edges.push((i, i + 1));
        }
        if i + cols < params.rooms {
            edges.push((i, i + cols));
        }
    }
    edges.shuffle(&mut rng);
    let mut parent: Vec<usize> = (0..params.rooms).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let dw = params.door_width as i32;
    let mut doors = Vec::new();
    for (a, b) in edges {
        let (root_a, root_b) = (find(&mut parent, a), find(&mut parent, b));
        let extra = rng.gen_bool(0.25);
        if root_a == root_b && !extra {
            continue;
        }
        parent[root_a] = root_b;
        let (ra, rb) = (rooms[a], rooms[b]);
        let door = if rb.x0 > ra.x0 {
            // side by side: opening through the vertical wall
            let lo = ra.y0.max(rb.y0) + 4;
            let hi = ra.y1.min(rb.y1) - 4 - dw;
            let y = rng.gen_range(lo..=hi.max(lo));
            Rect {
                x0: ra.x1,
                y0: y,
                x1: rb.x0,
                y1: y + dw,
            }
        } else {
            let lo = ra.x0.max(rb.x0) + 4;
            let hi = ra.x1.min(rb.x1) - 4 - dw;
            let x = rng.gen_range(lo..=hi.max(lo));
            Rect {
                x0: x,
                y0: ra.y1,
                x1: x + dw,
                y1: rb.y0,
            }
        };
        carve(&door, &mut walls);
        doors.push(door);
    }

    // Room types: cover required categories first.
    let mut types: Vec<Option<RoomType>> = vec![None; params.rooms];
    let mut order: Vec<usize> = (0..params.rooms).collect();
    order.shuffle(&mut rng);
    let mut next_free = order.into_iter();
    for &cat in &params.required {
        let covered = types.iter().flatten().any(|t| t.furniture().contains(&cat));
        if covered {
            continue;
        }
        let Some(slot) = next_free.next() else { break };
        let candidates: Vec<RoomType> = RoomType::ALL
            .iter()
            .copied()
            .filter(|t| t.furniture().contains(&cat))
            .collect();
        types[slot] = Some(*candidates.choose(&mut rng).expect("every category has a room"));
    }
    for t in types.iter_mut().filter(|t| t.is_none()) {
        *t = Some(*RoomType::ALL.choose(&mut rng).unwrap());
    }

    let cs = params.cell_size_m;
    let mut objects: Vec<ObjectInstance> = Vec::new();
    let mut placed: Vec<Vec<Rect>> = vec![Vec::new(); params.rooms];
    let mut try_place = |room: usize, cat: Category, rng: &mut ChaCha8Rng, objects: &mut Vec<ObjectInstance>| -> bool {
        let (a, b) = footprint_m(cat);
        let (mut ow, mut oh) = (((a / cs).round() as i32).max(1), ((b / cs).round() as i32).max(1));
        if rng.gen_bool(0.5) {
            std::mem::swap(&mut ow, &mut oh);
        }
        let inner = rooms[room].grow(-CLEARANCE);
        if inner.x1 - inner.x0 < ow || inner.y1 - inner.y0 < oh {
            return false;
        }
        for _ in 0..200 {
            let x = rng.gen_range(inner.x0..=inner.x1 - ow);
            let y = rng.gen_range(inner.y0..=inner.y1 - oh);
            let r = Rect {
                x0: x,
                y0: y,
                x1: x + ow,
                y1: y + oh,
            };
            if !inner.contains_rect(&r) {
                continue;
            }
            if placed[room].iter().any(|p| p.grow(CLEARANCE).overlaps(&r)) {
                continue;
            }
            if doors.iter().any(|d| d.grow(DOOR_KEEPOUT).overlaps(&r)) {
                continue;
            }
            placed[room].push(r);
            let cells = (r.y0..r.y1)
                .flat_map(|yy| (r.x0..r.x1).map(move |xx| Cell::new(xx, yy)))
                .collect();
            objects.push(ObjectInstance {
                id: objects.len() as u32 + 1,
                category: cat,
                cells,
            });
            return true;
        }
        false
    };

    let mut counts = vec![0usize; params.rooms];
    for &cat in &params.required {
        if objects.iter().any(|o| o.category == cat) {
            continue;
        }
        let mut rooms_for: Vec<usize> = (0..params.rooms)
            .filter(|&i| types[i].unwrap().furniture().contains(&cat))
            .collect();
        rooms_for.shuffle(&mut rng);
        let mut others: Vec<usize> = (0..params.rooms).filter(|i| !rooms_for.contains(i)).collect();
        others.shuffle(&mut rng);
        rooms_for.extend(others);
        let ok = rooms_for.into_iter().any(|room| {
            counts[room] < params.max_objects_per_room && try_place(room, cat, &mut rng, &mut objects) && {
                counts[room] += 1;
                true
            }
        });
        if !ok {
            return Err(WorldError::Infeasible(format!(
                "could not place a required {cat} in any room"
            )));
        }
    }
    for room in 0..params.rooms {
        if params.max_objects_per_room == 0 {
            break;
        }
        let target = rng.gen_range(1..=params.max_objects_per_room);
        let mut menu = types[room].unwrap().furniture().to_vec();
        menu.shuffle(&mut rng);
        for cat in menu {
            if counts[room] >= target {
                break;
            }
            if try_place(room, cat, &mut rng, &mut objects) {
                counts[room] += 1;
            }
        }
    }

    SceneGrid::new(w, h, cs, walls, objects)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::VecDeque;

    // Independent flood fill over 4-connected free cells.
    fn free_components(scene: &SceneGrid) -> usize {
        let (w, h) = (scene.width(), scene.height());
        let mut seen = vec![false; w * h];
        let mut comps = 0;
        for start in scene.free_cells() {
            let si = start.y as usize * w + start.x as usize;
            if seen[si] {
                continue;
            }
            comps += 1;
            seen[si] = true;
            let mut q = VecDeque::from([start]);
            while let Some(c) = q.pop_front() {
                for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                    let n = c.offset(dx, dy);
                    if scene.is_free(n) {
                        let ni = n.y as usize * w + n.x as usize;
                        if !seen[ni] {
                            seen[ni] = true;
                            q.push_back(n);
                        }
                    }
                }
            }
        }
        comps
    }

    #[test]
    fn same_seed_same_scene() {
        let p = GenParams::default();
        let a = generate_scene(7, &p).unwrap();
        let b = generate_scene(7, &p).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn four_rooms_are_connected() {
        let p = GenParams {
            rooms: 4,
            ..GenParams::default()
        };
        let s = generate_scene(7, &p).unwrap();
        assert_eq!(free_components(&s), 1);
    }

    #[test]
    fn many_seeds_connected_and_complete() {
        let p = GenParams {
            rooms: 6,
            required: Category::GOALS.to_vec(),
            ..GenParams::default()
        };
        for seed in 0..40 {
            let s = generate_scene(seed, &p).unwrap();
            assert_eq!(free_components(&s), 1, "seed {seed}");
            let present = s.categories_present();
            for g in Category::GOALS {
                assert!(present.contains(&g), "seed {seed} missing {g}");
            }
        }
    }

    #[test]
    fn zero_objects_with_required_goal_is_infeasible() {
        let p = GenParams {
            max_objects_per_room: 0,
            required: vec![Category::Tv],
            ..GenParams::default()
        };
        assert!(matches!(generate_scene(1, &p), Err(WorldError::Infeasible(_))));
    }

    #[test]
    fn furniture_keeps_clear_of_walls() {
        let s = generate_scene(3, &GenParams::default()).unwrap();
        for o in s.objects() {
            for c in &o.cells {
                for dy in -2..=2 {
                    for dx in -2..=2 {
                        assert!(s.is_free(c.offset(dx, dy)), "object {} too close to wall", o.id);
                    }
                }
            }
        }
    }
}
