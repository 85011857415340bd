use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::WorldError;
use crate::category::Category;
use crate::geometry::Cell;

/// A labeled object occupying free cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectInstance {
    pub id: u32,
    pub category: Category,
    pub cells: Vec<Cell>,
}

/// Ground-truth 2D world.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneGrid {
    width: usize,
    height: usize,
    cell_size: f64,
    walls: Vec<bool>,
    objects: Vec<ObjectInstance>,
    /// Index into `objects` for each cell covered by an object.
    object_at: Vec<Option<u32>>,
}

// On-disk layout. Cells are `[x, y]` pairs.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneFile {
    width: usize,
    height: usize,
    cell_size_m: f64,
    walls: Vec<[i32; 2]>,
    objects: Vec<ObjectFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectFile {
    id: u32,
    category: Category,
    cells: Vec<[i32; 2]>,
}

impl SceneGrid {
    /// Builds and validates a scene. `walls` is row-major, `width * height` long.
    pub fn new(
        width: usize,
        height: usize,
        cell_size: f64,
        walls: Vec<bool>,
        mut objects: Vec<ObjectInstance>,
    ) -> Result<Self, WorldError> {
        if width == 0 || height == 0 {
            return Err(WorldError::Invalid("width and height must be positive".into()));
        }
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(WorldError::Invalid(format!("cell size {cell_size} must be positive")));
        }
        if walls.len() != width * height {
            return Err(WorldError::Invalid(format!(
                "wall grid has {} cells, expected {}",
                walls.len(),
                width * height
            )));
        }
        objects.sort_by_key(|o| o.id);
        let mut object_at = vec![None; width * height];
        let mut seen_ids = BTreeSet::new();
        for (idx, obj) in objects.iter().enumerate() {
            if !seen_ids.insert(obj.id) {
                return Err(WorldError::Invalid(format!("duplicate object id {}", obj.id)));
            }
            if obj.cells.is_empty() {
                return Err(WorldError::Invalid(format!(
                    "object {} ({}) has an empty footprint",
                    obj.id, obj.category
                )));
            }
            for &c in &obj.cells {
                if c.x < 0 || c.y < 0 || c.x as usize >= width || c.y as usize >= height {
                    return Err(WorldError::Invalid(format!(
                        "object {} ({}) cell ({}, {}) is outside the grid",
                        obj.id, obj.category, c.x, c.y
                    )));
                }
                let i = c.y as usize * width + c.x as usize;
                if walls[i] {
                    return Err(WorldError::Invalid(format!(
                        "object {} ({}) cell ({}, {}) lies on a wall",
                        obj.id, obj.category, c.x, c.y
                    )));
                }
                if let Some(other) = object_at[i] {
                    return Err(WorldError::Invalid(format!(
                        "object {} overlaps object {} at ({}, {})",
                        obj.id, objects[other as usize].id, c.x, c.y
                    )));
                }
                object_at[i] = Some(idx as u32);
            }
        }
        Ok(Self {
            width,
            height,
            cell_size,
            walls,
            objects,
            object_at,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Meters per cell.
    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn objects(&self) -> &[ObjectInstance] {
        &self.objects
    }

    pub fn in_bounds(&self, c: Cell) -> bool {
        c.x >= 0 && c.y >= 0 && (c.x as usize) < self.width && (c.y as usize) < self.height
    }

    /// Out-of-bounds cells count as walls.
    pub fn is_wall(&self, c: Cell) -> bool {
        !self.in_bounds(c) || self.walls[self.index(c)]
    }

    pub fn is_free(&self, c: Cell) -> bool {
        !self.is_wall(c)
    }

    /// Object covering `c`, if any.
    pub fn object_at(&self, c: Cell) -> Option<&ObjectInstance> {
        if !self.in_bounds(c) {
            return None;
        }
        self.object_at[self.index(c)].map(|i| &self.objects[i as usize])
    }

    pub fn categories_present(&self) -> BTreeSet<Category> {
        self.objects.iter().map(|o| o.category).collect()
    }

    pub fn instances_of(&self, category: Category) -> impl Iterator<Item = &ObjectInstance> {
        self.objects.iter().filter(move |o| o.category == category)
    }

    pub fn free_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.height as i32)
            .flat_map(move |y| (0..self.width as i32).map(move |x| Cell::new(x, y)))
            .filter(move |&c| self.is_free(c))
    }

    fn index(&self, c: Cell) -> usize {
        c.y as usize * self.width + c.x as usize
    }

    /// Parses a scene from its JSON text.
    pub fn from_json(text: &str) -> Result<Self, WorldError> {
        let file: SceneFile = serde_json::from_str(text).map_err(|e| WorldError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if file.width == 0 || file.height == 0 {
            return Err(WorldError::Invalid("width and height must be positive".into()));
        }
        let mut walls = vec![false; file.width * file.height];
        for [x, y] in file.walls {
            if x < 0 || y < 0 || x as usize >= file.width || y as usize >= file.height {
                return Err(WorldError::Invalid(format!("wall cell ({x}, {y}) is outside the grid")));
            }
            walls[y as usize * file.width + x as usize] = true;
        }
        let objects = file
            .objects
            .into_iter()
            .map(|o| ObjectInstance {
                id: o.id,
                category: o.category,
                cells: o.cells.into_iter().map(|[x, y]| Cell::new(x, y)).collect(),
            })
            .collect();
        Self::new(file.width, file.height, file.cell_size_m, walls, objects)
    }

    /// Canonical JSON: walls in row-major order, objects by id.
    pub fn to_json(&self) -> String {
        let walls = (0..self.height as i32)
            .flat_map(|y| (0..self.width as i32).map(move |x| [x, y]))
            .filter(|&[x, y]| self.walls[y as usize * self.width + x as usize])
            .collect();
        let objects = self
            .objects
            .iter()
            .map(|o| {
                let mut cells: Vec<[i32; 2]> = o.cells.iter().map(|c| [c.x, c.y]).collect();
                cells.sort_by_key(|&[x, y]| (y, x));
                ObjectFile {
                    id: o.id,
                    category: o.category,
                    cells,
                }
            })
            .collect();
        let file = SceneFile {
            width: self.width,
            height: self.height,
            cell_size_m: self.cell_size,
            walls,
            objects,
        };
        serde_json::to_string(&file).expect("scene serialization cannot fail")
    }

    /// SHA-256 of the canonical JSON, hex encoded.
    pub fn checksum(&self) -> String {
        let digest = Sha256::digest(self.to_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn save(&self, path: &Path) -> Result<(), WorldError> {
        fs::write(path, self.to_json()).map_err(|e| WorldError::Io(path.display().to_string(), e))
    }
}

/// Reads and validates a scene file.
pub fn load_scene(path: &Path) -> Result<SceneGrid, WorldError> {
    let text = fs::read_to_string(path).map_err(|e| WorldError::Io(path.display().to_string(), e))?;
    SceneGrid::from_json(&text)
}
