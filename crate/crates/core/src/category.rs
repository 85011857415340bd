//! Object category vocabulary and the co-occurrence prior used by the
//! scripted oracle.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Object categories known to scenes and maps. The first six are the
/// navigation goal categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Chair,
    Bed,
    Plant,
    Toilet,
    Tv,
    Sofa,
    Sink,
    Shower,
    Table,
    Fridge,
    Counter,
    Wardrobe,
}

/// Number of category layers in a semantic map.
pub const NUM_CATEGORIES: usize = 12;

impl Category {
    pub const ALL: [Category; NUM_CATEGORIES] = [
        Category::Chair,
        Category::Bed,
        Category::Plant,
        Category::Toilet,
        Category::Tv,
        Category::Sofa,
        Category::Sink,
        Category::Shower,
        Category::Table,
        Category::Fridge,
        Category::Counter,
        Category::Wardrobe,
    ];

    pub const GOALS: [Category; 6] = [
        Category::Chair,
        Category::Bed,
        Category::Plant,
        Category::Toilet,
        Category::Tv,
        Category::Sofa,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Category> {
        Self::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::Chair => "chair",
            Category::Bed => "bed",
            Category::Plant => "plant",
            Category::Toilet => "toilet",
            Category::Tv => "tv",
            Category::Sofa => "sofa",
            Category::Sink => "sink",
            Category::Shower => "shower",
            Category::Table => "table",
            Category::Fridge => "fridge",
            Category::Counter => "counter",
            Category::Wardrobe => "wardrobe",
        }
    }

    pub fn is_goal(self) -> bool {
        Self::GOALS.contains(&self)
    }

    /// Indefinite article for use in generated sentences.
    pub fn article(self) -> &'static str {
        match self.name().as_bytes()[0] {
            b'a' | b'e' | b'i' | b'o' | b'u' => "an",
            _ => "a",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown category `{0}`")]
pub struct UnknownCategory(pub String);

impl FromStr for Category {
    type Err = UnknownCategory;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .iter()
            .copied()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownCategory(s.to_string()))
    }
}

// Rows: observed category. Columns: goal category, in `Category::ALL` order.
// 1.0 on the diagonal; values are how strongly seeing the row object suggests
// the column object is nearby.
#[rustfmt::skip]
const RELATEDNESS: [[f64; NUM_CATEGORIES]; NUM_CATEGORIES] = [
    //  chair bed  plant toil  tv   sofa sink show table frid coun ward
    [1.00, 0.40, 0.50, 0.05, 0.55, 0.60, 0.30, 0.05, 0.85, 0.45, 0.45, 0.35], // chair
    [0.35, 1.00, 0.40, 0.15, 0.25, 0.15, 0.10, 0.15, 0.15, 0.05, 0.05, 0.90], // bed
    [0.50, 0.40, 1.00, 0.10, 0.55, 0.60, 0.15, 0.10, 0.45, 0.15, 0.15, 0.35], // plant
    [0.05, 0.15, 0.10, 1.00, 0.05, 0.05, 0.85, 0.90, 0.05, 0.05, 0.10, 0.10], // toilet
    [0.55, 0.25, 0.55, 0.05, 1.00, 0.90, 0.05, 0.05, 0.40, 0.10, 0.10, 0.15], // tv
    [0.60, 0.15, 0.60, 0.05, 0.90, 1.00, 0.05, 0.05, 0.50, 0.10, 0.10, 0.15], // sofa
    [0.30, 0.10, 0.15, 0.80, 0.05, 0.05, 1.00, 0.75, 0.30, 0.70, 0.80, 0.05], // sink
    [0.05, 0.15, 0.10, 0.90, 0.05, 0.05, 0.80, 1.00, 0.05, 0.05, 0.05, 0.10], // shower
    [0.85, 0.15, 0.45, 0.05, 0.40, 0.50, 0.30, 0.05, 1.00, 0.55, 0.55, 0.10], // table
    [0.45, 0.05, 0.15, 0.05, 0.10, 0.10, 0.70, 0.05, 0.55, 1.00, 0.90, 0.05], // fridge
    [0.45, 0.05, 0.15, 0.10, 0.10, 0.10, 0.80, 0.05, 0.55, 0.90, 1.00, 0.05], // counter
    [0.35, 0.90, 0.35, 0.10, 0.15, 0.15, 0.05, 0.10, 0.10, 0.05, 0.05, 1.00], // wardrobe
];

/// Co-occurrence prior: how strongly seeing `seen` suggests `goal` is near.
pub fn relatedness(seen: Category, goal: Category) -> f64 {
    RELATEDNESS[seen.index()][goal.index()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for c in Category::ALL {
            assert_eq!(c.name().parse::<Category>().unwrap(), c);
            assert_eq!(Category::from_index(c.index()), Some(c));
        }
        assert!("lamp".parse::<Category>().is_err());
    }

    #[test]
    fn table_is_a_valid_prior() {
        for a in Category::ALL {
            assert_eq!(relatedness(a, a), 1.0);
            for b in Category::ALL {
                let r = relatedness(a, b);
                assert!((0.0..=1.0).contains(&r));
            }
        }
    }

    #[test]
    fn bathroom_objects_point_to_toilet() {
        let bath = relatedness(Category::Shower, Category::Toilet).min(relatedness(Category::Sink, Category::Toilet));
        let living = relatedness(Category::Sofa, Category::Toilet).max(relatedness(Category::Tv, Category::Toilet));
        assert!(bath > living);
    }
}
