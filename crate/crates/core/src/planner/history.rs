use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::geometry::Cell;

/// Angular resolution of a node's state vector: one bin per degree.
pub const BINS: usize = 360;

/// A revisitable location with a per-degree record of the last field-of-view
/// score seen in each direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryNode {
    pub coord: Cell,
    pub bins: Vec<f64>,
    /// Number of qualifying visits, by any robot.
    pub visits: u32,
    /// Bin sum divided by `visits`.
    pub score: f64,
}

impl HistoryNode {
    fn new(coord: Cell) -> Self {
        Self {
            coord,
            bins: vec![0.0; BINS],
            visits: 0,
            score: 0.0,
        }
    }

    /// Overwrites the bins under the view window centered on `view_deg` and
    /// refreshes the score.
    fn record(&mut self, view_deg: f64, value: f64, fhfov: f64) {
        let half = fhfov / 2.0;
        let (lo, hi) = (view_deg - half, view_deg + half);
        if view_deg >= half && view_deg < 360.0 - half {
            self.fill(lo.floor() as i64, hi.ceil() as i64, value);
        } else if view_deg < half {
            self.fill(0, hi.ceil() as i64, value);
            self.fill((360.0 + lo).floor() as i64, 360, value);
        } else {
            self.fill(lo.floor() as i64, 360, value);
            self.fill(0, (hi - 360.0).ceil() as i64, value);
        }
        self.visits += 1;
        self.score = self.bins.iter().sum::<f64>() / self.visits as f64;
    }

    fn fill(&mut self, from: i64, to: i64, value: f64) {
        let from = from.clamp(0, BINS as i64) as usize;
        let to = to.clamp(0, BINS as i64) as usize;
        for b in &mut self.bins[from..to.max(from)] {
            *b = value;
        }
    }
}

/// Lowercase label of the `index`-th node in creation order: `a`..`z`, then
/// the letter cycle restarts with the sequence number minus 26 appended
/// (`a1`, `b2`, ...).
pub fn history_label(index: usize) -> String {
    let letter = |i: usize| (b'a' + (i % 26) as u8) as char;
    if index < 26 {
        letter(index).to_string()
    } else {
        format!("{}{}", letter(index - 26), index + 1 - 26)
    }
}

/// All robots' history nodes, in creation order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct HistoryNodes {
    nodes: Vec<HistoryNode>,
    radius: f64,
}

/// Outcome of one history update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryUpdate {
    pub node: usize,
    pub created: bool,
    pub score: f64,
}

impl HistoryNodes {
    /// Empty set; visits closer than `radius` cells to a node update it.
    pub fn new(radius: f64) -> Self {
        Self {
            nodes: Vec::new(),
            radius,
        }
    }

    pub fn nodes(&self) -> &[HistoryNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Records a visit at `at` looking along `view_deg` with score `value`.
    pub fn update(&mut self, at: Cell, view_deg: f64, value: f64, fhfov: f64) -> HistoryUpdate {
        let nearest = self.nodes.iter().enumerate().map(|(i, n)| (i, n.coord.dist(at))).fold(
            None,
            |best: Option<(usize, f64)>, (i, d)| match best {
                Some((_, bd)) if bd <= d => best,
                _ => Some((i, d)),
            },
        );
        let (node, created) = match nearest {
            Some((i, d)) if d < self.radius => (i, false),
            _ => {
                self.nodes.push(HistoryNode::new(at));
                (self.nodes.len() - 1, true)
            }
        };
        self.nodes[node].record(view_deg, value, fhfov);
        HistoryUpdate {
            node,
            created,
            score: self.nodes[node].score,
        }
    }

    /// Node with the highest score; ties go to the most recent node.
    pub fn best(&self) -> Option<usize> {
        self.nodes
            .iter()
            .enumerate()
            .fold(None, |best: Option<(usize, f64)>, (i, n)| match best {
                Some((_, s)) if s > n.score => best,
                _ => Some((i, n.score)),
            })
            .map(|(i, _)| i)
    }

    /// SHA-256 over node coordinates, visit counts and scores.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for n in &self.nodes {
            h.update(n.coord.x.to_le_bytes());
            h.update(n.coord.y.to_le_bytes());
            h.update(n.visits.to_le_bytes());
            h.update(n.score.to_le_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn filled(n: &HistoryNode, v: f64) -> Vec<usize> {
        (0..BINS).filter(|&b| n.bins[b] == v).collect()
    }

    #[test]
    fn first_visit_fills_eighty_bins() {
        let mut h = HistoryNodes::new(25.0);
        let up = h.update(Cell::new(0, 0), 180.0, 0.8, 79.0);
        assert!(up.created);
        let node = &h.nodes()[0];
        assert_eq!(filled(node, 0.8), (140..220).collect::<Vec<_>>());
        assert_eq!(node.visits, 1);
        assert!((up.score - 0.8 * 80.0).abs() < 1e-9);
    }

    #[test]
    fn low_heading_wraps_around() {
        let mut h = HistoryNodes::new(25.0);
        h.update(Cell::new(0, 0), 10.0, 1.0, 79.0);
        let expected: Vec<usize> = (0..50).chain(330..360).collect();
        assert_eq!(filled(&h.nodes()[0], 1.0), expected);
    }

    #[test]
    fn high_heading_wraps_around() {
        let mut h = HistoryNodes::new(25.0);
        h.update(Cell::new(0, 0), 350.0, 1.0, 79.0);
        let expected: Vec<usize> = (0..30).chain(310..360).collect();
        assert_eq!(filled(&h.nodes()[0], 1.0), expected);
    }

    #[test]
    fn revisit_overwrites_and_halves() {
        let mut h = HistoryNodes::new(25.0);
        let first = h.update(Cell::new(5, 5), 90.0, 0.6, 79.0);
        let second = h.update(Cell::new(10, 5), 90.0, 0.6, 79.0);
        assert!(!second.created);
        assert_eq!(h.nodes()[0].visits, 2);
        assert!((second.score - first.score / 2.0).abs() < 1e-12);
    }

    #[test]
    fn distance_threshold_is_inclusive_for_creation() {
        let mut h = HistoryNodes::new(25.0);
        h.update(Cell::new(0, 0), 0.0, 0.5, 79.0);
        assert!(h.update(Cell::new(25, 0), 0.0, 0.5, 79.0).created);
        assert!(!h.update(Cell::new(24, 0), 0.0, 0.5, 79.0).created);
    }

    #[test]
    fn labels() {
        assert_eq!(history_label(0), "a");
        assert_eq!(history_label(2), "c");
        assert_eq!(history_label(25), "z");
        assert_eq!(history_label(26), "a1");
        assert_eq!(history_label(27), "b2");
    }

    #[test]
    fn best_prefers_recent_on_ties() {
        let mut h = HistoryNodes::new(25.0);
        h.update(Cell::new(0, 0), 0.0, 0.5, 79.0);
        h.update(Cell::new(100, 0), 0.0, 0.5, 79.0);
        assert_eq!(h.best(), Some(1));
        h.update(Cell::new(0, 100), 0.0, 0.2, 79.0);
        assert_eq!(h.best(), Some(1));
    }
}
