//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use kbackup::generators::{unit_disk, GeometricLayout};
use kbackup::kbp::Placement;
use kbackup::{Graph, NodeId};

/// Walks IDs upward from `v`, wrapping after the largest one, and keeps the
/// first `k` that are neighbors.
pub fn circular_scan(v: NodeId, neighbors: &[NodeId], k: usize) -> Vec<NodeId> {
    let max = neighbors.iter().map(|u| u.0).max().unwrap().max(v.0);
    let set: BTreeSet<u64> = neighbors.iter().map(|u| u.0).collect();
    let mut out = Vec::new();
    let mut id = v.0;
    for _ in 0..max {
        id = if id == max { 1 } else { id + 1 };
        if set.contains(&id) && out.len() < k {
            out.push(NodeId(id));
        }
    }
    out
}

/// Who chose each node.
pub fn selectors(p: &Placement) -> BTreeMap<NodeId, Vec<NodeId>> {
    let mut out: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for (&v, chosen) in p.choices() {
        for &u in chosen {
            out.entry(u).or_default().push(v);
        }
    }
    out
}

/// Pairs at distance one or two, found by scanning all pairs against an
/// adjacency matrix.
pub fn square_pairs(g: &Graph) -> BTreeSet<(NodeId, NodeId)> {
    let ids = g.nodes();
    let n = ids.len();
    let adj: Vec<Vec<bool>> = ids
        .iter()
        .map(|&a| ids.iter().map(|&b| g.has_edge(a, b)).collect())
        .collect();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            if adj[i][j] || (0..n).any(|m| adj[i][m] && adj[m][j]) {
                out.insert((ids[i], ids[j]));
            }
        }
    }
    out
}

/// Edge count of a geometric layout by checking every pair of points.
pub fn scan_edges(layout: &GeometricLayout) -> usize {
    let pts: Vec<(f64, f64)> = layout.positions.values().copied().collect();
    let r2 = layout.radius * layout.radius;
    let mut count = 0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (dx, dy) = (pts[i].0 - pts[j].0, pts[i].1 - pts[j].1);
            if dx * dx + dy * dy <= r2 {
                count += 1;
            }
        }
    }
    count
}

/// Largest independent set size among `members`, by subset enumeration.
pub fn brute_independence(g: &Graph, members: &[NodeId]) -> usize {
    assert!(members.len() <= 20);
    let mut best = 0;
    for mask in 0u32..1 << members.len() {
        let set: Vec<NodeId> = (0..members.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| members[i])
            .collect();
        let independent = set
            .iter()
            .enumerate()
            .all(|(i, &a)| set[i + 1..].iter().all(|&b| !g.has_edge(a, b)));
        if independent {
            best = best.max(set.len());
        }
    }
    best
}

/// The unit disk instances behind the load-bound experiments: 200 graphs
/// with `n` in [20, 200] and radius in [0.2, 0.5].
pub fn udg_suite() -> Vec<(u64, usize, f64)> {
    (0..200u64)
        .map(|s| {
            let n = 20 + (s as usize * 37) % 181;
            let radius = 0.2 + 0.3 * ((s * 53) % 100) as f64 / 99.0;
            (s, n, radius)
        })
        .collect()
}

pub fn udg(n: usize, radius: f64, seed: u64) -> Graph {
    unit_disk(n, radius, seed).unwrap().0
}

/// Drops isolated nodes.
pub fn without_isolated(g: &Graph) -> Graph {
    let keep = g
        .nodes()
        .iter()
        .copied()
        .filter(|&v| g.degree(v) > 0)
        .collect();
    g.induced(&keep)
}

/// Six-node fixture: the cycle 1..6 plus chords so every degree is at least 3.
pub fn c6_with_chords() -> Graph {
    Graph::from_edges(&[
        (1, 2),
        (2, 3),
        (3, 4),
        (4, 5),
        (5, 6),
        (6, 1),
        (4, 1),
        (4, 2),
        (4, 6),
        (5, 1),
        (3, 6),
    ])
    .unwrap()
}

pub const RED: u64 = 0;
pub const YELLOW: u64 = 1;
pub const GREEN: u64 = 2;
pub const BLUE: u64 = 3;

/// A center joined to four triangles, with a proper four-coloring.
pub fn croix_pattee() -> (Graph, BTreeMap<NodeId, u64>) {
    let g = Graph::from_edges(&[
        (1, 2),
        (1, 9),
        (2, 9),
        (1, 4),
        (1, 3),
        (3, 4),
        (1, 6),
        (1, 5),
        (5, 6),
        (1, 7),
        (1, 8),
        (7, 8),
    ])
    .unwrap();
    let colors = [
        (1, BLUE),
        (2, GREEN),
        (9, RED),
        (4, YELLOW),
        (3, GREEN),
        (6, GREEN),
        (5, YELLOW),
        (7, RED),
        (8, YELLOW),
    ]
    .into_iter()
    .map(|(v, c)| (NodeId(v), c))
    .collect();
    (g, colors)
}
