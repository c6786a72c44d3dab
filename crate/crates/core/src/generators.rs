//! Topology generators.
//!
//! All randomness comes from [`ChaCha8Rng`] seeded with `seed_from_u64`, which
//! yields the same stream on every platform. Point `i` (1-based) consumes two
//! consecutive `f64` draws, `x` then `y`.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::graph::{Graph, NodeId};

/// The generator PRNG.
pub type Prng = ChaCha8Rng;

pub fn prng(seed: u64) -> Prng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Node positions in the unit square plus the connection radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometricLayout {
    pub positions: BTreeMap<NodeId, (f64, f64)>,
    pub radius: f64,
}

impl GeometricLayout {
    pub fn distance(&self, u: NodeId, v: NodeId) -> f64 {
        let (a, b) = (self.positions[&u], self.positions[&v]);
        (a.0 - b.0).hypot(a.1 - b.1)
    }

    /// Builds the unit disk graph: `{u, v}` is an edge iff the Euclidean
    /// distance is at most the radius. Uses a bucket grid of cell size
    /// `radius`, so only adjacent cells are compared.
    pub fn to_graph(&self) -> Graph {
        let r = self.radius;
        let cell = |p: (f64, f64)| ((p.0 / r).floor() as i64, (p.1 / r).floor() as i64);
        let mut grid: HashMap<(i64, i64), Vec<NodeId>> = HashMap::new();
        for (&v, &p) in &self.positions {
            grid.entry(cell(p)).or_default().push(v);
        }
        let mut edges = Vec::new();
        for (&v, &p) in &self.positions {
            let (cx, cy) = cell(p);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    let Some(bucket) = grid.get(&(cx + dx, cy + dy)) else {
                        continue;
                    };
                    for &u in bucket {
                        if v < u && self.distance(u, v) <= r {
                            edges.push((v, u));
                        }
                    }
                }
            }
        }
        edges.sort_unstable();
        Graph::new(self.positions.keys().copied(), edges).expect("grid scan yields a simple graph")
    }

    /// CSV with header `id,x,y`.
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["id", "x", "y"])?;
        for (v, (x, y)) in &self.positions {
            out.write_record([v.to_string(), x.to_string(), y.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Uniform unit disk graph on `n` points in the unit square; IDs `1..=n` in
/// draw order.
pub fn unit_disk(n: usize, radius: f64, seed: u64) -> Result<(Graph, GeometricLayout)> {
    let mut rng = prng(seed);
    unit_disk_from_rng(n, radius, &mut rng)
}

fn unit_disk_from_rng(n: usize, radius: f64, rng: &mut Prng) -> Result<(Graph, GeometricLayout)> {
    if n < 1 {
        return Err(param("unit disk graph needs n >= 1"));
    }
    if !(radius > 0.0 && radius <= std::f64::consts::SQRT_2) {
        return Err(param(format!("radius {radius} outside (0, sqrt 2]")));
    }
    let positions = (1..=n as u64)
        .map(|i| {
            let x: f64 = rng.gen();
            let y: f64 = rng.gen();
            (NodeId(i), (x, y))
        })
        .collect();
    let layout = GeometricLayout { positions, radius };
    Ok((layout.to_graph(), layout))
}

/// Parameters for the bounded-growth generator: a unit disk graph accepted
/// only once its minimum degree reaches `min_degree_fraction` of its maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedGrowthConfig {
    pub n: usize,
    pub radius: f64,
    pub min_degree_fraction: f64,
    pub max_attempts: usize,
}

impl BoundedGrowthConfig {
    pub fn new(n: usize, radius: f64) -> Self {
        BoundedGrowthConfig {
            n,
            radius,
            min_degree_fraction: 0.5,
            max_attempts: 10_000,
        }
    }
}

/// Draws unit disk graphs from one seeded stream until `δ ≥ fraction·Δ`.
/// Returns the accepted graph, its layout and the number of draws.
pub fn bounded_growth(
    config: &BoundedGrowthConfig,
    seed: u64,
) -> Result<(Graph, GeometricLayout, usize)> {
    if !(0.0..=1.0).contains(&config.min_degree_fraction) {
        return Err(param("min degree fraction must lie in [0, 1]"));
    }
    let mut rng = prng(seed);
    for attempt in 1..=config.max_attempts {
        let (g, layout) = unit_disk_from_rng(config.n, config.radius, &mut rng)?;
        if g.min_degree() as f64 >= config.min_degree_fraction * g.max_degree() as f64 {
            return Ok((g, layout, attempt));
        }
    }
    Err(Error::TooLarge(format!(
        "no draw met the degree filter in {} attempts",
        config.max_attempts
    )))
}

/// Cycle `1 - 2 - ... - n - 1`.
pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(param("cycle needs n >= 3"));
    }
    let n = n as u64;
    let edges: Vec<(u64, u64)> = (1..=n).map(|i| (i, i % n + 1)).collect();
    Graph::from_edges(&edges)
}

/// Star with center `1` and leaves `2..=leaves+1`.
pub fn star(leaves: usize) -> Result<Graph> {
    if leaves < 1 {
        return Err(param("star needs at least one leaf"));
    }
    let edges: Vec<(u64, u64)> = (2..=leaves as u64 + 1).map(|i| (1, i)).collect();
    Graph::from_edges(&edges)
}

/// Path `1 - 2 - ... - n`.
pub fn path(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(param("path needs n >= 2"));
    }
    let edges: Vec<(u64, u64)> = (1..n as u64).map(|i| (i, i + 1)).collect();
    Graph::from_edges(&edges)
}

pub fn complete(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(param("complete graph needs n >= 2"));
    }
    let n = n as u64;
    let edges: Vec<(u64, u64)> = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .collect();
    Graph::from_edges(&edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_has_no_edges() {
        let (g, layout) = unit_disk(1, 0.5, 0).unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(layout.positions.len(), 1);
    }

    #[test]
    fn coincident_points_are_adjacent() {
        let layout = GeometricLayout {
            positions: [(NodeId(1), (0.25, 0.75)), (NodeId(2), (0.25, 0.75))].into(),
            radius: 0.1,
        };
        assert_eq!(layout.to_graph().edge_count(), 1);
    }

    #[test]
    fn parameter_errors() {
        assert!(unit_disk(0, 0.3, 1).is_err());
        assert!(unit_disk(5, 0.0, 1).is_err());
        assert!(unit_disk(5, 2.0, 1).is_err());
        assert!(cycle(2).is_err());
        assert!(star(0).is_err());
    }

    #[test]
    fn small_fixtures() {
        let t = cycle(3).unwrap();
        assert_eq!(t.edge_count(), 3);
        let c4 = cycle(4).unwrap();
        assert_eq!(c4.edge_count(), 4);
        assert!(c4.nodes().iter().all(|&v| c4.degree(v) == 2));
        let c6 = cycle(6).unwrap();
        assert_eq!((c6.min_degree(), c6.max_degree()), (2, 2));
        assert_eq!(star(1).unwrap().edge_count(), 1);
        let s2 = star(2).unwrap();
        assert_eq!(s2.degree(NodeId(1)), 2);
        assert_eq!(s2.edge_count(), 2);
        let s5 = star(5).unwrap();
        assert_eq!((s5.max_degree(), s5.min_degree()), (5, 1));
    }

    #[test]
    fn same_seed_same_layout() {
        let (a, la) = unit_disk(40, 0.25, 9).unwrap();
        let (b, lb) = unit_disk(40, 0.25, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(la, lb);
        let (c, _) = unit_disk(40, 0.25, 10).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn layout_csv_header() {
        let (_, layout) = unit_disk(3, 0.5, 1).unwrap();
        let mut buf = Vec::new();
        layout.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("id,x,y\n1,"));
        assert_eq!(text.lines().count(), 4);
    }
}
