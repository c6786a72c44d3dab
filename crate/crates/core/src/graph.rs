//! Immutable undirected simple graphs keyed by positive integer node IDs.
//!
//! Nodes are stored in ascending ID order, so the position of a node in
//! [`Graph::nodes`] doubles as a dense index. Adjacency lists are sorted.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::kbp::Placement;

/// Unique positive node identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for NodeId {
    fn from(v: u64) -> Self {
        NodeId(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    nodes: Vec<NodeId>,
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from an explicit node set and edge list.
    ///
    /// Rejects non-positive IDs, self-loops, duplicate edges and edges that
    /// mention a node outside `nodes`.
    pub fn new(
        nodes: impl IntoIterator<Item = NodeId>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self> {
        let set: BTreeSet<NodeId> = nodes.into_iter().collect();
        if let Some(zero) = set.iter().find(|v| v.0 == 0) {
            return Err(param(format!("node id {zero} is not positive")));
        }
        let mut adj: BTreeMap<NodeId, BTreeSet<NodeId>> =
            set.iter().map(|&v| (v, BTreeSet::new())).collect();
        for (i, (u, v)) in edges.into_iter().enumerate() {
            if u == v {
                return Err(Error::SelfLoop {
                    line: i + 1,
                    node: u,
                });
            }
            for w in [u, v] {
                if !adj.contains_key(&w) {
                    return Err(Error::UnknownNode(w));
                }
            }
            if !adj.get_mut(&u).unwrap().insert(v) {
                return Err(Error::DuplicateEdge { line: i + 1, u, v });
            }
            adj.get_mut(&v).unwrap().insert(u);
        }
        Ok(Self::from_sets(adj))
    }

    /// Builds a graph whose node set is exactly the endpoints of `edges`.
    pub fn from_edges(edges: &[(u64, u64)]) -> Result<Self> {
        let nodes = edges.iter().flat_map(|&(u, v)| [NodeId(u), NodeId(v)]);
        Self::new(nodes, edges.iter().map(|&(u, v)| (NodeId(u), NodeId(v))))
    }

    fn from_sets(adj: BTreeMap<NodeId, BTreeSet<NodeId>>) -> Self {
        let edge_count = adj.values().map(BTreeSet::len).sum::<usize>() / 2;
        let (nodes, adjacency) = adj
            .into_iter()
            .map(|(v, ns)| (v, ns.into_iter().collect()))
            .unzip();
        Graph {
            nodes,
            adjacency,
            edge_count,
        }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, v: NodeId) -> Option<usize> {
        self.nodes.binary_search(&v).ok()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.index_of(v).is_some()
    }

    /// Sorted neighbor list of `v`; empty for unknown nodes.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        match self.index_of(v) {
            Some(i) => &self.adjacency[i],
            None => &[],
        }
    }

    pub fn neighbors_at(&self, index: usize) -> &[NodeId] {
        &self.adjacency[index]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.neighbors(v).len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_id(&self) -> u64 {
        self.nodes.last().map_or(0, |v| v.0)
    }

    /// All edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes
            .iter()
            .zip(&self.adjacency)
            .flat_map(|(&u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn isolated_nodes(&self) -> Vec<NodeId> {
        self.nodes
            .iter()
            .zip(&self.adjacency)
            .filter(|(_, ns)| ns.is_empty())
            .map(|(&v, _)| v)
            .collect()
    }

    /// Full scan of the symmetry, no-self-loop and membership invariants.
    pub fn check_invariants(&self) -> Result<()> {
        for (&v, ns) in self.nodes.iter().zip(&self.adjacency) {
            if ns.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Internal(format!(
                    "adjacency of {v} not strictly sorted"
                )));
            }
            for &u in ns {
                if u == v {
                    return Err(Error::Internal(format!("self-loop at {v}")));
                }
                if !self.contains(u) {
                    return Err(Error::UnknownNode(u));
                }
                if !self.has_edge(u, v) {
                    return Err(Error::Internal(format!("edge {v}-{u} not symmetric")));
                }
            }
        }
        Ok(())
    }

    /// BFS hop distances from `source`, truncated at `limit` hops.
    pub fn distances_from(&self, source: NodeId, limit: usize) -> BTreeMap<NodeId, usize> {
        let mut dist = BTreeMap::new();
        if !self.contains(source) {
            return dist;
        }
        dist.insert(source, 0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[&u];
            if d == limit {
                continue;
            }
            for &w in self.neighbors(u) {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        match self.nodes.first() {
            None => true,
            Some(&s) => self.distances_from(s, usize::MAX).len() == self.nodes.len(),
        }
    }

    /// The square graph: `u ~ v` iff their hop distance is 1 or 2.
    pub fn square(&self) -> Graph {
        let adj = self
            .nodes
            .iter()
            .zip(&self.adjacency)
            .map(|(&v, ns)| {
                let mut reach: BTreeSet<NodeId> = ns.iter().copied().collect();
                for &u in ns {
                    reach.extend(self.neighbors(u).iter().copied());
                }
                reach.remove(&v);
                (v, reach)
            })
            .collect();
        Self::from_sets(adj)
    }

    /// Subgraph on the same node set keeping only edges picked by `placement`
    /// in at least one direction.
    pub fn selection_subgraph(&self, placement: &Placement) -> Result<Graph> {
        placement.validate(self)?;
        let mut adj: BTreeMap<NodeId, BTreeSet<NodeId>> =
            self.nodes.iter().map(|&v| (v, BTreeSet::new())).collect();
        for (&v, chosen) in placement.choices() {
            for &u in chosen {
                adj.get_mut(&v).unwrap().insert(u);
                adj.get_mut(&u).unwrap().insert(v);
            }
        }
        Ok(Self::from_sets(adj))
    }

    /// Subgraph induced on `keep`.
    pub fn induced(&self, keep: &BTreeSet<NodeId>) -> Graph {
        let adj = keep
            .iter()
            .filter(|v| self.contains(**v))
            .map(|&v| {
                let ns = self
                    .neighbors(v)
                    .iter()
                    .copied()
                    .filter(|u| keep.contains(u))
                    .collect();
                (v, ns)
            })
            .collect();
        Self::from_sets(adj)
    }

    /// Parses the edge-list format: one `u v` pair per line, `#` comments.
    pub fn read_edge_list(reader: impl BufRead) -> Result<Graph> {
        let mut adj: BTreeMap<NodeId, BTreeSet<NodeId>> = BTreeMap::new();
        for (i, line) in reader.lines().enumerate() {
            let lineno = i + 1;
            let line = line?;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = text.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected two node ids, found {} fields", fields.len()),
                });
            }
            let parse = |s: &str| -> Result<NodeId> {
                match s.parse::<u64>() {
                    Ok(v) if v > 0 => Ok(NodeId(v)),
                    _ => Err(Error::Parse {
                        line: lineno,
                        message: format!("`{s}` is not a positive integer"),
                    }),
                }
            };
            let (u, v) = (parse(fields[0])?, parse(fields[1])?);
            if u == v {
                return Err(Error::SelfLoop {
                    line: lineno,
                    node: u,
                });
            }
            if !adj.entry(u).or_default().insert(v) {
                return Err(Error::DuplicateEdge { line: lineno, u, v });
            }
            adj.entry(v).or_default().insert(u);
        }
        Ok(Self::from_sets(adj))
    }

    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        Self::read_edge_list(text.as_bytes())
    }

    /// Writes one `u v` line per edge. Isolated nodes cannot be represented
    /// and are listed in a leading comment.
    pub fn write_edge_list(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(
            w,
            "# nodes {} edges {}",
            self.node_count(),
            self.edge_count()
        )?;
        let isolated = self.isolated_nodes();
        if !isolated.is_empty() {
            let ids: Vec<String> = isolated.iter().map(ToString::to_string).collect();
            writeln!(w, "# isolated {}", ids.join(" "))?;
        }
        for (u, v) in self.edges() {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }
}
