//! Exact structural measures: degrees and neighborhood independence.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::graph::{Graph, NodeId};

/// Limits for the exact independence search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndependenceConfig {
    /// Largest neighborhood the search will accept.
    pub max_neighborhood: usize,
    /// Branch-and-bound nodes allowed per neighborhood.
    pub search_budget: u64,
}

impl Default for IndependenceConfig {
    fn default() -> Self {
        IndependenceConfig {
            max_neighborhood: 512,
            search_budget: 1 << 25,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StructuralReport {
    pub max_degree: usize,
    pub min_degree: usize,
    pub neighborhood_independence: usize,
    pub node_count: usize,
    pub edge_count: usize,
}

impl StructuralReport {
    pub fn compute(g: &Graph) -> Result<Self> {
        Self::compute_with(g, IndependenceConfig::default())
    }

    pub fn compute_with(g: &Graph, config: IndependenceConfig) -> Result<Self> {
        Ok(StructuralReport {
            max_degree: g.max_degree(),
            min_degree: g.min_degree(),
            neighborhood_independence: neighborhood_independence_with(g, config)?,
            node_count: g.node_count(),
            edge_count: g.edge_count(),
        })
    }
}

/// `I(G)`: the largest independent set inside any single neighborhood.
/// Zero for edgeless graphs.
pub fn neighborhood_independence(g: &Graph) -> Result<usize> {
    neighborhood_independence_with(g, IndependenceConfig::default())
}

pub fn neighborhood_independence_with(g: &Graph, config: IndependenceConfig) -> Result<usize> {
    if g.is_empty() {
        return Err(param("neighborhood independence of an empty graph"));
    }
    let mut best = 0;
    for &v in g.nodes() {
        if g.degree(v) <= best {
            continue;
        }
        best = best.max(independence_of_neighborhood(g, v, config)?);
    }
    Ok(best)
}

/// Maximum independent set size within the subgraph induced on `Γ(v)`.
pub fn independence_of_neighborhood(
    g: &Graph,
    v: NodeId,
    config: IndependenceConfig,
) -> Result<usize> {
    let hood = g.neighbors(v);
    let s = hood.len();
    if s > config.max_neighborhood {
        return Err(Error::IndependenceTooLarge {
            node: v,
            size: s,
            budget: config.search_budget,
        });
    }
    let mut adj = vec![FixedBitSet::with_capacity(s); s];
    for (i, &a) in hood.iter().enumerate() {
        for (j, &b) in hood.iter().enumerate() {
            if i != j && g.has_edge(a, b) {
                adj[i].insert(j);
            }
        }
    }
    let mut search = MisSearch {
        adj: &adj,
        best: 0,
        visited: 0,
        budget: config.search_budget,
    };
    let mut all = FixedBitSet::with_capacity(s);
    all.insert_range(..);
    if search.run(&all, 0).is_err() {
        return Err(Error::IndependenceTooLarge {
            node: v,
            size: s,
            budget: config.search_budget,
        });
    }
    Ok(search.best)
}

struct MisSearch<'a> {
    adj: &'a [FixedBitSet],
    best: usize,
    visited: u64,
    budget: u64,
}

struct BudgetExceeded;

impl MisSearch<'_> {
    // Some maximum independent set of `cand` contains the minimum-degree
    // vertex v or one of its neighbors, so branching over N[v] is complete.
    fn run(&mut self, cand: &FixedBitSet, taken: usize) -> Result<(), BudgetExceeded> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(BudgetExceeded);
        }
        if cand.is_clear() {
            self.best = self.best.max(taken);
            return Ok(());
        }
        if taken + self.clique_cover(cand) <= self.best {
            return Ok(());
        }
        let pivot = cand
            .ones()
            .min_by_key(|&i| self.adj[i].intersection(cand).count())
            .unwrap();
        let mut branch: Vec<usize> = self.adj[pivot].intersection(cand).collect();
        branch.insert(0, pivot);
        for u in branch {
            let mut next = cand.clone();
            next.difference_with(&self.adj[u]);
            next.set(u, false);
            self.run(&next, taken + 1)?;
        }
        Ok(())
    }

    /// Greedy clique cover size, an upper bound on the independence number.
    fn clique_cover(&self, cand: &FixedBitSet) -> usize {
        let mut left = cand.clone();
        let mut cliques = 0;
        while let Some(first) = left.minimum() {
            cliques += 1;
            let mut common = self.adj[first].clone();
            common.intersect_with(&left);
            left.set(first, false);
            while let Some(next) = common.minimum() {
                left.set(next, false);
                common.intersect_with(&self.adj[next]);
            }
        }
        cliques
    }
}

/// Errors unless every node has degree at least `k`.
pub fn require_min_degree(g: &Graph, k: usize) -> Result<()> {
    let delta = g.min_degree();
    if delta < k {
        return Err(param(format!("minimum degree {delta} is below {k}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, star};

    /// Enumerates every subset of every neighborhood.
    fn brute_force(g: &Graph) -> usize {
        let mut best = 0;
        for &v in g.nodes() {
            let hood = g.neighbors(v);
            for mask in 0u32..(1 << hood.len()) {
                let members: Vec<NodeId> = (0..hood.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| hood[i])
                    .collect();
                let independent = members
                    .iter()
                    .enumerate()
                    .all(|(i, &a)| members[i + 1..].iter().all(|&b| !g.has_edge(a, b)));
                if independent {
                    best = best.max(members.len());
                }
            }
        }
        best
    }

    #[test]
    fn small_fixtures_match_brute_force() {
        let c6 = cycle(6).unwrap();
        assert_eq!(brute_force(&c6), 2);
        assert_eq!(neighborhood_independence(&c6).unwrap(), 2);
        let s5 = star(5).unwrap();
        assert_eq!(brute_force(&s5), 5);
        assert_eq!(neighborhood_independence(&s5).unwrap(), 5);
        assert_eq!(neighborhood_independence(&cycle(3).unwrap()).unwrap(), 1);
        assert_eq!(neighborhood_independence(&complete(6).unwrap()).unwrap(), 1);
    }

    #[test]
    fn random_udgs_match_brute_force() {
        for seed in 0..30 {
            let (g, _) = crate::generators::unit_disk(25, 0.3, seed).unwrap();
            if g.max_degree() > 16 {
                continue;
            }
            assert_eq!(
                neighborhood_independence(&g).unwrap(),
                brute_force(&g),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn edgeless_graph_has_zero_independence() {
        let g = Graph::new([NodeId(1), NodeId(2)], []).unwrap();
        assert_eq!(neighborhood_independence(&g).unwrap(), 0);
        let empty = Graph::new([], []).unwrap();
        assert!(neighborhood_independence(&empty).is_err());
    }

    #[test]
    fn caps_produce_explicit_errors() {
        let s = star(30).unwrap();
        let tight = IndependenceConfig {
            max_neighborhood: 10,
            ..Default::default()
        };
        assert!(matches!(
            neighborhood_independence_with(&s, tight),
            Err(Error::IndependenceTooLarge { size: 30, .. })
        ));
        let starved = IndependenceConfig {
            search_budget: 3,
            ..Default::default()
        };
        assert!(matches!(
            neighborhood_independence_with(&s, starved),
            Err(Error::IndependenceTooLarge { .. })
        ));
    }

    #[test]
    fn report_fields() {
        let r = StructuralReport::compute(&star(5).unwrap()).unwrap();
        assert_eq!(
            r,
            StructuralReport {
                max_degree: 5,
                min_degree: 1,
                neighborhood_independence: 5,
                node_count: 6,
                edge_count: 5
            }
        );
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"neighborhoodIndependence\":5"));
    }
}
