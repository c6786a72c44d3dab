//! K-backup placement by the K-next-modulo rule.
//!
//! Each node picks the `K` neighbors that immediately follow its own ID in
//! the circular order of IDs, wrapping past the largest ID to the smallest.
//! The choice depends only on the node's own ID and its neighbor IDs, so the
//! distributed version needs one round: the node computes its choices and
//! notifies each chosen neighbor.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::graph::{Graph, NodeId};
use crate::sim::{run_synchronous, NodeContext, NodeProgram, RunConfig, RunResult, Step};

/// Notification payload sent to every chosen backup. The sender is the
/// message source, so one tag byte suffices.
pub const CHOSEN: u8 = b'C';

/// The `K` neighbors succeeding `v` in circular ID order.
///
/// `neighbors` must be sorted ascending and must not contain `v`. Returns
/// `min(k, neighbors.len())` nodes.
pub fn k_next_modulo(v: NodeId, neighbors: &[NodeId], k: usize) -> Result<Vec<NodeId>> {
    if k < 1 {
        return Err(param("k must be at least 1"));
    }
    if neighbors.is_empty() {
        return Err(Error::IsolatedNodes(vec![v]));
    }
    debug_assert!(neighbors.windows(2).all(|w| w[0] < w[1]));
    debug_assert!(!neighbors.contains(&v));
    let start = neighbors.partition_point(|&u| u <= v);
    let take = k.min(neighbors.len());
    Ok(neighbors
        .iter()
        .cycle()
        .skip(start)
        .take(take)
        .copied()
        .collect())
}

/// Per-node ordered backup choices for one `K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    k: usize,
    choices: BTreeMap<NodeId, Vec<NodeId>>,
}

impl Placement {
    pub fn new(k: usize, choices: BTreeMap<NodeId, Vec<NodeId>>) -> Result<Self> {
        if k < 1 {
            return Err(param("k must be at least 1"));
        }
        Ok(Placement { k, choices })
    }

    /// The placement computed centrally, node by node.
    pub fn k_next_modulo(g: &Graph, k: usize) -> Result<Self> {
        let isolated = g.isolated_nodes();
        if !isolated.is_empty() {
            return Err(Error::IsolatedNodes(isolated));
        }
        let choices = g
            .nodes()
            .iter()
            .map(|&v| Ok((v, k_next_modulo(v, g.neighbors(v), k)?)))
            .collect::<Result<_>>()?;
        Placement::new(k, choices)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn choices(&self) -> &BTreeMap<NodeId, Vec<NodeId>> {
        &self.choices
    }

    pub fn of(&self, v: NodeId) -> &[NodeId] {
        self.choices.get(&v).map_or(&[], Vec::as_slice)
    }

    /// Checks that every node of `g` has exactly `min(k, deg)` distinct
    /// neighbors chosen and nothing else is listed.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        for &v in self.choices.keys() {
            if !g.contains(v) {
                return Err(Error::InvalidPlacement(format!(
                    "chooser {v} is not in the graph"
                )));
            }
        }
        for &v in g.nodes() {
            let chosen = self.of(v);
            let want = self.k.min(g.degree(v));
            if chosen.len() != want {
                return Err(Error::InvalidPlacement(format!(
                    "node {v} chose {} backups, expected {want}",
                    chosen.len()
                )));
            }
            let mut seen = BTreeSet::new();
            for &u in chosen {
                if u == v {
                    return Err(Error::InvalidPlacement(format!("node {v} chose itself")));
                }
                if !g.has_edge(v, u) {
                    return Err(Error::InvalidPlacement(format!(
                        "node {v} chose {u}, which is not a neighbor"
                    )));
                }
                if !seen.insert(u) {
                    return Err(Error::InvalidPlacement(format!("node {v} chose {u} twice")));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: Placement = serde_json::from_str(text)?;
        Placement::new(p.k, p.choices)
    }
}

/// Per-node output of the distributed run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KbpOutput {
    pub choices: Vec<NodeId>,
    /// Neighbors that notified this node that they chose it.
    pub chosen_by: Vec<NodeId>,
}

/// K-next-modulo as a node program.
#[derive(Debug, Clone, Copy)]
pub struct KbpProgram {
    pub k: usize,
}

impl NodeProgram for KbpProgram {
    type State = Vec<NodeId>;
    type Output = KbpOutput;

    fn init(&self, _: NodeId, _: &[NodeId]) -> Self::State {
        Vec::new()
    }

    fn step(&self, ctx: &NodeContext<'_>, choices: &mut Self::State) -> Step {
        *choices = k_next_modulo(ctx.id, ctx.neighbors, self.k).unwrap_or_default();
        Step::halt(choices.iter().map(|&u| (u, vec![CHOSEN])).collect())
    }

    fn finish(&self, ctx: &NodeContext<'_>, choices: Self::State) -> KbpOutput {
        KbpOutput {
            choices,
            chosen_by: ctx
                .inbox
                .iter()
                .filter(|m| m.payload == [CHOSEN])
                .map(|m| m.src)
                .collect(),
        }
    }
}

/// Runs K-next-modulo on the round engine with default settings.
pub fn run_kbp(g: &Graph, k: usize) -> Result<(Placement, RunResult<KbpOutput>)> {
    run_kbp_with(g, k, &RunConfig::default())
}

pub fn run_kbp_with(
    g: &Graph,
    k: usize,
    config: &RunConfig,
) -> Result<(Placement, RunResult<KbpOutput>)> {
    if k < 1 {
        return Err(param("k must be at least 1"));
    }
    let isolated = g.isolated_nodes();
    if !isolated.is_empty() {
        return Err(Error::IsolatedNodes(isolated));
    }
    let result = run_synchronous(g, &KbpProgram { k }, config)?;
    let choices = result
        .outputs
        .iter()
        .map(|(&v, out)| (v, out.choices.clone()))
        .collect();
    Ok((Placement::new(k, choices)?, result))
}

/// Exact backup loads `b_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LoadReport {
    pub loads: BTreeMap<NodeId, usize>,
    pub max_load: usize,
    /// `c * K` for the supplied neighborhood independence `c`.
    pub c_times_k: usize,
}

impl LoadReport {
    /// CSV with header `node,load`.
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["node", "load"])?;
        for (v, load) in &self.loads {
            out.write_record([v.to_string(), load.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

pub fn compute_loads(g: &Graph, p: &Placement, c: usize) -> Result<LoadReport> {
    p.validate(g)?;
    let mut loads: BTreeMap<NodeId, usize> = g.nodes().iter().map(|&v| (v, 0)).collect();
    for chosen in p.choices().values() {
        for u in chosen {
            *loads.get_mut(u).unwrap() += 1;
        }
    }
    let max_load = loads.values().copied().max().unwrap_or(0);
    Ok(LoadReport {
        loads,
        max_load,
        c_times_k: c * p.k(),
    })
}

/// For every node not in `crashed`, how many of its backups are still alive.
pub fn survivability(
    g: &Graph,
    p: &Placement,
    crashed: &BTreeSet<NodeId>,
) -> BTreeMap<NodeId, usize> {
    g.nodes()
        .iter()
        .filter(|v| !crashed.contains(v))
        .map(|&v| (v, p.of(v).iter().filter(|u| !crashed.contains(u)).count()))
        .collect()
}
