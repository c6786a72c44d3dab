//! Exact optimal min-max-load placements for small graphs.
//!
//! [`optimal_max_load`] binary-searches the load cap `T` and decides each cap
//! with an integral max-flow: source to every chooser with capacity `k`,
//! chooser to each neighbor with capacity 1, neighbor to sink with capacity
//! `T`. [`exhaustive_optimal`] enumerates every placement and serves as a
//! reference for the flow solver.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::graph::{Graph, NodeId};
use crate::kbp::Placement;

pub const DEFAULT_NODE_CAP: usize = 60;
pub const EXHAUSTIVE_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OptimalPlacement {
    pub optimal_max_load: usize,
    pub witness: Placement,
}

impl OptimalPlacement {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn check_input(g: &Graph, k: usize) -> Result<()> {
    if k < 1 {
        return Err(param("k must be at least 1"));
    }
    if g.is_empty() {
        return Err(param("empty graph"));
    }
    if g.min_degree() < k {
        return Err(param(format!(
            "minimum degree {} is below k = {k}",
            g.min_degree()
        )));
    }
    Ok(())
}

pub fn optimal_max_load(g: &Graph, k: usize) -> Result<OptimalPlacement> {
    optimal_max_load_capped(g, k, DEFAULT_NODE_CAP)
}

pub fn optimal_max_load_capped(g: &Graph, k: usize, node_cap: usize) -> Result<OptimalPlacement> {
    check_input(g, k)?;
    if g.node_count() > node_cap {
        return Err(Error::TooLarge(format!(
            "{} nodes exceed the oracle cap of {node_cap}",
            g.node_count()
        )));
    }
    // Total load is n*k spread over n nodes, so k is a valid lower bound.
    let (mut lo, mut hi) = (k, g.max_degree());
    let mut best = feasible(g, k, hi)
        .ok_or_else(|| Error::Internal(format!("cap {hi} infeasible with min degree >= k")))?;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match feasible(g, k, mid) {
            Some(p) => {
                best = p;
                hi = mid;
            }
            None => {
                // Monotone: a larger cap admits every flow a smaller one does.
                debug_assert!(mid == k || feasible(g, k, mid - 1).is_none());
                lo = mid + 1;
            }
        }
    }
    Ok(OptimalPlacement {
        optimal_max_load: hi,
        witness: best,
    })
}

/// A placement with every load at most `cap`, if one exists.
pub fn feasible(g: &Graph, k: usize, cap: usize) -> Option<Placement> {
    let n = g.node_count();
    let source = 2 * n;
    let sink = 2 * n + 1;
    let mut net = Dinic::new(2 * n + 2);
    let mut arcs = Vec::new();
    for (i, &v) in g.nodes().iter().enumerate() {
        net.add(source, i, k as i64);
        net.add(n + i, sink, cap as i64);
        for &u in g.neighbors(v) {
            let j = g.index_of(u).unwrap();
            arcs.push((v, u, net.add(i, n + j, 1)));
        }
    }
    if net.max_flow(source, sink) != (n * k) as i64 {
        return None;
    }
    let mut choices: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for (v, u, e) in arcs {
        if net.flow(e) == 1 {
            choices.entry(v).or_default().push(u);
        }
    }
    Some(Placement::new(k, choices).expect("flow witness has k choices per node"))
}

/// Full enumeration; refuses when `Π C(deg(v), k)` exceeds [`EXHAUSTIVE_CAP`].
pub fn exhaustive_optimal(g: &Graph, k: usize) -> Result<OptimalPlacement> {
    check_input(g, k)?;
    let mut space: u128 = 1;
    let options: Vec<Vec<Vec<usize>>> = g
        .nodes()
        .iter()
        .map(|&v| {
            let hood: Vec<usize> = g
                .neighbors(v)
                .iter()
                .map(|&u| g.index_of(u).unwrap())
                .collect();
            subsets(&hood, k)
        })
        .collect();
    for o in &options {
        space = space.saturating_mul(o.len() as u128);
        if space > EXHAUSTIVE_CAP {
            return Err(Error::TooLarge(format!(
                "placement space exceeds {EXHAUSTIVE_CAP}"
            )));
        }
    }
    let n = g.node_count();
    let mut pick = vec![0usize; n];
    let mut load = vec![0usize; n];
    let mut best: Option<(usize, Vec<usize>)> = None;
    enumerate(&options, 0, &mut pick, &mut load, 0, &mut best);
    let (opt, pick) = best.expect("non-empty search space");
    let choices = g
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            (
                v,
                options[i][pick[i]].iter().map(|&j| g.nodes()[j]).collect(),
            )
        })
        .collect();
    Ok(OptimalPlacement {
        optimal_max_load: opt,
        witness: Placement::new(k, choices)?,
    })
}

fn enumerate(
    options: &[Vec<Vec<usize>>],
    i: usize,
    pick: &mut [usize],
    load: &mut [usize],
    current: usize,
    best: &mut Option<(usize, Vec<usize>)>,
) {
    if best.as_ref().is_some_and(|(b, _)| current >= *b) {
        return;
    }
    if i == options.len() {
        *best = Some((current, pick.to_vec()));
        return;
    }
    for (o, set) in options[i].iter().enumerate() {
        let mut peak = current;
        for &j in set {
            load[j] += 1;
            peak = peak.max(load[j]);
        }
        pick[i] = o;
        enumerate(options, i + 1, pick, load, peak, best);
        for &j in set {
            load[j] -= 1;
        }
    }
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

struct Dinic {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            head: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    fn add(&mut self, a: usize, b: usize, c: i64) -> usize {
        let e = self.to.len();
        self.head[a].push(e);
        self.to.push(b);
        self.cap.push(c);
        self.head[b].push(e + 1);
        self.to.push(a);
        self.cap.push(0);
        e
    }

    /// Flow on forward arc `e`, read from its residual twin.
    fn flow(&self, e: usize) -> i64 {
        self.cap[e ^ 1]
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(-1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(a) = queue.pop_front() {
            for &e in &self.head[a] {
                let b = self.to[e];
                if self.cap[e] > 0 && self.level[b] < 0 {
                    self.level[b] = self.level[a] + 1;
                    queue.push_back(b);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, a: usize, t: usize, pushed: i64) -> i64 {
        if a == t {
            return pushed;
        }
        while self.iter[a] < self.head[a].len() {
            let e = self.head[a][self.iter[a]];
            let b = self.to[e];
            if self.cap[e] > 0 && self.level[b] == self.level[a] + 1 {
                let got = self.dfs(b, t, pushed.min(self.cap[e]));
                if got > 0 {
                    self.cap[e] -= got;
                    self.cap[e ^ 1] += got;
                    return got;
                }
            }
            self.iter[a] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        while self.bfs(s, t) {
            self.iter.fill(0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
        total
    }
}
