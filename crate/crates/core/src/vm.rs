//! Virtual-memory schedules on top of a backup placement.
//!
//! Both schedulers split the nodes into phases. In its phase a node is
//! active and borrows memory from its backup targets, which are inactive.
//!
//! * [`efficient_vm`] colors the selection subgraph `G'` at distance 2 and
//!   runs one phase per non-empty color class. Two active nodes are at
//!   least three hops apart in `G'`, so every target serves one active node
//!   and grants it its whole memory: each node gains exactly `K`.
//! * [`extended_vm`] takes a `(Δ + 1)`-coloring of `G`, groups the colors
//!   into `R` super-classes and runs one phase per super-class. An active
//!   node targets every neighbor outside its super-class, and each target
//!   splits its memory evenly among its selectors of that phase.
//!
//! Memory is accounted in exact rationals. Shares do not carry over between
//! phases.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use num::{BigInt, BigRational, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::coloring::{
    delta_plus_one_coloring, distance2_coloring, partition_super_classes, Coloring, ColoringConfig,
    SuperClassPartition,
};
use crate::error::{param, Error, Result};
use crate::graph::{Graph, NodeId};
use crate::kbp::{run_kbp_with, Placement};
use crate::sim::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "EfficientVM")]
    EfficientVm,
    #[serde(rename = "ExtendedVM")]
    ExtendedVm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phase {
    pub index: usize,
    pub active: BTreeSet<NodeId>,
    /// `(active node, backup target)` pairs exercised in this phase.
    pub edges: BTreeSet<(NodeId, NodeId)>,
    /// Share of the target's memory granted along each edge.
    #[serde(skip)]
    pub shares: BTreeMap<(NodeId, NodeId), BigRational>,
}

impl Phase {
    /// Number of active selectors per target.
    pub fn selector_counts(&self) -> BTreeMap<NodeId, usize> {
        let mut counts = BTreeMap::new();
        for &(_, u) in &self.edges {
            *counts.entry(u).or_insert(0) += 1;
        }
        counts
    }

    pub fn targets_of(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.edges
            .range((v, NodeId(0))..=(v, NodeId(u64::MAX)))
            .map(|&(_, u)| u)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Schedule {
    pub algorithm: Algorithm,
    pub phases: Vec<Phase>,
    pub total_rounds: usize,
}

impl Schedule {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Structural checks shared by both algorithms: every node of `g` is
    /// active in exactly one phase, every edge joins graph neighbors and
    /// starts at an active node, and no target is itself active.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let mut seen = BTreeSet::new();
        for phase in &self.phases {
            for &v in &phase.active {
                if !g.contains(v) {
                    return Err(Error::UnknownNode(v));
                }
                if !seen.insert(v) {
                    return Err(param(format!("node {v} is active in two phases")));
                }
            }
            for &(v, u) in &phase.edges {
                if !phase.active.contains(&v) {
                    return Err(param(format!(
                        "phase {}: edge {v}->{u} leaves an inactive node",
                        phase.index
                    )));
                }
                if phase.active.contains(&u) {
                    return Err(param(format!(
                        "phase {}: target {u} is active",
                        phase.index
                    )));
                }
                if !g.has_edge(v, u) {
                    return Err(param(format!(
                        "phase {}: {v}->{u} is not a graph edge",
                        phase.index
                    )));
                }
            }
        }
        if seen.len() != g.node_count() {
            return Err(param("some node is never active"));
        }
        Ok(())
    }
}

/// Physical memory `M` per node and the virtual memory each node reaches in
/// its active phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoryLedger {
    pub memory: BigRational,
    pub virtual_of: BTreeMap<NodeId, BigRational>,
    pub gain_of: BTreeMap<NodeId, BigRational>,
}

impl MemoryLedger {
    /// Sums granted shares per active node and rejects any phase in which a
    /// target grants more than `M` in total.
    pub fn from_schedule(schedule: &Schedule, memory: &BigRational) -> Result<Self> {
        if *memory <= BigRational::zero() {
            return Err(param("memory per node must be positive"));
        }
        let mut virtual_of = BTreeMap::new();
        for phase in &schedule.phases {
            let mut granted: BTreeMap<NodeId, BigRational> = BTreeMap::new();
            for &v in &phase.active {
                virtual_of.entry(v).or_insert_with(BigRational::zero);
            }
            for (&(v, u), share) in &phase.shares {
                *granted.entry(u).or_insert_with(BigRational::zero) += share;
                *virtual_of.get_mut(&v).unwrap() += share;
            }
            if let Some((u, total)) = granted.iter().find(|(_, t)| *t > memory) {
                return Err(Error::Internal(format!(
                    "phase {}: target {u} over-committed ({total} > {memory})",
                    phase.index
                )));
            }
        }
        let gain_of = virtual_of.iter().map(|(&v, x)| (v, x / memory)).collect();
        Ok(MemoryLedger {
            memory: memory.clone(),
            virtual_of,
            gain_of,
        })
    }

    /// CSV with header `node,virtual,gain`; values are exact fractions.
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["node", "virtual", "gain"])?;
        for (v, x) in &self.virtual_of {
            out.write_record([v.to_string(), x.to_string(), self.gain_of[v].to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerSummary {
    pub min_gain: BigRational,
    pub median_gain: BigRational,
    pub max_gain: BigRational,
}

impl LedgerSummary {
    pub fn min_f64(&self) -> f64 {
        self.min_gain.to_f64().unwrap_or(f64::NAN)
    }

    pub fn median_f64(&self) -> f64 {
        self.median_gain.to_f64().unwrap_or(f64::NAN)
    }

    pub fn max_f64(&self) -> f64 {
        self.max_gain.to_f64().unwrap_or(f64::NAN)
    }
}

/// Min, median (mean of the two middle values for even counts) and max gain.
pub fn ledger_report(ledger: &MemoryLedger) -> Option<LedgerSummary> {
    let mut gains: Vec<&BigRational> = ledger.gain_of.values().collect();
    if gains.is_empty() {
        return None;
    }
    gains.sort();
    let n = gains.len();
    let median = if n % 2 == 1 {
        gains[n / 2].clone()
    } else {
        (gains[n / 2 - 1] + gains[n / 2]) / BigRational::from_integer(BigInt::from(2))
    };
    Some(LedgerSummary {
        min_gain: gains[0].clone(),
        median_gain: median,
        max_gain: gains[n - 1].clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VmConfig {
    pub memory: BigRational,
    pub coloring: ColoringConfig,
}

impl Default for VmConfig {
    fn default() -> Self {
        VmConfig {
            memory: BigRational::from_integer(BigInt::from(1)),
            coloring: ColoringConfig::default(),
        }
    }
}

impl VmConfig {
    fn run_config(&self) -> RunConfig {
        RunConfig {
            bandwidth_factor: self.coloring.bandwidth_factor,
            max_rounds: self.coloring.max_rounds,
            ..RunConfig::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct EfficientVm {
    pub placement: Placement,
    pub selection: Graph,
    pub coloring: Coloring,
    pub schedule: Schedule,
    pub ledger: MemoryLedger,
}

/// Placement, distance-2 coloring of `G'`, one phase per color class.
pub fn efficient_vm(g: &Graph, k: usize, config: &VmConfig) -> Result<EfficientVm> {
    if k < 1 {
        return Err(param("k must be at least 1"));
    }
    if g.min_degree() < k {
        return Err(param(format!(
            "minimum degree {} is below k = {k}",
            g.min_degree()
        )));
    }
    let (placement, kbp_run) = run_kbp_with(g, k, &config.run_config())?;
    let selection = g.selection_subgraph(&placement)?;
    let coloring = distance2_coloring(&selection, &config.coloring)?;

    let mut classes: BTreeMap<u64, BTreeSet<NodeId>> = BTreeMap::new();
    for (&v, &c) in &coloring.colors {
        classes.entry(c).or_default().insert(v);
    }
    let phases: Vec<Phase> = classes
        .into_values()
        .enumerate()
        .map(|(index, active)| {
            let mut edges = BTreeSet::new();
            let mut shares = BTreeMap::new();
            for &v in &active {
                for &u in placement.of(v) {
                    edges.insert((v, u));
                    shares.insert((v, u), config.memory.clone());
                }
            }
            Phase {
                index,
                active,
                edges,
                shares,
            }
        })
        .collect();
    let total_rounds = kbp_run.rounds_used + coloring.rounds_used + phases.len();
    let schedule = Schedule {
        algorithm: Algorithm::EfficientVm,
        phases,
        total_rounds,
    };
    let ledger = MemoryLedger::from_schedule(&schedule, &config.memory)?;
    Ok(EfficientVm {
        placement,
        selection,
        coloring,
        schedule,
        ledger,
    })
}

/// Targets with more than one active selector in some phase, as
/// `(phase, target, selectors)`.
pub fn exclusivity_violations(schedule: &Schedule) -> Vec<(usize, NodeId, usize)> {
    schedule
        .phases
        .iter()
        .flat_map(|p| {
            p.selector_counts()
                .into_iter()
                .filter(|&(_, n)| n > 1)
                .map(move |(u, n)| (p.index, u, n))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct ExtendedVm {
    pub coloring: Coloring,
    pub partition: SuperClassPartition,
    pub schedule: Schedule,
    pub ledger: MemoryLedger,
    /// Active nodes left without any target (all neighbors in their own
    /// super-class); their virtual memory is zero.
    pub starved: Vec<NodeId>,
}

/// `(Δ + 1)`-coloring, `R` super-classes, one phase per super-class.
pub fn extended_vm(g: &Graph, r: usize, config: &VmConfig) -> Result<ExtendedVm> {
    let delta = g.max_degree();
    if r < 1 || r >= delta {
        return Err(param(format!("R = {r} outside 1..{delta}")));
    }
    if g.min_degree() < 1 {
        return Err(Error::IsolatedNodes(g.isolated_nodes()));
    }
    if !g.is_connected() {
        return Err(param("extended VM needs a connected graph"));
    }
    let coloring = delta_plus_one_coloring(g, &config.coloring)?;
    extended_vm_with_coloring(g, coloring, r, &config.memory)
}

/// The super-class schedule for a given proper coloring.
pub fn extended_vm_with_coloring(
    g: &Graph,
    coloring: Coloring,
    r: usize,
    memory: &BigRational,
) -> Result<ExtendedVm> {
    let partition = partition_super_classes(coloring.color_count, r)?;
    let class = |v: NodeId| partition.class_of(coloring.color(v));
    let mut phases = Vec::with_capacity(r);
    let mut starved = Vec::new();
    for s in 0..r {
        let active: BTreeSet<NodeId> = g
            .nodes()
            .iter()
            .copied()
            .filter(|&v| class(v) == s)
            .collect();
        let mut edges = BTreeSet::new();
        for &v in &active {
            let before = edges.len();
            edges.extend(
                g.neighbors(v)
                    .iter()
                    .filter(|&&u| class(u) != s)
                    .map(|&u| (v, u)),
            );
            if edges.len() == before {
                starved.push(v);
            }
        }
        let mut phase = Phase {
            index: s,
            active,
            edges,
            shares: BTreeMap::new(),
        };
        let counts = phase.selector_counts();
        phase.shares = phase
            .edges
            .iter()
            .map(|&(v, u)| {
                let n = BigRational::from_integer(BigInt::from(counts[&u]));
                ((v, u), memory / n)
            })
            .collect();
        phases.push(phase);
    }
    let schedule = Schedule {
        algorithm: Algorithm::ExtendedVm,
        phases,
        total_rounds: coloring.rounds_used + r,
    };
    let ledger = MemoryLedger::from_schedule(&schedule, memory)?;
    Ok(ExtendedVm {
        coloring,
        partition,
        schedule,
        ledger,
        starved,
    })
}

/// Recomputes the shares of a schedule read back from JSON.
pub fn restore_shares(schedule: &mut Schedule, memory: &BigRational) {
    for phase in &mut schedule.phases {
        let counts = phase.selector_counts();
        phase.shares = phase
            .edges
            .iter()
            .map(|&(v, u)| {
                let share = match schedule.algorithm {
                    Algorithm::EfficientVm => memory.clone(),
                    Algorithm::ExtendedVm => {
                        memory / BigRational::from_integer(BigInt::from(counts[&u]))
                    }
                };
                ((v, u), share)
            })
            .collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle, star};

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn efficient_vm_on_star() {
        let g = star(3).unwrap();
        let run = efficient_vm(&g, 1, &VmConfig::default()).unwrap();
        assert_eq!(run.selection, g);
        assert_eq!(run.coloring.used_colors(), 4);
        assert_eq!(run.schedule.phases.len(), 4);
        assert!(exclusivity_violations(&run.schedule).is_empty());
        let center = NodeId(1);
        let phase = run
            .schedule
            .phases
            .iter()
            .find(|p| p.active.contains(&center))
            .unwrap();
        assert_eq!(
            phase.targets_of(center).collect::<Vec<_>>(),
            vec![NodeId(2)]
        );
        assert_eq!(run.ledger.virtual_of[&center], int(1));
        assert!(run.ledger.gain_of.values().all(|g| *g == int(1)));
        assert_eq!(
            run.schedule.total_rounds,
            1 + run.coloring.rounds_used + run.schedule.phases.len()
        );
        run.schedule.validate(&g).unwrap();
    }

    #[test]
    fn efficient_vm_on_c4() {
        let g = cycle(4).unwrap();
        let run = efficient_vm(&g, 1, &VmConfig::default()).unwrap();
        assert!(run.schedule.phases.len() <= 4);
        assert!(run.ledger.gain_of.values().all(|g| *g == int(1)));
        let summary = ledger_report(&run.ledger).unwrap();
        assert_eq!(summary.min_gain, summary.max_gain);
    }

    #[test]
    fn efficient_vm_rejects_low_degree() {
        assert!(matches!(
            efficient_vm(&star(3).unwrap(), 2, &VmConfig::default()),
            Err(Error::Param(_))
        ));
    }

    #[test]
    fn extended_vm_r1_is_degenerate() {
        let g = crate::generators::complete(5).unwrap();
        let run = extended_vm(&g, 1, &VmConfig::default()).unwrap();
        assert_eq!(run.schedule.phases.len(), 1);
        assert_eq!(run.schedule.phases[0].active.len(), 5);
        assert!(run.schedule.phases[0].edges.is_empty());
        assert_eq!(run.starved.len(), 5);
        assert!(run.ledger.virtual_of.values().all(Zero::is_zero));
    }

    #[test]
    fn extended_vm_parameter_checks() {
        let g = cycle(6).unwrap();
        assert!(extended_vm(&g, 2, &VmConfig::default()).is_err());
        let k5 = crate::generators::complete(5).unwrap();
        assert!(extended_vm(&k5, 0, &VmConfig::default()).is_err());
        assert!(extended_vm(&k5, 4, &VmConfig::default()).is_err());
    }

    #[test]
    fn extended_vm_shares_split_evenly() {
        let g = crate::generators::complete(6).unwrap();
        let run = extended_vm(&g, 3, &VmConfig::default()).unwrap();
        assert_eq!(run.schedule.total_rounds, run.coloring.rounds_used + 3);
        for phase in &run.schedule.phases {
            let counts = phase.selector_counts();
            for (&(_, u), share) in &phase.shares {
                assert_eq!(*share, int(1) / int(counts[&u] as i64));
            }
        }
        // Six colors, two per class: each active node borrows 1/2 from each
        // of four targets.
        assert!(run.ledger.virtual_of.values().all(|x| *x == int(2)));
    }

    #[test]
    fn over_commit_is_rejected() {
        let mut phase = Phase {
            index: 0,
            active: BTreeSet::from([NodeId(1), NodeId(3)]),
            edges: BTreeSet::from([(NodeId(1), NodeId(2)), (NodeId(3), NodeId(2))]),
            shares: BTreeMap::new(),
        };
        phase.shares = phase.edges.iter().map(|&e| (e, int(1))).collect();
        let schedule = Schedule {
            algorithm: Algorithm::EfficientVm,
            phases: vec![phase],
            total_rounds: 1,
        };
        assert!(MemoryLedger::from_schedule(&schedule, &int(1)).is_err());
        assert_eq!(exclusivity_violations(&schedule), vec![(0, NodeId(2), 2)]);
    }

    #[test]
    fn schedule_json_shape_and_restore() {
        let g = crate::generators::complete(6).unwrap();
        let run = extended_vm(&g, 2, &VmConfig::default()).unwrap();
        let json = run.schedule.to_json().unwrap();
        assert!(json.contains("\"algorithm\": \"ExtendedVM\""));
        let mut back = Schedule::from_json(&json).unwrap();
        assert!(back.phases[0].shares.is_empty());
        restore_shares(&mut back, &int(1));
        assert_eq!(back, run.schedule);
        let mut csv = Vec::new();
        run.ledger.write_csv(&mut csv).unwrap();
        assert!(String::from_utf8(csv)
            .unwrap()
            .starts_with("node,virtual,gain\n1,"));
    }
}
