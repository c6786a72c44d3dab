//! Synchronous CONGEST round engine.
//!
//! Every round, each live node that has not halted runs its step function
//! once. The step sees only its own [`NodeContext`]: its ID, its live
//! neighbors, the round number and the messages sent to it in the previous
//! round (sorted by sender). Messages a node sends in round `t` are delivered
//! at the start of round `t + 1`; a node that halts in round `t` still
//! receives the messages sent to it in round `t`, which are handed to
//! [`NodeProgram::finish`] together with its final state. A round therefore
//! consists of local computation, sending, and receiving.
//!
//! Every payload must fit in `bandwidth_factor * ceil(log2(n + 1))` bits,
//! rounded up to whole bytes. Violations abort the run.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::graph::{Graph, NodeId};

pub const DEFAULT_BANDWIDTH_FACTOR: usize = 32;
pub const DEFAULT_MAX_ROUNDS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub src: NodeId,
    pub dst: NodeId,
    pub payload: Vec<u8>,
}

/// Everything a node may observe in one round.
#[derive(Debug)]
pub struct NodeContext<'a> {
    pub id: NodeId,
    /// Neighbors that have not crashed as of this round, ascending.
    pub neighbors: &'a [NodeId],
    pub round: usize,
    pub inbox: &'a [Message],
}

/// What a node does at the end of its local computation.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Step {
    pub outgoing: Vec<(NodeId, Vec<u8>)>,
    pub halt: bool,
}

impl Step {
    pub fn send(outgoing: Vec<(NodeId, Vec<u8>)>) -> Self {
        Step {
            outgoing,
            halt: false,
        }
    }

    pub fn halt(outgoing: Vec<(NodeId, Vec<u8>)>) -> Self {
        Step {
            outgoing,
            halt: true,
        }
    }

    pub fn idle() -> Self {
        Step::default()
    }
}

/// A distributed algorithm, expressed per node.
///
/// The engine may call `step` for different nodes of the same round in
/// parallel and in any order.
pub trait NodeProgram: Sync {
    type State: Send;
    type Output: Send;

    /// Initial private state, from the node's ID and its neighbor IDs.
    fn init(&self, id: NodeId, neighbors: &[NodeId]) -> Self::State;

    fn step(&self, ctx: &NodeContext<'_>, state: &mut Self::State) -> Step;

    /// Called once after the node halts, with the messages delivered to it
    /// at the end of its final round.
    fn finish(&self, ctx: &NodeContext<'_>, state: Self::State) -> Self::Output;
}

/// Crash schedule: node `v` stops acting from round `r` onward.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultPlan {
    crashes: BTreeMap<NodeId, usize>,
}

impl FaultPlan {
    pub fn none() -> Self {
        FaultPlan::default()
    }

    pub fn new(crashes: impl IntoIterator<Item = (NodeId, usize)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (v, round) in crashes {
            if v.0 == 0 {
                return Err(param(format!("node id {v} is not positive")));
            }
            if map.insert(v, round).is_some() {
                return Err(param(format!("duplicate crash entry for node {v}")));
            }
        }
        Ok(FaultPlan { crashes: map })
    }

    /// Each node crashes independently with probability `p`, at `round`.
    pub fn random(nodes: &[NodeId], p: f64, round: usize, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(param(format!("crash probability {p} outside [0, 1]")));
        }
        let mut rng = crate::generators::prng(seed);
        FaultPlan::new(
            nodes
                .iter()
                .filter(|_| rng.gen_bool(p))
                .map(|&v| (v, round))
                .collect::<Vec<_>>(),
        )
    }

    pub fn is_empty(&self) -> bool {
        self.crashes.is_empty()
    }

    pub fn crash_round(&self, v: NodeId) -> Option<usize> {
        self.crashes.get(&v).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (NodeId, usize)> + '_ {
        self.crashes.iter().map(|(&v, &r)| (v, r))
    }

    /// Nodes crashed at or before `round`.
    pub fn crashed_by(&self, round: usize) -> BTreeSet<NodeId> {
        self.entries()
            .filter(|&(_, r)| r <= round)
            .map(|(v, _)| v)
            .collect()
    }

    /// CSV with header `node,round`.
    pub fn read_csv(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let field = |j: usize| -> Result<u64> {
                rec.get(j)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::Parse {
                        line: i + 2,
                        message: "expected `node,round` with non-negative integers".into(),
                    })
            };
            rows.push((NodeId(field(0)?), field(1)? as usize));
        }
        FaultPlan::new(rows)
    }

    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["node", "round"])?;
        for (v, r) in self.entries() {
            out.write_record([v.to_string(), r.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub bandwidth_factor: usize,
    pub max_rounds: usize,
    pub faults: FaultPlan,
    pub record_trace: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            bandwidth_factor: DEFAULT_BANDWIDTH_FACTOR,
            max_rounds: DEFAULT_MAX_ROUNDS,
            faults: FaultPlan::none(),
            record_trace: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub round: usize,
    pub src: NodeId,
    pub dst: NodeId,
    pub bytes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunResult<O> {
    pub rounds_used: usize,
    pub outputs: BTreeMap<NodeId, O>,
    pub trace: Option<Vec<TraceEntry>>,
    pub crashed: BTreeSet<NodeId>,
}

impl<O> RunResult<O> {
    /// Writes the trace as JSON lines, one message per line.
    pub fn write_trace(&self, mut w: impl Write) -> Result<()> {
        for entry in self.trace.iter().flatten() {
            serde_json::to_writer(&mut w, entry)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// `factor * ceil(log2(n + 1))`.
pub fn bandwidth_bits(n: usize, factor: usize) -> usize {
    let log = (usize::BITS - n.leading_zeros()) as usize;
    factor * log
}

/// Largest payload, in bytes, allowed on one edge per round.
pub fn bandwidth_bytes(n: usize, factor: usize) -> usize {
    bandwidth_bits(n, factor).div_ceil(8)
}

const PARALLEL_THRESHOLD: usize = 512;

pub fn run_synchronous<P: NodeProgram>(
    g: &Graph,
    program: &P,
    config: &RunConfig,
) -> Result<RunResult<P::Output>> {
    if config.bandwidth_factor < 1 {
        return Err(param("bandwidth factor must be at least 1"));
    }
    if config.max_rounds < 1 {
        return Err(param("max rounds must be at least 1"));
    }
    for (v, _) in config.faults.entries() {
        if !g.contains(v) {
            return Err(Error::UnknownNode(v));
        }
    }
    let n = g.node_count();
    let limit = bandwidth_bytes(n, config.bandwidth_factor);
    let ids = g.nodes();

    let mut states: Vec<Option<P::State>> = ids
        .iter()
        .map(|&v| Some(program.init(v, g.neighbors(v))))
        .collect();
    let mut crashed = vec![false; n];
    let mut inboxes: Vec<Vec<Message>> = vec![Vec::new(); n];
    let mut outputs = BTreeMap::new();
    let mut trace = config.record_trace.then(Vec::new);
    let mut round = 0;

    let live_neighbors = |crashed: &[bool]| -> Vec<Vec<NodeId>> {
        (0..n)
            .map(|i| {
                g.neighbors_at(i)
                    .iter()
                    .copied()
                    .filter(|&u| !crashed[g.index_of(u).unwrap()])
                    .collect()
            })
            .collect()
    };
    let mut live = live_neighbors(&crashed);

    loop {
        let mut any_crash = false;
        for (i, &v) in ids.iter().enumerate() {
            if states[i].is_some() && config.faults.crash_round(v) == Some(round) {
                crashed[i] = true;
                states[i] = None;
                inboxes[i].clear();
                any_crash = true;
            }
        }
        if any_crash {
            live = live_neighbors(&crashed);
        }
        if states.iter().all(Option::is_none) {
            break;
        }
        if round >= config.max_rounds {
            return Err(Error::Timeout(config.max_rounds));
        }

        let step_one = |(i, state): (usize, &mut Option<P::State>)| {
            let state = state.as_mut()?;
            let ctx = NodeContext {
                id: ids[i],
                neighbors: &live[i],
                round,
                inbox: &inboxes[i],
            };
            Some((i, program.step(&ctx, state)))
        };
        // Thread dispatch costs more than it saves on small graphs.
        let steps: Vec<(usize, Step)> = if n < PARALLEL_THRESHOLD {
            states.iter_mut().enumerate().filter_map(step_one).collect()
        } else {
            states
                .par_iter_mut()
                .enumerate()
                .filter_map(step_one)
                .collect()
        };

        let mut next: Vec<Vec<Message>> = vec![Vec::new(); n];
        let mut halting = Vec::new();
        for (i, step) in steps {
            let src = ids[i];
            let mut seen = BTreeSet::new();
            for (dst, payload) in step.outgoing {
                if live[i].binary_search(&dst).is_err() {
                    return Err(Error::Protocol {
                        node: src,
                        round,
                        message: format!("message to {dst}, which is not a live neighbor"),
                    });
                }
                if !seen.insert(dst) {
                    return Err(Error::Protocol {
                        node: src,
                        round,
                        message: format!("second message to {dst} in one round"),
                    });
                }
                if payload.len() > limit {
                    return Err(Error::Bandwidth {
                        node: src,
                        round,
                        bytes: payload.len(),
                        limit,
                    });
                }
                if let Some(t) = trace.as_mut() {
                    t.push(TraceEntry {
                        round,
                        src,
                        dst,
                        bytes: payload.len(),
                    });
                }
                next[g.index_of(dst).unwrap()].push(Message { src, dst, payload });
            }
            if step.halt {
                halting.push(i);
            }
        }

        for i in halting {
            let state = states[i].take().unwrap();
            let ctx = NodeContext {
                id: ids[i],
                neighbors: &live[i],
                round,
                inbox: &next[i],
            };
            outputs.insert(ids[i], program.finish(&ctx, state));
        }
        for (i, inbox) in next.iter_mut().enumerate() {
            if states[i].is_none() {
                inbox.clear();
            }
        }
        inboxes = next;
        round += 1;
    }

    let crashed = ids
        .iter()
        .zip(&crashed)
        .filter(|(_, &c)| c)
        .map(|(&v, _)| v)
        .collect();
    Ok(RunResult {
        rounds_used: round,
        outputs,
        trace,
        crashed,
    })
}

/// LEB128 encoding for integers carried in payloads.
pub mod wire {
    pub fn put(buf: &mut Vec<u8>, value: u64) {
        leb128::write::unsigned(buf, value).expect("writing to a Vec cannot fail");
    }

    pub fn encode(values: &[u64]) -> Vec<u8> {
        let mut buf = Vec::new();
        for &v in values {
            put(&mut buf, v);
        }
        buf
    }

    pub fn decode(mut bytes: &[u8]) -> Option<Vec<u64>> {
        let mut out = Vec::new();
        while !bytes.is_empty() {
            out.push(leb128::read::unsigned(&mut bytes).ok()?);
        }
        Some(out)
    }

    /// Bytes taken by `value`.
    pub fn len(value: u64) -> usize {
        (64 - value.leading_zeros() as usize).max(1).div_ceil(7)
    }
}
