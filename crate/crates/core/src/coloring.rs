//! Deterministic distributed colorings.
//!
//! [`linial_coloring`] starts from the ID coloring and repeatedly applies a
//! one-round color reduction built from polynomials over a prime field. With
//! `m` current colors and degree bound `D`, each color is read as a
//! polynomial of degree at most `d` over GF(q), where `q` is prime,
//! `q^(d+1) >= m` and `q > D * d`. Two distinct polynomials agree on at most
//! `d` points, so the `D` neighbors block at most `D * d < q` evaluation
//! points and the node can pick the smallest free `x`. Its new color is
//! `x * q + f(x)`, one of `q^2`. Among admissible `(q, d)` the step uses the
//! one minimizing `q^2` and the iteration stops once no step shrinks the
//! palette. The fixpoint palette is at most `(p(2D))^2`, `p(x)` being the
//! smallest prime above `x`; see [`linial_color_bound`].
//!
//! [`distance2_coloring`] runs the same reduction on the square graph. Each
//! reduction costs one round to exchange colors plus relay rounds in which
//! every node forwards its neighbors' colors, split into as many rounds as
//! the bandwidth requires.
//!
//! [`reduce_to_delta_plus_one`] removes the colors above `Δ` one class per
//! round.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::graph::{Graph, NodeId};
use crate::sim::{
    bandwidth_bytes, run_synchronous, wire, NodeContext, NodeProgram, RunConfig, Step,
    DEFAULT_BANDWIDTH_FACTOR, DEFAULT_MAX_ROUNDS,
};

/// The constant `B` in the one-hop Linial round bound `log*(id space) + B`.
/// Plans for ID spaces up to 2^62 and degree bounds up to 400 never exceed
/// `log*` itself; see `plan_length_within_log_star_slack`.
pub const LINIAL_ROUND_SLACK: usize = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub colors: BTreeMap<NodeId, u64>,
    pub color_count: u64,
    /// 1 for ordinary colorings, 2 for distance-2 colorings.
    pub hop_radius: u8,
    pub rounds_used: usize,
}

impl Coloring {
    pub fn color(&self, v: NodeId) -> u64 {
        self.colors[&v]
    }

    /// Number of distinct colors actually in use.
    pub fn used_colors(&self) -> usize {
        let mut c: Vec<u64> = self.colors.values().copied().collect();
        c.sort_unstable();
        c.dedup();
        c.len()
    }

    /// CSV with header `node,color`.
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["node", "color"])?;
        for (v, c) in &self.colors {
            out.write_record([v.to_string(), c.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads `node,color` rows. The palette is taken as `max color + 1`.
    pub fn read_csv(reader: impl Read, hop_radius: u8) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut colors = BTreeMap::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let bad = || Error::Parse {
                line: i + 2,
                message: "expected `node,color` with integers".into(),
            };
            let v: u64 = rec.get(0).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            let c: u64 = rec.get(1).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            if colors.insert(NodeId(v), c).is_some() {
                return Err(Error::Parse {
                    line: i + 2,
                    message: format!("node {v} listed twice"),
                });
            }
        }
        let color_count = colors.values().max().map_or(0, |&c| c + 1);
        Ok(Coloring {
            colors,
            color_count,
            hop_radius,
            rounds_used: 0,
        })
    }
}

/// Settings shared by the coloring programs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColoringConfig {
    /// Upper bound on node IDs; defaults to the largest ID in the graph.
    pub id_space: Option<u64>,
    pub bandwidth_factor: usize,
    pub max_rounds: usize,
}

impl Default for ColoringConfig {
    fn default() -> Self {
        ColoringConfig {
            id_space: None,
            bandwidth_factor: DEFAULT_BANDWIDTH_FACTOR,
            max_rounds: DEFAULT_MAX_ROUNDS,
        }
    }
}

impl ColoringConfig {
    fn run_config(&self) -> RunConfig {
        RunConfig {
            bandwidth_factor: self.bandwidth_factor,
            max_rounds: self.max_rounds,
            ..RunConfig::default()
        }
    }

    fn id_space_for(&self, g: &Graph) -> Result<u64> {
        let space = self.id_space.unwrap_or_else(|| g.max_id());
        if g.max_id() > space {
            return Err(param(format!(
                "node id {} exceeds the id space {space}",
                g.max_id()
            )));
        }
        Ok(space.max(1))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut i = 3u64;
    while i.saturating_mul(i) <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 2;
    }
    true
}

pub fn smallest_prime_at_least(n: u64) -> u64 {
    (n.max(2)..).find(|&p| is_prime(p)).unwrap()
}

/// Iterated base-2 logarithm: applications of `log2` until the value is at
/// most 2.
pub fn log_star(n: u64) -> usize {
    let mut x = n as f64;
    let mut count = 0;
    while x > 2.0 {
        x = x.log2();
        count += 1;
    }
    count
}

/// Upper bound on the palette reached by the Linial reduction for degree
/// bound `degree` from any starting palette: `p(2 * degree)^2`, or 1 when
/// the degree bound is zero.
pub fn linial_color_bound(degree: u64) -> u64 {
    if degree == 0 {
        return 1;
    }
    let p = smallest_prime_at_least(2 * degree + 1);
    p * p
}

/// One palette reduction: colors in `[0, from)` become colors in `[0, q^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reduction {
    pub from: u64,
    pub q: u64,
    pub d: u64,
}

impl Reduction {
    pub fn to(&self) -> u64 {
        self.q * self.q
    }
}

fn pow_at_least(q: u64, e: u64, m: u64) -> bool {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc *= q as u128;
        if acc >= m as u128 {
            return true;
        }
    }
    acc >= m as u128
}

/// Smallest `q` with `q^e >= m`.
fn int_root_ceil(m: u64, e: u64) -> u64 {
    let guess = (m as f64).powf(1.0 / e as f64).floor() as u64;
    let mut q = guess.saturating_sub(2).max(1);
    while !pow_at_least(q, e, m) {
        q += 1;
    }
    q
}

/// Best single reduction from a palette of `m` colors, if any shrinks it.
pub fn best_reduction(m: u64, degree: u64) -> Option<Reduction> {
    let mut best: Option<Reduction> = None;
    for d in 1..64u64 {
        let floor = degree.saturating_mul(d).saturating_add(1);
        if let Some(b) = best {
            if floor > b.q {
                break;
            }
        }
        let q = smallest_prime_at_least(floor.max(int_root_ceil(m, d + 1)));
        if best.is_none_or(|b| q < b.q) {
            best = Some(Reduction { from: m, q, d });
        }
    }
    best.filter(|r| (r.q as u128) * (r.q as u128) < m as u128)
}

/// The full reduction sequence from `m` colors to the fixpoint.
pub fn linial_plan(m: u64, degree: u64) -> Vec<Reduction> {
    let mut plan = Vec::new();
    let mut m = m;
    while let Some(r) = best_reduction(m, degree) {
        plan.push(r);
        m = r.to();
    }
    plan
}

fn eval(color: u64, q: u64, d: u64, x: u64) -> u64 {
    // Coefficients are the base-q digits of the color, lowest first.
    let mut digits = Vec::with_capacity(d as usize + 1);
    let mut c = color;
    for _ in 0..=d {
        digits.push(c % q);
        c /= q;
    }
    let (q, x) = (q as u128, x as u128);
    digits
        .iter()
        .rev()
        .fold(0u128, |acc, &a| (acc * x + a as u128) % q) as u64
}

/// New color of a node holding `own` whose conflicting nodes hold `others`.
pub fn reduce_color(own: u64, others: &[u64], r: &Reduction) -> u64 {
    for x in 0..r.q {
        let y = eval(own, r.q, r.d, x);
        if others
            .iter()
            .all(|&c| c == own || eval(c, r.q, r.d, x) != y)
        {
            return x * r.q + y;
        }
    }
    unreachable!("q > D * d leaves a free evaluation point")
}

struct LinialProgram {
    plan: Vec<Reduction>,
    per_chunk: Vec<usize>,
    /// (reduction index, offset) for every round.
    layout: Vec<(usize, usize)>,
}

#[derive(Default)]
struct LinialState {
    color: u64,
    neighbor_colors: BTreeMap<NodeId, u64>,
    conflicts: Vec<u64>,
}

impl LinialProgram {
    fn new(plan: Vec<Reduction>, relay_rounds: Vec<usize>, per_chunk: Vec<usize>) -> Self {
        let layout = relay_rounds
            .iter()
            .enumerate()
            .flat_map(|(j, &r)| (0..=r).map(move |o| (j, o)))
            .collect();
        LinialProgram {
            plan,
            per_chunk,
            layout,
        }
    }

    /// Folds in messages sent during round `sent`.
    fn absorb(&self, state: &mut LinialState, sent: usize, ctx: &NodeContext<'_>) {
        let (_, offset) = self.layout[sent];
        for m in ctx.inbox {
            let values = wire::decode(&m.payload).unwrap_or_default();
            if offset == 0 {
                if let Some(&c) = values.first() {
                    state.neighbor_colors.insert(m.src, c);
                    state.conflicts.push(c);
                }
            } else {
                state.conflicts.extend(values);
            }
        }
    }

    fn recolor(&self, state: &mut LinialState, reduction: usize) {
        state.color = reduce_color(state.color, &state.conflicts, &self.plan[reduction]);
        state.conflicts.clear();
        state.neighbor_colors.clear();
    }
}

impl NodeProgram for LinialProgram {
    type State = LinialState;
    type Output = u64;

    fn init(&self, id: NodeId, _: &[NodeId]) -> LinialState {
        LinialState {
            color: id.0 - 1,
            ..Default::default()
        }
    }

    fn step(&self, ctx: &NodeContext<'_>, state: &mut LinialState) -> Step {
        let t = ctx.round;
        let (j, offset) = self.layout[t];
        if t > 0 {
            self.absorb(state, t - 1, ctx);
            if offset == 0 {
                self.recolor(state, j - 1);
            }
        }
        let outgoing = if offset == 0 {
            let payload = wire::encode(&[state.color]);
            ctx.neighbors
                .iter()
                .map(|&u| (u, payload.clone()))
                .collect()
        } else {
            let chunk = self.per_chunk[j];
            let skip = (offset - 1) * chunk;
            ctx.neighbors
                .iter()
                .filter_map(|&w| {
                    let relayed: Vec<u64> = state
                        .neighbor_colors
                        .iter()
                        .filter(|(&u, _)| u != w)
                        .map(|(_, &c)| c)
                        .skip(skip)
                        .take(chunk)
                        .collect();
                    (!relayed.is_empty()).then(|| (w, wire::encode(&relayed)))
                })
                .collect()
        };
        let last = t + 1 == self.layout.len();
        Step {
            outgoing,
            halt: last,
        }
    }

    fn finish(&self, ctx: &NodeContext<'_>, mut state: LinialState) -> u64 {
        self.absorb(&mut state, ctx.round, ctx);
        self.recolor(&mut state, self.plan.len() - 1);
        state.color
    }
}

fn run_linial(g: &Graph, hops: u8, config: &ColoringConfig) -> Result<Coloring> {
    let id_space = config.id_space_for(g)?;
    let delta = g.max_degree() as u64;
    if delta == 0 {
        return Ok(Coloring {
            colors: g.nodes().iter().map(|&v| (v, 0)).collect(),
            color_count: 1,
            hop_radius: hops,
            rounds_used: 0,
        });
    }
    let degree_bound = if hops == 1 { delta } else { delta * delta };
    let plan = linial_plan(id_space, degree_bound);
    if plan.is_empty() {
        return Ok(Coloring {
            colors: g.nodes().iter().map(|&v| (v, v.0 - 1)).collect(),
            color_count: id_space,
            hop_radius: hops,
            rounds_used: 0,
        });
    }
    let limit = bandwidth_bytes(g.node_count(), config.bandwidth_factor);
    let mut relay_rounds = Vec::new();
    let mut per_chunk = Vec::new();
    let mut round = 0;
    for r in &plan {
        let color_bytes = wire::len(r.from - 1);
        let fit = limit / color_bytes;
        let relays = if hops == 1 || delta <= 1 {
            0
        } else if fit == 0 {
            let node = g.nodes()[0];
            return Err(Error::Bandwidth {
                node,
                round: round + 1,
                bytes: color_bytes,
                limit,
            });
        } else {
            (delta as usize - 1).div_ceil(fit)
        };
        relay_rounds.push(relays);
        per_chunk.push(fit.max(1));
        round += 1 + relays;
    }
    let final_palette = plan.last().unwrap().to();
    let program = LinialProgram::new(plan, relay_rounds, per_chunk);
    let result = run_synchronous(g, &program, &config.run_config())?;
    Ok(Coloring {
        colors: result.outputs,
        color_count: final_palette,
        hop_radius: hops,
        rounds_used: result.rounds_used,
    })
}

/// Proper one-hop coloring with at most [`linial_color_bound`]`(Δ)` colors
/// (or the ID space, if that is already smaller).
pub fn linial_coloring(g: &Graph, config: &ColoringConfig) -> Result<Coloring> {
    run_linial(g, 1, config)
}

/// Proper distance-2 coloring with at most [`linial_color_bound`]`(Δ^2)`
/// colors, computed over `g` by relaying colors through neighbors.
pub fn distance2_coloring(g: &Graph, config: &ColoringConfig) -> Result<Coloring> {
    run_linial(g, 2, config)
}

struct EliminationProgram<'a> {
    start: &'a BTreeMap<NodeId, u64>,
    /// Palette of the starting coloring.
    palette: u64,
    delta: u64,
    rounds: usize,
}

struct EliminationState {
    color: u64,
    neighbor_colors: BTreeMap<NodeId, u64>,
}

impl EliminationProgram<'_> {
    fn absorb(&self, state: &mut EliminationState, ctx: &NodeContext<'_>) {
        for m in ctx.inbox {
            if let Some(&c) = wire::decode(&m.payload).as_deref().and_then(<[u64]>::first) {
                state.neighbor_colors.insert(m.src, c);
            }
        }
    }

    /// Recolors if this node belongs to the class eliminated after `round`.
    fn maybe_recolor(&self, state: &mut EliminationState, round: usize) -> bool {
        if state.color != self.palette - 1 - round as u64 {
            return false;
        }
        let mut used = vec![false; self.delta as usize + 1];
        for &c in state.neighbor_colors.values() {
            if c <= self.delta {
                used[c as usize] = true;
            }
        }
        state.color = used.iter().position(|&u| !u).unwrap() as u64;
        true
    }
}

impl NodeProgram for EliminationProgram<'_> {
    type State = EliminationState;
    type Output = u64;

    fn init(&self, id: NodeId, _: &[NodeId]) -> EliminationState {
        EliminationState {
            color: self.start[&id],
            neighbor_colors: BTreeMap::new(),
        }
    }

    fn step(&self, ctx: &NodeContext<'_>, state: &mut EliminationState) -> Step {
        let t = ctx.round;
        self.absorb(state, ctx);
        let announce = t == 0 || self.maybe_recolor(state, t - 1);
        let outgoing = if announce {
            let payload = wire::encode(&[state.color]);
            ctx.neighbors
                .iter()
                .map(|&u| (u, payload.clone()))
                .collect()
        } else {
            Vec::new()
        };
        Step {
            outgoing,
            halt: t + 1 == self.rounds,
        }
    }

    fn finish(&self, ctx: &NodeContext<'_>, mut state: EliminationState) -> u64 {
        self.absorb(&mut state, ctx);
        self.maybe_recolor(&mut state, ctx.round);
        state.color
    }
}

/// Recolors a proper one-hop coloring down to `Δ + 1` colors. Colors
/// `m - 1, m - 2, ..., Δ + 1` are eliminated one per round, each node of the
/// eliminated class taking the smallest color absent from its neighborhood.
/// Costs `m - (Δ + 1)` rounds on top of the start coloring.
pub fn reduce_to_delta_plus_one(
    g: &Graph,
    start: &Coloring,
    config: &ColoringConfig,
) -> Result<Coloring> {
    if start.hop_radius != 1 && start.hop_radius != 2 {
        return Err(Error::InvalidColoring("hop radius must be 1 or 2".into()));
    }
    if !verify_coloring(
        g,
        &Coloring {
            hop_radius: 1,
            ..start.clone()
        },
    )? {
        return Err(Error::InvalidColoring(
            "start coloring is not proper".into(),
        ));
    }
    let delta = g.max_degree() as u64;
    if start.color_count <= delta + 1 {
        return Ok(Coloring {
            hop_radius: 1,
            ..start.clone()
        });
    }
    let rounds = (start.color_count - delta - 1) as usize;
    let program = EliminationProgram {
        start: &start.colors,
        palette: start.color_count,
        delta,
        rounds,
    };
    let result = run_synchronous(g, &program, &config.run_config())?;
    Ok(Coloring {
        colors: result.outputs,
        color_count: delta + 1,
        hop_radius: 1,
        rounds_used: start.rounds_used + result.rounds_used,
    })
}

/// Linial followed by color elimination.
pub fn delta_plus_one_coloring(g: &Graph, config: &ColoringConfig) -> Result<Coloring> {
    let start = linial_coloring(g, config)?;
    reduce_to_delta_plus_one(g, &start, config)
}

/// Splits colors `0..color_count` into `R` contiguous super-classes of
/// `ceil(color_count / R)` colors each (the last ones may be short or empty).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperClassPartition {
    pub class_of: Vec<usize>,
    pub class_count: usize,
    pub colors_per_class: usize,
}

impl SuperClassPartition {
    pub fn class_of(&self, color: u64) -> usize {
        self.class_of[color as usize]
    }

    pub fn colors_in(&self, class: usize) -> Range<u64> {
        let n = self.class_of.len();
        let lo = (class * self.colors_per_class).min(n);
        let hi = ((class + 1) * self.colors_per_class).min(n);
        lo as u64..hi as u64
    }

    /// CSV with header `color,superclass`.
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["color", "superclass"])?;
        for (c, s) in self.class_of.iter().enumerate() {
            out.write_record([c.to_string(), s.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

pub fn partition_super_classes(color_count: u64, r: usize) -> Result<SuperClassPartition> {
    if r < 1 || r as u64 > color_count {
        return Err(param(format!(
            "super-class count {r} outside 1..={color_count}"
        )));
    }
    let size = (color_count as usize).div_ceil(r);
    Ok(SuperClassPartition {
        class_of: (0..color_count as usize).map(|c| c / size).collect(),
        class_count: r,
        colors_per_class: size,
    })
}

/// True iff `col` is proper at its hop radius and every color is below the
/// palette size. Errors if some node of `g` is uncolored.
pub fn verify_coloring(g: &Graph, col: &Coloring) -> Result<bool> {
    for &v in g.nodes() {
        if !col.colors.contains_key(&v) {
            return Err(Error::InvalidColoring(format!("node {v} has no color")));
        }
    }
    if col.colors.values().any(|&c| c >= col.color_count) {
        return Ok(false);
    }
    let ok = match col.hop_radius {
        1 => g.edges().all(|(u, v)| col.color(u) != col.color(v)),
        2 => g.nodes().iter().all(|&v| {
            g.distances_from(v, 2)
                .keys()
                .all(|&u| u == v || col.color(u) != col.color(v))
        }),
        r => {
            return Err(Error::InvalidColoring(format!(
                "unsupported hop radius {r}"
            )))
        }
    };
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle, star};

    fn coloring(pairs: &[(u64, u64)], count: u64, hops: u8) -> Coloring {
        Coloring {
            colors: pairs.iter().map(|&(v, c)| (NodeId(v), c)).collect(),
            color_count: count,
            hop_radius: hops,
            rounds_used: 0,
        }
    }

    #[test]
    fn primes_and_log_star() {
        assert_eq!(smallest_prime_at_least(0), 2);
        assert_eq!(smallest_prime_at_least(24), 29);
        assert!(is_prime(97) && !is_prime(91));
        assert_eq!(log_star(2), 0);
        assert_eq!(log_star(4), 1);
        assert_eq!(log_star(16), 2);
        assert_eq!(log_star(65536), 3);
        assert_eq!(log_star(65537), 4);
        assert_eq!(log_star(200), 3);
    }

    #[test]
    fn plan_length_within_log_star_slack() {
        let mut worst = 0i64;
        for degree in (1u64..=400).step_by(7) {
            for m in (2..=62).flat_map(|s| [1u64 << s, (1u64 << s) + 1, (3u64 << s) / 2]) {
                let len = linial_plan(m, degree).len() as i64;
                worst = worst.max(len - log_star(m) as i64);
            }
        }
        eprintln!("worst plan length minus log*: {worst}");
        assert!(worst <= LINIAL_ROUND_SLACK as i64);
    }

    #[test]
    fn reductions_are_admissible() {
        for degree in [1u64, 2, 5, 17, 100] {
            for m in [10u64, 1000, 1 << 20, 1 << 40, u64::MAX >> 2] {
                for r in linial_plan(m, degree) {
                    assert!(is_prime(r.q));
                    assert!(r.q > degree * r.d);
                    assert!(pow_at_least(r.q, r.d + 1, r.from));
                    assert!(r.to() < r.from);
                }
            }
        }
    }

    #[test]
    fn fixpoint_stays_under_bound() {
        for degree in 1u64..=120 {
            for m in (2u64..3000).chain([1 << 20, 1 << 33, 1 << 62]) {
                let end = linial_plan(m, degree).last().map_or(m, Reduction::to);
                assert!(end <= m);
                if m > linial_color_bound(degree) {
                    assert!(end <= linial_color_bound(degree), "degree {degree} m {m}");
                }
            }
        }
    }

    #[test]
    fn reduce_color_is_injective_on_conflicts() {
        let r = best_reduction(10_000, 3).unwrap();
        let others = [17, 4000, 9999];
        let mine = reduce_color(42, &others, &r);
        for o in others {
            let theirs = reduce_color(o, &[42], &r);
            let (x, y) = (mine / r.q, mine % r.q);
            // Same evaluation point would need a different value.
            if theirs / r.q == x {
                assert_ne!(theirs % r.q, y);
            }
        }
        assert!(mine < r.to());
    }

    #[test]
    fn single_node_and_triangle() {
        let single = Graph::new([NodeId(1)], []).unwrap();
        let c = linial_coloring(&single, &ColoringConfig::default()).unwrap();
        assert_eq!((c.color_count, c.rounds_used), (1, 0));
        let tri = cycle(3).unwrap();
        let c = linial_coloring(&tri, &ColoringConfig::default()).unwrap();
        assert!(verify_coloring(&tri, &c).unwrap());
        assert!(c.color_count <= linial_color_bound(2));
        assert_eq!(c.used_colors(), 3);
    }

    #[test]
    fn large_id_space_is_reduced() {
        let g = Graph::from_edges(&[
            (1_000_003, 77),
            (77, 123_456_789),
            (123_456_789, 5),
            (5, 1_000_003),
            (5, 77),
        ])
        .unwrap();
        let cfg = ColoringConfig {
            id_space: Some(1 << 32),
            ..Default::default()
        };
        let c = linial_coloring(&g, &cfg).unwrap();
        assert!(verify_coloring(&g, &c).unwrap());
        assert!(c.color_count <= linial_color_bound(3));
        assert!(c.rounds_used >= 1);
        assert!(c.rounds_used <= log_star(1 << 32) + LINIAL_ROUND_SLACK);
        let d2 = distance2_coloring(&g, &cfg).unwrap();
        assert!(verify_coloring(&g, &d2).unwrap());
        assert_eq!(d2.hop_radius, 2);
    }

    #[test]
    fn id_space_must_cover_ids() {
        let g = cycle(6).unwrap();
        let cfg = ColoringConfig {
            id_space: Some(4),
            ..Default::default()
        };
        assert!(matches!(linial_coloring(&g, &cfg), Err(Error::Param(_))));
    }

    #[test]
    fn distance2_on_star_and_edge() {
        let s = star(3).unwrap();
        let cfg = ColoringConfig {
            id_space: Some(1 << 20),
            ..Default::default()
        };
        let c = distance2_coloring(&s, &cfg).unwrap();
        assert!(verify_coloring(&s, &c).unwrap());
        assert_eq!(c.used_colors(), 4);
        let edge = Graph::from_edges(&[(1, 2)]).unwrap();
        let c = distance2_coloring(&edge, &cfg).unwrap();
        assert_ne!(c.color(NodeId(1)), c.color(NodeId(2)));
    }

    #[test]
    fn relay_needs_room_for_one_color() {
        let g = cycle(6).unwrap();
        let cfg = ColoringConfig {
            id_space: Some(u64::MAX >> 1),
            bandwidth_factor: 1,
            ..Default::default()
        };
        assert!(matches!(
            distance2_coloring(&g, &cfg),
            Err(Error::Bandwidth { .. })
        ));
    }

    #[test]
    fn elimination_reaches_delta_plus_one() {
        let c6 = cycle(6).unwrap();
        let start = coloring(&[(1, 0), (2, 5), (3, 0), (4, 5), (5, 0), (6, 5)], 6, 1);
        let red = reduce_to_delta_plus_one(&c6, &start, &ColoringConfig::default()).unwrap();
        assert!(verify_coloring(&c6, &red).unwrap());
        assert_eq!(red.color_count, 3);
        assert_eq!(red.rounds_used, 3);
        let tri = cycle(3).unwrap();
        let c = delta_plus_one_coloring(&tri, &ColoringConfig::default()).unwrap();
        assert_eq!(c.color_count, 3);
        assert_eq!(c.used_colors(), 3);
        let s5 = star(5).unwrap();
        let c = delta_plus_one_coloring(&s5, &ColoringConfig::default()).unwrap();
        assert!(verify_coloring(&s5, &c).unwrap());
        assert!(c.color_count <= 6);
    }

    #[test]
    fn elimination_rejects_improper_start() {
        let c4 = cycle(4).unwrap();
        let bad = coloring(&[(1, 0), (2, 0), (3, 1), (4, 2)], 3, 1);
        assert!(reduce_to_delta_plus_one(&c4, &bad, &ColoringConfig::default()).is_err());
    }

    #[test]
    fn partitions() {
        let p = partition_super_classes(4, 2).unwrap();
        assert_eq!(p.class_of, vec![0, 0, 1, 1]);
        let p = partition_super_classes(7, 3).unwrap();
        let sizes: Vec<usize> = (0..3).map(|s| p.colors_in(s).count()).collect();
        assert_eq!(sizes, vec![3, 3, 1]);
        let p = partition_super_classes(5, 1).unwrap();
        assert!(p.class_of.iter().all(|&s| s == 0));
        assert!(partition_super_classes(4, 0).is_err());
        assert!(partition_super_classes(4, 5).is_err());
    }

    #[test]
    fn verifier_cases() {
        let c6 = cycle(6).unwrap();
        let two = coloring(&[(1, 0), (2, 1), (3, 0), (4, 1), (5, 0), (6, 1)], 2, 1);
        assert!(verify_coloring(&c6, &two).unwrap());
        let constant = coloring(&[(1, 0), (2, 0), (3, 0), (4, 0), (5, 0), (6, 0)], 1, 1);
        assert!(!verify_coloring(&c6, &constant).unwrap());
        // 1 and 3 sit at distance 2.
        let d2 = Coloring {
            hop_radius: 2,
            ..two.clone()
        };
        assert!(!verify_coloring(&c6, &d2).unwrap());
        let partial = coloring(&[(1, 0)], 1, 1);
        assert!(verify_coloring(&c6, &partial).is_err());
        let out_of_range = coloring(&[(1, 0), (2, 1), (3, 0), (4, 1), (5, 0), (6, 2)], 2, 1);
        assert!(!verify_coloring(&c6, &out_of_range).unwrap());
    }

    #[test]
    fn csv_round_trip() {
        let c = coloring(&[(1, 0), (2, 3), (10, 1)], 4, 1);
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "node,color\n1,0\n2,3\n10,1\n"
        );
        assert_eq!(Coloring::read_csv(buf.as_slice(), 1).unwrap(), c);
    }
}
