mod common;

use std::collections::BTreeMap;

use common::*;
use kbackup::coloring::{linial_color_bound, verify_coloring, Coloring};
use kbackup::generators::{bounded_growth, BoundedGrowthConfig};
use kbackup::structure::neighborhood_independence;
use kbackup::vm::{
    efficient_vm, exclusivity_violations, extended_vm, extended_vm_with_coloring, ledger_report,
    VmConfig,
};
use kbackup::NodeId;
use num::{BigInt, BigRational, ToPrimitive};

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[test]
fn efficient_vm_grants_exactly_k() {
    let mut checked = 0;
    for seed in 0..30 {
        let g = without_isolated(&udg(40 + seed as usize, 0.35, seed));
        let c = neighborhood_independence(&g).unwrap();
        for k in 1..=3 {
            if g.min_degree() < k {
                continue;
            }
            let cfg = VmConfig {
                memory: int(3),
                ..VmConfig::default()
            };
            let run = efficient_vm(&g, k, &cfg).unwrap();
            run.schedule.validate(&g).unwrap();
            assert!(exclusivity_violations(&run.schedule).is_empty());
            for v in g.nodes() {
                assert_eq!(run.ledger.virtual_of[v], int(3 * k as i64));
                assert_eq!(run.ledger.gain_of[v], int(k as i64));
            }
            // Co-active nodes are three or more hops apart in G'.
            for phase in &run.schedule.phases {
                for &v in &phase.active {
                    let near = run.selection.distances_from(v, 2);
                    assert!(phase
                        .active
                        .iter()
                        .all(|u| *u == v || !near.contains_key(u)));
                }
            }
            let ck = (c * k + k) as u64;
            let bound = linial_color_bound(ck * ck + ck);
            assert!((run.schedule.phases.len() as u64) <= bound);
            assert_eq!(
                run.schedule.total_rounds,
                1 + run.coloring.rounds_used + run.schedule.phases.len()
            );
            checked += 1;
        }
    }
    assert!(checked >= 50, "{checked}");
}

#[test]
fn extended_vm_selection_bounds() {
    for seed in 0..20 {
        let g = udg(80, 0.3, seed);
        if g.min_degree() < 1 || !g.is_connected() {
            continue;
        }
        let c = neighborhood_independence(&g).unwrap();
        for r in [2, 3, 4, 8] {
            if r >= g.max_degree() {
                continue;
            }
            let run = extended_vm(&g, r, &VmConfig::default()).unwrap();
            run.schedule.validate(&g).unwrap();
            assert!(verify_coloring(&g, &run.coloring).unwrap());
            assert!(run.coloring.color_count <= g.max_degree() as u64 + 1);
            assert_eq!(run.schedule.phases.len(), r);
            assert_eq!(run.schedule.total_rounds, run.coloring.rounds_used + r);
            let cap = c * run.partition.colors_per_class;
            for phase in &run.schedule.phases {
                for (_, n) in phase.selector_counts() {
                    assert!(n <= cap);
                }
                for &v in &phase.active {
                    let targets = phase.targets_of(v).count();
                    assert!(targets + cap >= g.degree(v));
                    let class = run.partition.class_of(run.coloring.color(v));
                    for u in g.neighbors(v) {
                        let outside = run.partition.class_of(run.coloring.color(*u)) != class;
                        assert_eq!(outside, phase.edges.contains(&(v, *u)));
                    }
                }
            }
        }
    }
}

#[test]
fn croix_pattee_first_super_class() {
    let (g, colors) = croix_pattee();
    let col = Coloring {
        colors: colors.clone(),
        color_count: 4,
        hop_radius: 1,
        rounds_used: 0,
    };
    let run = extended_vm_with_coloring(&g, col, 2, &int(1)).unwrap();
    let phase = &run.schedule.phases[0];
    let ids = |v: &[u64]| v.iter().map(|&x| NodeId(x)).collect::<Vec<_>>();
    assert_eq!(
        phase.active.iter().copied().collect::<Vec<_>>(),
        ids(&[4, 5, 7, 8, 9])
    );
    let targets: BTreeMap<NodeId, Vec<NodeId>> = phase
        .active
        .iter()
        .map(|&v| (v, phase.targets_of(v).collect()))
        .collect();
    assert_eq!(targets[&NodeId(9)], ids(&[1, 2]));
    assert_eq!(targets[&NodeId(4)], ids(&[1, 3]));
    assert_eq!(targets[&NodeId(5)], ids(&[1, 6]));
    assert_eq!(targets[&NodeId(7)], ids(&[1]));
    assert_eq!(targets[&NodeId(8)], ids(&[1]));
    // The center splits its memory five ways.
    assert_eq!(phase.shares[&(NodeId(7), NodeId(1))], int(1) / int(5));
    assert_eq!(run.ledger.virtual_of[&NodeId(9)], int(1) / int(5) + int(1));
    assert_eq!(run.schedule.phases[1].active.len(), 4);
    assert!(run.starved.is_empty());
}

#[test]
fn extended_vm_gain_grows_with_r() {
    let cfg = BoundedGrowthConfig::new(60, 0.85);
    // Calibrated on these fixtures: median gain stays above (R/c - 1).
    let beta = 1.0;
    for seed in 0..10 {
        let (g, _, _) = bounded_growth(&cfg, seed).unwrap();
        assert!(g.max_degree() >= 32 && 2 * g.min_degree() >= g.max_degree());
        let c = neighborhood_independence(&g).unwrap() as f64;
        let mut last = 0.0;
        for r in [2, 4, 8, 16] {
            let run = extended_vm(&g, r, &VmConfig::default()).unwrap();
            let median = ledger_report(&run.ledger)
                .unwrap()
                .median_gain
                .to_f64()
                .unwrap();
            assert!(median >= last, "seed {seed} R {r}: {median} < {last}");
            assert!(median >= (r as f64 / c - 1.0) * beta, "seed {seed} R {r}");
            last = median;
        }
    }
}

#[test]
fn degenerate_single_super_class() {
    let g = udg(30, 0.5, 3);
    assert!(g.min_degree() > 0 && g.is_connected());
    let run = extended_vm(&g, 1, &VmConfig::default()).unwrap();
    assert_eq!(run.starved.len(), g.node_count());
    assert!(run.schedule.phases[0].edges.is_empty());
}
