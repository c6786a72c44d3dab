//! One-round backup placement on a unit disk graph, with loads checked
//! against `c * K`.

use std::collections::BTreeSet;

use kbackup::generators::unit_disk;
use kbackup::kbp::{compute_loads, run_kbp};
use kbackup::structure::neighborhood_independence;

fn main() -> kbackup::Result<()> {
    let (g, _) = unit_disk(60, 0.3, 11)?;
    // Placement needs every node to have at least K neighbors.
    let k = 2;
    let keep: BTreeSet<_> = g
        .nodes()
        .iter()
        .copied()
        .filter(|&v| g.degree(v) >= k)
        .collect();
    let g = g.induced(&keep);

    let (placement, run) = run_kbp(&g, k)?;
    let c = neighborhood_independence(&g)?;
    let loads = compute_loads(&g, &placement, c)?;

    println!(
        "nodes {}, k {k}, c {c}, rounds {}",
        g.node_count(),
        run.rounds_used
    );
    println!("max load {} <= c*K = {}", loads.max_load, loads.c_times_k);
    for (v, out) in run.outputs.iter().take(5) {
        println!(
            "  {v} backs up on {:?}, holds copies for {:?}",
            out.choices, out.chosen_by
        );
    }
    assert!(loads.max_load <= loads.c_times_k);
    Ok(())
}
