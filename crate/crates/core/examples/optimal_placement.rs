//! Compares the distributed placement with the exact min-max-load optimum
//! from the max-flow oracle.

use kbackup::generators::unit_disk;
use kbackup::kbp::{compute_loads, Placement};
use kbackup::oracle::{exhaustive_optimal, optimal_max_load};
use kbackup::structure::neighborhood_independence;

fn main() -> kbackup::Result<()> {
    let k = 1;
    for seed in 0..5 {
        let (g, _) = unit_disk(30, 0.35, seed)?;
        let keep = g
            .nodes()
            .iter()
            .copied()
            .filter(|&v| g.degree(v) >= k)
            .collect();
        let g = g.induced(&keep);
        let opt = optimal_max_load(&g, k)?;
        let ours = compute_loads(
            &g,
            &Placement::k_next_modulo(&g, k)?,
            neighborhood_independence(&g)?,
        )?;
        println!(
            "seed {seed}: optimum {}, k-next-modulo {}, c*K {}",
            opt.optimal_max_load, ours.max_load, ours.c_times_k
        );
    }

    // Tiny graphs can be cross-checked by enumerating every placement.
    let g = kbackup::generators::star(5)?;
    println!(
        "star(5): flow {}, enumeration {}",
        optimal_max_load(&g, 1)?.optimal_max_load,
        exhaustive_optimal(&g, 1)?.optimal_max_load
    );
    Ok(())
}
