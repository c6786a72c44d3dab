//! Linial coloring, distance-2 coloring and the reduction to `Δ + 1` colors,
//! each checked for properness.

use kbackup::coloring::{
    delta_plus_one_coloring, distance2_coloring, linial_coloring, log_star, verify_coloring,
    ColoringConfig,
};
use kbackup::generators::unit_disk;

fn main() -> kbackup::Result<()> {
    let (g, _) = unit_disk(80, 0.2, 5)?;
    let keep = g
        .nodes()
        .iter()
        .copied()
        .filter(|&v| g.degree(v) > 0)
        .collect();
    let g = g.induced(&keep);
    // IDs are 1..=n here; pretend they come from a much larger space so the
    // reductions have work to do.
    let cfg = ColoringConfig {
        id_space: Some(1 << 32),
        ..ColoringConfig::default()
    };
    println!("nodes {}, max degree {}", g.node_count(), g.max_degree());
    println!("log* of id space: {}", log_star(1 << 32));

    for (name, col) in [
        ("linial", linial_coloring(&g, &cfg)?),
        ("distance-2", distance2_coloring(&g, &cfg)?),
        ("delta+1", delta_plus_one_coloring(&g, &cfg)?),
    ] {
        println!(
            "{name:>10}: palette {:>7}, used {:>3}, rounds {:>4}, proper {}",
            col.color_count,
            col.used_colors(),
            col.rounds_used,
            verify_coloring(&g, &col)?
        );
    }
    Ok(())
}
