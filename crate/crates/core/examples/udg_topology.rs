//! Generates a seeded unit disk graph and prints its structural summary.
//!
//! ```text
//! cargo run --example udg_topology -- 80 0.25 7
//! ```

use kbackup::generators::{bounded_growth, unit_disk, BoundedGrowthConfig};
use kbackup::structure::StructuralReport;

fn main() -> kbackup::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n = args.first().and_then(|s| s.parse().ok()).unwrap_or(50);
    let radius = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0.3);
    let seed = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(42);

    let (g, layout) = unit_disk(n, radius, seed)?;
    let report = StructuralReport::compute(&g)?;
    println!("unit disk n={n} r={radius} seed={seed}");
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    println!("isolated nodes: {:?}", g.isolated_nodes());

    let first = g.nodes()[0];
    for &u in g.neighbors(first).iter().take(3) {
        println!(
            "  {first} -- {u}  distance {:.3}",
            layout.distance(first, u)
        );
    }

    // Rejection sampling until the minimum degree is at least half the maximum.
    let (dense, _, draws) = bounded_growth(&BoundedGrowthConfig::new(60, 0.85), seed)?;
    println!(
        "bounded growth: {draws} draw(s), max degree {}, min degree {}",
        dense.max_degree(),
        dense.min_degree()
    );
    Ok(())
}
