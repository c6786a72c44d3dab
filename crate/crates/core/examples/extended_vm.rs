//! Super-class scheduling on a bounded-growth graph: more super-classes
//! means more phases and more borrowed memory per node.

use kbackup::generators::{bounded_growth, BoundedGrowthConfig};
use kbackup::vm::{extended_vm, ledger_report, VmConfig};

fn main() -> kbackup::Result<()> {
    let (g, _, _) = bounded_growth(&BoundedGrowthConfig::new(60, 0.85), 1)?;
    println!(
        "max degree {}, min degree {}",
        g.max_degree(),
        g.min_degree()
    );
    let cfg = VmConfig::default();
    for r in [2, 4, 8, 16] {
        let out = extended_vm(&g, r, &cfg)?;
        let s = ledger_report(&out.ledger).expect("non-empty graph");
        println!(
            "R={r:>2}: {} colors per class, rounds {:>3}, median gain {:.3}, starved {}",
            out.partition.colors_per_class,
            out.schedule.total_rounds,
            s.median_f64(),
            out.starved.len()
        );
    }
    Ok(())
}
