//! Crash nodes at random after placement and count how many survivors
//! still have at least one live backup.

use kbackup::generators::unit_disk;
use kbackup::kbp::{run_kbp, survivability};
use kbackup::sim::FaultPlan;

fn main() -> kbackup::Result<()> {
    let (g, _) = unit_disk(100, 0.25, 3)?;
    let keep = g
        .nodes()
        .iter()
        .copied()
        .filter(|&v| g.degree(v) >= 3)
        .collect();
    let g = g.induced(&keep);
    let k = 3;
    let p = 0.2;
    let (placement, _) = run_kbp(&g, k)?;

    let (mut covered, mut total) = (0usize, 0usize);
    for seed in 0..50 {
        let plan = FaultPlan::random(g.nodes(), p, 0, seed)?;
        let alive = survivability(&g, &placement, &plan.crashed_by(0));
        total += alive.len();
        covered += alive.values().filter(|&&a| a > 0).count();
    }
    let observed = covered as f64 / total as f64;
    println!("crash probability {p}, k {k}");
    println!("survivors with a live backup: {observed:.4}");
    println!(
        "independent crashes predict:  {:.4}",
        1.0 - p.powi(k as i32)
    );
    Ok(())
}
