//! Each node borrows memory from its K backups in color-class phases, so
//! every node ends with exactly `K * M` virtual memory.

use kbackup::generators::unit_disk;
use kbackup::vm::{efficient_vm, exclusivity_violations, ledger_report, VmConfig};

fn main() -> kbackup::Result<()> {
    let (g, _) = unit_disk(50, 0.35, 9)?;
    let k = 2;
    let keep = g
        .nodes()
        .iter()
        .copied()
        .filter(|&v| g.degree(v) >= k)
        .collect();
    let g = g.induced(&keep);

    let out = efficient_vm(&g, k, &VmConfig::default())?;
    let summary = ledger_report(&out.ledger).expect("non-empty graph");
    println!("selection graph max degree {}", out.selection.max_degree());
    println!(
        "{} phases, {} total rounds",
        out.schedule.phases.len(),
        out.schedule.total_rounds
    );
    println!(
        "gain min {} median {}",
        summary.min_f64(),
        summary.median_f64()
    );
    println!(
        "exclusivity violations: {}",
        exclusivity_violations(&out.schedule).len()
    );

    let mut csv = Vec::new();
    out.ledger.write_csv(&mut csv)?;
    print!(
        "{}",
        String::from_utf8_lossy(&csv)
            .lines()
            .take(4)
            .collect::<Vec<_>>()
            .join("\n")
    );
    println!();
    Ok(())
}
