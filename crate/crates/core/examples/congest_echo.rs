//! A custom node program on the synchronous round engine: every node sends
//! its ID to each neighbor, then records the largest ID it heard.

use kbackup::generators::cycle;
use kbackup::sim::{run_synchronous, wire, NodeContext, NodeProgram, RunConfig, Step};
use kbackup::NodeId;

struct MaxNeighbor;

impl NodeProgram for MaxNeighbor {
    type State = ();
    type Output = u64;

    fn init(&self, _: NodeId, _: &[NodeId]) {}

    fn step(&self, ctx: &NodeContext<'_>, _: &mut ()) -> Step {
        let payload = wire::encode(&[ctx.id.0]);
        Step::halt(
            ctx.neighbors
                .iter()
                .map(|&u| (u, payload.clone()))
                .collect(),
        )
    }

    fn finish(&self, ctx: &NodeContext<'_>, _: ()) -> u64 {
        ctx.inbox
            .iter()
            .filter_map(|m| wire::decode(&m.payload))
            .flatten()
            .max()
            .unwrap_or(0)
    }
}

fn main() -> kbackup::Result<()> {
    let g = cycle(8)?;
    let config = RunConfig {
        record_trace: true,
        ..RunConfig::default()
    };
    let result = run_synchronous(&g, &MaxNeighbor, &config)?;
    println!("rounds used: {}", result.rounds_used);
    for (v, best) in &result.outputs {
        println!("node {v}: largest neighbor id {best}");
    }
    let trace = result.trace.as_ref().unwrap();
    let bytes: usize = trace.iter().map(|t| t.bytes).sum();
    println!("{} messages, {bytes} payload bytes", trace.len());
    Ok(())
}
