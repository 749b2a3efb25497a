//! Builds a schedule by coloring the LCM-scaled multigraph and compares it
//! with the Birkhoff-von Neumann schedule.

use relaycap::capacity::fd_capacity;
use relaycap::rational::{int, to_string};
use relaycap::scheduler::{bvn_schedule, lcm_coloring_schedule, simulate, DEFAULT_MAX_MULTIGRAPH_EDGES};
use relaycap::{DuplexMode, Network};

fn main() -> relaycap::Result<()> {
    let net = Network::new(2, DuplexMode::FullDuplex)
        .with_link(0, 1, int(1))
        .with_link(0, 2, int(10))
        .with_link(1, 3, int(10))
        .with_link(2, 3, int(1));
    let cap = fd_capacity(&net)?;

    let colored = lcm_coloring_schedule(&cap.activation, DEFAULT_MAX_MULTIGRAPH_EDGES)?;
    println!("M = {}, colors = {}", colored.lcm, colored.max_degree);
    for (state, d) in colored.schedule.entries() {
        println!("  {:>6}  {state}", to_string(d));
    }
    let bvn = bvn_schedule(&cap.activation, net.n_relays())?;
    println!(
        "coloring rate {}, BvN rate {}",
        to_string(&simulate(&net, &colored.schedule, &cap.flow)?),
        to_string(&simulate(&net, &bvn, &cap.flow)?)
    );
    Ok(())
}
