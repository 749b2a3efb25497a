//! Turns an optimal link activation into a time-shared schedule of beam
//! configurations and replays it.

use relaycap::capacity::fd_capacity;
use relaycap::rational::{int, to_string};
use relaycap::scheduler::{bvn_schedule, bvn_state_bound, simulate};
use relaycap::{DuplexMode, Network};

fn main() -> relaycap::Result<()> {
    let net = Network::new(3, DuplexMode::FullDuplex)
        .with_link(0, 1, int(4))
        .with_link(0, 2, int(3))
        .with_link(1, 3, int(2))
        .with_link(2, 3, int(5))
        .with_link(3, 4, int(6))
        .with_link(2, 4, int(1));

    let cap = fd_capacity(&net)?;
    let schedule = bvn_schedule(&cap.activation, net.n_relays())?;
    println!("{} states (at most {})", schedule.len(), bvn_state_bound(net.n_relays()));
    for (state, duration) in schedule.entries() {
        println!("  {:>8}  {state}", to_string(duration));
    }
    let rate = simulate(&net, &schedule, &cap.flow)?;
    println!("simulated rate {} = capacity {}", to_string(&rate), to_string(&cap.value));
    Ok(())
}
