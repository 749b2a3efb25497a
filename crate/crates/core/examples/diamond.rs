//! Half-duplex diamond: relay selection, the explicit schedule, and the
//! best-relay guarantee.

use relaycap::diamond::{best_relay_guarantee, diamond_capacity, hd_relay_selection, hd_schedule, HdActivation};
use relaycap::rational::{int, to_string};
use relaycap::scheduler::simulate;
use relaycap::{diamond::DiamondNetwork, DuplexMode};

fn main() -> relaycap::Result<()> {
    let d = DiamondNetwork::new(
        vec![(int(2), int(3)), (int(5), int(1)), (int(4), int(4)), (int(1), int(6))],
        DuplexMode::HalfDuplex,
    )?;
    let sol = diamond_capacity(&d)?;
    println!("capacity = {}", to_string(&sol.value));
    println!("relays used: {:?}", hd_relay_selection(&d)?);

    let act = HdActivation::from_utilization(&d, &sol.x);
    println!("always-busy relay: {:?}", act.pivot());
    let schedule = hd_schedule(&d)?;
    for (state, t) in schedule.entries() {
        println!("  {:>8}  {state}", to_string(t));
    }
    let rate = simulate(&d.to_network(), &schedule, &act.flow(&d))?;
    println!("simulated rate {}", to_string(&rate));

    let (best, ratio) = best_relay_guarantee(&d)?;
    println!("best single relay {} = {} of capacity", to_string(&best), to_string(&ratio));
    Ok(())
}
