//! Path formulation: active paths at an optimal vertex, the sparsity bound
//! and the best single path.

use relaycap::paths::{best_path, solve_p1, sparsity_report, DEFAULT_MAX_PATHS};
use relaycap::rational::{int, ratio, to_decimal, to_string};
use relaycap::{DuplexMode, Network};

fn main() -> relaycap::Result<()> {
    let net = Network::new(4, DuplexMode::FullDuplex)
        .with_link(0, 1, int(3))
        .with_link(0, 2, ratio(5, 2))
        .with_link(1, 3, int(2))
        .with_link(1, 4, int(1))
        .with_link(2, 3, ratio(4, 3))
        .with_link(2, 4, ratio(7, 2))
        .with_link(3, 5, int(2))
        .with_link(4, 5, int(3));

    let sol = solve_p1(&net, DEFAULT_MAX_PATHS)?;
    println!("capacity = {}", to_string(&sol.value));
    for (path, x) in sol.active() {
        println!("  {:<10} x = {:<8} C = {}", path.to_string(), to_string(x), to_string(&path.capacity()));
    }
    let report = sparsity_report(&sol, &net);
    println!("{} active paths, bound {}", report.active_count, report.bound);
    if let Some(t) = report.two_layer {
        println!("two layers of {} relays, 2M+1 = {} ({})", t.relays_per_layer, t.bound, if t.ok { "met" } else { "exceeded" });
    }
    let (path, c) = best_path(&net)?;
    println!("best path {path} carries {} of the capacity", to_decimal(&(c / &sol.value)));
    Ok(())
}
