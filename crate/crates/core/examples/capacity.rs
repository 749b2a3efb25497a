//! Approximate capacity of a small full-duplex network, with the optimal
//! link activation and the cut that certifies it.

use relaycap::capacity::{fd_capacity, min_cut_value};
use relaycap::model::gap;
use relaycap::rational::{int, ratio, to_decimal, to_string};
use relaycap::{DuplexMode, Network};

fn main() -> relaycap::Result<()> {
    let net = Network::new(2, DuplexMode::FullDuplex)
        .with_link(0, 1, int(3))
        .with_link(0, 2, ratio(5, 2))
        .with_link(1, 2, int(2))
        .with_link(1, 3, int(1))
        .with_link(2, 3, int(4));

    let cap = fd_capacity(&net)?;
    println!("capacity = {} ({})", to_string(&cap.value), to_decimal(&cap.value));
    for (link, lambda) in cap.activation.support() {
        println!("  link {}->{}: active {}, flow {}", link.0, link.1, to_string(lambda), to_string(&cap.flow.get(link)));
    }

    let cut = min_cut_value(&net, &cap.activation)?;
    println!("min cut {} with source side {:?}", to_string(&cut.value), cut.source_side);
    println!("true capacity lies within {:.4} bits above", gap(net.n_relays(), net.mode()));
    Ok(())
}
