//! From complex channel gains to an exact rational network, and how the
//! capacity moves as the rounding tolerance shrinks.

use std::collections::BTreeMap;

use num_complex::Complex64;
use relaycap::capacity::fd_capacity;
use relaycap::model::{link_capacity_from_channel, rationalize};
use relaycap::rational::{ratio, to_decimal, to_string};
use relaycap::DuplexMode;

fn main() -> relaycap::Result<()> {
    let gains = [
        ((0, 1), Complex64::new(0.9, 0.3)),
        ((0, 2), Complex64::new(0.2, -0.5)),
        ((1, 2), Complex64::new(0.7, 0.1)),
        ((1, 3), Complex64::new(0.4, 0.4)),
        ((2, 3), Complex64::new(-1.1, 0.6)),
    ];
    let power = 10.0;
    let mut real = BTreeMap::new();
    for (link, h) in gains {
        real.insert(link, link_capacity_from_channel(h, power)?);
    }
    for k in [10, 100, 1000, 100_000] {
        let eps = ratio(1, k);
        let net = rationalize(&real, 2, DuplexMode::FullDuplex, &eps)?;
        let c = fd_capacity(&net)?.value;
        println!("epsilon 1/{k:<7} capacity {} ({})", to_string(&c), to_decimal(&c));
    }
    Ok(())
}
