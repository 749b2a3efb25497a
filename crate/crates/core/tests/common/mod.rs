#![allow(dead_code)]

use rand::Rng;
use relaycap::diamond::DiamondNetwork;
use relaycap::rational::ratio;
use relaycap::{DuplexMode, Network, Rational};

/// `p/q` with `1 <= p, q <= 20`.
pub fn small_rational(rng: &mut impl Rng) -> Rational {
    ratio(rng.gen_range(1..=20), rng.gen_range(1..=20))
}

/// Random network over every admissible link, each present with
/// probability `density`.
pub fn random_network(rng: &mut impl Rng, n: usize, mode: DuplexMode, density: f64) -> Network {
    let mut net = Network::new(n, mode);
    for i in 0..=n {
        for j in 1..=n + 1 {
            if i != j && rng.gen_bool(density) {
                net.set_link(i, j, small_rational(rng));
            }
        }
    }
    net
}

/// Relays `1..=m` in the first layer, `m+1..=2m` in the second, fully
/// connected between consecutive layers.
pub fn random_two_layer(rng: &mut impl Rng, m: usize) -> Network {
    let dest = 2 * m + 1;
    let mut net = Network::new(2 * m, DuplexMode::FullDuplex);
    for a in 1..=m {
        net.set_link(0, a, small_rational(rng));
        for b in m + 1..=2 * m {
            net.set_link(a, b, small_rational(rng));
        }
    }
    for b in m + 1..=2 * m {
        net.set_link(b, dest, small_rational(rng));
    }
    net
}

/// Random diamond; roughly one link in ten is missing.
pub fn random_diamond(rng: &mut impl Rng, n: usize, mode: DuplexMode) -> DiamondNetwork {
    fn cap(rng: &mut impl Rng) -> Rational {
        if rng.gen_bool(0.1) {
            ratio(0, 1)
        } else {
            small_rational(rng)
        }
    }
    let relays = (0..n).map(|_| (cap(rng), cap(rng))).collect();
    DiamondNetwork::new(relays, mode).unwrap()
}

/// The two-relay network with crossed capacities `1` and `x`.
pub fn tightness(x: i64) -> Network {
    Network::new(2, DuplexMode::FullDuplex)
        .with_link(0, 1, ratio(1, 1))
        .with_link(1, 3, ratio(x, 1))
        .with_link(0, 2, ratio(x, 1))
        .with_link(2, 3, ratio(1, 1))
}
