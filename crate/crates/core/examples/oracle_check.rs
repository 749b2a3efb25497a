//! Cross-checks the polynomial solvers against brute-force state
//! enumeration on a random small network.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relaycap::capacity::{fd_capacity, min_cut_value};
use relaycap::oracle::{brute_force_capacity, enumerate_states, exhaustive_min_cut, DEFAULT_MAX_STATES};
use relaycap::paths::{solve_p1, DEFAULT_MAX_PATHS};
use relaycap::rational::{ratio, to_string};
use relaycap::{DuplexMode, Network};

fn main() -> relaycap::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 3;
    let mut net = Network::new(n, DuplexMode::FullDuplex);
    for i in 0..=n {
        for j in 1..=n + 1 {
            if i != j && rng.gen_bool(0.7) {
                net.set_link(i, j, ratio(rng.gen_range(1..=20), rng.gen_range(1..=20)));
            }
        }
    }
    println!("{} valid states", enumerate_states(&net, DEFAULT_MAX_STATES)?.len());

    let cap = fd_capacity(&net)?;
    let (oracle, schedule) = brute_force_capacity(&net, DEFAULT_MAX_STATES)?;
    let values = [
        ("flow program", cap.value.clone()),
        ("path program", solve_p1(&net, DEFAULT_MAX_PATHS)?.value),
        ("state enumeration", oracle),
        ("max-flow cut", min_cut_value(&net, &cap.activation)?.value),
        ("cut enumeration", exhaustive_min_cut(&net, &schedule)?),
    ];
    for (name, v) in &values {
        println!("{name:<18} {}", to_string(v));
    }
    assert!(values.iter().all(|(_, v)| *v == cap.value));
    Ok(())
}
