mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use relaycap::capacity::{fd_capacity, min_cut_value, FlowProgram};
use relaycap::cli::ScheduleDocument;
use relaycap::diamond::{self, DiamondNetwork};
use relaycap::model::rationalize;
use relaycap::oracle::{brute_force_capacity, exhaustive_min_cut, DEFAULT_MAX_STATES};
use relaycap::paths::{self, DEFAULT_MAX_PATHS};
use relaycap::rational::{self, int};
use relaycap::scheduler::bvn_schedule;
use relaycap::{DuplexMode, Rational};

use common::{random_diamond, random_network};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn half_duplex_diamond_matches_oracle(seed in any::<u64>(), n in 1usize..=3) {
        let d = random_diamond(&mut rng(seed), n, DuplexMode::HalfDuplex);
        let (oracle, schedule) = brute_force_capacity(&d.to_network(), DEFAULT_MAX_STATES).unwrap();
        prop_assert_eq!(diamond::diamond_capacity(&d).unwrap().value, oracle);
        prop_assert_eq!(schedule.total_duration(), int(1));
        prop_assert!(schedule.invalid_states(&d.to_network()).is_empty());
    }

    #[test]
    fn cut_enumeration_matches_max_flow(seed in any::<u64>(), n in 1usize..=3, hd in any::<bool>()) {
        let mode = if hd { DuplexMode::HalfDuplex } else { DuplexMode::FullDuplex };
        let net = random_network(&mut rng(seed), n, mode, 0.7);
        let (value, schedule) = brute_force_capacity(&net, DEFAULT_MAX_STATES).unwrap();
        let enumerated = exhaustive_min_cut(&net, &schedule).unwrap();
        let flow = min_cut_value(&net, &schedule.activation()).unwrap();
        prop_assert_eq!(&enumerated, &flow.value);
        prop_assert_eq!(enumerated, value);
    }

    #[test]
    fn flow_program_vertex_is_certified(seed in any::<u64>(), n in 1usize..=4) {
        let net = random_network(&mut rng(seed), n, DuplexMode::FullDuplex, 0.6);
        let program = FlowProgram::build(&net);
        let sol = program.lp.solve().unwrap();
        prop_assert!(sol.certify(&program.lp).is_ok());
        let cap = program.decode(&sol);
        prop_assert!(cap.activation.check_budgets().is_ok());
        prop_assert!(cap.flow.conservation_violations(n).is_empty());
    }

    #[test]
    fn path_program_matches_flow_program(seed in any::<u64>(), n in 4usize..=5) {
        let net = random_network(&mut rng(seed), n, DuplexMode::FullDuplex, 0.5);
        let p1 = paths::solve_p1(&net, DEFAULT_MAX_PATHS).unwrap();
        prop_assert_eq!(p1.value.clone(), fd_capacity(&net).unwrap().value);
        prop_assert!(p1.utilizations.iter().all(|x| *x <= int(1)));
    }

    #[test]
    fn path_solution_is_schedulable(seed in any::<u64>(), n in 1usize..=4) {
        let net = random_network(&mut rng(seed), n, DuplexMode::FullDuplex, 0.6);
        let p1 = paths::solve_p1(&net, DEFAULT_MAX_PATHS).unwrap();
        let (activation, flow) = p1.link_activation();
        prop_assert!(activation.check_budgets().is_ok());
        let s = bvn_schedule(&activation, n).unwrap();
        prop_assert_eq!(relaycap::scheduler::simulate(&net, &s, &flow).unwrap(), p1.value);
    }

    #[test]
    fn schedule_documents_round_trip(seed in any::<u64>(), n in 1usize..=4) {
        let net = random_network(&mut rng(seed), n, DuplexMode::FullDuplex, 0.6);
        let cap = fd_capacity(&net).unwrap();
        let s = bvn_schedule(&cap.activation, n).unwrap();
        let text = ScheduleDocument::from_schedule(&s).to_json();
        let back = ScheduleDocument::parse(&text).unwrap().to_schedule().unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn rationalization_bounds_each_link(seed in any::<u64>(), n in 1usize..=3, k in 1i64..=1000) {
        let mut r = rng(seed);
        let eps = rational::ratio(1, k);
        let mut real = BTreeMap::new();
        for i in 0..=n {
            for j in 1..=n + 1 {
                if i != j {
                    real.insert((i, j), r.gen_range(0.0..50.0));
                }
            }
        }
        let net = rationalize(&real, n, DuplexMode::FullDuplex, &eps).unwrap();
        let step = &eps / int(((n + 1) * (n + 1)) as i64);
        for (&(i, j), &v) in &real {
            let exact = rational::from_f64(v).unwrap();
            let q = net.capacity(i, j);
            prop_assert!(q <= exact && exact <= &q + &step);
        }
    }

    #[test]
    fn full_duplex_diamond_matches_general_solver(seed in any::<u64>(), n in 1usize..=6) {
        let d = random_diamond(&mut rng(seed), n, DuplexMode::FullDuplex);
        let general = fd_capacity(&d.to_network()).unwrap().value;
        prop_assert_eq!(diamond::diamond_capacity(&d).unwrap().value, general);
        prop_assert_eq!(DiamondNetwork::from_network(&d.to_network()), Some(d));
    }
}

#[test]
fn scaling_is_linear() {
    let mut r = rng(7);
    for n in 1..=4 {
        let net = random_network(&mut r, n, DuplexMode::FullDuplex, 0.6);
        let k = Rational::new(3.into(), 2.into());
        let base = fd_capacity(&net).unwrap().value;
        assert_eq!(fd_capacity(&net.scaled(&k)).unwrap().value, base * k);
    }
}
