//! Brute-force reference computations for small networks.
//!
//! Everything here works from first principles: explicit enumeration of
//! network states, the state-indexed flow program, and cut enumeration.
//! None of it goes through the polynomial solvers it is used to check.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lpsolve::LinearProgram;
use crate::model::{DuplexMode, Link, Network};
use crate::rational::Rational;
use crate::scheduler::{NetworkState, Schedule};

pub const DEFAULT_MAX_STATES: usize = 100_000;

/// Largest relay count accepted by [`exhaustive_min_cut`].
pub const MAX_CUT_RELAYS: usize = 20;

/// Every valid network state, ordered by size and then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace {
    pub states: Vec<NetworkState>,
}

impl StateSpace {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Enumerates all sets of positive-capacity links in which every node
/// transmits at most once and receives at most once (and, for half-duplex,
/// no relay does both).
pub fn enumerate_states(network: &Network, max_states: usize) -> Result<StateSpace> {
    network.ensure_valid()?;
    let links: Vec<Link> = network.active_links().map(|(l, _)| l).collect();
    let nodes = network.node_count();
    let mut walk = Walk {
        links: &links,
        half_duplex: network.mode() == DuplexMode::HalfDuplex,
        tx: vec![false; nodes],
        rx: vec![false; nodes],
        current: Vec::new(),
        out: Vec::new(),
        max_states,
    };
    walk.extend(0)?;
    let mut states = walk.out;
    states.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(StateSpace {
        states: states.into_iter().map(NetworkState::new).collect(),
    })
}

struct Walk<'a> {
    links: &'a [Link],
    half_duplex: bool,
    tx: Vec<bool>,
    rx: Vec<bool>,
    current: Vec<Link>,
    out: Vec<Vec<Link>>,
    max_states: usize,
}

impl Walk<'_> {
    fn extend(&mut self, from: usize) -> Result<()> {
        if self.out.len() >= self.max_states {
            return Err(Error::SizeLimit {
                what: "network states".into(),
                limit: self.max_states,
            });
        }
        self.out.push(self.current.clone());
        for k in from..self.links.len() {
            let (i, j) = self.links[k];
            if self.tx[i] || self.rx[j] {
                continue;
            }
            if self.half_duplex && (self.rx[i] || self.tx[j]) {
                continue;
            }
            self.tx[i] = true;
            self.rx[j] = true;
            self.current.push((i, j));
            self.extend(k + 1)?;
            self.current.pop();
            self.tx[i] = false;
            self.rx[j] = false;
        }
        Ok(())
    }
}

/// Maximizes the source outflow over explicit state time-shares `λ_s`
/// (summing to one) and link flows bounded by `ℓ · Σ_{s ∋ link} λ_s`, with
/// conservation at every relay.
///
/// Returns the optimum and the optimal time-shares as a schedule.
pub fn brute_force_capacity(network: &Network, max_states: usize) -> Result<(Rational, Schedule)> {
    let space = enumerate_states(network, max_states)?;
    let links: Vec<(Link, Rational)> = network
        .active_links()
        .map(|(l, c)| (l, c.clone()))
        .collect();
    let n_states = space.len();
    let m = links.len();
    let n_vars = n_states + m;
    let zero_row = || vec![Rational::zero(); n_vars];

    let mut objective = zero_row();
    for (k, ((i, _), _)) in links.iter().enumerate() {
        if *i == network.source() {
            objective[n_states + k] = Rational::one();
        }
    }
    let mut lp = LinearProgram::new(objective);
    for (k, (link, cap)) in links.iter().enumerate() {
        let mut row = zero_row();
        row[n_states + k] = Rational::one();
        for (s, state) in space.states.iter().enumerate() {
            if state.contains(*link) {
                row[s] = -cap.clone();
            }
        }
        lp.add_le(row, Rational::zero());
    }
    let mut total = zero_row();
    for v in total.iter_mut().take(n_states) {
        *v = Rational::one();
    }
    lp.add_eq(total, Rational::one());
    for relay in 1..=network.n_relays() {
        let mut row = zero_row();
        let mut touched = false;
        for (k, ((i, j), _)) in links.iter().enumerate() {
            if *j == relay {
                row[n_states + k] += Rational::one();
                touched = true;
            }
            if *i == relay {
                row[n_states + k] -= Rational::one();
                touched = true;
            }
        }
        if touched {
            lp.add_eq(row, Rational::zero());
        }
    }

    let sol = lp.solve()?;
    let schedule = Schedule::from_entries(
        space
            .states
            .into_iter()
            .zip(sol.values)
            .filter(|(_, v)| v.is_positive()),
    )?;
    Ok((sol.objective_value, schedule))
}

/// Minimum over every cut `Ω ∋ 0` of `Σ_{i∈Ω, j∉Ω} ℓ_{ij} · t_{ij}`, where
/// `t_{ij}` is the schedule's total time on link `i -> j`.
pub fn exhaustive_min_cut(network: &Network, schedule: &Schedule) -> Result<Rational> {
    network.ensure_valid()?;
    let n = network.n_relays();
    if n > MAX_CUT_RELAYS {
        return Err(Error::SizeLimit {
            what: "relays for cut enumeration".into(),
            limit: MAX_CUT_RELAYS,
        });
    }
    let weighted: Vec<(Link, Rational)> = network
        .active_links()
        .map(|(link, cap)| {
            let time: Rational = schedule
                .entries()
                .iter()
                .filter(|(s, _)| s.contains(link))
                .map(|(_, d)| d.clone())
                .sum();
            (link, cap * time)
        })
        .collect();

    let mut best: Option<Rational> = None;
    for mask in 0u64..(1u64 << n) {
        let mut omega = BTreeSet::from([network.source()]);
        omega.extend((1..=n).filter(|r| mask >> (r - 1) & 1 == 1));
        let value: Rational = weighted
            .iter()
            .filter(|((i, j), _)| omega.contains(i) && !omega.contains(j))
            .map(|(_, w)| w.clone())
            .sum();
        if best.as_ref().is_none_or(|b| value < *b) {
            best = Some(value);
        }
    }
    Ok(best.expect("at least one cut"))
}
