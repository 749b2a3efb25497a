//! Diamond networks: one layer of parallel relays between source and
//! destination, no relay-to-relay links.
//!
//! Relay `p` contributes a single two-hop path. With `C_p` the path
//! capacity (`min(ℓ_p, r_p)` full-duplex, `ℓ_p r_p / (ℓ_p + r_p)`
//! half-duplex), the capacity is
//!
//! ```text
//! maximize Σ x_p C_p   s.t.  Σ x_p C_p/ℓ_p <= 1,  Σ x_p C_p/r_p <= 1,  0 <= x_p <= 1
//! ```

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::capacity::LinkFlow;
use crate::error::{Error, Result};
use crate::lpsolve::LinearProgram;
use crate::model::{DuplexMode, Network};
use crate::scheduler::{NetworkState, Schedule};
use crate::rational::Rational;

/// Relay `i` (1-based) has source link `ℓ_i = relays[i-1].0` and
/// destination link `r_i = relays[i-1].1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiamondNetwork {
    pub relays: Vec<(Rational, Rational)>,
    pub mode: DuplexMode,
}

impl DiamondNetwork {
    pub fn new(relays: Vec<(Rational, Rational)>, mode: DuplexMode) -> Result<Self> {
        if relays.iter().any(|(l, r)| l.is_negative() || r.is_negative()) {
            return Err(Error::InvalidInput("diamond link capacities must be nonnegative".into()));
        }
        Ok(DiamondNetwork { relays, mode })
    }

    pub fn n_relays(&self) -> usize {
        self.relays.len()
    }

    /// Recognizes a diamond: every positive link is source->relay or
    /// relay->destination.
    pub fn from_network(network: &Network) -> Option<Self> {
        if network.validate().is_err() {
            return None;
        }
        let (s, d) = (network.source(), network.destination());
        let shaped = network
            .active_links()
            .all(|((i, j), _)| (i == s && network.is_relay(j)) || (network.is_relay(i) && j == d));
        if !shaped {
            return None;
        }
        let relays = (1..=network.n_relays())
            .map(|i| (network.capacity(s, i), network.capacity(i, d)))
            .collect();
        Some(DiamondNetwork {
            relays,
            mode: network.mode(),
        })
    }

    pub fn to_network(&self) -> Network {
        let n = self.n_relays();
        let mut net = Network::new(n, self.mode);
        for (k, (l, r)) in self.relays.iter().enumerate() {
            if l.is_positive() {
                net.set_link(0, k + 1, l.clone());
            }
            if r.is_positive() {
                net.set_link(k + 1, n + 1, r.clone());
            }
        }
        net
    }

    /// Capacity of the two-hop path through relay `i` (1-based).
    pub fn path_capacity(&self, i: usize) -> Rational {
        let (l, r) = &self.relays[i - 1];
        if !l.is_positive() || !r.is_positive() {
            return Rational::zero();
        }
        match self.mode {
            DuplexMode::FullDuplex => l.clone().min(r.clone()),
            DuplexMode::HalfDuplex => l * r / (l + r),
        }
    }

    /// Relays able to carry flow, 1-based.
    fn usable(&self) -> Vec<usize> {
        (1..=self.n_relays())
            .filter(|&i| self.path_capacity(i).is_positive())
            .collect()
    }
}

/// Optimal relay utilizations `x` (one per relay, 1-based order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiamondSolution {
    pub value: Rational,
    pub x: Vec<Rational>,
}

impl DiamondSolution {
    /// Relays (1-based) with positive utilization.
    pub fn support(&self) -> BTreeSet<usize> {
        self.x
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_positive())
            .map(|(k, _)| k + 1)
            .collect()
    }
}

/// Solves the relay-utilization program in the diamond's duplex mode.
/// Relays with zero path capacity are left out of the program.
pub fn diamond_capacity(d: &DiamondNetwork) -> Result<DiamondSolution> {
    let usable = d.usable();
    let caps: Vec<Rational> = usable.iter().map(|&i| d.path_capacity(i)).collect();
    let k = usable.len();
    let mut lp = LinearProgram::new(caps.clone());
    let mut source_row = Vec::with_capacity(k);
    let mut dest_row = Vec::with_capacity(k);
    for (&i, c) in usable.iter().zip(&caps) {
        let (l, r) = &d.relays[i - 1];
        source_row.push(c / l);
        dest_row.push(c / r);
    }
    lp.add_le(source_row, Rational::one());
    lp.add_le(dest_row, Rational::one());
    for p in 0..k {
        let mut row = vec![Rational::zero(); k];
        row[p] = Rational::one();
        lp.add_le(row, Rational::one());
    }
    let sol = lp.solve()?;
    let mut x = vec![Rational::zero(); d.n_relays()];
    for (&i, v) in usable.iter().zip(sol.values) {
        x[i - 1] = v;
    }
    Ok(DiamondSolution {
        value: sol.objective_value,
        x,
    })
}

fn require_mode(d: &DiamondNetwork, mode: DuplexMode) -> Result<()> {
    if d.mode == mode {
        Ok(())
    } else {
        Err(Error::UnsupportedMode(format!("expected a {mode} diamond, got {}", d.mode)))
    }
}

/// Relays used by an optimal full-duplex vertex (at most two).
pub fn fd_relay_selection(d: &DiamondNetwork) -> Result<BTreeSet<usize>> {
    require_mode(d, DuplexMode::FullDuplex)?;
    Ok(diamond_capacity(d)?.support())
}

/// Relays used by an optimal half-duplex vertex (at most three).
pub fn hd_relay_selection(d: &DiamondNetwork) -> Result<BTreeSet<usize>> {
    require_mode(d, DuplexMode::HalfDuplex)?;
    Ok(diamond_capacity(d)?.support())
}

/// Half-duplex time shares: `listen[i]` for source->relay and `talk[i]`
/// for relay->destination, relay `i+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HdActivation {
    pub listen: Vec<Rational>,
    pub talk: Vec<Rational>,
}

impl HdActivation {
    /// Splits each relay's utilization in proportion to the opposite link:
    /// `listen = x r/(ℓ+r)`, `talk = x ℓ/(ℓ+r)`.
    pub fn from_utilization(d: &DiamondNetwork, x: &[Rational]) -> Self {
        let (mut listen, mut talk) = (Vec::new(), Vec::new());
        for (i, (l, r)) in d.relays.iter().enumerate() {
            if x[i].is_zero() || !(l + r).is_positive() {
                listen.push(Rational::zero());
                talk.push(Rational::zero());
            } else {
                listen.push(&x[i] * r / (l + r));
                talk.push(&x[i] * l / (l + r));
            }
        }
        HdActivation { listen, talk }
    }

    /// Rate `Σ listen_i ℓ_i`.
    pub fn value(&self, d: &DiamondNetwork) -> Rational {
        self.listen
            .iter()
            .zip(&d.relays)
            .map(|(a, (l, _))| a * l)
            .sum()
    }

    /// Checks flow balance, the two endpoint budgets and the per-relay
    /// half-duplex budget.
    pub fn is_feasible(&self, d: &DiamondNetwork) -> bool {
        let one = Rational::one();
        let balanced = self
            .listen
            .iter()
            .zip(&self.talk)
            .zip(&d.relays)
            .all(|((a, b), (l, r))| a * l == b * r);
        let nonneg = self.listen.iter().chain(&self.talk).all(|v| !v.is_negative());
        let src: Rational = self.listen.iter().cloned().sum();
        let dst: Rational = self.talk.iter().cloned().sum();
        let per_relay = self.listen.iter().zip(&self.talk).all(|(a, b)| a + b <= one);
        balanced && nonneg && src <= one && dst <= one && per_relay
    }

    /// Lowest-index relay (1-based) that is busy all of the time.
    pub fn pivot(&self) -> Option<usize> {
        let one = Rational::one();
        (0..self.listen.len())
            .find(|&i| &self.listen[i] + &self.talk[i] == one)
            .map(|i| i + 1)
    }

    pub fn flow(&self, d: &DiamondNetwork) -> LinkFlow {
        let dest = d.n_relays() + 1;
        let mut flows = BTreeMap::new();
        for (i, (a, (l, _))) in self.listen.iter().zip(&d.relays).enumerate() {
            let f = a * l;
            if f.is_positive() {
                flows.insert((0, i + 1), f.clone());
                flows.insert((i + 1, dest), f);
            }
        }
        LinkFlow::new(flows)
    }
}

/// Solves the half-duplex activation program directly over per-relay
/// listen/talk shares (`listen·ℓ = talk·r`, endpoint budgets, and
/// `listen + talk <= 1`). Returns the activation at an optimal vertex and
/// its value.
pub fn solve_hd_activation(d: &DiamondNetwork) -> Result<(HdActivation, Rational)> {
    let usable = d.usable();
    let k = usable.len();
    let mut objective = vec![Rational::zero(); 2 * k];
    for (p, &i) in usable.iter().enumerate() {
        objective[p] = d.relays[i - 1].0.clone();
    }
    let mut lp = LinearProgram::new(objective);
    let zero_row = || vec![Rational::zero(); 2 * k];
    for (p, &i) in usable.iter().enumerate() {
        let (l, r) = &d.relays[i - 1];
        let mut row = zero_row();
        row[p] = l.clone();
        row[k + p] = -r.clone();
        lp.add_eq(row, Rational::zero());
    }
    let mut src = zero_row();
    let mut dst = zero_row();
    for p in 0..k {
        src[p] = Rational::one();
        dst[k + p] = Rational::one();
    }
    lp.add_le(src, Rational::one());
    lp.add_le(dst, Rational::one());
    for p in 0..k {
        let mut row = zero_row();
        row[p] = Rational::one();
        row[k + p] = Rational::one();
        lp.add_le(row, Rational::one());
    }
    let sol = lp.solve()?;
    let mut act = HdActivation {
        listen: vec![Rational::zero(); d.n_relays()],
        talk: vec![Rational::zero(); d.n_relays()],
    };
    for (p, &i) in usable.iter().enumerate() {
        act.listen[i - 1] = sol.values[p].clone();
        act.talk[i - 1] = sol.values[k + p].clone();
    }
    Ok((act, sol.objective_value))
}

/// Explicit half-duplex schedule achieving the diamond capacity.
///
/// With pivot relay `i'` busy all of the time, every other relay `i`
/// listens while `i'` talks (state `{0→i, i'→D}` for `listen_i`) and talks
/// while `i'` listens (state `{0→i', i→D}` for `talk_i`); the pivot's
/// remaining talk and listen time runs alone. Zero-length states are
/// omitted.
pub fn hd_schedule(d: &DiamondNetwork) -> Result<Schedule> {
    require_mode(d, DuplexMode::HalfDuplex)?;
    if d.usable().is_empty() {
        return Ok(Schedule::idle());
    }
    let sol = diamond_capacity(d)?;
    let act = HdActivation::from_utilization(d, &sol.x);
    let pivot = act.pivot().ok_or_else(|| {
        Error::InvalidInput("optimal activation has no relay busy all of the time".into())
    })?;
    let dest = d.n_relays() + 1;
    let others: Vec<usize> = (1..=d.n_relays()).filter(|&i| i != pivot).collect();
    let p = pivot - 1;

    let mut raw = Vec::new();
    for &i in &others {
        raw.push((NetworkState::new([(0, i), (pivot, dest)]), act.listen[i - 1].clone()));
    }
    let others_listen: Rational = others.iter().map(|&i| act.listen[i - 1].clone()).sum();
    raw.push((NetworkState::new([(pivot, dest)]), &act.talk[p] - others_listen));
    for &i in &others {
        raw.push((NetworkState::new([(0, pivot), (i, dest)]), act.talk[i - 1].clone()));
    }
    let others_talk: Rational = others.iter().map(|&i| act.talk[i - 1].clone()).sum();
    raw.push((NetworkState::new([(0, pivot)]), &act.listen[p] - others_talk));
    Schedule::from_entries(raw)
}

/// Best single-relay capacity and its ratio to the diamond capacity.
pub fn best_relay_guarantee(d: &DiamondNetwork) -> Result<(Rational, Rational)> {
    if d.n_relays() == 0 {
        return Err(Error::NotFound("diamond has no relays".into()));
    }
    let best = (1..=d.n_relays())
        .map(|i| d.path_capacity(i))
        .max()
        .expect("at least one relay");
    let value = diamond_capacity(d)?.value;
    let ratio = if value.is_zero() {
        Rational::one()
    } else {
        &best / &value
    };
    Ok((best, ratio))
}
