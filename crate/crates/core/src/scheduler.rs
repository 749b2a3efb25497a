//! Network states, time-shared schedules, and the constructions that turn
//! a link activation into a schedule.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::capacity::{LinkActivation, LinkFlow};
use crate::error::{Error, LinkDeficit, Result};
use crate::matching::{bipartite_edge_coloring, max_bipartite_matching};
use crate::model::{DuplexMode, Link, Network, NodeId};
use crate::rational::{self, Rational};

/// Refuse the LCM multigraph beyond this many parallel edges by default.
pub const DEFAULT_MAX_MULTIGRAPH_EDGES: usize = 1_000_000;

/// One joint beam configuration: the set of simultaneously active links.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NetworkState {
    pub active_links: BTreeSet<Link>,
}

impl NetworkState {
    pub fn idle() -> Self {
        NetworkState::default()
    }

    pub fn new(links: impl IntoIterator<Item = Link>) -> Self {
        NetworkState {
            active_links: links.into_iter().collect(),
        }
    }

    pub fn contains(&self, link: Link) -> bool {
        self.active_links.contains(&link)
    }

    pub fn is_idle(&self) -> bool {
        self.active_links.is_empty()
    }
}

impl fmt::Display for NetworkState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_idle() {
            return f.write_str("{idle}");
        }
        let parts: Vec<String> = self
            .active_links
            .iter()
            .map(|(i, j)| format!("{i}->{j}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Why a state is not a valid 1-2-1 configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateViolation {
    TransmitsTwice(NodeId),
    ReceivesTwice(NodeId),
    TransmitsAndReceives(NodeId),
    MissingLink(Link),
}

impl fmt::Display for StateViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateViolation::TransmitsTwice(i) => write!(f, "node {i} transmits twice"),
            StateViolation::ReceivesTwice(j) => write!(f, "node {j} receives twice"),
            StateViolation::TransmitsAndReceives(i) => {
                write!(f, "relay {i} transmits and receives")
            }
            StateViolation::MissingLink((i, j)) => {
                write!(f, "link {i}->{j} does not exist in the network")
            }
        }
    }
}

/// Checks the one-beam-per-direction rule, the half-duplex rule when the
/// network is half-duplex, and that every active link has positive capacity.
pub fn validate_state(
    state: &NetworkState,
    network: &Network,
) -> std::result::Result<(), Vec<StateViolation>> {
    let mut out = Vec::new();
    let mut tx = BTreeMap::<NodeId, usize>::new();
    let mut rx = BTreeMap::<NodeId, usize>::new();
    for &(i, j) in &state.active_links {
        if !network.has_link(i, j) {
            out.push(StateViolation::MissingLink((i, j)));
        }
        *tx.entry(i).or_default() += 1;
        *rx.entry(j).or_default() += 1;
    }
    out.extend(tx.iter().filter(|(_, &c)| c > 1).map(|(&i, _)| StateViolation::TransmitsTwice(i)));
    out.extend(rx.iter().filter(|(_, &c)| c > 1).map(|(&j, _)| StateViolation::ReceivesTwice(j)));
    if network.mode() == DuplexMode::HalfDuplex {
        out.extend(
            tx.keys()
                .filter(|i| rx.contains_key(i) && network.is_relay(**i))
                .map(|&i| StateViolation::TransmitsAndReceives(i)),
        );
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Distinct network states with nonnegative durations summing to one.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Schedule {
    entries: Vec<(NetworkState, Rational)>,
}

impl Schedule {
    /// Normalizes raw `(state, duration)` pairs: repeated states are merged
    /// (first occurrence keeps its position), zero durations are dropped and
    /// any shortfall below one goes to the idle state.
    pub fn from_entries(raw: impl IntoIterator<Item = (NetworkState, Rational)>) -> Result<Self> {
        let mut entries: Vec<(NetworkState, Rational)> = Vec::new();
        let mut index: BTreeMap<NetworkState, usize> = BTreeMap::new();
        for (state, d) in raw {
            if d.is_negative() {
                return Err(Error::InvalidInput(format!("negative duration for state {state}")));
            }
            if d.is_zero() {
                continue;
            }
            match index.get(&state) {
                Some(&k) => entries[k].1 += d,
                None => {
                    index.insert(state.clone(), entries.len());
                    entries.push((state, d));
                }
            }
        }
        let total: Rational = entries.iter().map(|(_, d)| d.clone()).sum();
        let one = Rational::one();
        if total > one {
            return Err(Error::InvalidInput(format!(
                "durations sum to {} > 1",
                rational::to_string(&total)
            )));
        }
        if total < one {
            let slack = one - total;
            match index.get(&NetworkState::idle()) {
                Some(&k) => entries[k].1 += slack,
                None => entries.push((NetworkState::idle(), slack)),
            }
        }
        Ok(Schedule { entries })
    }

    pub fn idle() -> Self {
        Schedule {
            entries: vec![(NetworkState::idle(), Rational::one())],
        }
    }

    pub fn entries(&self) -> &[(NetworkState, Rational)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_duration(&self) -> Rational {
        self.entries.iter().map(|(_, d)| d.clone()).sum()
    }

    /// Total time during which `link` is active.
    pub fn coverage(&self, link: Link) -> Rational {
        self.entries
            .iter()
            .filter(|(s, _)| s.contains(link))
            .map(|(_, d)| d.clone())
            .sum()
    }

    /// Per-link activation fractions induced by the schedule.
    pub fn activation(&self) -> LinkActivation {
        let mut fractions = BTreeMap::new();
        for (s, d) in &self.entries {
            for &l in &s.active_links {
                *fractions.entry(l).or_insert_with(Rational::zero) += d;
            }
        }
        LinkActivation::new(fractions)
    }

    /// Whether every link receives at least its activation fraction.
    pub fn covers(&self, activation: &LinkActivation) -> bool {
        activation.support().all(|(l, v)| self.coverage(l) >= *v)
    }

    /// Every state that fails [`validate_state`], with its violations.
    pub fn invalid_states(&self, network: &Network) -> Vec<(usize, Vec<StateViolation>)> {
        self.entries
            .iter()
            .enumerate()
            .filter_map(|(k, (s, _))| validate_state(s, network).err().map(|v| (k, v)))
            .collect()
    }
}

/// Schedule covering a doubly substochastic activation, built by padding
/// the `(N+2)×(N+2)` transmitter-by-receiver matrix to a doubly stochastic
/// one and peeling off perfect matchings (Birkhoff-von Neumann).
///
/// Each peeled matching is weighted by its smallest entry; matched pairs
/// that are not links of the activation become idle beams. At most
/// `(N+2)^2 - 2(N+2) + 2` states are produced.
pub fn bvn_schedule(activation: &LinkActivation, n_relays: usize) -> Result<Schedule> {
    activation.check_budgets()?;
    let n = n_relays + 2;
    if let Some(((i, j), _)) = activation.support().find(|((i, j), _)| *i >= n || *j >= n) {
        return Err(Error::InvalidInput(format!("link {i}->{j} outside a {n_relays}-relay network")));
    }
    let mut matrix = vec![vec![Rational::zero(); n]; n];
    for ((i, j), v) in activation.support() {
        matrix[i][j] = v.clone();
    }
    pad_to_doubly_stochastic(&mut matrix);

    let mut raw = Vec::new();
    loop {
        let adj: Vec<Vec<usize>> = matrix
            .iter()
            .map(|row| (0..n).filter(|&j| row[j].is_positive()).collect())
            .collect();
        if adj.iter().all(Vec::is_empty) {
            break;
        }
        let mates = max_bipartite_matching(&adj, n);
        let perm: Vec<usize> = mates
            .into_iter()
            .map(|m| m.expect("a scaled doubly stochastic matrix has a perfect matching on its support"))
            .collect();
        let weight = (0..n)
            .map(|i| matrix[i][perm[i]].clone())
            .min()
            .expect("nonempty matrix");
        for (i, &j) in perm.iter().enumerate() {
            matrix[i][j] -= &weight;
        }
        let state = NetworkState::new(
            perm.iter()
                .enumerate()
                .map(|(i, &j)| (i, j))
                .filter(|&l| activation.get(l).is_positive()),
        );
        raw.push((state, weight));
    }
    if raw.is_empty() {
        return Ok(Schedule::idle());
    }
    Schedule::from_entries(raw)
}

/// Raises entries until every row and column sums to one, pairing rows
/// and columns with a deficit in index order.
fn pad_to_doubly_stochastic(matrix: &mut [Vec<Rational>]) {
    let n = matrix.len();
    let one = Rational::one();
    let mut row_gap: Vec<Rational> = matrix
        .iter()
        .map(|r| &one - r.iter().sum::<Rational>())
        .collect();
    let mut col_gap: Vec<Rational> = (0..n)
        .map(|j| &one - matrix.iter().map(|r| r[j].clone()).sum::<Rational>())
        .collect();
    let mut j = 0;
    for i in 0..n {
        while row_gap[i].is_positive() {
            while j < n && !col_gap[j].is_positive() {
                j += 1;
            }
            debug_assert!(j < n, "row and column deficits must balance");
            if j == n {
                break;
            }
            let add = row_gap[i].clone().min(col_gap[j].clone());
            matrix[i][j] += &add;
            row_gap[i] -= &add;
            col_gap[j] -= &add;
        }
    }
}

/// Output of [`lcm_coloring_schedule`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcmColoring {
    pub schedule: Schedule,
    /// Least common multiple of the activation denominators.
    pub lcm: BigInt,
    /// Maximum degree of the multigraph, equal to the number of colors.
    pub max_degree: usize,
}

/// Schedule by edge coloring: scale the activation by the LCM `M` of its
/// denominators, draw `M·λ` parallel transmitter-to-receiver edges per
/// link, color the bipartite multigraph with `Δ <= M` colors, and give each
/// color class `1/Δ` of the time (equal classes merged).
///
/// Fails with a size-limit error when `M` times the number of active links
/// exceeds `max_edges`.
pub fn lcm_coloring_schedule(activation: &LinkActivation, max_edges: usize) -> Result<LcmColoring> {
    activation.check_budgets()?;
    let support: Vec<(Link, Rational)> = activation.support().map(|(l, v)| (l, v.clone())).collect();
    let lcm = rational::lcm_of_denominators(support.iter().map(|(_, v)| v));
    let too_big = || Error::SizeLimit {
        what: format!(
            "LCM multigraph with M = {lcm} over {} links; use the Birkhoff-von Neumann schedule",
            support.len()
        ),
        limit: max_edges,
    };
    let budget = (&lcm * BigInt::from(support.len())).to_usize().ok_or_else(too_big)?;
    if budget > max_edges {
        return Err(too_big());
    }
    let scale = Rational::from_integer(lcm.clone());
    let n_nodes = support
        .iter()
        .map(|((i, j), _)| i.max(j) + 1)
        .max()
        .unwrap_or(0);
    let mut edges = Vec::new();
    let mut edge_link = Vec::new();
    for (l, v) in &support {
        let count = (v * &scale)
            .to_integer()
            .to_usize()
            .expect("bounded by the edge budget");
        for _ in 0..count {
            edges.push(*l);
            edge_link.push(*l);
        }
    }
    let (colors, max_degree) = bipartite_edge_coloring(n_nodes, n_nodes, &edges);
    if max_degree == 0 {
        return Ok(LcmColoring {
            schedule: Schedule::idle(),
            lcm,
            max_degree,
        });
    }
    let mut classes = vec![BTreeSet::new(); max_degree];
    for (e, &c) in colors.iter().enumerate() {
        classes[c].insert(edge_link[e]);
    }
    let share = Rational::new(BigInt::one(), BigInt::from(max_degree));
    let schedule = Schedule::from_entries(
        classes
            .into_iter()
            .map(|links| (NetworkState { active_links: links }, share.clone())),
    )?;
    Ok(LcmColoring {
        schedule,
        lcm,
        max_degree,
    })
}

/// Replays `schedule` against `flow`: each link must carry no more than its
/// active time multiplied by its capacity. Returns the rate leaving the
/// source.
pub fn simulate(network: &Network, schedule: &Schedule, flow: &LinkFlow) -> Result<Rational> {
    network.ensure_valid()?;
    if let Some((k, v)) = schedule.invalid_states(network).into_iter().next() {
        let msgs: Vec<String> = v.iter().map(ToString::to_string).collect();
        return Err(Error::InvalidInput(format!("state {k} is invalid: {}", msgs.join("; "))));
    }
    if schedule.total_duration() != Rational::one() {
        return Err(Error::InvalidInput("schedule durations do not sum to 1".into()));
    }
    if let Some((&(i, j), _)) = flow.flows.iter().find(|(_, f)| f.is_negative()) {
        return Err(Error::InvalidInput(format!("negative flow on link {i}->{j}")));
    }
    let unbalanced = flow.conservation_violations(network.n_relays());
    if let Some(v) = unbalanced.first() {
        return Err(Error::InvalidInput(format!("flow is not conserved at relay {v}")));
    }
    for (&link, f) in &flow.flows {
        if f.is_zero() {
            continue;
        }
        let available = schedule.coverage(link) * network.capacity(link.0, link.1);
        if *f > available {
            return Err(Error::LinkDeficit(Box::new(LinkDeficit {
                link,
                required: f.clone(),
                available,
            })));
        }
    }
    Ok(flow.rate())
}

/// Largest number of states a Birkhoff-von Neumann schedule may need.
pub fn bvn_state_bound(n_relays: usize) -> usize {
    let n = n_relays + 2;
    n * n - 2 * n + 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn act(pairs: &[(Link, Rational)]) -> LinkActivation {
        LinkActivation::new(pairs.iter().cloned().collect())
    }

    fn line(mode: DuplexMode) -> Network {
        Network::new(1, mode).with_link(0, 1, int(2)).with_link(1, 2, int(3))
    }

    #[test]
    fn bvn_on_doubly_stochastic_block() {
        // Transmitters 0, 1 against receivers 2, 3: [[1/2,1/2],[1/2,1/2]].
        let a = act(&[
            ((0, 2), ratio(1, 2)),
            ((0, 3), ratio(1, 2)),
            ((1, 2), ratio(1, 2)),
            ((1, 3), ratio(1, 2)),
        ]);
        let s = bvn_schedule(&a, 2).unwrap();
        assert_eq!(s.total_duration(), int(1));
        assert_eq!(s.len(), 2);
        for (state, d) in s.entries() {
            assert_eq!(*d, ratio(1, 2));
            assert_eq!(state.active_links.len(), 2);
        }
        assert!(s.covers(&a));
    }

    #[test]
    fn bvn_single_relay_coverage() {
        let a = act(&[((0, 1), int(1)), ((1, 2), ratio(2, 3))]);
        let s = bvn_schedule(&a, 1).unwrap();
        assert!(s.covers(&a));
        assert_eq!(s.total_duration(), int(1));
        assert!(s.coverage((1, 2)) >= ratio(2, 3));
        assert!(s.len() <= bvn_state_bound(1));
        assert!(s.invalid_states(&line(DuplexMode::FullDuplex)).is_empty());
    }

    #[test]
    fn bvn_all_zero_is_idle() {
        let s = bvn_schedule(&LinkActivation::default(), 3).unwrap();
        assert_eq!(s, Schedule::idle());
    }

    #[test]
    fn bvn_rejects_over_budget() {
        let a = act(&[((0, 1), ratio(3, 4)), ((0, 2), ratio(1, 2))]);
        assert!(bvn_schedule(&a, 1).is_err());
    }

    #[test]
    fn lcm_symmetric_diamond() {
        let half = ratio(1, 2);
        let a = act(&[
            ((0, 1), half.clone()),
            ((0, 2), half.clone()),
            ((1, 3), half.clone()),
            ((2, 3), half.clone()),
        ]);
        let c = lcm_coloring_schedule(&a, DEFAULT_MAX_MULTIGRAPH_EDGES).unwrap();
        assert_eq!(c.lcm, BigInt::from(2));
        assert_eq!(c.max_degree, 2);
        let states: BTreeSet<NetworkState> =
            c.schedule.entries().iter().map(|(s, _)| s.clone()).collect();
        assert_eq!(
            states,
            BTreeSet::from([
                NetworkState::new([(0, 1), (2, 3)]),
                NetworkState::new([(0, 2), (1, 3)])
            ])
        );
        assert!(c.schedule.entries().iter().all(|(_, d)| *d == half));
    }

    #[test]
    fn lcm_integer_activation() {
        let a = act(&[((0, 1), int(1))]);
        let c = lcm_coloring_schedule(&a, DEFAULT_MAX_MULTIGRAPH_EDGES).unwrap();
        assert_eq!((c.lcm.clone(), c.max_degree), (BigInt::from(1), 1));
        assert_eq!(c.schedule.entries(), &[(NetworkState::new([(0, 1)]), int(1))]);
    }

    #[test]
    fn lcm_single_relay() {
        let a = act(&[((0, 1), int(1)), ((1, 2), ratio(2, 3))]);
        let c = lcm_coloring_schedule(&a, DEFAULT_MAX_MULTIGRAPH_EDGES).unwrap();
        assert_eq!(c.lcm, BigInt::from(3));
        assert_eq!(c.max_degree, 3);
        assert!(c.schedule.covers(&a));
        // Non-adjacent edges share colors: two joint states and one lone.
        assert_eq!(c.schedule.coverage((0, 1)), int(1));
        assert_eq!(c.schedule.coverage((1, 2)), ratio(2, 3));
    }

    #[test]
    fn lcm_guard() {
        let a = act(&[((0, 1), ratio(1, 1_000_003)), ((1, 2), ratio(1, 999_983))]);
        assert!(matches!(
            lcm_coloring_schedule(&a, DEFAULT_MAX_MULTIGRAPH_EDGES),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn state_validation() {
        let fd = line(DuplexMode::FullDuplex);
        let hd = line(DuplexMode::HalfDuplex);
        let joint = NetworkState::new([(0, 1), (1, 2)]);
        assert_eq!(validate_state(&joint, &fd), Ok(()));
        let err = validate_state(&joint, &hd).unwrap_err();
        assert_eq!(err, vec![StateViolation::TransmitsAndReceives(1)]);
        assert_eq!(err[0].to_string(), "relay 1 transmits and receives");
        let wide = Network::new(2, DuplexMode::FullDuplex)
            .with_link(0, 1, int(1))
            .with_link(0, 2, int(1));
        let twice = NetworkState::new([(0, 1), (0, 2)]);
        let err = validate_state(&twice, &wide).unwrap_err();
        assert_eq!(err, vec![StateViolation::TransmitsTwice(0)]);
        assert_eq!(err[0].to_string(), "node 0 transmits twice");
        let ghost = NetworkState::new([(0, 2)]);
        assert_eq!(
            validate_state(&ghost, &fd),
            Err(vec![StateViolation::MissingLink((0, 2))])
        );
    }

    #[test]
    fn schedule_normalization() {
        let s = Schedule::from_entries([
            (NetworkState::new([(0, 1)]), ratio(1, 4)),
            (NetworkState::idle(), ratio(1, 4)),
            (NetworkState::new([(0, 1)]), ratio(1, 4)),
            (NetworkState::new([(1, 2)]), int(0)),
        ])
        .unwrap();
        assert_eq!(
            s.entries(),
            &[
                (NetworkState::new([(0, 1)]), ratio(1, 2)),
                (NetworkState::idle(), ratio(1, 2))
            ]
        );
        assert!(Schedule::from_entries([(NetworkState::idle(), int(2))]).is_err());
        assert!(Schedule::from_entries([(NetworkState::idle(), int(-1))]).is_err());
    }

    #[test]
    fn simulate_examples() {
        let net = line(DuplexMode::FullDuplex);
        let flow = LinkFlow::new(BTreeMap::from([((0, 1), int(2)), ((1, 2), int(2))]));
        let full = Schedule::from_entries([(NetworkState::new([(0, 1), (1, 2)]), int(1))]).unwrap();
        assert_eq!(simulate(&net, &full, &flow).unwrap(), int(2));

        let half = Schedule::from_entries([
            (NetworkState::new([(0, 1), (1, 2)]), ratio(1, 2)),
            (NetworkState::new([(0, 1)]), ratio(1, 2)),
        ])
        .unwrap();
        match simulate(&net, &half, &flow) {
            Err(Error::LinkDeficit(d)) => {
                assert_eq!(d.link, (1, 2));
                assert_eq!(d.required, int(2));
                assert_eq!(d.available, ratio(3, 2));
            }
            other => panic!("expected deficit, got {other:?}"),
        }

        assert_eq!(simulate(&net, &full, &LinkFlow::default()).unwrap(), int(0));
    }

    #[test]
    fn simulate_rejects_unbalanced_flow() {
        let net = line(DuplexMode::FullDuplex);
        let flow = LinkFlow::new(BTreeMap::from([((0, 1), int(2)), ((1, 2), int(1))]));
        let full = Schedule::from_entries([(NetworkState::new([(0, 1), (1, 2)]), int(1))]).unwrap();
        assert!(simulate(&net, &full, &flow).is_err());
    }
}
