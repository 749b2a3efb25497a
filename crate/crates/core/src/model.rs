//! Network model: nodes, duplex mode, link capacities, and the conversions
//! from complex channel gains to exact rational capacities.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Node index: `0` is the source, `N+1` the destination, `1..=N` relays.
pub type NodeId = usize;

/// Directed link `(from, to)`.
pub type Link = (NodeId, NodeId);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DuplexMode {
    FullDuplex,
    HalfDuplex,
}

impl DuplexMode {
    pub fn short_name(self) -> &'static str {
        match self {
            DuplexMode::FullDuplex => "fd",
            DuplexMode::HalfDuplex => "hd",
        }
    }
}

impl fmt::Display for DuplexMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DuplexMode::FullDuplex => "full-duplex",
            DuplexMode::HalfDuplex => "half-duplex",
        })
    }
}

/// A structural problem found by [`Network::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    SelfLoop(NodeId),
    IntoSource(NodeId),
    OutOfDestination(NodeId),
    NodeOutOfRange(Link),
    NegativeCapacity(Link, Rational),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SelfLoop(i) => write!(f, "self-loop at node {i}"),
            Violation::IntoSource(i) => write!(f, "link {i}->0 enters the source"),
            Violation::OutOfDestination(j) => write!(f, "link out of destination to node {j}"),
            Violation::NodeOutOfRange((i, j)) => write!(f, "link {i}->{j} references a missing node"),
            Violation::NegativeCapacity((i, j), c) => {
                write!(f, "negative capacity {} on link {i}->{j}", rational::to_string(c))
            }
        }
    }
}

/// A 1-2-1 relay network with exact link capacities (bits per channel use).
///
/// Links not present have capacity zero. Construction does not validate;
/// call [`Network::validate`] before analysing untrusted input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    n_relays: usize,
    mode: DuplexMode,
    links: BTreeMap<Link, Rational>,
}

impl Network {
    pub fn new(n_relays: usize, mode: DuplexMode) -> Self {
        Network {
            n_relays,
            mode,
            links: BTreeMap::new(),
        }
    }

    pub fn with_link(mut self, from: NodeId, to: NodeId, capacity: Rational) -> Self {
        self.set_link(from, to, capacity);
        self
    }

    pub fn set_link(&mut self, from: NodeId, to: NodeId, capacity: Rational) {
        self.links.insert((from, to), capacity);
    }

    pub fn with_mode(mut self, mode: DuplexMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn n_relays(&self) -> usize {
        self.n_relays
    }

    pub fn mode(&self) -> DuplexMode {
        self.mode
    }

    pub fn source(&self) -> NodeId {
        0
    }

    pub fn destination(&self) -> NodeId {
        self.n_relays + 1
    }

    pub fn node_count(&self) -> usize {
        self.n_relays + 2
    }

    pub fn is_relay(&self, node: NodeId) -> bool {
        node >= 1 && node <= self.n_relays
    }

    /// Capacity of `from -> to`; zero when the link is absent.
    pub fn capacity(&self, from: NodeId, to: NodeId) -> Rational {
        self.links
            .get(&(from, to))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Every stored link, including zero-capacity ones.
    pub fn links(&self) -> impl Iterator<Item = (Link, &Rational)> {
        self.links.iter().map(|(&l, c)| (l, c))
    }

    /// Links with strictly positive capacity, in lexicographic order.
    pub fn active_links(&self) -> impl Iterator<Item = (Link, &Rational)> {
        self.links().filter(|(_, c)| c.is_positive())
    }

    pub fn has_link(&self, from: NodeId, to: NodeId) -> bool {
        self.links.get(&(from, to)).is_some_and(|c| c.is_positive())
    }

    /// Positive-capacity successors of `node`, ascending.
    pub fn successors(&self, node: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.links
            .range((node, 0)..=(node, usize::MAX))
            .filter(|(_, c)| c.is_positive())
            .map(|(&(_, j), _)| j)
    }

    pub fn violations(&self) -> Vec<Violation> {
        let dest = self.destination();
        let mut out = Vec::new();
        for (&(i, j), c) in &self.links {
            if i > dest || j > dest {
                out.push(Violation::NodeOutOfRange((i, j)));
                continue;
            }
            if i == j {
                out.push(Violation::SelfLoop(i));
            }
            if j == 0 {
                out.push(Violation::IntoSource(i));
            }
            if i == dest {
                out.push(Violation::OutOfDestination(j));
            }
            if c.is_negative() {
                out.push(Violation::NegativeCapacity((i, j), c.clone()));
            }
        }
        out
    }

    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        self.validate().map_err(Error::InvalidNetwork)
    }

    /// Copy restricted to positive links lying on some source-destination
    /// walk; relays off every such walk lose all their links.
    pub fn pruned(&self) -> Network {
        let n = self.node_count();
        let mut fwd = vec![Vec::new(); n];
        let mut bwd = vec![Vec::new(); n];
        for ((i, j), _) in self.active_links() {
            fwd[i].push(j);
            bwd[j].push(i);
        }
        let from_source = reach(&fwd, self.source());
        let to_dest = reach(&bwd, self.destination());
        let keep = |v: NodeId| from_source[v] && to_dest[v];
        let links = self
            .active_links()
            .filter(|&((i, j), _)| keep(i) && keep(j))
            .map(|(l, c)| (l, c.clone()))
            .collect();
        Network {
            n_relays: self.n_relays,
            mode: self.mode,
            links,
        }
    }

    /// Multiplies every capacity by `k`.
    pub fn scaled(&self, k: &Rational) -> Network {
        Network {
            n_relays: self.n_relays,
            mode: self.mode,
            links: self.links.iter().map(|(&l, c)| (l, c * k)).collect(),
        }
    }

    /// Relays that appear on at least one positive link.
    pub fn used_relays(&self) -> BTreeSet<NodeId> {
        self.active_links()
            .flat_map(|((i, j), _)| [i, j])
            .filter(|&v| self.is_relay(v))
            .collect()
    }
}

fn reach(adj: &[Vec<NodeId>], start: NodeId) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Complex channel gains `h_{ji}` for each link `(i, j)` and a common
/// transmit power.
#[derive(Debug, Clone)]
pub struct ChannelSpec {
    pub gains: BTreeMap<Link, Complex64>,
    pub power: f64,
}

impl ChannelSpec {
    /// Real-valued capacities `log2(1 + P|h|^2)` for every link.
    pub fn link_capacities(&self) -> Result<BTreeMap<Link, f64>> {
        self.gains
            .iter()
            .map(|(&l, &h)| link_capacity_from_channel(h, self.power).map(|c| (l, c)))
            .collect()
    }
}

/// Point-to-point capacity `log2(1 + power * |h|^2)` in bits per channel use.
pub fn link_capacity_from_channel(h: Complex64, power: f64) -> Result<f64> {
    if !h.re.is_finite() || !h.im.is_finite() || !power.is_finite() {
        return Err(Error::InvalidInput("non-finite channel gain or power".into()));
    }
    if power <= 0.0 {
        return Err(Error::InvalidInput(format!("power must be positive, got {power}")));
    }
    Ok((power * h.norm_sqr()).ln_1p() / std::f64::consts::LN_2)
}

/// Rounds real capacities down onto a decimal grid fine enough that every
/// link satisfies `l_hat <= l <= l_hat + epsilon / (N+1)^2`.
///
/// The resulting network's capacity is then within `epsilon` below the
/// capacity of the real-valued network.
pub fn rationalize(
    real_caps: &BTreeMap<Link, f64>,
    n_relays: usize,
    mode: DuplexMode,
    epsilon: &Rational,
) -> Result<Network> {
    let grid = rationalization_grid(n_relays, epsilon)?;
    let mut net = Network::new(n_relays, mode);
    for (&(i, j), &value) in real_caps {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidInput(format!(
                "capacity of link {i}->{j} must be finite and nonnegative, got {value}"
            )));
        }
        let exact = rational::from_f64(value)?;
        let truncated = (exact * &grid).floor() / &grid;
        net.set_link(i, j, truncated);
    }
    Ok(net)
}

/// Denominator `10^k` of the grid used by [`rationalize`]: the smallest
/// power of ten with `10^-k <= epsilon / (N+1)^2`.
pub fn rationalization_grid(n_relays: usize, epsilon: &Rational) -> Result<Rational> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    let per_link = epsilon / rational::int(((n_relays + 1) * (n_relays + 1)) as i64);
    Ok(decimal_grid(&per_link))
}

/// Truncates an exact value down onto the grid with denominator `grid`.
pub fn truncate_to_grid(value: &Rational, grid: &Rational) -> Rational {
    (value * grid).floor() / grid
}

/// Smallest power of ten `q` with `1/q <= step`.
fn decimal_grid(step: &Rational) -> Rational {
    let mut q = Rational::from_integer(BigInt::from(1));
    let ten = rational::int(10);
    while q.recip() > *step {
        q *= &ten;
    }
    q
}

/// Additive constant separating the approximate capacity from the true
/// capacity, in bits:
/// `(N+1) log2 e + 2 log2 (N+2) + N log2 |S_1|`, where `|S_1|` is `(N+1)^2`
/// for full-duplex relays and `2N+1` for half-duplex relays.
pub fn gap(n_relays: usize, mode: DuplexMode) -> f64 {
    let n = n_relays as f64;
    let relay_states = match mode {
        DuplexMode::FullDuplex => (n + 1.0) * (n + 1.0),
        DuplexMode::HalfDuplex => 2.0 * n + 1.0,
    };
    (n + 1.0) * std::f64::consts::LOG2_E + 2.0 * (n + 2.0).log2() + n * relay_states.log2()
}
