//! Path-utilization view of full-duplex capacity.
//!
//! Each source-destination path `p` carries rate `C_p` (its bottleneck
//! capacity) while active; link `(i, j)` of the path then needs a fraction
//! `C_p / ℓ(i→j)` of the time. The path program maximizes `Σ x_p C_p`
//! subject to every node transmitting and receiving at most all of the
//! time.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::capacity::{LinkActivation, LinkFlow};
use crate::error::{Error, Result};
use crate::lpsolve::LinearProgram;
use crate::model::{DuplexMode, Link, Network, NodeId};
use crate::rational::Rational;

pub const DEFAULT_MAX_PATHS: usize = 100_000;

/// A simple source-destination path with its link capacities.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    nodes: Vec<NodeId>,
    link_capacities: Vec<Rational>,
}

impl Path {
    /// Builds a path from its node sequence, reading capacities from
    /// `network`. Fails unless the sequence is simple and every hop has
    /// positive capacity.
    pub fn new(nodes: Vec<NodeId>, network: &Network) -> Result<Self> {
        let distinct: BTreeSet<_> = nodes.iter().collect();
        if nodes.len() < 2 || distinct.len() != nodes.len() {
            return Err(Error::InvalidInput(format!("{nodes:?} is not a simple path")));
        }
        if nodes[0] != network.source() || *nodes.last().unwrap() != network.destination() {
            return Err(Error::InvalidInput(format!(
                "{nodes:?} does not run from source to destination"
            )));
        }
        let mut link_capacities = Vec::with_capacity(nodes.len() - 1);
        for w in nodes.windows(2) {
            if !network.has_link(w[0], w[1]) {
                return Err(Error::InvalidInput(format!("no link {}->{}", w[0], w[1])));
            }
            link_capacities.push(network.capacity(w[0], w[1]));
        }
        Ok(Path {
            nodes,
            link_capacities,
        })
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn links(&self) -> impl Iterator<Item = Link> + '_ {
        self.nodes.windows(2).map(|w| (w[0], w[1]))
    }

    /// Full-duplex capacity of the path: its smallest link capacity.
    pub fn capacity(&self) -> Rational {
        self.link_capacities
            .iter()
            .min()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.nodes.contains(&node)
    }

    fn link_capacity(&self, link: Link) -> Option<&Rational> {
        self.links()
            .position(|l| l == link)
            .map(|k| &self.link_capacities[k])
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.nodes.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("-"))
    }
}

/// Fraction of time `link` must be active to run `path` at its capacity.
pub fn activation_fraction(path: &Path, link: Link) -> Result<Rational> {
    let cap = path.link_capacity(link).ok_or_else(|| {
        Error::InvalidInput(format!("link {}->{} is not on path {path}", link.0, link.1))
    })?;
    Ok(path.capacity() / cap)
}

/// All simple source-destination paths over positive links, in
/// lexicographic order of their node sequences.
pub fn enumerate_paths(network: &Network, max_paths: usize) -> Result<Vec<Path>> {
    network.ensure_valid()?;
    let dest = network.destination();
    let succ: Vec<Vec<NodeId>> = (0..network.node_count())
        .map(|v| network.successors(v).collect())
        .collect();
    let mut out = Vec::new();
    let mut stack = vec![network.source()];
    let mut on_path = vec![false; network.node_count()];
    on_path[0] = true;
    fn walk(
        v: NodeId,
        dest: NodeId,
        succ: &[Vec<NodeId>],
        stack: &mut Vec<NodeId>,
        on_path: &mut [bool],
        out: &mut Vec<Vec<NodeId>>,
        cap: usize,
    ) -> bool {
        if v == dest {
            if out.len() == cap {
                return false;
            }
            out.push(stack.clone());
            return true;
        }
        for &w in &succ[v] {
            if on_path[w] {
                continue;
            }
            on_path[w] = true;
            stack.push(w);
            let ok = walk(w, dest, succ, stack, on_path, out, cap);
            stack.pop();
            on_path[w] = false;
            if !ok {
                return false;
            }
        }
        true
    }
    if !walk(0, dest, &succ, &mut stack, &mut on_path, &mut out, max_paths) {
        return Err(Error::SizeLimit {
            what: "source-destination path count".into(),
            limit: max_paths,
        });
    }
    out.into_iter().map(|nodes| Path::new(nodes, network)).collect()
}

/// Optimal path utilizations, aligned with `paths`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSolution {
    pub paths: Vec<Path>,
    pub utilizations: Vec<Rational>,
    pub value: Rational,
}

impl PathSolution {
    /// Paths with strictly positive utilization.
    pub fn active(&self) -> impl Iterator<Item = (&Path, &Rational)> {
        self.paths
            .iter()
            .zip(&self.utilizations)
            .filter(|(_, x)| x.is_positive())
    }

    pub fn active_count(&self) -> usize {
        self.active().count()
    }

    /// Maps path utilizations to link quantities: path flow `x_p C_p` is
    /// added to every link of the path, and activation `x_p C_p / ℓ` to
    /// every link's time share.
    pub fn link_activation(&self) -> (LinkActivation, LinkFlow) {
        let mut act: BTreeMap<Link, Rational> = BTreeMap::new();
        let mut flow: BTreeMap<Link, Rational> = BTreeMap::new();
        for (p, x) in self.active() {
            let rate = x * p.capacity();
            for (link, cap) in p.links().zip(&p.link_capacities) {
                *act.entry(link).or_insert_with(Rational::zero) += &rate / cap;
                *flow.entry(link).or_insert_with(Rational::zero) += &rate;
            }
        }
        (LinkActivation::new(act), LinkFlow::new(flow))
    }
}

/// The path program over an explicit path list: one variable per path,
/// one transmit row per node `0..=N` and one receive row per node
/// `1..=N+1` (rows no path touches are omitted).
pub fn path_program(network: &Network, paths: &[Path]) -> LinearProgram {
    let objective = paths.iter().map(Path::capacity).collect();
    let mut lp = LinearProgram::new(objective);
    let n = network.node_count();
    let mut tx = vec![vec![Rational::zero(); paths.len()]; n];
    let mut rx = vec![vec![Rational::zero(); paths.len()]; n];
    for (k, p) in paths.iter().enumerate() {
        for (i, j) in p.links() {
            let f = activation_fraction(p, (i, j)).expect("link is on the path");
            tx[i][k] = f.clone();
            rx[j][k] = f;
        }
    }
    for row in tx.into_iter().chain(rx) {
        if row.iter().any(|v| !v.is_zero()) {
            lp.add_le(row, Rational::one());
        }
    }
    lp
}

/// Solves the path program to an optimal vertex.
pub fn solve_p1(network: &Network, max_paths: usize) -> Result<PathSolution> {
    if network.mode() != DuplexMode::FullDuplex {
        return Err(Error::UnsupportedMode(
            "the path program applies to full-duplex relays only".into(),
        ));
    }
    let paths = enumerate_paths(network, max_paths)?;
    let lp = path_program(network, &paths);
    let sol = lp.solve()?;
    Ok(PathSolution {
        paths,
        utilizations: sol.values,
        value: sol.objective_value,
    })
}

/// Relay layering of a two-layer network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoLayer {
    pub first: BTreeSet<NodeId>,
    pub second: BTreeSet<NodeId>,
}

impl TwoLayer {
    /// Relays per layer (the larger layer when they differ).
    pub fn relays_per_layer(&self) -> usize {
        self.first.len().max(self.second.len())
    }
}

/// Detects networks whose positive links all run source -> first layer ->
/// second layer -> destination, with disjoint nonempty layers.
pub fn detect_two_layer(network: &Network) -> Option<TwoLayer> {
    let (s, d) = (network.source(), network.destination());
    let first: BTreeSet<NodeId> = network.successors(s).filter(|&v| v != d).collect();
    let second: BTreeSet<NodeId> = network
        .active_links()
        .filter(|&((i, j), _)| j == d && i != s)
        .map(|((i, _), _)| i)
        .collect();
    if first.is_empty() || second.is_empty() || !first.is_disjoint(&second) {
        return None;
    }
    let layered = network.active_links().all(|((i, j), _)| {
        (i == s && first.contains(&j))
            || (first.contains(&i) && second.contains(&j))
            || (second.contains(&i) && j == d)
    });
    layered.then_some(TwoLayer { first, second })
}

/// Active-path count of a vertex against the general bound `2N+2`, and,
/// for two-layer networks, against `2M+1` (reported, not enforced).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityReport {
    pub active_count: usize,
    pub bound: usize,
    pub ok: bool,
    pub two_layer: Option<TwoLayerCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoLayerCheck {
    pub relays_per_layer: usize,
    pub bound: usize,
    pub ok: bool,
}

pub fn sparsity_report(solution: &PathSolution, network: &Network) -> SparsityReport {
    let active_count = solution.active_count();
    let bound = 2 * network.n_relays() + 2;
    let two_layer = detect_two_layer(network).map(|layers| {
        let m = layers.relays_per_layer();
        TwoLayerCheck {
            relays_per_layer: m,
            bound: 2 * m + 1,
            ok: active_count <= 2 * m + 1,
        }
    });
    SparsityReport {
        active_count,
        bound,
        ok: active_count <= bound,
        two_layer,
    }
}

/// A path of maximum bottleneck capacity, found by a Dijkstra-style sweep
/// that settles the widest unsettled node (lowest index on ties) and only
/// replaces a predecessor on strict improvement.
pub fn best_path(network: &Network) -> Result<(Path, Rational)> {
    network.ensure_valid()?;
    let n = network.node_count();
    let (s, d) = (network.source(), network.destination());
    // None stands for "unreached"; the source is unconstrained.
    let mut width: Vec<Option<Rational>> = vec![None; n];
    let mut parent: Vec<Option<NodeId>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut source_reached = true;
    loop {
        let next = if source_reached {
            source_reached = false;
            Some(s)
        } else {
            (0..n)
                .filter(|&v| !settled[v] && width[v].is_some())
                .max_by(|&a, &b| width[a].cmp(&width[b]).then(b.cmp(&a)))
        };
        let Some(u) = next else { break };
        settled[u] = true;
        if u == d {
            break;
        }
        for v in network.successors(u) {
            if settled[v] {
                continue;
            }
            let cap = network.capacity(u, v);
            let w = match &width[u] {
                Some(wu) if u != s => wu.clone().min(cap),
                _ => cap,
            };
            if width[v].as_ref().is_none_or(|cur| w > *cur) {
                width[v] = Some(w);
                parent[v] = Some(u);
            }
        }
    }
    if !settled[d] {
        return Err(Error::NotFound("no source-destination path".into()));
    }
    let mut nodes = vec![d];
    let mut v = d;
    while let Some(u) = parent[v] {
        nodes.push(u);
        v = u;
    }
    nodes.reverse();
    let path = Path::new(nodes, network)?;
    let cap = path.capacity();
    Ok((path, cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn fd(n: usize) -> Network {
        Network::new(n, DuplexMode::FullDuplex)
    }

    fn tightness(x: i64) -> Network {
        fd(2).with_link(0, 1, int(1))
            .with_link(0, 2, int(x))
            .with_link(1, 3, int(x))
            .with_link(2, 3, int(1))
    }

    fn line() -> Network {
        fd(1).with_link(0, 1, int(2)).with_link(1, 2, int(3))
    }

    fn two_layer() -> Network {
        fd(4).with_link(0, 1, int(3))
            .with_link(0, 2, int(2))
            .with_link(1, 3, int(4))
            .with_link(1, 4, int(1))
            .with_link(2, 3, int(2))
            .with_link(2, 4, int(5))
            .with_link(3, 5, int(3))
            .with_link(4, 5, int(2))
    }

    #[test]
    fn enumeration_counts() {
        let d = enumerate_paths(&tightness(10), DEFAULT_MAX_PATHS).unwrap();
        let seqs: Vec<_> = d.iter().map(|p| p.nodes().to_vec()).collect();
        assert_eq!(seqs, vec![vec![0, 1, 3], vec![0, 2, 3]]);
        assert_eq!(enumerate_paths(&line(), DEFAULT_MAX_PATHS).unwrap().len(), 1);
        assert_eq!(enumerate_paths(&two_layer(), DEFAULT_MAX_PATHS).unwrap().len(), 4);
    }

    #[test]
    fn enumeration_cap() {
        assert!(matches!(
            enumerate_paths(&two_layer(), 3),
            Err(Error::SizeLimit { limit: 3, .. })
        ));
        assert_eq!(enumerate_paths(&two_layer(), 4).unwrap().len(), 4);
    }

    #[test]
    fn fractions() {
        let p = Path::new(vec![0, 1, 2], &line()).unwrap();
        assert_eq!(p.capacity(), int(2));
        assert_eq!(activation_fraction(&p, (0, 1)).unwrap(), int(1));
        assert_eq!(activation_fraction(&p, (1, 2)).unwrap(), ratio(2, 3));
        assert!(activation_fraction(&p, (0, 2)).is_err());

        let lop = fd(1).with_link(0, 1, int(1)).with_link(1, 2, int(1000));
        let p = Path::new(vec![0, 1, 2], &lop).unwrap();
        assert_eq!(activation_fraction(&p, (1, 2)).unwrap(), ratio(1, 1000));

        let flat = fd(1).with_link(0, 1, int(7)).with_link(1, 2, int(7));
        let p = Path::new(vec![0, 1, 2], &flat).unwrap();
        assert!(p.links().all(|l| activation_fraction(&p, l).unwrap() == int(1)));
    }

    #[test]
    fn path_program_examples() {
        let s = solve_p1(&tightness(1000), DEFAULT_MAX_PATHS).unwrap();
        assert_eq!(s.utilizations, vec![ratio(1000, 1001), ratio(1000, 1001)]);
        assert_eq!(s.value, ratio(2000, 1001));
        let rep = sparsity_report(&s, &tightness(1000));
        assert_eq!((rep.active_count, rep.bound, rep.ok), (2, 6, true));

        let s = solve_p1(&line(), DEFAULT_MAX_PATHS).unwrap();
        assert_eq!(s.utilizations, vec![int(1)]);
        assert_eq!(s.value, int(2));
        let rep = sparsity_report(&s, &line());
        assert_eq!((rep.active_count, rep.bound), (1, 4));

        let s = solve_p1(&fd(2), DEFAULT_MAX_PATHS).unwrap();
        assert_eq!(s.value, int(0));
        assert!(s.paths.is_empty());
    }

    #[test]
    fn path_program_is_certified_vertex() {
        let net = two_layer();
        let paths = enumerate_paths(&net, DEFAULT_MAX_PATHS).unwrap();
        let lp = path_program(&net, &paths);
        lp.solve().unwrap().certify(&lp).unwrap();
    }

    #[test]
    fn two_layer_detection() {
        let t = detect_two_layer(&two_layer()).unwrap();
        assert_eq!(t.first, BTreeSet::from([1, 2]));
        assert_eq!(t.second, BTreeSet::from([3, 4]));
        assert_eq!(t.relays_per_layer(), 2);
        assert_eq!(detect_two_layer(&tightness(3)), None);
        assert_eq!(detect_two_layer(&two_layer().with_link(0, 5, int(1))), None);
        assert_eq!(detect_two_layer(&two_layer().with_link(3, 4, int(1))), None);
        let rep = sparsity_report(&solve_p1(&two_layer(), 100).unwrap(), &two_layer());
        assert_eq!(rep.two_layer.as_ref().map(|t| t.bound), Some(5));
    }

    #[test]
    fn best_path_examples() {
        let (p, c) = best_path(&tightness(1000)).unwrap();
        assert_eq!(c, int(1));
        assert!(p.nodes() == [0, 1, 3] || p.nodes() == [0, 2, 3]);
        let (_, c) = best_path(&line()).unwrap();
        assert_eq!(c, int(2));
        let dominant = fd(2)
            .with_link(0, 1, int(10))
            .with_link(1, 3, int(10))
            .with_link(0, 2, int(1))
            .with_link(2, 3, int(1));
        let (p, c) = best_path(&dominant).unwrap();
        assert_eq!((p.nodes().to_vec(), c), (vec![0, 1, 3], int(10)));
        assert!(matches!(best_path(&fd(2)), Err(Error::NotFound(_))));
    }

    #[test]
    fn best_path_prefers_wide_detour() {
        let net = fd(2)
            .with_link(0, 3, int(1))
            .with_link(0, 1, int(5))
            .with_link(1, 2, int(4))
            .with_link(2, 3, int(6));
        let (p, c) = best_path(&net).unwrap();
        assert_eq!((p.nodes().to_vec(), c), (vec![0, 1, 2, 3], int(4)));
    }

    #[test]
    fn link_mapping_matches_value() {
        let s = solve_p1(&two_layer(), 100).unwrap();
        let (act, flow) = s.link_activation();
        act.check_budgets().unwrap();
        assert_eq!(flow.rate(), s.value);
        assert!(flow.conservation_violations(4).is_empty());
    }

    #[test]
    fn rejects_half_duplex() {
        let hd = line().with_mode(DuplexMode::HalfDuplex);
        assert!(matches!(solve_p1(&hd, 10), Err(Error::UnsupportedMode(_))));
    }
}
