//! Full-duplex approximate capacity through the link-activation flow
//! program, and the max-flow/min-cut value of a fixed activation.
//!
//! The flow program has one flow variable `F` and one activation variable
//! `λ` per link:
//!
//! ```text
//! maximize   Σ_j F(0→j)
//! subject to F(i→j) <= λ(i→j) · ℓ(i→j)      every link
//!            Σ_out F = Σ_in F                 every relay
//!            Σ_j λ(i→j) <= 1                  every transmitter i
//!            Σ_i λ(i→j) <= 1                  every receiver j
//! ```

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lpsolve::{LinearProgram, VertexSolution};
use crate::model::{DuplexMode, Link, Network, NodeId};
use crate::rational::Rational;

/// Fraction of time each link is active.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinkActivation {
    pub fractions: BTreeMap<Link, Rational>,
}

impl LinkActivation {
    pub fn new(fractions: BTreeMap<Link, Rational>) -> Self {
        LinkActivation { fractions }
    }

    pub fn get(&self, link: Link) -> Rational {
        self.fractions.get(&link).cloned().unwrap_or_else(Rational::zero)
    }

    /// Links with a strictly positive fraction.
    pub fn support(&self) -> impl Iterator<Item = (Link, &Rational)> {
        self.fractions
            .iter()
            .filter(|(_, v)| v.is_positive())
            .map(|(&l, v)| (l, v))
    }

    /// Checks nonnegativity and the per-node transmit and receive budgets,
    /// i.e. that the activation matrix is doubly substochastic.
    pub fn check_budgets(&self) -> Result<()> {
        let mut tx: BTreeMap<NodeId, Rational> = BTreeMap::new();
        let mut rx: BTreeMap<NodeId, Rational> = BTreeMap::new();
        for (&(i, j), v) in &self.fractions {
            if v.is_negative() {
                return Err(Error::InvalidInput(format!("negative activation on link {i}->{j}")));
            }
            *tx.entry(i).or_insert_with(Rational::zero) += v;
            *rx.entry(j).or_insert_with(Rational::zero) += v;
        }
        let one = Rational::one();
        if let Some((i, _)) = tx.iter().find(|(_, s)| **s > one) {
            return Err(Error::InvalidInput(format!("node {i} transmits more than all of the time")));
        }
        if let Some((j, _)) = rx.iter().find(|(_, s)| **s > one) {
            return Err(Error::InvalidInput(format!("node {j} receives more than all of the time")));
        }
        Ok(())
    }
}

/// Flow carried by each link.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinkFlow {
    pub flows: BTreeMap<Link, Rational>,
}

impl LinkFlow {
    pub fn new(flows: BTreeMap<Link, Rational>) -> Self {
        LinkFlow { flows }
    }

    pub fn get(&self, link: Link) -> Rational {
        self.flows.get(&link).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total flow leaving the source.
    pub fn rate(&self) -> Rational {
        self.flows
            .iter()
            .filter(|((i, _), _)| *i == 0)
            .map(|(_, f)| f.clone())
            .sum()
    }

    /// Relays (in `1..=n_relays`) whose inflow differs from their outflow.
    pub fn conservation_violations(&self, n_relays: usize) -> Vec<NodeId> {
        let mut net: BTreeMap<NodeId, Rational> = BTreeMap::new();
        for (&(i, j), f) in &self.flows {
            *net.entry(i).or_insert_with(Rational::zero) += f;
            *net.entry(j).or_insert_with(Rational::zero) -= f;
        }
        net.into_iter()
            .filter(|(v, s)| *v >= 1 && *v <= n_relays && !s.is_zero())
            .map(|(v, _)| v)
            .collect()
    }
}

/// Result of [`fd_capacity`].
#[derive(Debug, Clone, PartialEq)]
pub struct FdCapacity {
    pub value: Rational,
    pub activation: LinkActivation,
    pub flow: LinkFlow,
}

/// The flow program for a network, with the link order of its variables:
/// `F` for `links[k]` is variable `k`, `λ` for `links[k]` is `links.len() + k`.
#[derive(Debug, Clone)]
pub struct FlowProgram {
    pub lp: LinearProgram,
    pub links: Vec<Link>,
}

impl FlowProgram {
    /// Builds the program over the positive links of `network` that lie on
    /// some source-destination walk.
    pub fn build(network: &Network) -> Self {
        let pruned = network.pruned();
        let links: Vec<(Link, Rational)> = pruned.active_links().map(|(l, c)| (l, c.clone())).collect();
        let m = links.len();
        let zero_row = || vec![Rational::zero(); 2 * m];

        let mut objective = zero_row();
        for (k, ((i, _), _)) in links.iter().enumerate() {
            if *i == network.source() {
                objective[k] = Rational::one();
            }
        }
        let mut lp = LinearProgram::new(objective);

        for (k, (_, cap)) in links.iter().enumerate() {
            let mut row = zero_row();
            row[k] = Rational::one();
            row[m + k] = -cap.clone();
            lp.add_le(row, Rational::zero());
        }
        for node in 0..network.node_count() {
            let outgoing: Vec<usize> = (0..m).filter(|&k| links[k].0 .0 == node).collect();
            if !outgoing.is_empty() {
                let mut row = zero_row();
                for k in outgoing {
                    row[m + k] = Rational::one();
                }
                lp.add_le(row, Rational::one());
            }
        }
        for node in 0..network.node_count() {
            let incoming: Vec<usize> = (0..m).filter(|&k| links[k].0 .1 == node).collect();
            if !incoming.is_empty() {
                let mut row = zero_row();
                for k in incoming {
                    row[m + k] = Rational::one();
                }
                lp.add_le(row, Rational::one());
            }
        }
        for relay in 1..=network.n_relays() {
            let mut row = zero_row();
            let mut touched = false;
            for (k, ((i, j), _)) in links.iter().enumerate() {
                if *i == relay {
                    row[k] += Rational::one();
                    touched = true;
                }
                if *j == relay {
                    row[k] -= Rational::one();
                    touched = true;
                }
            }
            if touched {
                lp.add_eq(row, Rational::zero());
            }
        }
        FlowProgram {
            lp,
            links: links.into_iter().map(|(l, _)| l).collect(),
        }
    }

    pub fn decode(&self, sol: &VertexSolution) -> FdCapacity {
        let m = self.links.len();
        let pick = |offset: usize| {
            self.links
                .iter()
                .enumerate()
                .filter(|(k, _)| !sol.values[offset + k].is_zero())
                .map(|(k, &l)| (l, sol.values[offset + k].clone()))
                .collect()
        };
        FdCapacity {
            value: sol.objective_value.clone(),
            flow: LinkFlow::new(pick(0)),
            activation: LinkActivation::new(pick(m)),
        }
    }
}

/// Approximate capacity of a full-duplex network, with an optimal link
/// activation and link flow taken from a vertex of the flow program.
pub fn fd_capacity(network: &Network) -> Result<FdCapacity> {
    network.ensure_valid()?;
    if network.mode() != DuplexMode::FullDuplex {
        return Err(Error::UnsupportedMode(
            "the flow program applies to full-duplex relays only".into(),
        ));
    }
    let program = FlowProgram::build(network);
    let sol = program.lp.solve()?;
    Ok(program.decode(&sol))
}

/// Minimum source-destination cut with link weights `λ · ℓ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCut {
    pub value: Rational,
    /// Source side of the cut; always contains node 0.
    pub source_side: BTreeSet<NodeId>,
    /// A maximum flow achieving `value`.
    pub flow: LinkFlow,
}

/// Computes the minimum cut for a fixed activation by max-flow
/// (shortest augmenting paths) on the weighted graph; the source side is
/// read off the final residual graph.
pub fn min_cut_value(network: &Network, activation: &LinkActivation) -> Result<MinCut> {
    network.ensure_valid()?;
    let n = network.node_count();
    let (s, t) = (network.source(), network.destination());
    let mut residual = vec![vec![Rational::zero(); n]; n];
    let mut weights = Vec::new();
    for ((i, j), cap) in network.active_links() {
        let w = activation.get((i, j)) * cap;
        if w.is_negative() {
            return Err(Error::InvalidInput(format!("negative activation on link {i}->{j}")));
        }
        residual[i][j] += &w;
        weights.push(((i, j), w));
    }
    let mut value = Rational::zero();
    loop {
        let mut parent = vec![None; n];
        let mut queue = VecDeque::from([s]);
        let mut seen = vec![false; n];
        seen[s] = true;
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if !seen[v] && residual[u][v].is_positive() {
                    seen[v] = true;
                    parent[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        if !seen[t] {
            let source_side = (0..n).filter(|&v| seen[v]).collect();
            let flows = weights
                .into_iter()
                .map(|((i, j), w)| ((i, j), w - &residual[i][j]))
                .filter(|(_, f)| f.is_positive())
                .collect();
            return Ok(MinCut {
                value,
                source_side,
                flow: LinkFlow::new(flows),
            });
        }
        let mut bottleneck: Option<Rational> = None;
        let mut v = t;
        while let Some(u) = parent[v] {
            let r = &residual[u][v];
            if bottleneck.as_ref().is_none_or(|b| r < b) {
                bottleneck = Some(r.clone());
            }
            v = u;
        }
        let push = bottleneck.expect("augmenting path has at least one edge");
        let mut v = t;
        while let Some(u) = parent[v] {
            residual[u][v] -= &push;
            residual[v][u] += &push;
            v = u;
        }
        value += push;
    }
}
