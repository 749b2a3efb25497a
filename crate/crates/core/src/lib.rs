//! Exact approximate capacity, optimal link schedules and routing
//! guarantees for beam-steered ("1-2-1") relay networks, where every node
//! points a single transmit beam and a single receive beam at a time.
//!
//! Everything is computed in exact rational arithmetic:
//!
//! * [`capacity`] solves the polynomial-size flow program for full-duplex
//!   networks and certifies it with max-flow/min-cut;
//! * [`scheduler`] turns a link activation into time-shared network states
//!   (Birkhoff-von Neumann decomposition, plus the LCM edge-coloring
//!   construction as a cross-check) and replays schedules;
//! * [`paths`] solves the path-utilization program and checks how few
//!   paths an optimal corner point needs;
//! * [`diamond`] specializes to one-layer (diamond) networks in both duplex
//!   modes, including an explicit half-duplex schedule;
//! * [`oracle`] is brute force over all network states for small networks.

pub mod capacity;
pub mod cli;
pub mod diamond;
pub mod error;
pub mod lpsolve;
pub mod matching;
pub mod model;
pub mod oracle;
pub mod paths;
pub mod rational;
pub mod scheduler;

pub use error::{Error, LinkDeficit, Result};
pub use model::{DuplexMode, Link, Network, NodeId};
pub use rational::Rational;
