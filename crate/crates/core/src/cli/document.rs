//! JSON documents read and written by the command-line tool.
//!
//! Rationals always travel as strings (`"p/q"` or `"p"`), never as JSON
//! numbers.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{self, DuplexMode, Network};
use crate::rational::{self, Rational};
use crate::scheduler::{NetworkState, Schedule};

pub const DEFAULT_EPSILON: &str = "1/1000";

/// Location-tagged problem with an input document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// `"line 3, column 7"` for syntax errors, a field path such as
    /// `"links[2].capacity"` otherwise.
    pub location: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for ParseError {}

impl ParseError {
    fn at(location: impl Into<String>, message: impl Into<String>) -> Self {
        ParseError {
            location: location.into(),
            message: message.into(),
        }
    }

    fn from_json(e: serde_json::Error) -> Self {
        let msg = e.to_string();
        let message = match msg.rfind(" at line ") {
            Some(pos) => msg[..pos].to_string(),
            None => msg,
        };
        ParseError::at(format!("line {}, column {}", e.line(), e.column()), message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkEntry {
    pub from: usize,
    pub to: usize,
    pub capacity: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    pub n_relays: usize,
    pub mode: String,
    #[serde(default)]
    pub links: Vec<LinkEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
}

/// A parsed network plus a record of any decimal capacities that were
/// snapped onto a rational grid.
#[derive(Debug, Clone)]
pub struct LoadedNetwork {
    pub network: Network,
    pub epsilon: Rational,
    /// Indices into `links` whose capacity was given as a decimal.
    pub rationalized: Vec<usize>,
}

impl NetworkDocument {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        serde_json::from_str(text).map_err(ParseError::from_json)
    }

    /// Exact capacities are kept as written. Decimal capacities are
    /// truncated onto the grid for `epsilon` (the override if given, else
    /// the document's own field, else `1/1000`).
    pub fn to_network(&self, epsilon_override: Option<&Rational>) -> Result<LoadedNetwork, ParseError> {
        let mode = match self.mode.as_str() {
            "fd" => DuplexMode::FullDuplex,
            "hd" => DuplexMode::HalfDuplex,
            other => {
                return Err(ParseError::at("mode", format!("expected \"fd\" or \"hd\", got {other:?}")))
            }
        };
        let epsilon = match (epsilon_override, &self.epsilon) {
            (Some(e), _) => e.clone(),
            (None, Some(s)) => {
                rational::parse_exact(s).map_err(|e| ParseError::at("epsilon", e.to_string()))?
            }
            (None, None) => rational::parse_exact(DEFAULT_EPSILON).expect("valid default"),
        };
        let grid = model::rationalization_grid(self.n_relays, &epsilon)
            .map_err(|e| ParseError::at("epsilon", e.to_string()))?;

        let mut network = Network::new(self.n_relays, mode);
        let mut rationalized = Vec::new();
        let mut seen = BTreeSet::new();
        for (k, link) in self.links.iter().enumerate() {
            let (value, decimal) = rational::parse_any(&link.capacity)
                .map_err(|e| ParseError::at(format!("links[{k}].capacity"), e.to_string()))?;
            if !seen.insert((link.from, link.to)) {
                return Err(ParseError::at(
                    format!("links[{k}]"),
                    format!("duplicate link {}->{}", link.from, link.to),
                ));
            }
            let value = if decimal {
                rationalized.push(k);
                model::truncate_to_grid(&value, &grid)
            } else {
                value
            };
            network.set_link(link.from, link.to, value);
        }
        if let Err(violations) = network.validate() {
            let msg = violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            return Err(ParseError::at("links", msg));
        }
        Ok(LoadedNetwork {
            network,
            epsilon,
            rationalized,
        })
    }

    pub fn from_network(network: &Network) -> Self {
        NetworkDocument {
            n_relays: network.n_relays(),
            mode: network.mode().short_name().to_string(),
            links: network
                .links()
                .map(|((from, to), c)| LinkEntry {
                    from,
                    to,
                    capacity: rational::to_string(c),
                })
                .collect(),
            epsilon: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleEntry {
    pub duration: String,
    pub active_links: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ScheduleDocument(pub Vec<ScheduleEntry>);

impl ScheduleDocument {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        serde_json::from_str(text).map_err(ParseError::from_json)
    }

    pub fn from_schedule(schedule: &Schedule) -> Self {
        ScheduleDocument(
            schedule
                .entries()
                .iter()
                .map(|(state, d)| ScheduleEntry {
                    duration: rational::to_string(d),
                    active_links: state.active_links.iter().map(|&(i, j)| [i, j]).collect(),
                })
                .collect(),
        )
    }

    pub fn to_schedule(&self) -> Result<Schedule, ParseError> {
        let mut raw = Vec::with_capacity(self.0.len());
        for (k, entry) in self.0.iter().enumerate() {
            let d = rational::parse_exact(&entry.duration)
                .map_err(|e| ParseError::at(format!("[{k}].duration"), e.to_string()))?;
            let state = NetworkState::new(entry.active_links.iter().map(|&[i, j]| (i, j)));
            raw.push((state, d));
        }
        Schedule::from_entries(raw).map_err(|e| ParseError::at("durations", e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn parses_exact_and_decimal() {
        let doc = NetworkDocument::parse(
            r#"{"n_relays": 1, "mode": "fd", "links": [
                {"from": 0, "to": 1, "capacity": "2"},
                {"from": 1, "to": 2, "capacity": "1.23456"}]}"#,
        )
        .unwrap();
        let loaded = doc.to_network(None).unwrap();
        assert_eq!(loaded.network.capacity(0, 1), int(2));
        assert_eq!(loaded.network.capacity(1, 2), ratio(12345, 10000));
        assert_eq!(loaded.rationalized, vec![1]);
    }

    #[test]
    fn diagnostics() {
        let err = NetworkDocument::parse("{\"n_relays\": 1,\n \"mode\": fd}").unwrap_err();
        assert!(err.location.starts_with("line 2"), "{err}");
        let doc = NetworkDocument::parse(
            r#"{"n_relays": 1, "mode": "fd", "links": [{"from": 0, "to": 1, "capacity": "x"}]}"#,
        )
        .unwrap();
        assert_eq!(doc.to_network(None).unwrap_err().location, "links[0].capacity");
        let doc = NetworkDocument::parse(r#"{"n_relays": 1, "mode": "xd"}"#).unwrap();
        assert_eq!(doc.to_network(None).unwrap_err().location, "mode");
        let doc = NetworkDocument::parse(
            r#"{"n_relays": 1, "mode": "fd", "links": [{"from": 1, "to": 0, "capacity": "1"}]}"#,
        )
        .unwrap();
        assert_eq!(doc.to_network(None).unwrap_err().location, "links");
    }

    #[test]
    fn schedule_round_trip() {
        let s = Schedule::from_entries([
            (NetworkState::new([(0, 1), (1, 2)]), ratio(2, 3)),
            (NetworkState::new([(0, 1)]), ratio(1, 3)),
        ])
        .unwrap();
        let doc = ScheduleDocument::from_schedule(&s);
        let back = ScheduleDocument::parse(&doc.to_json()).unwrap().to_schedule().unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn network_round_trip() {
        let net = Network::new(1, DuplexMode::HalfDuplex)
            .with_link(0, 1, ratio(7, 3))
            .with_link(1, 2, int(5));
        let doc = NetworkDocument::from_network(&net);
        let back = NetworkDocument::parse(&doc.to_json()).unwrap().to_network(None).unwrap();
        assert_eq!(back.network, net);
    }
}
