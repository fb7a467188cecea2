//! Canonical JSON network file.

use serde::{Deserialize, Serialize};

use super::{Bus, Injector, InjectorKind, Line, Network};
use crate::error::{json_error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BusRecord {
    pub id: usize,
    pub demand: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineRecord {
    pub from: usize,
    pub to: usize,
    pub susceptance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flow_limit: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindRecord {
    Generator,
    Load,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InjectorRecord {
    pub bus: usize,
    pub kind: KindRecord,
    pub cost: f64,
    pub p_min: f64,
    pub p_max: f64,
}

/// On-disk image of a [`Network`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub buses: Vec<BusRecord>,
    pub lines: Vec<LineRecord>,
    pub injectors: Vec<InjectorRecord>,
}

impl NetworkFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("network file serializes");
        s.push('\n');
        s
    }

    /// Validates and converts into a [`Network`]. Buses may appear in any order.
    pub fn into_network<T: Scalar>(self) -> Result<Network<T>> {
        let mut buses = self.buses;
        buses.sort_by_key(|b| b.id);
        let buses = buses.into_iter().map(|b| Bus { id: b.id, fixed_demand: T::of(b.demand) }).collect();
        let lines = self
            .lines
            .into_iter()
            .map(|l| Line {
                from: l.from,
                to: l.to,
                susceptance: T::of(l.susceptance),
                flow_limit: l.flow_limit.map(T::of),
            })
            .collect();
        let injectors = self
            .injectors
            .into_iter()
            .map(|i| Injector {
                bus: i.bus,
                kind: match i.kind {
                    KindRecord::Generator => InjectorKind::Generator,
                    KindRecord::Load => InjectorKind::Load,
                },
                cost: T::of(i.cost),
                p_min: T::of(i.p_min),
                p_max: T::of(i.p_max),
            })
            .collect();
        Network::new(buses, lines, injectors)
    }
}

impl<T: Scalar> From<&Network<T>> for NetworkFile {
    fn from(net: &Network<T>) -> Self {
        NetworkFile {
            buses: net.buses().iter().map(|b| BusRecord { id: b.id, demand: b.fixed_demand.as_f64() }).collect(),
            lines: net
                .lines()
                .iter()
                .map(|l| LineRecord {
                    from: l.from,
                    to: l.to,
                    susceptance: l.susceptance.as_f64(),
                    flow_limit: l.flow_limit.map(Scalar::as_f64),
                })
                .collect(),
            injectors: net
                .injectors()
                .iter()
                .map(|i| InjectorRecord {
                    bus: i.bus,
                    kind: match i.kind {
                        InjectorKind::Generator => KindRecord::Generator,
                        InjectorKind::Load => KindRecord::Load,
                    },
                    cost: i.cost.as_f64(),
                    p_min: i.p_min.as_f64(),
                    p_max: i.p_max.as_f64(),
                })
                .collect(),
        }
    }
}

/// Parses and validates a network from JSON text.
pub fn parse_network<T: Scalar>(text: &str) -> Result<Network<T>> {
    NetworkFile::from_json(text)?.into_network()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    const TWO_BUS: &str = r#"{
        "buses": [{"id": 1, "demand": 5.0}, {"id": 0, "demand": 0}],
        "lines": [{"from": 0, "to": 1, "susceptance": 2.5, "flow_limit": 3}],
        "injectors": [{"bus": 0, "kind": "generator", "cost": 12, "p_min": 0, "p_max": 10},
                      {"bus": 1, "kind": "load", "cost": 30, "p_min": 0, "p_max": 2}]
    }"#;

    #[test]
    fn parses_and_sorts_buses() {
        let net: Network<f64> = parse_network(TWO_BUS).unwrap();
        assert_eq!(net.buses()[1].fixed_demand, 5.0);
        assert_eq!(net.lines()[0].flow_limit, Some(3.0));
        assert_eq!(net.injectors()[1].kind, InjectorKind::Load);
    }

    #[test]
    fn rejects_unknown_keys_with_position() {
        let text = r#"{"buses": [], "lines": [], "injectors": [], "extra": 1}"#;
        match NetworkFile::from_json(text) {
            Err(Error::Parse(msg)) => assert!(msg.starts_with("line 1 column"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        let bad_kind = TWO_BUS.replace("\"load\"", "\"battery\"");
        assert!(NetworkFile::from_json(&bad_kind).is_err());
    }

    #[test]
    fn rejects_gap_in_bus_ids() {
        let text = TWO_BUS.replace("\"id\": 1", "\"id\": 2");
        assert!(matches!(parse_network::<f64>(&text), Err(Error::InvalidNetwork(_))));
    }

    #[test]
    fn file_round_trip() {
        let net: Network<f64> = parse_network(TWO_BUS).unwrap();
        let text = NetworkFile::from(&net).to_json();
        assert_eq!(parse_network::<f64>(&text).unwrap(), net);
    }
}
