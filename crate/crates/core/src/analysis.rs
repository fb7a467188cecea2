//! Applications of the circuit view: negative-price prediction, recovery of
//! prices from partial information, and per-congestion impact.

use serde::{Deserialize, Serialize};

use crate::circuit::{solve_circuit, superpose, CircuitSolution, CurrentSource, EquivalentCircuit, Resistor};
use crate::error::{json_error, Error, Result};
use crate::scalar::Scalar;

/// Outcome of the negative-price test on a solved circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct NegativePrices<T> {
    /// Some node has `voltage + offset < 0`.
    pub negative: bool,
    /// `(bus, price)` for every negative-price bus.
    pub witnesses: Vec<(usize, T)>,
    /// Ground is a minimum-voltage node. With a zero offset, negative
    /// prices occur exactly when this is false.
    pub ground_is_minimum: bool,
    pub min_voltage_node: usize,
    pub offset: T,
}

pub fn predict_negative_prices<T: Scalar>(c: &EquivalentCircuit<T>, s: &CircuitSolution<T>) -> NegativePrices<T> {
    predict_negative_prices_with(c, s, T::tol(1e-6))
}

/// Values within `tol` of zero count as zero on both tests.
pub fn predict_negative_prices_with<T: Scalar>(
    c: &EquivalentCircuit<T>,
    s: &CircuitSolution<T>,
    tol: T,
) -> NegativePrices<T> {
    let offset = c.offset();
    let witnesses: Vec<(usize, T)> = s
        .voltages
        .iter()
        .enumerate()
        .map(|(k, &v)| (k, v + offset))
        .filter(|&(_, price)| price < -tol)
        .collect();
    let min_voltage_node = s
        .voltages
        .iter()
        .enumerate()
        .fold(0, |best, (k, &v)| if v < s.voltages[best] { k } else { best });
    NegativePrices {
        negative: !witnesses.is_empty(),
        witnesses,
        ground_is_minimum: s.voltages.iter().all(|&v| v >= -tol),
        min_voltage_node,
        offset,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfoLine<T> {
    pub from: usize,
    pub to: usize,
    pub susceptance: T,
}

/// Source on a congested line, driving `mu` from `from` to `to` (the higher-price end).
#[derive(Debug, Clone, PartialEq)]
pub struct InfoSource<T> {
    pub from: usize,
    pub to: usize,
    pub mu: T,
}

/// What is known without the OPF: topology, susceptances, congestion, and
/// optionally where the cheapest marginal injector sits and its price.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitedInfo<T> {
    pub nodes: usize,
    pub lines: Vec<InfoLine<T>>,
    pub sources: Vec<InfoSource<T>>,
    pub ground: Option<(usize, T)>,
}

impl<T: Scalar> LimitedInfo<T> {
    pub fn new(lines: Vec<InfoLine<T>>, sources: Vec<InfoSource<T>>, ground: Option<(usize, T)>) -> Result<Self> {
        let nodes = lines.iter().map(|l| l.from.max(l.to) + 1).max().unwrap_or(0);
        for (k, s) in sources.iter().enumerate() {
            if !(s.mu.is_finite() && s.mu > T::zero()) {
                return Err(Error::InvalidNetwork(format!("source {k}: mu must be positive")));
            }
            if !lines.iter().any(|l| (l.from, l.to) == (s.from, s.to) || (l.from, l.to) == (s.to, s.from)) {
                return Err(Error::InvalidNetwork(format!("source {k}: no line between {} and {}", s.from, s.to)));
            }
        }
        if let Some((g, _)) = ground {
            if g >= nodes {
                return Err(Error::InvalidNetwork(format!("ground bus {g} out of range")));
            }
        }
        Ok(LimitedInfo { nodes, lines, sources, ground })
    }

    /// The circuit these facts determine; ground defaults to node 0 with no offset.
    pub fn circuit(&self) -> Result<EquivalentCircuit<T>> {
        let resistors: Vec<Resistor<T>> = self
            .lines
            .iter()
            .map(|l| Resistor { from: l.from, to: l.to, ohms: T::one() / l.susceptance })
            .collect();
        let sources = self
            .sources
            .iter()
            .map(|s| {
                let resistor = self
                    .lines
                    .iter()
                    .position(|l| (l.from, l.to) == (s.from, s.to) || (l.from, l.to) == (s.to, s.from))
                    .expect("checked in LimitedInfo::new");
                CurrentSource { resistor, from: s.from, to: s.to, amps: s.mu }
            })
            .collect();
        let (ground, offset) = self.ground.unwrap_or((0, T::zero()));
        EquivalentCircuit::new(self.nodes, resistors, sources, ground, offset)
    }
}

/// Pairwise price differences `λ_i − λ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceDifferences<T> {
    potentials: Vec<T>,
}

impl<T: Scalar> PriceDifferences<T> {
    pub fn len(&self) -> usize {
        self.potentials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.potentials.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.potentials[i] - self.potentials[j]
    }

    pub fn matrix(&self) -> Vec<Vec<T>> {
        (0..self.len()).map(|i| (0..self.len()).map(|j| self.get(i, j)).collect()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RecoveredPrices<T> {
    /// Ground and offset known: the LMP at every bus.
    Absolute(Vec<T>),
    /// Ground unknown: only differences are determined.
    Differences(PriceDifferences<T>),
}

pub fn recover_lmps<T: Scalar>(info: &LimitedInfo<T>) -> Result<RecoveredPrices<T>> {
    let circuit = info.circuit()?;
    let solution = solve_circuit(&circuit)?;
    Ok(match info.ground {
        Some((_, offset)) => RecoveredPrices::Absolute(solution.prices(offset)),
        None => RecoveredPrices::Differences(PriceDifferences { potentials: solution.voltages }),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SourceImpact<T> {
    pub source: usize,
    pub from: usize,
    pub to: usize,
    pub amps: T,
    /// Node voltages with this source alone.
    pub contribution: Vec<T>,
    pub min: T,
    pub max: T,
    pub negative_buses: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CongestionImpact<T> {
    pub sources: Vec<SourceImpact<T>>,
    pub total: Vec<T>,
}

pub fn congestion_impact<T: Scalar>(c: &EquivalentCircuit<T>) -> Result<CongestionImpact<T>> {
    let s = superpose(c)?;
    let parts = s.per_source.expect("superpose fills per-source voltages");
    let tol = T::tol(1e-9);
    let sources = c
        .sources()
        .iter()
        .zip(parts)
        .enumerate()
        .map(|(k, (src, contribution))| {
            let min = contribution.iter().copied().fold(T::infinity(), T::min);
            let max = contribution.iter().copied().fold(T::neg_infinity(), T::max);
            let negative_buses = (0..contribution.len()).filter(|&i| contribution[i] < -tol).collect();
            SourceImpact { source: k, from: src.from, to: src.to, amps: src.amps, contribution, min, max, negative_buses }
        })
        .collect();
    Ok(CongestionImpact { sources, total: s.voltages })
}

/// JSON image of [`LimitedInfo`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitedInfoFile {
    pub topology: TopologyRecord,
    pub sources: Vec<SourceRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyRecord {
    pub lines: Vec<TopologyLine>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyLine {
    pub from: usize,
    pub to: usize,
    pub susceptance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceRecord {
    pub from: usize,
    pub to: usize,
    pub mu: f64,
}

impl LimitedInfoFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(json_error)
    }

    pub fn into_info<T: Scalar>(self) -> Result<LimitedInfo<T>> {
        let ground = match (self.ground, self.offset) {
            (Some(g), Some(o)) => Some((g, T::of(o))),
            (None, None) => None,
            _ => return Err(Error::Parse("`ground` and `offset` must be given together".into())),
        };
        LimitedInfo::new(
            self.topology
                .lines
                .into_iter()
                .map(|l| InfoLine { from: l.from, to: l.to, susceptance: T::of(l.susceptance) })
                .collect(),
            self.sources.into_iter().map(|s| InfoSource { from: s.from, to: s.to, mu: T::of(s.mu) }).collect(),
            ground,
        )
    }
}
