//! Serializable reports with stable number formatting.
//!
//! Every float is rounded to 9 significant digits (ties to even on the exact
//! binary value) before serialization, so outputs are byte-stable.

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::analysis::{CongestionImpact, NegativePrices, RecoveredPrices};
use crate::circuit::{kcl_balances, CircuitSolution, EquivalentCircuit, LoopSum, VoltageSourceView};
use crate::dcopf::{CheckReport, DcopfSolution};
use crate::network::Network;
use crate::scalar::Scalar;

/// Rounds to 9 significant digits; `-0` becomes `0`.
pub fn round9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Human-readable number: 9 significant digits, shortest form, scientific
/// notation outside `[1e-6, 1e15)`.
pub fn fmt_num(x: f64) -> String {
    let x = round9(x);
    if x == 0.0 || (1e-6..1e15).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn r<T: Scalar>(x: T) -> f64 {
    round9(x.as_f64())
}

/// Rounds a vector, zeroing entries below `1e-12` of its largest magnitude (at least 1).
fn rv<T: Scalar>(xs: &[T]) -> Vec<f64> {
    let scale = xs.iter().fold(1.0f64, |m, x| m.max(x.as_f64().abs()));
    xs.iter().map(|&x| if x.as_f64().abs() < 1e-12 * scale { 0.0 } else { r(x) }).collect()
}

/// Per-bus values serialized as an object keyed by bus id, in bus order.
#[derive(Debug, Clone, PartialEq)]
pub struct BusMap(pub Vec<f64>);

impl Serialize for BusMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0.iter().enumerate() {
            map.serialize_entry(&k.to_string(), v)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MuRecord {
    pub from: usize,
    pub to: usize,
    pub value: f64,
    pub mw_basis: f64,
    pub flow: f64,
    pub limit: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GammaRecord {
    pub injector: usize,
    pub bus: usize,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionReport {
    pub lmp: BusMap,
    pub mu: Vec<MuRecord>,
    pub gamma: Vec<GammaRecord>,
    pub p: Vec<f64>,
    pub theta: Vec<f64>,
    pub objective: f64,
    pub marginal: Vec<usize>,
    pub degenerate: bool,
}

impl SolutionReport {
    pub fn new<T: Scalar>(net: &Network<T>, sol: &DcopfSolution<T>) -> Self {
        SolutionReport {
            lmp: BusMap(rv(&sol.lmp)),
            mu: sol
                .congestion
                .iter()
                .map(|c| {
                    let line = &net.lines()[c.line];
                    MuRecord {
                        from: line.from,
                        to: line.to,
                        value: r(c.mu),
                        mw_basis: r(c.mw_basis),
                        flow: r(c.flow),
                        limit: r(c.limit),
                    }
                })
                .collect(),
            gamma: net
                .injectors()
                .iter()
                .enumerate()
                .map(|(k, inj)| GammaRecord {
                    injector: k,
                    bus: inj.bus,
                    lower: r(sol.limit_duals[2 * k]),
                    upper: r(sol.limit_duals[2 * k + 1]),
                })
                .collect(),
            p: rv(&sol.injections),
            theta: rv(&sol.angles),
            objective: r(sol.objective),
            marginal: sol.marginal.iter().map(|&k| net.injectors()[k].bus).collect(),
            degenerate: sol.degenerate,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ResistorRecord {
    pub from: usize,
    pub to: usize,
    pub ohms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurrentSourceRecord {
    pub from: usize,
    pub to: usize,
    pub amps: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VoltageSourceRecord {
    pub from: usize,
    pub to: usize,
    pub volts: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CircuitReport {
    pub nodes: Vec<usize>,
    pub ground: usize,
    pub offset: f64,
    pub resistors: Vec<ResistorRecord>,
    pub current_sources: Vec<CurrentSourceRecord>,
    pub voltage_source_view: Vec<VoltageSourceRecord>,
    /// Tree network: valid circuit, but outside the meshed setting of the price analogy.
    pub radial: bool,
}

impl CircuitReport {
    pub fn new<T: Scalar>(c: &EquivalentCircuit<T>, view: &VoltageSourceView<T>) -> Self {
        CircuitReport {
            nodes: (0..c.nodes()).collect(),
            ground: c.ground(),
            offset: r(c.offset()),
            resistors: c
                .resistors()
                .iter()
                .map(|x| ResistorRecord { from: x.from, to: x.to, ohms: r(x.ohms) })
                .collect(),
            current_sources: c
                .sources()
                .iter()
                .map(|s| CurrentSourceRecord { from: s.from, to: s.to, amps: r(s.amps) })
                .collect(),
            voltage_source_view: view
                .sources
                .iter()
                .map(|v| VoltageSourceRecord { from: v.from, to: v.to, volts: r(v.volts) })
                .collect(),
            radial: c.is_radial(),
        }
    }
}

/// One element per line: `R<k> n1 n2 <ohms>`, `I<k> n1 n2 <amps>`, and with
/// `voltage_sources`, `V<k> n+ n- <volts>` for the series form. A current
/// source `I<k> a b` delivers its current into node `b`.
pub fn netlist<T: Scalar>(c: &EquivalentCircuit<T>, view: Option<&VoltageSourceView<T>>) -> String {
    let mut out = format!("* equivalent circuit: {} nodes, ground {}, offset {}\n", c.nodes(), c.ground(), fmt_num(c.offset().as_f64()));
    match view {
        None => {
            for (k, x) in c.resistors().iter().enumerate() {
                out.push_str(&format!("R{k} {} {} {}\n", x.from, x.to, fmt_num(x.ohms.as_f64())));
            }
            for (k, s) in c.sources().iter().enumerate() {
                out.push_str(&format!("I{k} {} {} {}\n", s.from, s.to, fmt_num(s.amps.as_f64())));
            }
        }
        Some(view) => {
            // a converted branch runs from -R- m<k> -V- to
            for (k, x) in c.resistors().iter().enumerate() {
                match view.sources.iter().position(|v| v.resistor == k) {
                    None => out.push_str(&format!("R{k} {} {} {}\n", x.from, x.to, fmt_num(x.ohms.as_f64()))),
                    Some(j) => {
                        let v = &view.sources[j];
                        out.push_str(&format!("R{k} {} m{j} {}\n", v.from, fmt_num(v.series_ohms.as_f64())));
                    }
                }
            }
            for (j, v) in view.sources.iter().enumerate() {
                out.push_str(&format!("V{j} {} m{j} {}\n", v.to, fmt_num(v.volts.as_f64())));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualRecord {
    pub block: &'static str,
    pub description: &'static str,
    pub norm: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KclRecord {
    pub node: usize,
    pub inflows: Vec<f64>,
    pub outflows: Vec<f64>,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KvlRecord {
    pub nodes: Vec<usize>,
    pub drops: Vec<f64>,
    pub sum: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckJson {
    pub tolerance: f64,
    pub residuals: Vec<ResidualRecord>,
    pub duality_gap: f64,
    pub gap_pass: bool,
    /// Empty when the solve has no congestion (no circuit exists).
    pub kcl: Vec<KclRecord>,
    pub kvl: Vec<KvlRecord>,
    pub all_pass: bool,
}

impl CheckJson {
    pub fn new<T: Scalar>(
        report: &CheckReport<T>,
        circuit: Option<(&EquivalentCircuit<T>, &CircuitSolution<T>)>,
        loops: &[LoopSum<T>],
        tol: T,
    ) -> Self {
        let kcl: Vec<KclRecord> = circuit
            .map(|(c, s)| {
                kcl_balances(c, s)
                    .into_iter()
                    .map(|b| KclRecord {
                        node: b.node,
                        inflows: rv(&b.inflows),
                        outflows: rv(&b.outflows),
                        residual: r(b.residual),
                        pass: b.residual.abs() <= tol,
                    })
                    .collect()
            })
            .unwrap_or_default();
        let kvl: Vec<KvlRecord> = loops
            .iter()
            .map(|l| KvlRecord { nodes: l.nodes.clone(), drops: rv(&l.drops), sum: r(l.sum), pass: l.sum.abs() <= tol })
            .collect();
        let all_pass = report.all_pass() && kcl.iter().all(|k| k.pass) && kvl.iter().all(|k| k.pass);
        CheckJson {
            tolerance: r(report.tolerance),
            residuals: report
                .blocks
                .iter()
                .map(|b| ResidualRecord { block: b.label, description: b.description, norm: r(b.norm), pass: b.pass })
                .collect(),
            duality_gap: r(report.duality_gap),
            gap_pass: report.gap_pass,
            kcl,
            kvl,
            all_pass,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SourceImpactRecord {
    pub from: usize,
    pub to: usize,
    pub amps: f64,
    pub contribution: Vec<f64>,
    pub min: f64,
    pub max: f64,
    pub negative_buses: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ImpactReport {
    pub ground: usize,
    pub offset: f64,
    pub sources: Vec<SourceImpactRecord>,
    pub total: Vec<f64>,
}

impl ImpactReport {
    pub fn new<T: Scalar>(c: &EquivalentCircuit<T>, impact: &CongestionImpact<T>) -> Self {
        ImpactReport {
            ground: c.ground(),
            offset: r(c.offset()),
            sources: impact
                .sources
                .iter()
                .map(|s| SourceImpactRecord {
                    from: s.from,
                    to: s.to,
                    amps: r(s.amps),
                    contribution: rv(&s.contribution),
                    min: r(s.min),
                    max: r(s.max),
                    negative_buses: s.negative_buses.clone(),
                })
                .collect(),
            total: rv(&impact.total),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessRecord {
    pub bus: usize,
    pub lmp: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NegativeReport {
    pub negative: bool,
    pub witnesses: Vec<WitnessRecord>,
    pub ground: usize,
    pub offset: f64,
    pub ground_is_minimum: bool,
    pub min_voltage_node: usize,
}

impl NegativeReport {
    pub fn new<T: Scalar>(c: &EquivalentCircuit<T>, verdict: &NegativePrices<T>) -> Self {
        NegativeReport {
            negative: verdict.negative,
            witnesses: verdict.witnesses.iter().map(|&(bus, lmp)| WitnessRecord { bus, lmp: r(lmp) }).collect(),
            ground: c.ground(),
            offset: r(verdict.offset),
            ground_is_minimum: verdict.ground_is_minimum,
            min_voltage_node: verdict.min_voltage_node,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum RecoverReport {
    Absolute { lmp: BusMap },
    Differences { differences: Vec<Vec<f64>> },
}

impl RecoverReport {
    pub fn new<T: Scalar>(recovered: &RecoveredPrices<T>) -> Self {
        match recovered {
            RecoveredPrices::Absolute(lmp) => RecoverReport::Absolute { lmp: BusMap(rv(lmp)) },
            RecoveredPrices::Differences(d) => {
                RecoverReport::Differences { differences: d.matrix().iter().map(|row| rv(row)).collect() }
            }
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<S: Serialize>(value: &S) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}
