//! Plain-text renderings of the reports.

use std::fmt::Write;

use lmpcirc_core::analysis::{CongestionImpact, NegativePrices, RecoveredPrices};
use lmpcirc_core::circuit::{kcl_balances, CircuitSolution, EquivalentCircuit, LoopSum};
use lmpcirc_core::dcopf::{CheckReport, DcopfSolution};
use lmpcirc_core::network::{InjectorKind, Network};
use lmpcirc_core::report::{fmt_num, CheckJson};

/// Prices and currents for display; residue below 1e-9 prints as 0.
pub fn num(x: f64) -> String {
    fmt_num(if x.abs() < 1e-9 { 0.0 } else { x })
}

/// Parenthesized when negative so a difference reads `(20-(-60))`.
fn signed(x: f64) -> String {
    let s = num(x);
    if s.starts_with('-') {
        format!("({s})")
    } else {
        s
    }
}

fn mark(pass: bool) -> &'static str {
    if pass {
        "✓"
    } else {
        "✗"
    }
}

fn sci(x: f64) -> String {
    format!("{:.2e}", x + 0.0)
}

fn join(values: &[f64]) -> String {
    if values.is_empty() {
        "0".to_string()
    } else {
        values.iter().map(|&v| num(v)).collect::<Vec<_>>().join(" + ")
    }
}

pub fn solution(net: &Network<f64>, sol: &DcopfSolution<f64>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "objective {}", num(sol.objective));
    if sol.degenerate {
        let _ = writeln!(out, "note: degenerate vertex, duals may not be unique");
    }
    let marginal_buses: Vec<usize> = sol.marginal.iter().map(|&k| net.injectors()[k].bus).collect();
    let _ = writeln!(out, "\n{:>5}  {:>14}  marginal", "bus", "lmp");
    for (bus, &lmp) in sol.lmp.iter().enumerate() {
        let flag = if marginal_buses.contains(&bus) { "*" } else { "" };
        let _ = writeln!(out, "{bus:>5}  {:>14}  {flag}", num(lmp));
    }
    let _ = writeln!(out, "\n{:>5}  {:>9}  {:>6}  {:>14}  {:>14}", "inj", "kind", "bus", "cost", "p");
    for (k, inj) in net.injectors().iter().enumerate() {
        let kind = match inj.kind {
            InjectorKind::Generator => "generator",
            InjectorKind::Load => "load",
        };
        let _ = writeln!(out, "{k:>5}  {kind:>9}  {:>6}  {:>14}  {:>14}", inj.bus, num(inj.cost), num(sol.injections[k]));
    }
    let _ = writeln!(out, "\n{:>9}  {:>14}  {:>14}  {:>14}", "line", "flow", "limit", "mu");
    let flows = lmpcirc_core::network::line_flows(net, &sol.angles);
    for (k, line) in net.lines().iter().enumerate() {
        let name = format!("{}-{}", line.from, line.to);
        let (limit, mu) = match sol.congestion.iter().find(|c| c.line == k) {
            Some(c) => (num(c.limit), num(c.mu)),
            None => ("-".to_string(), "-".to_string()),
        };
        let _ = writeln!(out, "{name:>9}  {:>14}  {limit:>14}  {mu:>14}", num(flows[k]));
    }
    out
}

pub fn check(
    report: &CheckReport<f64>,
    circuit: Option<(&EquivalentCircuit<f64>, &CircuitSolution<f64>)>,
    summary: &CheckJson,
    loops: &[LoopSum<f64>],
    lmp: &[f64],
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "optimality conditions (tolerance {})", fmt_num(report.tolerance));
    for b in &report.blocks {
        let _ = writeln!(out, "  {:<26} {:>10} {}  {}", b.label, sci(b.norm), mark(b.pass), b.description);
    }
    let _ = writeln!(out, "  {:<26} {:>10} {}", "duality_gap", sci(report.duality_gap), mark(report.gap_pass));

    match circuit {
        Some((c, s)) => {
            let _ = writeln!(out, "\nKCL (ground bus {}, offset {})", c.ground(), num(c.offset()));
            for (b, rec) in kcl_balances(c, s).iter().zip(&summary.kcl) {
                let _ = writeln!(out, "node {}: {} = {} {}", b.node, join(&b.inflows), join(&b.outflows), mark(rec.pass));
            }
        }
        None => {
            let _ = writeln!(out, "\nKCL: no congested line, no circuit to check (prices are uniform)");
        }
    }

    if loops.is_empty() {
        let _ = writeln!(out, "\nKVL: no cycles (radial network)");
    } else {
        let _ = writeln!(out, "\nKVL");
        for (l, rec) in loops.iter().zip(&summary.kvl) {
            let walk: Vec<String> = l.nodes.iter().map(|n| n.to_string()).collect();
            let terms: Vec<String> = (0..l.nodes.len())
                .map(|k| {
                    let (a, b) = (l.nodes[k], l.nodes[(k + 1) % l.nodes.len()]);
                    format!("({}-{})", num(lmp[a]), signed(lmp[b]))
                })
                .collect();
            let _ = writeln!(out, "loop {}: {} = {} {}", walk.join("-"), terms.join(" + "), num(l.sum), mark(rec.pass));
        }
    }
    let _ = writeln!(out, "\n{}", if summary.all_pass { "all checks passed" } else { "CHECK FAILED" });
    out
}

pub fn superpose(c: &EquivalentCircuit<f64>, impact: &CongestionImpact<f64>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ground bus {}, offset {}", c.ground(), num(c.offset()));
    let heads: Vec<String> = impact.sources.iter().map(|s| format!("{}->{} {}", s.from, s.to, num(s.amps))).collect();
    let _ = write!(out, "{:>5}", "bus");
    for h in &heads {
        let _ = write!(out, "  {h:>16}");
    }
    let _ = writeln!(out, "  {:>14}  {:>14}", "total", "lmp");
    for bus in 0..c.nodes() {
        let _ = write!(out, "{bus:>5}");
        for s in &impact.sources {
            let _ = write!(out, "  {:>16}", num(s.contribution[bus]));
        }
        let total = impact.total[bus];
        let _ = writeln!(out, "  {:>14}  {:>14}", num(total), num(total + c.offset()));
    }
    for s in &impact.sources {
        if !s.negative_buses.is_empty() {
            let buses: Vec<String> = s.negative_buses.iter().map(|b| b.to_string()).collect();
            let _ = writeln!(
                out,
                "source {}->{} alone lowers {} of {} buses below ground: {}",
                s.from,
                s.to,
                s.negative_buses.len(),
                c.nodes(),
                buses.join(", ")
            );
        }
    }
    out
}

pub fn negative(c: &EquivalentCircuit<f64>, verdict: &NegativePrices<f64>) -> String {
    let mut out = String::new();
    if verdict.negative {
        let w: Vec<String> = verdict.witnesses.iter().map(|&(bus, lmp)| format!("bus {bus}, λ={}", num(lmp))).collect();
        let _ = writeln!(out, "negative prices: YES ({})", w.join("; "));
    } else {
        let _ = writeln!(out, "negative prices: NO");
    }
    let _ = writeln!(
        out,
        "ground (cheapest marginal injector) at bus {}, offset {}; lowest-voltage node {}{}",
        c.ground(),
        num(verdict.offset),
        verdict.min_voltage_node,
        if verdict.ground_is_minimum { " (ground is the minimum)" } else { "" }
    );
    out
}

pub fn recovered(r: &RecoveredPrices<f64>) -> String {
    let mut out = String::new();
    match r {
        RecoveredPrices::Absolute(lmp) => {
            let _ = writeln!(out, "{:>5}  {:>14}", "bus", "lmp");
            for (bus, &v) in lmp.iter().enumerate() {
                let _ = writeln!(out, "{bus:>5}  {:>14}", num(v));
            }
        }
        RecoveredPrices::Differences(d) => {
            let _ = writeln!(out, "no ground given: only price differences λ_i - λ_j are determined");
            let _ = write!(out, "{:>5}", "i\\j");
            for j in 0..d.len() {
                let _ = write!(out, "  {j:>12}");
            }
            let _ = writeln!(out);
            for (i, row) in d.matrix().iter().enumerate() {
                let _ = write!(out, "{i:>5}");
                for &v in row {
                    let _ = write!(out, "  {:>12}", num(v));
                }
                let _ = writeln!(out);
            }
        }
    }
    out
}
