//! The equivalent DC circuit of an OPF dual solution.
//!
//! Every line becomes a resistor of `1/b` ohms, every binding line limit
//! becomes a current source of `μ` amps in parallel with that line's
//! resistor, ground sits at the bus of the cheapest marginal injector, and
//! node voltages plus the ground's marginal price (the offset) are the LMPs.
//!
//! A source drives its current from `from` to `to`: it withdraws `amps` at
//! `from` and injects them at `to`, the importing end of the congested line.

use crate::dcopf::{cheapest_marginal, DcopfSolution};
use crate::error::{Error, Result};
use crate::graph::Adjacency;
use crate::linalg::{Lu, Matrix};
use crate::network::{laplacian, Network};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Resistor<T> {
    pub from: usize,
    pub to: usize,
    pub ohms: T,
}

impl<T: Scalar> Resistor<T> {
    pub fn conductance(&self) -> T {
        T::one() / self.ohms
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurrentSource<T> {
    /// Resistor this source sits in parallel with.
    pub resistor: usize,
    pub from: usize,
    pub to: usize,
    pub amps: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalentCircuit<T> {
    nodes: usize,
    resistors: Vec<Resistor<T>>,
    sources: Vec<CurrentSource<T>>,
    ground: usize,
    offset: T,
}

impl<T: Scalar> EquivalentCircuit<T> {
    pub fn new(
        nodes: usize,
        resistors: Vec<Resistor<T>>,
        sources: Vec<CurrentSource<T>>,
        ground: usize,
        offset: T,
    ) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidNetwork(msg));
        if ground >= nodes {
            return invalid(format!("ground node {ground} out of range"));
        }
        for (k, r) in resistors.iter().enumerate() {
            if r.from >= nodes || r.to >= nodes || r.from == r.to {
                return invalid(format!("resistor {k}: bad endpoints {}-{}", r.from, r.to));
            }
            if !(r.ohms.is_finite() && r.ohms > T::zero()) {
                return invalid(format!("resistor {k}: resistance must be positive"));
            }
        }
        if sources.is_empty() {
            return Err(Error::NoCongestion);
        }
        let mut used = vec![false; resistors.len()];
        for (k, s) in sources.iter().enumerate() {
            let Some(r) = resistors.get(s.resistor) else {
                return invalid(format!("source {k}: resistor {} does not exist", s.resistor));
            };
            let same = (r.from, r.to) == (s.from, s.to) || (r.from, r.to) == (s.to, s.from);
            if !same {
                return invalid(format!("source {k}: not parallel to resistor {}", s.resistor));
            }
            if std::mem::replace(&mut used[s.resistor], true) {
                return invalid(format!("source {k}: resistor {} already has a source", s.resistor));
            }
            if !(s.amps.is_finite() && s.amps > T::zero()) {
                return invalid(format!("source {k}: magnitude must be positive"));
            }
        }
        let components = Adjacency::new(nodes, resistors.iter().map(|r| (r.from, r.to))).components();
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        Ok(EquivalentCircuit { nodes, resistors, sources, ground, offset })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn resistors(&self) -> &[Resistor<T>] {
        &self.resistors
    }

    pub fn sources(&self) -> &[CurrentSource<T>] {
        &self.sources
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    /// Price re-added to node voltages to recover LMPs.
    pub fn offset(&self) -> T {
        self.offset
    }

    /// A tree circuit; conversion is allowed but lies outside the meshed-network setting.
    pub fn is_radial(&self) -> bool {
        self.resistors.len() + 1 == self.nodes
    }

    pub fn conductance_matrix(&self) -> Matrix<T> {
        laplacian(self.nodes, self.resistors.iter().map(|r| (r.from, r.to, r.conductance())))
    }

    /// Net current injected at every node by the given sources.
    pub fn injections<'a>(&self, sources: impl IntoIterator<Item = &'a CurrentSource<T>>) -> Vec<T> {
        let mut inj = vec![T::zero(); self.nodes];
        for s in sources {
            inj[s.from] = inj[s.from] - s.amps;
            inj[s.to] = inj[s.to] + s.amps;
        }
        inj
    }

    fn reduced_factorization(&self) -> Result<Lu<T>> {
        Lu::new(&self.conductance_matrix().without(self.ground), T::tol(1e-12))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitSolution<T> {
    /// Volts per node; the ground node is exactly zero.
    pub voltages: Vec<T>,
    /// Amps per resistor, positive `from → to`.
    pub branch_currents: Vec<T>,
    /// Node voltages with each source acting alone, one vector per source.
    pub per_source: Option<Vec<Vec<T>>>,
}

impl<T: Scalar> CircuitSolution<T> {
    /// Voltages shifted by the circuit offset.
    pub fn prices(&self, offset: T) -> Vec<T> {
        self.voltages.iter().map(|&v| v + offset).collect()
    }
}

/// Equivalent circuit of a congested optimal solution.
pub fn build_circuit<T: Scalar>(net: &Network<T>, sol: &DcopfSolution<T>) -> Result<EquivalentCircuit<T>> {
    build_circuit_with(net, sol, T::tol(1e-7))
}

pub fn build_circuit_with<T: Scalar>(
    net: &Network<T>,
    sol: &DcopfSolution<T>,
    binding_tol: T,
) -> Result<EquivalentCircuit<T>> {
    if !sol.is_congested(binding_tol) {
        return Err(Error::NoCongestion);
    }
    let (ground, offset) = cheapest_marginal(sol, net)?;
    let resistors = net.lines().iter().map(|l| Resistor { from: l.from, to: l.to, ohms: l.ohms() }).collect();
    let sources = sol
        .binding(binding_tol)
        .map(|c| {
            let line = &net.lines()[c.line];
            let (from, to) = if c.forward { (line.from, line.to) } else { (line.to, line.from) };
            CurrentSource { resistor: c.line, from, to, amps: c.mu }
        })
        .collect();
    EquivalentCircuit::new(net.bus_count(), resistors, sources, ground, offset)
}

fn expand<T: Scalar>(reduced: Vec<T>, ground: usize) -> Vec<T> {
    let mut full = reduced;
    full.insert(ground, T::zero());
    full
}

fn without_ground<T: Scalar>(values: &[T], ground: usize) -> Vec<T> {
    values.iter().enumerate().filter(|&(k, _)| k != ground).map(|(_, &v)| v).collect()
}

fn branch_currents<T: Scalar>(c: &EquivalentCircuit<T>, v: &[T]) -> Vec<T> {
    c.resistors.iter().map(|r| (v[r.from] - v[r.to]) / r.ohms).collect()
}

/// Nodal analysis: `G v = i` with the ground row and column removed.
pub fn solve_circuit<T: Scalar>(c: &EquivalentCircuit<T>) -> Result<CircuitSolution<T>> {
    let lu = c.reduced_factorization()?;
    let rhs = without_ground(&c.injections(&c.sources), c.ground);
    let voltages = expand(lu.solve(&rhs), c.ground);
    Ok(CircuitSolution { branch_currents: branch_currents(c, &voltages), voltages, per_source: None })
}

/// Solves once per source with every other current source opened, and once
/// with all sources active. The parts sum to the whole.
pub fn superpose<T: Scalar>(c: &EquivalentCircuit<T>) -> Result<CircuitSolution<T>> {
    let lu = c.reduced_factorization()?;
    let parts: Vec<Vec<T>> = c
        .sources
        .iter()
        .map(|s| expand(lu.solve(&without_ground(&c.injections([s]), c.ground)), c.ground))
        .collect();
    let voltages = expand(lu.solve(&without_ground(&c.injections(&c.sources), c.ground)), c.ground);
    Ok(CircuitSolution { branch_currents: branch_currents(c, &voltages), voltages, per_source: Some(parts) })
}

/// `residual_i = Σ_j g_ij (v_i − v_j) − (net source injection at i)`.
pub fn kcl_residuals<T: Scalar>(c: &EquivalentCircuit<T>, s: &CircuitSolution<T>) -> Vec<T> {
    let mut residual: Vec<T> = c.injections(&c.sources).into_iter().map(|v| -v).collect();
    for (r, &i) in c.resistors.iter().zip(&s.branch_currents) {
        residual[r.from] = residual[r.from] + i;
        residual[r.to] = residual[r.to] - i;
    }
    residual
}

/// Currents entering and leaving one node, for printing a KCL identity.
#[derive(Debug, Clone, PartialEq)]
pub struct KclBalance<T> {
    pub node: usize,
    pub inflows: Vec<T>,
    pub outflows: Vec<T>,
    pub residual: T,
}

/// Per-node inflow/outflow lists (sources first, then resistors by neighbour id).
/// Zero currents are left out.
pub fn kcl_balances<T: Scalar>(c: &EquivalentCircuit<T>, s: &CircuitSolution<T>) -> Vec<KclBalance<T>> {
    let residuals = kcl_residuals(c, s);
    (0..c.nodes)
        .map(|node| {
            let (mut inflows, mut outflows) = (Vec::new(), Vec::new());
            for src in &c.sources {
                if src.to == node {
                    inflows.push(src.amps);
                }
                if src.from == node {
                    outflows.push(src.amps);
                }
            }
            let mut branch: Vec<(usize, T)> = c
                .resistors
                .iter()
                .zip(&s.branch_currents)
                .filter_map(|(r, &i)| {
                    if r.from == node {
                        Some((r.to, -i))
                    } else if r.to == node {
                        Some((r.from, i))
                    } else {
                        None
                    }
                })
                .collect();
            branch.sort_by_key(|b| b.0);
            for (_, i) in branch {
                if i > T::zero() {
                    inflows.push(i);
                } else if i < T::zero() {
                    outflows.push(-i);
                }
            }
            KclBalance { node, inflows, outflows, residual: residuals[node] }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct VoltageSource<T> {
    pub resistor: usize,
    /// The `+` terminal sits on the `to` side.
    pub from: usize,
    pub to: usize,
    pub volts: T,
    pub series_ohms: T,
}

/// Thevenin form of the circuit's sources: `V = I R` in series with the line resistor.
#[derive(Debug, Clone, PartialEq)]
pub struct VoltageSourceView<T> {
    pub sources: Vec<VoltageSource<T>>,
}

impl<T: Scalar> VoltageSourceView<T> {
    /// Inverse transformation back to parallel current sources.
    pub fn to_current_sources(&self) -> Vec<CurrentSource<T>> {
        self.sources
            .iter()
            .map(|v| CurrentSource { resistor: v.resistor, from: v.from, to: v.to, amps: v.volts / v.series_ohms })
            .collect()
    }
}

pub fn to_voltage_sources<T: Scalar>(c: &EquivalentCircuit<T>) -> VoltageSourceView<T> {
    VoltageSourceView {
        sources: c
            .sources
            .iter()
            .map(|s| {
                let ohms = c.resistors[s.resistor].ohms;
                VoltageSource { resistor: s.resistor, from: s.from, to: s.to, volts: s.amps * ohms, series_ohms: ohms }
            })
            .collect(),
    }
}

/// Modified nodal analysis of the voltage-source form.
///
/// Each converted branch is `from -R- m -(-V+)- to` with its own internal
/// node `m` and a branch-current unknown for the ideal source. Returns the
/// voltages of the original nodes.
pub fn solve_voltage_form<T: Scalar>(c: &EquivalentCircuit<T>, view: &VoltageSourceView<T>) -> Result<Vec<T>> {
    let n = c.nodes;
    let k = view.sources.len();
    let series: std::collections::HashMap<usize, usize> =
        view.sources.iter().enumerate().map(|(j, v)| (v.resistor, j)).collect();
    // unknowns: node voltages 0..n+k except ground, then k source currents
    let total_nodes = n + k;
    let index = |node: usize| -> Option<usize> {
        match node.cmp(&c.ground) {
            std::cmp::Ordering::Less => Some(node),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(node - 1),
        }
    };
    let size = total_nodes - 1 + k;
    let mut a = Matrix::zeros(size, size);
    let mut rhs = vec![T::zero(); size];
    let stamp = |a: &mut Matrix<T>, p: usize, q: usize, g: T| {
        if let Some(i) = index(p) {
            a[(i, i)] = a[(i, i)] + g;
            if let Some(j) = index(q) {
                a[(i, j)] = a[(i, j)] - g;
            }
        }
        if let Some(j) = index(q) {
            a[(j, j)] = a[(j, j)] + g;
            if let Some(i) = index(p) {
                a[(j, i)] = a[(j, i)] - g;
            }
        }
    };
    for (r, res) in c.resistors.iter().enumerate() {
        match series.get(&r) {
            None => stamp(&mut a, res.from, res.to, res.conductance()),
            Some(&j) => {
                let v = &view.sources[j];
                let internal = n + j;
                stamp(&mut a, v.from, internal, T::one() / v.series_ohms);
                // ideal source: v_to − v_internal = V, current unknown enters `to`
                let row = total_nodes - 1 + j;
                if let Some(i) = index(v.to) {
                    a[(i, row)] = a[(i, row)] - T::one();
                    a[(row, i)] = T::one();
                }
                if let Some(i) = index(internal) {
                    a[(i, row)] = a[(i, row)] + T::one();
                    a[(row, i)] = -T::one();
                }
                rhs[row] = v.volts;
            }
        }
    }
    let x = Lu::new(&a, T::tol(1e-12))?.solve(&rhs);
    Ok((0..n).map(|node| index(node).map_or(T::zero(), |i| x[i])).collect())
}

/// Price drops around one closed walk of buses.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopSum<T> {
    pub nodes: Vec<usize>,
    /// `λ_k − λ_{k+1}` for each step, closing back to the first node.
    pub drops: Vec<T>,
    pub sum: T,
}

/// Sum of price differences around `nodes`, traversed cyclically.
pub fn loop_sum<T: Scalar>(lmps: &[T], nodes: &[usize]) -> LoopSum<T> {
    let drops: Vec<T> =
        (0..nodes.len()).map(|k| lmps[nodes[k]] - lmps[nodes[(k + 1) % nodes.len()]]).collect();
    let sum = drops.iter().copied().sum();
    LoopSum { nodes: nodes.to_vec(), drops, sum }
}

/// KVL sums over the fundamental cycle basis of the network (empty for a tree).
pub fn kvl_loop_sums<T: Scalar>(net: &Network<T>, lmps: &[T]) -> Vec<LoopSum<T>> {
    let edges = net.edges();
    Adjacency::new(net.bus_count(), edges.iter().copied())
        .fundamental_cycles(&edges)
        .iter()
        .map(|cycle| loop_sum(lmps, cycle))
        .collect()
}
