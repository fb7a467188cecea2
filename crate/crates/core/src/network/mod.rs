//! Network data model and assembly of the DC OPF matrices.
//!
//! The optimal power flow is held in the block form
//!
//! ```text
//! min  cᵀp
//! s.t. A p + B θ = a        (bus balance, one row per bus)
//!      C p ≥ b              (injection limits)
//!      D θ ≥ d              (line limits, angle basis)
//! ```
//!
//! `p` has one entry per injector. Generators enter `A` with `+1` and cost
//! `c = cost`; controllable loads enter with `-1` and `c = -bid`, so `p` is
//! always a non-negative quantity in MW. Susceptances are per unit on a 1 MVA
//! base, which makes MW and per-unit power coincide.
//!
//! Flow limits are stored in MW and canonicalized by dividing by the line
//! susceptance, so every row of `D` is `±(e_i - e_j)`. With the balance written
//! as `A p + B θ = a`, the flow from `i` to `j` on a line is `b_ij (θ_j - θ_i)`.

mod format;
mod random;

pub use format::{parse_network, BusRecord, InjectorRecord, KindRecord, LineRecord, NetworkFile};
pub use random::{generate_random_network, RandomNetworkConfig};

use crate::error::{Error, Result};
use crate::graph::Adjacency;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Bus<T> {
    pub id: usize,
    /// Uncontrollable demand in MW.
    pub fixed_demand: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Line<T> {
    pub from: usize,
    pub to: usize,
    /// Per-unit susceptance `b = 1/x`.
    pub susceptance: T,
    /// MW limit in either direction; `None` leaves the line unconstrained.
    pub flow_limit: Option<T>,
}

impl<T: Scalar> Line<T> {
    /// Resistance of the line in the equivalent circuit.
    pub fn ohms(&self) -> T {
        T::one() / self.susceptance
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InjectorKind {
    Generator,
    Load,
}

impl InjectorKind {
    /// Entry of the location matrix for this kind.
    pub fn sign<T: Scalar>(self) -> T {
        match self {
            InjectorKind::Generator => T::one(),
            InjectorKind::Load => -T::one(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Injector<T> {
    pub bus: usize,
    pub kind: InjectorKind,
    /// Offer price for a generator, bid price for a controllable load ($/MWh).
    pub cost: T,
    pub p_min: T,
    pub p_max: T,
}

impl<T: Scalar> Injector<T> {
    /// Objective coefficient of this injector's column.
    pub fn objective_coefficient(&self) -> T {
        self.kind.sign::<T>() * self.cost
    }
}

/// A validated power network. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Network<T> {
    buses: Vec<Bus<T>>,
    lines: Vec<Line<T>>,
    injectors: Vec<Injector<T>>,
}

impl<T: Scalar> Network<T> {
    pub fn new(buses: Vec<Bus<T>>, lines: Vec<Line<T>>, injectors: Vec<Injector<T>>) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidNetwork(msg));
        let n = buses.len();
        if n < 2 {
            return invalid(format!("need at least 2 buses, got {n}"));
        }
        for (k, bus) in buses.iter().enumerate() {
            if bus.id != k {
                return invalid(format!("bus ids must be 0..{n} in order; position {k} has id {}", bus.id));
            }
            if !bus.fixed_demand.is_finite() || bus.fixed_demand < T::zero() {
                return invalid(format!("bus {k}: demand must be finite and non-negative"));
            }
        }
        let mut pairs = std::collections::HashSet::new();
        for (k, line) in lines.iter().enumerate() {
            if line.from >= n || line.to >= n {
                return invalid(format!("line {k}: endpoint out of range"));
            }
            if line.from == line.to {
                return invalid(format!("line {k}: self loop at bus {}", line.from));
            }
            if !pairs.insert((line.from.min(line.to), line.from.max(line.to))) {
                return invalid(format!(
                    "line {k}: parallel line between buses {} and {}; merge it first",
                    line.from, line.to
                ));
            }
            if !line.susceptance.is_finite() || line.susceptance <= T::zero() {
                return invalid(format!("line {k}: susceptance must be positive"));
            }
            if let Some(limit) = line.flow_limit {
                if !limit.is_finite() || limit <= T::zero() {
                    return invalid(format!("line {k}: flow limit must be positive"));
                }
            }
        }
        if injectors.is_empty() {
            return invalid("network has no injectors".into());
        }
        let mut occupied = std::collections::HashSet::new();
        for (k, inj) in injectors.iter().enumerate() {
            if inj.bus >= n {
                return invalid(format!("injector {k}: bus {} out of range", inj.bus));
            }
            if !(inj.cost.is_finite() && inj.p_min.is_finite() && inj.p_max.is_finite()) {
                return invalid(format!("injector {k}: non-finite data"));
            }
            if inj.p_min > inj.p_max {
                return invalid(format!("injector {k}: p_min exceeds p_max"));
            }
            if !occupied.insert((inj.bus, inj.kind)) {
                return invalid(format!("bus {}: more than one {:?}", inj.bus, inj.kind));
            }
        }
        let adjacency = Adjacency::new(n, lines.iter().map(|l| (l.from, l.to)));
        let components = adjacency.components();
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        Ok(Network { buses, lines, injectors })
    }

    pub fn buses(&self) -> &[Bus<T>] {
        &self.buses
    }

    pub fn lines(&self) -> &[Line<T>] {
        &self.lines
    }

    pub fn injectors(&self) -> &[Injector<T>] {
        &self.injectors
    }

    pub fn bus_count(&self) -> usize {
        self.buses.len()
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency::new(self.bus_count(), self.edges())
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.lines.iter().map(|l| (l.from, l.to)).collect()
    }

    /// True when the network has no cycle.
    pub fn is_radial(&self) -> bool {
        self.lines.len() + 1 == self.bus_count()
    }

    /// Indices of lines carrying a flow limit, in line order.
    pub fn limited_lines(&self) -> Vec<usize> {
        (0..self.lines.len()).filter(|&k| self.lines[k].flow_limit.is_some()).collect()
    }

    pub fn total_demand(&self) -> T {
        self.buses.iter().map(|b| b.fixed_demand).sum()
    }

    /// Converts every number to another scalar type.
    pub fn cast<U: Scalar>(&self) -> Network<U> {
        let c = |v: T| U::of(v.as_f64());
        Network {
            buses: self.buses.iter().map(|b| Bus { id: b.id, fixed_demand: c(b.fixed_demand) }).collect(),
            lines: self
                .lines
                .iter()
                .map(|l| Line {
                    from: l.from,
                    to: l.to,
                    susceptance: c(l.susceptance),
                    flow_limit: l.flow_limit.map(c),
                })
                .collect(),
            injectors: self
                .injectors
                .iter()
                .map(|i| Injector { bus: i.bus, kind: i.kind, cost: c(i.cost), p_min: c(i.p_min), p_max: c(i.p_max) })
                .collect(),
        }
    }
}

/// DC bus admittance matrix: the susceptance-weighted Laplacian of the network.
pub fn build_b_matrix<T: Scalar>(net: &Network<T>) -> Matrix<T> {
    laplacian(net.bus_count(), net.lines().iter().map(|l| (l.from, l.to, l.susceptance)))
}

/// Weighted graph Laplacian from `(from, to, weight)` triples.
pub(crate) fn laplacian<T: Scalar>(n: usize, edges: impl IntoIterator<Item = (usize, usize, T)>) -> Matrix<T> {
    let mut b = Matrix::zeros(n, n);
    for (i, j, w) in edges {
        b[(i, i)] = b[(i, i)] + w;
        b[(j, j)] = b[(j, j)] + w;
        b[(i, j)] = b[(i, j)] - w;
        b[(j, i)] = b[(j, i)] - w;
    }
    b
}

/// The assembled OPF in block form. See the module docs for the layout.
#[derive(Debug, Clone, PartialEq)]
pub struct OpfLp<T> {
    /// `A`, n × m location matrix.
    pub location: Matrix<T>,
    /// `B`, n × n admittance matrix.
    pub admittance: Matrix<T>,
    /// `C`, 2m × m; rows `2k` (lower) and `2k+1` (upper) belong to injector `k`.
    pub injection_limits: Matrix<T>,
    /// `D`, 2L × n over limited lines; rows `2r` and `2r+1` belong to `limited[r]`.
    pub angle_limits: Matrix<T>,
    /// `a`, fixed demand per bus.
    pub demand: Vec<T>,
    /// `b`.
    pub injection_rhs: Vec<T>,
    /// `c`.
    pub cost: Vec<T>,
    /// `d`.
    pub angle_rhs: Vec<T>,
    /// Line index behind each pair of `D` rows.
    pub limited: Vec<usize>,
}

/// Builds `A, B, C, D, a, b, c, d` for `net`.
///
/// Row `2r` of `D` is `θ_i - θ_j ≥ -f/b` (caps flow from `i` to `j`) and row
/// `2r+1` is `θ_j - θ_i ≥ -f/b` (caps flow from `j` to `i`).
pub fn assemble_lp<T: Scalar>(net: &Network<T>) -> OpfLp<T> {
    let n = net.bus_count();
    let m = net.injectors().len();
    let mut location = Matrix::zeros(n, m);
    let mut injection_limits = Matrix::zeros(2 * m, m);
    let mut injection_rhs = Vec::with_capacity(2 * m);
    let mut cost = Vec::with_capacity(m);
    for (k, inj) in net.injectors().iter().enumerate() {
        location[(inj.bus, k)] = inj.kind.sign();
        cost.push(inj.objective_coefficient());
        injection_limits[(2 * k, k)] = T::one();
        injection_limits[(2 * k + 1, k)] = -T::one();
        injection_rhs.push(inj.p_min);
        injection_rhs.push(-inj.p_max);
    }
    let limited = net.limited_lines();
    let mut angle_limits = Matrix::zeros(2 * limited.len(), n);
    let mut angle_rhs = Vec::with_capacity(2 * limited.len());
    for (r, &k) in limited.iter().enumerate() {
        let line = &net.lines()[k];
        let bound = -line.flow_limit.expect("limited line") / line.susceptance;
        angle_limits[(2 * r, line.from)] = T::one();
        angle_limits[(2 * r, line.to)] = -T::one();
        angle_limits[(2 * r + 1, line.from)] = -T::one();
        angle_limits[(2 * r + 1, line.to)] = T::one();
        angle_rhs.push(bound);
        angle_rhs.push(bound);
    }
    OpfLp {
        location,
        admittance: build_b_matrix(net),
        injection_limits,
        angle_limits,
        demand: net.buses().iter().map(|b| b.fixed_demand).collect(),
        injection_rhs,
        cost,
        angle_rhs,
        limited,
    }
}

/// MW flow from `from` to `to` on every line for angles in the `A p + B θ = a` sign convention.
pub fn line_flows<T: Scalar>(net: &Network<T>, theta: &[T]) -> Vec<T> {
    net.lines().iter().map(|l| l.susceptance * (theta[l.to] - theta[l.from])).collect()
}
