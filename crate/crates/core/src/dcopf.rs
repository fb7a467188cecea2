//! DC optimal power flow: solve, read the duals, certify optimality.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::lp::{solve_lp_with, LpProblem, LpStatus, SimplexOptions};
use crate::network::{assemble_lp, line_flows, InjectorKind, Network, OpfLp};
use crate::scalar::{inf_norm, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct OpfOptions<T> {
    /// Bus whose angle is pinned to zero.
    pub reference_bus: usize,
    /// An injector is marginal when it is farther than this from both limits (MW).
    pub marginal_tol: T,
    /// Congestion prices above this count as binding.
    pub binding_tol: T,
    pub simplex: SimplexOptions<T>,
}

impl<T: Scalar> Default for OpfOptions<T> {
    fn default() -> Self {
        OpfOptions {
            reference_bus: 0,
            marginal_tol: T::tol(1e-6),
            binding_tol: T::tol(1e-7),
            simplex: SimplexOptions::default(),
        }
    }
}

/// Congestion price of one flow-limited line.
#[derive(Debug, Clone, PartialEq)]
pub struct LineCongestion<T> {
    pub line: usize,
    /// Angle-basis price: the current-source magnitude in the equivalent circuit.
    pub mu: T,
    /// `mu / b`, the price per MW of limit.
    pub mw_basis: T,
    /// True when the binding direction is `from → to`.
    pub forward: bool,
    /// MW flow `from → to`.
    pub flow: T,
    pub limit: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DcopfSolution<T> {
    /// MW per injector (consumption for controllable loads).
    pub injections: Vec<T>,
    /// Angles per bus in the `A p + B θ = a` convention; the reference bus is 0.
    pub angles: Vec<T>,
    pub objective: T,
    /// `λ`, $/MWh per bus.
    pub lmp: Vec<T>,
    /// One entry per flow-limited line, in line order.
    pub congestion: Vec<LineCongestion<T>>,
    /// `μ`, one per row of `D`.
    pub angle_duals: Vec<T>,
    /// `γ`, one per row of `C` (lower, upper for each injector).
    pub limit_duals: Vec<T>,
    /// Injectors strictly inside their limits.
    pub marginal: Vec<usize>,
    pub degenerate: bool,
    pub reference_bus: usize,
}

impl<T: Scalar> DcopfSolution<T> {
    /// Lines whose congestion price exceeds `tol`.
    pub fn binding(&self, tol: T) -> impl Iterator<Item = &LineCongestion<T>> {
        self.congestion.iter().filter(move |c| c.mu > tol)
    }

    pub fn is_congested(&self, tol: T) -> bool {
        self.binding(tol).next().is_some()
    }
}

/// Converts the block form into a solver problem over `[p; θ without reference]`.
pub fn to_lp_problem<T: Scalar>(opf: &OpfLp<T>, reference_bus: usize) -> LpProblem<T> {
    let n = opf.admittance.rows();
    let m = opf.location.cols();
    let theta_cols: Vec<usize> = (0..n).filter(|&k| k != reference_bus).collect();
    let nv = m + theta_cols.len();
    let mut eq = Matrix::zeros(n, nv);
    for i in 0..n {
        for k in 0..m {
            eq[(i, k)] = opf.location[(i, k)];
        }
        for (c, &k) in theta_cols.iter().enumerate() {
            eq[(i, m + c)] = opf.admittance[(i, k)];
        }
    }
    let (rc, rd) = (opf.injection_limits.rows(), opf.angle_limits.rows());
    let mut ineq = Matrix::zeros(rc + rd, nv);
    for r in 0..rc {
        for k in 0..m {
            ineq[(r, k)] = opf.injection_limits[(r, k)];
        }
    }
    for r in 0..rd {
        for (c, &k) in theta_cols.iter().enumerate() {
            ineq[(rc + r, m + c)] = opf.angle_limits[(r, k)];
        }
    }
    let mut objective = opf.cost.clone();
    objective.resize(nv, T::zero());
    let rhs = opf.injection_rhs.iter().chain(&opf.angle_rhs).copied().collect();
    LpProblem::new(objective, eq, opf.demand.clone(), ineq, rhs).expect("assembled dimensions agree")
}

pub fn solve_opf<T: Scalar>(net: &Network<T>) -> Result<DcopfSolution<T>> {
    solve_opf_with(net, &OpfOptions::default())
}

pub fn solve_opf_with<T: Scalar>(net: &Network<T>, options: &OpfOptions<T>) -> Result<DcopfSolution<T>> {
    let n = net.bus_count();
    if options.reference_bus >= n {
        return Err(Error::InvalidNetwork(format!("reference bus {} out of range", options.reference_bus)));
    }
    let opf = assemble_lp(net);
    let problem = to_lp_problem(&opf, options.reference_bus);
    let lp = solve_lp_with(&problem, &options.simplex)?;
    match lp.status {
        LpStatus::Optimal => {}
        LpStatus::Unbounded => return Err(Error::Unbounded),
        LpStatus::Infeasible => {
            return Err(Error::Infeasible(infeasibility_diagnostic(net, &opf, lp.farkas.as_ref())))
        }
    }
    let m = net.injectors().len();
    let injections = lp.primal[..m].to_vec();
    let mut angles = vec![T::zero(); n];
    let mut rest = lp.primal[m..].iter();
    for (k, theta) in angles.iter_mut().enumerate() {
        if k != options.reference_bus {
            *theta = *rest.next().expect("one angle per non-reference bus");
        }
    }
    let limit_duals = lp.ineq_duals[..2 * m].to_vec();
    let angle_duals = lp.ineq_duals[2 * m..].to_vec();
    let flows = line_flows(net, &angles);
    let congestion = opf
        .limited
        .iter()
        .enumerate()
        .map(|(r, &k)| {
            let line = &net.lines()[k];
            let (fwd, rev) = (angle_duals[2 * r], angle_duals[2 * r + 1]);
            let mu = fwd + rev;
            LineCongestion {
                line: k,
                mu,
                mw_basis: mu / line.susceptance,
                forward: fwd >= rev,
                flow: flows[k],
                limit: line.flow_limit.expect("limited line"),
            }
        })
        .collect();
    let marginal = net
        .injectors()
        .iter()
        .zip(&injections)
        .enumerate()
        .filter(|(_, (inj, &p))| (p - inj.p_min).min(inj.p_max - p) > options.marginal_tol)
        .map(|(k, _)| k)
        .collect();
    Ok(DcopfSolution {
        injections,
        angles,
        objective: lp.objective,
        lmp: lp.eq_duals,
        congestion,
        angle_duals,
        limit_duals,
        marginal,
        degenerate: lp.degenerate,
        reference_bus: options.reference_bus,
    })
}

fn infeasibility_diagnostic<T: Scalar>(net: &Network<T>, opf: &OpfLp<T>, farkas: Option<&(Vec<T>, Vec<T>)>) -> String {
    let demand = net.total_demand();
    let (mut supply_max, mut load_min) = (T::zero(), T::zero());
    for inj in net.injectors() {
        match inj.kind {
            InjectorKind::Generator => supply_max = supply_max + inj.p_max,
            InjectorKind::Load => load_min = load_min + inj.p_min,
        }
    }
    let mut text = format!(
        "total demand {} MW (fixed {} + minimum controllable {}) against generation capacity {} MW",
        demand + load_min,
        demand,
        load_min,
        supply_max
    );
    // The certificate weighs bus balances against limit rows; it need not be a clean cut.
    if let Some((y_eq, y_ineq)) = farkas {
        let tol = T::tol(1e-9);
        let scale = y_eq.iter().fold(T::zero(), |m, &v| m.max(v));
        let weights: Vec<String> = y_eq
            .iter()
            .enumerate()
            .filter(|(_, &v)| scale > tol && v > tol * scale)
            .map(|(k, &v)| format!("{k}: {}", v / scale))
            .collect();
        let rc = opf.injection_limits.rows();
        let mut cut: Vec<usize> = y_ineq[rc..]
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > tol)
            .map(|(r, _)| opf.limited[r / 2])
            .collect();
        cut.dedup();
        if !cut.is_empty() {
            let lines: Vec<String> = cut
                .iter()
                .map(|&k| {
                    let l = &net.lines()[k];
                    format!("{}-{} ({} MW)", l.from, l.to, l.flow_limit.expect("limited line"))
                })
                .collect();
            text.push_str(&format!(
                "; flow limits on {} cannot serve demand weighted by bus {{{}}}",
                lines.join(", "),
                weights.join(", ")
            ));
        }
    }
    text
}

/// Residual of one block of the optimality system.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualBlock<T> {
    pub label: &'static str,
    pub description: &'static str,
    pub norm: T,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport<T> {
    pub tolerance: T,
    /// Primal feasibility, two stationarity blocks, two complementarity blocks, dual signs.
    pub blocks: Vec<ResidualBlock<T>>,
    /// `cᵀp − (aᵀλ + bᵀγ + dᵀμ)`.
    pub duality_gap: T,
    pub gap_pass: bool,
}

impl<T: Scalar> CheckReport<T> {
    pub fn all_pass(&self) -> bool {
        self.gap_pass && self.blocks.iter().all(|b| b.pass)
    }

    pub fn block(&self, label: &str) -> Option<&ResidualBlock<T>> {
        self.blocks.iter().find(|b| b.label == label)
    }
}

fn complementarity<T: Scalar>(duals: &[T], slack: &[T]) -> T {
    duals.iter().zip(slack).fold(T::zero(), |acc, (&u, &s)| acc.max((u * s).abs()).max(-s))
}

fn minus<T: Scalar>(a: Vec<T>, b: &[T]) -> Vec<T> {
    a.into_iter().zip(b).map(|(x, &y)| x - y).collect()
}

pub fn verify_optimality<T: Scalar>(net: &Network<T>, sol: &DcopfSolution<T>) -> Result<CheckReport<T>> {
    verify_optimality_with(net, sol, T::tol(1e-7))
}

/// Evaluates every block of the optimality system at `sol`.
pub fn verify_optimality_with<T: Scalar>(net: &Network<T>, sol: &DcopfSolution<T>, tol: T) -> Result<CheckReport<T>> {
    let opf = assemble_lp(net);
    let (n, m) = (net.bus_count(), net.injectors().len());
    let dims = [
        (sol.lmp.len(), n, "lmp"),
        (sol.angles.len(), n, "angles"),
        (sol.injections.len(), m, "injections"),
        (sol.limit_duals.len(), 2 * m, "limit duals"),
        (sol.angle_duals.len(), opf.angle_limits.rows(), "angle duals"),
    ];
    for (got, want, what) in dims {
        if got != want {
            return Err(Error::DimensionMismatch(format!("{what}: solution has {got}, network needs {want}")));
        }
    }
    let mut balance = opf.location.mul_vec(&sol.injections);
    for (v, w) in balance.iter_mut().zip(opf.admittance.mul_vec(&sol.angles)) {
        *v = *v + w;
    }
    let primal = inf_norm(&minus(balance, &opf.demand));

    let mut injection_stationarity = opf.location.tr_mul_vec(&sol.lmp);
    for (v, w) in injection_stationarity.iter_mut().zip(opf.injection_limits.tr_mul_vec(&sol.limit_duals)) {
        *v = *v + w;
    }
    let injection_stationarity = inf_norm(&minus(injection_stationarity, &opf.cost));

    let mut angle_stationarity = opf.admittance.tr_mul_vec(&sol.lmp);
    for (v, w) in angle_stationarity.iter_mut().zip(opf.angle_limits.tr_mul_vec(&sol.angle_duals)) {
        *v = *v + w;
    }
    let angle_stationarity = inf_norm(&angle_stationarity);

    let injection_slack = minus(opf.injection_limits.mul_vec(&sol.injections), &opf.injection_rhs);
    let angle_slack = minus(opf.angle_limits.mul_vec(&sol.angles), &opf.angle_rhs);
    let injection_comp = complementarity(&sol.limit_duals, &injection_slack);
    let angle_comp = complementarity(&sol.angle_duals, &angle_slack);
    let signs = sol.limit_duals.iter().chain(&sol.angle_duals).fold(T::zero(), |acc, &v| acc.max(-v));

    let dot = |a: &[T], b: &[T]| a.iter().zip(b).map(|(&x, &y)| x * y).sum::<T>();
    let primal_obj = dot(&opf.cost, &sol.injections);
    let dual_obj = dot(&opf.demand, &sol.lmp)
        + dot(&opf.injection_rhs, &sol.limit_duals)
        + dot(&opf.angle_rhs, &sol.angle_duals);
    let duality_gap = primal_obj - dual_obj;

    let block = |label, description, norm: T| ResidualBlock { label, description, norm, pass: norm <= tol };
    Ok(CheckReport {
        tolerance: tol,
        blocks: vec![
            block("balance", "primal feasibility  A p + B θ = a", primal),
            block("injection_stationarity", "dual feasibility    Aᵀλ + Cᵀγ = c", injection_stationarity),
            block("angle_stationarity", "dual feasibility    Bᵀλ + Dᵀμ = 0", angle_stationarity),
            block("injection_complementarity", "complementarity     0 ≤ γ ⊥ C p − b ≥ 0", injection_comp),
            block("flow_complementarity", "complementarity     0 ≤ μ ⊥ D θ − d ≥ 0", angle_comp),
            block("dual_signs", "dual signs          γ, μ ≥ 0", signs),
        ],
        duality_gap,
        gap_pass: duality_gap.abs() <= tol * (T::one() + primal_obj.abs()),
    })
}

/// Bus and price of the cheapest marginal injector, lowest bus id on ties.
///
/// A marginal controllable load is priced at its bid, which equals the LMP at
/// its bus just as a marginal generator's offer does.
pub fn cheapest_marginal<T: Scalar>(sol: &DcopfSolution<T>, net: &Network<T>) -> Result<(usize, T)> {
    sol.marginal
        .iter()
        .map(|&k| {
            let inj = &net.injectors()[k];
            (inj.bus, inj.cost)
        })
        .fold(None, |best: Option<(usize, T)>, cur| match best {
            Some(b) if b.1 < cur.1 || (b.1 == cur.1 && b.0 <= cur.0) => Some(b),
            _ => Some(cur),
        })
        .ok_or(Error::NoMarginalInjector)
}
