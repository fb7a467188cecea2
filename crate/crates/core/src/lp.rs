//! Dense primal simplex for linear programs with free variables.
//!
//! Problems have the form
//!
//! ```text
//! min cᵀx  s.t.  E x = f,  G x ≥ h,  x free
//! ```
//!
//! and the solver reports the vertex solution together with the basis duals
//! `λ` (for `E`) and `μ ≥ 0` (for `G`), which satisfy `Eᵀλ + Gᵀμ = c`.
//!
//! Free variables are split into positive and negative parts, `≥` rows get a
//! surplus column, and a two-phase method with artificials finds a starting
//! basis. Pricing is Dantzig's rule with lowest-index tie-breaking; after a
//! run of degenerate pivots the solver switches to Bland's rule for the rest
//! of the phase. The final primal and dual values are recomputed from an LU
//! factorization of the optimal basis, not read off the tableau.

use crate::error::{Error, Result};
use crate::linalg::{Lu, Matrix};
use crate::scalar::{inf_norm, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem<T> {
    pub objective: Vec<T>,
    pub eq_matrix: Matrix<T>,
    pub eq_rhs: Vec<T>,
    pub ineq_matrix: Matrix<T>,
    pub ineq_rhs: Vec<T>,
}

impl<T: Scalar> LpProblem<T> {
    pub fn new(
        objective: Vec<T>,
        eq_matrix: Matrix<T>,
        eq_rhs: Vec<T>,
        ineq_matrix: Matrix<T>,
        ineq_rhs: Vec<T>,
    ) -> Result<Self> {
        let n = objective.len();
        let mismatch = |what: &str| Err(Error::DimensionMismatch(what.to_string()));
        if eq_matrix.cols() != n || ineq_matrix.cols() != n {
            return mismatch("constraint matrix column count differs from objective length");
        }
        if eq_matrix.rows() != eq_rhs.len() {
            return mismatch("equality rows differ from equality rhs length");
        }
        if ineq_matrix.rows() != ineq_rhs.len() {
            return mismatch("inequality rows differ from inequality rhs length");
        }
        let finite = objective.iter().chain(&eq_rhs).chain(&ineq_rhs).all(|v| v.is_finite())
            && (0..eq_matrix.rows()).all(|i| eq_matrix.row(i).iter().all(|v| v.is_finite()))
            && (0..ineq_matrix.rows()).all(|i| ineq_matrix.row(i).iter().all(|v| v.is_finite()));
        if !finite {
            return Err(Error::InvalidNetwork("non-finite LP data".into()));
        }
        Ok(LpProblem { objective, eq_matrix, eq_rhs, ineq_matrix, ineq_rhs })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Residuals of the optimality system at `(x, λ, μ)`.
    pub fn residuals(&self, x: &[T], eq_duals: &[T], ineq_duals: &[T]) -> LpResiduals<T> {
        let eq: Vec<T> = self.eq_matrix.mul_vec(x).iter().zip(&self.eq_rhs).map(|(&a, &b)| a - b).collect();
        let slack: Vec<T> =
            self.ineq_matrix.mul_vec(x).iter().zip(&self.ineq_rhs).map(|(&a, &b)| a - b).collect();
        let mut grad = self.eq_matrix.tr_mul_vec(eq_duals);
        for (g, v) in grad.iter_mut().zip(self.ineq_matrix.tr_mul_vec(ineq_duals)) {
            *g = *g + v;
        }
        let stationarity: Vec<T> = grad.iter().zip(&self.objective).map(|(&g, &c)| g - c).collect();
        let infeasibility = slack.iter().fold(T::zero(), |m, &s| m.max(-s));
        let complementarity =
            slack.iter().zip(ineq_duals).fold(T::zero(), |m, (&s, &u)| m.max((s * u).abs()));
        let dual_sign = ineq_duals.iter().fold(T::zero(), |m, &u| m.max(-u));
        let primal_objective: T = self.objective.iter().zip(x).map(|(&c, &v)| c * v).sum();
        let dual_objective: T = self.eq_rhs.iter().zip(eq_duals).map(|(&f, &l)| f * l).sum::<T>()
            + self.ineq_rhs.iter().zip(ineq_duals).map(|(&h, &u)| h * u).sum::<T>();
        LpResiduals {
            primal: inf_norm(&eq).max(infeasibility),
            dual: inf_norm(&stationarity),
            complementarity,
            dual_sign,
            gap: (primal_objective - dual_objective).abs(),
            objective: primal_objective,
        }
    }
}

/// ∞-norm residuals of an LP optimality certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpResiduals<T> {
    pub primal: T,
    pub dual: T,
    pub complementarity: T,
    pub dual_sign: T,
    pub gap: T,
    pub objective: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    /// Optimal `x`; empty unless optimal.
    pub primal: Vec<T>,
    /// `cᵀx`; NaN unless optimal.
    pub objective: T,
    pub eq_duals: Vec<T>,
    pub ineq_duals: Vec<T>,
    /// Some basic variable of the final basis sits at its bound.
    pub degenerate: bool,
    pub iterations: usize,
    /// For infeasible problems, `(y_eq, y_ineq)` with `y_ineq ≥ 0`,
    /// `Eᵀy_eq + Gᵀy_ineq = 0` and `fᵀy_eq + hᵀy_ineq > 0`.
    pub farkas: Option<(Vec<T>, Vec<T>)>,
}

impl<T: Scalar> LpSolution<T> {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    fn without_point(status: LpStatus, iterations: usize) -> Self {
        LpSolution {
            status,
            primal: Vec::new(),
            objective: T::nan(),
            eq_duals: Vec::new(),
            ineq_duals: Vec::new(),
            degenerate: false,
            iterations,
            farkas: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOptions<T> {
    /// Smallest tableau entry accepted as a pivot.
    pub pivot_tol: T,
    /// Feasibility tolerance, relative to the largest rhs magnitude.
    pub feasibility_tol: T,
    /// Reduced-cost threshold for optimality.
    pub optimality_tol: T,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub stall_threshold: usize,
    pub max_iterations: usize,
}

impl<T: Scalar> Default for SimplexOptions<T> {
    fn default() -> Self {
        SimplexOptions {
            pivot_tol: T::tol(1e-9),
            feasibility_tol: T::tol(1e-9),
            optimality_tol: T::tol(1e-9),
            stall_threshold: 50,
            max_iterations: 50_000,
        }
    }
}

pub fn solve_lp<T: Scalar>(problem: &LpProblem<T>) -> Result<LpSolution<T>> {
    solve_lp_with(problem, &SimplexOptions::default())
}

pub fn solve_lp_with<T: Scalar>(problem: &LpProblem<T>, options: &SimplexOptions<T>) -> Result<LpSolution<T>> {
    let standard = StandardForm::new(problem);
    let mut tableau = Tableau::new(&standard);
    let scale = T::one().max(inf_norm(&standard.rhs));

    // Phase I
    let phase_one_cost: Vec<T> =
        (0..standard.cols()).map(|j| if standard.is_artificial(j) { T::one() } else { T::zero() }).collect();
    tableau.set_costs(&phase_one_cost);
    match tableau.run(&standard, options, true)? {
        PhaseEnd::Optimal => {}
        PhaseEnd::Unbounded => unreachable!("phase one objective is bounded below"),
    }
    if tableau.objective_value() > options.feasibility_tol * scale {
        let y = standard.duals_of_basis(&tableau.basis, &phase_one_cost, options.pivot_tol);
        let mut solution = LpSolution::without_point(LpStatus::Infeasible, tableau.iterations);
        solution.farkas = y.map(|y| standard.split_duals(&y));
        return Ok(solution);
    }
    tableau.drive_out_artificials(&standard, options.pivot_tol);

    // Phase II
    tableau.set_costs(&standard.cost);
    if let PhaseEnd::Unbounded = tableau.run(&standard, options, false)? {
        return Ok(LpSolution::without_point(LpStatus::Unbounded, tableau.iterations));
    }

    let (values, y) = match standard.basic_solution(&tableau.basis, options.pivot_tol) {
        Some(refined) => refined,
        None => tableau.read_solution(&standard),
    };
    let mut x_std = vec![T::zero(); standard.cols()];
    for (&j, &v) in tableau.basis.iter().zip(&values) {
        x_std[j] = v;
    }
    let n = problem.num_vars();
    let primal: Vec<T> = (0..n).map(|j| x_std[j] - x_std[n + j]).collect();
    let objective = problem.objective.iter().zip(&primal).map(|(&c, &x)| c * x).sum();
    let degenerate = tableau
        .basis
        .iter()
        .zip(&values)
        .any(|(&j, &v)| j >= 2 * n && v.abs() <= T::tol(1e-9));
    let (eq_duals, ineq_duals) = standard.split_duals(&y);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        primal,
        objective,
        eq_duals,
        ineq_duals,
        degenerate,
        iterations: tableau.iterations,
        farkas: None,
    })
}

/// `A x = b, x ≥ 0` image of an [`LpProblem`].
///
/// Columns: `x⁺ (n)`, `x⁻ (n)`, one surplus per inequality, then artificials.
/// Rows: kept equality rows, then kept inequality rows.
struct StandardForm<T> {
    matrix: Matrix<T>,
    rhs: Vec<T>,
    cost: Vec<T>,
    /// Original row behind each standard row: `(is_equality, index, flipped)`.
    origin: Vec<(bool, usize, bool)>,
    first_artificial: usize,
    initial_basis: Vec<usize>,
    eq_rows: usize,
    ineq_rows: usize,
}

impl<T: Scalar> StandardForm<T> {
    fn new(p: &LpProblem<T>) -> Self {
        let n = p.num_vars();
        let zero_row = |row: &[T]| row.iter().all(|v| *v == T::zero());
        // empty rows with a satisfied rhs carry no information
        let mut rows: Vec<(bool, usize)> = Vec::new();
        for i in 0..p.eq_matrix.rows() {
            if !(zero_row(p.eq_matrix.row(i)) && p.eq_rhs[i] == T::zero()) {
                rows.push((true, i));
            }
        }
        let ineq_kept: Vec<usize> = (0..p.ineq_matrix.rows())
            .filter(|&i| !(zero_row(p.ineq_matrix.row(i)) && p.ineq_rhs[i] <= T::zero()))
            .collect();
        rows.extend(ineq_kept.iter().map(|&i| (false, i)));

        let m = rows.len();
        let surplus = ineq_kept.len();
        let mut needs_artificial = Vec::new();
        let mut origin = Vec::with_capacity(m);
        let mut dense: Vec<Vec<T>> = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut slack_of_row = vec![None; m];
        let mut s = 0;
        for (r, &(is_eq, i)) in rows.iter().enumerate() {
            let (row, b) = if is_eq { (p.eq_matrix.row(i), p.eq_rhs[i]) } else { (p.ineq_matrix.row(i), p.ineq_rhs[i]) };
            let flipped = if is_eq { b < T::zero() } else { b <= T::zero() };
            let sign = if flipped { -T::one() } else { T::one() };
            let mut full = vec![T::zero(); 2 * n + surplus];
            for j in 0..n {
                full[j] = sign * row[j];
                full[n + j] = -sign * row[j];
            }
            if !is_eq {
                full[2 * n + s] = -sign;
                slack_of_row[r] = Some(2 * n + s);
                s += 1;
            }
            if is_eq || !flipped {
                needs_artificial.push(r);
            }
            dense.push(full);
            rhs.push(sign * b);
            origin.push((is_eq, i, flipped));
        }
        let first_artificial = 2 * n + surplus;
        let cols = first_artificial + needs_artificial.len();
        let mut matrix = Matrix::zeros(m, cols);
        for (r, row) in dense.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                matrix[(r, j)] = v;
            }
        }
        let mut initial_basis = vec![0; m];
        for (r, slack) in slack_of_row.iter().enumerate() {
            if let Some(j) = slack {
                initial_basis[r] = *j;
            }
        }
        for (a, &r) in needs_artificial.iter().enumerate() {
            matrix[(r, first_artificial + a)] = T::one();
            initial_basis[r] = first_artificial + a;
        }
        let mut cost = vec![T::zero(); cols];
        for j in 0..n {
            cost[j] = p.objective[j];
            cost[n + j] = -p.objective[j];
        }
        StandardForm {
            matrix,
            rhs,
            cost,
            origin,
            first_artificial,
            initial_basis,
            eq_rows: p.eq_matrix.rows(),
            ineq_rows: p.ineq_matrix.rows(),
        }
    }

    fn rows(&self) -> usize {
        self.matrix.rows()
    }

    fn cols(&self) -> usize {
        self.matrix.cols()
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= self.first_artificial
    }

    fn basis_matrix(&self, basis: &[usize]) -> Matrix<T> {
        let m = self.rows();
        let mut b = Matrix::zeros(m, m);
        for (k, &j) in basis.iter().enumerate() {
            for i in 0..m {
                b[(i, k)] = self.matrix[(i, j)];
            }
        }
        b
    }

    fn duals_of_basis(&self, basis: &[usize], cost: &[T], tol: T) -> Option<Vec<T>> {
        let lu = Lu::new(&self.basis_matrix(basis), tol).ok()?;
        let c_b: Vec<T> = basis.iter().map(|&j| cost[j]).collect();
        Some(lu.solve_transposed(&c_b))
    }

    /// Basic values and row duals recomputed from a fresh factorization.
    fn basic_solution(&self, basis: &[usize], tol: T) -> Option<(Vec<T>, Vec<T>)> {
        let lu = Lu::new(&self.basis_matrix(basis), tol).ok()?;
        let c_b: Vec<T> = basis.iter().map(|&j| self.cost[j]).collect();
        Some((lu.solve(&self.rhs), lu.solve_transposed(&c_b)))
    }

    /// Maps standard-row duals back onto the original equality and inequality rows.
    fn split_duals(&self, y: &[T]) -> (Vec<T>, Vec<T>) {
        let mut eq = vec![T::zero(); self.eq_rows];
        let mut ineq = vec![T::zero(); self.ineq_rows];
        for (&(is_eq, i, flipped), &v) in self.origin.iter().zip(y) {
            let v = if flipped { -v } else { v };
            if is_eq {
                eq[i] = v;
            } else {
                ineq[i] = v;
            }
        }
        (eq, ineq)
    }
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

struct Tableau<T> {
    /// `B⁻¹A | B⁻¹b`, row-major with the rhs in the last column.
    body: Matrix<T>,
    basis: Vec<usize>,
    reduced: Vec<T>,
    costs: Vec<T>,
    iterations: usize,
}

impl<T: Scalar> Tableau<T> {
    fn new(sf: &StandardForm<T>) -> Self {
        let (m, cols) = (sf.rows(), sf.cols());
        let mut body = Matrix::zeros(m, cols + 1);
        for i in 0..m {
            for j in 0..cols {
                body[(i, j)] = sf.matrix[(i, j)];
            }
            body[(i, cols)] = sf.rhs[i];
        }
        Tableau { body, basis: sf.initial_basis.clone(), reduced: vec![T::zero(); cols], costs: vec![T::zero(); cols], iterations: 0 }
    }

    fn cols(&self) -> usize {
        self.body.cols() - 1
    }

    fn rhs(&self, i: usize) -> T {
        self.body[(i, self.cols())]
    }

    fn set_costs(&mut self, costs: &[T]) {
        self.costs = costs.to_vec();
        let mut reduced = costs.to_vec();
        for (i, &j) in self.basis.iter().enumerate() {
            let cb = costs[j];
            if cb != T::zero() {
                for (r, &a) in reduced.iter_mut().zip(self.body.row(i)) {
                    *r = *r - cb * a;
                }
            }
        }
        self.reduced = reduced;
    }

    fn objective_value(&self) -> T {
        self.basis.iter().enumerate().map(|(i, &j)| self.costs[j] * self.rhs(i)).sum()
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let width = self.body.cols();
        let p = self.body[(r, q)];
        for j in 0..width {
            self.body[(r, j)] = self.body[(r, j)] / p;
        }
        self.body[(r, q)] = T::one();
        let pivot_row: Vec<T> = self.body.row(r).to_vec();
        for i in 0..self.body.rows() {
            if i == r {
                continue;
            }
            let f = self.body[(i, q)];
            if f != T::zero() {
                for j in 0..width {
                    self.body[(i, j)] = self.body[(i, j)] - f * pivot_row[j];
                }
                self.body[(i, q)] = T::zero();
            }
        }
        let f = self.reduced[q];
        if f != T::zero() {
            for (j, d) in self.reduced.iter_mut().enumerate() {
                *d = *d - f * pivot_row[j];
            }
            self.reduced[q] = T::zero();
        }
        self.basis[r] = q;
    }

    fn run(&mut self, sf: &StandardForm<T>, opt: &SimplexOptions<T>, phase_one: bool) -> Result<PhaseEnd> {
        let m = self.body.rows();
        let mut is_basic = vec![false; self.cols()];
        for &j in &self.basis {
            is_basic[j] = true;
        }
        let mut bland = false;
        let mut stalled = 0;
        loop {
            if self.iterations >= opt.max_iterations {
                return Err(Error::IterationLimit(opt.max_iterations));
            }
            let candidates = (0..self.cols())
                .filter(|&j| !is_basic[j] && (phase_one || !sf.is_artificial(j)))
                .filter(|&j| self.reduced[j] < -opt.optimality_tol);
            let entering = if bland {
                candidates.min()
            } else {
                candidates.fold(None, |best: Option<usize>, j| match best {
                    Some(b) if self.reduced[b] <= self.reduced[j] => Some(b),
                    _ => Some(j),
                })
            };
            let Some(q) = entering else { return Ok(PhaseEnd::Optimal) };

            let mut leaving: Option<(usize, T)> = None;
            for i in 0..m {
                let a = self.body[(i, q)];
                if a <= opt.pivot_tol {
                    continue;
                }
                let ratio = self.rhs(i).max(T::zero()) / a;
                leaving = match leaving {
                    None => Some((i, ratio)),
                    Some((k, best)) => {
                        let tie = (ratio - best).abs() <= T::tol(1e-12) * (T::one() + best.abs());
                        if (tie && self.basis[i] < self.basis[k]) || (!tie && ratio < best) {
                            Some((i, ratio))
                        } else {
                            Some((k, best))
                        }
                    }
                };
            }
            let Some((r, step)) = leaving else { return Ok(PhaseEnd::Unbounded) };

            if step <= opt.feasibility_tol {
                stalled += 1;
                if stalled >= opt.stall_threshold {
                    bland = true;
                }
            } else {
                stalled = 0;
            }
            is_basic[self.basis[r]] = false;
            is_basic[q] = true;
            self.pivot(r, q);
            self.iterations += 1;
        }
    }

    /// Pivots basic artificials (all at zero after a feasible phase one) out
    /// of the basis. Rows where that is impossible are redundant and keep
    /// their artificial, which phase two never lets re-enter.
    fn drive_out_artificials(&mut self, sf: &StandardForm<T>, tol: T) {
        for r in 0..self.basis.len() {
            if !sf.is_artificial(self.basis[r]) {
                continue;
            }
            let best = (0..sf.first_artificial)
                .filter(|j| !self.basis.contains(j))
                .map(|j| (j, self.body[(r, j)].abs()))
                .filter(|&(_, a)| a > tol)
                .fold(None, |acc: Option<(usize, T)>, cur| match acc {
                    Some(b) if b.1 >= cur.1 => Some(b),
                    _ => Some(cur),
                });
            if let Some((q, _)) = best {
                self.pivot(r, q);
            }
        }
    }

    fn read_solution(&self, sf: &StandardForm<T>) -> (Vec<T>, Vec<T>) {
        let values = (0..self.basis.len()).map(|i| self.rhs(i)).collect();
        let y = sf.duals_of_basis(&self.basis, &sf.cost, T::zero()).unwrap_or_else(|| vec![T::zero(); self.basis.len()]);
        (values, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn lp(c: &[f64], eq: &[Vec<f64>], f: &[f64], ge: &[Vec<f64>], h: &[f64]) -> LpProblem<f64> {
        let n = c.len();
        let mat = |rows: &[Vec<f64>]| if rows.is_empty() { Matrix::zeros(0, n) } else { Matrix::from_rows(rows) };
        LpProblem::new(c.to_vec(), mat(eq), f.to_vec(), mat(ge), h.to_vec()).unwrap()
    }

    #[test]
    fn single_lower_bound() {
        let sol = solve_lp(&lp(&[1.0], &[], &[], &[vec![1.0]], &[3.0])).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_abs_diff_eq!(sol.primal[0], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.ineq_duals[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.objective, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn unbounded_ray() {
        // min -x with x only bounded below
        let sol = solve_lp(&lp(&[-1.0], &[], &[], &[vec![1.0]], &[0.0])).unwrap();
        assert_eq!(sol.status, LpStatus::Unbounded);
        let sol = solve_lp(&lp(&[-1.0], &[], &[], &[], &[])).unwrap();
        assert_eq!(sol.status, LpStatus::Unbounded);
    }

    #[test]
    fn infeasible_with_certificate() {
        // x >= 2 and -x >= -1
        let p = lp(&[1.0], &[], &[], &[vec![1.0], vec![-1.0]], &[2.0, -1.0]);
        let sol = solve_lp(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
        let (y_eq, y_ge) = sol.farkas.unwrap();
        assert!(y_eq.is_empty());
        assert!(y_ge.iter().all(|&v| v >= -1e-12));
        let combo = p.ineq_matrix.tr_mul_vec(&y_ge);
        assert_abs_diff_eq!(combo[0], 0.0, epsilon = 1e-12);
        let value: f64 = y_ge.iter().zip(&p.ineq_rhs).map(|(a, b)| a * b).sum();
        assert!(value > 0.0);
    }

    #[test]
    fn equality_duals_and_gap() {
        // min x + 2y  s.t. x + y = 4, x <= 3, y >= 0
        let p = lp(&[1.0, 2.0], &[vec![1.0, 1.0]], &[4.0], &[vec![-1.0, 0.0], vec![0.0, 1.0]], &[-3.0, 0.0]);
        let sol = solve_lp(&p).unwrap();
        assert_abs_diff_eq!(sol.primal[0], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.primal[1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.eq_duals[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.ineq_duals[0], 1.0, epsilon = 1e-12);
        let r = p.residuals(&sol.primal, &sol.eq_duals, &sol.ineq_duals);
        assert!(r.primal < 1e-12 && r.dual < 1e-12 && r.complementarity < 1e-12 && r.gap < 1e-12);
    }

    #[test]
    fn redundant_equalities_and_empty_rows() {
        // x + y = 2 stated twice, plus an empty equality 0 = 0
        let p = lp(
            &[1.0, 1.0],
            &[vec![1.0, 1.0], vec![2.0, 2.0], vec![0.0, 0.0]],
            &[2.0, 4.0, 0.0],
            &[vec![1.0, 0.0], vec![0.0, 1.0]],
            &[0.0, 0.0],
        );
        let sol = solve_lp(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_abs_diff_eq!(sol.objective, 2.0, epsilon = 1e-12);
        let r = p.residuals(&sol.primal, &sol.eq_duals, &sol.ineq_duals);
        assert!(r.dual < 1e-12 && r.gap < 1e-12, "{r:?}");
        // an empty row with nonzero rhs is infeasible
        let p = lp(&[1.0], &[vec![0.0]], &[1.0], &[], &[]);
        assert_eq!(solve_lp(&p).unwrap().status, LpStatus::Infeasible);
    }

    fn nonnegative_rows(n: usize) -> Vec<Vec<f64>> {
        (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
    }

    #[test]
    fn terminates_on_beale_cycling_example() {
        // min -3/4 x1 + 20 x2 - 1/2 x3 + 6 x4
        // s.t. 1/4 x1 - 8 x2 - x3 + 9 x4 <= 0
        //      1/2 x1 - 12 x2 - 1/2 x3 + 3 x4 <= 0
        //      x3 <= 1, x >= 0
        let mut ge = vec![
            vec![-0.25, 8.0, 1.0, -9.0],
            vec![-0.5, 12.0, 0.5, -3.0],
            vec![0.0, 0.0, -1.0, 0.0],
        ];
        ge.extend(nonnegative_rows(4));
        let p = lp(&[-0.75, 20.0, -0.5, 6.0], &[], &[], &ge, &[0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0]);
        for stall in [0, 1, 50] {
            let opts = SimplexOptions { stall_threshold: stall, ..Default::default() };
            let sol = solve_lp_with(&p, &opts).unwrap();
            assert_abs_diff_eq!(sol.objective, -1.25, epsilon = 1e-9);
        }
    }

    #[test]
    fn terminates_on_kuhn_cycling_example() {
        // min -2x1 - 3x2 + x3 + 12x4
        // s.t. -2x1 - 9x2 + x3 + 9x4 <= 0
        //      1/3 x1 + x2 - 1/3 x3 - 2x4 <= 0
        //      2x1 + 3x2 - x3 - 12x4 <= 2, x >= 0
        let mut ge = vec![
            vec![2.0, 9.0, -1.0, -9.0],
            vec![-1.0 / 3.0, -1.0, 1.0 / 3.0, 2.0],
            vec![-2.0, -3.0, 1.0, 12.0],
        ];
        ge.extend(nonnegative_rows(4));
        let p = lp(&[-2.0, -3.0, 1.0, 12.0], &[], &[], &ge, &[0.0, 0.0, -2.0, 0.0, 0.0, 0.0, 0.0]);
        for stall in [0, 1, 50] {
            let opts = SimplexOptions { stall_threshold: stall, ..Default::default() };
            let sol = solve_lp_with(&p, &opts).unwrap();
            assert_abs_diff_eq!(sol.objective, -2.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn rejects_inconsistent_dimensions() {
        let err = LpProblem::new(vec![1.0, 2.0], Matrix::zeros(1, 2), vec![], Matrix::zeros(0, 2), vec![]);
        assert!(matches!(err, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn single_precision_solve() {
        let p = LpProblem::<f32>::new(
            vec![1.0, 2.0],
            Matrix::from_rows(&[vec![1.0, 1.0]]),
            vec![4.0],
            Matrix::from_rows(&[vec![-1.0, 0.0], vec![0.0, 1.0]]),
            vec![-3.0, 0.0],
        )
        .unwrap();
        let sol = solve_lp(&p).unwrap();
        assert!((sol.objective - 5.0).abs() < 1e-5);
    }
}
