//! Shared test fixtures and independent oracles.
#![allow(dead_code)]

use std::path::PathBuf;

use lmpcirc_core::dcopf::{solve_opf, DcopfSolution};
use lmpcirc_core::network::{generate_random_network, parse_network, Network};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn example_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../cli/examples").join(name)
}

pub fn load_example(name: &str) -> Network<f64> {
    let text = std::fs::read_to_string(example_path(name)).expect("shipped example exists");
    parse_network(&text).expect("shipped example is valid")
}

/// Outcome of brute-force vertex enumeration.
#[derive(Debug, Clone)]
pub enum Oracle {
    Infeasible,
    Unbounded,
    /// Optimal value and every optimal vertex.
    Optimal { value: f64, argmins: Vec<Vec<f64>> },
}

/// Dense LP `min cᵀx, E x = f, G x ≥ h, x free` as plain rows.
#[derive(Debug, Clone)]
pub struct DenseLp {
    pub c: Vec<f64>,
    pub eq: Vec<Vec<f64>>,
    pub f: Vec<f64>,
    pub ge: Vec<Vec<f64>>,
    pub h: Vec<f64>,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

fn stack(rows: &[&Vec<f64>], n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j])
}

pub fn rank(rows: &[&Vec<f64>], n: usize) -> usize {
    if rows.is_empty() || n == 0 {
        return 0;
    }
    stack(rows, n).rank(1e-9)
}

impl DenseLp {
    pub fn n(&self) -> usize {
        self.c.len()
    }

    /// Requires a pointed feasible region: `[E; G]` has full column rank and `E` full row rank.
    pub fn is_well_posed(&self) -> bool {
        let all: Vec<&Vec<f64>> = self.eq.iter().chain(&self.ge).collect();
        let eq: Vec<&Vec<f64>> = self.eq.iter().collect();
        rank(&all, self.n()) == self.n() && rank(&eq, self.n()) == self.eq.len()
    }

    fn feasible(&self, x: &[f64]) -> bool {
        let dot = |a: &Vec<f64>| a.iter().zip(x).map(|(p, q)| p * q).sum::<f64>();
        let scale = 1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        self.eq.iter().zip(&self.f).all(|(a, &b)| (dot(a) - b).abs() <= 1e-7 * scale)
            && self.ge.iter().zip(&self.h).all(|(a, &b)| dot(a) >= b - 1e-7 * scale)
    }

    pub fn enumerate(&self) -> Oracle {
        let n = self.n();
        let me = self.eq.len();
        assert!(me <= n);
        let mut vertices: Vec<Vec<f64>> = Vec::new();
        for subset in combinations(self.ge.len(), n - me) {
            let rows: Vec<&Vec<f64>> = self.eq.iter().chain(subset.iter().map(|&i| &self.ge[i])).collect();
            let rhs: Vec<f64> = self.f.iter().copied().chain(subset.iter().map(|&i| self.h[i])).collect();
            let a = stack(&rows, n);
            if a.rank(1e-9) < n {
                continue;
            }
            let Some(x) = a.lu().solve(&DVector::from_vec(rhs)) else { continue };
            let x: Vec<f64> = x.iter().copied().collect();
            if self.feasible(&x) {
                vertices.push(x);
            }
        }
        if vertices.is_empty() {
            return Oracle::Infeasible;
        }
        if n > me && self.has_descent_ray() {
            return Oracle::Unbounded;
        }
        let value_of = |x: &Vec<f64>| self.c.iter().zip(x).map(|(p, q)| p * q).sum::<f64>();
        let value = vertices.iter().map(value_of).fold(f64::INFINITY, f64::min);
        let tol = 1e-7 * (1.0 + value.abs());
        let argmins = vertices.into_iter().filter(|x| value_of(x) <= value + tol).collect();
        Oracle::Optimal { value, argmins }
    }

    /// Extreme rays of `{d : E d = 0, G d ≥ 0}` with `cᵀd < 0`.
    fn has_descent_ray(&self) -> bool {
        let n = self.n();
        let me = self.eq.len();
        for subset in combinations(self.ge.len(), n - 1 - me) {
            let rows: Vec<&Vec<f64>> = self.eq.iter().chain(subset.iter().map(|&i| &self.ge[i])).collect();
            let d: Vec<f64> = if rows.is_empty() {
                assert_eq!(n, 1);
                vec![1.0]
            } else {
                let a = stack(&rows, n);
                if a.rank(1e-9) != n - 1 {
                    continue;
                }
                // null vector: right singular vector of the smallest singular value
                let padded = DMatrix::from_fn(n, n, |i, j| if i < rows.len() { a[(i, j)] } else { 0.0 });
                let svd = padded.svd(false, true);
                let v_t = svd.v_t.expect("requested V");
                let (k, _) = svd
                    .singular_values
                    .iter()
                    .enumerate()
                    .fold((0, f64::INFINITY), |b, (k, &s)| if s < b.1 { (k, s) } else { b });
                v_t.row(k).iter().copied().collect()
            };
            for sign in [1.0, -1.0] {
                let d: Vec<f64> = d.iter().map(|v| v * sign).collect();
                let dot = |a: &Vec<f64>| a.iter().zip(&d).map(|(p, q)| p * q).sum::<f64>();
                if self.ge.iter().all(|g| dot(g) >= -1e-9) && dot(&self.c) < -1e-9 {
                    return true;
                }
            }
        }
        false
    }
}

/// Small LP with integer data: up to 8 variables and 10 rows, pointed.
pub fn random_small_lp(rng: &mut ChaCha8Rng) -> DenseLp {
    loop {
        let n = rng.gen_range(1..=8);
        let me = rng.gen_range(0..=n.min(3).min(n - 1));
        let lo = (n - me).max(1);
        let mi = rng.gen_range(lo..=10 - me);
        let coef = |rng: &mut ChaCha8Rng| {
            if rng.gen_bool(0.3) { 0.0 } else { f64::from(rng.gen_range(-3..=3)) }
        };
        let eq: Vec<Vec<f64>> = (0..me).map(|_| (0..n).map(|_| coef(rng)).collect()).collect();
        let ge: Vec<Vec<f64>> = (0..mi).map(|_| (0..n).map(|_| coef(rng)).collect()).collect();
        let f = (0..me).map(|_| f64::from(rng.gen_range(-5..=5))).collect();
        let h = (0..mi).map(|_| f64::from(rng.gen_range(-6..=4))).collect();
        let c = (0..n).map(|_| f64::from(rng.gen_range(-4..=4))).collect();
        let lp = DenseLp { c, eq, f, ge, h };
        if lp.is_well_posed() {
            return lp;
        }
    }
}

pub fn lp_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random congested meshed instance with a marginal injector.
pub struct Instance {
    pub seed: u64,
    pub net: Network<f64>,
    pub sol: DcopfSolution<f64>,
}

/// The first `count` seeds from `first_seed` whose OPF is optimal, congested,
/// and has at least one marginal injector. Bus counts cycle through 5..=30.
pub fn congested_corpus(first_seed: u64, count: usize) -> Vec<Instance> {
    let mut out = Vec::with_capacity(count);
    let mut seed = first_seed;
    while out.len() < count {
        let n = 5 + (seed % 26) as usize;
        let p = (3.0 / n as f64).min(0.6);
        let net: Network<f64> = generate_random_network(seed, n, p).expect("valid generator arguments");
        if let Ok(sol) = solve_opf(&net) {
            if sol.is_congested(1e-7) && !sol.marginal.is_empty() {
                out.push(Instance { seed, net, sol });
            }
        }
        seed += 1;
    }
    out
}

/// The OPF primal over `[p; θ without bus 0]` and its dual over `[λ; γ; μ]`
/// (as a minimization of the negated dual objective), both in plain rows.
pub fn opf_primal_and_dual(net: &Network<f64>) -> (DenseLp, DenseLp) {
    use lmpcirc_core::network::assemble_lp;
    let opf = assemble_lp(net);
    let n = net.bus_count();
    let m = net.injectors().len();
    let rc = opf.injection_limits.rows();
    let rd = opf.angle_limits.rows();

    let nv = m + n - 1;
    let eq: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = opf.location.row(i).to_vec();
            row.extend((1..n).map(|k| opf.admittance[(i, k)]));
            row
        })
        .collect();
    let mut ge: Vec<Vec<f64>> = Vec::new();
    for r in 0..rc {
        let mut row = opf.injection_limits.row(r).to_vec();
        row.resize(nv, 0.0);
        ge.push(row);
    }
    for r in 0..rd {
        let mut row = vec![0.0; m];
        row.extend((1..n).map(|k| opf.angle_limits[(r, k)]));
        ge.push(row);
    }
    let mut c = opf.cost.clone();
    c.resize(nv, 0.0);
    let h: Vec<f64> = opf.injection_rhs.iter().chain(&opf.angle_rhs).copied().collect();
    let primal = DenseLp { c, eq, f: opf.demand.clone(), ge, h };

    // dual variables: λ (n), γ (rc), μ (rd)
    let dv = n + rc + rd;
    let mut deq = Vec::new();
    let mut df = Vec::new();
    for k in 0..m {
        let mut row = vec![0.0; dv];
        for i in 0..n {
            row[i] = opf.location[(i, k)];
        }
        for r in 0..rc {
            row[n + r] = opf.injection_limits[(r, k)];
        }
        deq.push(row);
        df.push(opf.cost[k]);
    }
    for k in 1..n {
        let mut row = vec![0.0; dv];
        for i in 0..n {
            row[i] = opf.admittance[(i, k)];
        }
        for r in 0..rd {
            row[n + rc + r] = opf.angle_limits[(r, k)];
        }
        deq.push(row);
        df.push(0.0);
    }
    let dge: Vec<Vec<f64>> = (n..dv)
        .map(|j| (0..dv).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut dc: Vec<f64> = opf.demand.iter().map(|v| -v).collect();
    dc.extend(opf.injection_rhs.iter().map(|v| -v));
    dc.extend(opf.angle_rhs.iter().map(|v| -v));
    let dual = DenseLp { c: dc, eq: deq, f: df, ge: dge, h: vec![0.0; rc + rd] };
    (primal, dual)
}

/// Node voltages of a resistor network with current injections, ground removed, via nalgebra.
pub fn nodal_oracle(n: usize, branches: &[(usize, usize, f64)], injections: &[f64], ground: usize) -> Vec<f64> {
    let keep: Vec<usize> = (0..n).filter(|&k| k != ground).collect();
    let mut g = DMatrix::<f64>::zeros(n, n);
    for &(i, j, s) in branches {
        g[(i, i)] += s;
        g[(j, j)] += s;
        g[(i, j)] -= s;
        g[(j, i)] -= s;
    }
    let reduced = DMatrix::from_fn(n - 1, n - 1, |a, b| g[(keep[a], keep[b])]);
    let rhs = DVector::from_fn(n - 1, |a, _| injections[keep[a]]);
    let v = reduced.lu().solve(&rhs).expect("connected network");
    let mut full = vec![0.0; n];
    for (a, &k) in keep.iter().enumerate() {
        full[k] = v[a];
    }
    full
}
