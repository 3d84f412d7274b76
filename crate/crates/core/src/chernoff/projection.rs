//! Minimization of `D_c(p || q)` over stationary joint laws `p` subject to
//! extra linear equality constraints.
//!
//! `D_c(. || q)` is convex and the consistency, mass and extra constraints are
//! linear, so a damped Newton method on the equality-constrained KKT system
//! converges quadratically from any strictly positive feasible start. The step
//! length is capped so that every entry stays above a positivity floor.

use std::f64::consts::LN_2;

use nalgebra::{DMatrix, DVector};

use crate::markov::dc_slices;

const DECREMENT_TOL: f64 = 1e-18;
const STALL_DECREMENT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Largest accepted violation of any linear constraint.
    pub constraint_tol: f64,
    /// Largest accepted entry of the KKT (reduced gradient) residual.
    pub gradient_tol: f64,
    pub max_iterations: usize,
    /// Entries are kept at or above this value.
    pub floor: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { constraint_tol: 1e-8, gradient_tol: 1e-8, max_iterations: 10_000, floor: 1e-12 }
    }
}

/// `coefficients . p = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearConstraint {
    pub coefficients: Vec<f64>,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Projection {
    pub p: Vec<f64>,
    /// `D_c(p || q)` in bits.
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub kkt_residual: f64,
    pub constraint_residual: f64,
}

struct Problem<'a> {
    q: &'a [f64],
    k: usize,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

impl Problem<'_> {
    fn n(&self) -> usize {
        self.q.len()
    }

    fn objective(&self, p: &[f64]) -> f64 {
        dc_slices(p, self.q, self.k)
    }

    /// `d D_c / d p(ab) = log2(p(b|a) / q(b|a))`.
    fn gradient(&self, p: &[f64]) -> Vec<f64> {
        let k = self.k;
        let mut g = vec![0.0; self.n()];
        for (a, (prow, qrow)) in p.chunks_exact(k).zip(self.q.chunks_exact(k)).enumerate() {
            let pa: f64 = prow.iter().sum();
            let qa: f64 = qrow.iter().sum();
            for b in 0..k {
                g[a * k + b] = ((prow[b] / pa) / (qrow[b] / qa)).log2();
            }
        }
        g
    }

    /// Writes the Hessian blocks `(diag(1/p(ab)) - 1/p(a)) / ln 2` into the
    /// top-left corner of `kkt`.
    fn write_hessian(&self, p: &[f64], kkt: &mut DMatrix<f64>) {
        let k = self.k;
        for (a, prow) in p.chunks_exact(k).enumerate() {
            let pa: f64 = prow.iter().sum();
            for i in 0..k {
                for j in 0..k {
                    let mut h = -1.0 / pa;
                    if i == j {
                        h += 1.0 / prow[i];
                    }
                    kkt[(a * k + i, a * k + j)] = h / LN_2;
                }
            }
        }
    }

    fn hessian_times(&self, p: &[f64], v: &[f64]) -> Vec<f64> {
        let k = self.k;
        let mut out = vec![0.0; self.n()];
        for (a, (prow, vrow)) in p.chunks_exact(k).zip(v.chunks_exact(k)).enumerate() {
            let pa: f64 = prow.iter().sum();
            let vs: f64 = vrow.iter().sum();
            for b in 0..k {
                out[a * k + b] = (vrow[b] / prow[b] - vs / pa) / LN_2;
            }
        }
        out
    }

    fn residuals(&self, p: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, rhs)| row.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() - rhs)
            .collect()
    }
}

/// Mass and consistency rows. One consistency row is redundant (they sum to
/// zero), so the last context is dropped.
fn structural_rows(n: usize, k: usize) -> Vec<Vec<f64>> {
    let contexts = n / k;
    let mut rows = vec![vec![1.0; n]];
    for a in 0..contexts - 1 {
        let mut row = vec![0.0; n];
        for (c, coef) in row.iter_mut().enumerate() {
            if c / k == a {
                *coef += 1.0;
            }
            if c % contexts == a {
                *coef -= 1.0;
            }
        }
        rows.push(row);
    }
    rows
}

/// Minimizes `D_c(p || q)` over consistent distributions satisfying `extra`.
///
/// `start` must be strictly positive, consistent, of unit mass and satisfy the
/// extra constraints (up to rounding). `q` must be strictly positive.
pub fn project(
    q: &[f64],
    alphabet_size: usize,
    extra: &[LinearConstraint],
    start: Vec<f64>,
    options: &SolverOptions,
) -> Projection {
    let n = q.len();
    let mut rows = structural_rows(n, alphabet_size);
    let mut rhs = vec![0.0; rows.len()];
    rhs[0] = 1.0;
    for c in extra {
        assert_eq!(c.coefficients.len(), n, "constraint length mismatch");
        rows.push(c.coefficients.clone());
        rhs.push(c.rhs);
    }
    let problem = Problem { q, k: alphabet_size, rows, rhs };
    let m = problem.rows.len();

    let mut p = start;
    for x in p.iter_mut() {
        *x = x.max(options.floor);
    }
    let mut value = problem.objective(&p);
    let mut iterations = 0;
    let mut kkt_residual = f64::INFINITY;
    let mut converged = false;
    let mut kkt = DMatrix::<f64>::zeros(n + m, n + m);
    for (i, row) in problem.rows.iter().enumerate() {
        for (j, &a) in row.iter().enumerate() {
            kkt[(n + i, j)] = a;
            kkt[(j, n + i)] = a;
        }
    }

    while iterations < options.max_iterations {
        iterations += 1;
        let grad = problem.gradient(&p);
        let resid = problem.residuals(&p);
        problem.write_hessian(&p, &mut kkt);
        let mut b = DVector::<f64>::zeros(n + m);
        for i in 0..n {
            b[i] = -grad[i];
        }
        for i in 0..m {
            b[n + i] = -resid[i];
        }
        let Some(sol) = kkt.clone().lu().solve(&b) else {
            break;
        };
        let step: Vec<f64> = sol.iter().take(n).copied().collect();
        // At the new multipliers, grad + A^T w = -H step.
        kkt_residual = problem.hessian_times(&p, &step).iter().fold(0.0, |acc: f64, x| acc.max(x.abs()));
        let constraint_residual = resid.iter().fold(0.0, |acc: f64, x| acc.max(x.abs()));
        let feasible = constraint_residual <= options.constraint_tol;
        // Newton decrement: the predicted objective decrease of a full step.
        let decrement = -grad.iter().zip(&step).map(|(g, d)| g * d).sum::<f64>();
        let scale = value.abs().max(1.0);
        if feasible && (kkt_residual <= options.gradient_tol || decrement <= DECREMENT_TOL * scale) {
            converged = true;
            break;
        }

        let mut t_max: f64 = 1.0;
        for (x, d) in p.iter().zip(&step) {
            if *d < 0.0 {
                t_max = t_max.min(0.99 * (x - options.floor) / -d);
            }
        }
        let slope: f64 = grad.iter().zip(&step).map(|(g, d)| g * d).sum();
        let mut t = t_max.max(0.0);
        let mut accepted = false;
        let mut stalled = false;
        while t > 1e-14 {
            let trial: Vec<f64> = p.iter().zip(&step).map(|(x, d)| (x + t * d).max(options.floor)).collect();
            let v = problem.objective(&trial);
            // Infeasible starts need the merit of moving toward the constraints,
            // so only demand descent once residuals are negligible.
            let ok = if constraint_residual > options.constraint_tol {
                v.is_finite()
            } else {
                v <= value + 0.25 * t * slope.min(0.0) + 1e-15 * value.abs()
            };
            if ok {
                p = trial;
                stalled = v >= value;
                value = v;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
        // No decrease left to find in floating point.
        if stalled && feasible && decrement <= STALL_DECREMENT_TOL * scale {
            converged = true;
            break;
        }
    }

    let total: f64 = p.iter().sum();
    for x in p.iter_mut() {
        *x /= total;
    }
    let value = problem.objective(&p);
    let constraint_residual = problem.residuals(&p).iter().fold(0.0, |acc: f64, x| acc.max(x.abs()));
    Projection { p, value, iterations, converged, kkt_residual, constraint_residual }
}
