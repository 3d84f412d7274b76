//! Chernoff information between stationary Markov sources.
//!
//! `C(p1, p2)` is the smallest `D_c(p || p1)` over stationary laws `p` on the
//! decision boundary `D_c(p || p1) = D_c(p || p2)`. The boundary condition
//! reduces to `sum_ab p(ab) log2(p2(b|a) / p1(b|a)) = 0`, a hyperplane, so the
//! problem is a convex minimization under linear constraints.

mod oracle;
pub mod projection;

use serde::{Deserialize, Serialize};

pub use oracle::grid_oracle_chernoff;
pub use projection::{project, LinearConstraint, Projection, SolverOptions};

use crate::error::{Error, Result};
use crate::markov::{conditional_relative_entropy, JointDistribution, MarkovModel};
use crate::par;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChernoffResult {
    /// Bits per symbol.
    pub value: f64,
    pub p_star: JointDistribution,
    /// `|D_c(p* || p1) - D_c(p* || p2)|`.
    pub constraint_gap: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Coefficients `r(ab) = log2(p2(b|a) / p1(b|a))` of the decision boundary
/// `D_c(p || p1) - D_c(p || p2) = r . p`.
pub fn boundary_coefficients(p1: &MarkovModel, p2: &MarkovModel) -> Vec<f64> {
    let k = p1.alphabet().size();
    let (t1, t2) = (p1.transitions(), p2.transitions());
    (0..p1.joint().len())
        .map(|c| {
            let (a, b) = (c / k, c % k);
            match (t1.get(a, b), t2.get(a, b)) {
                (Some(x), Some(y)) => (y / x).log2(),
                _ => f64::NAN,
            }
        })
        .collect()
}

fn check_pair(p1: &MarkovModel, p2: &MarkovModel) -> Result<(f64, f64)> {
    if !p1.joint().same_shape(p2.joint()) {
        return Err(Error::ShapeMismatch("models differ in order or alphabet".into()));
    }
    p1.require_positive("first model")?;
    p2.require_positive("second model")?;
    let d12 = conditional_relative_entropy(p1.joint(), p2.joint());
    let d21 = conditional_relative_entropy(p2.joint(), p1.joint());
    if d12 <= 1e-14 && d21 <= 1e-14 {
        return Err(Error::Degenerate("the two models have identical transition laws".into()));
    }
    Ok((d12, d21))
}

/// Solves for the Chernoff information and its minimizer `p*`.
///
/// `tol` bounds the accepted boundary gap. The search starts from the mixture
/// of `p1` and `p2` that lies on the boundary, which is strictly positive and
/// feasible.
pub fn chernoff_information(p1: &MarkovModel, p2: &MarkovModel, tol: f64) -> Result<ChernoffResult> {
    let options = SolverOptions { constraint_tol: tol, ..SolverOptions::default() };
    chernoff_with_options(p1, p2, &options)
}

pub fn chernoff_with_options(p1: &MarkovModel, p2: &MarkovModel, options: &SolverOptions) -> Result<ChernoffResult> {
    let (d12, d21) = check_pair(p1, p2)?;
    let weight = d21 / (d12 + d21);
    let start = p1.joint().mix(p2.joint(), weight).into_probs();
    let boundary = LinearConstraint { coefficients: boundary_coefficients(p1, p2), rhs: 0.0 };
    let k = p1.alphabet().size();
    let proj = project(p1.joint().probs(), k, &[boundary], start, options);

    let p_star = JointDistribution::new(p1.order(), p1.alphabet().clone(), proj.p)?;
    let v1 = conditional_relative_entropy(&p_star, p1.joint());
    let v2 = conditional_relative_entropy(&p_star, p2.joint());
    let constraint_gap = (v1 - v2).abs();
    Ok(ChernoffResult {
        value: v1,
        p_star,
        constraint_gap,
        iterations: proj.iterations,
        converged: proj.converged && constraint_gap <= options.constraint_tol,
    })
}

/// Pairwise Chernoff information of a community and the resulting
/// resolvability threshold on the normalized contig length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvabilityReport {
    pub c_min: f64,
    /// 0-based indices of the closest pair.
    pub argmin_pair: (usize, usize),
    /// `1 / c_min`.
    pub lbar_threshold: f64,
    /// Symmetric matrix of `C(p_k, p_l)`, zero diagonal.
    pub per_pair: Vec<Vec<f64>>,
    pub converged: Vec<Vec<bool>>,
    pub all_converged: bool,
}

pub fn min_pairwise_chernoff(models: &[MarkovModel], tol: f64) -> Result<ResolvabilityReport> {
    let m = models.len();
    if m < 2 {
        return Err(Error::InvalidInput("need at least two models".into()));
    }
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|k| (k + 1..m).map(move |l| (k, l))).collect();
    let results = par::map_range(pairs.len(), |i| {
        let (k, l) = pairs[i];
        chernoff_information(&models[k], &models[l], tol)
    });

    let mut per_pair = vec![vec![0.0; m]; m];
    let mut converged = vec![vec![true; m]; m];
    let mut best = (f64::INFINITY, (0, 1));
    for (&(k, l), result) in pairs.iter().zip(results) {
        let r = result.map_err(|e| match e {
            Error::Degenerate(msg) => Error::Degenerate(format!("models {} and {}: {msg}", k + 1, l + 1)),
            other => other,
        })?;
        per_pair[k][l] = r.value;
        per_pair[l][k] = r.value;
        converged[k][l] = r.converged;
        converged[l][k] = r.converged;
        if r.value < best.0 {
            best = (r.value, (k, l));
        }
    }
    let all_converged = converged.iter().flatten().all(|&c| c);
    Ok(ResolvabilityReport {
        c_min: best.0,
        argmin_pair: best.1,
        lbar_threshold: 1.0 / best.0,
        per_pair,
        converged,
        all_converged,
    })
}
