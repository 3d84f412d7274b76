use serde::{Deserialize, Serialize};

use super::{for_trial_chunks, wilson_halfwidth};
use crate::chernoff::{project, LinearConstraint, SolverOptions};
use crate::error::{invalid, Error, Result};
use crate::markov::{
    conditional_relative_entropy, empirical_type_of, l1_slices, log2_type_count_bound, JointDistribution,
    MarkovModel, TypeCountBound,
};
use crate::par;
use crate::rng;
use crate::simulator::Sampler;

/// Largest joint vector for which the far set is split by sign patterns.
pub const MAX_GRAMS: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SanovCheck {
    /// Fraction of contigs whose type is at `l1` distance `>= eps / 2` from
    /// the center.
    pub empirical_prob: f64,
    pub halfwidth: f64,
    /// `|P_L| 2^(-L D_c(p* || q))`; `None` when the projection failed.
    pub bound: Option<f64>,
    pub log2_bound: Option<f64>,
    /// `inf D_c(p || q)` over the far set; infinite when the set is empty.
    pub divergence: Option<f64>,
    pub p_star: Option<JointDistribution>,
    pub type_count: TypeCountBound,
}

/// Compares the simulated probability that a length-`len` type from `q` lies
/// outside the `l1` ball of radius `eps / 2` around `center` with the
/// method-of-types bound. The initial-state factor is taken as 1, which can
/// only loosen the bound.
pub fn sanov_bound_check(
    q: &MarkovModel,
    center: &MarkovModel,
    eps: f64,
    len: usize,
    trials: u64,
    seed: u64,
    type_count: TypeCountBound,
) -> Result<SanovCheck> {
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(invalid("eps must be a non-negative number"));
    }
    super::check_pair(q, center)?;
    if len < q.order() + 1 {
        return Err(invalid(format!("length {len} is shorter than order + 1")));
    }
    q.require_positive("source model")?;
    let radius = eps / 2.0;

    let sampler = Sampler::new(q);
    let c = center.joint().probs();
    let far: u64 = for_trial_chunks(trials, |range| {
        let mut buf = Vec::with_capacity(len);
        let mut hits = 0u64;
        for i in range {
            let mut r = rng::stream(seed, i);
            sampler.sample_into(len, &mut r, &mut buf);
            let t = empirical_type_of(&buf, q.order(), q.alphabet()).expect("sampled contig is valid");
            hits += u64::from(l1_slices(t.probs(), c) >= radius);
        }
        hits
    })
    .into_iter()
    .sum();

    let projection = far_set_projection(q, center, radius);
    let log_types = log2_type_count_bound(len, q.order(), q.alphabet(), type_count);
    let (divergence, p_star) = match projection {
        Ok((d, p)) => (Some(d), p),
        Err(_) => (None, None),
    };
    let log2_bound = divergence.map(|d| if d.is_infinite() { f64::NEG_INFINITY } else { log_types - len as f64 * d });
    Ok(SanovCheck {
        empirical_prob: far as f64 / trials as f64,
        halfwidth: wilson_halfwidth(far, trials),
        bound: log2_bound.map(f64::exp2),
        log2_bound,
        divergence,
        p_star,
        type_count,
    })
}

/// `inf { D_c(p || q) : p stationary, |p - center|_1 >= radius }` and its
/// minimizer.
///
/// The far set is the union over sign vectors `s` of the half-spaces
/// `s . (p - center) >= radius`. Each piece is a convex problem whose
/// minimizer lies on the bounding hyperplane unless `q` is already inside.
pub fn far_set_projection(q: &MarkovModel, center: &MarkovModel, radius: f64) -> Result<(f64, Option<JointDistribution>)> {
    let n = q.joint().len();
    if n > MAX_GRAMS {
        return Err(Error::Unsupported(format!("far-set projection handles at most {MAX_GRAMS} grams")));
    }
    let qp = q.joint().probs();
    let c = center.joint().probs();
    if l1_slices(qp, c) >= radius {
        return Ok((0.0, Some(q.joint().clone())));
    }
    let k = q.alphabet().size();
    let cycles = simple_cycles(n / k, k);
    let options = SolverOptions::default();

    let pieces = par::map_range(1usize << n, |mask| -> Option<(f64, Vec<f64>, bool)> {
        let s: Vec<f64> = (0..n).map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 }).collect();
        let rhs = radius + dot(&s, c);
        let (best_val, best_cycle) = cycles
            .iter()
            .map(|cy| (cy.iter().map(|&g| s[g]).sum::<f64>() / cy.len() as f64, cy))
            .max_by(|a, b| a.0.total_cmp(&b.0))?;
        let sq = dot(&s, qp);
        if best_val < rhs - 1e-12 {
            return None;
        }
        let cycle_law = cycle_distribution(best_cycle, n);
        if best_val <= rhs + 1e-12 {
            return Some((crate::markov::dc_slices(&cycle_law, qp, k), cycle_law, true));
        }
        let lambda = (rhs - sq) / (best_val - sq);
        let start: Vec<f64> = cycle_law.iter().zip(qp).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
        let constraint = LinearConstraint { coefficients: s, rhs };
        let proj = project(qp, k, &[constraint], start, &options);
        Some((proj.value, proj.p, proj.converged))
    });

    let mut best: Option<(f64, Vec<f64>)> = None;
    for (value, p, converged) in pieces.into_iter().flatten() {
        if !converged {
            return Err(Error::Degenerate("far-set projection did not converge".into()));
        }
        if best.as_ref().is_none_or(|b| value < b.0) {
            best = Some((value, p));
        }
    }
    match best {
        None => Ok((f64::INFINITY, None)),
        Some((_, p)) => {
            let joint = JointDistribution::new(q.order(), q.alphabet().clone(), p)?;
            Ok((conditional_relative_entropy(&joint, q.joint()), Some(joint)))
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Uniform law on the grams of a cycle; stationary by flow balance.
fn cycle_distribution(cycle: &[usize], n: usize) -> Vec<f64> {
    let mut p = vec![0.0; n];
    for &g in cycle {
        p[g] += 1.0 / cycle.len() as f64;
    }
    p
}

/// Simple cycles of the de Bruijn graph on `contexts` nodes, each as the list
/// of gram indices along it. Every cycle is reported once, starting from its
/// smallest node.
fn simple_cycles(contexts: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    let mut on_path = vec![false; contexts];
    for start in 0..contexts {
        on_path[start] = true;
        walk(start, start, contexts, k, &mut path, &mut on_path, &mut out);
        on_path[start] = false;
    }
    out
}

fn walk(
    start: usize,
    node: usize,
    contexts: usize,
    k: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    for b in 0..k {
        let gram = node * k + b;
        let next = gram % contexts;
        if next == start {
            path.push(gram);
            out.push(path.clone());
            path.pop();
        } else if next > start && !on_path[next] {
            on_path[next] = true;
            path.push(gram);
            walk(start, next, contexts, k, path, on_path, out);
            path.pop();
            on_path[next] = false;
        }
    }
}
