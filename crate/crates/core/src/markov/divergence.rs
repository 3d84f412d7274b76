//! Divergences and entropies between joint `(m + 1)`-gram laws, in bits.
//!
//! Terms with `p = 0` contribute nothing. A positive `p` against a zero `q`
//! yields `f64::INFINITY`, returned explicitly rather than produced by a
//! floating-point overflow, so that callers can rank hypotheses.

use super::joint::JointDistribution;

/// Conditional relative entropy
/// `D_c(p || q) = sum_{a,b} p(ab) log2(p(b|a) / q(b|a))`.
///
/// # Panics
/// If `p` and `q` differ in order or alphabet.
pub fn conditional_relative_entropy(p: &JointDistribution, q: &JointDistribution) -> f64 {
    p.assert_same_shape(q);
    dc_slices(p.probs(), q.probs(), p.alphabet().size())
}

pub(crate) fn dc_slices(p: &[f64], q: &[f64], k: usize) -> f64 {
    let mut total = 0.0;
    for (prow, qrow) in p.chunks_exact(k).zip(q.chunks_exact(k)) {
        let pa: f64 = prow.iter().sum();
        if pa <= 0.0 {
            continue;
        }
        let qa: f64 = qrow.iter().sum();
        for (&pab, &qab) in prow.iter().zip(qrow) {
            if pab <= 0.0 {
                continue;
            }
            if qab <= 0.0 {
                return f64::INFINITY;
            }
            total += pab * ((pab / pa) / (qab / qa)).log2();
        }
    }
    total
}

/// Markov conditional entropy `H_c(p) = -sum_{a,b} p(ab) log2 p(b|a)`.
pub fn conditional_entropy(p: &JointDistribution) -> f64 {
    let k = p.alphabet().size();
    let mut total = 0.0;
    for row in p.probs().chunks_exact(k) {
        let pa: f64 = row.iter().sum();
        for &pab in row.iter().filter(|&&x| x > 0.0) {
            total -= pab * (pab / pa).log2();
        }
    }
    total
}

/// Plain relative entropy between two probability vectors.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len(), "kl_divergence: length mismatch");
    let mut total = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a <= 0.0 {
            continue;
        }
        if b <= 0.0 {
            return f64::INFINITY;
        }
        total += a * (a / b).log2();
    }
    total
}

/// Shannon entropy of a probability vector.
pub fn entropy(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum::<f64>()
}

/// Relative entropy between the full `(m + 1)`-gram laws.
pub fn joint_divergence(p: &JointDistribution, q: &JointDistribution) -> f64 {
    p.assert_same_shape(q);
    kl_divergence(p.probs(), q.probs())
}

/// Relative entropy between the induced `m`-gram (context) laws.
pub fn context_divergence(p: &JointDistribution, q: &JointDistribution) -> f64 {
    p.assert_same_shape(q);
    kl_divergence(&p.context_marginal(), &q.context_marginal())
}

pub fn joint_entropy(p: &JointDistribution) -> f64 {
    entropy(p.probs())
}

pub fn context_entropy(p: &JointDistribution) -> f64 {
    entropy(&p.context_marginal())
}
