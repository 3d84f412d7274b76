use super::divergence::{conditional_entropy, conditional_relative_entropy};
use super::model::{empirical_type_of, Contig, MarkovModel};
use crate::error::{invalid, Result};

/// Index of the context formed by the first `order` symbols.
pub(crate) fn initial_context(symbols: &[u8], order: usize, k: usize) -> usize {
    symbols[..order].iter().fold(0, |acc, &s| acc * k + s as usize)
}

/// `log2 q(x_1 .. x_m)`, the probability of the initial state under `q`.
pub fn log2_initial_probability(x: &Contig, q: &MarkovModel) -> Result<f64> {
    check_length(x, q)?;
    let k = q.alphabet().size();
    Ok(q.context_marginal()[initial_context(&x.symbols, q.order(), k)].log2())
}

/// `log2` of the cyclic likelihood of `x` under `q`, computed from the type:
///
/// `-L * [D_c(p_x || q) + H_c(p_x)] + log2 q(x_1 .. x_m)`
///
/// where `p_x` is the cyclic type of `x`. This equals the initial-state
/// probability times the product over all `L` cyclic transitions, the last
/// `m` of which wrap around. A transition of zero probability gives
/// `f64::NEG_INFINITY`.
pub fn sequence_log_probability(x: &Contig, q: &MarkovModel) -> Result<f64> {
    let log_alpha = log2_initial_probability(x, q)?;
    let p = empirical_type_of(&x.symbols, q.order(), q.alphabet())?;
    let dc = conditional_relative_entropy(&p, q.joint());
    if dc.is_infinite() || log_alpha == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(-(x.len() as f64) * (dc + conditional_entropy(&p)) + log_alpha)
}

/// `log2` of the ordinary (non-cyclic) likelihood: initial state followed by
/// the `L - m` observed transitions.
pub fn sequence_log_probability_linear(x: &Contig, q: &MarkovModel) -> Result<f64> {
    let log_alpha = log2_initial_probability(x, q)?;
    let table = LogTransitionTable::new(q);
    Ok(log_alpha + table.linear_sum(&x.symbols, q.order()))
}

fn check_length(x: &Contig, q: &MarkovModel) -> Result<()> {
    if x.len() < q.order() + 1 {
        return Err(invalid(format!(
            "sequence of length {} is shorter than order + 1 = {}",
            x.len(),
            q.order() + 1
        )));
    }
    if let Some(&s) = x.symbols.iter().find(|&&s| s as usize >= q.alphabet().size()) {
        return Err(invalid(format!("symbol index {s} outside alphabet {}", q.alphabet())));
    }
    Ok(())
}

/// Precomputed `log2 q(b | a)` indexed like the joint, plus `log2 q(a)`.
/// Undefined rows and zero transitions hold `-inf`.
#[derive(Clone, Debug)]
pub struct LogTransitionTable {
    order: usize,
    k: usize,
    log_trans: Vec<f64>,
    log_context: Vec<f64>,
}

impl LogTransitionTable {
    pub fn new(q: &MarkovModel) -> Self {
        let k = q.alphabet().size();
        let t = q.transitions();
        let log_trans = (0..q.joint().len())
            .map(|c| t.get(c / k, c % k).map_or(f64::NEG_INFINITY, f64::log2))
            .collect();
        let log_context = q.context_marginal().iter().map(|p| p.log2()).collect();
        Self { order: q.order(), k, log_trans, log_context }
    }

    pub fn log_initial(&self, symbols: &[u8]) -> f64 {
        self.log_context[initial_context(symbols, self.order, self.k)]
    }

    /// Sum of `log2 q(b|a)` over the `L - m` in-sequence transitions.
    pub fn linear_sum(&self, symbols: &[u8], order: usize) -> f64 {
        debug_assert_eq!(order, self.order);
        let n = self.log_trans.len();
        let mut idx = initial_context(symbols, order, self.k);
        let mut total = 0.0;
        for &s in &symbols[order..] {
            idx = (idx * self.k + s as usize) % n;
            total += self.log_trans[idx];
        }
        total
    }

    /// Sum of `log2 q(b|a)` over all `L` cyclic transitions.
    pub fn cyclic_sum(&self, symbols: &[u8]) -> f64 {
        let n = self.log_trans.len();
        let len = symbols.len();
        let mut idx = initial_context(symbols, self.order, self.k);
        let mut total = 0.0;
        for i in 0..len {
            idx = (idx * self.k + symbols[(i + self.order) % len] as usize) % n;
            total += self.log_trans[idx];
        }
        total
    }

    pub fn cyclic_log_probability(&self, symbols: &[u8]) -> f64 {
        self.log_initial(symbols) + self.cyclic_sum(symbols)
    }

    pub fn linear_log_probability(&self, symbols: &[u8]) -> f64 {
        self.log_initial(symbols) + self.linear_sum(symbols, self.order)
    }
}
