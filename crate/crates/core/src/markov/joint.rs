use serde::{Deserialize, Serialize};

use super::alphabet::Alphabet;
use crate::error::{invalid, Error, Result};

/// Tolerance on the total mass and on the stationarity balance of a
/// constructed distribution.
pub const CONSISTENCY_TOL: f64 = 1e-12;

/// A distribution over the `(order + 1)`-grams of an alphabet.
///
/// Entries are stored densely in lexicographic order: the gram `c_0 c_1 .. c_m`
/// lives at `sum_j c_j * |X|^(m - j)`. The first `order` symbols of a gram are
/// its *context*, the last one is the *next symbol*, so the flat index of
/// context `a` followed by `b` is `a * |X| + b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawJoint")]
pub struct JointDistribution {
    order: usize,
    alphabet: Alphabet,
    probs: Vec<f64>,
}

#[derive(Deserialize)]
struct RawJoint {
    order: usize,
    alphabet: Alphabet,
    probs: Vec<f64>,
}

impl TryFrom<RawJoint> for JointDistribution {
    type Error = Error;

    fn try_from(raw: RawJoint) -> Result<Self> {
        JointDistribution::new(raw.order, raw.alphabet, raw.probs)
    }
}

impl JointDistribution {
    /// Validates shape, non-negativity and unit mass.
    pub fn new(order: usize, alphabet: Alphabet, probs: Vec<f64>) -> Result<Self> {
        if order == 0 {
            return Err(invalid("order must be at least 1"));
        }
        let expected = alphabet.power(order + 1);
        if probs.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "expected {expected} entries for order {order} over {alphabet}, got {}",
                probs.len()
            )));
        }
        if let Some(bad) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(invalid(format!("entry {bad} is not a probability")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > CONSISTENCY_TOL {
            return Err(invalid(format!("entries sum to {total}, not 1")));
        }
        Ok(Self { order, alphabet, probs })
    }

    /// Normalizes non-negative weights to unit mass.
    pub fn from_weights(order: usize, alphabet: Alphabet, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(invalid("weights must have positive finite mass"));
        }
        Self::new(order, alphabet, weights.into_iter().map(|w| w / total).collect())
    }

    pub fn uniform(order: usize, alphabet: Alphabet) -> Self {
        let n = alphabet.power(order + 1);
        Self { order, alphabet, probs: vec![1.0 / n as f64; n] }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// `|X|^order`.
    pub fn context_count(&self) -> usize {
        self.probs.len() / self.alphabet.size()
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.order == other.order && self.alphabet == other.alphabet
    }

    pub(crate) fn assert_same_shape(&self, other: &Self) {
        assert!(
            self.same_shape(other),
            "distributions differ in shape: order {} over {} vs order {} over {}",
            self.order,
            self.alphabet,
            other.order,
            other.alphabet
        );
    }

    /// Probability of the gram written with alphabet symbols, e.g. `"ACGT"`.
    pub fn prob_of(&self, gram: &str) -> Result<f64> {
        Ok(self.probs[self.index_of(gram)?])
    }

    pub fn index_of(&self, gram: &str) -> Result<usize> {
        if gram.len() != self.order + 1 {
            return Err(invalid(format!("gram {gram:?} has wrong length for order {}", self.order)));
        }
        let k = self.alphabet.size();
        Ok(self.alphabet.encode(gram)?.iter().fold(0, |acc, &s| acc * k + s as usize))
    }

    pub fn gram(&self, index: usize) -> String {
        let k = self.alphabet.size();
        let mut symbols = vec![0u8; self.order + 1];
        let mut rest = index;
        for slot in symbols.iter_mut().rev() {
            *slot = (rest % k) as u8;
            rest /= k;
        }
        self.alphabet.decode(&symbols)
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.probs.iter().all(|&p| p > 0.0)
    }

    /// Largest violation of `sum_b p(ab) = sum_b p(ba)` over contexts `a`.
    pub fn consistency_gap(&self) -> f64 {
        let out = self.context_marginal();
        let inflow = self.suffix_marginal();
        out.iter().zip(&inflow).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn is_consistent(&self, tol: f64) -> bool {
        self.consistency_gap() <= tol
    }

    /// Membership in the set of strictly positive, consistent distributions,
    /// i.e. the joint laws of irreducible stationary chains.
    pub fn is_stationary_positive(&self) -> bool {
        self.is_strictly_positive() && self.is_consistent(CONSISTENCY_TOL)
    }

    /// `p(a) = sum_b p(ab)`, indexed by context.
    pub fn context_marginal(&self) -> Vec<f64> {
        self.probs.chunks_exact(self.alphabet.size()).map(|row| row.iter().sum()).collect()
    }

    /// `sum_b p(ba)`, the marginal of the last `order` symbols.
    pub fn suffix_marginal(&self) -> Vec<f64> {
        let contexts = self.context_count();
        let mut out = vec![0.0; contexts];
        for (c, &p) in self.probs.iter().enumerate() {
            out[c % contexts] += p;
        }
        out
    }

    /// Transition law `p(b | a) = p(ab) / p(a)`. Contexts of zero mass have
    /// no defined row.
    pub fn conditional(&self) -> ConditionalTable {
        let k = self.alphabet.size();
        let rows = self
            .probs
            .chunks_exact(k)
            .map(|row| {
                let mass: f64 = row.iter().sum();
                (mass > 0.0).then(|| row.iter().map(|p| p / mass).collect())
            })
            .collect();
        ConditionalTable { alphabet_size: k, rows }
    }

    /// Mixture `weight * self + (1 - weight) * other`.
    pub fn mix(&self, other: &Self, weight: f64) -> Self {
        self.assert_same_shape(other);
        let probs = self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| weight * a + (1.0 - weight) * b)
            .collect();
        Self { order: self.order, alphabet: self.alphabet.clone(), probs }
    }

    /// Adds `floor` to every entry and renormalizes. Uniform additive mass
    /// keeps a consistent distribution consistent.
    pub fn with_floor(&self, floor: f64) -> Self {
        let total = 1.0 + floor * self.probs.len() as f64;
        let probs = self.probs.iter().map(|p| (p + floor) / total).collect();
        Self { order: self.order, alphabet: self.alphabet.clone(), probs }
    }

    /// Builds without validation; callers guarantee unit mass.
    pub(crate) fn from_parts_unchecked(order: usize, alphabet: Alphabet, probs: Vec<f64>) -> Self {
        debug_assert_eq!(probs.len(), alphabet.power(order + 1));
        Self { order, alphabet, probs }
    }
}

/// Rows of `p(b | a)`; `None` marks a context with zero probability.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalTable {
    alphabet_size: usize,
    rows: Vec<Option<Vec<f64>>>,
}

impl ConditionalTable {
    pub fn row(&self, context: usize) -> Option<&[f64]> {
        self.rows[context].as_deref()
    }

    pub fn get(&self, context: usize, next: usize) -> Option<f64> {
        self.row(context).map(|r| r[next])
    }

    pub fn rows(&self) -> &[Option<Vec<f64>>] {
        &self.rows
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn is_fully_defined(&self) -> bool {
        self.rows.iter().all(Option::is_some)
    }
}

/// `sum_c |p(c) - q(c)|`.
pub fn l1_distance(p: &JointDistribution, q: &JointDistribution) -> f64 {
    p.assert_same_shape(q);
    l1_slices(p.probs(), q.probs())
}

/// Euclidean distance between the joint vectors.
pub fn l2_distance(p: &JointDistribution, q: &JointDistribution) -> f64 {
    p.assert_same_shape(q);
    p.probs().iter().zip(q.probs()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

pub(crate) fn l1_slices(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum()
}
