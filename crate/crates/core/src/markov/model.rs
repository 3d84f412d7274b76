use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::alphabet::Alphabet;
use super::joint::{ConditionalTable, JointDistribution, CONSISTENCY_TOL};
use crate::error::{invalid, Error, Result};

/// A stationary Markov source of order `m`, determined by its joint law over
/// `(m + 1)`-grams.
///
/// The joint must be consistent (balanced in- and out-flow for every context).
/// Strict positivity is not required here so that deterministic orbits and
/// fitted genomes without pseudocounts can be represented; operations that need
/// an irreducible chain check [`MarkovModel::is_positive`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JointDistribution", into = "JointDistribution")]
pub struct MarkovModel {
    joint: JointDistribution,
    context_marginal: Vec<f64>,
    transitions: ConditionalTable,
}

impl TryFrom<JointDistribution> for MarkovModel {
    type Error = Error;

    fn try_from(joint: JointDistribution) -> Result<Self> {
        MarkovModel::from_joint(joint)
    }
}

impl From<MarkovModel> for JointDistribution {
    fn from(m: MarkovModel) -> Self {
        m.joint
    }
}

impl MarkovModel {
    pub fn from_joint(joint: JointDistribution) -> Result<Self> {
        let gap = joint.consistency_gap();
        if gap > CONSISTENCY_TOL {
            return Err(Error::NotStationary(format!("consistency violated by {gap:e}")));
        }
        let context_marginal = joint.context_marginal();
        let transitions = joint.conditional();
        Ok(Self { joint, context_marginal, transitions })
    }

    /// Builds the stationary chain with the given transition rows, one row of
    /// `|X|` probabilities per context in lexicographic order.
    pub fn from_transitions(order: usize, alphabet: Alphabet, rows: &[Vec<f64>]) -> Result<Self> {
        let k = alphabet.size();
        let contexts = alphabet.power(order);
        if rows.len() != contexts || rows.iter().any(|r| r.len() != k) {
            return Err(Error::ShapeMismatch(format!(
                "expected {contexts} rows of {k} transition probabilities"
            )));
        }
        for row in rows {
            let s: f64 = row.iter().sum();
            if row.iter().any(|p| !(*p >= 0.0)) || (s - 1.0).abs() > 1e-12 {
                return Err(invalid("transition rows must be probability vectors"));
            }
        }
        let stationary = stationary_over_contexts(rows, k)?;
        let probs = (0..contexts * k).map(|c| stationary[c / k] * rows[c / k][c % k]).collect();
        Self::from_joint(JointDistribution::from_weights(order, alphabet, probs)?)
    }

    /// Binary first-order chain with `P(1 | 0) = a` and `P(1 | 1) = b`.
    pub fn binary(a: f64, b: f64) -> Result<Self> {
        Self::from_transitions(1, Alphabet::binary(), &[vec![1.0 - a, a], vec![1.0 - b, b]])
    }

    pub fn joint(&self) -> &JointDistribution {
        &self.joint
    }

    pub fn order(&self) -> usize {
        self.joint.order()
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.joint.alphabet()
    }

    pub fn context_marginal(&self) -> &[f64] {
        &self.context_marginal
    }

    pub fn transitions(&self) -> &ConditionalTable {
        &self.transitions
    }

    /// Strictly positive joint: the chain is irreducible and every transition
    /// has positive probability.
    pub fn is_positive(&self) -> bool {
        self.joint.is_strictly_positive()
    }

    pub(crate) fn require_positive(&self, what: &str) -> Result<()> {
        if self.is_positive() {
            Ok(())
        } else {
            Err(invalid(format!("{what} must have a strictly positive joint distribution")))
        }
    }
}

fn stationary_over_contexts(rows: &[Vec<f64>], k: usize) -> Result<Vec<f64>> {
    let n = rows.len();
    // Context a = (a_1..a_m) moves to (a_2..a_m, b), i.e. index (a * k + b) mod n.
    let mut system = DMatrix::<f64>::zeros(n, n);
    for (a, row) in rows.iter().enumerate() {
        for (b, &p) in row.iter().enumerate() {
            let next = (a * k + b) % n;
            system[(next, a)] += p;
        }
    }
    for i in 0..n {
        system[(i, i)] -= 1.0;
    }
    for j in 0..n {
        system[(n - 1, j)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(n);
    rhs[n - 1] = 1.0;
    let pi = system
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::NotStationary("transition matrix is not irreducible".into()))?;
    if pi.iter().any(|&x| x < -1e-12 || !x.is_finite()) {
        return Err(Error::NotStationary("no unique stationary distribution".into()));
    }
    Ok(pi.iter().map(|&x| x.max(0.0)).collect())
}

/// A finite sequence of alphabet indices with an optional ground-truth
/// species (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contig {
    pub symbols: Vec<u8>,
    pub label: Option<usize>,
}

impl Contig {
    pub fn new(symbols: Vec<u8>, alphabet: &Alphabet, label: Option<usize>) -> Result<Self> {
        if let Some(&bad) = symbols.iter().find(|&&s| s as usize >= alphabet.size()) {
            return Err(invalid(format!("symbol index {bad} outside alphabet {alphabet}")));
        }
        Ok(Self { symbols, label })
    }

    pub fn from_text(text: &str, alphabet: &Alphabet, label: Option<usize>) -> Result<Self> {
        Ok(Self { symbols: alphabet.encode(text)?, label })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Counts of the `len` cyclic `(order + 1)`-grams of `symbols`, the last
/// `order` of which wrap from the end back to the start.
pub fn cyclic_counts(symbols: &[u8], order: usize, alphabet_size: usize) -> Vec<u64> {
    let n = alphabet_size.pow(order as u32 + 1);
    let len = symbols.len();
    let mut counts = vec![0u64; n];
    if len == 0 {
        return counts;
    }
    let mut idx = 0usize;
    for j in 0..=order {
        idx = idx * alphabet_size + symbols[j % len] as usize;
    }
    counts[idx] += 1;
    for i in 1..len {
        idx = (idx * alphabet_size + symbols[(i + order) % len] as usize) % n;
        counts[idx] += 1;
    }
    counts
}

/// The cyclic type of a sequence: its `(order + 1)`-gram frequencies with
/// wrap-around, which balance exactly for every context.
pub fn empirical_type(contig: &Contig, order: usize, alphabet: &Alphabet) -> Result<JointDistribution> {
    empirical_type_of(&contig.symbols, order, alphabet)
}

pub(crate) fn empirical_type_of(symbols: &[u8], order: usize, alphabet: &Alphabet) -> Result<JointDistribution> {
    if order == 0 {
        return Err(invalid("order must be at least 1"));
    }
    if symbols.len() < order + 1 {
        return Err(invalid(format!(
            "sequence of length {} is shorter than order + 1 = {}",
            symbols.len(),
            order + 1
        )));
    }
    let len = symbols.len() as f64;
    let probs = cyclic_counts(symbols, order, alphabet.size())
        .into_iter()
        .map(|c| c as f64 / len)
        .collect();
    Ok(JointDistribution::from_parts_unchecked(order, alphabet.clone(), probs))
}
