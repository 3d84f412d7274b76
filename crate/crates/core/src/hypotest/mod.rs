//! Binary hypothesis tests between known Markov sources and Monte Carlo
//! measurements of their error rates.

mod exponent;
mod length;
mod metric;
mod sanov;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use exponent::{error_exponent, weighted_slope, ErrorExponentEstimate, Estimator};
pub use length::{min_length_for_error, pearson_correlation, LengthSearch, LengthSearchOptions};
pub use metric::{metric_comparison, MetricComparison};
pub use sanov::{far_set_projection, sanov_bound_check, SanovCheck, MAX_GRAMS};

use crate::error::{invalid, Error, Result};
use crate::markov::{
    conditional_relative_entropy, empirical_type, log2_initial_probability, sequence_log_probability, Contig,
    LogTransitionTable, MarkovModel,
};
use crate::par;
use crate::rng;
use crate::simulator::Sampler;

/// Trials handled by one worker task; fixed so results do not depend on the
/// thread count.
pub(crate) const TRIAL_CHUNK: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hypothesis {
    H1,
    H2,
}

impl Hypothesis {
    /// 1 or 2.
    pub fn number(self) -> usize {
        match self {
            Hypothesis::H1 => 1,
            Hypothesis::H2 => 2,
        }
    }
}

/// Prior probabilities `(pi1, pi2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Priors {
    pub pi1: f64,
    pub pi2: f64,
}

impl Priors {
    pub const EQUAL: Priors = Priors { pi1: 0.5, pi2: 0.5 };

    pub fn new(pi1: f64, pi2: f64) -> Result<Self> {
        if !(pi1 >= 0.0 && pi2 >= 0.0) || (pi1 + pi2 - 1.0).abs() > 1e-12 {
            return Err(invalid("priors must be non-negative and sum to 1"));
        }
        Ok(Self { pi1, pi2 })
    }

    /// `log2(pi2 / pi1)`; choose H1 when the log-likelihood ratio reaches it.
    pub fn threshold(&self) -> f64 {
        self.pi2.log2() - self.pi1.log2()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub decision: Hypothesis,
    /// `(log2 P1(x) - log2 P2(x)) / L`, bits per symbol.
    pub normalized_llr: f64,
    /// `D_c(p_x || p2)`.
    pub divergence_to_second: f64,
    /// `D_c(p_x || p1)`.
    pub divergence_to_first: f64,
    /// `(1/L) log2(alpha1 / alpha2)`.
    pub initial_term: f64,
}

/// Likelihood-ratio test with the cyclic likelihood. Chooses H1 when
/// `log2(P1(x) / P2(x)) >= log2(pi2 / pi1)`, so exact ties go to H1.
pub fn np_decide(x: &Contig, p1: &MarkovModel, p2: &MarkovModel, priors: Priors) -> Result<TestOutcome> {
    check_pair(p1, p2)?;
    if !(priors.pi1 > 0.0 && priors.pi2 > 0.0) {
        return Err(invalid("priors must be positive"));
    }
    let l1 = sequence_log_probability(x, p1)?;
    let l2 = sequence_log_probability(x, p2)?;
    if l1 == f64::NEG_INFINITY && l2 == f64::NEG_INFINITY {
        return Err(Error::Undecidable);
    }
    let len = x.len() as f64;
    let llr = l1 - l2;
    let t = empirical_type(x, p1.order(), p1.alphabet())?;
    Ok(TestOutcome {
        decision: if llr >= priors.threshold() { Hypothesis::H1 } else { Hypothesis::H2 },
        normalized_llr: llr / len,
        divergence_to_second: conditional_relative_entropy(&t, p2.joint()),
        divergence_to_first: conditional_relative_entropy(&t, p1.joint()),
        initial_term: (log2_initial_probability(x, p1)? - log2_initial_probability(x, p2)?) / len,
    })
}

pub(crate) fn check_pair(p1: &MarkovModel, p2: &MarkovModel) -> Result<()> {
    if !p1.joint().same_shape(p2.joint()) {
        return Err(Error::ShapeMismatch("models differ in order or alphabet".into()));
    }
    Ok(())
}

/// The likelihood-ratio rule with log-transition tables precomputed.
#[derive(Clone, Debug)]
pub struct Decider {
    t1: LogTransitionTable,
    t2: LogTransitionTable,
    threshold: f64,
    fallback: Hypothesis,
}

impl Decider {
    pub fn new(p1: &MarkovModel, p2: &MarkovModel, priors: Priors) -> Result<Self> {
        check_pair(p1, p2)?;
        Ok(Self {
            t1: LogTransitionTable::new(p1),
            t2: LogTransitionTable::new(p2),
            threshold: priors.threshold(),
            fallback: if priors.pi2 > priors.pi1 { Hypothesis::H2 } else { Hypothesis::H1 },
        })
    }

    /// When both likelihoods vanish the hypothesis with the larger prior is
    /// chosen.
    pub fn decide(&self, symbols: &[u8]) -> Hypothesis {
        let l1 = self.t1.cyclic_log_probability(symbols);
        let l2 = self.t2.cyclic_log_probability(symbols);
        if l1 == f64::NEG_INFINITY && l2 == f64::NEG_INFINITY {
            return self.fallback;
        }
        if l1 - l2 >= self.threshold {
            Hypothesis::H1
        } else {
            Hypothesis::H2
        }
    }
}

/// A Monte Carlo error-rate estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimate {
    pub estimate: f64,
    /// 95% half-width.
    pub halfwidth: f64,
    /// Trials that contributed a non-zero term.
    pub events: u64,
    pub trials: u64,
}

/// Half-width of the 95% Wilson score interval.
pub fn wilson_halfwidth(successes: u64, trials: u64) -> f64 {
    if trials == 0 {
        return f64::NAN;
    }
    let z = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt()
}

/// Bayes error of the likelihood-ratio test by plain simulation: each trial
/// draws a hypothesis from the priors, a length-`len` contig from it, and
/// records whether the test picks the other hypothesis.
pub fn bayes_error_mc(
    p1: &MarkovModel,
    p2: &MarkovModel,
    priors: Priors,
    len: usize,
    trials: u64,
    seed: u64,
) -> Result<ErrorEstimate> {
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    if len < p1.order() + 1 {
        return Err(invalid(format!("length {len} is shorter than order + 1")));
    }
    let decider = Decider::new(p1, p2, priors)?;
    let samplers = [Sampler::new(p1), Sampler::new(p2)];
    let errors: u64 = for_trial_chunks(trials, |range| {
        let mut buf = Vec::with_capacity(len);
        let mut errors = 0u64;
        for i in range {
            let mut r = rng::stream(seed, i);
            let truth = if r.gen::<f64>() < priors.pi1 { Hypothesis::H1 } else { Hypothesis::H2 };
            samplers[truth.number() - 1].sample_into(len, &mut r, &mut buf);
            errors += u64::from(decider.decide(&buf) != truth);
        }
        errors
    })
    .into_iter()
    .sum();
    Ok(ErrorEstimate {
        estimate: errors as f64 / trials as f64,
        halfwidth: wilson_halfwidth(errors, trials),
        events: errors,
        trials,
    })
}

/// Runs `f` over fixed-size chunks of trial indices, in parallel, and
/// returns the per-chunk results in order.
pub(crate) fn for_trial_chunks<T, F>(trials: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(std::ops::Range<u64>) -> T + Sync + Send,
{
    par::map_chunks(trials as usize, TRIAL_CHUNK, |r| f(r.start as u64..r.end as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::{sequence_log_probability_linear, Alphabet, JointDistribution};

    fn contig(bits: &str) -> Contig {
        Contig::from_text(bits, &Alphabet::binary(), None).unwrap()
    }

    #[test]
    fn hand_computed_llr() {
        // Cyclic transitions of 0110: 01, 11, 10, 00.
        let p1 = MarkovModel::binary(0.5, 0.5).unwrap();
        let p2 = MarkovModel::binary(0.25, 0.25).unwrap();
        let out = np_decide(&contig("0110"), &p1, &p2, Priors::EQUAL).unwrap();
        let l1 = 0.5f64.log2() + 4.0 * 0.5f64.log2();
        let l2 = 0.75f64.log2() + (0.25f64 * 0.25 * 0.75 * 0.75).log2();
        assert!((out.normalized_llr - (l1 - l2) / 4.0).abs() < 1e-12);
        assert_eq!(out.decision, Hypothesis::H1);
    }

    #[test]
    fn decomposition_identity() {
        let p1 = MarkovModel::binary(0.3, 0.6).unwrap();
        let p2 = MarkovModel::binary(0.7, 0.2).unwrap();
        for bits in ["0110100111", "0000011", "1010101011"] {
            let o = np_decide(&contig(bits), &p1, &p2, Priors::EQUAL).unwrap();
            let rhs = o.divergence_to_second - o.divergence_to_first + o.initial_term;
            assert!((o.normalized_llr - rhs).abs() < 1e-10);
        }
    }

    #[test]
    fn own_type_decides_first() {
        // Type of 0011 is uniform over bigrams, exactly the i.i.d. fair coin.
        let p1 = MarkovModel::binary(0.5, 0.5).unwrap();
        let p2 = MarkovModel::binary(0.2, 0.9).unwrap();
        let o = np_decide(&contig("0011"), &p1, &p2, Priors::EQUAL).unwrap();
        assert_eq!(o.divergence_to_first, 0.0);
        assert_eq!(o.decision, Hypothesis::H1);
    }

    #[test]
    fn boundary_tie_decides_first() {
        // Both chains have uniform stationary laws and 0011 uses each
        // transition once, so the likelihoods agree.
        let p1 = MarkovModel::binary(0.25, 0.75).unwrap();
        let p2 = MarkovModel::binary(0.75, 0.25).unwrap();
        let o = np_decide(&contig("0011"), &p1, &p2, Priors::EQUAL).unwrap();
        assert!(o.normalized_llr.abs() < 1e-12, "{}", o.normalized_llr);
        assert_eq!(o.initial_term, 0.0);
        // Identical models make every sequence an exact tie.
        for bits in ["0011", "0111010"] {
            let o = np_decide(&contig(bits), &p1, &p1, Priors::EQUAL).unwrap();
            assert_eq!(o.normalized_llr, 0.0);
            assert_eq!(o.decision, Hypothesis::H1);
        }
    }

    #[test]
    fn undecidable_when_both_vanish() {
        let orbit = MarkovModel::from_joint(JointDistribution::new(1, Alphabet::binary(), vec![0.0, 0.5, 0.5, 0.0]).unwrap()).unwrap();
        let zeros = MarkovModel::from_joint(JointDistribution::new(1, Alphabet::binary(), vec![1.0, 0.0, 0.0, 0.0]).unwrap()).unwrap();
        assert_eq!(np_decide(&contig("0111"), &orbit, &zeros, Priors::EQUAL), Err(Error::Undecidable));
    }

    #[test]
    fn disjoint_support_never_errs() {
        let orbit = MarkovModel::from_joint(JointDistribution::new(1, Alphabet::binary(), vec![0.0, 0.5, 0.5, 0.0]).unwrap()).unwrap();
        let sticky = MarkovModel::binary(0.01, 0.99).unwrap();
        let e = bayes_error_mc(&orbit, &sticky, Priors::EQUAL, 40, 2000, 1).unwrap();
        assert_eq!(e.estimate, 0.0);
    }

    #[test]
    fn degenerate_prior_counts_only_first() {
        let p1 = MarkovModel::binary(0.3, 0.6).unwrap();
        let p2 = MarkovModel::binary(0.4, 0.5).unwrap();
        let only_first = Priors::new(1.0, 0.0).unwrap();
        let e = bayes_error_mc(&p1, &p2, only_first, 10, 5000, 3).unwrap();
        // The threshold is -inf, so H1 is always chosen and never wrong.
        assert_eq!(e.estimate, 0.0);
    }

    /// Exact Bayes error of the cyclic test by enumerating every binary
    /// sequence with its ordinary (linear) probability.
    fn exact_bayes_error(p1: &MarkovModel, p2: &MarkovModel, priors: Priors, len: usize) -> f64 {
        let mut total = 0.0;
        for code in 0u32..(1 << len) {
            let bits: String = (0..len).map(|i| if code >> i & 1 == 1 { '1' } else { '0' }).collect();
            let x = contig(&bits);
            let pr1 = sequence_log_probability_linear(&x, p1).unwrap().exp2();
            let pr2 = sequence_log_probability_linear(&x, p2).unwrap().exp2();
            let c1 = sequence_log_probability(&x, p1).unwrap();
            let c2 = sequence_log_probability(&x, p2).unwrap();
            let pick_one = c1 - c2 >= priors.threshold();
            total += if pick_one { priors.pi2 * pr2 } else { priors.pi1 * pr1 };
        }
        total
    }

    #[test]
    fn monte_carlo_matches_enumeration() {
        let p1 = MarkovModel::binary(0.3, 0.6).unwrap();
        let p2 = MarkovModel::binary(0.55, 0.4).unwrap();
        for (len, priors) in [(2, Priors::EQUAL), (8, Priors::EQUAL), (12, Priors::new(0.3, 0.7).unwrap())] {
            let exact = exact_bayes_error(&p1, &p2, priors, len);
            let mc = bayes_error_mc(&p1, &p2, priors, len, 40_000, 11).unwrap();
            assert!((mc.estimate - exact).abs() <= 3.0 * mc.halfwidth, "L={len}: {} vs {exact}", mc.estimate);
        }
    }

    #[test]
    fn results_are_reproducible() {
        let p1 = MarkovModel::binary(0.3, 0.6).unwrap();
        let p2 = MarkovModel::binary(0.55, 0.4).unwrap();
        let a = bayes_error_mc(&p1, &p2, Priors::EQUAL, 30, 5000, 9).unwrap();
        let b = bayes_error_mc(&p1, &p2, Priors::EQUAL, 30, 5000, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn wilson_interval() {
        assert!((wilson_halfwidth(50, 100) - 0.0962).abs() < 1e-3);
        assert!(wilson_halfwidth(0, 100) > 0.0);
        assert!(wilson_halfwidth(0, 0).is_nan());
    }
}
