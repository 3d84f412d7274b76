use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{bayes_error_mc, for_trial_chunks, Decider, ErrorEstimate, Hypothesis, Priors};
use crate::chernoff::chernoff_information;
use crate::error::{invalid, Error, Result};
use crate::markov::{LogTransitionTable, MarkovModel};
use crate::rng;
use crate::simulator::Sampler;

/// Fewest non-zero trial contributions for a length to enter the fit.
pub const MIN_EVENTS: u64 = 50;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    /// Plain simulation; errors below about `1 / trials` are invisible.
    Plain,
    /// Importance sampling from the Chernoff minimizer `p*`, which sits on
    /// the decision boundary, with likelihood-ratio weights.
    #[default]
    Tilted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorExponentEstimate {
    pub lengths: Vec<usize>,
    pub error_rates: Vec<f64>,
    /// `(1/L) log2` of each error rate.
    pub log_error_rates: Vec<f64>,
    /// 95% half-widths: Wilson for plain sampling, normal for tilted.
    pub confidence_halfwidths: Vec<f64>,
    pub events: Vec<u64>,
    /// Lengths left out of the fit for having fewer than [`MIN_EVENTS`]
    /// events.
    pub excluded: Vec<usize>,
    /// Fitted slope of `log2 error` against `L`; `None` with fewer than two
    /// usable lengths.
    pub slope: Option<f64>,
    /// `-slope`, the estimated exponent in bits per symbol.
    pub exponent_estimate: Option<f64>,
    pub chernoff_reference: f64,
    pub trials_per_length: u64,
    pub estimator: Estimator,
}

impl ErrorExponentEstimate {
    pub fn relative_error(&self) -> Option<f64> {
        self.exponent_estimate.map(|c| (c - self.chernoff_reference).abs() / self.chernoff_reference)
    }
}

/// Measures the Bayes error of the equal-prior test at each length and fits
/// its exponential decay rate.
pub fn error_exponent(
    p1: &MarkovModel,
    p2: &MarkovModel,
    lengths: &[usize],
    trials: u64,
    seed: u64,
    estimator: Estimator,
) -> Result<ErrorExponentEstimate> {
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    if lengths.is_empty() || lengths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("lengths must be non-empty and strictly increasing"));
    }
    let chernoff = chernoff_information(p1, p2, 1e-10)?;
    let tilted = match estimator {
        Estimator::Plain => None,
        Estimator::Tilted => Some(MarkovModel::from_joint(chernoff.p_star.clone())?),
    };

    let mut out = ErrorExponentEstimate {
        lengths: lengths.to_vec(),
        error_rates: Vec::new(),
        log_error_rates: Vec::new(),
        confidence_halfwidths: Vec::new(),
        events: Vec::new(),
        excluded: Vec::new(),
        slope: None,
        exponent_estimate: None,
        chernoff_reference: chernoff.value,
        trials_per_length: trials,
        estimator,
    };
    for (i, &len) in lengths.iter().enumerate() {
        let stage = rng::derive_seed(seed, i as u64);
        let e = match &tilted {
            None => bayes_error_mc(p1, p2, Priors::EQUAL, len, trials, stage)?,
            Some(q) => tilted_bayes_error(p1, p2, q, Priors::EQUAL, len, trials, stage)?,
        };
        out.error_rates.push(e.estimate);
        out.log_error_rates.push(e.estimate.log2() / len as f64);
        out.confidence_halfwidths.push(e.halfwidth);
        out.events.push(e.events);
        if e.events < MIN_EVENTS || e.estimate <= 0.0 {
            out.excluded.push(len);
        }
    }

    let (mut xs, mut ys, mut ws) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..lengths.len() {
        if !out.excluded.contains(&lengths[i]) {
            xs.push(lengths[i] as f64);
            ys.push(out.error_rates[i].log2());
            ws.push(out.events[i] as f64);
        }
    }
    out.slope = weighted_slope(&xs, &ys, &ws);
    out.exponent_estimate = out.slope.map(|s| -s);
    Ok(out)
}

/// Weighted least-squares slope of `ys` on `xs`.
pub fn weighted_slope(xs: &[f64], ys: &[f64], ws: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let w: f64 = ws.iter().sum();
    let mx = xs.iter().zip(ws).map(|(x, w)| x * w).sum::<f64>() / w;
    let my = ys.iter().zip(ws).map(|(y, w)| y * w).sum::<f64>() / w;
    let sxy: f64 = xs.iter().zip(ys).zip(ws).map(|((x, y), w)| w * (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().zip(ws).map(|(x, w)| w * (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Unbiased Bayes-error estimate from contigs drawn under `proposal`. A
/// contig decided as H1 contributes `pi2 P2(x) / Q(x)`, one decided as H2
/// contributes `pi1 P1(x) / Q(x)`, with ordinary (non-cyclic) sequence
/// probabilities.
pub(crate) fn tilted_bayes_error(
    p1: &MarkovModel,
    p2: &MarkovModel,
    proposal: &MarkovModel,
    priors: Priors,
    len: usize,
    trials: u64,
    seed: u64,
) -> Result<ErrorEstimate> {
    if !proposal.is_positive() {
        return Err(Error::Degenerate("proposal must have full support".into()));
    }
    if len < p1.order() + 1 {
        return Err(invalid(format!("length {len} is shorter than order + 1")));
    }
    let decider = Decider::new(p1, p2, priors)?;
    let tables = [LogTransitionTable::new(p1), LogTransitionTable::new(p2)];
    let tq = LogTransitionTable::new(proposal);
    let sampler = Sampler::new(proposal);
    let log_pi = [priors.pi1.log2(), priors.pi2.log2()];

    let parts = for_trial_chunks(trials, |range| {
        let mut buf = Vec::with_capacity(len);
        let (mut sum, mut sum_sq, mut events) = (0.0f64, 0.0f64, 0u64);
        for i in range {
            let mut r = rng::stream(seed, i);
            // Keeps stream usage aligned with plain sampling.
            let _ = r.gen::<f64>();
            sampler.sample_into(len, &mut r, &mut buf);
            let wrong = match decider.decide(&buf) {
                Hypothesis::H1 => 1,
                Hypothesis::H2 => 0,
            };
            let log_w = log_pi[wrong] + tables[wrong].linear_log_probability(&buf) - tq.linear_log_probability(&buf);
            let w = log_w.exp2();
            if w > 0.0 {
                events += 1;
            }
            sum += w;
            sum_sq += w * w;
        }
        (sum, sum_sq, events)
    });
    let (mut sum, mut sum_sq, mut events) = (0.0, 0.0, 0);
    for (s, q, e) in parts {
        sum += s;
        sum_sq += q;
        events += e;
    }
    let n = trials as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
    Ok(ErrorEstimate { estimate: mean, halfwidth: 1.959_963_984_540_054 * (var / n).sqrt(), events, trials })
}
