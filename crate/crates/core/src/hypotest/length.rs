use serde::{Deserialize, Serialize};

use super::{bayes_error_mc, Priors};
use crate::error::{invalid, Error, Result};
use crate::markov::MarkovModel;
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LengthSearchOptions {
    pub max_length: usize,
    /// Community size used to normalize, `lbar = L / log2 N`.
    pub normalization_n: f64,
}

impl Default for LengthSearchOptions {
    fn default() -> Self {
        Self { max_length: 20_000, normalization_n: 1e6 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LengthSearch {
    pub length: usize,
    pub lbar: f64,
    /// Every `(L, error)` evaluated, in evaluation order.
    pub probes: Vec<(usize, f64)>,
    /// The three largest probed lengths did not have non-increasing errors,
    /// so the answer comes from a linear scan.
    pub monotonicity_violated: bool,
}

/// Smallest `L` whose equal-prior Bayes error is at most `target`.
///
/// The error at each `L` uses its own random streams, so the estimate is a
/// fixed function of `L`. Lengths are doubled until the target is met, then
/// bisected.
pub fn min_length_for_error(
    p1: &MarkovModel,
    p2: &MarkovModel,
    target: f64,
    trials: u64,
    seed: u64,
    options: &LengthSearchOptions,
) -> Result<LengthSearch> {
    if !(target > 0.0 && target < 0.5) {
        return Err(invalid(format!("target must lie in (0, 0.5), got {target}")));
    }
    if !(options.normalization_n > 1.0) {
        return Err(invalid("normalization N must exceed 1"));
    }
    let mut probes: Vec<(usize, f64)> = Vec::new();
    let error_at = |probes: &mut Vec<(usize, f64)>, len: usize| -> Result<f64> {
        if let Some(&(_, e)) = probes.iter().find(|(l, _)| *l == len) {
            return Ok(e);
        }
        let e = bayes_error_mc(p1, p2, Priors::EQUAL, len, trials, rng::derive_seed(seed, len as u64))?.estimate;
        probes.push((len, e));
        Ok(e)
    };

    let shortest = p1.order() + 1;
    let mut hi = shortest;
    let mut lo = None;
    while error_at(&mut probes, hi)? > target {
        lo = Some(hi);
        if hi >= options.max_length {
            return Err(Error::TargetNotReached { target, max_length: options.max_length });
        }
        hi = (hi * 2).min(options.max_length);
    }
    if let Some(mut lo) = lo {
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if error_at(&mut probes, mid)? <= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }

    let mut sorted = probes.clone();
    sorted.sort_by_key(|&(l, _)| l);
    let top = &sorted[sorted.len().saturating_sub(3)..];
    let monotonicity_violated = top.windows(2).any(|w| w[1].1 > w[0].1);
    if monotonicity_violated {
        for l in shortest..=hi {
            if error_at(&mut probes, l)? <= target {
                hi = l;
                break;
            }
        }
    }
    Ok(LengthSearch {
        length: hi,
        lbar: hi as f64 / options.normalization_n.log2(),
        probes,
        monotonicity_violated,
    })
}

/// Sample Pearson correlation.
pub fn pearson_correlation(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}
