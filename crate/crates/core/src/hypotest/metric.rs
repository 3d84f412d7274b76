use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{for_trial_chunks, wilson_halfwidth};
use crate::binning::Metric;
use crate::error::{invalid, Result};
use crate::markov::{empirical_type_of, MarkovModel};
use crate::rng;
use crate::simulator::Sampler;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricComparison {
    pub error_dc: f64,
    pub error_euclid: f64,
    pub halfwidth_dc: f64,
    pub halfwidth_euclid: f64,
    pub trials: u64,
}

/// Error rates of nearest-model classification under `D_c(p_x || .)` and
/// under `l2` on joint vectors, on the same equal-prior contigs. Ties go to
/// the first model.
pub fn metric_comparison(p1: &MarkovModel, p2: &MarkovModel, len: usize, trials: u64, seed: u64) -> Result<MetricComparison> {
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    super::check_pair(p1, p2)?;
    if len < p1.order() + 1 {
        return Err(invalid(format!("length {len} is shorter than order + 1")));
    }
    let k = p1.alphabet().size();
    let models = [p1.joint().probs(), p2.joint().probs()];
    let samplers = [Sampler::new(p1), Sampler::new(p2)];
    let classify = |p: &[f64], metric: Metric| -> usize {
        let d0 = metric.evaluate(p, models[0], k);
        let d1 = metric.evaluate(p, models[1], k);
        usize::from(d1 < d0)
    };

    let parts = for_trial_chunks(trials, |range| {
        let mut buf = Vec::with_capacity(len);
        let (mut dc, mut l2) = (0u64, 0u64);
        for i in range {
            let mut r = rng::stream(seed, i);
            let truth = usize::from(r.gen::<f64>() >= 0.5);
            samplers[truth].sample_into(len, &mut r, &mut buf);
            let t = empirical_type_of(&buf, p1.order(), p1.alphabet()).expect("sampled contig is valid");
            dc += u64::from(classify(t.probs(), Metric::ConditionalDivergence) != truth);
            l2 += u64::from(classify(t.probs(), Metric::Euclidean) != truth);
        }
        (dc, l2)
    });
    let (dc, l2) = parts.into_iter().fold((0, 0), |(a, b), (x, y)| (a + x, b + y));
    let n = trials as f64;
    Ok(MetricComparison {
        error_dc: dc as f64 / n,
        error_euclid: l2 as f64 / n,
        halfwidth_dc: wilson_halfwidth(dc, trials),
        halfwidth_euclid: wilson_halfwidth(l2, trials),
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_iid_pair_gives_equal_errors() {
        // For i.i.d. coins mirrored about 1/2 both rules reduce to comparing
        // the fraction of ones with 1/2.
        let p1 = MarkovModel::binary(0.3, 0.3).unwrap();
        let p2 = MarkovModel::binary(0.7, 0.7).unwrap();
        let r = metric_comparison(&p1, &p2, 25, 20_000, 4).unwrap();
        assert!((r.error_dc - r.error_euclid).abs() <= r.halfwidth_dc + r.halfwidth_euclid);
    }

    #[test]
    fn zero_trials_rejected() {
        let p1 = MarkovModel::binary(0.3, 0.3).unwrap();
        assert!(metric_comparison(&p1, &p1, 10, 0, 1).is_err());
    }
}
