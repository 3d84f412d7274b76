use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::markov::{dc_slices, l1_slices, JointDistribution};
use crate::par;

/// Pseudocount floor applied to estimates with zero entries before
/// divergence binning.
pub const ESTIMATE_FLOOR: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    /// `D_c(type || estimate)`.
    #[default]
    ConditionalDivergence,
    /// `l2` distance between joint vectors.
    Euclidean,
    L1,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::ConditionalDivergence => "conditional-divergence",
            Metric::Euclidean => "euclidean",
            Metric::L1 => "l1",
        }
    }

    pub fn evaluate(self, p: &[f64], q: &[f64], alphabet_size: usize) -> f64 {
        match self {
            Metric::ConditionalDivergence => dc_slices(p, q, alphabet_size),
            Metric::Euclidean => p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt(),
            Metric::L1 => l1_slices(p, q),
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conditional-divergence" | "divergence" | "dc" => Ok(Metric::ConditionalDivergence),
            "euclidean" | "l2" => Ok(Metric::Euclidean),
            "l1" => Ok(Metric::L1),
            other => Err(invalid(format!("unknown metric {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinAssignment {
    /// 0-based bin per contig.
    pub assignment: Vec<usize>,
    /// Metric value to the chosen bin.
    pub best: Vec<f64>,
    /// Metric value to the second-closest bin; infinite when `M = 1`.
    pub runner_up: Vec<f64>,
    /// Contigs whose divergences were all infinite and were placed by `l1`.
    pub fallback: Vec<bool>,
    pub estimates: Vec<JointDistribution>,
    pub metric: Metric,
}

impl BinAssignment {
    pub fn bin_count(&self) -> usize {
        self.estimates.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.bin_count()];
        for &b in &self.assignment {
            sizes[b] += 1;
        }
        sizes
    }
}

/// Mean type of each clique.
pub fn estimate_distributions(cliques: &[Vec<usize>], types: &[JointDistribution]) -> Result<Vec<JointDistribution>> {
    cliques
        .iter()
        .enumerate()
        .map(|(k, clique)| {
            if clique.is_empty() {
                return Err(invalid(format!("clique {} is empty", k + 1)));
            }
            let first = &types[clique[0]];
            let mut sum = vec![0.0; first.len()];
            for &x in clique {
                first.assert_same_shape(&types[x]);
                for (s, p) in sum.iter_mut().zip(types[x].probs()) {
                    *s += p;
                }
            }
            let n = clique.len() as f64;
            sum.iter_mut().for_each(|s| *s /= n);
            JointDistribution::new(first.order(), first.alphabet().clone(), sum)
        })
        .collect()
}

/// Assigns each type to the nearest estimate; ties go to the smallest bin.
pub fn assign_bins(types: &[JointDistribution], estimates: &[JointDistribution], metric: Metric) -> Result<BinAssignment> {
    if estimates.is_empty() {
        return Err(invalid("need at least one estimate"));
    }
    for t in types.iter().chain(estimates) {
        if !t.same_shape(&estimates[0]) {
            return Err(crate::Error::ShapeMismatch("types and estimates differ in order or alphabet".into()));
        }
    }
    let prepared: Vec<JointDistribution> = estimates
        .iter()
        .map(|e| {
            if metric == Metric::ConditionalDivergence && !e.is_strictly_positive() {
                e.with_floor(ESTIMATE_FLOOR)
            } else {
                e.clone()
            }
        })
        .collect();
    let k = estimates[0].alphabet().size();

    let rows = par::map_range(types.len(), |x| {
        let p = types[x].probs();
        let mut scores: Vec<f64> = prepared.iter().map(|e| metric.evaluate(p, e.probs(), k)).collect();
        let fallback = scores.iter().all(|s| !s.is_finite());
        if fallback {
            scores = prepared.iter().map(|e| l1_slices(p, e.probs())).collect();
        }
        let (best_bin, best, runner_up) = nearest_two(&scores);
        (best_bin, best, runner_up, fallback)
    });

    let mut out = BinAssignment {
        assignment: Vec::with_capacity(types.len()),
        best: Vec::with_capacity(types.len()),
        runner_up: Vec::with_capacity(types.len()),
        fallback: Vec::with_capacity(types.len()),
        estimates: prepared,
        metric,
    };
    for (b, s, r, f) in rows {
        out.assignment.push(b);
        out.best.push(s);
        out.runner_up.push(r);
        out.fallback.push(f);
    }
    Ok(out)
}

fn nearest_two(scores: &[f64]) -> (usize, f64, f64) {
    let mut best = (0, scores[0]);
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s < best.1 {
            best = (i, s);
        }
    }
    let runner_up = scores
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != best.0)
        .map(|(_, &s)| s)
        .fold(f64::INFINITY, f64::min);
    (best.0, best.1, runner_up)
}
