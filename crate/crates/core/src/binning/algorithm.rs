use serde::{Deserialize, Serialize};

use super::assign::{assign_bins, estimate_distributions, BinAssignment, Metric};
use super::cliques::{find_cliques, greedy_cliques, CliqueSearch, EXACT_MAX_NODES};
use super::graph::{pairwise_distances, EpsilonGraph, PairDistance};
use crate::error::{invalid, Error, Result};
use crate::markov::{empirical_type, Alphabet, Contig, JointDistribution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BinningStatus {
    Success,
    /// No threshold produced `M` large cliques; the result comes from the best
    /// partial attempt.
    NoCliquesFound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinningOutcome {
    pub assignment: BinAssignment,
    pub cliques: Vec<Vec<usize>>,
    /// Threshold the cliques were found at; `None` when `M = 1`.
    pub epsilon: Option<f64>,
    pub alpha: f64,
    pub min_clique_size: usize,
    pub status: BinningStatus,
    /// Thresholds at which a clique search was run.
    pub attempts: usize,
}

impl BinningOutcome {
    pub fn succeeded(&self) -> bool {
        self.status == BinningStatus::Success
    }
}

/// `1 / log2 L`, clamped to `[0.01, 0.5]`.
pub fn default_alpha(contig_length: f64) -> f64 {
    (1.0 / contig_length.log2()).clamp(0.01, 0.5)
}

/// Smallest admissible clique, `ceil((1 - alpha) N / M)`.
pub fn min_clique_size(n: usize, m: usize, alpha: f64) -> usize {
    let raw = (1.0 - alpha) * n as f64 / m as f64;
    ((raw - 1e-9).ceil() as usize).max(1)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BinningOptions {
    /// Defaults to [`default_alpha`] of the mean contig length.
    pub alpha: Option<f64>,
    pub search: CliqueSearch,
}

/// Computes types and runs [`algorithm1`].
pub fn bin_contigs(
    contigs: &[Contig],
    bins: usize,
    order: usize,
    alphabet: &Alphabet,
    options: &BinningOptions,
) -> Result<BinningOutcome> {
    if contigs.is_empty() {
        return Err(invalid("no contigs"));
    }
    let types = contigs.iter().map(|c| empirical_type(c, order, alphabet)).collect::<Result<Vec<_>>>()?;
    let mean_len = contigs.iter().map(|c| c.len() as f64).sum::<f64>() / contigs.len() as f64;
    let alpha = options.alpha.unwrap_or_else(|| default_alpha(mean_len));
    algorithm1(&types, bins, alpha, options.search)
}

/// Threshold sweep, clique search, mean estimates and divergence assignment.
pub fn algorithm1(types: &[JointDistribution], bins: usize, alpha: f64, search: CliqueSearch) -> Result<BinningOutcome> {
    let n = types.len();
    if bins == 0 {
        return Err(invalid("M must be at least 1"));
    }
    if n < bins {
        return Err(invalid(format!("{n} contigs cannot fill {bins} bins")));
    }
    if !(0.0..1.0).contains(&alpha) {
        return Err(invalid(format!("alpha must lie in [0, 1), got {alpha}")));
    }
    if search == CliqueSearch::Exact && n > EXACT_MAX_NODES {
        return Err(Error::Unsupported(format!("exact clique search is limited to {EXACT_MAX_NODES} contigs")));
    }
    let min_size = min_clique_size(n, bins, alpha);

    if bins == 1 {
        let cliques = vec![(0..n).collect::<Vec<_>>()];
        return finish(types, cliques, None, alpha, min_size, BinningStatus::Success, 0);
    }

    let pairs = pairwise_distances(types);
    let mut graph = EpsilonGraph::empty(n, 0.0);
    let mut degree = vec![0usize; n];
    let mut eligible = if min_size <= 1 { n } else { 0 };
    let mut attempts = 0;
    let mut fallback: Option<(usize, f64, Vec<Vec<usize>>)> = None;

    for group in distance_groups(&pairs) {
        let eps = group[0].distance;
        for e in group {
            graph.add_edge(e.i, e.j);
            for v in [e.i, e.j] {
                degree[v] += 1;
                if degree[v] + 1 == min_size {
                    eligible += 1;
                }
            }
        }
        graph.epsilon = eps;
        if eligible < bins * min_size {
            continue;
        }
        attempts += 1;
        if let Some(cliques) = find_cliques(&graph, bins, min_size, search) {
            return finish(types, cliques, Some(eps), alpha, min_size, BinningStatus::Success, attempts);
        }
        keep_better(&mut fallback, eps, greedy_cliques(&graph, bins), bins);
    }

    if fallback.is_none() {
        fallback = coarse_fallback(n, &pairs, bins);
    }
    let (_, eps, cliques) = fallback.expect("singleton cliques always exist when N >= M");
    finish(types, cliques, Some(eps), alpha, min_size, BinningStatus::NoCliquesFound, attempts)
}

fn distance_groups(pairs: &[PairDistance]) -> impl Iterator<Item = &[PairDistance]> {
    pairs.chunk_by(|a, b| a.distance == b.distance)
}

/// Keeps the attempt whose smallest clique is largest.
fn keep_better(best: &mut Option<(usize, f64, Vec<Vec<usize>>)>, eps: f64, cliques: Vec<Vec<usize>>, bins: usize) {
    if cliques.len() < bins {
        return;
    }
    let smallest = cliques.iter().map(Vec::len).min().unwrap_or(0);
    if best.as_ref().is_none_or(|(s, _, _)| smallest > *s) {
        *best = Some((smallest, eps, cliques));
    }
}

/// Greedy attempts at up to 64 evenly spaced thresholds, smallest first.
fn coarse_fallback(n: usize, pairs: &[PairDistance], bins: usize) -> Option<(usize, f64, Vec<Vec<usize>>)> {
    let groups: Vec<&[PairDistance]> = distance_groups(pairs).collect();
    let stride = groups.len().div_ceil(64).max(1);
    let mut graph = EpsilonGraph::empty(n, 0.0);
    let mut best = None;
    keep_better(&mut best, 0.0, greedy_cliques(&graph, bins), bins);
    for (g, group) in groups.iter().enumerate() {
        for e in group.iter() {
            graph.add_edge(e.i, e.j);
        }
        if g % stride == 0 || g + 1 == groups.len() {
            graph.epsilon = group[0].distance;
            keep_better(&mut best, graph.epsilon, greedy_cliques(&graph, bins), bins);
        }
    }
    best
}

fn finish(
    types: &[JointDistribution],
    cliques: Vec<Vec<usize>>,
    epsilon: Option<f64>,
    alpha: f64,
    min_clique_size: usize,
    status: BinningStatus,
    attempts: usize,
) -> Result<BinningOutcome> {
    let estimates = estimate_distributions(&cliques, types)?;
    let assignment = assign_bins(types, &estimates, Metric::ConditionalDivergence)?;
    Ok(BinningOutcome { assignment, cliques, epsilon, alpha, min_clique_size, status, attempts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binning::score;

    fn point(i: usize) -> JointDistribution {
        let mut p = vec![0.0; 4];
        p[i] = 1.0;
        JointDistribution::new(1, Alphabet::binary(), p).unwrap()
    }

    #[test]
    fn alpha_defaults() {
        assert!((default_alpha(1024.0) - 0.1).abs() < 1e-15);
        assert_eq!(default_alpha(2.0), 0.5);
        assert_eq!(default_alpha(1e300), 0.01);
        assert_eq!(min_clique_size(300, 3, 0.1), 90);
        assert_eq!(min_clique_size(10, 3, 0.0), 4);
    }

    #[test]
    fn point_species_recovered() {
        let truth = [0, 1, 0, 1, 1, 0, 0, 1];
        let types: Vec<_> = truth.iter().map(|&s| point(s * 3)).collect();
        for search in [CliqueSearch::Greedy, CliqueSearch::Exact] {
            let out = algorithm1(&types, 2, 0.2, search).unwrap();
            assert!(out.succeeded());
            assert_eq!(out.epsilon, Some(0.0));
            assert!(score(&out.assignment.assignment, &truth, 2).unwrap().perfect);
        }
    }

    #[test]
    fn single_bin_takes_everything() {
        let types = vec![point(0), point(3), point(0)];
        let out = algorithm1(&types, 1, 0.1, CliqueSearch::Greedy).unwrap();
        assert_eq!(out.assignment.assignment, vec![0, 0, 0]);
        assert_eq!(out.cliques, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn impossible_sizes_fall_back() {
        // Three identical contigs and one outlier cannot form two cliques of
        // size two with alpha = 0.
        let types = vec![point(0), point(0), point(0), point(3)];
        let out = algorithm1(&types, 2, 0.0, CliqueSearch::Greedy).unwrap();
        assert_eq!(out.status, BinningStatus::NoCliquesFound);
        assert_eq!(out.cliques.len(), 2);
        assert_eq!(out.assignment.assignment.len(), 4);
    }

    #[test]
    fn rejects_bad_arguments() {
        let types = vec![point(0)];
        assert!(algorithm1(&types, 2, 0.1, CliqueSearch::Greedy).is_err());
        assert!(algorithm1(&types, 0, 0.1, CliqueSearch::Greedy).is_err());
        assert!(algorithm1(&types, 1, 1.0, CliqueSearch::Greedy).is_err());
    }
}
