//! Unsupervised binning of contigs by clique search on the `epsilon`-graph of
//! their empirical types.

mod algorithm;
mod assign;
mod cliques;
mod graph;
mod score;

pub use algorithm::{
    algorithm1, bin_contigs, default_alpha, min_clique_size, BinningOptions, BinningOutcome, BinningStatus,
};
pub use assign::{assign_bins, estimate_distributions, BinAssignment, Metric, ESTIMATE_FLOOR};
pub use cliques::{find_cliques, greedy_cliques, CliqueSearch, EXACT_MAX_NODES};
pub use graph::{pairwise_distances, EpsilonGraph, PairDistance, VertexSet};
pub use score::{score, BinningScore, EXHAUSTIVE_MAX_BINS};
