//! Stationary Markov laws over a finite alphabet: joint `(m + 1)`-gram
//! distributions, cyclic empirical types, conditional divergences and exact
//! sequence likelihoods.

mod alphabet;
mod divergence;
mod joint;
mod likelihood;
mod model;

pub use alphabet::Alphabet;
pub use divergence::{
    conditional_entropy, conditional_relative_entropy, context_divergence, context_entropy, entropy,
    joint_divergence, joint_entropy, kl_divergence,
};
pub use joint::{l1_distance, l2_distance, ConditionalTable, JointDistribution, CONSISTENCY_TOL};
pub use likelihood::{
    log2_initial_probability, sequence_log_probability, sequence_log_probability_linear, LogTransitionTable,
};
pub use model::{cyclic_counts, empirical_type, Contig, MarkovModel};

pub(crate) use divergence::dc_slices;
pub(crate) use joint::l1_slices;
pub(crate) use model::empirical_type_of;

/// Which bound to use for the number of types of length-`L` sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TypeCountBound {
    /// `(L + 1)^4`, the exponent quoted for tetranucleotide types.
    Quoted,
    /// `(L + 1)^(|X|^(m + 1))`, one factor per gram count.
    PerGram,
}

/// `log2` of the bound on the number of cyclic types of length `len`.
pub fn log2_type_count_bound(len: usize, order: usize, alphabet: &Alphabet, bound: TypeCountBound) -> f64 {
    let exponent = match bound {
        TypeCountBound::Quoted => 4.0,
        TypeCountBound::PerGram => alphabet.power(order + 1) as f64,
    };
    exponent * ((len + 1) as f64).log2()
}
