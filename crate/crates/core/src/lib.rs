//! Binning of sequences drawn from unknown stationary Markov sources.
//!
//! The crate is organised bottom-up:
//!
//! * [`markov`]: joint `(m + 1)`-gram laws, cyclic empirical types, conditional
//!   divergences and sequence likelihoods.
//! * [`chernoff`]: Chernoff information between two sources and the
//!   resolvability threshold of a community.
//! * [`simulator`]: contig generation from models or genomes, model fitting.
//! * [`binning`]: epsilon-graph clique binning and relabeling-invariant scoring.
//! * [`hypotest`]: likelihood-ratio tests, Monte Carlo error rates, error
//!   exponents and type-concentration bounds.
//!
//! Logarithms are base 2 throughout.

pub mod binning;
pub mod chernoff;
pub mod error;
pub mod hypotest;
pub mod markov;
mod par;
pub mod rng;
pub mod simulator;

pub use error::{Error, Result};

/// Version of this crate, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
