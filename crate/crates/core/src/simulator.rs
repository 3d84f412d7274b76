//! Contig generation from known sources or genomes, and model fitting.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::markov::{cyclic_counts, Contig, JointDistribution, MarkovModel};
use crate::par;
use crate::rng;

/// Draws sequences from a fixed model using cumulative tables.
#[derive(Clone, Debug)]
pub struct Sampler {
    order: usize,
    k: usize,
    context_cdf: Vec<f64>,
    /// Row `a` holds the cumulative transition law of context `a`.
    transition_cdf: Vec<f64>,
}

impl Sampler {
    pub fn new(model: &MarkovModel) -> Self {
        let k = model.alphabet().size();
        let context_cdf = cumulative(model.context_marginal());
        let mut transition_cdf = Vec::with_capacity(model.joint().len());
        for row in model.transitions().rows() {
            match row {
                Some(r) => transition_cdf.extend(cumulative(r)),
                // Unreachable from the stationary start.
                None => transition_cdf.extend(std::iter::repeat_n(1.0, k)),
            }
        }
        Self { order: model.order(), k, context_cdf, transition_cdf }
    }

    /// Fills `out` with a length-`len` realization started in stationarity.
    pub fn sample_into<R: Rng + ?Sized>(&self, len: usize, rng: &mut R, out: &mut Vec<u8>) {
        out.clear();
        let contexts = self.context_cdf.len();
        let mut ctx = pick(&self.context_cdf, rng.gen::<f64>());
        let mut digits = ctx;
        let mut initial = vec![0u8; self.order];
        for slot in initial.iter_mut().rev() {
            *slot = (digits % self.k) as u8;
            digits /= self.k;
        }
        out.extend(initial.iter().take(len));
        while out.len() < len {
            let row = &self.transition_cdf[ctx * self.k..(ctx + 1) * self.k];
            let b = pick(row, rng.gen::<f64>());
            out.push(b as u8);
            ctx = (ctx * self.k + b) % contexts;
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Vec<u8> {
        let mut out = Vec::with_capacity(len);
        self.sample_into(len, rng, &mut out);
        out
    }
}

fn cumulative(p: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out: Vec<f64> = p
        .iter()
        .map(|x| {
            acc += x;
            acc
        })
        .collect();
    if let Some(last) = out.last_mut() {
        *last = f64::INFINITY;
    }
    out
}

/// First index whose cumulative mass exceeds `u`, skipping zero-mass entries.
fn pick(cdf: &[f64], u: f64) -> usize {
    cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1)
}

/// A length-`len` realization of the stationary chain `model`: the first
/// `m` symbols come from the context marginal, the rest from the transitions.
pub fn sample_sequence<R: Rng + ?Sized>(model: &MarkovModel, len: usize, rng: &mut R) -> Result<Contig> {
    if len < model.order() + 1 {
        return Err(invalid(format!("length {len} is shorter than order + 1")));
    }
    Ok(Contig { symbols: Sampler::new(model).sample(len, rng), label: None })
}

fn check_priors(priors: &[f64], count: usize) -> Result<()> {
    if priors.len() != count {
        return Err(invalid(format!("{} priors for {count} species", priors.len())));
    }
    if priors.iter().any(|p| !(*p >= 0.0)) || (priors.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(invalid("priors must be non-negative and sum to 1"));
    }
    Ok(())
}

/// A synthetic community: `contig_count` contigs of length `contig_length`,
/// each from a species drawn by `priors`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommunitySpec {
    pub models: Vec<MarkovModel>,
    pub priors: Vec<f64>,
    pub contig_length: usize,
    pub contig_count: usize,
    pub seed: u64,
}

impl CommunitySpec {
    pub fn uniform(models: Vec<MarkovModel>, contig_length: usize, contig_count: usize, seed: u64) -> Self {
        let m = models.len();
        Self { models, priors: vec![1.0 / m as f64; m], contig_length, contig_count, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.models.is_empty() {
            return Err(invalid("community needs at least one model"));
        }
        let first = self.models[0].joint();
        if self.models.iter().any(|m| !m.joint().same_shape(first)) {
            return Err(Error::ShapeMismatch("community models differ in order or alphabet".into()));
        }
        check_priors(&self.priors, self.models.len())?;
        if self.contig_length < first.order() + 1 {
            return Err(invalid("contig length is shorter than order + 1"));
        }
        if self.contig_count == 0 {
            return Err(invalid("contig count must be positive"));
        }
        Ok(())
    }
}

/// Draws a species index from `priors` using `u` uniform in `[0, 1)`.
pub fn draw_species(priors: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (k, &p) in priors.iter().enumerate() {
        acc += p;
        if u < acc {
            return k;
        }
    }
    priors.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// Generates the labeled contigs of a community. Contig `i` uses random
/// stream `i`, so the output does not depend on thread scheduling.
pub fn generate_contigs(spec: &CommunitySpec) -> Result<Vec<Contig>> {
    spec.validate()?;
    let samplers: Vec<Sampler> = spec.models.iter().map(Sampler::new).collect();
    Ok(par::map_range(spec.contig_count, |i| {
        let mut r = rng::stream(spec.seed, i as u64);
        let species = draw_species(&spec.priors, r.gen::<f64>());
        let symbols = samplers[species].sample(spec.contig_length, &mut r);
        Contig { symbols, label: Some(species) }
    }))
}

/// Fits the stationary model given by the cyclic `(order + 1)`-gram counts
/// of a genome, after adding `pseudocount` to every count.
pub fn fit_model_from_genome(genome: &Contig, order: usize, alphabet: &crate::markov::Alphabet, pseudocount: f64) -> Result<MarkovModel> {
    if genome.len() < order + 1 {
        return Err(invalid(format!(
            "genome of length {} is shorter than order + 1 = {}",
            genome.len(),
            order + 1
        )));
    }
    if !(pseudocount >= 0.0) || !pseudocount.is_finite() {
        return Err(invalid("pseudocount must be a non-negative number"));
    }
    let weights = cyclic_counts(&genome.symbols, order, alphabet.size())
        .into_iter()
        .map(|c| c as f64 + pseudocount)
        .collect();
    MarkovModel::from_joint(JointDistribution::from_weights(order, alphabet.clone(), weights)?)
}

/// `count` substrings of length `len` at uniform start positions (with
/// replacement). The genome is linear and contigs inherit its label.
pub fn extract_contigs_from_genome(genome: &Contig, len: usize, count: usize, seed: u64) -> Result<Vec<Contig>> {
    if len == 0 || len > genome.len() {
        return Err(invalid(format!("contig length {len} exceeds genome length {}", genome.len())));
    }
    let starts = genome.len() - len + 1;
    Ok(par::map_range(count, |i| {
        let mut r = rng::stream(seed, i as u64);
        let s = r.gen_range(0..starts);
        Contig { symbols: genome.symbols[s..s + len].to_vec(), label: genome.label }
    }))
}

/// Contigs from a community of genomes: species by `priors`, then a uniform
/// substring of that genome.
pub fn extract_community(genomes: &[Contig], priors: &[f64], len: usize, count: usize, seed: u64) -> Result<Vec<Contig>> {
    check_priors(priors, genomes.len())?;
    if let Some(g) = genomes.iter().find(|g| g.len() < len) {
        return Err(invalid(format!("contig length {len} exceeds genome length {}", g.len())));
    }
    if len == 0 {
        return Err(invalid("contig length must be positive"));
    }
    Ok(par::map_range(count, |i| {
        let mut r = rng::stream(seed, i as u64);
        let species = draw_species(priors, r.gen::<f64>());
        let g = &genomes[species];
        let s = r.gen_range(0..g.len() - len + 1);
        Contig { symbols: g.symbols[s..s + len].to_vec(), label: Some(species) }
    }))
}

/// `L = round(lbar * log2(n))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingSpec {
    pub lbar: f64,
    pub n: usize,
}

impl ScalingSpec {
    pub fn new(lbar: f64, n: usize) -> Result<Self> {
        if !(lbar > 0.0) || !lbar.is_finite() {
            return Err(invalid("normalized length must be positive"));
        }
        if n < 2 {
            return Err(invalid("contig count must be at least 2"));
        }
        Ok(Self { lbar, n })
    }

    pub fn contig_length(&self) -> usize {
        (self.lbar * (self.n as f64).log2()).round() as usize
    }

    pub fn contig_length_checked(&self, order: usize) -> Result<usize> {
        let len = self.contig_length();
        if len < order + 1 {
            return Err(invalid(format!("scaled length {len} is shorter than order + 1")));
        }
        Ok(len)
    }
}

/// A chain whose transition rows are uniform on the simplex, shifted so every
/// entry is at least `floor`.
pub fn random_model<R: Rng + ?Sized>(order: usize, alphabet: &crate::markov::Alphabet, floor: f64, rng: &mut R) -> Result<MarkovModel> {
    let k = alphabet.size();
    if !(floor >= 0.0) || floor * k as f64 >= 1.0 {
        return Err(invalid("floor must lie in [0, 1 / |alphabet|)"));
    }
    let rows: Vec<Vec<f64>> = (0..alphabet.power(order))
        .map(|_| {
            let w: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
            let total: f64 = w.iter().sum();
            let mut row: Vec<f64> = w.iter().map(|x| floor + (1.0 - k as f64 * floor) * x / total).collect();
            let s: f64 = row.iter().sum();
            row.iter_mut().for_each(|x| *x /= s);
            row
        })
        .collect();
    MarkovModel::from_transitions(order, alphabet.clone(), &rows)
}
