use std::collections::BTreeSet;
use std::path::PathBuf;

use serde::Serialize;

use markov_binning::binning::{
    assign_bins, bin_contigs, estimate_distributions, score, BinAssignment, BinningOptions, BinningStatus,
};
use markov_binning::chernoff::min_pairwise_chernoff;
use markov_binning::markov::{empirical_type, Alphabet, JointDistribution, MarkovModel};
use markov_binning::simulator::{extract_community, fit_model_from_genome, generate_contigs, CommunitySpec, ScalingSpec};

use crate::failure::Failure;
use crate::fasta;
use crate::output::{read_json, stem, RunDir};
use crate::{BinArgs, ChernoffArgs, FitArgs, SimulateArgs};

pub fn alphabet(symbols: &str) -> Result<Alphabet, Failure> {
    Alphabet::new(symbols).map_err(Failure::from)
}

pub fn load_models(paths: &[PathBuf]) -> Result<Vec<MarkovModel>, Failure> {
    paths.iter().map(|p| read_json::<MarkovModel>(p)).collect()
}

pub fn fit(args: &FitArgs) -> Result<(), Failure> {
    let alphabet = alphabet(&args.alphabet)?;
    let mut models = Vec::new();
    for path in &args.fasta {
        let genome = fasta::read_genome(path, &alphabet, None)?;
        let model = fit_model_from_genome(&genome, args.order, &alphabet, args.pseudocount)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        models.push(model);
    }
    let mut run = RunDir::create(&args.out)?;
    let mut used = BTreeSet::new();
    for (i, (path, model)) in args.fasta.iter().zip(&models).enumerate() {
        let mut name = format!("{}.json", stem(path, "model"));
        if !used.insert(name.clone()) {
            name = format!("{}_{}.json", stem(path, "model"), i + 1);
            used.insert(name.clone());
        }
        run.write_json(&name, model)?;
    }
    run.finish("fit", args)
}

#[derive(Serialize)]
struct ChernoffOutput<'a> {
    models: Vec<String>,
    c_min: f64,
    /// 1-based indices of the closest pair.
    argmin_pair: (usize, usize),
    lbar_threshold: f64,
    per_pair: &'a [Vec<f64>],
    converged: &'a [Vec<bool>],
    all_converged: bool,
}

pub fn chernoff(args: &ChernoffArgs) -> Result<(), Failure> {
    if args.models.len() < 2 {
        return Err(Failure::input("need at least two model files"));
    }
    let models = load_models(&args.models)?;
    let report = min_pairwise_chernoff(&models, args.tol)?;
    let out = ChernoffOutput {
        models: args.models.iter().map(|p| p.display().to_string()).collect(),
        c_min: report.c_min,
        argmin_pair: (report.argmin_pair.0 + 1, report.argmin_pair.1 + 1),
        lbar_threshold: report.lbar_threshold,
        per_pair: &report.per_pair,
        converged: &report.converged,
        all_converged: report.all_converged,
    };
    let mut run = RunDir::create(&args.out)?;
    run.write_json("chernoff.json", &out)?;
    run.finish("chernoff", args)?;
    println!(
        "C_min = {} bits/symbol (models {} and {}), lbar threshold = {}",
        report.c_min, out.argmin_pair.0, out.argmin_pair.1, report.lbar_threshold
    );
    if !report.all_converged {
        return Err(Failure::not_converged("the Chernoff solver did not converge for every pair"));
    }
    Ok(())
}

pub fn simulate(args: &SimulateArgs) -> Result<(), Failure> {
    if args.n_contigs == 0 {
        return Err(Failure::input("--n-contigs must be positive"));
    }
    let species = if args.models.is_empty() { args.genomes.len() } else { args.models.len() };
    let priors = if args.priors.is_empty() { vec![1.0 / species as f64; species] } else { args.priors.clone() };

    let (contigs, alphabet) = if args.models.is_empty() {
        let alphabet = alphabet(&args.alphabet)?;
        let genomes = args
            .genomes
            .iter()
            .enumerate()
            .map(|(k, p)| fasta::read_genome(p, &alphabet, Some(k)))
            .collect::<Result<Vec<_>, _>>()?;
        let len = contig_length(args, 1)?;
        (extract_community(&genomes, &priors, len, args.n_contigs, args.seed)?, alphabet)
    } else {
        let models = load_models(&args.models)?;
        let alphabet = models[0].alphabet().clone();
        let len = contig_length(args, models[0].order() + 1)?;
        let spec = CommunitySpec { models, priors, contig_length: len, contig_count: args.n_contigs, seed: args.seed };
        (generate_contigs(&spec)?, alphabet)
    };

    let mut run = RunDir::create(&args.out)?;
    let path = run.path("contigs.fasta");
    fasta::write_contigs(&path, &contigs, &alphabet)?;
    run.finish("simulate", args)
}

fn contig_length(args: &SimulateArgs, min_len: usize) -> Result<usize, Failure> {
    let len = match (args.length, args.lbar) {
        (Some(l), _) => l,
        (None, Some(lbar)) => ScalingSpec::new(lbar, args.n_contigs)?.contig_length(),
        (None, None) => return Err(Failure::input("give --length or --lbar")),
    };
    if len < min_len {
        return Err(Failure::input(format!("contig length {len} is shorter than {min_len}")));
    }
    Ok(len)
}

#[derive(Serialize)]
struct AssignmentRow<'a> {
    contig_id: &'a str,
    bin: usize,
    best_divergence: f64,
    runner_up_divergence: f64,
}

#[derive(Serialize)]
struct ScoreOutput {
    misbin_count: usize,
    misbin_rate: f64,
    perfect: bool,
    /// `permutation[b - 1]` is the species matched to bin `b` (both 1-based).
    permutation: Vec<usize>,
}

#[derive(Serialize)]
struct BinSummary {
    mode: &'static str,
    status: BinningStatus,
    metric: &'static str,
    bins: usize,
    contigs: usize,
    epsilon: Option<f64>,
    alpha: Option<f64>,
    min_clique_size: Option<usize>,
    clique_sizes: Vec<usize>,
    bin_sizes: Vec<usize>,
    l1_fallback_contigs: usize,
    estimates: Vec<JointDistribution>,
}

pub fn bin(args: &BinArgs) -> Result<(), Failure> {
    if args.bins == 0 {
        return Err(Failure::input("--bins must be at least 1"));
    }
    let records = fasta::read_records(&args.contigs)?;
    let metric = args.metric.into();

    let (assignment, summary) = if args.models.is_empty() {
        let alphabet = alphabet(&args.alphabet)?;
        let contigs = fasta::to_contigs(&records, &alphabet, args.order + 1)?;
        let options = BinningOptions { alpha: args.alpha, search: args.search.into() };
        let outcome = bin_contigs(&contigs, args.bins, args.order, &alphabet, &options)?;
        let assignment = if metric == outcome.assignment.metric {
            outcome.assignment.clone()
        } else {
            let types = types_of(&contigs, args.order, &alphabet)?;
            let estimates = estimate_distributions(&outcome.cliques, &types)?;
            assign_bins(&types, &estimates, metric)?
        };
        let summary = BinSummary {
            mode: "cliques",
            status: outcome.status,
            metric: metric.name(),
            bins: args.bins,
            contigs: contigs.len(),
            epsilon: outcome.epsilon,
            alpha: Some(outcome.alpha),
            min_clique_size: Some(outcome.min_clique_size),
            clique_sizes: outcome.cliques.iter().map(Vec::len).collect(),
            bin_sizes: assignment.sizes(),
            l1_fallback_contigs: assignment.fallback.iter().filter(|&&f| f).count(),
            estimates: assignment.estimates.clone(),
        };
        (assignment, summary)
    } else {
        let models = load_models(&args.models)?;
        if models.len() != args.bins {
            return Err(Failure::input(format!("{} model files for {} bins", models.len(), args.bins)));
        }
        let (order, alphabet) = (models[0].order(), models[0].alphabet().clone());
        let contigs = fasta::to_contigs(&records, &alphabet, order + 1)?;
        let types = types_of(&contigs, order, &alphabet)?;
        let estimates: Vec<JointDistribution> = models.iter().map(|m| m.joint().clone()).collect();
        let assignment = assign_bins(&types, &estimates, metric)?;
        let summary = BinSummary {
            mode: "assign",
            status: BinningStatus::Success,
            metric: metric.name(),
            bins: args.bins,
            contigs: contigs.len(),
            epsilon: None,
            alpha: None,
            min_clique_size: None,
            clique_sizes: Vec::new(),
            bin_sizes: assignment.sizes(),
            l1_fallback_contigs: assignment.fallback.iter().filter(|&&f| f).count(),
            estimates: assignment.estimates.clone(),
        };
        (assignment, summary)
    };

    let mut run = RunDir::create(&args.out)?;
    run.write_csv("assignment.csv", &assignment_rows(&records, &assignment))?;
    let labels: Option<Vec<usize>> = records.iter().map(|r| fasta::species_label(&r.header)).collect();
    if let Some(labels) = labels {
        let s = score(&assignment.assignment, &labels, args.bins)?;
        run.write_json(
            "score.json",
            &ScoreOutput {
                misbin_count: s.misbin_count,
                misbin_rate: s.misbin_rate,
                perfect: s.perfect,
                permutation: s.permutation.iter().map(|k| k + 1).collect(),
            },
        )?;
    }
    run.write_json("bin.json", &summary)?;
    let status = summary.status;
    run.finish("bin", args)?;
    if status == BinningStatus::NoCliquesFound {
        return Err(Failure::algorithm(
            "no threshold produced the required cliques; assignment uses the best partial attempt",
        ));
    }
    Ok(())
}

fn types_of(
    contigs: &[markov_binning::markov::Contig],
    order: usize,
    alphabet: &Alphabet,
) -> Result<Vec<JointDistribution>, Failure> {
    contigs.iter().map(|c| empirical_type(c, order, alphabet).map_err(Failure::from)).collect()
}

fn assignment_rows<'a>(records: &'a [fasta::Record], a: &BinAssignment) -> Vec<AssignmentRow<'a>> {
    records
        .iter()
        .enumerate()
        .map(|(i, r)| AssignmentRow {
            contig_id: &r.id,
            bin: a.assignment[i] + 1,
            best_divergence: a.best[i],
            runner_up_divergence: a.runner_up[i],
        })
        .collect()
}
