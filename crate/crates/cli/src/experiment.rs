use serde::Serialize;

use markov_binning::chernoff::chernoff_information;
use markov_binning::hypotest::{
    error_exponent, metric_comparison, min_length_for_error, pearson_correlation, sanov_bound_check,
    ErrorExponentEstimate, LengthSearchOptions,
};
use markov_binning::markov::{MarkovModel, TypeCountBound};
use markov_binning::rng::{derive_seed, stream};
use markov_binning::simulator::random_model;
use markov_binning::Error;

use crate::commands::{alphabet, load_models};
use crate::failure::Failure;
use crate::output::{stem, RunDir};
use crate::{ExperimentArgs, ExperimentKind};

const PAIR_TAG: u64 = 1;
const RUN_TAG: u64 = 2;
const MAX_REDRAWS: usize = 1000;

#[derive(Clone, Serialize)]
struct Pair {
    name: String,
    chernoff: f64,
    p1: MarkovModel,
    p2: MarkovModel,
}

pub fn run(args: &ExperimentArgs) -> Result<(), Failure> {
    validate(args)?;
    let mut run = RunDir::create(&args.out)?;
    let name = match args.kind {
        ExperimentKind::Exponent => {
            let pairs = pairs(args)?;
            run.write_json("pairs.json", &pairs)?;
            exponent(args, &pairs, &mut run)?;
            "experiment exponent"
        }
        ExperimentKind::L5pct => {
            let pairs = pairs(args)?;
            run.write_json("pairs.json", &pairs)?;
            l5pct(args, &pairs, &mut run)?;
            "experiment l5pct"
        }
        ExperimentKind::MetricCompare => {
            let pairs = pairs(args)?;
            run.write_json("pairs.json", &pairs)?;
            metric_compare(args, &pairs, &mut run)?;
            "experiment metric-compare"
        }
        ExperimentKind::Sanov => {
            sanov(args, &mut run)?;
            "experiment sanov"
        }
    };
    run.finish(name, args)
}

fn validate(args: &ExperimentArgs) -> Result<(), Failure> {
    if args.trials == 0 {
        return Err(Failure::input("--trials must be at least 1"));
    }
    if !(args.tol > 0.0) {
        return Err(Failure::input("--tol must be positive"));
    }
    if args.n_contigs < 2 {
        return Err(Failure::input("--n-contigs must be at least 2"));
    }
    if args.kind != ExperimentKind::Sanov && args.random_pairs.is_none() && args.models.len() < 2 {
        return Err(Failure::input("give at least two --models or --random-pairs"));
    }
    if args.lengths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Failure::input("--lengths must be strictly increasing"));
    }
    if args.lbar.iter().any(|&l| !(l > 0.0)) {
        return Err(Failure::input("--lbar values must be positive"));
    }
    if args.eps.iter().any(|&e| !(e >= 0.0)) {
        return Err(Failure::input("--eps values must be non-negative"));
    }
    Ok(())
}

fn pairs(args: &ExperimentArgs) -> Result<Vec<Pair>, Failure> {
    if let Some(count) = args.random_pairs {
        let alphabet = alphabet(&args.alphabet)?;
        let base = derive_seed(args.seed, PAIR_TAG);
        return (0..count)
            .map(|i| {
                for attempt in 0..MAX_REDRAWS {
                    let mut r = stream(base, (i * MAX_REDRAWS + attempt) as u64);
                    let p1 = random_model(args.order, &alphabet, args.floor, &mut r)?;
                    let p2 = random_model(args.order, &alphabet, args.floor, &mut r)?;
                    let c = chernoff_information(&p1, &p2, args.tol)?;
                    if c.value >= args.min_chernoff {
                        return Ok(Pair { name: format!("random_{}", i + 1), chernoff: c.value, p1, p2 });
                    }
                }
                Err(Failure::input("could not draw a pair above --min-chernoff"))
            })
            .collect();
    }
    let models = load_models(&args.models)?;
    let mut out = Vec::new();
    for i in 0..models.len() {
        for j in i + 1..models.len() {
            let c = chernoff_information(&models[i], &models[j], args.tol)?;
            let name = format!("{}~{}", stem(&args.models[i], "a"), stem(&args.models[j], "b"));
            out.push(Pair { name, chernoff: c.value, p1: models[i].clone(), p2: models[j].clone() });
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct ExponentRow<'a> {
    pair: &'a str,
    length: usize,
    error: f64,
    log_error_rate: f64,
    halfwidth: f64,
    events: u64,
    included: bool,
}

#[derive(Serialize)]
struct ExponentSummary<'a> {
    pair: &'a str,
    #[serde(flatten)]
    estimate: &'a ErrorExponentEstimate,
    relative_error: Option<f64>,
}

fn exponent(args: &ExperimentArgs, pairs: &[Pair], run: &mut RunDir) -> Result<(), Failure> {
    let lengths = if args.lengths.is_empty() { vec![25, 50, 100, 200] } else { args.lengths.clone() };
    let mut rows = Vec::new();
    let mut estimates = Vec::new();
    for (i, pair) in pairs.iter().enumerate() {
        let seed = derive_seed(derive_seed(args.seed, RUN_TAG), i as u64);
        estimates.push(error_exponent(&pair.p1, &pair.p2, &lengths, args.trials, seed, args.estimator.into())?);
    }
    for (pair, e) in pairs.iter().zip(&estimates) {
        for (k, &len) in e.lengths.iter().enumerate() {
            rows.push(ExponentRow {
                pair: &pair.name,
                length: len,
                error: e.error_rates[k],
                log_error_rate: e.log_error_rates[k],
                halfwidth: e.confidence_halfwidths[k],
                events: e.events[k],
                included: !e.excluded.contains(&len),
            });
        }
    }
    run.write_csv("exponent.csv", &rows)?;
    let summary: Vec<ExponentSummary> = pairs
        .iter()
        .zip(&estimates)
        .map(|(p, e)| ExponentSummary { pair: &p.name, estimate: e, relative_error: e.relative_error() })
        .collect();
    run.write_json("summary.json", &summary)
}

#[derive(Serialize)]
struct LengthRow<'a> {
    pair: &'a str,
    chernoff: f64,
    inverse_chernoff: f64,
    status: &'static str,
    length: Option<usize>,
    lbar: Option<f64>,
    monotonicity_violated: Option<bool>,
}

#[derive(Serialize)]
struct LengthSummary {
    target: f64,
    normalization_n: usize,
    pairs: usize,
    found: usize,
    pearson_lbar_vs_inverse_chernoff: Option<f64>,
}

fn l5pct(args: &ExperimentArgs, pairs: &[Pair], run: &mut RunDir) -> Result<(), Failure> {
    let options = LengthSearchOptions { normalization_n: args.n_contigs as f64, ..Default::default() };
    let mut rows = Vec::new();
    for (i, pair) in pairs.iter().enumerate() {
        let seed = derive_seed(derive_seed(args.seed, RUN_TAG), i as u64);
        let mut row = LengthRow {
            pair: &pair.name,
            chernoff: pair.chernoff,
            inverse_chernoff: 1.0 / pair.chernoff,
            status: "ok",
            length: None,
            lbar: None,
            monotonicity_violated: None,
        };
        match min_length_for_error(&pair.p1, &pair.p2, args.target, args.trials, seed, &options) {
            Ok(r) => {
                row.length = Some(r.length);
                row.lbar = Some(r.lbar);
                row.monotonicity_violated = Some(r.monotonicity_violated);
            }
            Err(Error::TargetNotReached { .. }) => row.status = "not-reached",
            Err(e) => return Err(e.into()),
        }
        rows.push(row);
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows.iter().filter_map(|r| r.lbar.map(|l| (r.inverse_chernoff, l))).unzip();
    run.write_csv("l5pct.csv", &rows)?;
    run.write_json(
        "summary.json",
        &LengthSummary {
            target: args.target,
            normalization_n: args.n_contigs,
            pairs: rows.len(),
            found: xs.len(),
            pearson_lbar_vs_inverse_chernoff: pearson_correlation(&xs, &ys),
        },
    )
}

#[derive(Serialize)]
struct MetricRow<'a> {
    pair: &'a str,
    chernoff: f64,
    lbar: f64,
    length: usize,
    error_conditional_divergence: f64,
    halfwidth_conditional_divergence: f64,
    error_euclidean: f64,
    halfwidth_euclidean: f64,
}

#[derive(Serialize)]
struct MetricSummary {
    comparisons: usize,
    divergence_not_worse: usize,
    divergence_strictly_better: usize,
    fraction_not_worse: f64,
}

fn metric_compare(args: &ExperimentArgs, pairs: &[Pair], run: &mut RunDir) -> Result<(), Failure> {
    let multipliers = if args.lbar.is_empty() { vec![0.5, 1.0, 2.0] } else { args.lbar.clone() };
    let log_n = (args.n_contigs as f64).log2();
    let mut rows = Vec::new();
    let (mut total, mut not_worse, mut better) = (0, 0, 0);
    for (i, pair) in pairs.iter().enumerate() {
        for (j, &mult) in multipliers.iter().enumerate() {
            let len = ((mult / pair.chernoff * log_n).round() as usize).max(pair.p1.order() + 1);
            let seed = derive_seed(derive_seed(args.seed, RUN_TAG), (i * multipliers.len() + j) as u64);
            let r = metric_comparison(&pair.p1, &pair.p2, len, args.trials, seed)?;
            total += 1;
            not_worse += usize::from(r.error_dc <= r.error_euclid);
            better += usize::from(r.error_dc < r.error_euclid);
            rows.push(MetricRow {
                pair: &pair.name,
                chernoff: pair.chernoff,
                lbar: mult,
                length: len,
                error_conditional_divergence: r.error_dc,
                halfwidth_conditional_divergence: r.halfwidth_dc,
                error_euclidean: r.error_euclid,
                halfwidth_euclidean: r.halfwidth_euclid,
            });
        }
    }
    run.write_csv("metric_compare.csv", &rows)?;
    run.write_json(
        "summary.json",
        &MetricSummary {
            comparisons: total,
            divergence_not_worse: not_worse,
            divergence_strictly_better: better,
            fraction_not_worse: not_worse as f64 / total.max(1) as f64,
        },
    )
}

#[derive(Serialize)]
struct SanovRow {
    eps: f64,
    length: usize,
    empirical_prob: f64,
    halfwidth: f64,
    bound: Option<f64>,
    log2_bound: Option<f64>,
    divergence: Option<f64>,
    dominated: Option<bool>,
}

#[derive(Serialize)]
struct SanovSummary<'a> {
    source: &'a MarkovModel,
    center: &'a MarkovModel,
    rows: usize,
    bounds_available: usize,
    all_dominated: bool,
}

fn sanov(args: &ExperimentArgs, run: &mut RunDir) -> Result<(), Failure> {
    let (q, center) = if args.models.is_empty() {
        let mut r = stream(derive_seed(args.seed, PAIR_TAG), 0);
        let q = random_model(args.order, &alphabet(&args.alphabet)?, args.floor, &mut r)?;
        (q.clone(), q)
    } else {
        let models = load_models(&args.models)?;
        let center = models.get(1).unwrap_or(&models[0]).clone();
        (models[0].clone(), center)
    };
    let eps = if args.eps.is_empty() { vec![0.4] } else { args.eps.clone() };
    let lengths = if args.lengths.is_empty() { vec![50, 100, 200] } else { args.lengths.clone() };
    let mut rows = Vec::new();
    for (i, &e) in eps.iter().enumerate() {
        for (j, &len) in lengths.iter().enumerate() {
            let seed = derive_seed(derive_seed(args.seed, RUN_TAG), (i * lengths.len() + j) as u64);
            let r = sanov_bound_check(&q, &center, e, len, args.trials, seed, TypeCountBound::PerGram)?;
            rows.push(SanovRow {
                eps: e,
                length: len,
                empirical_prob: r.empirical_prob,
                halfwidth: r.halfwidth,
                bound: r.bound,
                log2_bound: r.log2_bound,
                divergence: r.divergence,
                dominated: r.bound.map(|b| r.empirical_prob <= b),
            });
        }
    }
    run.write_csv("sanov.csv", &rows)?;
    let summary = SanovSummary {
        source: &q,
        center: &center,
        rows: rows.len(),
        bounds_available: rows.iter().filter(|r| r.bound.is_some()).count(),
        all_dominated: rows.iter().all(|r| r.dominated != Some(false)),
    };
    run.write_json("summary.json", &summary)
}
