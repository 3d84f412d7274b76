//! Acceptance criteria AC-1 to AC-11. Each test prints one `AC-n PASS` or
//! `AC-n FAIL` line; run with `--nocapture --test-threads=1` to see them in
//! order.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;

use markov_binning::binning::{
    algorithm1, bin_contigs, find_cliques, min_clique_size, score, BinningOptions, CliqueSearch, EpsilonGraph,
};
use markov_binning::chernoff::chernoff_information;
use markov_binning::hypotest::{
    error_exponent, far_set_projection, metric_comparison, min_length_for_error, pearson_correlation,
    sanov_bound_check, Estimator, LengthSearchOptions,
};
use markov_binning::markov::{
    conditional_entropy, conditional_relative_entropy, empirical_type, sequence_log_probability,
    sequence_log_probability_linear, Alphabet, Contig, JointDistribution, MarkovModel, TypeCountBound,
};
use markov_binning::rng::{derive_seed, stream};
use markov_binning::simulator::{generate_contigs, random_model, CommunitySpec};

fn report(id: &str, pass: bool, elapsed: Duration, limit: Duration, detail: String) {
    let within = elapsed <= limit;
    let verdict = if pass && within { "PASS" } else { "FAIL" };
    println!("{id} {verdict}: {detail} [{:.1}s, limit {}s]", elapsed.as_secs_f64(), limit.as_secs());
    assert!(pass, "{id}: {detail}");
    assert!(within, "{id}: took {elapsed:?}, limit {limit:?}");
}

// Test-side oracles, written from the definitions.

fn log2_ratio(a: f64, b: f64) -> f64 {
    (a / b).log2()
}

fn kl(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).filter(|(a, _)| **a > 0.0).map(|(a, b)| a * log2_ratio(*a, *b)).sum()
}

fn shannon(p: &[f64]) -> f64 {
    -p.iter().filter(|a| **a > 0.0).map(|a| a * a.log2()).sum::<f64>()
}

/// Sums out the last symbol of every gram.
fn prefix_marginal(p: &[f64], k: usize) -> Vec<f64> {
    p.chunks(k).map(|c| c.iter().sum()).collect()
}

/// `sum_ab p(ab) log2(p(b|a) / q(b|a))`.
fn dc_direct(p: &[f64], q: &[f64], k: usize) -> f64 {
    let mut total = 0.0;
    for (pr, qr) in p.chunks(k).zip(q.chunks(k)) {
        let (ps, qs): (f64, f64) = (pr.iter().sum(), qr.iter().sum());
        for (a, b) in pr.iter().zip(qr) {
            if *a > 0.0 {
                total += a * log2_ratio(a / ps, b / qs);
            }
        }
    }
    total
}

struct BinaryChain {
    a: f64,
    b: f64,
}

impl BinaryChain {
    fn transition(&self, from: u8, to: u8) -> f64 {
        let one = if from == 0 { self.a } else { self.b };
        if to == 1 { one } else { 1.0 - one }
    }

    fn stationary(&self, s: u8) -> f64 {
        let pi1 = self.a / (self.a + 1.0 - self.b);
        if s == 1 { pi1 } else { 1.0 - pi1 }
    }

    fn model(&self) -> MarkovModel {
        MarkovModel::binary(self.a, self.b).unwrap()
    }
}

fn bits(x: u32, len: usize) -> Vec<u8> {
    (0..len).map(|i| ((x >> i) & 1) as u8).collect()
}

#[test]
fn ac01_likelihood_of_a_type_and_normalization() {
    let start = Instant::now();
    let chains = [
        BinaryChain { a: 0.3, b: 0.6 },
        BinaryChain { a: 0.25, b: 0.25 },
        BinaryChain { a: 0.9, b: 0.05 },
        BinaryChain { a: 0.5, b: 0.5 },
    ];
    let alphabet = Alphabet::binary();
    let (mut worst_identity, mut worst_linear, mut worst_mass) = (0.0f64, 0.0f64, 0.0f64);
    for chain in &chains {
        let model = chain.model();
        for len in 2..=12usize {
            let mut mass = 0.0;
            for x in 0..1u32 << len {
                let s = bits(x, len);
                let contig = Contig::new(s.clone(), &alphabet, None).unwrap();
                let linear: f64 = chain.stationary(s[0])
                    * s.windows(2).map(|w| chain.transition(w[0], w[1])).product::<f64>();
                let cyclic = linear * chain.transition(s[len - 1], s[0]);
                let lib_linear = sequence_log_probability_linear(&contig, &model).unwrap().exp2();
                let lib_cyclic = sequence_log_probability(&contig, &model).unwrap().exp2();
                worst_linear = worst_linear.max((lib_linear - linear).abs());
                worst_identity = worst_identity.max((lib_cyclic - cyclic).abs());
                mass += lib_linear;
            }
            worst_mass = worst_mass.max((mass - 1.0).abs());
        }
    }
    let pass = worst_identity <= 1e-9 && worst_linear <= 1e-9 && worst_mass <= 1e-9;
    report(
        "AC-1",
        pass,
        start.elapsed(),
        Duration::from_secs(10),
        format!("type formula vs cyclic product {worst_identity:.2e}, linear {worst_linear:.2e}, |sum - 1| {worst_mass:.2e}"),
    );
}

#[test]
fn ac02_divergence_identities() {
    let start = Instant::now();
    let dna = Alphabet::dna();
    let mut r = stream(2, 0);
    let (mut worst_d, mut worst_h) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let p = random_model(3, &dna, 0.005, &mut r).unwrap();
        let q = random_model(3, &dna, 0.005, &mut r).unwrap();
        let (pj, qj) = (p.joint().probs(), q.joint().probs());
        let d_oracle = kl(pj, qj) - kl(&prefix_marginal(pj, 4), &prefix_marginal(qj, 4));
        let h_oracle = shannon(pj) - shannon(&prefix_marginal(pj, 4));
        worst_d = worst_d.max((conditional_relative_entropy(p.joint(), q.joint()) - d_oracle).abs());
        worst_h = worst_h.max((conditional_entropy(p.joint()) - h_oracle).abs());
    }
    report(
        "AC-2",
        worst_d <= 1e-10 && worst_h <= 1e-10,
        start.elapsed(),
        Duration::from_secs(5),
        format!("1000 DNA order-3 pairs, max |D_c - (D4 - D3)| {worst_d:.2e}, max |H_c - (H4 - H3)| {worst_h:.2e}"),
    );
}

/// `min_p max(D_c(p || p1), D_c(p || p2))` over the consistent binary
/// triangle `(y, x, x, 1 - y - 2x)`: a grid at the given resolution, then two
/// local refinements around the best cell.
fn minimax_grid_oracle(q1: &[f64], q2: &[f64], resolution: usize) -> f64 {
    let f = |x: f64, y: f64| -> f64 {
        let z = 1.0 - y - 2.0 * x;
        if x < 0.0 || y < 0.0 || z < -1e-12 {
            return f64::INFINITY;
        }
        let p = [y, x, x, z.max(0.0)];
        dc_direct(&p, q1, 2).max(dc_direct(&p, q2, 2))
    };
    let (mut hx, mut hy) = (0.5 / resolution as f64, 1.0 / resolution as f64);
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..=resolution {
        for j in 0..=resolution {
            let (x, y) = (i as f64 * hx, j as f64 * hy);
            let v = f(x, y);
            if v < best.0 {
                best = (v, x, y);
            }
        }
    }
    for _ in 0..2 {
        let (cx, cy) = (best.1, best.2);
        let (sx, sy) = (hx / 10.0, hy / 10.0);
        for i in -20..=20 {
            for j in -20..=20 {
                let (x, y) = (cx + i as f64 * sx, cy + j as f64 * sy);
                let v = f(x, y);
                if v < best.0 {
                    best = (v, x, y);
                }
            }
        }
        hx = sx;
        hy = sy;
    }
    best.0
}

#[test]
fn ac03_chernoff_solver_matches_grid_oracle() {
    let start = Instant::now();
    let resolution = 2000;
    let tol = (2.0 / resolution as f64).max(1e-3);
    let mut r = stream(3, 0);
    let (mut worst_diff, mut worst_gap, mut failures) = (0.0f64, 0.0f64, 0);
    let pairs = 24;
    for _ in 0..pairs {
        let mut draw = || MarkovModel::binary(r.gen_range(0.05..0.95), r.gen_range(0.05..0.95)).unwrap();
        let (p1, p2) = (draw(), draw());
        let c = chernoff_information(&p1, &p2, 1e-10).unwrap();
        let oracle = minimax_grid_oracle(p1.joint().probs(), p2.joint().probs(), resolution);
        let diff = (c.value - oracle).abs();
        worst_diff = worst_diff.max(diff);
        worst_gap = worst_gap.max(c.constraint_gap);
        if diff > tol || c.constraint_gap > 1e-8 || !c.converged {
            failures += 1;
        }
    }
    report(
        "AC-3",
        failures == 0,
        start.elapsed(),
        Duration::from_secs(120),
        format!("{pairs} binary pairs, max |C - oracle| {worst_diff:.2e} (tol {tol:.0e}), max gap {worst_gap:.2e}"),
    );
}

#[test]
fn ac04_error_exponent_matches_chernoff() {
    let start = Instant::now();
    let p1 = MarkovModel::binary(0.25, 0.25).unwrap();
    let p2 = MarkovModel::binary(0.75, 0.75).unwrap();
    let est = error_exponent(&p1, &p2, &[25, 50, 100, 200], 100_000, 4, Estimator::Tilted).unwrap();
    let rel = est.relative_error();
    report(
        "AC-4",
        rel.is_some_and(|e| e <= 0.15),
        start.elapsed(),
        Duration::from_secs(600),
        format!(
            "C = {:.5}, fitted {:?}, relative error {:?}, errors {:?}",
            est.chernoff_reference,
            est.exponent_estimate.map(|c| (c * 1e5).round() / 1e5),
            rel.map(|e| (e * 1e4).round() / 1e4),
            est.error_rates.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>()
        ),
    );
}

fn threshold_community() -> Vec<MarkovModel> {
    vec![
        MarkovModel::binary(0.15, 0.3).unwrap(),
        MarkovModel::binary(0.5, 0.5).unwrap(),
        MarkovModel::binary(0.8, 0.7).unwrap(),
    ]
}

/// Number of perfectly binned runs out of 20 at `L = ceil(mult log2 N / C_min)`.
fn perfect_runs(mult: f64) -> (usize, usize, f64) {
    let models = threshold_community();
    let mut c_min = f64::INFINITY;
    for i in 0..models.len() {
        for j in i + 1..models.len() {
            c_min = c_min.min(chernoff_information(&models[i], &models[j], 1e-10).unwrap().value);
        }
    }
    let n = 300;
    let len = (mult * (n as f64).log2() / c_min).ceil() as usize;
    let mut perfect = 0;
    for run in 0..20u64 {
        let spec = CommunitySpec::uniform(models.clone(), len, n, derive_seed(5, run));
        let contigs = generate_contigs(&spec).unwrap();
        let truth: Vec<usize> = contigs.iter().map(|c| c.label.unwrap()).collect();
        let out = bin_contigs(&contigs, 3, 1, &Alphabet::binary(), &BinningOptions::default()).unwrap();
        perfect += usize::from(score(&out.assignment.assignment, &truth, 3).unwrap().perfect);
    }
    (perfect, len, c_min)
}

#[test]
fn ac05_binning_succeeds_above_threshold() {
    let start = Instant::now();
    let (perfect, len, c_min) = perfect_runs(1.5);
    report(
        "AC-5",
        perfect >= 18,
        start.elapsed(),
        Duration::from_secs(600),
        format!("M=3 binary, C_min {c_min:.4}, N=300, L={len}: perfect in {perfect}/20"),
    );
}

#[test]
fn ac06_binning_degrades_below_threshold() {
    let start = Instant::now();
    let (perfect, len, c_min) = perfect_runs(0.5);
    report(
        "AC-6",
        perfect <= 10,
        start.elapsed(),
        Duration::from_secs(600),
        format!("M=3 binary, C_min {c_min:.4}, N=300, L={len}: perfect in {perfect}/20"),
    );
}

/// Random binary pairs with `C` in `[lo, hi]` whose two divergences differ
/// by at least 10%.
fn asymmetric_pairs(count: usize, lo: f64, hi: f64, seed: u64) -> Vec<(MarkovModel, MarkovModel, f64)> {
    let mut r = stream(seed, 0);
    let mut out = Vec::new();
    while out.len() < count {
        let p1 = MarkovModel::binary(r.gen_range(0.05..0.95), r.gen_range(0.05..0.95)).unwrap();
        let p2 = MarkovModel::binary(r.gen_range(0.05..0.95), r.gen_range(0.05..0.95)).unwrap();
        let d12 = dc_direct(p1.joint().probs(), p2.joint().probs(), 2);
        let d21 = dc_direct(p2.joint().probs(), p1.joint().probs(), 2);
        if (d12 - d21).abs() < 0.1 * d12.max(d21) {
            continue;
        }
        let c = chernoff_information(&p1, &p2, 1e-10).unwrap().value;
        if (lo..=hi).contains(&c) {
            out.push((p1, p2, c));
        }
    }
    out
}

#[test]
fn ac07_conditional_divergence_beats_euclidean() {
    let start = Instant::now();
    let pairs = asymmetric_pairs(20, 0.05, 0.5, 7);
    let (mut wins, mut ties_at_zero) = (0, 0);
    for (i, (p1, p2, c)) in pairs.iter().enumerate() {
        let len = (1e6f64.log2() / c).round() as usize;
        let r = metric_comparison(p1, p2, len, 100_000, derive_seed(7, i as u64)).unwrap();
        wins += usize::from(r.error_dc <= r.error_euclid);
        ties_at_zero += usize::from(r.error_dc == 0.0 && r.error_euclid == 0.0);
    }
    report(
        "AC-7",
        wins * 5 >= pairs.len() * 4,
        start.elapsed(),
        Duration::from_secs(900),
        format!("error_dc <= error_euclid in {wins}/{} pairs ({ties_at_zero} with no errors under either)", pairs.len()),
    );
}

#[test]
fn ac08_l5pct_scales_with_inverse_chernoff() {
    let start = Instant::now();
    let mut pairs = Vec::new();
    for (i, c) in [0.03, 0.045, 0.06, 0.08, 0.1, 0.13, 0.17, 0.22, 0.28, 0.36].iter().enumerate() {
        pairs.extend(asymmetric_pairs(1, *c, c * 1.15, 80 + i as u64));
    }
    let opts = LengthSearchOptions::default();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (i, (p1, p2, c)) in pairs.iter().enumerate() {
        let r = min_length_for_error(p1, p2, 0.05, 20_000, derive_seed(8, i as u64), &opts).unwrap();
        xs.push(1.0 / c);
        ys.push(r.lbar);
    }
    let span = xs.iter().cloned().fold(0.0, f64::max) / xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let rho = pearson_correlation(&xs, &ys).unwrap_or(f64::NAN);
    report(
        "AC-8",
        pairs.len() >= 10 && span >= 5.0 && rho >= 0.9,
        start.elapsed(),
        Duration::from_secs(1200),
        format!("{} pairs, 1/C range {span:.1}x, Pearson {rho:.4}", pairs.len()),
    );
}

#[test]
fn ac09_sanov_bound_dominates() {
    let start = Instant::now();
    let sources = [MarkovModel::binary(0.5, 0.5).unwrap(), MarkovModel::binary(0.3, 0.6).unwrap()];
    let mut rows = 0;
    let mut violations = Vec::new();
    let mut smallest_bound = f64::INFINITY;
    for (s, q) in sources.iter().enumerate() {
        for (e, eps) in [0.2, 0.4, 0.8].iter().enumerate() {
            for (l, len) in [50, 100, 200, 1000].iter().enumerate() {
                let seed = derive_seed(9, (s * 100 + e * 10 + l) as u64);
                let r = sanov_bound_check(q, q, *eps, *len, 100_000, seed, TypeCountBound::PerGram).unwrap();
                rows += 1;
                match r.bound {
                    Some(b) if r.empirical_prob <= b => smallest_bound = smallest_bound.min(b),
                    _ => violations.push((s, *eps, *len, r.empirical_prob, r.bound)),
                }
            }
        }
    }
    report(
        "AC-9",
        violations.is_empty(),
        start.elapsed(),
        Duration::from_secs(300),
        format!("{rows} (source, eps, L) rows, violations {violations:?}, smallest bound {smallest_bound:.3e}"),
    );
}

#[derive(Default)]
struct LemmaTally {
    lemma1_pairs_checked: u64,
    lemma1_violations: u64,
    impure_cliques: u64,
    lemma2_events: u64,
    eq10_checked: u64,
    eq10_violations: u64,
}

/// Lemma 1, Lemma 2 and the good-fraction bound on one community.
fn lemma_instance(models: &[MarkovModel], n: usize, len: usize, alpha: f64, eps: f64, seed: u64, t: &mut LemmaTally) {
    let m = models.len();
    let alphabet = Alphabet::binary();
    let contigs = generate_contigs(&CommunitySpec::uniform(models.to_vec(), len, n, seed)).unwrap();
    let types: Vec<JointDistribution> = contigs.iter().map(|c| empirical_type(c, 1, &alphabet).unwrap()).collect();
    let labels: Vec<usize> = contigs.iter().map(|c| c.label.unwrap()).collect();
    let to_own: Vec<f64> =
        types.iter().zip(&labels).map(|(t, &k)| l1(t.probs(), models[k].joint().probs())).collect();
    let d_min = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .map(|(i, j)| l1(models[i].joint().probs(), models[j].joint().probs()))
        .fold(f64::INFINITY, f64::min);
    let need = (1.0 - alpha) * n as f64 / m as f64;
    let min_size = min_clique_size(n, m, alpha);

    let check = |eps: f64, cliques: &[Vec<usize>], t: &mut LemmaTally| {
        assert!(eps < d_min / 2.0);
        let good: Vec<bool> = to_own.iter().map(|&d| d <= eps / 2.0).collect();
        for i in 0..n {
            for j in i + 1..n {
                if good[i] && good[j] && labels[i] != labels[j] {
                    t.lemma1_pairs_checked += 1;
                    t.lemma1_violations += u64::from(l1(types[i].probs(), types[j].probs()) <= eps);
                }
            }
        }
        for clique in cliques {
            let species: std::collections::BTreeSet<usize> =
                clique.iter().filter(|&&v| good[v]).map(|&v| labels[v]).collect();
            t.impure_cliques += u64::from(species.len() > 1);
        }
        let counts: Vec<usize> = (0..m).map(|k| (0..n).filter(|&v| good[v] && labels[v] == k).count()).collect();
        if counts.iter().all(|&c| c as f64 >= need) && cliques.len() == m && cliques.iter().all(|c| c.len() >= min_size) {
            for clique in cliques {
                t.eq10_checked += 1;
                let frac = clique.iter().filter(|&&v| good[v]).count() as f64 / clique.len() as f64;
                t.eq10_violations += u64::from(frac < 1.0 - alpha * m as f64 / (1.0 - alpha));
            }
        }
        counts
    };

    let graph = EpsilonGraph::build(&types, eps);
    let cliques = find_cliques(&graph, m, min_size, CliqueSearch::Greedy).unwrap_or_default();
    let counts = check(eps, &cliques, t);
    t.lemma2_events += u64::from(counts.iter().any(|&c| (c as f64) < need));

    let found = algorithm1(&types, m, alpha, CliqueSearch::Greedy).unwrap();
    if let Some(e) = found.epsilon.filter(|e| *e < d_min / 2.0) {
        check(e, &found.cliques, t);
    }
}

fn l1(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum()
}

#[test]
fn ac10_lemmas_on_synthetic_instances() {
    let start = Instant::now();
    let models = [MarkovModel::binary(0.1, 0.3).unwrap(), MarkovModel::binary(0.7, 0.9).unwrap()];
    let (n, len, alpha, eps) = (800usize, 1500usize, 0.25, 0.7);
    let m = models.len() as f64;
    // Right-hand side of Lemma 2 with the type count (L + 1)^4.
    let mut rhs_total = 0.0;
    for q in &models {
        let (d_star, _) = far_set_projection(q, q, eps / 2.0).unwrap();
        let sanov = (4.0 * ((len + 1) as f64).log2() - len as f64 * d_star).exp2();
        rhs_total += 2.0 * m / alpha * sanov + (-(n as f64) * alpha * alpha / (2.0 * m * m)).exp();
    }
    let instances = 100;
    let mut t = LemmaTally::default();
    for i in 0..instances {
        lemma_instance(&models, n, len, alpha, eps, derive_seed(10, i), &mut t);
    }
    let lemma2_ok = (t.lemma2_events as f64) <= (rhs_total * instances as f64).max(1.0);
    let pass = t.lemma1_violations == 0 && t.impure_cliques == 0 && lemma2_ok && t.eq10_violations == 0 && t.eq10_checked > 0;
    report(
        "AC-10",
        pass,
        start.elapsed(),
        Duration::from_secs(300),
        format!(
            "{instances} instances: Lemma 1 {} cross-species good pairs, {} edges, {} impure cliques; \
             Lemma 2 events {} (bound sum {rhs_total:.2e}); good-fraction checks {} with {} below bound",
            t.lemma1_pairs_checked, t.lemma1_violations, t.impure_cliques, t.lemma2_events, t.eq10_checked, t.eq10_violations
        ),
    );
}

fn mbin(args: &[&str]) {
    let status = Command::new(env!("CARGO_BIN_EXE_mbin")).args(args).status().unwrap();
    assert!(status.success(), "mbin {args:?} exited with {status}");
}

/// Every file under `dir` except manifests, keyed by relative path.
fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else if path.file_name().unwrap() != "manifest.json" {
                out.insert(path.strip_prefix(dir).unwrap().to_path_buf(), std::fs::read(&path).unwrap());
            }
        }
    }
    out
}

#[test]
fn ac11_cli_runs_are_reproducible() {
    let start = Instant::now();
    let work = tempfile::tempdir().unwrap();
    let w = |name: &str| work.path().join(name).to_string_lossy().into_owned();

    let dna = Alphabet::dna();
    let mut r = stream(11, 0);
    for name in ["g1", "g2"] {
        let model = random_model(2, &dna, 0.02, &mut r).unwrap();
        let genome = markov_binning::simulator::sample_sequence(&model, 20_000, &mut r).unwrap();
        std::fs::write(w(&format!("{name}.fa")), format!(">{name}\n{}\n", dna.decode(&genome.symbols))).unwrap();
    }

    let runs: Vec<(&str, Vec<String>)> = vec![
        ("fit", vec!["fit".into(), w("g1.fa"), w("g2.fa"), "--order".into(), "2".into()]),
        ("chernoff", vec!["chernoff".into(), w("fit_a/g1.json"), w("fit_a/g2.json")]),
        (
            "simulate",
            ["simulate", "--models", &w("fit_a/g1.json"), &w("fit_a/g2.json"), "--lbar", "8", "--n-contigs", "200", "--seed", "3"]
                .map(String::from)
                .to_vec(),
        ),
        ("bin", ["bin", &w("simulate_a/contigs.fasta"), "--bins", "2", "--order", "2"].map(String::from).to_vec()),
        (
            "exponent",
            ["experiment", "exponent", "--random-pairs", "2", "--trials", "2000", "--lengths", "10,20,40", "--seed", "5"]
                .map(String::from)
                .to_vec(),
        ),
        ("l5pct", ["experiment", "l5pct", "--random-pairs", "3", "--trials", "1000", "--seed", "6"].map(String::from).to_vec()),
        (
            "metric",
            ["experiment", "metric-compare", "--random-pairs", "2", "--trials", "1000", "--n-contigs", "1000", "--seed", "7"]
                .map(String::from)
                .to_vec(),
        ),
        ("sanov", ["experiment", "sanov", "--trials", "2000", "--lengths", "20,40", "--seed", "8"].map(String::from).to_vec()),
    ];

    let mut identical = Vec::new();
    let mut differing = Vec::new();
    for (name, args) in &runs {
        let mut snaps = Vec::new();
        for copy in ["a", "b"] {
            let out = w(&format!("{name}_{copy}"));
            let mut full: Vec<&str> = args.iter().map(String::as_str).collect();
            full.extend(["--out", &out]);
            mbin(&full);
            snaps.push(snapshot(Path::new(&out)));
        }
        if !snaps[0].is_empty() && snaps[0] == snaps[1] {
            identical.push(*name);
        } else {
            differing.push(*name);
        }
    }
    report(
        "AC-11",
        differing.is_empty(),
        start.elapsed(),
        Duration::from_secs(300),
        format!("byte-identical outputs for {identical:?}, differing {differing:?}"),
    );
}
