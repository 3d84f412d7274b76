//! WebAssembly bindings for the browser demo in `www/`. Every export returns
//! a JSON string.
//!
//! Binary first-order laws are drawn in the triangle of
//! `(p(00), p(01) + p(10), p(11))`; consistency forces `p(01) = p(10)`, so
//! this triangle is the whole family of stationary binary chains.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use markov_binning::binning::{algorithm1, default_alpha, score, CliqueSearch};
use markov_binning::chernoff::{boundary_coefficients, chernoff_information};
use markov_binning::hypotest::metric_comparison;
use markov_binning::markov::{conditional_relative_entropy, empirical_type, Alphabet, JointDistribution, MarkovModel};
use markov_binning::simulator::{generate_contigs, CommunitySpec};

/// Plane coordinates of a binary joint law: vertices `00` at `(0, 0)`,
/// `11` at `(1, 0)` and the alternating chain at `(1/2, sqrt(3)/2)`.
pub fn triangle_point(p: &[f64]) -> [f64; 2] {
    let mid = p[1] + p[2];
    [p[3] + 0.5 * mid, mid * 3f64.sqrt() / 2.0]
}

fn binary(a: f64, b: f64) -> Result<MarkovModel, JsError> {
    MarkovModel::binary(a, b).map_err(|e| JsError::new(&e.to_string()))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, JsError> {
    serde_json::to_string(value).map_err(|e| JsError::new(&e.to_string()))
}

fn js(e: markov_binning::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[derive(Serialize)]
struct Geometry {
    chernoff: f64,
    d12: f64,
    d21: f64,
    p1: [f64; 2],
    p2: [f64; 2],
    p_star: [f64; 2],
    /// Rows of `D_c(p || p1) - D_c(p || p2)` on the triangle, `None`
    /// outside it; row `i` is at height `i / (n - 1)` of the apex.
    llr: Vec<Vec<Option<f64>>>,
    /// Where the decision boundary crosses the triangle's edges.
    boundary: Vec<[f64; 2]>,
}

/// Chernoff point and decision regions of two binary chains with
/// `P(1 | 0) = a` and `P(1 | 1) = b`.
#[wasm_bindgen]
pub fn simplex_geometry(a1: f64, b1: f64, a2: f64, b2: f64, resolution: usize) -> Result<String, JsError> {
    let (p1, p2) = (binary(a1, b1)?, binary(a2, b2)?);
    let c = chernoff_information(&p1, &p2, 1e-10).map_err(js)?;
    let r = boundary_coefficients(&p1, &p2);
    let n = resolution.clamp(2, 400);
    let h = 3f64.sqrt() / 2.0;
    let llr = (0..n)
        .map(|i| {
            let y = h * i as f64 / (n - 1) as f64;
            (0..n)
                .map(|j| {
                    let x = j as f64 / (n - 1) as f64;
                    let mid = y / h;
                    let p11 = x - 0.5 * mid;
                    let p00 = 1.0 - mid - p11;
                    (p11 >= 0.0 && p00 >= 0.0)
                        .then(|| r[0] * p00 + (r[1] + r[2]) * mid / 2.0 + r[3] * p11)
                })
                .collect()
        })
        .collect();

    let corners = [[1.0, 0.0, 0.0, 0.0], [0.0, 0.5, 0.5, 0.0], [0.0, 0.0, 0.0, 1.0]];
    let value = |p: &[f64; 4]| r.iter().zip(p).map(|(a, b)| a * b).sum::<f64>();
    let mut boundary = Vec::new();
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        let (va, vb) = (value(&corners[i]), value(&corners[j]));
        if (va <= 0.0) != (vb <= 0.0) {
            let t = va / (va - vb);
            let p: Vec<f64> = corners[i].iter().zip(&corners[j]).map(|(a, b)| a + t * (b - a)).collect();
            boundary.push(triangle_point(&p));
        }
    }
    to_json(&Geometry {
        chernoff: c.value,
        d12: conditional_relative_entropy(p1.joint(), p2.joint()),
        d21: conditional_relative_entropy(p2.joint(), p1.joint()),
        p1: triangle_point(p1.joint().probs()),
        p2: triangle_point(p2.joint().probs()),
        p_star: triangle_point(c.p_star.probs()),
        llr,
        boundary,
    })
}

#[derive(Serialize)]
struct CurvePoint {
    length: usize,
    error_dc: f64,
    error_euclid: f64,
    /// `2^(-L C)`, the exponential rate of the optimal error.
    chernoff_rate: f64,
}

#[derive(Serialize)]
struct Curves {
    chernoff: f64,
    points: Vec<CurvePoint>,
}

/// Misclassification rates of nearest-model assignment by conditional
/// divergence and by Euclidean distance, over a range of lengths.
#[wasm_bindgen]
pub fn error_curves(a1: f64, b1: f64, a2: f64, b2: f64, max_length: usize, trials: u32, seed: u32) -> Result<String, JsError> {
    let (p1, p2) = (binary(a1, b1)?, binary(a2, b2)?);
    let c = chernoff_information(&p1, &p2, 1e-10).map_err(js)?.value;
    let max_length = max_length.clamp(4, 2000);
    let step = (max_length / 20).max(1);
    let points = (1..=max_length / step)
        .map(|i| {
            let len = (i * step).max(2);
            let m = metric_comparison(&p1, &p2, len, trials.max(1) as u64, seed as u64 + i as u64).map_err(js)?;
            Ok(CurvePoint { length: len, error_dc: m.error_dc, error_euclid: m.error_euclid, chernoff_rate: (-(len as f64) * c).exp2() })
        })
        .collect::<Result<Vec<_>, JsError>>()?;
    to_json(&Curves { chernoff: c, points })
}

#[derive(Serialize)]
struct Contig {
    point: [f64; 2],
    species: usize,
    bin: usize,
}

#[derive(Serialize)]
struct Scatter {
    contigs: Vec<Contig>,
    sources: Vec<[f64; 2]>,
    estimates: Vec<[f64; 2]>,
    epsilon: Option<f64>,
    succeeded: bool,
    misbinned: usize,
    /// `perm[b]` is the species matched to bin `b`.
    permutation: Vec<usize>,
}

/// Simulates contigs from binary chains given as `[a1, b1, a2, b2, ...]`,
/// bins them and returns every contig's type with its species and bin.
#[wasm_bindgen]
pub fn binning_scatter(params: Vec<f64>, contigs: usize, length: usize, seed: u32) -> Result<String, JsError> {
    if params.len() < 2 || !params.len().is_multiple_of(2) {
        return Err(JsError::new("give P(1|0), P(1|1) for each species"));
    }
    let models = params.chunks(2).map(|c| binary(c[0], c[1])).collect::<Result<Vec<_>, _>>()?;
    let m = models.len();
    let spec = CommunitySpec::uniform(models.clone(), length.max(2), contigs.clamp(m, 2000), seed as u64);
    let sampled = generate_contigs(&spec).map_err(js)?;
    let alphabet = Alphabet::binary();
    let types = sampled.iter().map(|c| empirical_type(c, 1, &alphabet)).collect::<Result<Vec<JointDistribution>, _>>().map_err(js)?;
    let out = algorithm1(&types, m, default_alpha(length as f64), CliqueSearch::Greedy).map_err(js)?;
    let truth: Vec<usize> = sampled.iter().map(|c| c.label.unwrap_or(0)).collect();
    let s = score(&out.assignment.assignment, &truth, m).map_err(js)?;
    to_json(&Scatter {
        contigs: types
            .iter()
            .zip(&truth)
            .zip(&out.assignment.assignment)
            .map(|((t, &species), &bin)| Contig { point: triangle_point(t.probs()), species, bin })
            .collect(),
        sources: models.iter().map(|p| triangle_point(p.joint().probs())).collect(),
        estimates: out.assignment.estimates.iter().map(|e| triangle_point(e.probs())).collect(),
        epsilon: out.epsilon,
        succeeded: out.succeeded(),
        misbinned: s.misbin_count,
        permutation: s.permutation,
    })
}
