use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest `M` scored by trying every relabeling.
pub const EXHAUSTIVE_MAX_BINS: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinningScore {
    pub misbin_count: usize,
    pub misbin_rate: f64,
    pub perfect: bool,
    /// `permutation[bin]` is the species (0-based) that bin is matched to.
    pub permutation: Vec<usize>,
}

/// Misbinned contigs under the best bin-to-species relabeling.
pub fn score(assignment: &[usize], truth: &[usize], bins: usize) -> Result<BinningScore> {
    if assignment.len() != truth.len() {
        return Err(invalid(format!("{} assignments but {} labels", assignment.len(), truth.len())));
    }
    if bins == 0 {
        return Err(invalid("need at least one bin"));
    }
    if let Some(&b) = assignment.iter().find(|&&b| b >= bins) {
        return Err(Error::ShapeMismatch(format!("bin {} exceeds M = {bins}", b + 1)));
    }
    if let Some(&s) = truth.iter().find(|&&s| s >= bins) {
        return Err(Error::ShapeMismatch(format!("species {} exceeds M = {bins}", s + 1)));
    }

    let mut counts = vec![vec![0usize; bins]; bins];
    for (&b, &s) in assignment.iter().zip(truth) {
        counts[b][s] += 1;
    }
    let permutation = if bins <= EXHAUSTIVE_MAX_BINS { best_permutation(&counts) } else { hungarian_max(&counts) };
    let matched: usize = permutation.iter().enumerate().map(|(b, &s)| counts[b][s]).sum();
    let misbin_count = assignment.len() - matched;
    Ok(BinningScore {
        misbin_count,
        misbin_rate: if assignment.is_empty() { 0.0 } else { misbin_count as f64 / assignment.len() as f64 },
        perfect: misbin_count == 0,
        permutation,
    })
}

fn best_permutation(counts: &[Vec<usize>]) -> Vec<usize> {
    let m = counts.len();
    let mut perm: Vec<usize> = (0..m).collect();
    let mut best = (0, perm.clone());
    permute(&mut perm, 0, counts, &mut best);
    best.1
}

fn permute(perm: &mut Vec<usize>, k: usize, counts: &[Vec<usize>], best: &mut (usize, Vec<usize>)) {
    if k == perm.len() {
        let total = perm.iter().enumerate().map(|(b, &s)| counts[b][s]).sum();
        if total > best.0 {
            *best = (total, perm.clone());
        }
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, counts, best);
        perm.swap(k, i);
    }
}

/// Maximum-weight perfect matching of rows to columns (Hungarian method on
/// negated weights, potentials formulation).
fn hungarian_max(weights: &[Vec<usize>]) -> Vec<usize> {
    let n = weights.len();
    let cost = |i: usize, j: usize| -(weights[i - 1][j - 1] as i64);
    let (mut u, mut v) = (vec![0i64; n + 1], vec![0i64; n + 1]);
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![i64::MAX; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = i64::MAX;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0, j) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut perm = vec![0; n];
    for j in 1..=n {
        perm[owner[j] - 1] = j - 1;
    }
    perm
}
