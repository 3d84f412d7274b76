use serde::{Deserialize, Serialize};

use super::graph::{EpsilonGraph, VertexSet};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CliqueSearch {
    /// Highest-degree seed, then repeatedly the common neighbour with the most
    /// neighbours among the remaining candidates.
    #[default]
    Greedy,
    /// Backtracking over all cliques; only for small graphs.
    Exact,
}

/// Largest graph the exact search accepts.
pub const EXACT_MAX_NODES: usize = 40;

/// Up to `count` vertex-disjoint cliques grown greedily, each maximal among
/// the vertices not used by earlier cliques.
pub fn greedy_cliques(graph: &EpsilonGraph, count: usize) -> Vec<Vec<usize>> {
    let n = graph.node_count();
    let mut unused = VertexSet::full(n);
    let mut cliques = Vec::with_capacity(count);
    for _ in 0..count {
        let Some(seed) = argmax(unused.iter(), |v| graph.neighbors(v).intersection_len(&unused)) else {
            break;
        };
        let mut clique = vec![seed];
        let mut candidates = graph.neighbors(seed).clone();
        candidates.intersect_with(&unused);
        while let Some(v) = argmax(candidates.iter(), |v| graph.neighbors(v).intersection_len(&candidates)) {
            clique.push(v);
            candidates.intersect_with(graph.neighbors(v));
        }
        for &v in &clique {
            unused.remove(v);
        }
        clique.sort_unstable();
        cliques.push(clique);
    }
    cliques
}

/// First maximizer, so ties go to the smallest vertex.
fn argmax(it: impl Iterator<Item = usize>, score: impl Fn(usize) -> usize) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for v in it {
        let s = score(v);
        if best.is_none_or(|(_, bs)| s > bs) {
            best = Some((v, s));
        }
    }
    best.map(|(v, _)| v)
}

/// `count` vertex-disjoint cliques of at least `min_size` vertices each, or
/// `None` when the chosen procedure finds none.
pub fn find_cliques(graph: &EpsilonGraph, count: usize, min_size: usize, search: CliqueSearch) -> Option<Vec<Vec<usize>>> {
    let min_size = min_size.max(1);
    if count * min_size > graph.node_count() {
        return None;
    }
    match search {
        CliqueSearch::Greedy => {
            let cliques = greedy_cliques(graph, count);
            (cliques.len() == count && cliques.iter().all(|c| c.len() >= min_size)).then_some(cliques)
        }
        CliqueSearch::Exact => exact_cliques(graph, count, min_size),
    }
}

fn exact_cliques(graph: &EpsilonGraph, count: usize, size: usize) -> Option<Vec<Vec<usize>>> {
    let n = graph.node_count();
    assert!(n <= EXACT_MAX_NODES, "exact clique search is limited to {EXACT_MAX_NODES} nodes");
    let mut used = vec![false; n];
    let mut found = Vec::new();
    if !place(graph, count, size, 0, &mut used, &mut found) {
        return None;
    }
    // Grow each clique to a maximal one among vertices nobody else uses.
    for k in 0..found.len() {
        let mut candidates = VertexSet::full(n);
        for (v, &u) in used.iter().enumerate() {
            if u {
                candidates.remove(v);
            }
        }
        for &v in &found[k] {
            candidates.intersect_with(graph.neighbors(v));
        }
        while let Some(v) = argmax(candidates.iter(), |v| graph.neighbors(v).intersection_len(&candidates)) {
            found[k].push(v);
            used[v] = true;
            candidates.intersect_with(graph.neighbors(v));
        }
        found[k].sort_unstable();
    }
    Some(found)
}

/// Places cliques in increasing order of their smallest vertex.
fn place(graph: &EpsilonGraph, count: usize, size: usize, start: usize, used: &mut [bool], found: &mut Vec<Vec<usize>>) -> bool {
    if found.len() == count {
        return true;
    }
    let free = used.iter().filter(|&&u| !u).count();
    if free < (count - found.len()) * size {
        return false;
    }
    for v in start..used.len() {
        if used[v] {
            continue;
        }
        let mut current = vec![v];
        if extend(graph, count, size, v, &mut current, used, found) {
            return true;
        }
    }
    false
}

fn extend(
    graph: &EpsilonGraph,
    count: usize,
    size: usize,
    root: usize,
    current: &mut Vec<usize>,
    used: &mut [bool],
    found: &mut Vec<Vec<usize>>,
) -> bool {
    if current.len() == size {
        for &v in current.iter() {
            used[v] = true;
        }
        found.push(current.clone());
        if place(graph, count, size, root + 1, used, found) {
            return true;
        }
        found.pop();
        for &v in current.iter() {
            used[v] = false;
        }
        return false;
    }
    let last = *current.last().expect("non-empty");
    for w in last + 1..used.len() {
        if !used[w] && current.iter().all(|&u| graph.has_edge(u, w)) {
            current.push(w);
            if extend(graph, count, size, root, current, used, found) {
                return true;
            }
            current.pop();
        }
    }
    false
}
