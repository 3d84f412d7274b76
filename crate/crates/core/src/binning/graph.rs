use crate::markov::{l1_slices, JointDistribution};

/// `l1` distance between the types of contigs `i < j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairDistance {
    pub distance: f64,
    pub i: usize,
    pub j: usize,
}

/// All `N(N-1)/2` pairwise `l1` distances, ascending; ties are ordered by
/// `(i, j)`.
pub fn pairwise_distances(types: &[JointDistribution]) -> Vec<PairDistance> {
    let n = types.len();
    let rows = crate::par::map_range(n, |i| {
        (i + 1..n)
            .map(|j| PairDistance { distance: l1_slices(types[i].probs(), types[j].probs()), i, j })
            .collect::<Vec<_>>()
    });
    let mut all: Vec<PairDistance> = rows.into_iter().flatten().collect();
    all.sort_by(|a, b| a.distance.total_cmp(&b.distance).then(a.i.cmp(&b.i)).then(a.j.cmp(&b.j)));
    all
}

/// A fixed-capacity set of vertex indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        Self { words: vec![0; n.div_ceil(64)] }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn insert(&mut self, v: usize) {
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        self.words[v / 64] &= !(1 << (v % 64));
    }

    pub fn contains(&self, v: usize) -> bool {
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersect_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn intersection_len(&self, other: &Self) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + t)
            })
        })
    }
}

/// Contigs joined when their types are within `epsilon` in `l1`.
/// Self-loops are not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonGraph {
    pub epsilon: f64,
    adjacency: Vec<VertexSet>,
}

impl EpsilonGraph {
    pub fn empty(n: usize, epsilon: f64) -> Self {
        Self { epsilon, adjacency: vec![VertexSet::empty(n); n] }
    }

    pub fn build(types: &[JointDistribution], epsilon: f64) -> Self {
        let n = types.len();
        let mut g = Self::empty(n, epsilon);
        for i in 0..n {
            for j in i + 1..n {
                if l1_slices(types[i].probs(), types[j].probs()) <= epsilon {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub(crate) fn add_edge(&mut self, i: usize, j: usize) {
        if i != j {
            self.adjacency[i].insert(j);
            self.adjacency[j].insert(i);
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(j)
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(a, &u)| vertices[a + 1..].iter().all(|&v| self.has_edge(u, v)))
    }
}
