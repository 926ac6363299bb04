use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::complexes::Triangulation;
use crate::error::{Error, Result};

/// Nerve of a finite cover `{U_i}`, `i ∈ 0..n`: the simplices are the index
/// sets with nonempty common intersection.
///
/// Whether the cover is good (all intersections contractible) cannot be
/// checked from the nerve; it is carried as a declared assumption.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverNerve {
    n: usize,
    maximal: Vec<Vec<usize>>,
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<BTreeMap<Vec<usize>, usize>>,
    declared_good_cover: bool,
}

impl CoverNerve {
    /// Closes `maximal` under taking faces. Every index in `0..n` is a vertex.
    pub fn from_maximal(n: usize, maximal: &[Vec<usize>]) -> Result<Self> {
        let mut by_dim: Vec<BTreeSet<Vec<usize>>> = vec![(0..n).map(|i| vec![i]).collect()];
        let mut kept_maximal = Vec::new();
        for s in maximal {
            let mut s = s.clone();
            s.sort_unstable();
            if s.is_empty() {
                return Err(Error::InvalidNerve("empty simplex".into()));
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidNerve(format!("repeated index in {s:?}")));
            }
            if let Some(&bad) = s.iter().find(|&&i| i >= n) {
                return Err(Error::InvalidNerve(format!("index {bad} out of range 0..{n}")));
            }
            kept_maximal.push(s.clone());
            let k = s.len();
            // all nonempty subsets
            for mask in 1u64..(1u64 << k) {
                let face: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| s[b]).collect();
                let d = face.len() - 1;
                if by_dim.len() <= d {
                    by_dim.resize(d + 1, BTreeSet::new());
                }
                by_dim[d].insert(face);
            }
        }
        let simplices: Vec<Vec<Vec<usize>>> = by_dim.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = simplices
            .iter()
            .map(|list| list.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        kept_maximal.sort();
        kept_maximal.dedup();
        Ok(Self { n, maximal: kept_maximal, simplices, index, declared_good_cover: true })
    }

    pub fn from_triangulation(t: &Triangulation) -> Self {
        Self::from_maximal(t.vertices, &t.maximal_simplices()).expect("triangulation indices are in range")
    }

    pub fn with_declared_good_cover(mut self, declared: bool) -> Self {
        self.declared_good_cover = declared;
        self
    }

    pub fn declared_good_cover(&self) -> bool {
        self.declared_good_cover
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn maximal_simplices(&self) -> &[Vec<usize>] {
        &self.maximal
    }

    /// Highest simplex dimension (0 for a discrete set of vertices).
    pub fn dimension(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn count(&self, p: usize) -> usize {
        self.simplices.get(p).map_or(0, Vec::len)
    }

    /// Sorted `p`-simplices, in lexicographic order.
    pub fn simplices(&self, p: usize) -> &[Vec<usize>] {
        self.simplices.get(p).map_or(&[], Vec::as_slice)
    }

    /// Index of a sorted simplex in [`CoverNerve::simplices`].
    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        self.index.get(simplex.len().checked_sub(1)?)?.get(simplex).copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.index_of(&[a.min(b), a.max(b)]).is_some()
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .simplices(1)
            .iter()
            .filter_map(|e| match e.as_slice() {
                [a, b] if *a == v => Some(*b),
                [a, b] if *b == v => Some(*a),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for w in self.neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Alternating count of simplices.
    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dimension()).map(|p| if p % 2 == 0 { 1 } else { -1 } * self.count(p) as i64).sum()
    }
}
