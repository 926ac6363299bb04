//! Local systems as matrix-valued Čech 1-cocycles on a nerve, their gauge
//! action, the edge-path group of the nerve and the monodromy functor.
//!
//! Loop products are taken left to right in path order, so that
//! `monodromy ∘ rep_to_cocycle` is the identity on generators.

use std::collections::{BTreeMap, VecDeque};

use crate::betti::{FpGroup, Letter, Representation, Word};
use crate::cech::{CoverNerve, IntegralCohomology};
use crate::error::{Error, Result};
use crate::numkit::{smith_normal_form, Field, IntMatrix, Matrix};

/// Transition matrices `g_ij` on the edges of a nerve; `g_ji = g_ij⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct GCocycle<T> {
    rank: usize,
    /// Both orientations of every edge.
    transitions: BTreeMap<(usize, usize), Matrix<T>>,
}

impl<T: Field> GCocycle<T> {
    /// Takes `g_ij` for `i < j` (keys with `i > j` are inverted first).
    pub fn new(rank: usize, given: BTreeMap<(usize, usize), Matrix<T>>) -> Result<Self> {
        let mut transitions = BTreeMap::new();
        for ((i, j), m) in given {
            if !m.is_square() || m.rows() != rank {
                return Err(Error::DimensionMismatch(format!("transition ({i},{j}) is not {rank}×{rank}")));
            }
            if i == j {
                return Err(Error::InvalidNerve(format!("loop edge ({i},{i})")));
            }
            let inv = m.inverse()?;
            transitions.insert((j, i), inv);
            transitions.insert((i, j), m);
        }
        Ok(Self { rank, transitions })
    }

    pub fn identity(nerve: &CoverNerve, rank: usize) -> Self {
        let mut transitions = BTreeMap::new();
        for e in nerve.simplices(1) {
            transitions.insert((e[0], e[1]), Matrix::identity(rank));
            transitions.insert((e[1], e[0]), Matrix::identity(rank));
        }
        Self { rank, transitions }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `g_ij` for an ordered edge.
    pub fn transition(&self, i: usize, j: usize) -> Option<&Matrix<T>> {
        self.transitions.get(&(i, j))
    }

    /// Transitions on sorted edges `i < j`.
    pub fn sorted_transitions(&self) -> impl Iterator<Item = ((usize, usize), &Matrix<T>)> {
        self.transitions.iter().filter(|((i, j), _)| i < j).map(|(&k, m)| (k, m))
    }

    /// Ordered product `g_{v₀v₁} g_{v₁v₂} ⋯` along a vertex path.
    pub fn path_product(&self, path: &[usize]) -> Result<Matrix<T>> {
        let mut acc = Matrix::identity(self.rank);
        for w in path.windows(2) {
            let g = self.transition(w[0], w[1]).ok_or(Error::MissingEdge(w[0], w[1]))?;
            acc = &acc * g;
        }
        Ok(acc)
    }

    fn first_failure(&self, nerve: &CoverNerve, tol: f64) -> Result<Option<Vec<usize>>> {
        for e in nerve.simplices(1) {
            if self.transition(e[0], e[1]).is_none() {
                return Err(Error::MissingEdge(e[0], e[1]));
            }
        }
        for t in nerve.simplices(2) {
            if !self.path_product(&[t[0], t[1], t[2], t[0]])?.is_identity(tol) {
                return Ok(Some(t.clone()));
            }
        }
        Ok(None)
    }
}

/// `g_ij · g_jk · g_ki = I` on every 2-simplex of the nerve.
pub fn validate_cocycle<T: Field>(nerve: &CoverNerve, c: &GCocycle<T>, tol: f64) -> Result<bool> {
    Ok(c.first_failure(nerve, tol)?.is_none())
}

/// A 0-cochain of invertible matrices `g_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeCochain<T> {
    values: Vec<Matrix<T>>,
    inverses: Vec<Matrix<T>>,
}

impl<T: Field> GaugeCochain<T> {
    pub fn new(values: Vec<Matrix<T>>) -> Result<Self> {
        let inverses = values.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
        Ok(Self { values, inverses })
    }

    pub fn values(&self) -> &[Matrix<T>] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Matrix<T> {
        &self.values[i]
    }

    /// Pointwise product `(g·h)_i = g_i h_i`.
    pub fn compose(&self, other: &Self) -> Self {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        let inverses = self.inverses.iter().zip(&other.inverses).map(|(a, b)| b * a).collect();
        Self { values, inverses }
    }
}

/// `h_ij ↦ g_i · h_ij · g_j⁻¹`.
pub fn gauge_act<T: Field>(g: &GaugeCochain<T>, c: &GCocycle<T>) -> Result<GCocycle<T>> {
    let mut transitions = BTreeMap::new();
    for (&(i, j), h) in &c.transitions {
        let (gi, gj_inv) = match (g.values.get(i), g.inverses.get(j)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::DimensionMismatch(format!("gauge has no value at vertex {}", i.max(j)))),
        };
        if gi.rows() != c.rank {
            return Err(Error::DimensionMismatch("gauge rank differs from cocycle rank".into()));
        }
        transitions.insert((i, j), &(gi * h) * gj_inv);
    }
    Ok(GCocycle { rank: c.rank, transitions })
}

/// Edge-path presentation of `π₁(nerve, basepoint)` from a BFS spanning tree.
#[derive(Debug, Clone, PartialEq)]
pub struct Pi1Presentation {
    basepoint: usize,
    parent: Vec<Option<usize>>,
    tree_edges: Vec<(usize, usize)>,
    /// Non-tree edges `(a, b)` with `a < b`, one per generator.
    generators: Vec<(usize, usize)>,
    group: FpGroup,
}

impl Pi1Presentation {
    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.tree_edges
    }

    pub fn generator_edges(&self) -> &[(usize, usize)] {
        &self.generators
    }

    pub fn group(&self) -> &FpGroup {
        &self.group
    }

    /// Tree path from the basepoint to `v`.
    pub fn tree_path(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Closed vertex path at the basepoint representing a generator.
    pub fn generator_loop(&self, g: usize) -> Vec<usize> {
        let (a, b) = self.generators[g];
        let mut path = self.tree_path(a);
        let mut back = self.tree_path(b);
        back.reverse();
        path.extend(back);
        path
    }

    /// The letter (or nothing, for tree edges) of a traversed edge.
    pub fn edge_letter(&self, from: usize, to: usize) -> Option<Letter> {
        let key = (from.min(to), from.max(to));
        let g = self.generators.iter().position(|&e| e == key)?;
        Some(if from < to { Letter::gen(g) } else { Letter::inv(g) })
    }

    /// Word of a vertex path: the sequence of generator edges it crosses.
    pub fn path_word(&self, path: &[usize]) -> Word {
        path.windows(2).filter_map(|w| self.edge_letter(w[0], w[1])).collect()
    }

    /// Free rank and torsion factors of the abelianization.
    pub fn abelianization(&self) -> (usize, Vec<i64>) {
        let n = self.group.generators();
        let rows: Vec<Vec<i64>> = self.group.relators().iter().map(|r| r.exponent_sums(n)).collect();
        let mut m = IntMatrix::zeros(rows.len(), n);
        for (i, r) in rows.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        let snf = smith_normal_form(&m);
        let torsion = snf.diagonal.iter().copied().filter(|&d| d > 1).collect();
        (n - snf.rank(), torsion)
    }
}

pub fn pi1_presentation(nerve: &CoverNerve, basepoint: usize) -> Result<Pi1Presentation> {
    let n = nerve.vertex_count();
    if basepoint >= n {
        return Err(Error::InvalidNerve(format!("basepoint {basepoint} is not a vertex")));
    }
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut tree_edges = Vec::new();
    seen[basepoint] = true;
    let mut queue = VecDeque::from([basepoint]);
    while let Some(v) = queue.pop_front() {
        for w in nerve.neighbours(v) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(v);
                tree_edges.push((v.min(w), v.max(w)));
                queue.push_back(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Disconnected);
    }
    tree_edges.sort_unstable();
    let generators: Vec<(usize, usize)> = nerve
        .simplices(1)
        .iter()
        .map(|e| (e[0], e[1]))
        .filter(|e| tree_edges.binary_search(e).is_err())
        .collect();
    let mut p = Pi1Presentation {
        basepoint,
        parent,
        tree_edges,
        generators,
        group: FpGroup::new(0, vec![])?,
    };
    let relators = nerve
        .simplices(2)
        .iter()
        .map(|t| p.path_word(&[t[0], t[1], t[2], t[0]]).free_reduce())
        .collect();
    p.group = FpGroup::new(p.generators.len(), relators)?;
    Ok(p)
}

/// Loop products of a cocycle around the generator loops.
pub fn monodromy<T: Field>(c: &GCocycle<T>, nerve: &CoverNerve, p: &Pi1Presentation, tol: f64) -> Result<Representation<T>> {
    if let Some(t) = c.first_failure(nerve, tol)? {
        return Err(Error::InvalidCocycle(t));
    }
    let images = (0..p.generators.len())
        .map(|g| c.path_product(&p.generator_loop(g)))
        .collect::<Result<Vec<_>>>()?;
    Representation::new(p.group.clone(), images)
}

/// Tree edges ↦ identity, generator edges ↦ the representation's images.
pub fn rep_to_cocycle<T: Field>(rep: &Representation<T>, nerve: &CoverNerve, p: &Pi1Presentation) -> Result<GCocycle<T>> {
    if rep.group() != p.group() {
        return Err(Error::PresentationMismatch(format!(
            "representation has {} generators and {} relators, presentation has {} and {}",
            rep.group().generators(),
            rep.group().relators().len(),
            p.group().generators(),
            p.group().relators().len()
        )));
    }
    let mut given = BTreeMap::new();
    for e in nerve.simplices(1) {
        let key = (e[0], e[1]);
        let m = match p.generators.iter().position(|&g| g == key) {
            Some(g) => rep.images()[g].clone(),
            None => Matrix::identity(rep.rank()),
        };
        given.insert(key, m);
    }
    GCocycle::new(rep.rank(), given)
}

/// Integer pairing `⟨z_r, γ_e⟩` of the free `H¹(ℤ)` basis with the generator loops.
pub fn cohomology_pairing(nerve: &CoverNerve, p: &Pi1Presentation) -> Result<IntMatrix> {
    let basis = IntegralCohomology::new(nerve, 1).free_generators();
    let mut q = IntMatrix::zeros(basis.len(), p.generators.len());
    for g in 0..p.generators.len() {
        let path = p.generator_loop(g);
        for (r, z) in basis.iter().enumerate() {
            let mut total = 0;
            for w in path.windows(2) {
                let idx = nerve.index_of(&[w[0].min(w[1]), w[0].max(w[1])]).ok_or(Error::MissingEdge(w[0], w[1]))?;
                total += if w[0] < w[1] { z[idx] } else { -z[idx] };
            }
            q.set(r, g, total);
        }
    }
    Ok(q)
}

/// Words `w_s` in the generators with `⟨z_r, w_s⟩ = δ_rs`: a homology basis
/// dual to the free `H¹(ℤ)` basis.
pub fn homology_basis_words(nerve: &CoverNerve, p: &Pi1Presentation) -> Result<Vec<Word>> {
    let q = cohomology_pairing(nerve, p)?;
    let k = q.rows();
    let snf = smith_normal_form(&q);
    if snf.rank() != k || snf.diagonal.iter().take(k).any(|&d| d != 1) {
        return Err(Error::RankMismatch { integral: k, complex: snf.rank() });
    }
    // Q x = e_s  ⇔  D (R⁻¹x) = L e_s, and D = [I | 0]
    let words = (0..k)
        .map(|s| {
            let le = snf.left.column(s);
            let mut y = vec![0i64; q.cols()];
            y[..k].copy_from_slice(&le);
            let x = snf.right.apply(&y);
            x.iter()
                .enumerate()
                .flat_map(|(g, &e)| {
                    let l = if e >= 0 { Letter::gen(g) } else { Letter::inv(g) };
                    std::iter::repeat_n(l, e.unsigned_abs() as usize)
                })
                .collect()
        })
        .collect();
    Ok(words)
}

/// Representation of the nerve's `π₁` factoring through `H₁`:
/// `γ_e ↦ ∏_r M_r^{⟨z_r, γ_e⟩}`. The `M_r` must commute.
pub fn abelian_representation<T: Field>(nerve: &CoverNerve, p: &Pi1Presentation, on_basis: &[Matrix<T>]) -> Result<Representation<T>> {
    let q = cohomology_pairing(nerve, p)?;
    if on_basis.len() != q.rows() {
        return Err(Error::DimensionMismatch(format!("{} basis images for H¹ of rank {}", on_basis.len(), q.rows())));
    }
    let rank = on_basis.first().map_or(1, Matrix::rows);
    let images = (0..q.cols())
        .map(|g| {
            on_basis
                .iter()
                .enumerate()
                .try_fold(Matrix::identity(rank), |acc, (r, m)| Ok(&acc * &m.pow(q.get(r, g))?))
        })
        .collect::<Result<Vec<_>>>()?;
    Representation::new(p.group.clone(), images)
}
