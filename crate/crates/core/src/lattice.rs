//! Discrete connections on triangulated surfaces: a transport matrix per
//! oriented edge, plaquette curvature, vertex gauge action and holonomy.
//!
//! `T(u→v)` maps the fibre at `u` to the fibre at `v`; path holonomy is the
//! left-to-right product of transports. The abelian bridge to forms is
//! `T = e^{−A}`.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::betti::{Representation, Word};
use crate::cech::{Cochain, CoverNerve, IntegralCohomology};
use crate::complexes::Triangulation;
use crate::error::{Error, Result};
use crate::localsys::{self, GCocycle, Pi1Presentation};
use crate::numkit::{Field, Matrix};

/// An oriented triangulated surface; each triangle's listing order gives
/// its orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangulatedSurface {
    vertices: usize,
    triangles: Vec<[usize; 3]>,
    /// Sorted edges `u < v`.
    edges: Vec<(usize, usize)>,
    has_boundary: bool,
    orientable: bool,
}

impl TriangulatedSurface {
    pub fn new(vertices: usize, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let mut directed: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for t in &triangles {
            if t.iter().any(|&v| v >= vertices) || t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(Error::InvalidSurface(format!("bad triangle {t:?}")));
            }
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                *directed.entry((a, b)).or_default() += 1;
            }
        }
        let edges: BTreeSet<(usize, usize)> = directed.keys().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        let mut has_boundary = false;
        let mut orientable = true;
        for &(a, b) in &edges {
            let fwd = directed.get(&(a, b)).copied().unwrap_or(0);
            let back = directed.get(&(b, a)).copied().unwrap_or(0);
            match (fwd, back) {
                (1, 1) => {}
                (1, 0) | (0, 1) => has_boundary = true,
                (2, 0) | (0, 2) => orientable = false,
                _ => return Err(Error::InvalidSurface(format!("edge ({a},{b}) lies on {} triangles", fwd + back))),
            }
        }
        Ok(Self { vertices, triangles, edges: edges.into_iter().collect(), has_boundary, orientable })
    }

    pub fn from_triangulation(t: &Triangulation) -> Result<Self> {
        Self::new(t.vertices, t.triangles.clone())
    }

    /// Checks `V − E + F = 2 − 2g` for a closed oriented surface.
    pub fn with_declared_genus(self, genus: u32) -> Result<Self> {
        match self.genus() {
            Some(g) if g == genus => Ok(self),
            Some(g) => Err(Error::InvalidSurface(format!("declared genus {genus}, Euler characteristic gives {g}"))),
            None => Err(Error::InvalidSurface("surface is not closed and oriented".into())),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&(a.min(b), a.max(b))).ok()
    }

    pub fn has_boundary(&self) -> bool {
        self.has_boundary
    }

    pub fn is_orientable(&self) -> bool {
        self.orientable
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    /// Genus of a closed oriented surface.
    pub fn genus(&self) -> Option<u32> {
        let chi = self.euler_characteristic();
        (!self.has_boundary && self.orientable && chi <= 2 && chi % 2 == 0).then(|| ((2 - chi) / 2) as u32)
    }

    pub fn nerve(&self) -> CoverNerve {
        let maximal: Vec<Vec<usize>> = self.triangles.iter().map(|t| t.to_vec()).collect();
        CoverNerve::from_maximal(self.vertices, &maximal).expect("validated triangles")
    }

    /// Triangle rotated to start at its smallest vertex (orientation kept).
    pub fn based_face(&self, f: usize) -> [usize; 3] {
        let t = self.triangles[f];
        let k = (0..3).min_by_key(|&i| t[i]).expect("three vertices");
        [t[k], t[(k + 1) % 3], t[(k + 2) % 3]]
    }
}

/// Complex-valued discrete forms: values on vertices, on sorted edges
/// `u → v` with `u < v` (odd under reversal), or on faces.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteForm<T> {
    degree: usize,
    values: Vec<T>,
}

impl<T: Field> DiscreteForm<T> {
    pub fn new(surface: &TriangulatedSurface, degree: usize, values: Vec<T>) -> Result<Self> {
        let expected = match degree {
            0 => surface.vertices,
            1 => surface.edges.len(),
            2 => surface.triangles.len(),
            d => return Err(Error::DegreeTooHigh(d)),
        };
        if values.len() != expected {
            return Err(Error::DimensionMismatch(format!("{degree}-form needs {expected} values, got {}", values.len())));
        }
        Ok(Self { degree, values })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Value of a 1-form on an oriented edge.
    pub fn on_edge(&self, surface: &TriangulatedSurface, u: usize, v: usize) -> Option<T> {
        let x = self.values.get(surface.edge_index(u, v)?)?.clone();
        Some(if u < v { x } else { -x })
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.values.iter().all(|x| x.is_zero_within(tol))
    }
}

/// Discrete exterior derivative: `(df)(u→v) = f(v) − f(u)`, and `dA` on a face
/// is the sum of `A` over its oriented boundary.
pub fn d<T: Field>(surface: &TriangulatedSurface, form: &DiscreteForm<T>) -> Result<DiscreteForm<T>> {
    let values = match form.degree {
        0 => surface.edges.iter().map(|&(u, v)| form.values[v].clone() - form.values[u].clone()).collect(),
        1 => surface
            .triangles
            .iter()
            .map(|t| {
                [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])]
                    .iter()
                    .fold(T::zero(), |acc, &(a, b)| acc + form.on_edge(surface, a, b).expect("face edges exist"))
            })
            .collect(),
        deg => return Err(Error::DegreeTooHigh(deg)),
    };
    Ok(DiscreteForm { degree: form.degree + 1, values })
}

/// Transport on oriented edges with `T(v→u) = T(u→v)⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeConnection<T> {
    rank: usize,
    transport: BTreeMap<(usize, usize), Matrix<T>>,
}

impl<T: Field> LatticeConnection<T> {
    /// Every surface edge needs a transport in at least one direction.
    pub fn new(surface: &TriangulatedSurface, rank: usize, given: BTreeMap<(usize, usize), Matrix<T>>) -> Result<Self> {
        let mut transport = BTreeMap::new();
        for ((u, v), m) in given {
            if surface.edge_index(u, v).is_none() {
                return Err(Error::UnknownEdge(u, v));
            }
            if !m.is_square() || m.rows() != rank {
                return Err(Error::DimensionMismatch(format!("transport {u}>{v} is not {rank}×{rank}")));
            }
            transport.insert((v, u), m.inverse()?);
            transport.insert((u, v), m);
        }
        if let Some(&(u, v)) = surface.edges.iter().find(|&&(u, v)| !transport.contains_key(&(u, v))) {
            return Err(Error::MissingEdge(u, v));
        }
        Ok(Self { rank, transport })
    }

    /// The trivial connection `D`.
    pub fn trivial(surface: &TriangulatedSurface, rank: usize) -> Self {
        let mut transport = BTreeMap::new();
        for &(u, v) in &surface.edges {
            transport.insert((u, v), Matrix::identity(rank));
            transport.insert((v, u), Matrix::identity(rank));
        }
        Self { rank, transport }
    }

    /// Rank-1 connection `T(e) = e^{−A(e)}` from a 1-form.
    pub fn from_log_form(surface: &TriangulatedSurface, a: &DiscreteForm<T>) -> Result<Self>
    where
        T: Exponential,
    {
        if a.degree != 1 {
            return Err(Error::DimensionMismatch("log-transport needs a 1-form".into()));
        }
        let given = surface.edges.iter().zip(&a.values).map(|(&e, x)| (e, Matrix::scalar((-x.clone()).exp()))).collect();
        Self::new(surface, 1, given)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn transport(&self, u: usize, v: usize) -> Option<&Matrix<T>> {
        self.transport.get(&(u, v))
    }

    /// Transports on sorted edges `u < v`.
    pub fn sorted_transports(&self) -> impl Iterator<Item = ((usize, usize), &Matrix<T>)> {
        self.transport.iter().filter(|((u, v), _)| u < v).map(|(&k, m)| (k, m))
    }

    /// Same transports as a Čech cocycle on the surface's nerve.
    pub fn as_cocycle(&self) -> GCocycle<T> {
        GCocycle::new(self.rank, self.sorted_transports().map(|(k, m)| (k, m.clone())).collect())
            .expect("transports are invertible")
    }
}

/// `exp` for scalar fields that have one.
pub trait Exponential: Field {
    fn exp(self) -> Self;
}

impl Exponential for crate::numkit::C64 {
    fn exp(self) -> Self {
        num_complex::Complex::exp(self)
    }
}

/// Boundary holonomy of every face, starting at the smallest vertex.
pub fn curvature<T: Field>(surface: &TriangulatedSurface, conn: &LatticeConnection<T>) -> Vec<Matrix<T>> {
    (0..surface.triangles.len())
        .into_par_iter()
        .map(|f| {
            let [a, b, c] = surface.based_face(f);
            holonomy_vertices(conn, &[a, b, c, a]).expect("face edges exist")
        })
        .collect()
}

/// First face whose curvature is not the identity.
pub fn first_non_flat_face<T: Field>(surface: &TriangulatedSurface, conn: &LatticeConnection<T>, tol: f64) -> Option<[usize; 3]> {
    curvature(surface, conn)
        .iter()
        .position(|f| !f.is_identity(tol))
        .map(|f| surface.based_face(f))
}

pub fn is_flat<T: Field>(surface: &TriangulatedSurface, conn: &LatticeConnection<T>, tol: f64) -> bool {
    first_non_flat_face(surface, conn, tol).is_none()
}

/// `T(u→v) ↦ g(u)⁻¹ · T(u→v) · g(v)`.
pub fn gauge_act<T: Field>(g: &[Matrix<T>], conn: &LatticeConnection<T>) -> Result<LatticeConnection<T>> {
    let inverses = g.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
    let mut transport = BTreeMap::new();
    for (&(u, v), m) in &conn.transport {
        let (gu_inv, gv) = match (inverses.get(u), g.get(v)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::DimensionMismatch(format!("gauge has no value at vertex {}", u.max(v)))),
        };
        if gv.rows() != conn.rank {
            return Err(Error::DimensionMismatch("gauge rank differs from connection rank".into()));
        }
        transport.insert((u, v), &(gu_inv * m) * gv);
    }
    Ok(LatticeConnection { rank: conn.rank, transport })
}

/// Ordered transport product along a list of oriented edges.
pub fn holonomy<T: Field>(conn: &LatticeConnection<T>, path: &[(usize, usize)]) -> Result<Matrix<T>> {
    let mut acc = Matrix::identity(conn.rank);
    for (i, &(u, v)) in path.iter().enumerate() {
        if i > 0 && path[i - 1].1 != u {
            return Err(Error::BrokenPath(i));
        }
        acc = &acc * conn.transport(u, v).ok_or(Error::UnknownEdge(u, v))?;
    }
    Ok(acc)
}

/// Holonomy along a vertex path.
pub fn holonomy_vertices<T: Field>(conn: &LatticeConnection<T>, path: &[usize]) -> Result<Matrix<T>> {
    let edges: Vec<(usize, usize)> = path.windows(2).map(|w| (w[0], w[1])).collect();
    holonomy(conn, &edges)
}

/// Monodromy of a flat connection together with the presentation it refers to.
#[derive(Debug, Clone)]
pub struct LatticeMonodromy<T> {
    pub presentation: Pi1Presentation,
    pub representation: Representation<T>,
}

pub fn monodromy_rep<T: Field>(surface: &TriangulatedSurface, conn: &LatticeConnection<T>, basepoint: usize, tol: f64) -> Result<LatticeMonodromy<T>> {
    if let Some(face) = first_non_flat_face(surface, conn, tol) {
        return Err(Error::NotFlat(face));
    }
    let nerve = surface.nerve();
    let presentation = localsys::pi1_presentation(&nerve, basepoint)?;
    let representation = localsys::monodromy(&conn.as_cocycle(), &nerve, &presentation, tol)?;
    Ok(LatticeMonodromy { presentation, representation })
}

/// Loops dual to the free `H¹(ℤ)` basis of the surface's nerve, as words in
/// the edge-path generators at the basepoint.
pub fn homology_loops(surface: &TriangulatedSurface, basepoint: usize) -> Result<(Pi1Presentation, Vec<Word>)> {
    let nerve = surface.nerve();
    let p = localsys::pi1_presentation(&nerve, basepoint)?;
    let words = localsys::homology_basis_words(&nerve, &p)?;
    Ok((p, words))
}

/// Rank-1 holonomies around the homology loops: a point of `(ℂ^×)^{2g}`.
pub fn abelian_moduli<T: Field>(surface: &TriangulatedSurface, conn: &LatticeConnection<T>, tol: f64) -> Result<Vec<T>> {
    if conn.rank != 1 {
        return Err(Error::RankNotOne(conn.rank));
    }
    let mono = monodromy_rep(surface, conn, 0, tol)?;
    let (_, words) = homology_loops(surface, 0)?;
    words
        .iter()
        .map(|w| Ok(mono.representation.evaluate_word(w)?.get(0, 0).clone()))
        .collect()
}

/// Flat connection `T(e) = ∏_r M_r^{z_r(e)}` over the free `H¹(ℤ)` basis
/// `z_r`; the `M_r` must commute. Its holonomy around the `s`-th homology
/// loop is `M_s`.
pub fn flat_connection_from_basis<T: Field>(surface: &TriangulatedSurface, images: &[Matrix<T>]) -> Result<LatticeConnection<T>> {
    let nerve = surface.nerve();
    let basis: Vec<Vec<i64>> = IntegralCohomology::new(&nerve, 1).free_generators();
    if basis.len() != images.len() {
        return Err(Error::DimensionMismatch(format!("{} images for H¹ of rank {}", images.len(), basis.len())));
    }
    let rank = images.first().map_or(1, Matrix::rows);
    let mut given = BTreeMap::new();
    for (idx, e) in nerve.simplices(1).iter().enumerate() {
        let m = basis
            .iter()
            .zip(images)
            .try_fold(Matrix::identity(rank), |acc, (z, m)| Ok::<_, Error>(&acc * &m.pow(z[idx])?))?;
        given.insert((e[0], e[1]), m);
    }
    LatticeConnection::new(surface, rank, given)
}

/// Rank-1 flat connection with prescribed homology-loop holonomies.
pub fn connection_with_holonomies<T: Field>(surface: &TriangulatedSurface, targets: &[T]) -> Result<LatticeConnection<T>> {
    let images: Vec<Matrix<T>> = targets.iter().map(|t| Matrix::scalar(t.clone())).collect();
    flat_connection_from_basis(surface, &images)
}

/// The integer 1-cochains used as the `H¹(ℤ)` basis by this module.
pub fn cohomology_basis(surface: &TriangulatedSurface) -> Vec<Cochain<i64>> {
    let nerve = surface.nerve();
    IntegralCohomology::new(&nerve, 1)
        .free_generators()
        .into_iter()
        .map(|v| Cochain::new(&nerve, 1, v).expect("sized by nerve"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes;
    use crate::numkit::{gi, gq, GaussianRational, C64};
    use num_traits::Zero;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Q = GaussianRational;

    fn torus() -> TriangulatedSurface {
        TriangulatedSurface::from_triangulation(&complexes::torus()).unwrap().with_declared_genus(1).unwrap()
    }

    fn triangle() -> TriangulatedSurface {
        TriangulatedSurface::new(3, vec![[0, 1, 2]]).unwrap()
    }

    fn m2(a: i64, b: i64, c: i64, d: i64) -> Matrix<Q> {
        Matrix::from_rows(vec![vec![gi(a, 0), gi(b, 0)], vec![gi(c, 0), gi(d, 0)]]).unwrap()
    }

    fn random_gl2(rng: &mut ChaCha8Rng) -> Matrix<Q> {
        loop {
            let m = m2(rng.gen_range(-3..=3), rng.gen_range(-3..=3), rng.gen_range(-3..=3), rng.gen_range(-3..=3));
            if !m.determinant().unwrap().is_zero() {
                return m;
            }
        }
    }

    fn random_flat(s: &TriangulatedSurface, rng: &mut ChaCha8Rng) -> LatticeConnection<Q> {
        let a = random_gl2(rng);
        let b = &(&a * &a) + &Matrix::identity(2);
        let b = if b.determinant().unwrap().is_zero() { a.clone() } else { b };
        let conn = flat_connection_from_basis(s, &[a, b]).unwrap();
        let g: Vec<Matrix<Q>> = (0..s.vertex_count()).map(|_| random_gl2(rng)).collect();
        gauge_act(&g, &conn).unwrap()
    }

    #[test]
    fn surface_validation() {
        let t = torus();
        assert_eq!(t.genus(), Some(1));
        assert!(!t.has_boundary());
        assert!(triangle().has_boundary());
        let rp2 = TriangulatedSurface::from_triangulation(&complexes::projective_plane()).unwrap();
        assert!(!rp2.is_orientable());
        assert!(rp2.genus().is_none());
        assert!(TriangulatedSurface::from_triangulation(&complexes::torus()).unwrap().with_declared_genus(2).is_err());
        let g2 = TriangulatedSurface::from_triangulation(&complexes::surface_of_genus(2)).unwrap();
        assert_eq!(g2.genus(), Some(2));
    }

    #[test]
    fn exterior_derivative_examples() {
        let s = triangle();
        let f = DiscreteForm::new(&s, 0, vec![gq(4, 1); 3]).unwrap();
        assert!(d(&s, &f).unwrap().is_zero_within(0.0));
        // edges in order 01, 02, 12
        let a = DiscreteForm::new(&s, 1, vec![gq(2, 1), gq(5, 1), gq(3, 1)]).unwrap();
        assert_eq!(d(&s, &a).unwrap().values(), &[gq(0, 1)]);
        let b = DiscreteForm::new(&s, 1, vec![gq(2, 1), gq(5, 1), gq(4, 1)]).unwrap();
        assert_eq!(d(&s, &b).unwrap().values(), &[gq(1, 1)]);
        let face = d(&s, &b).unwrap();
        assert_eq!(d(&s, &face), Err(Error::DegreeTooHigh(2)));
    }

    #[test]
    fn curvature_examples() {
        let s = triangle();
        assert!(curvature(&s, &LatticeConnection::<Q>::trivial(&s, 2)).iter().all(|f| f.is_identity(0.0)));
        // transports 2, 3, 1/5 around 0→1→2→0
        let given = [((0, 1), gq(2, 1)), ((1, 2), gq(3, 1)), ((2, 0), gq(1, 5))].into_iter().map(|(k, x)| (k, Matrix::scalar(x))).collect();
        let conn = LatticeConnection::new(&s, 1, given).unwrap();
        assert_eq!(curvature(&s, &conn), vec![Matrix::scalar(gq(6, 5))]);
        // path dependence: the two routes 0→2 differ by the curvature
        let direct = holonomy(&conn, &[(0, 2)]).unwrap();
        let around = holonomy(&conn, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(&around * &direct.inverse().unwrap(), Matrix::scalar(gq(6, 5)));
        assert!(matches!(monodromy_rep(&s, &conn, 0, 0.0), Err(Error::NotFlat([0, 1, 2]))));
    }

    #[test]
    fn exponential_of_closed_form_is_flat() {
        let s = torus();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f: Vec<C64> = (0..7).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let a = d(&s, &DiscreteForm::new(&s, 0, f).unwrap()).unwrap();
        assert!(d(&s, &a).unwrap().is_zero_within(1e-14));
        let conn = LatticeConnection::from_log_form(&s, &a).unwrap();
        assert!(is_flat(&s, &conn, 1e-12));
        // curvature of e^{−A} is e^{−dA} for a non-closed form
        let mut vals = a.values().to_vec();
        vals[0] += C64::new(0.3, 0.1);
        let b = DiscreteForm::new(&s, 1, vals).unwrap();
        let db = d(&s, &b).unwrap();
        let curv = curvature(&s, &LatticeConnection::from_log_form(&s, &b).unwrap());
        for (f, x) in curv.iter().zip(db.values()) {
            assert!((f.get(0, 0) - (-*x).exp()).norm() < 1e-12);
        }
    }

    #[test]
    fn gauge_examples() {
        let s = torus();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let conn = random_flat(&s, &mut rng);
        let id = vec![Matrix::<Q>::identity(2); 7];
        assert_eq!(gauge_act(&id, &conn).unwrap(), conn);
        let g: Vec<Matrix<Q>> = (0..7).map(|_| random_gl2(&mut rng)).collect();
        assert!(is_flat(&s, &gauge_act(&g, &conn).unwrap(), 0.0));
        // rank 1: transport times g(v)/g(u), curvature unchanged
        let tri = triangle();
        let given = [((0, 1), gq(2, 1)), ((1, 2), gq(3, 1)), ((0, 2), gq(7, 1))].into_iter().map(|(k, x)| (k, Matrix::scalar(x))).collect();
        let c1 = LatticeConnection::new(&tri, 1, given).unwrap();
        let g1 = vec![Matrix::scalar(gq(5, 1)), Matrix::scalar(gq(1, 2)), Matrix::scalar(gq(3, 1))];
        let out = gauge_act(&g1, &c1).unwrap();
        assert_eq!(out.transport(0, 1).unwrap(), &Matrix::scalar(gq(1, 5)));
        assert_eq!(curvature(&tri, &out), curvature(&tri, &c1));
    }

    #[test]
    fn torus_monodromy_examples() {
        let s = torus();
        let triv = monodromy_rep(&s, &LatticeConnection::<Q>::trivial(&s, 1), 0, 0.0).unwrap();
        assert!(triv.representation.images().iter().all(|m| m.is_identity(0.0)));
        let (alpha, beta) = (gq(3, 2), gi(0, 1));
        let conn = connection_with_holonomies(&s, &[alpha.clone(), beta.clone()]).unwrap();
        assert_eq!(abelian_moduli(&s, &conn, 0.0).unwrap(), vec![alpha.clone(), beta.clone()]);
        let mono = monodromy_rep(&s, &conn, 0, 0.0).unwrap();
        assert!(mono.representation.check_relations(0.0));
        let (_, words) = homology_loops(&s, 0).unwrap();
        assert_eq!(mono.representation.evaluate_word(&words[0]).unwrap(), Matrix::scalar(alpha));
        assert_eq!(abelian_moduli(&s, &LatticeConnection::<Q>::trivial(&s, 1), 0.0).unwrap(), vec![gq(1, 1); 2]);
        assert_eq!(abelian_moduli(&s, &LatticeConnection::<Q>::trivial(&s, 2), 0.0), Err(Error::RankNotOne(2)));
    }

    #[test]
    fn log_form_moduli() {
        // A with loop sums (p, q): A = p z₁ + q z₂ + df gives holonomies (e^{−p}, e^{−q})
        let s = torus();
        let basis = cohomology_basis(&s);
        let (p, q) = (C64::new(0.4, -0.2), C64::new(-1.1, 0.7));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f: Vec<C64> = (0..7).map(|_| C64::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
        let df = d(&s, &DiscreteForm::new(&s, 0, f).unwrap()).unwrap();
        let vals: Vec<C64> = (0..s.edges().len())
            .map(|e| p * basis[0].values()[e] as f64 + q * basis[1].values()[e] as f64 + df.values()[e])
            .collect();
        let conn = LatticeConnection::from_log_form(&s, &DiscreteForm::new(&s, 1, vals).unwrap()).unwrap();
        let pt = abelian_moduli(&s, &conn, 1e-12).unwrap();
        assert!((pt[0] - (-p).exp()).norm() < 1e-12);
        assert!((pt[1] - (-q).exp()).norm() < 1e-12);
    }

    #[test]
    fn gauge_conjugates_monodromy_at_basepoint() {
        let s = torus();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let conn = random_flat(&s, &mut rng);
        let g: Vec<Matrix<Q>> = (0..7).map(|_| random_gl2(&mut rng)).collect();
        let before = monodromy_rep(&s, &conn, 0, 0.0).unwrap().representation;
        let after = monodromy_rep(&s, &gauge_act(&g, &conn).unwrap(), 0, 0.0).unwrap().representation;
        assert_eq!(after, before.conjugate(&g[0].inverse().unwrap()).unwrap());
    }

    #[test]
    fn broken_paths_rejected() {
        let s = triangle();
        let conn = LatticeConnection::<Q>::trivial(&s, 1);
        assert!(holonomy(&conn, &[]).unwrap().is_identity(0.0));
        assert_eq!(holonomy(&conn, &[(0, 1), (2, 0)]), Err(Error::BrokenPath(1)));
    }

    #[test]
    fn genus_two_relator_holds() {
        let s = TriangulatedSurface::from_triangulation(&complexes::surface_of_genus(2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = random_gl2(&mut rng);
        let conn = flat_connection_from_basis(&s, &[a.clone(), a.pow(2).unwrap(), Matrix::identity(2), a.pow(-1).unwrap()]).unwrap();
        let g: Vec<Matrix<Q>> = (0..s.vertex_count()).map(|_| random_gl2(&mut rng)).collect();
        let mono = monodromy_rep(&s, &gauge_act(&g, &conn).unwrap(), 0, 0.0).unwrap();
        assert!(mono.representation.check_relations(0.0));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(16))]

            #[test]
            fn curvature_is_gauge_covariant(seed in any::<u64>()) {
                let s = torus();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                // generic, non-flat connection
                let given = s.edges().iter().map(|&e| (e, random_gl2(&mut rng))).collect();
                let conn = LatticeConnection::new(&s, 2, given).unwrap();
                let g: Vec<Matrix<Q>> = (0..7).map(|_| random_gl2(&mut rng)).collect();
                let before = curvature(&s, &conn);
                let after = curvature(&s, &gauge_act(&g, &conn).unwrap());
                for (f, (x, y)) in before.iter().zip(&after).enumerate() {
                    let base = s.based_face(f)[0];
                    prop_assert_eq!(y.clone(), &(&g[base].inverse().unwrap() * x) * &g[base]);
                }
            }

            #[test]
            fn d_squared_vanishes(f in prop::collection::vec(-20i64..20, 11)) {
                let s = TriangulatedSurface::from_triangulation(&complexes::surface_of_genus(2)).unwrap();
                let form = DiscreteForm::new(&s, 0, f.iter().map(|&x| gq(x, 3)).collect()).unwrap();
                prop_assert!(d(&s, &d(&s, &form).unwrap()).unwrap().is_zero_within(0.0));
            }

            #[test]
            fn flat_holonomy_is_homotopy_invariant(seed in any::<u64>()) {
                let s = torus();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let conn = random_flat(&s, &mut rng);
                let mut path = vec![0usize, 1, 3, 0];
                let expected = holonomy_vertices(&conn, &path).unwrap();
                for _ in 0..100 {
                    elementary_move(&s, &mut path, &mut rng);
                }
                prop_assert_eq!(holonomy_vertices(&conn, &path).unwrap(), expected);
            }
        }
    }

    /// Backtrack insertion/removal or sliding an edge across a face.
    pub(crate) fn elementary_move(s: &TriangulatedSurface, path: &mut Vec<usize>, rng: &mut ChaCha8Rng) {
        let nerve = s.nerve();
        let i = rng.gen_range(0..path.len().max(2) - 1);
        match rng.gen_range(0..4) {
            _ if path.len() == 1 => {
                let w = nerve.neighbours(path[0])[0];
                path.extend([w, path[0]]);
            }
            0 => {
                let nb = nerve.neighbours(path[i]);
                let w = nb[rng.gen_range(0..nb.len())];
                path.splice(i + 1..i + 1, [w, path[i]]);
            }
            1 if i + 2 < path.len() && path[i] == path[i + 2] => {
                path.drain(i + 1..i + 3);
            }
            2 => {
                let (u, v) = (path[i], path[i + 1]);
                let apex: Vec<usize> = nerve.neighbours(u).into_iter().filter(|&w| w != v && nerve.has_edge(w, v) && {
                    let mut t = [u, v, w];
                    t.sort_unstable();
                    nerve.index_of(&t).is_some()
                }).collect();
                path.insert(i + 1, apex[rng.gen_range(0..apex.len())]);
            }
            _ if i + 2 < path.len() && nerve.has_edge(path[i], path[i + 2]) && {
                let mut t = [path[i], path[i + 1], path[i + 2]];
                t.sort_unstable();
                t[0] != t[1] && t[1] != t[2] && nerve.index_of(&t).is_some()
            } => {
                path.remove(i + 1);
            }
            _ => {}
        }
    }
}
