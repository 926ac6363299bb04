//! Small standard triangulations used as covers and as lattice surfaces.

use std::collections::{BTreeMap, VecDeque};

/// A 2-dimensional simplicial complex given by its triangles (listed with an
/// orientation) plus any extra maximal edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    pub vertices: usize,
    pub triangles: Vec<[usize; 3]>,
    /// Maximal 1-simplices not contained in a triangle.
    pub extra_edges: Vec<[usize; 2]>,
}

impl Triangulation {
    pub fn new(vertices: usize, triangles: Vec<[usize; 3]>) -> Self {
        Self { vertices, triangles, extra_edges: Vec::new() }
    }

    pub fn maximal_simplices(&self) -> Vec<Vec<usize>> {
        self.triangles
            .iter()
            .map(|t| t.to_vec())
            .chain(self.extra_edges.iter().map(|e| e.to_vec()))
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        let mut edges = std::collections::BTreeSet::new();
        for t in &self.triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                edges.insert((a.min(b), a.max(b)));
            }
        }
        for e in &self.extra_edges {
            edges.insert((e[0].min(e[1]), e[0].max(e[1])));
        }
        self.vertices as i64 - edges.len() as i64 + self.triangles.len() as i64
    }
}

/// Reorients triangles so that every interior edge is traversed once in each
/// direction. Returns `None` if no consistent orientation exists.
pub fn orient_consistently(triangles: &[[usize; 3]]) -> Option<Vec<[usize; 3]>> {
    let mut by_edge: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, t) in triangles.iter().enumerate() {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            by_edge.entry((a.min(b), a.max(b))).or_default().push(i);
        }
    }
    let directed = |t: &[usize; 3], a: usize, b: usize| {
        [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])].contains(&(a, b))
    };
    let mut out: Vec<Option<[usize; 3]>> = vec![None; triangles.len()];
    for start in 0..triangles.len() {
        if out[start].is_some() {
            continue;
        }
        out[start] = Some(triangles[start]);
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let t = out[i].expect("visited");
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                for &j in &by_edge[&(a.min(b), a.max(b))] {
                    if j == i {
                        continue;
                    }
                    // neighbour must traverse the shared edge as b → a
                    let mut n = triangles[j];
                    if directed(&n, a, b) {
                        n.swap(1, 2);
                    }
                    match out[j] {
                        Some(existing) if existing != n && directed(&existing, a, b) => return None,
                        Some(_) => {}
                        None => {
                            out[j] = Some(n);
                            queue.push_back(j);
                        }
                    }
                }
            }
        }
    }
    Some(out.into_iter().map(|t| t.expect("all visited")).collect())
}

/// Möbius–Császár 7-vertex torus: triangles `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
pub fn torus() -> Triangulation {
    let mut tris = Vec::new();
    for i in 0..7 {
        tris.push([i, (i + 1) % 7, (i + 3) % 7]);
        tris.push([i, (i + 2) % 7, (i + 3) % 7]);
    }
    Triangulation::new(7, orient_consistently(&tris).expect("torus is orientable"))
}

/// Boundary of the tetrahedron (a 2-sphere).
pub fn sphere() -> Triangulation {
    let tris = vec![[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]];
    Triangulation::new(4, orient_consistently(&tris).expect("sphere is orientable"))
}

/// The 6-vertex real projective plane (half of the icosahedron). Non-orientable,
/// so the triangles keep their listed order.
pub fn projective_plane() -> Triangulation {
    let tris = [
        [1, 2, 4],
        [1, 2, 6],
        [1, 3, 5],
        [1, 3, 6],
        [1, 4, 5],
        [2, 3, 4],
        [2, 3, 5],
        [2, 5, 6],
        [3, 4, 6],
        [4, 5, 6],
    ];
    Triangulation::new(6, tris.iter().map(|t| [t[0] - 1, t[1] - 1, t[2] - 1]).collect())
}

/// Closed orientable surface of genus `g ≥ 1` as an iterated connected sum
/// of 7-vertex tori (`7 + 4(g−1)` vertices). `g = 0` gives the sphere.
pub fn surface_of_genus(g: u32) -> Triangulation {
    if g == 0 {
        return sphere();
    }
    let mut acc = torus();
    for _ in 1..g {
        acc = connected_sum(&acc, &torus());
    }
    acc
}

/// Removes the first triangle of each surface and glues along the boundary
/// with opposite orientations.
pub fn connected_sum(a: &Triangulation, b: &Triangulation) -> Triangulation {
    let [x, y, z] = a.triangles[0];
    let [bx, by, bz] = b.triangles[0];
    let mut relabel = vec![usize::MAX; b.vertices];
    relabel[bx] = x;
    relabel[by] = z;
    relabel[bz] = y;
    let mut next = a.vertices;
    for slot in relabel.iter_mut() {
        if *slot == usize::MAX {
            *slot = next;
            next += 1;
        }
    }
    let mut tris: Vec<[usize; 3]> = a.triangles[1..].to_vec();
    tris.extend(b.triangles[1..].iter().map(|t| [relabel[t[0]], relabel[t[1]], relabel[t[2]]]));
    Triangulation::new(next, tris)
}

/// Three vertices and three edges: a circle.
pub fn hollow_triangle() -> Triangulation {
    Triangulation { vertices: 3, triangles: vec![], extra_edges: vec![[0, 1], [1, 2], [0, 2]] }
}

/// A single 2-simplex: a disk.
pub fn filled_triangle() -> Triangulation {
    Triangulation::new(3, vec![[0, 1, 2]])
}
