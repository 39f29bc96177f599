//! Closed oriented 3-manifold triangulations as tetrahedron face-gluing tables.
//!
//! Face `i` of a tetrahedron is the face opposite vertex `i`. A gluing of face
//! `f` of tetrahedron `t` carries a permutation `perm` sending vertex `v` of `t`
//! to vertex `perm[v]` of the target; `perm[f]` is the target face.
//!
//! Edges of a tetrahedron are indexed in the order (01),(02),(03),(12),(13),(23).

mod census;
mod format;
mod homology;
mod moves;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use census::{bipyramid, census, census_names, connected_sum};
pub use format::{parse_triangulation, parse_triangulation_with, ParseOptions, TRI_FORMAT};
pub use homology::homology_h1;
pub use moves::PachnerMove;

pub type Perm = [u8; 4];

pub const IDENTITY: Perm = [0, 1, 2, 3];

/// Vertex pairs of the six edge slots.
pub const EDGE_VERTICES: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Edge slot feeding each 6j argument (a, b, e, c, d, f): the 6j slot vertex
/// pairs (01),(02),(12),(23),(13),(03) in edge-slot numbering.
pub const SIXJ_EDGE_SLOTS: [usize; 6] = [0, 1, 3, 5, 4, 2];

pub fn edge_index(u: u8, v: u8) -> usize {
    let (u, v) = if u < v { (u, v) } else { (v, u) };
    EDGE_VERTICES.iter().position(|&e| e == (u, v)).expect("distinct vertices")
}

pub fn perm_inverse(p: &Perm) -> Perm {
    let mut q = [0u8; 4];
    for (i, &x) in p.iter().enumerate() {
        q[x as usize] = i as u8;
    }
    q
}

pub fn perm_compose(outer: &Perm, inner: &Perm) -> Perm {
    inner.map(|x| outer[x as usize])
}

pub fn perm_sign(p: &Perm) -> i8 {
    let mut s = 1;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

fn is_perm(p: &Perm) -> bool {
    let mut seen = [false; 4];
    p.iter().all(|&x| x < 4 && !std::mem::replace(&mut seen[x as usize], true))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gluing {
    pub tet: usize,
    pub face: u8,
    pub perm: Perm,
}

/// A face-gluing table, structurally valid by construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triangulation {
    gluings: Vec<[Option<Gluing>; 4]>,
}

/// An equivalence class of edge slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeClass {
    /// (tetrahedron, edge slot) incidences.
    pub incidences: Vec<(usize, u8)>,
}

impl EdgeClass {
    pub fn degree(&self) -> usize {
        self.incidences.len()
    }
}

/// An equivalence class of vertex slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexClass {
    /// (tetrahedron, vertex) incidences.
    pub incidences: Vec<(usize, u8)>,
}

impl VertexClass {
    pub fn degree(&self) -> usize {
        self.incidences.len()
    }
}

/// A face of the closed triangulation with the edge classes on its sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceClass {
    pub tet: usize,
    pub face: u8,
    pub edges: [usize; 3],
}

/// Orbit decomposition of vertex, edge and face slots.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub vertices: Vec<VertexClass>,
    pub edges: Vec<EdgeClass>,
    pub faces: Vec<FaceClass>,
    /// Edge class of each edge slot.
    pub tet_edges: Vec<[usize; 6]>,
    /// +1 when the slot's low→high direction agrees with its class direction.
    pub tet_edge_signs: Vec<[i8; 6]>,
    pub tet_vertices: Vec<[usize; 4]>,
    pub tet_faces: Vec<[usize; 4]>,
}

impl Skeleton {
    /// V − E + F − T.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
            - self.tet_edges.len() as i64
    }
}

impl Triangulation {
    /// Builds and fully validates a closed oriented triangulation.
    pub fn new(gluings: Vec<[Option<Gluing>; 4]>) -> Result<Triangulation> {
        let t = Triangulation::with_boundary(gluings)?;
        t.validate()?;
        Ok(t)
    }

    /// Builds a triangulation checking only the gluing structure, allowing
    /// unglued faces.
    pub fn with_boundary(gluings: Vec<[Option<Gluing>; 4]>) -> Result<Triangulation> {
        let t = Triangulation { gluings };
        t.check_structure()?;
        Ok(t)
    }

    pub fn tet_count(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluings(&self) -> &[[Option<Gluing>; 4]] {
        &self.gluings
    }

    pub fn gluing(&self, tet: usize, face: u8) -> Option<Gluing> {
        self.gluings[tet][face as usize]
    }

    /// Target of a face in a closed triangulation.
    pub(crate) fn glued(&self, tet: usize, face: u8) -> Gluing {
        self.gluings[tet][face as usize].expect("closed triangulation")
    }

    pub fn is_closed(&self) -> bool {
        self.gluings.iter().all(|g| g.iter().all(Option::is_some))
    }

    fn check_structure(&self) -> Result<()> {
        let n = self.tet_count();
        if n == 0 {
            return Err(Error::InvalidTriangulation("no tetrahedra".into()));
        }
        for (t, row) in self.gluings.iter().enumerate() {
            for (f, g) in row.iter().enumerate() {
                let Some(g) = g else { continue };
                let at = format!("tetrahedron {t} face {f}");
                if g.tet >= n {
                    return Err(Error::InvalidTriangulation(format!(
                        "{at}: target tetrahedron {} does not exist ({n} tetrahedra)",
                        g.tet
                    )));
                }
                if g.face > 3 {
                    return Err(Error::InvalidTriangulation(format!(
                        "{at}: target face {} out of range",
                        g.face
                    )));
                }
                if !is_perm(&g.perm) {
                    return Err(Error::InvalidTriangulation(format!(
                        "{at}: {:?} is not a permutation of 0..3",
                        g.perm
                    )));
                }
                if g.perm[f] != g.face {
                    return Err(Error::InvalidTriangulation(format!(
                        "{at}: permutation sends vertex {f} to {}, expected target face {}",
                        g.perm[f], g.face
                    )));
                }
                if g.tet == t && g.face as usize == f {
                    return Err(Error::InvalidTriangulation(format!(
                        "{at}: face glued to itself"
                    )));
                }
                let back = self.gluings[g.tet][g.face as usize];
                let expect = Gluing { tet: t, face: f as u8, perm: perm_inverse(&g.perm) };
                if back != Some(expect) {
                    return Err(Error::InvalidTriangulation(format!(
                        "{at}: gluing is not involutive (tetrahedron {} face {} does not glue back by the inverse permutation)",
                        g.tet, g.face
                    )));
                }
            }
        }
        Ok(())
    }

    /// Full closed-manifold validation: closed, orientable, valid edges,
    /// sphere vertex links and vanishing Euler characteristic.
    pub fn validate(&self) -> Result<()> {
        self.check_structure()?;
        for (t, row) in self.gluings.iter().enumerate() {
            if let Some(f) = row.iter().position(Option::is_none) {
                return Err(Error::InvalidTriangulation(format!(
                    "tetrahedron {t} face {f} is unglued in a closed triangulation"
                )));
            }
        }
        if self.orientation().is_none() {
            return Err(Error::InvalidTriangulation("triangulation is not orientable".into()));
        }
        let sk = self.skeleton()?;
        for (i, v) in sk.vertices.iter().enumerate() {
            let chi = vertex_link_euler(&sk, i, v);
            if chi != 2 {
                let (t, w) = v.incidences[0];
                return Err(Error::InvalidTriangulation(format!(
                    "link of the vertex at tetrahedron {t} vertex {w} has Euler characteristic {chi}, not a sphere"
                )));
            }
        }
        let chi = sk.euler_characteristic();
        if chi != 0 {
            return Err(Error::InvalidTriangulation(format!(
                "Euler characteristic {chi} != 0"
            )));
        }
        Ok(())
    }

    /// Tetrahedron signs s_t with s_t · s_t' · sgn(perm) = −1 across every
    /// gluing, normalized so tetrahedron 0 is positive.
    pub fn orientation(&self) -> Option<Vec<i8>> {
        let n = self.tet_count();
        let mut sign = vec![0i8; n];
        for start in 0..n {
            if sign[start] != 0 {
                continue;
            }
            sign[start] = 1;
            let mut queue = VecDeque::from([start]);
            while let Some(t) = queue.pop_front() {
                for g in self.gluings[t].iter().flatten() {
                    let want = -sign[t] * perm_sign(&g.perm);
                    match sign[g.tet] {
                        0 => {
                            sign[g.tet] = want;
                            queue.push_back(g.tet);
                        }
                        s if s != want => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(sign)
    }

    /// Relabels tetrahedron t's vertices by `relabel[t]` (old vertex v becomes
    /// new vertex relabel[t][v]).
    pub fn relabeled(&self, relabel: &[Perm]) -> Triangulation {
        let mut out = vec![[None; 4]; self.tet_count()];
        for (t, row) in self.gluings.iter().enumerate() {
            for (f, g) in row.iter().enumerate() {
                let Some(g) = g else { continue };
                let nf = relabel[t][f];
                let perm = perm_compose(
                    &relabel[g.tet],
                    &perm_compose(&g.perm, &perm_inverse(&relabel[t])),
                );
                out[t][nf as usize] =
                    Some(Gluing { tet: g.tet, face: relabel[g.tet][g.face as usize], perm });
            }
        }
        Triangulation { gluings: out }
    }

    /// Relabels negatively oriented tetrahedra so every gluing permutation is odd.
    pub fn oriented(&self) -> Result<Triangulation> {
        let sign = self
            .orientation()
            .ok_or_else(|| Error::InvalidTriangulation("triangulation is not orientable".into()))?;
        let relabel: Vec<Perm> =
            sign.iter().map(|&s| if s > 0 { IDENTITY } else { [0, 1, 3, 2] }).collect();
        Ok(self.relabeled(&relabel))
    }

    /// The same table with every tetrahedron's vertices 2 and 3 swapped, which
    /// presents the orientation-reversed manifold.
    pub fn reversed(&self) -> Triangulation {
        self.relabeled(&vec![[0, 1, 3, 2]; self.tet_count()])
    }

    /// Vertex, edge and face classes. Fails only when an edge is identified
    /// with itself in reverse.
    pub fn skeleton(&self) -> Result<Skeleton> {
        let n = self.tet_count();
        const UNSET: usize = usize::MAX;

        let mut tet_vertices = vec![[UNSET; 4]; n];
        let mut vertices = Vec::new();
        for t0 in 0..n {
            for v0 in 0..4u8 {
                if tet_vertices[t0][v0 as usize] != UNSET {
                    continue;
                }
                let id = vertices.len();
                let mut inc = Vec::new();
                tet_vertices[t0][v0 as usize] = id;
                let mut queue = VecDeque::from([(t0, v0)]);
                while let Some((t, v)) = queue.pop_front() {
                    inc.push((t, v));
                    for f in (0..4u8).filter(|&f| f != v) {
                        if let Some(g) = self.gluings[t][f as usize] {
                            let w = g.perm[v as usize];
                            if tet_vertices[g.tet][w as usize] == UNSET {
                                tet_vertices[g.tet][w as usize] = id;
                                queue.push_back((g.tet, w));
                            }
                        }
                    }
                }
                vertices.push(VertexClass { incidences: inc });
            }
        }

        let mut tet_edges = vec![[UNSET; 6]; n];
        let mut tet_edge_signs = vec![[0i8; 6]; n];
        let mut edges = Vec::new();
        for t0 in 0..n {
            for e0 in 0..6 {
                if tet_edges[t0][e0] != UNSET {
                    continue;
                }
                let id = edges.len();
                let mut inc = Vec::new();
                tet_edges[t0][e0] = id;
                tet_edge_signs[t0][e0] = 1;
                let mut queue = VecDeque::from([(t0, e0)]);
                while let Some((t, e)) = queue.pop_front() {
                    inc.push((t, e as u8));
                    let (u, v) = EDGE_VERTICES[e];
                    for f in (0..4u8).filter(|&f| f != u && f != v) {
                        let Some(g) = self.gluings[t][f as usize] else { continue };
                        let (pu, pv) = (g.perm[u as usize], g.perm[v as usize]);
                        let e2 = edge_index(pu, pv);
                        let s = tet_edge_signs[t][e] * if pu < pv { 1 } else { -1 };
                        if tet_edges[g.tet][e2] == UNSET {
                            tet_edges[g.tet][e2] = id;
                            tet_edge_signs[g.tet][e2] = s;
                            queue.push_back((g.tet, e2));
                        } else if tet_edge_signs[g.tet][e2] != s {
                            return Err(Error::InvalidTriangulation(format!(
                                "edge at tetrahedron {t0} slot {e0} is identified with itself in reverse"
                            )));
                        }
                    }
                }
                edges.push(EdgeClass { incidences: inc });
            }
        }

        let mut tet_faces = vec![[UNSET; 4]; n];
        let mut faces = Vec::new();
        for t in 0..n {
            for f in 0..4u8 {
                if tet_faces[t][f as usize] != UNSET {
                    continue;
                }
                let id = faces.len();
                tet_faces[t][f as usize] = id;
                if let Some(g) = self.gluings[t][f as usize] {
                    tet_faces[g.tet][g.face as usize] = id;
                }
                let vs: Vec<u8> = (0..4u8).filter(|&v| v != f).collect();
                let edges_of = [
                    tet_edges[t][edge_index(vs[0], vs[1])],
                    tet_edges[t][edge_index(vs[0], vs[2])],
                    tet_edges[t][edge_index(vs[1], vs[2])],
                ];
                faces.push(FaceClass { tet: t, face: f, edges: edges_of });
            }
        }

        Ok(Skeleton { vertices, edges, faces, tet_edges, tet_edge_signs, tet_vertices, tet_faces })
    }
}

/// χ of the link of vertex class `id`: link vertices are edge ends at the
/// vertex, link edges are face corners, link triangles are tetrahedron corners.
fn vertex_link_euler(sk: &Skeleton, id: usize, v: &VertexClass) -> i64 {
    let mut ends = 0i64;
    for e in &sk.edges {
        let (t, slot) = e.incidences[0];
        let (a, b) = EDGE_VERTICES[slot as usize];
        ends += (sk.tet_vertices[t][a as usize] == id) as i64;
        ends += (sk.tet_vertices[t][b as usize] == id) as i64;
    }
    let corners = v.degree() as i64;
    ends - 3 * corners / 2 + corners
}
