//! Bundled closed triangulations and the connected-sum construction.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use super::{perm_compose, perm_inverse, Gluing, PachnerMove, Perm, Triangulation};
use crate::error::{Error, Result};

fn glue(tet: usize, face: u8, perm: Perm) -> Option<Gluing> {
    Some(Gluing { tet, face, perm })
}

/// A ring of `p` tetrahedra around the axis N–S (vertices 0 = N, 1 = S,
/// 2 = v_i, 3 = v_{i+1}); upper faces of tetrahedron i are glued to lower
/// faces of tetrahedron i+q. Yields L(p,q) for gcd(p,q) = 1 and S³ for q = 0.
pub fn bipyramid(p: usize, q: usize) -> Result<Triangulation> {
    if p < 2 || q >= p {
        return Err(Error::Domain(format!("bipyramid needs p >= 2 and 0 <= q < p, got ({p},{q})")));
    }
    let mut rows = vec![[None; 4]; p];
    for i in 0..p {
        let j = (i + p - 1) % p;
        rows[i][3] = glue(j, 2, [0, 1, 3, 2]);
        rows[j][2] = glue(i, 3, [0, 1, 3, 2]);
        let k = (i + q) % p;
        rows[i][1] = glue(k, 0, [1, 0, 2, 3]);
        rows[k][0] = glue(i, 1, [1, 0, 2, 3]);
    }
    Triangulation::new(rows)
}

fn two_tet_sphere() -> Triangulation {
    let rows = vec![
        [0, 1, 2, 3].map(|f| glue(1, f, [0, 1, 2, 3])),
        [0, 1, 2, 3].map(|f| glue(0, f, [0, 1, 2, 3])),
    ];
    Triangulation::new(rows).expect("double tetrahedron")
}

/// One-vertex, two-tetrahedron S²×S¹.
fn s2xs1() -> Triangulation {
    let rows = vec![
        [
            glue(0, 1, [1, 2, 3, 0]),
            glue(0, 0, [3, 0, 1, 2]),
            glue(1, 0, [3, 2, 0, 1]),
            glue(1, 1, [3, 2, 0, 1]),
        ],
        [
            glue(0, 2, [2, 3, 1, 0]),
            glue(0, 3, [2, 3, 1, 0]),
            glue(1, 3, [2, 0, 3, 1]),
            glue(1, 2, [1, 3, 0, 2]),
        ],
    ];
    Triangulation::new(rows).expect("S2xS1 table")
}

/// A tetrahedron with four distinct vertices, six distinct edges and no face
/// glued to itself, so its complement has a tetrahedral 2-sphere boundary.
fn embedded_tet(t: &Triangulation) -> Option<usize> {
    let sk = t.skeleton().ok()?;
    (0..t.tet_count()).find(|&i| {
        let mut vs = sk.tet_vertices[i].to_vec();
        vs.sort_unstable();
        vs.dedup();
        let mut es = sk.tet_edges[i].to_vec();
        es.sort_unstable();
        es.dedup();
        vs.len() == 4 && es.len() == 6 && (0..4).all(|f| t.glued(i, f).tet != i)
    })
}

/// Subdivides until an embedded tetrahedron exists; returns it oriented.
fn with_embedded_tet(t: &Triangulation) -> Result<(Triangulation, usize)> {
    let mut cur = t.clone();
    for _ in 0..4 {
        if let Some(i) = embedded_tet(&cur) {
            return Ok((cur.oriented()?, i));
        }
        let last = cur.tet_count() - 1;
        cur = cur.pachner_move(PachnerMove::OneFour { tet: last })?;
    }
    Err(Error::Domain("no embedded tetrahedron after subdivision".into()))
}

/// Removes an embedded tetrahedron from each side and glues the two boundary
/// spheres by an orientation-reversing map, then simplifies greedily.
pub fn connected_sum(a: &Triangulation, b: &Triangulation) -> Result<Triangulation> {
    a.validate()?;
    b.validate()?;
    let (a, ta) = with_embedded_tet(a)?;
    let (b, tb) = with_embedded_tet(b)?;
    let index = |side: usize, t: usize| -> usize {
        match side {
            0 => t - (t > ta) as usize,
            _ => a.tet_count() - 1 + t - (t > tb) as usize,
        }
    };
    let total = a.tet_count() + b.tet_count() - 2;
    let mut rows = vec![[None; 4]; total];
    for (side, tri, skip) in [(0, &a, ta), (1, &b, tb)] {
        for t in (0..tri.tet_count()).filter(|&t| t != skip) {
            for f in 0..4u8 {
                let g = tri.glued(t, f);
                if g.tet != skip {
                    rows[index(side, t)][f as usize] =
                        Some(Gluing { tet: index(side, g.tet), ..g });
                }
            }
        }
    }
    // vertex j of the removed a-tet meets vertex σ(j) of the removed b-tet
    let sigma: Perm = [1, 0, 2, 3];
    for i in 0..4u8 {
        let ga = a.glued(ta, i);
        let gb = b.glued(tb, sigma[i as usize]);
        let q = perm_compose(&gb.perm, &perm_compose(&sigma, &perm_inverse(&ga.perm)));
        let (na, nb) = (index(0, ga.tet), index(1, gb.tet));
        rows[na][ga.face as usize] = Some(Gluing { tet: nb, face: gb.face, perm: q });
        rows[nb][gb.face as usize] = Some(Gluing { tet: na, face: ga.face, perm: perm_inverse(&q) });
    }
    Ok(Triangulation::new(rows)?.simplify())
}

/// Names of the bundled triangulations, in a fixed order.
pub fn census_names() -> Vec<&'static str> {
    census().keys().copied().collect()
}

/// The bundled census: two S³ triangulations, L(p,1) for p = 2..5, S²×S¹ and
/// L(2,1)#L(2,1).
pub fn census() -> &'static BTreeMap<&'static str, Triangulation> {
    static CENSUS: OnceLock<BTreeMap<&'static str, Triangulation>> = OnceLock::new();
    CENSUS.get_or_init(|| {
        let mut m = BTreeMap::new();
        m.insert("S3_2tet", two_tet_sphere());
        m.insert("S3_3tet", bipyramid(3, 0).expect("S3 bipyramid"));
        for (name, p) in [("L2_1", 2), ("L3_1", 3), ("L4_1", 4), ("L5_1", 5)] {
            m.insert(name, bipyramid(p, 1).expect("lens bipyramid"));
        }
        m.insert("S2xS1", s2xs1());
        let rp3 = m["L2_1"].clone();
        m.insert("L2_1#L2_1", connected_sum(&rp3, &rp3).expect("RP3#RP3"));
        m
    })
}
