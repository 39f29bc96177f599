//! Pachner moves via replacement of a labelled ball of tetrahedra.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::{Gluing, Perm, Triangulation, EDGE_VERTICES};
use crate::error::{Error, Result};

/// A Pachner move and its location. New tetrahedra are appended after the
/// untouched ones, so each move's inverse is found at the end of the table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PachnerMove {
    /// Replace the two tetrahedra sharing face `face` of `tet` by three.
    TwoThree { tet: usize, face: u8 },
    /// Replace the three tetrahedra around edge slot `edge` of `tet` by two.
    ThreeTwo { tet: usize, edge: u8 },
    /// Cone a tetrahedron from a new interior vertex.
    OneFour { tet: usize },
    /// Remove a degree-four vertex, given by one of its slots.
    FourOne { tet: usize, vertex: u8 },
}

impl PachnerMove {
    pub fn tet_delta(&self) -> i64 {
        match self {
            PachnerMove::TwoThree { .. } => 1,
            PachnerMove::ThreeTwo { .. } => -1,
            PachnerMove::OneFour { .. } => 3,
            PachnerMove::FourOne { .. } => -3,
        }
    }

    fn kind(&self) -> usize {
        match self {
            PachnerMove::TwoThree { .. } => 0,
            PachnerMove::ThreeTwo { .. } => 1,
            PachnerMove::OneFour { .. } => 2,
            PachnerMove::FourOne { .. } => 3,
        }
    }
}

type Labels = [u8; 4];

fn face_key(lab: &Labels, f: u8) -> [u8; 3] {
    let mut k = [0u8; 3];
    let mut i = 0;
    for v in 0..4u8 {
        if v != f {
            k[i] = lab[v as usize];
            i += 1;
        }
    }
    k.sort_unstable();
    k
}

fn position(lab: &Labels, x: u8) -> u8 {
    lab.iter().position(|&y| y == x).expect("label present") as u8
}

fn reject(msg: impl Into<String>) -> Error {
    Error::MoveRejected(msg.into())
}

impl Triangulation {
    pub fn pachner_move(&self, mv: PachnerMove) -> Result<Triangulation> {
        let n = self.tet_count();
        if !self.is_closed() {
            return Err(reject("moves need a closed triangulation"));
        }
        match mv {
            PachnerMove::TwoThree { tet, face } => {
                if tet >= n || face > 3 {
                    return Err(reject(format!("no face {face} on tetrahedron {tet}")));
                }
                let g = self.glued(tet, face);
                if g.tet == tet {
                    return Err(reject(format!(
                        "2-3 needs two distinct tetrahedra; face {face} of tetrahedron {tet} is glued to the same tetrahedron"
                    )));
                }
                // A,B,C = 0,1,2 on the shared face; D = 3 and E = 4 at the apexes
                let mut l1 = [0u8; 4];
                let mut next = 0;
                for v in 0..4u8 {
                    if v == face {
                        l1[v as usize] = 3;
                    } else {
                        l1[v as usize] = next;
                        next += 1;
                    }
                }
                let mut l2 = [4u8; 4];
                for v in (0..4u8).filter(|&v| v != face) {
                    l2[g.perm[v as usize] as usize] = l1[v as usize];
                }
                self.replace_ball(&[(tet, l1), (g.tet, l2)], &[[0, 1, 3, 4], [1, 2, 3, 4], [0, 2, 3, 4]])
            }
            PachnerMove::ThreeTwo { tet, edge } => {
                if tet >= n || edge > 5 {
                    return Err(reject(format!("no edge slot {edge} on tetrahedron {tet}")));
                }
                let (a, b) = EDGE_VERTICES[edge as usize];
                let others: Vec<u8> = (0..4u8).filter(|&v| v != a && v != b).collect();
                // D,E = 3,4 on the edge; A,B,C = 0,1,2 around it
                let mut l0 = [0u8; 4];
                l0[a as usize] = 3;
                l0[b as usize] = 4;
                l0[others[0] as usize] = 0;
                l0[others[1] as usize] = 1;
                let step = |t: usize, lab: &Labels, across: u8, fresh: u8| -> (usize, Labels) {
                    let f = position(lab, across);
                    let g = self.glued(t, f);
                    let mut l = [fresh; 4];
                    for v in (0..4u8).filter(|&v| v != f) {
                        l[g.perm[v as usize] as usize] = lab[v as usize];
                    }
                    (g.tet, l)
                };
                // cross face DEB (opposite A), then DEC (opposite B)
                let (t1, l1) = step(tet, &l0, 0, 2);
                let (t2, l2) = step(t1, &l1, 1, 0);
                if t1 == tet || t2 == tet || t1 == t2 {
                    return Err(reject(format!(
                        "3-2 needs three distinct tetrahedra around edge slot {edge} of tetrahedron {tet}"
                    )));
                }
                self.replace_ball(&[(tet, l0), (t1, l1), (t2, l2)], &[[0, 1, 2, 3], [0, 1, 2, 4]])
            }
            PachnerMove::OneFour { tet } => {
                if tet >= n {
                    return Err(reject(format!("no tetrahedron {tet}")));
                }
                self.replace_ball(
                    &[(tet, [0, 1, 2, 3])],
                    &[[0, 1, 2, 4], [0, 1, 3, 4], [0, 2, 3, 4], [1, 2, 3, 4]],
                )
            }
            PachnerMove::FourOne { tet, vertex } => {
                if tet >= n || vertex > 3 {
                    return Err(reject(format!("no vertex {vertex} on tetrahedron {tet}")));
                }
                // V = 4 is removed; A,B,C = 0,1,2 in tet; D = 3 opposite
                let mut l0 = [4u8; 4];
                let mut next = 0;
                for v in (0..4u8).filter(|&v| v != vertex) {
                    l0[v as usize] = next;
                    next += 1;
                }
                let mut ball = vec![(tet, l0)];
                for f in (0..4u8).filter(|&f| f != vertex) {
                    let g = self.glued(tet, f);
                    let mut l = [3u8; 4];
                    for v in (0..4u8).filter(|&v| v != f) {
                        l[g.perm[v as usize] as usize] = l0[v as usize];
                    }
                    ball.push((g.tet, l));
                }
                let mut ids: Vec<usize> = ball.iter().map(|b| b.0).collect();
                ids.sort_unstable();
                ids.dedup();
                if ids.len() != 4 {
                    return Err(reject(format!(
                        "4-1 needs four distinct tetrahedra around vertex {vertex} of tetrahedron {tet}"
                    )));
                }
                self.replace_ball(&ball, &[[0, 1, 2, 3]])
            }
        }
    }

    /// Replaces the tetrahedra `old` (with vertex labels) by tetrahedra spanned
    /// by label quadruples. Internal faces are label triples occurring twice;
    /// boundary faces are matched between old and new by their label triple.
    fn replace_ball(&self, old: &[(usize, Labels)], new: &[Labels]) -> Result<Triangulation> {
        let mut old_pos: HashMap<usize, usize> = HashMap::new();
        for (i, (t, lab)) in old.iter().enumerate() {
            if old_pos.insert(*t, i).is_some() {
                return Err(reject("ball repeats a tetrahedron"));
            }
            let mut s = *lab;
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(reject("ball tetrahedron with repeated labels"));
            }
        }

        let mut old_faces: HashMap<[u8; 3], Vec<(usize, u8)>> = HashMap::new();
        for (i, (_, lab)) in old.iter().enumerate() {
            for f in 0..4u8 {
                old_faces.entry(face_key(lab, f)).or_default().push((i, f));
            }
        }
        let mut old_boundary: HashMap<[u8; 3], (usize, u8)> = HashMap::new();
        for (key, occ) in &old_faces {
            match occ.as_slice() {
                [x] => {
                    old_boundary.insert(*key, *x);
                }
                [(i, f), (j, h)] => {
                    let (ti, li) = old[*i];
                    let (tj, lj) = old[*j];
                    let g = self.glued(ti, *f);
                    let consistent = g.tet == tj
                        && g.face == *h
                        && (0..4u8)
                            .filter(|&v| v != *f)
                            .all(|v| lj[g.perm[v as usize] as usize] == li[v as usize]);
                    if !consistent {
                        return Err(reject("ball faces are not glued as the move requires"));
                    }
                }
                _ => return Err(reject("label triple occurs on more than two faces")),
            }
        }

        let mut new_faces: HashMap<[u8; 3], Vec<(usize, u8)>> = HashMap::new();
        for (j, lab) in new.iter().enumerate() {
            for f in 0..4u8 {
                new_faces.entry(face_key(lab, f)).or_default().push((j, f));
            }
        }

        let kept: Vec<usize> = (0..self.tet_count()).filter(|t| !old_pos.contains_key(t)).collect();
        let mut index = vec![usize::MAX; self.tet_count()];
        for (i, &t) in kept.iter().enumerate() {
            index[t] = i;
        }
        let base = kept.len();
        let mut out: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; base + new.len()];
        for (i, &t) in kept.iter().enumerate() {
            for f in 0..4 {
                let g = self.gluings()[t][f].expect("closed");
                if index[g.tet] != usize::MAX {
                    out[i][f] = Some(Gluing { tet: index[g.tet], ..g });
                }
            }
        }

        for (key, occ) in &new_faces {
            match occ.as_slice() {
                [(j1, f1), (j2, f2)] => {
                    let (a, b) = (&new[*j1], &new[*j2]);
                    let mut perm: Perm = [0; 4];
                    for v in 0..4u8 {
                        perm[v as usize] = if v == *f1 { *f2 } else { position(b, a[v as usize]) };
                    }
                    out[base + j1][*f1 as usize] = Some(Gluing { tet: base + j2, face: *f2, perm });
                    out[base + j2][*f2 as usize] =
                        Some(Gluing { tet: base + j1, face: *f1, perm: super::perm_inverse(&perm) });
                }
                [(j, k)] => {
                    let &(i, f) = old_boundary
                        .get(key)
                        .ok_or_else(|| reject("new boundary face has no old counterpart"))?;
                    let (ti, li) = old[i];
                    let g = self.glued(ti, f);
                    let lab = &new[*j];
                    let mut perm: Perm = [0; 4];
                    if let Some(&i2) = old_pos.get(&g.tet) {
                        let li2 = old[i2].1;
                        let key2 = face_key(&li2, g.face);
                        let (j2, k2) = new_faces
                            .get(&key2)
                            .filter(|o| o.len() == 1)
                            .map(|o| o[0])
                            .ok_or_else(|| reject("boundary face glued into the ball interior"))?;
                        for v in 0..4u8 {
                            perm[v as usize] = if v == *k {
                                k2
                            } else {
                                let u = position(&li, lab[v as usize]);
                                position(&new[j2], li2[g.perm[u as usize] as usize])
                            };
                        }
                        out[base + j][*k as usize] = Some(Gluing { tet: base + j2, face: k2, perm });
                    } else {
                        for v in 0..4u8 {
                            perm[v as usize] = if v == *k {
                                g.face
                            } else {
                                g.perm[position(&li, lab[v as usize]) as usize]
                            };
                        }
                        let target = index[g.tet];
                        out[base + j][*k as usize] = Some(Gluing { tet: target, face: g.face, perm });
                        out[target][g.face as usize] =
                            Some(Gluing { tet: base + j, face: *k, perm: super::perm_inverse(&perm) });
                    }
                }
                _ => return Err(reject("new tetrahedra share a face more than twice")),
            }
        }
        if old_boundary.len() != new_faces.values().filter(|o| o.len() == 1).count() {
            return Err(reject("old and new ball boundaries differ"));
        }

        Triangulation::new(out).map_err(|e| reject(format!("move produced an invalid triangulation: {e}")))
    }

    /// Moves whose combinatorial preconditions hold. Each may still be
    /// rejected when the result would not be a valid triangulation.
    pub fn candidate_moves(&self) -> Vec<PachnerMove> {
        let mut out = Vec::new();
        let Ok(sk) = self.skeleton() else { return out };
        for t in 0..self.tet_count() {
            for f in 0..4u8 {
                let g = self.glued(t, f);
                if g.tet != t && (t, f) < (g.tet, g.face) {
                    out.push(PachnerMove::TwoThree { tet: t, face: f });
                }
            }
        }
        for e in &sk.edges {
            if e.degree() == 3 {
                let mut ts: Vec<usize> = e.incidences.iter().map(|x| x.0).collect();
                ts.sort_unstable();
                ts.dedup();
                if ts.len() == 3 {
                    let (tet, edge) = e.incidences[0];
                    out.push(PachnerMove::ThreeTwo { tet, edge });
                }
            }
        }
        for t in 0..self.tet_count() {
            out.push(PachnerMove::OneFour { tet: t });
        }
        for v in &sk.vertices {
            if v.degree() == 4 {
                let mut ts: Vec<usize> = v.incidences.iter().map(|x| x.0).collect();
                ts.sort_unstable();
                ts.dedup();
                if ts.len() == 4 {
                    let (tet, vertex) = v.incidences[0];
                    out.push(PachnerMove::FourOne { tet, vertex });
                }
            }
        }
        out
    }

    /// Applies up to `steps` random moves: each step picks a move kind
    /// uniformly among those with candidates, then a location.
    pub fn random_moves<R: Rng>(&self, steps: usize, rng: &mut R) -> (Triangulation, Vec<PachnerMove>) {
        let mut t = self.clone();
        let mut applied = Vec::new();
        for _ in 0..steps {
            let mut by_kind: [Vec<PachnerMove>; 4] = Default::default();
            for m in t.candidate_moves() {
                by_kind[m.kind()].push(m);
            }
            let mut kinds: Vec<usize> = (0..4).filter(|&k| !by_kind[k].is_empty()).collect();
            kinds.shuffle(rng);
            let mut moved = false;
            'kinds: for k in kinds {
                by_kind[k].shuffle(rng);
                for &m in &by_kind[k] {
                    if let Ok(next) = t.pachner_move(m) {
                        t = next;
                        applied.push(m);
                        moved = true;
                        break 'kinds;
                    }
                }
            }
            if !moved {
                break;
            }
        }
        (t, applied)
    }

    /// Greedy 3-2 and 4-1 reduction until no such move applies.
    pub fn simplify(&self) -> Triangulation {
        let mut t = self.clone();
        'outer: loop {
            for m in t.candidate_moves() {
                if matches!(m, PachnerMove::ThreeTwo { .. } | PachnerMove::FourOne { .. }) {
                    if let Ok(next) = t.pachner_move(m) {
                        t = next;
                        continue 'outer;
                    }
                }
            }
            return t;
        }
    }
}
