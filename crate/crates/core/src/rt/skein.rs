//! Kauffman-bracket evaluation of cabled link diagrams.
//!
//! Every piece of the cabled diagram (an elementary crossing or a Jones-Wenzl
//! projector) is a tangle: a linear combination of perfect matchings of its
//! boundary wires. Gluing two tangles along shared wires composes matchings
//! and turns closed cycles into factors of the loop value δ = −A² − A⁻².
//! Only connectivity is tracked, which is exact for the bracket.

use std::collections::HashMap;

use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::modular::{Color, ModularData};

use super::link::{Arc, FramedLink};

type Wire = u32;

/// Partner position of every boundary wire.
type Matching = Box<[u16]>;

#[derive(Clone, Debug)]
pub struct Tangle {
    /// Boundary wires, sorted.
    wires: Vec<Wire>,
    terms: HashMap<Matching, CycNumber>,
}

impl Tangle {
    /// A tangle from matchings given as wire pairs.
    fn from_pairs(wires: &[Wire], terms: Vec<(Vec<(Wire, Wire)>, CycNumber)>) -> Tangle {
        let mut sorted = wires.to_vec();
        sorted.sort_unstable();
        debug_assert!(sorted.windows(2).all(|w| w[0] != w[1]));
        let pos = |w: Wire| sorted.binary_search(&w).expect("wire on boundary") as u16;
        let mut out: HashMap<Matching, CycNumber> = HashMap::new();
        for (pairs, c) in terms {
            let mut m = vec![u16::MAX; sorted.len()];
            for (a, b) in pairs {
                m[pos(a) as usize] = pos(b);
                m[pos(b) as usize] = pos(a);
            }
            add_term(&mut out, m.into_boxed_slice(), c);
        }
        Tangle { wires: sorted, terms: out }
    }

    fn scalar(c: CycNumber) -> Tangle {
        let mut terms = HashMap::new();
        terms.insert(Matching::default(), c);
        Tangle { wires: Vec::new(), terms }
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// The coefficient of a closed tangle.
    pub fn value(&self, order: u32) -> CycNumber {
        debug_assert!(self.wires.is_empty());
        self.terms.get(&Matching::default()).cloned().unwrap_or_else(|| CycNumber::zero(order))
    }

    /// Renames wires; `map` must be injective on the boundary.
    fn relabel(&self, map: impl Fn(Wire) -> Wire) -> Tangle {
        let new: Vec<Wire> = self.wires.iter().map(|&w| map(w)).collect();
        let mut order: Vec<usize> = (0..new.len()).collect();
        order.sort_unstable_by_key(|&i| new[i]);
        let mut inv = vec![0u16; new.len()];
        for (k, &i) in order.iter().enumerate() {
            inv[i] = k as u16;
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut out = vec![0u16; m.len()];
                for (i, &p) in m.iter().enumerate() {
                    out[inv[i] as usize] = inv[p as usize];
                }
                (out.into_boxed_slice(), c.clone())
            })
            .collect();
        Tangle { wires: order.iter().map(|&i| new[i]).collect(), terms }
    }

    /// Glues along all shared wires; disjoint tangles give the tensor product.
    fn glue(&self, other: &Tangle, delta_pows: &[CycNumber]) -> Tangle {
        // union of wires with their position in each tangle
        let mut union: Vec<(Wire, Option<u16>, Option<u16>)> = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.wires.len() || j < other.wires.len() {
            let a = self.wires.get(i).copied();
            let b = other.wires.get(j).copied();
            match (a, b) {
                (Some(x), Some(y)) if x == y => {
                    union.push((x, Some(i as u16), Some(j as u16)));
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    union.push((x, Some(i as u16), None));
                    i += 1;
                }
                (Some(x), None) => {
                    union.push((x, Some(i as u16), None));
                    i += 1;
                }
                (_, Some(y)) => {
                    union.push((y, None, Some(j as u16)));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        let n = union.len();
        let mut p_to_u = vec![0u16; self.wires.len()];
        let mut q_to_u = vec![0u16; other.wires.len()];
        let mut out_pos = vec![u16::MAX; n];
        let mut out_wires = Vec::new();
        for (u, &(w, p, q)) in union.iter().enumerate() {
            if let Some(p) = p {
                p_to_u[p as usize] = u as u16;
            }
            if let Some(q) = q {
                q_to_u[q as usize] = u as u16;
            }
            if p.is_none() || q.is_none() {
                out_pos[u] = out_wires.len() as u16;
                out_wires.push(w);
            }
        }
        let shared: Vec<usize> = (0..n).filter(|&u| out_pos[u] == u16::MAX).collect();

        let mut result: HashMap<Matching, CycNumber> = HashMap::new();
        let mut pp = vec![u16::MAX; n];
        let mut qp = vec![u16::MAX; n];
        let mut seen = vec![false; n];
        for (mp, cp) in &self.terms {
            for (i, &p) in mp.iter().enumerate() {
                pp[p_to_u[i] as usize] = p_to_u[p as usize];
            }
            for (mq, cq) in &other.terms {
                for (i, &q) in mq.iter().enumerate() {
                    qp[q_to_u[i] as usize] = q_to_u[q as usize];
                }
                seen.iter_mut().for_each(|s| *s = false);
                let mut m = vec![u16::MAX; out_wires.len()];
                for (u, &(_, p, _)) in union.iter().enumerate() {
                    if out_pos[u] == u16::MAX || seen[u] {
                        continue;
                    }
                    // leave through the tangle owning u and bounce across shared wires
                    let mut in_p = p.is_some();
                    let mut cur = u;
                    seen[u] = true;
                    loop {
                        cur = if in_p { pp[cur] } else { qp[cur] } as usize;
                        seen[cur] = true;
                        if out_pos[cur] != u16::MAX {
                            break;
                        }
                        in_p = !in_p;
                    }
                    m[out_pos[u] as usize] = out_pos[cur];
                    m[out_pos[cur] as usize] = out_pos[u];
                }
                let mut loops = 0;
                for &s in &shared {
                    if seen[s] {
                        continue;
                    }
                    loops += 1;
                    let mut cur = s;
                    let mut in_p = true;
                    while !seen[cur] {
                        seen[cur] = true;
                        cur = if in_p { pp[cur] } else { qp[cur] } as usize;
                        in_p = !in_p;
                    }
                }
                let c = cp * cq;
                let c = if loops == 0 { c } else { &c * &delta_pow(delta_pows, loops) };
                add_term(&mut result, m.into_boxed_slice(), c);
            }
        }
        Tangle { wires: out_wires, terms: result }
    }
}

fn delta_pow(pows: &[CycNumber], k: usize) -> CycNumber {
    match pows.get(k) {
        Some(p) => p.clone(),
        None => &pows[pows.len() - 1] * &delta_pow(pows, k + 1 - pows.len()),
    }
}

fn add_term(map: &mut HashMap<Matching, CycNumber>, m: Matching, c: CycNumber) {
    if c.is_zero() {
        return;
    }
    match map.entry(m) {
        std::collections::hash_map::Entry::Occupied(mut e) => {
            *e.get_mut() += &c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        std::collections::hash_map::Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

/// Precomputed Jones-Wenzl projectors and loop powers for one level.
pub struct SkeinEvaluator<'a> {
    md: &'a ModularData,
    /// `jw[n]` on bottom wires 0..n and top wires n..2n.
    jw: Vec<Tangle>,
    delta_pows: Vec<CycNumber>,
    max_cabled_crossings: usize,
}

pub const DEFAULT_MAX_CABLED_CROSSINGS: usize = 4096;

impl<'a> SkeinEvaluator<'a> {
    pub fn new(md: &'a ModularData) -> SkeinEvaluator<'a> {
        let order = md.order();
        let delta = -(&CycNumber::zeta_pow(order, 2) + &CycNumber::zeta_pow(order, -2));
        let mut delta_pows = vec![CycNumber::one(order)];
        // enough for any single gluing at the supported cabling sizes
        for k in 1..=256 {
            let next = &delta_pows[k - 1] * &delta;
            delta_pows.push(next);
        }
        let mut ev = SkeinEvaluator {
            md,
            jw: Vec::new(),
            delta_pows,
            max_cabled_crossings: DEFAULT_MAX_CABLED_CROSSINGS,
        };
        ev.jw.push(Tangle::scalar(CycNumber::one(order)));
        if md.num_colors() > 1 {
            ev.jw.push(Tangle::from_pairs(&[0, 1], vec![(vec![(0, 1)], CycNumber::one(order))]));
        }
        for n in 1..md.num_colors().saturating_sub(1) {
            let next = ev.jw_step(n);
            ev.jw.push(next);
        }
        ev
    }

    pub fn with_max_cabled_crossings(mut self, limit: usize) -> Self {
        self.max_cabled_crossings = limit;
        self
    }

    pub fn projector(&self, n: Color) -> &Tangle {
        &self.jw[n as usize]
    }

    /// f_{n+1} = f_n⊗1 − (Δ_{n−1}/Δ_n)(f_n⊗1)e_n(f_n⊗1) on wires 0..2n+2.
    fn jw_step(&self, n: usize) -> Tangle {
        let order = self.md.order();
        let m = n as Wire + 1;
        // place an (n+1)-strand element between bottom wires base.. and top wires base+m..
        let layer = |t: &Tangle, base: Wire| t.relabel(|w| w + base);
        let fn_id = {
            let f = self.jw[n].relabel(|w| if w < n as Wire { w } else { w + 1 });
            f.glue(&Tangle::from_pairs(&[n as Wire, m + n as Wire], vec![(vec![(n as Wire, m + n as Wire)], CycNumber::one(order))]), &self.delta_pows)
        };
        let mut pairs: Vec<(Wire, Wire)> = (0..n as Wire - 1).map(|k| (k, m + k)).collect();
        pairs.push((n as Wire - 1, n as Wire));
        pairs.push((m + n as Wire - 1, m + n as Wire));
        let wires: Vec<Wire> = (0..2 * m).collect();
        let e = Tangle::from_pairs(&wires, vec![(pairs, CycNumber::one(order))]);
        // stack: fn_id (wires 0..2m), e shifted by m, fn_id shifted by 2m
        let mid = fn_id.glue(&layer(&e, m), &self.delta_pows);
        let top = mid.glue(&layer(&fn_id, 2 * m), &self.delta_pows);
        let sandwich = top.relabel(|w| if w < m { w } else { w - 2 * m });
        let mu = self.md.qdim(n as Color - 1) * &self.md.qdim(n as Color).inverse().expect("Δ_n ≠ 0 below r−1");
        let mu = -&mu;
        let mut out = fn_id.terms.clone();
        for (k, c) in sandwich.terms {
            add_term(&mut out, k, &c * &mu);
        }
        Tangle { wires: fn_id.wires, terms: out }
    }

    /// Bracket of the blackboard-framed diagram with component `i` cabled by
    /// the projector of color `coloring[i]`. Crossingless components contribute
    /// their loop value Δ_c.
    pub fn bracket(&self, link: &FramedLink, coloring: &[Color]) -> Result<CycNumber> {
        let order = self.md.order();
        if coloring.len() != link.component_count() {
            return Err(Error::InvalidLink(format!(
                "{} colors for {} components",
                coloring.len(),
                link.component_count()
            )));
        }
        if let Some(&c) = coloring.iter().find(|&&c| c as usize >= self.md.num_colors()) {
            return Err(Error::Domain(format!("color {c} outside 0..={}", self.md.num_colors() - 1)));
        }
        let color_of = |a: Arc| coloring[link.arc_component(a)] as usize;
        let cabled: usize = link.pd().iter().map(|x| color_of(x[0]) * color_of(x[1])).sum();
        if cabled > self.max_cabled_crossings {
            return Err(Error::ResourceLimit {
                what: "cabled crossings",
                estimate: cabled as f64,
                ceiling: self.max_cabled_crossings as u64,
            });
        }

        let mut b = Builder::default();
        // tail and head wires of every strand of every arc
        let mut tail: HashMap<Arc, Vec<Wire>> = HashMap::new();
        let mut head: HashMap<Arc, Vec<Wire>> = HashMap::new();
        let jw_arcs: Vec<Arc> = link.components().iter().filter_map(|c| c.arcs.first().copied()).collect();
        for comp in link.components() {
            for &a in &comp.arcs {
                let c = color_of(a);
                let t: Vec<Wire> = (0..c).map(|_| b.fresh()).collect();
                let h: Vec<Wire> = if jw_arcs.contains(&a) { (0..c).map(|_| b.fresh()).collect() } else { t.clone() };
                tail.insert(a, t);
                head.insert(a, h);
            }
        }

        let a_coef = CycNumber::zeta_pow(order, 1);
        let a_inv = CycNumber::zeta_pow(order, -1);
        for (x, cr) in link.pd().iter().enumerate() {
            let m = color_of(cr[0]);
            let n = color_of(cr[1]);
            // v[i][j]: column i below row j; h[j][i]: row j left of column i
            let mut v: Vec<Vec<Wire>> = (0..m).map(|_| (0..=n).map(|_| b.fresh()).collect()).collect();
            let mut h: Vec<Vec<Wire>> = (0..n).map(|_| (0..=m).map(|_| b.fresh()).collect()).collect();
            for i in 0..m {
                let (south, north) = (head[&cr[0]][i], tail[&cr[2]][i]);
                if n == 0 {
                    b.join(south, north);
                } else {
                    v[i][0] = south;
                    v[i][n] = north;
                }
            }
            for j in 0..n {
                // heading east the leftmost strand is the northern row
                let (west, east) = if link.over_in(x) == 3 {
                    (head[&cr[3]][n - 1 - j], tail[&cr[1]][n - 1 - j])
                } else {
                    (tail[&cr[3]][j], head[&cr[1]][j])
                };
                if m == 0 {
                    b.join(west, east);
                } else {
                    h[j][0] = west;
                    h[j][m] = east;
                }
            }
            for i in 0..m {
                for j in 0..n {
                    let (s, nn, w, e) = (v[i][j], v[i][j + 1], h[j][i], h[j][i + 1]);
                    b.pieces.push(Piece::Crossing([s, e, nn, w]));
                }
            }
        }
        for &a in &jw_arcs {
            let c = color_of(a);
            if c > 0 {
                let mut wires = tail[&a].clone();
                wires.extend(&head[&a]);
                b.pieces.push(Piece::Projector(c, wires));
            }
        }

        let mut tangles: Vec<Tangle> = Vec::new();
        let mut scalar = CycNumber::one(order);
        // crossingless components and strands joined only to themselves
        for (i, comp) in link.components().iter().enumerate() {
            if comp.arcs.is_empty() {
                scalar = &scalar * self.md.qdim(coloring[i]);
            }
        }
        let pieces = std::mem::take(&mut b.pieces);
        for piece in pieces {
            let (wires, base): (Vec<Wire>, Tangle) = match piece {
                Piece::Crossing([s, e, nn, w]) => {
                    let t = Tangle::from_pairs(
                        &[0, 1, 2, 3],
                        vec![
                            (vec![(0, 1), (2, 3)], a_coef.clone()),
                            (vec![(0, 3), (1, 2)], a_inv.clone()),
                        ],
                    );
                    (vec![s, e, nn, w], t)
                }
                Piece::Projector(c, wires) => (wires, self.jw[c].clone()),
            };
            // a wire used twice by one piece is split by an identity strand
            let mut ids: Vec<Wire> = Vec::with_capacity(wires.len());
            for w in wires {
                let w = b.find(w);
                if ids.contains(&w) {
                    let f = b.fresh();
                    tangles.push(Tangle::from_pairs(&[w, f], vec![(vec![(w, f)], CycNumber::one(order))]));
                    ids.push(f);
                } else {
                    ids.push(w);
                }
            }
            tangles.push(base.relabel(|k| ids[k as usize]));
        }
        let value = contract(tangles, &self.delta_pows, order);
        Ok(&scalar * &value)
    }

    /// Framed-isotopy invariant value: the bracket corrected by θ_c^{f − w}
    /// on each diagram component and θ_c^f on crossingless ones.
    pub fn colored_link_value(&self, link: &FramedLink, coloring: &[Color]) -> Result<CycNumber> {
        let mut value = self.bracket(link, coloring)?;
        let writhes = link.writhes();
        for (i, &c) in coloring.iter().enumerate() {
            let shift = link.framings()[i] - writhes[i];
            if shift != 0 {
                value = &value * &self.md.twist(c).pow(shift)?;
            }
        }
        Ok(value)
    }
}

#[derive(Default)]
struct Builder {
    parent: Vec<Wire>,
    pieces: Vec<Piece>,
}

enum Piece {
    /// Wires south, east, north, west; the vertical strand is under.
    Crossing([Wire; 4]),
    Projector(usize, Vec<Wire>),
}

impl Builder {
    fn fresh(&mut self) -> Wire {
        let w = self.parent.len() as Wire;
        self.parent.push(w);
        w
    }

    fn find(&mut self, mut w: Wire) -> Wire {
        while self.parent[w as usize] != w {
            let p = self.parent[w as usize];
            self.parent[w as usize] = self.parent[p as usize];
            w = p;
        }
        w
    }

    fn join(&mut self, a: Wire, b: Wire) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[b as usize] = a;
        }
    }
}

/// Greedy pairwise contraction, always merging the adjacent pair with the
/// smallest resulting boundary.
fn contract(mut tangles: Vec<Tangle>, delta_pows: &[CycNumber], order: u32) -> CycNumber {
    let mut scalar = CycNumber::one(order);
    let mut live: Vec<Option<Tangle>> = Vec::new();
    for t in tangles.drain(..) {
        if t.wires.is_empty() {
            scalar = &scalar * &t.value(order);
        } else {
            live.push(Some(t));
        }
    }
    let mut owner: HashMap<Wire, Vec<usize>> = HashMap::new();
    for (i, t) in live.iter().enumerate() {
        for &w in &t.as_ref().unwrap().wires {
            owner.entry(w).or_default().push(i);
        }
    }
    loop {
        let mut best: Option<(usize, usize, (usize, usize))> = None;
        for (i, t) in live.iter().enumerate() {
            let Some(t) = t else { continue };
            for w in &t.wires {
                for &j in &owner[w] {
                    if j <= i {
                        continue;
                    }
                    let u = live[j].as_ref().unwrap();
                    let shared = t.wires.iter().filter(|w| u.wires.binary_search(w).is_ok()).count();
                    let size = t.wires.len() + u.wires.len() - 2 * shared;
                    let key = (size, t.terms.len() * u.terms.len());
                    if best.is_none_or(|(_, _, k)| key < k) {
                        best = Some((i, j, key));
                    }
                }
            }
        }
        let Some((i, j, _)) = best else { break };
        let a = live[i].take().unwrap();
        let b = live[j].take().unwrap();
        for w in a.wires.iter().chain(&b.wires) {
            owner.get_mut(w).unwrap().retain(|&k| k != i && k != j);
        }
        let g = a.glue(&b, delta_pows);
        if g.wires.is_empty() {
            scalar = &scalar * &g.value(order);
        } else {
            let k = live.len();
            for &w in &g.wires {
                owner.get_mut(&w).unwrap().push(k);
            }
            live.push(Some(g));
        }
    }
    debug_assert!(live.iter().all(Option::is_none));
    scalar
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::Level;
    use crate::rt::link::braid_closure;

    fn md(r: u32) -> ModularData {
        ModularData::new(Level::new(r).unwrap())
    }

    #[test]
    fn projector_traces_are_quantum_dimensions() {
        for r in 3..=7 {
            let md = md(r);
            let ev = SkeinEvaluator::new(&md);
            for c in md.colors() {
                let n = c as Wire;
                let p = ev.projector(c);
                // close every strand
                let closure = Tangle::from_pairs(
                    &(0..2 * n).collect::<Vec<_>>(),
                    vec![((0..n).map(|k| (k, n + k)).collect(), CycNumber::one(md.order()))],
                );
                let t = p.glue(&closure, &ev.delta_pows);
                assert_eq!(t.value(md.order()), *md.qdim(c), "r={r} c={c}");
            }
        }
    }

    #[test]
    fn projectors_are_idempotent_and_killed_by_caps() {
        let md = md(6);
        let ev = SkeinEvaluator::new(&md);
        for c in 2..=md.num_colors() as Wire - 1 {
            let p = ev.projector(c as Color);
            let sq = p.glue(&p.relabel(|w| w + c), &ev.delta_pows).relabel(|w| if w < c { w } else { w - c });
            assert_eq!(sq.terms, p.terms, "c={c}");
            // a cap on top strands 0,1 kills it
            let mut pairs = vec![(c, c + 1)];
            pairs.extend((2..c).map(|k| (c + k, 3 * c + k)));
            let wires: Vec<Wire> = (c..2 * c).chain(3 * c + 2..4 * c).collect();
            let cap = Tangle::from_pairs(&wires, vec![(pairs, CycNumber::one(md.order()))]);
            let capped = p.glue(&cap, &ev.delta_pows);
            assert!(capped.terms.is_empty(), "c={c}");
        }
    }

    #[test]
    fn positive_kink_is_the_twist() {
        for r in 3..=6 {
            let md = md(r);
            let ev = SkeinEvaluator::new(&md);
            let (kink, _) = braid_closure(1 + 1, &[1]).unwrap();
            assert_eq!(kink.component_count(), 1);
            let (neg, _) = braid_closure(2, &[-1]).unwrap();
            for c in md.colors() {
                let b = ev.bracket(&kink, &[c]).unwrap();
                assert_eq!(b, md.twist(c) * md.qdim(c), "r={r} c={c}");
                let b = ev.bracket(&neg, &[c]).unwrap();
                assert_eq!(b, &md.twist(c).inverse().unwrap() * md.qdim(c), "r={r} c={c}");
            }
        }
    }

    #[test]
    fn hopf_closed_form() {
        for r in 3..=6 {
            let md = md(r);
            let ev = SkeinEvaluator::new(&md);
            let h = FramedLink::hopf(0, 0);
            for a in md.colors() {
                for b in md.colors() {
                    let v = ev.colored_link_value(&h, &[a, b]).unwrap();
                    let sign = if (a + b) % 2 == 0 { 1 } else { -1 };
                    let expected = &md.quantum_integer((a as i64 + 1) * (b as i64 + 1)) * &CycNumber::from_int(md.order(), sign);
                    assert_eq!(v, expected, "r={r} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn resource_guard() {
        let md = md(6);
        let ev = SkeinEvaluator::new(&md).with_max_cabled_crossings(10);
        let err = ev.bracket(&FramedLink::hopf(0, 0), &[4, 4]).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { .. }));
        assert!(ev.bracket(&FramedLink::hopf(0, 0), &[1, 4]).is_ok());
    }
}
