//! Exact local identities behind triangulation independence, in the gauge
//! used by the state sum (tetrahedron weight Tet, face weight Θ⁻¹, edge
//! weight ω_e², vertex weight ω⁻²).
//!
//! Each check returns the number of cases examined and the number whose
//! exact residual was nonzero.

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cyclotomic::CycNumber;
use crate::modular::{tetrahedral_slot_actions, Color, ModularData};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub name: &'static str,
    pub level: u32,
    pub cases: usize,
    pub failures: usize,
}

impl IdentityReport {
    pub fn new(name: &'static str, md: &ModularData) -> IdentityReport {
        IdentityReport { name, level: md.level().r(), cases: 0, failures: 0 }
    }

    pub fn record(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

/// Edge colors of a complete graph on up to six labelled vertices.
#[derive(Clone, Copy)]
struct Graph([[Color; 6]; 6]);

impl Graph {
    fn new() -> Graph {
        Graph([[0; 6]; 6])
    }

    fn set(&mut self, a: usize, b: usize, c: Color) {
        self.0[a][b] = c;
        self.0[b][a] = c;
    }

    fn get(&self, a: usize, b: usize) -> Color {
        self.0[a][b]
    }

    /// Tet of the tetrahedron on vertices p, in 6j slot order.
    fn tet<'m>(&self, md: &'m ModularData, p: [usize; 4]) -> Option<&'m CycNumber> {
        let e = |i: usize, j: usize| self.get(p[i], p[j]);
        md.tet(e(0, 1), e(0, 2), e(1, 2), e(2, 3), e(1, 3), e(0, 3))
    }

    fn theta_inv<'m>(&self, md: &'m ModularData, p: [usize; 3]) -> Option<&'m CycNumber> {
        md.theta_inv(self.get(p[0], p[1]), self.get(p[1], p[2]), self.get(p[0], p[2]))
    }

    fn theta<'m>(&self, md: &'m ModularData, p: [usize; 3]) -> Option<&'m CycNumber> {
        md.theta(self.get(p[0], p[1]), self.get(p[1], p[2]), self.get(p[0], p[2]))
    }
}

fn product<'a>(order: u32, xs: impl IntoIterator<Item = Option<&'a CycNumber>>) -> CycNumber {
    let mut acc = CycNumber::one(order);
    for x in xs {
        match x {
            Some(v) => acc *= v,
            None => return CycNumber::zero(order),
        }
    }
    acc
}

/// Every admissible 6-tuple against its 24 images, with the tuple evaluated
/// afresh and the images read from the table.
pub fn tetrahedral_symmetry(md: &ModularData) -> IdentityReport {
    let actions = tetrahedral_slot_actions();
    let mut cases = 0;
    let mut failures = 0;
    let cols: Vec<Color> = md.colors().collect();
    for &a in &cols {
        for &b in &cols {
            for &e in &cols {
                for &c in &cols {
                    for &d in &cols {
                        for &f in &cols {
                            let s = [a, b, e, c, d, f];
                            let Some(fresh) = md.tet_uncached(&s) else { continue };
                            let direct = md.six_j(a, b, e, c, d, f);
                            for act in &actions {
                                let mut img = [0 as Color; 6];
                                for i in 0..6 {
                                    img[act[i]] = s[i];
                                }
                                cases += 1;
                                let sym = md.six_j(img[0], img[1], img[2], img[3], img[4], img[5]);
                                if md.tet_slots(&img) != Some(&fresh) || sym != direct {
                                    failures += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    IdentityReport { name: "tetrahedral symmetry", level: md.level().r(), cases, failures }
}

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;
const D: usize = 3;
const E: usize = 4;

/// 2-3 move contract (Biedenharn-Elliott) on vertices A..E:
/// Tet(ABCD)·Tet(ABCE)·Θ(ABC)⁻¹ = Σ_x ω_x² Tet(ABDE)Tet(BCDE)Tet(ACDE)·Θ(ADE)⁻¹Θ(BDE)⁻¹Θ(CDE)⁻¹
/// with x the color of DE.
fn pentagon_residual(md: &ModularData, g: &mut Graph) -> CycNumber {
    let order = md.order();
    let lhs = product(
        order,
        [g.tet(md, [A, B, C, D]), g.tet(md, [A, B, C, E]), g.theta_inv(md, [A, B, C])],
    );
    let mut rhs = CycNumber::zero(order);
    for x in md.colors() {
        g.set(D, E, x);
        let term = product(
            order,
            [
                Some(md.qdim(x)),
                g.tet(md, [A, B, D, E]),
                g.tet(md, [B, C, D, E]),
                g.tet(md, [A, C, D, E]),
                g.theta_inv(md, [A, D, E]),
                g.theta_inv(md, [B, D, E]),
                g.theta_inv(md, [C, D, E]),
            ],
        );
        rhs += &term;
    }
    &lhs - &rhs
}

/// Random colorings of the nine edges other than DE with both left-hand
/// tetrahedra admissible.
pub fn biedenharn_elliott(md: &ModularData, samples: usize, seed: u64) -> IdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = md.num_colors() as Color;
    let mut failures = 0;
    let mut cases = 0;
    let mut attempts = 0usize;
    while cases < samples && attempts < samples * 10_000 {
        attempts += 1;
        let mut g = Graph::new();
        for (p, q) in [(A, B), (A, C), (B, C), (A, D), (B, D), (C, D), (A, E), (B, E), (C, E)] {
            g.set(p, q, rng.gen_range(0..k));
        }
        if g.tet(md, [A, B, C, D]).is_none() || g.tet(md, [A, B, C, E]).is_none() {
            continue;
        }
        cases += 1;
        if !pentagon_residual(md, &mut g).is_zero() {
            failures += 1;
        }
    }
    IdentityReport { name: "Biedenharn-Elliott", level: md.level().r(), cases, failures }
}

/// The same identity over every coloring of the nine edges. Colorings with an
/// inadmissible face among ABD, ACD, BCD, ABE, ACE, BCE vanish on both sides
/// term by term, so only the remaining ones are evaluated and counted.
pub fn biedenharn_elliott_exhaustive(md: &ModularData) -> IdentityReport {
    let cols: Vec<Color> = md.colors().collect();
    let (cases, failures) = cols
        .par_iter()
        .map(|&ab| {
            let mut g = Graph::new();
            g.set(A, B, ab);
            let (mut cases, mut failures) = (0usize, 0usize);
            // apex colors (AX, BX, CX) with ABX admissible, for X = D or E
            let apex: Vec<[Color; 2]> = cols
                .iter()
                .flat_map(|&a| cols.iter().map(move |&b| [a, b]))
                .filter(|&[a, b]| md.admissible(ab, a, b))
                .collect();
            for &ac in &cols {
                for &bc in &cols {
                    g.set(A, C, ac);
                    g.set(B, C, bc);
                    for &[ad, bd] in &apex {
                        for &cd in &cols {
                            if !md.admissible(ac, ad, cd) || !md.admissible(bc, bd, cd) {
                                continue;
                            }
                            for &[ae, be] in &apex {
                                for &ce in &cols {
                                    if !md.admissible(ac, ae, ce) || !md.admissible(bc, be, ce) {
                                        continue;
                                    }
                                    for (p, q, c) in [(A, D, ad), (B, D, bd), (C, D, cd), (A, E, ae), (B, E, be), (C, E, ce)] {
                                        g.set(p, q, c);
                                    }
                                    cases += 1;
                                    if !pentagon_residual(md, &mut g).is_zero() {
                                        failures += 1;
                                    }
                                }
                            }
                        }
                    }
                }
            }
            (cases, failures)
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    IdentityReport { name: "Biedenharn-Elliott (exhaustive)", level: md.level().r(), cases, failures }
}

/// 2-0 contract (orthogonality): two tetrahedra ABCD differing only in the
/// color of AB (j, k), summed over x = CD,
/// Σ_x ω_x² Tet_j Tet_k Θ(ACD)⁻¹Θ(BCD)⁻¹ = δ_jk Θ(ABC)Θ(ABD)/ω_j².
/// Exhaustive over AC, AD, BC, BD, j, k.
pub fn orthogonality(md: &ModularData) -> IdentityReport {
    let order = md.order();
    let cols: Vec<Color> = md.colors().collect();
    let mut cases = 0;
    let mut failures = 0;
    let mut g = Graph::new();
    for &ac in &cols {
        for &ad in &cols {
            for &bc in &cols {
                for &bd in &cols {
                    g.set(A, C, ac);
                    g.set(A, D, ad);
                    g.set(B, C, bc);
                    g.set(B, D, bd);
                    for &j in &cols {
                        for &k in &cols {
                            let mut lhs = CycNumber::zero(order);
                            for x in md.colors() {
                                g.set(C, D, x);
                                g.set(A, B, j);
                                let tj = g.tet(md, [A, B, C, D]);
                                g.set(A, B, k);
                                let tk = g.tet(md, [A, B, C, D]);
                                let term = product(
                                    order,
                                    [
                                        Some(md.qdim(x)),
                                        tj,
                                        tk,
                                        g.theta_inv(md, [A, C, D]),
                                        g.theta_inv(md, [B, C, D]),
                                    ],
                                );
                                lhs += &term;
                            }
                            g.set(A, B, j);
                            let rhs = if j == k {
                                let dim_inv = md.qdim(j).inverse().expect("quantum dimension is nonzero");
                                product(
                                    order,
                                    [g.theta(md, [A, B, C]), g.theta(md, [A, B, D]), Some(&dim_inv)],
                                )
                            } else {
                                CycNumber::zero(order)
                            };
                            cases += 1;
                            if lhs != rhs {
                                failures += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    IdentityReport { name: "orthogonality", level: md.level().r(), cases, failures }
}

/// 1-4 contract: coning a tetrahedron ABCD from a new vertex E,
/// Tet(ABCD) = ω⁻² Σ_{AE,BE,CE,DE} ∏ω² · ∏_4 Tet · ∏_6 Θ⁻¹ (internal faces).
pub fn one_four(md: &ModularData, samples: usize, seed: u64) -> IdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = md.order();
    let k = md.num_colors() as Color;
    let mut cases = 0;
    let mut failures = 0;
    let mut attempts = 0usize;
    while cases < samples && attempts < samples * 10_000 {
        attempts += 1;
        let mut g = Graph::new();
        for (p, q) in [(A, B), (A, C), (A, D), (B, C), (B, D), (C, D)] {
            g.set(p, q, rng.gen_range(0..k));
        }
        let Some(lhs) = g.tet(md, [A, B, C, D]).cloned() else { continue };
        cases += 1;
        let mut sum = CycNumber::zero(order);
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    for d in 0..k {
                        g.set(A, E, a);
                        g.set(B, E, b);
                        g.set(C, E, c);
                        g.set(D, E, d);
                        let term = product(
                            order,
                            [
                                Some(md.qdim(a)),
                                Some(md.qdim(b)),
                                Some(md.qdim(c)),
                                Some(md.qdim(d)),
                                g.tet(md, [A, B, C, E]),
                                g.tet(md, [A, B, D, E]),
                                g.tet(md, [A, C, D, E]),
                                g.tet(md, [B, C, D, E]),
                                g.theta_inv(md, [A, B, E]),
                                g.theta_inv(md, [A, C, E]),
                                g.theta_inv(md, [A, D, E]),
                                g.theta_inv(md, [B, C, E]),
                                g.theta_inv(md, [B, D, E]),
                                g.theta_inv(md, [C, D, E]),
                            ],
                        );
                        sum += &term;
                    }
                }
            }
        }
        if &sum * md.global_dim_inv() != lhs {
            failures += 1;
        }
    }
    IdentityReport { name: "1-4 move", level: md.level().r(), cases, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::Level;

    fn md(r: u32) -> ModularData {
        ModularData::new(Level::new(r).unwrap())
    }

    #[test]
    fn identities_small_levels() {
        for r in 3..=5 {
            let m = md(r);
            assert!(tetrahedral_symmetry(&m).passed());
            assert!(biedenharn_elliott(&m, 100, r as u64).passed());
            assert!(orthogonality(&m).passed());
            assert!(one_four(&m, 10, r as u64).passed());
        }
        assert!(biedenharn_elliott_exhaustive(&md(3)).passed());
    }

    #[test]
    fn a_wrong_normalization_is_detected() {
        // dropping the face weight breaks the 2-3 contract
        let m = md(5);
        let mut g = Graph::new();
        for (p, q) in [(A, B), (A, C), (B, C), (A, D), (B, D), (C, D), (A, E), (B, E), (C, E)] {
            g.set(p, q, 2);
        }
        assert!(pentagon_residual(&m, &mut g).is_zero());
        let order = m.order();
        let lhs = product(order, [g.tet(&m, [A, B, C, D]), g.tet(&m, [A, B, C, E])]);
        assert!(!lhs.is_zero());
        let mut rhs = CycNumber::zero(order);
        for x in m.colors() {
            g.set(D, E, x);
            rhs += &product(
                order,
                [Some(m.qdim(x)), g.tet(&m, [A, B, D, E]), g.tet(&m, [B, C, D, E]), g.tet(&m, [A, C, D, E])],
            );
        }
        assert_ne!(lhs, rhs);
    }
}
