//! SU_q(2) fusion data at level r: labels, quantum dimensions, twists,
//! theta and tetrahedron evaluations, 6j-symbols and global constants.
//!
//! Conventions: q = exp(iπ/r), A = ζ = exp(iπ/2r), labels I = {0, …, r−2},
//! ω_c² = (−1)^c [c+1], θ_c = (−1)^c A^{c(c+2)}.
//!
//! Theta and tetrahedron networks follow Kauffman–Lins recoupling theory. The
//! tetrahedrally symmetric 6j-symbol is `Tet / √(Θ₁Θ₂Θ₃Θ₄)` over its four faces.
//! That square root generally lies outside Q(ζ), so [`SixJ`] keeps the
//! tetrahedron value and the face thetas separately; every closed state sum
//! uses each face twice and the radicals pair off into Θ^{-1} per face.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};

/// A label in {0, …, r−2}.
pub type Color = u8;

/// Root-of-unity level r ≥ 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Level(u32);

impl Level {
    pub fn new(r: u32) -> Result<Level> {
        if r < 3 {
            return Err(Error::InvalidLevel(r));
        }
        if r > 60 {
            return Err(Error::Domain(format!(
                "level r = {r} is beyond the supported range (r <= 60)"
            )));
        }
        Ok(Level(r))
    }

    pub fn r(self) -> u32 {
        self.0
    }

    /// Order 4r of the root of unity ζ generating the coefficient field.
    pub fn order(self) -> u32 {
        4 * self.0
    }

    pub fn num_colors(self) -> usize {
        (self.0 - 1) as usize
    }

    pub fn colors(self) -> impl Iterator<Item = Color> + Clone {
        0..(self.0 - 1) as Color
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r={}", self.0)
    }
}

/// The quantum integer [n] = (q^n − q^{−n})/(q − q^{−1}) at q = A².
pub fn quantum_integer(n: i64, level: Level) -> CycNumber {
    let order = level.order();
    if n == 0 {
        return CycNumber::zero(order);
    }
    if n < 0 {
        return -quantum_integer(-n, level);
    }
    // [n] = Σ_{k=0}^{n-1} A^{2(n-1-2k)}
    let mut acc = CycNumber::zero(order);
    for k in 0..n {
        acc += &CycNumber::zeta_pow(order, 2 * (n - 1 - 2 * k));
    }
    acc
}

/// Triangle condition with parity and the level cutoff a+b+c ≤ 2(r−2).
pub fn admissible(a: Color, b: Color, c: Color, level: Level) -> bool {
    let (a, b, c) = (a as u32, b as u32, c as u32);
    let top = level.r() - 2;
    a <= top
        && b <= top
        && c <= top
        && (a + b + c) % 2 == 0
        && a + b >= c
        && b + c >= a
        && a + c >= b
        && a + b + c <= 2 * top
}

/// Vertex pairs for the six 6j slots (a, b, e, c, d, f) of a tetrahedron with
/// vertices 0..3. Faces are (a,b,e), (c,d,e), (a,d,f), (b,c,f); the opposite
/// edge pairs are (a,c), (b,d), (e,f).
pub const SIXJ_SLOT_EDGES: [(u8, u8); 6] = [(0, 1), (0, 2), (1, 2), (2, 3), (1, 3), (0, 3)];

/// Slot triples forming the four faces of a 6j tuple.
pub const SIXJ_FACES: [[usize; 3]; 4] = [[0, 1, 2], [3, 4, 2], [0, 4, 5], [1, 3, 5]];

/// The 24 relabelings of a tetrahedron's vertices, acting on 6j slots:
/// `perm[i]` is the slot receiving the color of slot `i`.
pub fn tetrahedral_slot_actions() -> Vec<[usize; 6]> {
    let mut out = Vec::with_capacity(24);
    for sigma in permutations4() {
        let mut act = [0usize; 6];
        for (i, &(u, v)) in SIXJ_SLOT_EDGES.iter().enumerate() {
            let (x, y) = (sigma[u as usize], sigma[v as usize]);
            let key = if x < y { (x, y) } else { (y, x) };
            act[i] = SIXJ_SLOT_EDGES.iter().position(|&e| e == key).unwrap();
        }
        out.push(act);
    }
    out
}

pub(crate) fn permutations4() -> Vec<[u8; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4u8 {
        for b in 0..4u8 {
            for c in 0..4u8 {
                for d in 0..4u8 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    if p.iter().all(|&x| !std::mem::replace(&mut seen[x as usize], true)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// A tetrahedrally symmetric 6j-symbol, `tet / ∏_faces √Θ_face`.
#[derive(Clone, Debug)]
pub struct SixJ {
    pub tet: CycNumber,
    pub face_thetas: [CycNumber; 4],
}

impl SixJ {
    pub fn is_zero(&self) -> bool {
        self.tet.is_zero()
    }

    /// (6j)², which does lie in the coefficient field.
    pub fn squared(&self) -> CycNumber {
        let mut den = CycNumber::one(self.tet.order());
        for t in &self.face_thetas {
            den *= t;
        }
        &(&self.tet * &self.tet) * &den.inverse().expect("face thetas are nonzero")
    }

    /// Numeric value using the principal square root of each (real) face theta.
    pub fn to_complex(&self) -> Complex64 {
        let mut den = Complex64::new(1.0, 0.0);
        for t in &self.face_thetas {
            let v = t.to_complex().re;
            den *= if v >= 0.0 {
                Complex64::new(v.sqrt(), 0.0)
            } else {
                Complex64::new(0.0, (-v).sqrt())
            };
        }
        self.tet.to_complex() / den
    }
}

impl PartialEq for SixJ {
    fn eq(&self, other: &Self) -> bool {
        if self.tet != other.tet {
            return false;
        }
        if self.is_zero() {
            return true;
        }
        // face thetas compared as multisets
        let mut used = [false; 4];
        self.face_thetas.iter().all(|t| {
            other
                .face_thetas
                .iter()
                .enumerate()
                .position(|(j, u)| !used[j] && u == t)
                .map(|j| used[j] = true)
                .is_some()
        })
    }
}

/// Fusion and recoupling data for one level, built eagerly and immutable.
pub struct ModularData {
    level: Level,
    qfact: Vec<CycNumber>,
    qfact_inv: Vec<CycNumber>,
    qdims: Vec<CycNumber>,
    global_dim: CycNumber,
    global_dim_inv: CycNumber,
    twists: Vec<CycNumber>,
    delta_l: CycNumber,
    delta_r: CycNumber,
    thetas: Vec<Option<CycNumber>>,
    theta_invs: Vec<Option<CycNumber>>,
    tet_index: Vec<u32>,
    tet_values: Vec<CycNumber>,
}

const NO_ENTRY: u32 = u32::MAX;

impl ModularData {
    pub fn new(level: Level) -> ModularData {
        let order = level.order();
        let r = level.r() as i64;
        let k = level.num_colors();

        // [n]! for n < r; [n]! = 0 for n ≥ r since [r] = 0
        let mut qfact = vec![CycNumber::one(order)];
        for n in 1..r {
            let next = &qfact[(n - 1) as usize] * &quantum_integer(n, level);
            qfact.push(next);
        }
        let qfact_inv: Vec<CycNumber> = qfact
            .iter()
            .map(|x| x.inverse().expect("[n]! is nonzero below r"))
            .collect();

        let qdims: Vec<CycNumber> = level
            .colors()
            .map(|c| {
                let v = quantum_integer(c as i64 + 1, level);
                if c % 2 == 1 {
                    -v
                } else {
                    v
                }
            })
            .collect();
        let mut global_dim = CycNumber::zero(order);
        for d in &qdims {
            global_dim += &(d * d);
        }
        let global_dim_inv = global_dim.inverse().expect("global dimension is nonzero");

        let twists: Vec<CycNumber> = level
            .colors()
            .map(|c| {
                let c = c as i64;
                let t = CycNumber::zeta_pow(order, c * (c + 2));
                if c % 2 == 1 {
                    -t
                } else {
                    t
                }
            })
            .collect();
        let mut delta_l = CycNumber::zero(order);
        for (t, d) in twists.iter().zip(&qdims) {
            delta_l += &(&(t * d) * d);
        }
        let delta_r = delta_l.conjugate();

        let mut md = ModularData {
            level,
            qfact,
            qfact_inv,
            qdims,
            global_dim,
            global_dim_inv,
            twists,
            delta_l,
            delta_r,
            thetas: vec![None; k * k * k],
            theta_invs: vec![None; k * k * k],
            tet_index: vec![NO_ENTRY; k.pow(6)],
            tet_values: Vec::new(),
        };
        md.build_thetas();
        md.build_tets();
        md
    }

    fn build_thetas(&mut self) {
        let level = self.level;
        for a in level.colors() {
            for b in level.colors() {
                for c in level.colors() {
                    if !admissible(a, b, c, level) {
                        continue;
                    }
                    let v = self.theta_value(a, b, c);
                    let idx = self.idx3(a, b, c);
                    self.theta_invs[idx] = Some(v.inverse().expect("theta is nonzero"));
                    self.thetas[idx] = Some(v);
                }
            }
        }
    }

    fn theta_value(&self, a: Color, b: Color, c: Color) -> CycNumber {
        let (a, b, c) = (a as usize, b as usize, c as usize);
        let m = (a + b - c) / 2;
        let n = (b + c - a) / 2;
        let p = (a + c - b) / 2;
        let mut v = &self.qfact[m + n + p + 1] * &self.qfact[m];
        v *= &self.qfact[n];
        v *= &self.qfact[p];
        v *= &self.qfact_inv[m + n];
        v *= &self.qfact_inv[n + p];
        v *= &self.qfact_inv[m + p];
        if (m + n + p) % 2 == 1 {
            -v
        } else {
            v
        }
    }

    fn build_tets(&mut self) {
        let level = self.level;
        let actions = tetrahedral_slot_actions();
        let cols: Vec<Color> = level.colors().collect();
        for &a in &cols {
            for &b in &cols {
                for &e in &cols {
                    if !admissible(a, b, e, level) {
                        continue;
                    }
                    for &c in &cols {
                        for &d in &cols {
                            if !admissible(c, d, e, level) {
                                continue;
                            }
                            for &f in &cols {
                                let slots = [a, b, e, c, d, f];
                                if !admissible(a, d, f, level) || !admissible(b, c, f, level) {
                                    continue;
                                }
                                let idx = self.idx6(&slots);
                                if self.tet_index[idx] != NO_ENTRY {
                                    continue;
                                }
                                let value = self.tet_value(&slots);
                                let pos = self.tet_values.len() as u32;
                                self.tet_values.push(value);
                                for act in &actions {
                                    let mut img = [0 as Color; 6];
                                    for i in 0..6 {
                                        img[act[i]] = slots[i];
                                    }
                                    let j = self.idx6(&img);
                                    self.tet_index[j] = pos;
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    /// Kauffman–Lins tetrahedron evaluation in 6j slot order.
    fn tet_value(&self, s: &[Color; 6]) -> CycNumber {
        let [a, b, e, c, d, f] = s.map(|x| x as usize);
        let lower = [
            (a + b + e) / 2,
            (c + d + e) / 2,
            (a + d + f) / 2,
            (b + c + f) / 2,
        ];
        let upper = [(b + d + e + f) / 2, (a + c + e + f) / 2, (a + b + c + d) / 2];
        let order = self.level.order();
        let r = self.level.r() as usize;

        let mut prefactor = CycNumber::one(order);
        for &lo in &lower {
            for &hi in &upper {
                prefactor *= &self.qfact[hi - lo];
            }
        }
        for x in [a, b, c, d, e, f] {
            prefactor *= &self.qfact_inv[x];
        }

        let smin = *lower.iter().max().unwrap();
        let smax = *upper.iter().min().unwrap();
        let mut sum = CycNumber::zero(order);
        for s in smin..=smax {
            if s + 1 >= r {
                break;
            }
            let mut term = self.qfact[s + 1].clone();
            for &lo in &lower {
                term *= &self.qfact_inv[s - lo];
            }
            for &hi in &upper {
                term *= &self.qfact_inv[hi - s];
            }
            if s % 2 == 1 {
                sum -= &term;
            } else {
                sum += &term;
            }
        }
        &prefactor * &sum
    }

    fn idx3(&self, a: Color, b: Color, c: Color) -> usize {
        let k = self.level.num_colors();
        (a as usize * k + b as usize) * k + c as usize
    }

    fn idx6(&self, s: &[Color; 6]) -> usize {
        let k = self.level.num_colors();
        s.iter().fold(0usize, |acc, &x| acc * k + x as usize)
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn order(&self) -> u32 {
        self.level.order()
    }

    pub fn colors(&self) -> impl Iterator<Item = Color> + Clone {
        self.level.colors()
    }

    pub fn num_colors(&self) -> usize {
        self.level.num_colors()
    }

    pub fn admissible(&self, a: Color, b: Color, c: Color) -> bool {
        admissible(a, b, c, self.level)
    }

    pub fn quantum_integer(&self, n: i64) -> CycNumber {
        quantum_integer(n, self.level)
    }

    /// ω_c² = (−1)^c [c+1].
    pub fn qdim(&self, c: Color) -> &CycNumber {
        &self.qdims[c as usize]
    }

    /// ω² = Σ_c ω_c⁴.
    pub fn global_dim(&self) -> &CycNumber {
        &self.global_dim
    }

    pub fn global_dim_inv(&self) -> &CycNumber {
        &self.global_dim_inv
    }

    /// Ribbon twist θ_c = (−1)^c A^{c(c+2)}.
    pub fn twist(&self, c: Color) -> &CycNumber {
        &self.twists[c as usize]
    }

    /// (Δ_L, Δ_R) with Δ_L = Σ_c θ_c ω_c⁴ and Δ_R its conjugate.
    pub fn anomaly_constants(&self) -> (&CycNumber, &CycNumber) {
        (&self.delta_l, &self.delta_r)
    }

    pub fn delta_l(&self) -> &CycNumber {
        &self.delta_l
    }

    pub fn delta_r(&self) -> &CycNumber {
        &self.delta_r
    }

    /// Θ(a,b,c), or `None` when the triple is not admissible.
    pub fn theta(&self, a: Color, b: Color, c: Color) -> Option<&CycNumber> {
        if !self.in_range(&[a, b, c]) {
            return None;
        }
        self.thetas[self.idx3(a, b, c)].as_ref()
    }

    pub fn theta_inv(&self, a: Color, b: Color, c: Color) -> Option<&CycNumber> {
        if !self.in_range(&[a, b, c]) {
            return None;
        }
        self.theta_invs[self.idx3(a, b, c)].as_ref()
    }

    fn in_range(&self, xs: &[Color]) -> bool {
        xs.iter().all(|&x| (x as usize) < self.num_colors())
    }

    /// Tetrahedron evaluation in slot order (a,b,e,c,d,f); `None` unless all
    /// four faces are admissible.
    pub fn tet(&self, a: Color, b: Color, e: Color, c: Color, d: Color, f: Color) -> Option<&CycNumber> {
        self.tet_slots(&[a, b, e, c, d, f])
    }

    pub fn tet_slots(&self, s: &[Color; 6]) -> Option<&CycNumber> {
        if !self.in_range(s) {
            return None;
        }
        match self.tet_index[self.idx6(s)] {
            NO_ENTRY => None,
            i => Some(&self.tet_values[i as usize]),
        }
    }

    /// Fresh evaluation bypassing the symmetry-filled table; `None` unless all
    /// four faces are admissible.
    pub fn tet_uncached(&self, s: &[Color; 6]) -> Option<CycNumber> {
        let faces_ok = SIXJ_FACES.iter().all(|&[i, j, k]| self.admissible(s[i], s[j], s[k]));
        (self.in_range(s) && faces_ok).then(|| self.tet_value(s))
    }

    /// Number of admissible 6-tuples stored in the table.
    pub fn admissible_sixj_count(&self) -> usize {
        self.tet_index.iter().filter(|&&i| i != NO_ENTRY).count()
    }

    /// The symmetric 6j-symbol; exact zero when any face is inadmissible.
    pub fn six_j(&self, a: Color, b: Color, e: Color, c: Color, d: Color, f: Color) -> SixJ {
        let s = [a, b, e, c, d, f];
        let order = self.order();
        match self.tet_slots(&s) {
            None => SixJ {
                tet: CycNumber::zero(order),
                face_thetas: std::array::from_fn(|_| CycNumber::one(order)),
            },
            Some(t) => SixJ {
                tet: t.clone(),
                face_thetas: SIXJ_FACES.map(|[i, j, k]| {
                    self.theta(s[i], s[j], s[k]).expect("admissible face").clone()
                }),
            },
        }
    }

    pub fn fusion(&self, a: Color, b: Color, c: Color) -> u32 {
        u32::from(self.admissible(a, b, c))
    }

    /// (N^a)_{bc} = 1 iff (a,b,c) is admissible.
    pub fn fusion_matrix(&self, a: Color) -> Vec<Vec<u32>> {
        self.colors()
            .map(|b| self.colors().map(|c| self.fusion(a, b, c)).collect())
            .collect()
    }

    /// tr((Σ_a (N^a)²)^{g−1}): the dimension of one handlebody factor.
    pub fn handlebody_dim(&self, genus: u32) -> Result<u128> {
        if genus < 1 {
            return Err(Error::Domain(format!("genus must be >= 1, got {genus}")));
        }
        let k = self.num_colors();
        let mut nbar = vec![vec![0u128; k]; k];
        for a in self.colors() {
            let n = self.fusion_matrix(a);
            for i in 0..k {
                for j in 0..k {
                    nbar[i][j] += (0..k).map(|m| (n[i][m] * n[m][j]) as u128).sum::<u128>();
                }
            }
        }
        let mut acc: Vec<Vec<u128>> = (0..k)
            .map(|i| (0..k).map(|j| u128::from(i == j)).collect())
            .collect();
        for _ in 1..genus {
            acc = mat_mul(&acc, &nbar)?;
        }
        Ok((0..k).map(|i| acc[i][i]).sum())
    }

    /// dim V_{Σ_g} = (tr N̄^{2(g−1)})².
    pub fn verlinde_dim(&self, genus: u32) -> Result<u128> {
        let h = self.handlebody_dim(genus)?;
        h.checked_mul(h)
            .ok_or_else(|| Error::Domain(format!("Verlinde dimension overflows at genus {genus}")))
    }
}

fn mat_mul(x: &[Vec<u128>], y: &[Vec<u128>]) -> Result<Vec<Vec<u128>>> {
    let k = x.len();
    let mut out = vec![vec![0u128; k]; k];
    for i in 0..k {
        for j in 0..k {
            let mut s = 0u128;
            for m in 0..k {
                s = x[i][m]
                    .checked_mul(y[m][j])
                    .and_then(|p| s.checked_add(p))
                    .ok_or_else(|| Error::Domain("fusion trace overflow".into()))?;
            }
            out[i][j] = s;
        }
    }
    Ok(out)
}
