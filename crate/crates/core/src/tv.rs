//! Turaev-Viro state sums.
//!
//! Z(M) = ω^{−2V} Σ_colorings ∏_edges ω_e² ∏_tets 6j(t). Every face lies on
//! exactly two tetrahedra, so the product of symmetric 6j-symbols equals
//! ∏_tets Tet(t) · ∏_faces Θ(f)⁻¹, which is what all methods evaluate.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::modular::{Color, ModularData, SixJ};
use crate::triangulation::{Skeleton, Triangulation, SIXJ_EDGE_SLOTS};

pub const DEFAULT_CEILING: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Every assignment of colors to edges.
    Brute,
    /// Depth-first search with admissibility pruning.
    Pruned,
    /// Variable elimination over sparse tetrahedron factors.
    Contract,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Brute => "brute",
            Method::Pruned => "pruned",
            Method::Contract => "contract",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Method> {
        match s {
            "brute" => Ok(Method::Brute),
            "pruned" => Ok(Method::Pruned),
            "contract" => Ok(Method::Contract),
            _ => Err(Error::Parse(format!("unknown method {s:?} (brute, pruned, contract)"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TvOptions {
    pub method: Method,
    /// Worker count; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Maximum colorings visited (brute, pruned) or table entries (contract).
    pub ceiling: u64,
}

impl Default for TvOptions {
    fn default() -> Self {
        TvOptions { method: Method::Pruned, threads: None, ceiling: DEFAULT_CEILING }
    }
}

impl TvOptions {
    pub fn with_method(method: Method) -> TvOptions {
        TvOptions { method, ..TvOptions::default() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StateSumResult {
    pub level: u32,
    pub method: Method,
    pub value: CycNumber,
    #[serde(serialize_with = "crate::report::complex")]
    pub numeric: Complex64,
    /// (r−1)^E, saturating.
    pub colorings_total: u128,
    pub colorings_admissible: u128,
    pub tetrahedra: usize,
    pub edges: usize,
    pub vertices: usize,
    #[serde(skip)]
    pub wall_time: Duration,
}

/// The symmetric 6j-symbol of a tetrahedron whose edge slots (01),(02),(03),
/// (12),(13),(23) carry `colors`.
pub fn tetra_weight(md: &ModularData, colors: &[Color; 6]) -> SixJ {
    let s = SIXJ_EDGE_SLOTS.map(|i| colors[i]);
    md.six_j(s[0], s[1], s[2], s[3], s[4], s[5])
}

/// Edge-class incidence data the engines work from.
struct Layout {
    edges: usize,
    vertices: usize,
    /// Edge classes of each tetrahedron in 6j slot order.
    tets: Vec<[usize; 6]>,
    faces: Vec<[usize; 3]>,
    face_owner: Vec<usize>,
    edge_owner: Vec<usize>,
}

impl Layout {
    fn new(sk: &Skeleton) -> Layout {
        Layout {
            edges: sk.edges.len(),
            vertices: sk.vertices.len(),
            tets: sk.tet_edges.iter().map(|e| SIXJ_EDGE_SLOTS.map(|i| e[i])).collect(),
            faces: sk.faces.iter().map(|f| f.edges).collect(),
            face_owner: sk.faces.iter().map(|f| f.tet).collect(),
            edge_owner: sk.edges.iter().map(|e| e.incidences[0].0).collect(),
        }
    }

    fn total_colorings(&self, k: usize) -> u128 {
        (0..self.edges).try_fold(1u128, |acc, _| acc.checked_mul(k as u128)).unwrap_or(u128::MAX)
    }
}

/// Exact weight of one full coloring, or `None` when inadmissible.
fn coloring_weight(md: &ModularData, lay: &Layout, col: &[Color]) -> Option<CycNumber> {
    let mut w = CycNumber::one(md.order());
    for f in &lay.faces {
        w *= md.theta_inv(col[f[0]], col[f[1]], col[f[2]])?;
    }
    for t in &lay.tets {
        w *= md.tet_slots(&t.map(|e| col[e]))?;
    }
    for &c in col {
        w *= md.qdim(c);
    }
    Some(w)
}

pub fn tv_state_sum(t: &Triangulation, md: &ModularData, opts: &TvOptions) -> Result<StateSumResult> {
    t.validate()?;
    let start = Instant::now();
    let sk = t.skeleton()?;
    let lay = Layout::new(&sk);
    let k = md.num_colors();
    let total = lay.total_colorings(k);
    let count = |tet: usize, col: &[Color]| md.tet_slots(&lay.tets[tet].map(|e| col[e])).map(|_| 1u128);
    let run = || -> Result<(CycNumber, u128)> {
        match opts.method {
            Method::Brute => brute(md, &lay, total, opts.ceiling),
            Method::Pruned => {
                let admissible = contract(&lay, md, opts.ceiling, &count)?;
                if admissible > opts.ceiling as u128 {
                    return Err(Error::ResourceLimit {
                        what: "pruned state sum",
                        estimate: admissible as f64,
                        ceiling: opts.ceiling,
                    });
                }
                Ok((pruned(md, &lay), admissible))
            }
            Method::Contract => {
                let admissible = contract(&lay, md, opts.ceiling, &count)?;
                let value = contract(&lay, md, opts.ceiling, &|tet, col| exact_factor(md, &lay, tet, col))?;
                Ok((value, admissible))
            }
        }
    };
    let (sum, admissible) = match opts.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    let value = &sum * &md.global_dim_inv().pow(lay.vertices as i64)?;
    Ok(StateSumResult {
        level: md.level().r(),
        method: opts.method,
        numeric: value.to_complex(),
        value,
        colorings_total: total,
        colorings_admissible: admissible,
        tetrahedra: t.tet_count(),
        edges: lay.edges,
        vertices: lay.vertices,
        wall_time: start.elapsed(),
    })
}

fn brute(md: &ModularData, lay: &Layout, total: u128, ceiling: u64) -> Result<(CycNumber, u128)> {
    if total > ceiling as u128 {
        return Err(Error::ResourceLimit {
            what: "brute-force state sum",
            estimate: total as f64,
            ceiling,
        });
    }
    let k = md.num_colors();
    let e = lay.edges;
    let total = total as u64;
    const CHUNK: u64 = 4096;
    let chunks = total.div_ceil(CHUNK);
    let (sum, count) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut col = vec![0 as Color; e];
            let mut idx = c * CHUNK;
            for slot in col.iter_mut().rev() {
                *slot = (idx % k as u64) as Color;
                idx /= k as u64;
            }
            let mut acc = CycNumber::zero(md.order());
            let mut count = 0u128;
            for _ in c * CHUNK..((c + 1) * CHUNK).min(total) {
                if let Some(w) = coloring_weight(md, lay, &col) {
                    acc += &w;
                    count += 1;
                }
                for slot in col.iter_mut().rev() {
                    *slot += 1;
                    if (*slot as usize) < k {
                        break;
                    }
                    *slot = 0;
                }
            }
            (acc, count)
        })
        .reduce(|| (CycNumber::zero(md.order()), 0), |a, b| (&a.0 + &b.0, a.1 + b.1));
    Ok((sum, count))
}

/// Per-depth bookkeeping for the depth-first search.
struct Plan {
    order: Vec<usize>,
    /// Faces and tetrahedra whose last edge is assigned at each depth.
    faces_at: Vec<Vec<usize>>,
    tets_at: Vec<Vec<usize>>,
}

impl Plan {
    /// Greedy edge order: next edge completes the most faces, ties broken
    /// by the number of touched faces already partially colored.
    fn new(lay: &Layout) -> Plan {
        let mut assigned = vec![false; lay.edges];
        let mut order = Vec::with_capacity(lay.edges);
        let face_edges: Vec<Vec<usize>> = lay.faces.iter().map(|f| f.to_vec()).collect();
        for _ in 0..lay.edges {
            let score = |e: usize| -> (usize, usize, usize) {
                let mut done = 0;
                let mut touch = 0;
                for f in &face_edges {
                    if f.contains(&e) {
                        if f.iter().all(|&x| x == e || assigned[x]) {
                            done += 1;
                        }
                        if f.iter().any(|&x| x != e && assigned[x]) {
                            touch += 1;
                        }
                    }
                }
                (done, touch, usize::MAX - e)
            };
            let e = (0..lay.edges).filter(|&e| !assigned[e]).max_by_key(|&e| score(e)).unwrap();
            assigned[e] = true;
            order.push(e);
        }
        let mut depth_of = vec![0; lay.edges];
        for (d, &e) in order.iter().enumerate() {
            depth_of[e] = d;
        }
        let mut faces_at = vec![Vec::new(); lay.edges];
        for (i, f) in lay.faces.iter().enumerate() {
            faces_at[f.iter().map(|&e| depth_of[e]).max().unwrap()].push(i);
        }
        let mut tets_at = vec![Vec::new(); lay.edges];
        for (i, t) in lay.tets.iter().enumerate() {
            tets_at[t.iter().map(|&e| depth_of[e]).max().unwrap()].push(i);
        }
        Plan { order, faces_at, tets_at }
    }
}

fn pruned(md: &ModularData, lay: &Layout) -> CycNumber {
    let plan = Plan::new(lay);
    let k = md.num_colors();
    // split the first levels across workers
    let mut split = 0;
    let mut width = 1usize;
    while split < lay.edges && width < 64 * rayon::current_num_threads() {
        width *= k;
        split += 1;
    }
    let mut prefixes = Vec::new();
    let mut col = vec![0 as Color; lay.edges];
    collect_prefixes(md, lay, &plan, 0, split, &mut col, CycNumber::one(md.order()), &mut prefixes);
    let visits = AtomicU64::new(0);
    prefixes
        .into_par_iter()
        .map(|(mut col, w)| {
            let mut acc = CycNumber::zero(md.order());
            descend(md, lay, &plan, split, &mut col, &w, &mut acc, &visits);
            acc
        })
        .reduce(|| CycNumber::zero(md.order()), |a, b| &a + &b)
}

/// Extends the partial weight after assigning `plan.order[depth]`, or `None`
/// when a completed face is inadmissible.
fn step(md: &ModularData, lay: &Layout, plan: &Plan, depth: usize, col: &[Color], w: &CycNumber) -> Option<CycNumber> {
    let e = plan.order[depth];
    let mut factors: Vec<&CycNumber> = Vec::new();
    for &f in &plan.faces_at[depth] {
        let [a, b, c] = lay.faces[f];
        factors.push(md.theta_inv(col[a], col[b], col[c])?);
    }
    for &t in &plan.tets_at[depth] {
        factors.push(md.tet_slots(&lay.tets[t].map(|x| col[x]))?);
    }
    let mut out = w * md.qdim(col[e]);
    for f in factors {
        out *= f;
    }
    Some(out)
}

#[allow(clippy::too_many_arguments)]
fn collect_prefixes(
    md: &ModularData,
    lay: &Layout,
    plan: &Plan,
    depth: usize,
    split: usize,
    col: &mut Vec<Color>,
    w: CycNumber,
    out: &mut Vec<(Vec<Color>, CycNumber)>,
) {
    if depth == split {
        out.push((col.clone(), w));
        return;
    }
    for c in md.colors() {
        col[plan.order[depth]] = c;
        if let Some(next) = step(md, lay, plan, depth, col, &w) {
            collect_prefixes(md, lay, plan, depth + 1, split, col, next, out);
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn descend(
    md: &ModularData,
    lay: &Layout,
    plan: &Plan,
    depth: usize,
    col: &mut [Color],
    w: &CycNumber,
    acc: &mut CycNumber,
    visits: &AtomicU64,
) {
    if depth == lay.edges {
        visits.fetch_add(1, Ordering::Relaxed);
        *acc += w;
        return;
    }
    for c in md.colors() {
        col[plan.order[depth]] = c;
        if let Some(next) = step(md, lay, plan, depth, col, w) {
            descend(md, lay, plan, depth + 1, col, &next, acc, visits);
        }
    }
}

/// A commutative semiring value for the contraction engine.
pub trait Weight: Clone + Send + Sync {
    fn zero_like(&self) -> Self;
    fn add_to(&mut self, other: &Self);
    fn times(&self, other: &Self) -> Self;
}

impl Weight for CycNumber {
    fn zero_like(&self) -> Self {
        CycNumber::zero(self.order())
    }
    fn add_to(&mut self, other: &Self) {
        *self += other;
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

impl Weight for u128 {
    fn zero_like(&self) -> Self {
        0
    }
    fn add_to(&mut self, other: &Self) {
        *self += *other;
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

/// Tet times the inverse thetas of owned faces and the dimensions of owned edges.
fn exact_factor(md: &ModularData, lay: &Layout, tet: usize, col: &[Color]) -> Option<CycNumber> {
    let mut w = md.tet_slots(&lay.tets[tet].map(|e| col[e]))?.clone();
    for (f, face) in lay.faces.iter().enumerate() {
        if lay.face_owner[f] == tet {
            w *= md.theta_inv(col[face[0]], col[face[1]], col[face[2]])?;
        }
    }
    for (e, &owner) in lay.edge_owner.iter().enumerate() {
        if owner == tet {
            w *= md.qdim(col[e]);
        }
    }
    Some(w)
}

/// Sparse factor over a sorted variable scope, keyed by packed colors.
struct Factor<W> {
    scope: Vec<usize>,
    table: HashMap<u128, W>,
}

struct Packing {
    bits: u32,
    mask: u128,
}

impl Packing {
    fn key(&self, scope: &[usize], col: &[Color]) -> u128 {
        scope.iter().fold(0u128, |acc, &v| (acc << self.bits) | col[v] as u128)
    }

    fn unpack(&self, scope: &[usize], mut key: u128, col: &mut [Color]) {
        for &v in scope.iter().rev() {
            col[v] = (key & self.mask) as Color;
            key >>= self.bits;
        }
    }
}

/// Sums ∏_tets local(tet, coloring) over all colorings by eliminating edge
/// variables one at a time in greedy min-scope order.
fn contract<W: Weight>(
    lay: &Layout,
    md: &ModularData,
    ceiling: u64,
    local: &(dyn Fn(usize, &[Color]) -> Option<W> + Sync),
) -> Result<W> {
    let k = md.num_colors();
    let bits = (usize::BITS - (k - 1).max(1).leading_zeros()).max(1);
    let pack = Packing { bits, mask: (1u128 << bits) - 1 };
    let max_scope = (128 / bits) as usize;

    let mut factors: Vec<Factor<W>> = (0..lay.tets.len())
        .into_par_iter()
        .map(|t| {
            let mut scope: Vec<usize> = lay.tets[t].to_vec();
            scope.sort_unstable();
            scope.dedup();
            let mut table = HashMap::new();
            let mut col = vec![0 as Color; lay.edges];
            let n = scope.len();
            let mut digits = vec![0usize; n];
            loop {
                for (i, &v) in scope.iter().enumerate() {
                    col[v] = digits[i] as Color;
                }
                if let Some(w) = local(t, &col) {
                    table.insert(pack.key(&scope, &col), w);
                }
                let mut i = n;
                loop {
                    if i == 0 {
                        return Factor { scope, table };
                    }
                    i -= 1;
                    digits[i] += 1;
                    if digits[i] < k {
                        break;
                    }
                    digits[i] = 0;
                }
            }
        })
        .collect();
    // the all-zero coloring is admissible everywhere, so no table is empty
    let zero = factors[0].table[&0].zero_like();

    let mut remaining: Vec<usize> = (0..lay.edges).collect();
    while !remaining.is_empty() {
        let (pos, scope) = remaining
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let mut s: Vec<usize> = factors
                    .iter()
                    .filter(|f| f.scope.contains(&v))
                    .flat_map(|f| f.scope.iter().copied())
                    .collect();
                s.sort_unstable();
                s.dedup();
                (i, s)
            })
            .min_by_key(|(i, s)| (s.len(), *i))
            .unwrap();
        let var = remaining.swap_remove(pos);
        if scope.len() > max_scope {
            return Err(Error::ResourceLimit {
                what: "contraction",
                estimate: (k as f64).powi(scope.len() as i32),
                ceiling,
            });
        }
        let (touching, rest): (Vec<_>, Vec<_>) = factors.into_iter().partition(|f| f.scope.contains(&var));
        factors = rest;
        let joined = touching
            .into_iter()
            .reduce(|a, b| join(&pack, lay.edges, a, b))
            .expect("every edge lies in a tetrahedron");
        if joined.table.len() as u64 > ceiling {
            return Err(Error::ResourceLimit {
                what: "contraction",
                estimate: joined.table.len() as f64,
                ceiling,
            });
        }
        factors.push(sum_out(&pack, lay.edges, joined, var, &zero));
    }
    let mut acc: Option<W> = None;
    for f in factors {
        let v = f.table.get(&0).cloned().unwrap_or_else(|| zero.clone());
        acc = Some(match acc {
            None => v,
            Some(a) => a.times(&v),
        });
    }
    Ok(acc.unwrap_or(zero))
}

fn join<W: Weight>(pack: &Packing, n: usize, a: Factor<W>, b: Factor<W>) -> Factor<W> {
    let (a, b) = if a.table.len() >= b.table.len() { (a, b) } else { (b, a) };
    let shared: Vec<usize> = a.scope.iter().copied().filter(|v| b.scope.contains(v)).collect();
    let mut scope: Vec<usize> = a.scope.iter().chain(&b.scope).copied().collect();
    scope.sort_unstable();
    scope.dedup();
    let mut col = vec![0 as Color; n];
    let mut index: HashMap<u128, Vec<(u128, &W)>> = HashMap::new();
    for (&kb, wb) in &b.table {
        pack.unpack(&b.scope, kb, &mut col);
        index.entry(pack.key(&shared, &col)).or_default().push((kb, wb));
    }
    let mut table = HashMap::with_capacity(a.table.len());
    for (&ka, wa) in &a.table {
        pack.unpack(&a.scope, ka, &mut col);
        let Some(matches) = index.get(&pack.key(&shared, &col)) else { continue };
        for &(kb, wb) in matches {
            pack.unpack(&b.scope, kb, &mut col);
            table.insert(pack.key(&scope, &col), wa.times(wb));
        }
    }
    Factor { scope, table }
}

fn sum_out<W: Weight>(pack: &Packing, n: usize, f: Factor<W>, var: usize, zero: &W) -> Factor<W> {
    let scope: Vec<usize> = f.scope.iter().copied().filter(|&v| v != var).collect();
    let mut col = vec![0 as Color; n];
    let mut table: HashMap<u128, W> = HashMap::new();
    for (k, w) in f.table {
        pack.unpack(&f.scope, k, &mut col);
        table.entry(pack.key(&scope, &col)).or_insert_with(|| zero.clone()).add_to(&w);
    }
    Factor { scope, table }
}

/// Both sides of Z(M₁#M₂)·Z(S³) = Z(M₁)·Z(M₂).
#[derive(Clone, Debug, Serialize)]
pub struct ConnectedSumReport {
    pub level: u32,
    pub z1: CycNumber,
    pub z2: CycNumber,
    pub z12: CycNumber,
    pub z_s3: CycNumber,
    pub lhs: CycNumber,
    pub rhs: CycNumber,
    pub holds: bool,
}

pub fn connected_sum_check(
    t1: &Triangulation,
    t2: &Triangulation,
    t12: &Triangulation,
    md: &ModularData,
    opts: &TvOptions,
) -> Result<ConnectedSumReport> {
    let z = |t: &Triangulation| tv_state_sum(t, md, opts).map(|r| r.value);
    let (z1, z2, z12) = (z(t1)?, z(t2)?, z(t12)?);
    let z_s3 = z(&crate::triangulation::census()["S3_2tet"])?;
    let lhs = &z12 * &z_s3;
    let rhs = &z1 * &z2;
    Ok(ConnectedSumReport {
        level: md.level().r(),
        holds: lhs == rhs,
        z1,
        z2,
        z12,
        z_s3,
        lhs,
        rhs,
    })
}
