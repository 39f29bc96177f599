//! Framed links as planar diagram codes.
//!
//! A crossing `[a, b, c, d]` lists its four arc labels counterclockwise
//! starting from the incoming under-strand: the under-strand runs a → c and the
//! over-strand joins b and d. The crossing is positive when the over-strand
//! runs d → b.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::smith::AbelianGroup;

pub const LNK_FORMAT: &str = "lnk-v1";

pub type Arc = u32;

/// One traced link component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Arcs in orientation order; empty for a crossingless unknot.
    pub arcs: Vec<Arc>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FramedLink {
    pd: Vec<[Arc; 4]>,
    framings: Vec<i64>,
    components: Vec<Component>,
    /// Component index of every arc.
    arc_component: BTreeMap<Arc, usize>,
    /// Slot (1 or 3) where the over-strand enters each crossing.
    over_in: Vec<u8>,
    unknotted: Vec<usize>,
}

/// Linking matrix with framings on the diagonal and its signature.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkingData {
    pub linking_matrix: Vec<Vec<i64>>,
    pub signature: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LnkFile {
    format: String,
    components: usize,
    pd: Vec<Vec<Arc>>,
    framings: Vec<i64>,
    #[serde(default)]
    unknotted_components: Vec<usize>,
}

impl FramedLink {
    /// Validates a diagram. Diagram components are numbered by their smallest
    /// arc label and fill the indices not listed in `unknotted`.
    pub fn new(pd: Vec<[Arc; 4]>, framings: Vec<i64>, unknotted: Vec<usize>) -> Result<FramedLink> {
        let mut occ: BTreeMap<Arc, Vec<(usize, u8)>> = BTreeMap::new();
        for (i, x) in pd.iter().enumerate() {
            for (s, &a) in x.iter().enumerate() {
                occ.entry(a).or_default().push((i, s as u8));
            }
        }
        for (a, o) in &occ {
            if o.len() != 2 {
                return Err(Error::InvalidLink(format!(
                    "arc {a} appears {} time(s), expected exactly 2",
                    o.len()
                )));
            }
        }
        let other = |a: Arc, at: (usize, u8)| -> (usize, u8) {
            let o = &occ[&a];
            if o[0] == at {
                o[1]
            } else {
                o[0]
            }
        };

        let mut over_in = vec![0u8; pd.len()];
        let mut arc_comp: BTreeMap<Arc, usize> = BTreeMap::new();
        let mut traced: Vec<Vec<Arc>> = Vec::new();
        // heads at slot 0 fix orientations; over-only components get the
        // orientation in which their smallest arc ends at its first occurrence
        let mut starts: Vec<(Arc, (usize, u8))> = Vec::new();
        for (&a, o) in &occ {
            if let Some(&h) = o.iter().find(|p| p.1 == 0) {
                starts.push((a, h));
            }
        }
        for (&a, o) in &occ {
            starts.push((a, o[0]));
        }
        for (start, head) in starts {
            if arc_comp.contains_key(&start) {
                continue;
            }
            let id = traced.len();
            let mut arcs = Vec::new();
            let (mut arc, mut head) = (start, head);
            loop {
                if let Some(&c) = arc_comp.get(&arc) {
                    if c != id || arc != start {
                        return Err(Error::InvalidLink(format!(
                            "arc {arc} is traversed twice; orientations are inconsistent"
                        )));
                    }
                    break;
                }
                arc_comp.insert(arc, id);
                arcs.push(arc);
                let (x, slot) = head;
                match slot {
                    2 => {
                        return Err(Error::InvalidLink(format!(
                            "arc {arc} enters crossing {x} at the outgoing under slot"
                        )))
                    }
                    1 | 3 => {
                        if over_in[x] != 0 && over_in[x] != slot {
                            return Err(Error::InvalidLink(format!(
                                "over-strand of crossing {x} is traversed in both directions"
                            )));
                        }
                        over_in[x] = slot;
                    }
                    _ => {}
                }
                let exit = (slot + 2) % 4;
                let next = pd[x][exit as usize];
                head = other(next, (x, exit));
                arc = next;
            }
            traced.push(arcs);
        }
        if over_in.contains(&0) {
            return Err(Error::InvalidLink("a crossing has an untraced over-strand".into()));
        }

        // order diagram components by smallest arc
        let mut order: Vec<usize> = (0..traced.len()).collect();
        order.sort_by_key(|&i| traced[i].iter().min().copied());
        let total = traced.len() + unknotted.len();
        if framings.len() != total {
            return Err(Error::InvalidLink(format!(
                "{} framings given for {total} components ({} in the diagram, {} unknotted)",
                framings.len(),
                traced.len(),
                unknotted.len()
            )));
        }
        let unk: BTreeSet<usize> = unknotted.iter().copied().collect();
        if unk.len() != unknotted.len() || unk.iter().any(|&i| i >= total) {
            return Err(Error::InvalidLink(format!(
                "unknotted component indices {unknotted:?} must be distinct and below {total}"
            )));
        }
        let slots: Vec<usize> = (0..total).filter(|i| !unk.contains(i)).collect();
        let mut components = vec![Component { arcs: Vec::new() }; total];
        let mut remap = vec![0usize; traced.len()];
        for (k, &i) in order.iter().enumerate() {
            remap[i] = slots[k];
            components[slots[k]] = Component { arcs: traced[i].clone() };
        }
        let arc_component = arc_comp.into_iter().map(|(a, c)| (a, remap[c])).collect();
        Ok(FramedLink {
            pd,
            framings,
            components,
            arc_component,
            over_in,
            unknotted: unk.into_iter().collect(),
        })
    }

    /// The empty link (surgery presentation of S³).
    pub fn empty() -> FramedLink {
        FramedLink::new(Vec::new(), Vec::new(), Vec::new()).expect("empty link")
    }

    /// Crossingless unknots with the given framings.
    pub fn unknots(framings: &[i64]) -> FramedLink {
        FramedLink::new(Vec::new(), framings.to_vec(), (0..framings.len()).collect())
            .expect("unknots")
    }

    /// The positive two-crossing Hopf link.
    pub fn hopf(f1: i64, f2: i64) -> FramedLink {
        FramedLink::new(vec![[2, 4, 3, 1], [4, 2, 1, 3]], vec![f1, f2], Vec::new()).expect("Hopf link")
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn pd(&self) -> &[[Arc; 4]] {
        &self.pd
    }

    pub fn framings(&self) -> &[i64] {
        &self.framings
    }

    pub fn unknotted_components(&self) -> &[usize] {
        &self.unknotted
    }

    pub fn arc_component(&self, a: Arc) -> usize {
        self.arc_component[&a]
    }

    /// Slot (1 or 3) where the over-strand of crossing `x` enters.
    pub fn over_in(&self, x: usize) -> u8 {
        self.over_in[x]
    }

    pub fn crossing_sign(&self, x: usize) -> i64 {
        if self.over_in[x] == 3 {
            1
        } else {
            -1
        }
    }

    /// Sum of signs of the self-crossings of each component.
    pub fn writhes(&self) -> Vec<i64> {
        let mut w = vec![0; self.component_count()];
        for (i, x) in self.pd.iter().enumerate() {
            let (u, o) = (self.arc_component(x[0]), self.arc_component(x[1]));
            if u == o {
                w[u] += self.crossing_sign(i);
            }
        }
        w
    }

    pub fn linking_data(&self) -> LinkingData {
        let n = self.component_count();
        let mut m = vec![vec![0i64; n]; n];
        for (i, x) in self.pd.iter().enumerate() {
            let (u, o) = (self.arc_component(x[0]), self.arc_component(x[1]));
            if u != o {
                m[u][o] += self.crossing_sign(i);
                m[o][u] += self.crossing_sign(i);
            }
        }
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                if i == j {
                    *v = self.framings[i];
                } else {
                    *v /= 2;
                }
            }
        }
        let signature = signature(&m);
        LinkingData { linking_matrix: m, signature }
    }

    /// H₁ of the surgered manifold: the cokernel of the linking matrix.
    pub fn homology_h1(&self) -> AbelianGroup {
        let m = self.linking_data().linking_matrix;
        AbelianGroup::cokernel(&m, m.len())
    }

    /// The link with an extra crossingless unknot of framing `f` appended.
    pub fn with_unknot(&self, f: i64) -> FramedLink {
        let mut framings = self.framings.clone();
        framings.push(f);
        let mut unk = self.unknotted.clone();
        unk.push(self.component_count());
        FramedLink::new(self.pd.clone(), framings, unk).expect("adding a split unknot")
    }

    pub fn to_lnk_json(&self) -> String {
        let pd: Vec<String> = self
            .pd
            .iter()
            .map(|x| format!("[{}, {}, {}, {}]", x[0], x[1], x[2], x[3]))
            .collect();
        let list = |v: &[String]| v.join(", ");
        format!(
            "{{\n  \"format\": \"{LNK_FORMAT}\",\n  \"components\": {},\n  \"pd\": [{}],\n  \"framings\": [{}],\n  \"unknotted_components\": [{}]\n}}\n",
            self.component_count(),
            list(&pd),
            list(&self.framings.iter().map(i64::to_string).collect::<Vec<_>>()),
            list(&self.unknotted.iter().map(usize::to_string).collect::<Vec<_>>()),
        )
    }
}

pub fn parse_link(text: &[u8]) -> Result<FramedLink> {
    let file: LnkFile =
        serde_json::from_slice(text).map_err(|e| Error::Parse(format!("malformed .lnk JSON: {e}")))?;
    if file.format != LNK_FORMAT {
        return Err(Error::Parse(format!(
            "unsupported format {:?}, expected {LNK_FORMAT:?}",
            file.format
        )));
    }
    let mut pd = Vec::with_capacity(file.pd.len());
    for (i, x) in file.pd.iter().enumerate() {
        let x: [Arc; 4] = x.as_slice().try_into().map_err(|_| {
            Error::Parse(format!("pd[{i}] has {} labels, expected 4", x.len()))
        })?;
        pd.push(x);
    }
    let link = FramedLink::new(pd, file.framings, file.unknotted_components)
        .map_err(|e| Error::Parse(e.to_string()))?;
    if link.component_count() != file.components {
        return Err(Error::Parse(format!(
            "\"components\" is {} but the diagram and unknotted list give {}",
            file.components,
            link.component_count()
        )));
    }
    Ok(link)
}

/// Signature of a symmetric integer matrix by exact congruence diagonalization.
pub fn signature(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let mut sig = 0;
    for i in 0..n {
        if a[i][i].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(i, j);
                for row in a.iter_mut() {
                    row.swap(i, j);
                }
            } else if let Some(j) = (i + 1..n).find(|&j| !a[i][j].is_zero()) {
                // e_i ← e_i + e_j makes the pivot 2·a_ij
                for k in 0..n {
                    let v = a[j][k].clone();
                    a[i][k] += v;
                }
                for k in 0..n {
                    let v = a[k][j].clone();
                    a[k][i] += v;
                }
            } else {
                continue;
            }
        }
        let p = a[i][i].clone();
        sig += if p.is_positive() { 1 } else { -1 };
        for j in i + 1..n {
            if a[j][i].is_zero() {
                continue;
            }
            let f = &a[j][i] / &p;
            for k in i..n {
                let v = &f * &a[i][k];
                a[j][k] -= v;
            }
            for k in i..n {
                let v = &f * &a[k][i];
                a[k][j] -= v;
            }
        }
    }
    sig
}

/// Closure of a braid on `strands` strands; generator `i` (1-based) crosses
/// positions i and i+1, positive when `i > 0`. Strands never touched become
/// crossingless components. Returns the link with blackboard framings and,
/// for each bottom position, its component.
pub fn braid_closure(strands: usize, word: &[i32]) -> Result<(FramedLink, Vec<usize>)> {
    if word.iter().any(|&g| g == 0 || g.unsigned_abs() as usize >= strands) {
        return Err(Error::InvalidLink(format!("braid word {word:?} out of range for {strands} strands")));
    }
    let mut next: Arc = 1;
    let bottom: Vec<Arc> = (0..strands).map(|_| {
        let a = next;
        next += 1;
        a
    }).collect();
    let mut cur = bottom.clone();
    let mut pd = Vec::new();
    for &g in word {
        let i = g.unsigned_abs() as usize - 1;
        let (bl, br) = (cur[i], cur[i + 1]);
        let (tl, tr) = (next, next + 1);
        next += 2;
        pd.push(if g > 0 { [br, tr, tl, bl] } else { [bl, br, tr, tl] });
        cur[i] = tl;
        cur[i + 1] = tr;
    }
    // identify top arcs with bottom arcs
    let rename: BTreeMap<Arc, Arc> = cur.iter().zip(&bottom).map(|(&t, &b)| (t, b)).collect();
    for x in pd.iter_mut() {
        for a in x.iter_mut() {
            if let Some(&b) = rename.get(a) {
                *a = b;
            }
        }
    }
    // a position's bottom arc survives only if some crossing touches it
    let used: BTreeSet<Arc> = pd.iter().flatten().copied().collect();
    // permutation of positions to find cycles
    let mut perm: Vec<usize> = (0..strands).collect();
    for &g in word {
        let i = g.unsigned_abs() as usize - 1;
        perm.swap(i, i + 1);
    }
    // perm[p] = bottom position of the strand now at p; cycles are components
    let mut cycle = vec![usize::MAX; strands];
    let mut cycles = 0;
    for s in 0..strands {
        if cycle[s] != usize::MAX {
            continue;
        }
        let mut p = s;
        while cycle[p] == usize::MAX {
            cycle[p] = cycles;
            p = perm[p];
        }
        cycles += 1;
    }
    let touched: Vec<bool> = (0..cycles)
        .map(|c| (0..strands).any(|p| cycle[p] == c && used.contains(&bottom[p])))
        .collect();
    // diagram components are numbered by smallest arc, which is the smallest
    // bottom arc of the cycle; unknotted ones go last
    let mut diagram: Vec<(Arc, usize)> = (0..cycles)
        .filter(|&c| touched[c])
        .map(|c| ((0..strands).filter(|&p| cycle[p] == c).map(|p| bottom[p]).min().unwrap(), c))
        .collect();
    diagram.sort_unstable();
    let mut index = vec![0usize; cycles];
    for (k, &(_, c)) in diagram.iter().enumerate() {
        index[c] = k;
    }
    let mut k = diagram.len();
    let mut unknotted = Vec::new();
    for c in 0..cycles {
        if !touched[c] {
            index[c] = k;
            unknotted.push(k);
            k += 1;
        }
    }
    let provisional = FramedLink::new(pd.clone(), vec![0; cycles], unknotted.clone())?;
    let framings = provisional.writhes();
    let link = FramedLink::new(pd, framings, unknotted)?;
    Ok((link, (0..strands).map(|p| index[cycle[p]]).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknot_and_hopf() {
        let u = FramedLink::unknots(&[3]);
        assert_eq!(u.component_count(), 1);
        assert!(u.pd().is_empty());
        assert_eq!(u.linking_data(), LinkingData { linking_matrix: vec![vec![3]], signature: 1 });
        assert_eq!(FramedLink::unknots(&[0]).linking_data().signature, 0);

        let h = FramedLink::hopf(0, 0);
        assert_eq!(h.component_count(), 2);
        let ld = h.linking_data();
        assert_eq!(ld.linking_matrix, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(ld.signature, 0);
        assert_eq!(h.writhes(), vec![0, 0]);
        assert!(h.homology_h1().is_trivial());
        assert_eq!(FramedLink::hopf(5, 1).homology_h1(), AbelianGroup::cyclic(4));
        assert_eq!(FramedLink::hopf(3, -1).homology_h1(), AbelianGroup::cyclic(4));
    }

    #[test]
    fn signatures() {
        assert_eq!(signature(&[vec![5, 1], vec![1, 1]]), 2);
        assert_eq!(signature(&[vec![3, 1], vec![1, -1]]), 0);
        assert_eq!(signature(&[vec![-2, 1, 0], vec![1, -2, 1], vec![0, 1, -2]]), -3);
        assert_eq!(signature(&[vec![0, 0], vec![0, 0]]), 0);
        assert_eq!(signature(&[]), 0);
    }

    #[test]
    fn parse_and_errors() {
        let hopf = r#"{"format":"lnk-v1","components":2,"pd":[[2,4,3,1],[4,2,1,3]],"framings":[0,0],"unknotted_components":[]}"#;
        let l = parse_link(hopf.as_bytes()).unwrap();
        assert_eq!(l.component_count(), 2);
        assert_eq!(parse_link(l.to_lnk_json().as_bytes()).unwrap(), l);

        let unknot = r#"{"format":"lnk-v1","components":1,"pd":[],"framings":[4],"unknotted_components":[0]}"#;
        assert_eq!(parse_link(unknot.as_bytes()).unwrap().framings(), &[4]);

        let once = r#"{"format":"lnk-v1","components":2,"pd":[[2,4,3,1],[4,2,1,7]],"framings":[0,0],"unknotted_components":[]}"#;
        let err = parse_link(once.as_bytes()).unwrap_err().to_string();
        assert!(err.contains("arc 3") || err.contains("arc 7"), "{err}");

        let frames = r#"{"format":"lnk-v1","components":2,"pd":[[2,4,3,1],[4,2,1,3]],"framings":[0],"unknotted_components":[]}"#;
        assert!(parse_link(frames.as_bytes()).unwrap_err().to_string().contains("framings"));

        let short = r#"{"format":"lnk-v1","components":1,"pd":[[1,2,3]],"framings":[0]}"#;
        assert!(parse_link(short.as_bytes()).unwrap_err().to_string().contains("pd[0]"));
    }

    #[test]
    fn braid_closures() {
        let (h, pos) = braid_closure(2, &[1, 1]).unwrap();
        assert_eq!(h, FramedLink::hopf(0, 0));
        assert_eq!(pos, vec![0, 1]);
        // trefoil: one component of writhe 3
        let (t, _) = braid_closure(2, &[1, 1, 1]).unwrap();
        assert_eq!(t.component_count(), 1);
        assert_eq!(t.writhes(), vec![3]);
        assert_eq!(t.framings(), &[3]);
        // an untouched strand is a split unknot
        let (s, pos) = braid_closure(3, &[1, -1]).unwrap();
        assert_eq!(s.component_count(), 3);
        assert_eq!(s.unknotted_components(), &[2]);
        assert_eq!(pos[2], 2);
        // negative crossings
        let (n, _) = braid_closure(2, &[-1, -1]).unwrap();
        assert_eq!(n.linking_data().linking_matrix, vec![vec![0, -1], vec![-1, 0]]);
    }
}
