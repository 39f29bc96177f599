//! Integer Smith normal form and finitely generated abelian groups.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// Z^rank ⊕ Z/t₁ ⊕ … ⊕ Z/t_k with 1 < t₁ | t₂ | … | t_k.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn trivial() -> AbelianGroup {
        AbelianGroup { rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> AbelianGroup {
        AbelianGroup { rank, torsion: Vec::new() }
    }

    pub fn cyclic(n: u64) -> AbelianGroup {
        match n {
            0 => AbelianGroup::free(1),
            1 => AbelianGroup::trivial(),
            _ => AbelianGroup { rank: 0, torsion: vec![n] },
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        (self.rank == 0).then(|| self.torsion.iter().product())
    }

    /// Cokernel of the integer matrix `m` viewed as a map Z^cols → Z^rows.
    pub fn cokernel(m: &[Vec<i64>], rows: usize) -> AbelianGroup {
        let big: Vec<Vec<BigInt>> = m
            .iter()
            .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let d = invariant_factors(big);
        let torsion: Vec<u64> = d
            .iter()
            .filter(|x| !x.is_one())
            .map(|x| u64::try_from(x).expect("torsion coefficient fits in u64"))
            .collect();
        AbelianGroup { rank: rows - d.len(), torsion }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            k => parts.push(format!("Z^{k}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// Nonzero diagonal of the Smith normal form, each positive, in divisibility order.
/// The rank of the matrix is the length of the result.
pub fn invariant_factors(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero magnitude in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                for j in t..cols {
                    let v = &m[t][j] * &q;
                    m[i][j] -= v;
                }
                if !m[i][t].is_zero() {
                    clean = false;
                    if m[i][t].abs() < m[t][t].abs() {
                        m.swap(t, i);
                    }
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                for row in m.iter_mut().skip(t) {
                    let v = &row[t] * &q;
                    row[j] -= v;
                }
                if !m[t][j].is_zero() {
                    clean = false;
                    if m[t][j].abs() < m[t][t].abs() {
                        for row in m.iter_mut() {
                            row.swap(t, j);
                        }
                    }
                }
            }
            if clean {
                break;
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    // enforce d_i | d_{i+1}
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].lcm(&diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(m: &[&[i64]]) -> Vec<Vec<BigInt>> {
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn known_forms() {
        let d = invariant_factors(big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(d, vec![2.into(), 6.into(), 12.into()]);
        let d = invariant_factors(big(&[&[2, 0], &[0, 3]]));
        assert_eq!(d, vec![1.into(), 6.into()]);
        assert!(invariant_factors(big(&[&[0, 0]])).is_empty());
    }

    #[test]
    fn cokernels() {
        assert_eq!(AbelianGroup::cokernel(&[vec![5]], 1), AbelianGroup::cyclic(5));
        assert_eq!(AbelianGroup::cokernel(&[vec![0]], 1), AbelianGroup::free(1));
        assert!(AbelianGroup::cokernel(&[vec![0, 1], vec![1, 0]], 2).is_trivial());
        assert_eq!(AbelianGroup::cokernel(&[vec![5, 1], vec![1, 1]], 2), AbelianGroup::cyclic(4));
        assert_eq!(AbelianGroup::cokernel(&[], 0), AbelianGroup::trivial());
    }

    #[test]
    fn display() {
        assert_eq!(AbelianGroup::trivial().to_string(), "0");
        assert_eq!(AbelianGroup::free(1).to_string(), "Z");
        let g = AbelianGroup { rank: 2, torsion: vec![2, 2] };
        assert_eq!(g.to_string(), "Z^2 + Z/2 + Z/2");
    }
}
