//! First homology from the simplicial chain complex of the gluing table.

use num_bigint::BigInt;
use num_traits::One;

use super::{edge_index, Triangulation};
use crate::error::Result;
use crate::smith::{invariant_factors, AbelianGroup};

/// H₁(M; Z) from the Smith normal forms of ∂₁ and ∂₂.
pub fn homology_h1(t: &Triangulation) -> Result<AbelianGroup> {
    let sk = t.skeleton()?;
    let ne = sk.edges.len();

    let d1: Vec<Vec<BigInt>> = sk
        .edges
        .iter()
        .map(|e| {
            let (tet, slot) = e.incidences[0];
            let (a, b) = super::EDGE_VERTICES[slot as usize];
            let mut row = vec![BigInt::from(0); sk.vertices.len()];
            row[sk.tet_vertices[tet][b as usize]] += 1;
            row[sk.tet_vertices[tet][a as usize]] -= 1;
            row
        })
        .collect();
    let rank1 = invariant_factors(d1).len();

    // ∂[v0 v1 v2] = [v1 v2] − [v0 v2] + [v0 v1]
    let d2: Vec<Vec<BigInt>> = sk
        .faces
        .iter()
        .map(|f| {
            let vs: Vec<u8> = (0..4u8).filter(|&v| v != f.face).collect();
            let mut row = vec![BigInt::from(0); ne];
            for ((a, b), s) in [((vs[1], vs[2]), 1), ((vs[0], vs[2]), -1), ((vs[0], vs[1]), 1)] {
                let slot = edge_index(a, b);
                let sign = s * sk.tet_edge_signs[f.tet][slot] as i64;
                row[sk.tet_edges[f.tet][slot]] += sign;
            }
            row
        })
        .collect();
    let d = invariant_factors(d2);
    let torsion = d
        .iter()
        .filter(|x| !x.is_one())
        .map(|x| u64::try_from(x).expect("torsion fits in u64"))
        .collect();
    Ok(AbelianGroup { rank: ne - rank1 - d.len(), torsion })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::{bipyramid, census};

    #[test]
    fn census_homology() {
        let c = census();
        assert!(homology_h1(&c["S3_2tet"]).unwrap().is_trivial());
        assert!(homology_h1(&c["S3_3tet"]).unwrap().is_trivial());
        assert_eq!(homology_h1(&c["L2_1"]).unwrap(), AbelianGroup::cyclic(2));
        assert_eq!(homology_h1(&c["L3_1"]).unwrap(), AbelianGroup::cyclic(3));
        assert_eq!(homology_h1(&c["L4_1"]).unwrap(), AbelianGroup::cyclic(4));
        assert_eq!(homology_h1(&c["L5_1"]).unwrap(), AbelianGroup::cyclic(5));
        assert_eq!(homology_h1(&c["S2xS1"]).unwrap(), AbelianGroup::free(1));
        let two = AbelianGroup { rank: 0, torsion: vec![2, 2] };
        assert_eq!(homology_h1(&c["L2_1#L2_1"]).unwrap(), two);
    }

    #[test]
    fn lens_family() {
        for p in 2..9 {
            for q in 1..p {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let t = bipyramid(p, q).unwrap();
                assert_eq!(homology_h1(&t).unwrap(), AbelianGroup::cyclic(p as u64), "L({p},{q})");
            }
        }
    }
}
