//! Property suites over both engines: 6j identities, Pachner invariance,
//! Reidemeister and Kirby moves.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::identities::{self, IdentityReport};
use crate::modular::{Level, ModularData};
use crate::rt::braid::{random_coloring, transfer, Braid};
use crate::rt::{rt_invariant, FramedLink, SkeinEvaluator};
use crate::triangulation::census;
use crate::tv::{tv_state_sum, TvOptions};

/// Random Pachner walks of up to `max_steps` moves from every census entry.
pub fn pachner_invariance(md: &ModularData, walks: usize, max_steps: usize, seed: u64) -> IdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = TvOptions::default();
    let mut report = IdentityReport::new("pachner", md);
    for t in census().values() {
        let base = tv_state_sum(t, md, &opts).expect("census entries are small").value;
        for _ in 0..walks {
            let steps = rng.gen_range(1..=max_steps);
            let (moved, _) = t.random_moves(steps, &mut rng);
            let ok = tv_state_sum(&moved, md, &opts).is_ok_and(|v| v.value == base);
            report.record(ok);
        }
    }
    report
}

/// Second and third Reidemeister moves on random braid closures with random
/// colorings up to `max_color`: both the bracket and the framed value agree.
pub fn reidemeister(md: &ModularData, rewrites: usize, max_color: u8, seed: u64) -> IdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ev = SkeinEvaluator::new(md);
    let max_color = max_color.min(md.num_colors() as u8 - 1);
    let mut report = IdentityReport::new("reidemeister", md);
    for k in 0..rewrites {
        let strands = rng.gen_range(2..=3);
        let len = rng.gen_range(1..=4);
        let b = Braid::random(strands, len, &mut rng);
        let at = rng.gen_range(0..=b.word.len());
        let (x, y) = if k % 2 == 0 || strands < 3 {
            let g = rng.gen_range(1..strands as i32);
            (b.clone(), b.reidemeister_two(at, if rng.gen_bool(0.5) { g } else { -g }))
        } else {
            b.reidemeister_three(at, 1, rng.gen_range(0..3))
        };
        let (lx, px) = x.closure().expect("valid braid");
        let (ly, py) = y.closure().expect("valid braid");
        let cx = random_coloring(lx.component_count(), max_color, &mut rng);
        let cy = transfer(&cx, &px, &py, ly.component_count());
        let same = |f: &dyn Fn(&FramedLink, &[u8]) -> Option<crate::CycNumber>| {
            matches!((f(&lx, &cx), f(&ly, &cy)), (Some(a), Some(b)) if a == b)
        };
        let ok = same(&|l, c| ev.bracket(l, c).ok()) && same(&|l, c| ev.colored_link_value(l, c).ok());
        report.record(ok);
    }
    report
}

/// A kink added by stabilization leaves the framed value unchanged.
pub fn framing_covariance(md: &ModularData, cases: usize, max_color: u8, seed: u64) -> IdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ev = SkeinEvaluator::new(md);
    let max_color = max_color.min(md.num_colors() as u8 - 1);
    let mut report = IdentityReport::new("framing", md);
    for _ in 0..cases {
        let b = Braid::random(2, rng.gen_range(1..=3), &mut rng);
        let s = b.stabilize(rng.gen_bool(0.5));
        let (l, p) = b.closure().expect("valid braid");
        let (ls, ps) = s.closure().expect("valid braid");
        let colors = random_coloring(l.component_count(), max_color, &mut rng);
        let framings: Vec<i64> = (0..l.component_count()).map(|_| rng.gen_range(-2..=2)).collect();
        let l = FramedLink::new(l.pd().to_vec(), framings.clone(), l.unknotted_components().to_vec())
            .expect("reframing");
        let ls = FramedLink::new(
            ls.pd().to_vec(),
            transfer(&framings, &p, &ps, ls.component_count()),
            ls.unknotted_components().to_vec(),
        )
        .expect("reframing");
        let cs = transfer(&colors, &p, &ps, ls.component_count());
        let ok = matches!(
            (ev.colored_link_value(&l, &colors), ev.colored_link_value(&ls, &cs)),
            (Ok(a), Ok(b)) if a == b
        );
        report.record(ok);
    }
    report
}

/// Surgery links used for the Kirby checks.
pub fn kirby_bases() -> Vec<FramedLink> {
    let trefoil = Braid { strands: 2, word: vec![1, 1, 1] }.closure().expect("trefoil").0;
    vec![
        FramedLink::empty(),
        FramedLink::unknots(&[0]),
        FramedLink::unknots(&[3]),
        FramedLink::hopf(1, -2),
        FramedLink::hopf(2, 2),
        trefoil,
    ]
}

/// A disjoint ±1-framed unknot leaves τ unchanged, exactly.
pub fn kirby_one(md: &ModularData) -> IdentityReport {
    let mut report = IdentityReport::new("kirby-one", md);
    for base in kirby_bases() {
        let v = rt_invariant(&base, md).expect("small link");
        for f in [1, -1] {
            let w = rt_invariant(&base.with_unknot(f), md).expect("small link");
            report.record(v.same_value(&w, md) && v.modulus_squared(md) == w.modulus_squared(md));
        }
    }
    report
}

/// L(4,1) as the 4-framed unknot and as the Hopf links with framings (5,1)
/// and (3,−1).
pub fn lens_four_presentations(md: &ModularData) -> IdentityReport {
    let mut report = IdentityReport::new("lens-4-presentations", md);
    let modsq = |l: &FramedLink| rt_invariant(l, md).expect("small link").modulus_squared(md);
    let base = modsq(&FramedLink::unknots(&[4]));
    for l in [FramedLink::hopf(5, 1), FramedLink::hopf(3, -1)] {
        report.record(modsq(&l) == base);
    }
    report
}

#[derive(Clone, Copy, Debug)]
pub struct SelftestOptions {
    pub max_level: u32,
    pub seed: u64,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions { max_level: 6, seed: 0 }
    }
}

/// Runs every suite for r = 3..=max_level.
pub fn selftest(opts: SelftestOptions) -> Vec<IdentityReport> {
    let mut out = Vec::new();
    for r in 3..=opts.max_level.max(3) {
        let Ok(level) = Level::new(r) else { break };
        let md = ModularData::new(level);
        let seed = opts.seed ^ r as u64;
        out.push(identities::tetrahedral_symmetry(&md));
        out.push(identities::biedenharn_elliott(&md, 500, seed));
        out.push(identities::orthogonality(&md));
        out.push(identities::one_four(&md, 200, seed));
        if r <= 5 {
            out.push(pachner_invariance(&md, 3, 4, seed));
        }
        if r <= 6 {
            out.push(reidemeister(&md, 20, 2, seed));
            out.push(framing_covariance(&md, 10, 2, seed));
            out.push(kirby_one(&md));
            out.push(lens_four_presentations(&md));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_at_small_levels() {
        for r in 3..=5 {
            let md = ModularData::new(Level::new(r).unwrap());
            for rep in [
                pachner_invariance(&md, 2, 3, 1),
                reidemeister(&md, 10, 2, 1),
                framing_covariance(&md, 10, 3, 1),
                kirby_one(&md),
                lens_four_presentations(&md),
            ] {
                assert!(rep.passed() && rep.cases > 0, "{rep:?}");
            }
        }
    }

    #[test]
    fn full_selftest_at_level_four() {
        let reports = selftest(SelftestOptions { max_level: 4, seed: 7 });
        assert_eq!(reports.len(), 18);
        assert!(reports.iter().all(IdentityReport::passed));
    }
}
