//! Property tests across both engines.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tvrt::rt::braid::{transfer, Braid};
use tvrt::rt::{parse_link, rt_invariant, signature, SkeinEvaluator};
use tvrt::triangulation::census_names;
use tvrt::{census, tv_state_sum, FramedLink, Level, Method, ModularData, TvOptions};

fn md(r: u32) -> ModularData {
    ModularData::new(Level::new(r).unwrap())
}

fn arb_braid() -> impl Strategy<Value = Braid> {
    (2usize..=3)
        .prop_flat_map(|n| {
            let gen = (1..n as i32, any::<bool>()).prop_map(|(g, pos)| if pos { g } else { -g });
            (Just(n), prop::collection::vec(gen, 1..=4))
        })
        .prop_map(|(strands, word)| Braid { strands, word })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pachner_walks_preserve_the_state_sum(entry in 0usize..8, steps in 1usize..=6, seed in any::<u64>(), r in 3u32..=4) {
        let name = census_names()[entry];
        let t = &census()[name];
        let md = md(r);
        let opts = TvOptions::with_method(Method::Contract);
        let base = tv_state_sum(t, &md, &opts).unwrap().value;
        let (moved, moves) = t.random_moves(steps, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(tv_state_sum(&moved, &md, &opts).unwrap().value, base, "{} {:?}", name, moves);
    }

    #[test]
    fn state_sum_ignores_orientation_and_is_real(entry in 0usize..8, r in 3u32..=5) {
        let t = &census()[census_names()[entry]];
        let md = md(r);
        let z = tv_state_sum(t, &md, &TvOptions::default()).unwrap().value;
        prop_assert_eq!(&z.conjugate(), &z);
        prop_assert_eq!(tv_state_sum(&t.reversed(), &md, &TvOptions::default()).unwrap().value, z);
    }

    #[test]
    fn reidemeister_two(b in arb_braid(), at in 0usize..5, g in 1i32..3, neg in any::<bool>(), colors in prop::collection::vec(0u8..=3, 3)) {
        let md = md(5);
        let ev = SkeinEvaluator::new(&md);
        let g = g.min(b.strands as i32 - 1);
        let rewritten = b.reidemeister_two(at.min(b.word.len()), if neg { -g } else { g });
        let (l, p) = b.closure().unwrap();
        let (l2, p2) = rewritten.closure().unwrap();
        let c: Vec<u8> = colors[..l.component_count()].to_vec();
        let c2 = transfer(&c, &p, &p2, l2.component_count());
        prop_assert_eq!(ev.bracket(&l, &c).unwrap(), ev.bracket(&l2, &c2).unwrap());
    }

    #[test]
    fn reidemeister_three(word in prop::collection::vec((1i32..3, any::<bool>()), 0..=3), at in 0usize..4, kind in 0u8..3, colors in prop::collection::vec(0u8..=2, 3)) {
        let md = md(5);
        let ev = SkeinEvaluator::new(&md);
        let b = Braid { strands: 3, word: word.into_iter().map(|(g, p)| if p { g } else { -g }).collect() };
        let (x, y) = b.reidemeister_three(at.min(b.word.len()), 1, kind);
        let (lx, px) = x.closure().unwrap();
        let (ly, py) = y.closure().unwrap();
        let cx: Vec<u8> = colors[..lx.component_count()].to_vec();
        let cy = transfer(&cx, &px, &py, ly.component_count());
        prop_assert_eq!(ev.bracket(&lx, &cx).unwrap(), ev.bracket(&ly, &cy).unwrap());
    }

    #[test]
    fn kinks_are_absorbed_by_the_framing(b in arb_braid(), positive in any::<bool>(), colors in prop::collection::vec(0u8..=3, 3), f in -2i64..=2) {
        let md = md(5);
        let ev = SkeinEvaluator::new(&md);
        let s = b.stabilize(positive);
        let (l, p) = b.closure().unwrap();
        let (ls, ps) = s.closure().unwrap();
        let framings = vec![f; l.component_count()];
        let l = FramedLink::new(l.pd().to_vec(), framings.clone(), l.unknotted_components().to_vec()).unwrap();
        let ls = FramedLink::new(ls.pd().to_vec(), transfer(&framings, &p, &ps, ls.component_count()), ls.unknotted_components().to_vec()).unwrap();
        let c: Vec<u8> = colors[..l.component_count()].to_vec();
        let cs = transfer(&c, &p, &ps, ls.component_count());
        prop_assert_eq!(ev.colored_link_value(&l, &c).unwrap(), ev.colored_link_value(&ls, &cs).unwrap());
    }

    #[test]
    fn blow_ups_leave_tau_unchanged(f1 in -3i64..=3, f2 in -3i64..=3, sign in prop_oneof![Just(1i64), Just(-1i64)], r in 3u32..=5) {
        let md = md(r);
        let base = FramedLink::hopf(f1, f2);
        let v = rt_invariant(&base, &md).unwrap();
        let w = rt_invariant(&base.with_unknot(sign), &md).unwrap();
        prop_assert!(v.same_value(&w, &md));
        prop_assert!((v.numeric - w.numeric).norm() < 1e-9);
    }

    #[test]
    fn modulus_squared_is_a_nonnegative_real(f1 in -4i64..=4, f2 in -4i64..=4, r in 3u32..=5) {
        let md = md(r);
        let m = rt_invariant(&FramedLink::hopf(f1, f2), &md).unwrap().modulus_squared(&md);
        prop_assert_eq!(&m.conjugate(), &m);
        prop_assert!(m.to_complex().re > -1e-12);
    }

    #[test]
    fn signature_is_a_congruence_invariant(
        m in prop::collection::vec(-3i64..=3, 6),
        ops in prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..6),
    ) {
        let mut a = vec![vec![m[0], m[1], m[2]], vec![m[1], m[3], m[4]], vec![m[2], m[4], m[5]]];
        let before = signature(&a);
        // row i += k·row j together with the matching column operation
        for (i, j, k) in ops {
            if i == j {
                continue;
            }
            for c in 0..3 {
                a[i][c] += k * a[j][c];
            }
            for row in a.iter_mut() {
                row[i] += k * row[j];
            }
        }
        prop_assert_eq!(signature(&a), before);
        prop_assert!(before.abs() <= 3);
    }

    #[test]
    fn links_round_trip(b in arb_braid(), framings in prop::collection::vec(-5i64..=5, 3)) {
        let (l, _) = b.closure().unwrap();
        let f = framings[..l.component_count()].to_vec();
        let l = FramedLink::new(l.pd().to_vec(), f, l.unknotted_components().to_vec()).unwrap();
        prop_assert_eq!(parse_link(l.to_lnk_json().as_bytes()).unwrap(), l);
    }
}
