use coarsemap_core::gmaps::{GroupMap, Map};
use coarsemap_core::groups::{parse_group_builtin, Elem, Group};
use coarsemap_core::sample::SplitMix;
use coarsemap_core::zquad::{
    extend, l49_identity, pol2_relator_check, recursion_residual, window_check, ZQuadSeed, ZQuadSeq,
};

fn f2() -> Group {
    Group::Free(2)
}

fn w(s: &str) -> Elem {
    f2().parse_elem(s).unwrap()
}

fn free_seed(a: &str, b: &str) -> ZQuadSeed {
    ZQuadSeed::new(f2(), w(a), w(b)).unwrap()
}

fn vec2(x: i64, y: i64) -> Elem {
    Elem::Vector(vec![x, y])
}

#[test]
fn anchor_values() {
    let s = free_seed("a", "b");
    assert_eq!(extend(&s, 3).unwrap(), w("bAAbAb"));
    assert_eq!(extend(&s, -1).unwrap(), w("AbAA"));
    assert_eq!(extend(&s, 0).unwrap(), w(""));
    assert_eq!(extend(&s, 2).unwrap(), w("b"));
}

#[test]
fn free_generators_break_the_second_anchor_identity() {
    // For a quadratic sequence φ(-1) also equals b⁻¹ φ(3) a⁻¹ b⁻¹ a.
    let s = free_seed("a", "b");
    let g = f2();
    let (a, b) = (w("a"), w("b"));
    let other = g.word(&[(&b, true), (&extend(&s, 3).unwrap(), false), (&a, true), (&b, true), (&a, false)]).unwrap();
    assert_ne!(other, extend(&s, -1).unwrap());
}

fn abelian_closed_form(a: &[i64], b: &[i64], n: i64) -> Vec<i64> {
    let c = n * (n - 1) / 2;
    a.iter().zip(b).map(|(x, y)| n * x + c * (y - 2 * x)).collect()
}

#[test]
fn abelian_closed_form_agrees() {
    let s = ZQuadSeed::new(Group::ZPow(2), vec2(1, 0), vec2(0, 1)).unwrap();
    assert_eq!(extend(&s, 4).unwrap(), vec2(-8, 6));
    let mut rng = SplitMix::new(17);
    for _ in 0..20 {
        let a = [rng.below(11) as i64 - 5, rng.below(11) as i64 - 5];
        let b = [rng.below(11) as i64 - 5, rng.below(11) as i64 - 5];
        let s = ZQuadSeed::new(Group::ZPow(2), vec2(a[0], a[1]), vec2(b[0], b[1])).unwrap();
        let mut seq = ZQuadSeq::new(s);
        for n in -20..=20 {
            assert_eq!(seq.get(n).unwrap(), Elem::Vector(abelian_closed_form(&a, &b, n)), "n = {n}");
        }
    }
}

#[test]
fn recursion_consistency() {
    let mut rng = SplitMix::new(5);
    let ball = f2().ball(3);
    let z2 = Group::ZPow(2).ball(3);
    for _ in 0..50 {
        let (a, b) = (&ball[rng.below(ball.len())], &ball[rng.below(ball.len())]);
        let s = ZQuadSeed::new(f2(), a.clone(), b.clone()).unwrap();
        check_round_trip(&s);
        let (a, b) = (&z2[rng.below(z2.len())], &z2[rng.below(z2.len())]);
        check_round_trip(&ZQuadSeed::new(Group::ZPow(2), a.clone(), b.clone()).unwrap());
    }
}

/// Runs the recursion forward from (φ(5), φ(6)) back down to 0 and 1.
fn check_round_trip(s: &ZQuadSeed) {
    let g = &s.target;
    let mut seq = ZQuadSeq::new(s.clone());
    let a_inv = g.inv(&s.a).unwrap();
    let (mut hi, mut cur) = (seq.get(6).unwrap(), seq.get(5).unwrap());
    for n in (1..=5).rev() {
        let prev = g
            .word(&[(&cur, false), (&a_inv, false), (&s.b, false), (&hi, true), (&cur, false), (&a_inv, false)])
            .unwrap();
        assert_eq!(prev, seq.get(n - 1).unwrap());
        hi = cur;
        cur = prev;
    }
    assert_eq!(cur, g.identity());
    assert_eq!(hi, s.a);
}

#[test]
fn recursion_is_the_threefold_difference() {
    for (a, b) in [("a", "b"), ("ab", "B"), ("a", "aa")] {
        let s = free_seed(a, b);
        for n in -4..=4 {
            assert_eq!(recursion_residual(&s, n).unwrap(), w(""), "seed ({a}, {b}), n = {n}");
        }
    }
}

#[test]
fn window_checks() {
    let free = window_check(&free_seed("a", "b"), 6, 2).unwrap();
    assert!(!free.holds);
    let [g1, g2, g3] = free.witness.clone().unwrap();
    // The witness is a real violation of the closed form.
    let map = GroupMap::parse("zquad{a=a,b=b}", &Group::Z, Some(&f2())).unwrap();
    assert_ne!(coarsemap_core::diffs::lemma43(&map, &g1, &g2, &g3).unwrap(), w(""));

    assert!(window_check(&free_seed("a", "aa"), 9, 3).unwrap().holds);
    assert!(window_check(&free_seed("a", "b"), 5, 2).is_err());
    for target in [Group::Z, Group::ZPow(2), Group::Cyclic(7)] {
        for a in target.ball(2) {
            for b in target.ball(2) {
                let s = ZQuadSeed::new(target.clone(), a.clone(), b.clone()).unwrap();
                assert!(window_check(&s, 12, 4).unwrap().holds, "{target}: ({a}, {b})");
                assert!(l49_identity(&s).unwrap());
            }
        }
    }
}

#[test]
fn commutation_identity() {
    assert!(!l49_identity(&free_seed("a", "b")).unwrap());
    assert!(l49_identity(&free_seed("a", "aa")).unwrap());
}

#[test]
fn window_pass_implies_commutation_identity() {
    let ball = f2().ball(3);
    let mut rng = SplitMix::new(23);
    let mut passing = 0;
    for _ in 0..400 {
        let s = ZQuadSeed::new(f2(), ball[rng.below(ball.len())].clone(), ball[rng.below(ball.len())].clone()).unwrap();
        if window_check(&s, 9, 3).unwrap().holds {
            passing += 1;
            assert!(l49_identity(&s).unwrap(), "{:?}", s);
        }
    }
    assert!(passing > 0, "sweep never reached the hypothesis");
    for (a, b) in [("a", "aa"), ("ab", "abab"), ("b", "B")] {
        let s = free_seed(a, b);
        assert!(window_check(&s, 9, 3).unwrap().holds);
        assert!(l49_identity(&s).unwrap());
    }
}

#[test]
fn relator_checks() {
    let sq = GroupMap::parse("monomial{2}", &Group::Z, None).unwrap();
    assert!(pol2_relator_check(&sq, 5).unwrap().holds);
    let fq = GroupMap::parse("floor_quad{1,3}", &Group::Z, None).unwrap();
    let out = pol2_relator_check(&fq, 5).unwrap();
    assert!(!out.holds);
    let [g1, g2, g3] = out.witness.unwrap();
    let (x1, x2, x3) = (g1.as_int().unwrap(), g2.as_int().unwrap(), g3.as_int().unwrap());
    // Independent integer oracle for the relator.
    let f = |n: i64| (n * n).div_euclid(3);
    let direct = f(x1 + x2 + x3) - f(x2 + x1) + f(x1) - f(x3 + x1) + f(x3) + f(x2) - f(x3 + x2);
    assert_ne!(direct, 0);
    assert_eq!(out.value, Some(Elem::Int(direct)));

    for spec in ["hom{a->ab,b->b}", "id", "hom{a->B,b->ba}"] {
        let h = GroupMap::parse(spec, &f2(), None).unwrap();
        assert!(pol2_relator_check(&h, 2).unwrap().holds, "{spec}");
    }
    let s3 = parse_group_builtin("sym3").unwrap();
    let h = GroupMap::parse("hom{1->1}", &Group::Z, Some(&s3)).unwrap();
    assert!(pol2_relator_check(&h, 3).unwrap().holds);

    let shifted = GroupMap::parse("perturb{monomial{2},c=1}", &Group::Z, None).unwrap();
    assert!(pol2_relator_check(&shifted, 2).is_err());
}

#[test]
fn zquad_map_family_matches_sequence() {
    let m = GroupMap::parse("zquad{a=a,b=b}", &Group::Z, Some(&f2())).unwrap();
    let s = free_seed("a", "b");
    for n in -6..=6 {
        assert_eq!(m.eval(&Elem::Int(n)).unwrap(), extend(&s, n).unwrap());
    }
}
