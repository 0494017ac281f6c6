use coarsemap_core::groups::{parse_group_builtin, Elem, Group};
use coarsemap_core::words::{self, Word};
use proptest::prelude::*;

fn naive_reduce(letters: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for &l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn letters(rank: i32, max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec((1..=rank, any::<bool>()).prop_map(|(g, s)| if s { g } else { -g }), 0..max_len)
}

proptest! {
    #[test]
    fn reduction_matches_stack_oracle(raw in letters(3, 24)) {
        let w = Word::reduce(&raw, 3).unwrap();
        prop_assert_eq!(w.letters().to_vec(), naive_reduce(&raw));
        prop_assert_eq!(Word::reduce(w.letters(), 3).unwrap(), w);
    }

    #[test]
    fn multiplication_is_concatenation(u in letters(2, 12), v in letters(2, 12)) {
        let (u, v) = (Word::reduce(&u, 2).unwrap(), Word::reduce(&v, 2).unwrap());
        let cat: Vec<i32> = u.letters().iter().chain(v.letters()).copied().collect();
        prop_assert_eq!(u.mul(&v).unwrap().letters().to_vec(), naive_reduce(&cat));
        prop_assert!(u.mul(&u.inv()).unwrap().is_identity());
        prop_assert_eq!(u.inv().inv(), u.clone());
        let c = u.conj(&v).unwrap();
        prop_assert!(c.len() <= u.len() + 2 * v.len());
    }

    #[test]
    fn roots_are_sound(raw in letters(2, 20)) {
        let w = Word::reduce(&raw, 2).unwrap();
        prop_assume!(!w.is_identity());
        let (r, e) = w.root().unwrap();
        prop_assert_eq!(r.pow(e as i64), w.clone());
        prop_assert_eq!(brute_force_exponent(&w), e);
    }

    #[test]
    fn left_invariance(i in 0usize..1000, j in 0usize..1000, k in 0usize..1000, which in 0usize..6) {
        let g = groups()[which].clone();
        let ball = g.ball(4);
        let (x, y, z) = (&ball[i % ball.len()], &ball[j % ball.len()], &ball[k % ball.len()]);
        let zx = g.op(z, x).unwrap();
        let zy = g.op(z, y).unwrap();
        prop_assert_eq!(g.dist(&zx, &zy).unwrap(), g.dist(x, y).unwrap());
        prop_assert_eq!(g.norm(x), g.norm(&g.inv(x).unwrap()));
    }
}

/// Largest `k` with `w = u^k`, read off the letters directly: `w` splits as
/// `p · m · p⁻¹` with the middle `m` a k-fold repetition of a block.
fn brute_force_exponent(w: &Word) -> u32 {
    let l = w.letters();
    let n = l.len();
    let mut best = 1;
    for p in 0..=n / 2 {
        let (pre, suf) = (&l[..p], &l[n - p..]);
        if !pre.iter().rev().map(|x| -x).eq(suf.iter().copied()) {
            continue;
        }
        let m = &l[p..n - p];
        for k in 2..=m.len() {
            if m.len().is_multiple_of(k) {
                let block = &m[..m.len() / k];
                if m.chunks(block.len()).all(|c| c == block) {
                    best = best.max(k as u32);
                }
            }
        }
    }
    best
}

fn groups() -> Vec<Group> {
    vec![
        Group::Free(2),
        Group::Z,
        Group::ZPow(2),
        Group::Cyclic(6),
        parse_group_builtin("sym3").unwrap(),
        parse_group_builtin("prod(free:2,z)").unwrap(),
    ]
}

#[test]
fn word_examples() {
    let w = |s: &str| Word::parse(s, 2).unwrap();
    assert_eq!(w("abB"), w("a"));
    assert_eq!(w("ab").mul(&w("a")).unwrap(), w("aba"));
    assert_eq!(w("aB").mul(&w("ba")).unwrap(), w("aa"));
    assert_eq!(w("a").conj(&w("b")).unwrap(), w("Bab"));
    assert_eq!(w("ab").conj(&w("ab")).unwrap(), w("ab"));
    assert_eq!(w("a").commutator(&w("b")).unwrap(), w("ABab"));
    assert_eq!(w("Baba").root().unwrap(), (w("Baba"), 1));
    assert!(w("ab").commutes(&w("abab")).unwrap());
    assert!(!w("a").commutes(&w("b")).unwrap());
    assert!(Word::parse("c", 2).is_err());
    assert!(Word::reduce(&[0], 2).is_err());
    assert!(Word::parse("", 2).unwrap().root().is_err());
}

#[test]
fn associativity_on_ball_three() {
    let ball = words::ball(2, 3);
    for u in &ball {
        for v in &ball {
            let uv = u.mul(v).unwrap();
            for x in &ball {
                assert_eq!(uv.mul(x).unwrap(), u.mul(&v.mul(x).unwrap()).unwrap());
            }
        }
    }
}

#[test]
fn commutation_matches_commutator() {
    let ball = words::ball(2, 3);
    for u in &ball {
        for v in &ball {
            assert_eq!(u.commutes(v).unwrap(), u.commutator(v).unwrap().is_identity());
        }
    }
}

#[test]
fn roots_on_ball_six() {
    for w in words::ball(2, 6).into_iter().skip(1) {
        let (r, e) = w.root().unwrap();
        assert_eq!(r.pow(e as i64), w);
        assert_eq!(brute_force_exponent(&w), e, "{w}");
        assert_eq!(brute_force_exponent(&r), 1, "{r}");
    }
}

#[test]
fn ball_sizes() {
    for k in 1..=3u32 {
        for r in 0..=5usize {
            let want = 1 + (1..=r).map(|i| 2 * k as u64 * (2 * k as u64 - 1).pow(i as u32 - 1)).sum::<u64>();
            assert_eq!(words::ball(k, r).len() as u64, want);
        }
    }
    let z4: Vec<i64> = Group::Z.ball(4).iter().map(|x| x.as_int().unwrap()).collect();
    assert_eq!(z4, [0, 1, -1, 2, -2, 3, -3, 4, -4]);
    assert_eq!(Group::Free(2).ball(3).len(), 53);
    assert_eq!(parse_group_builtin("prod(free:2,z)").unwrap().ball(2).len(), 29);
}

#[test]
fn balls_are_nested_and_sorted() {
    for g in groups() {
        for r in 0..4 {
            let small = g.ball(r);
            let big = g.ball(r + 1);
            assert_eq!(&big[..small.len()], &small[..], "{g} r = {r}");
            assert!(big.windows(2).all(|p| (g.norm(&p[0]), &p[0]) < (g.norm(&p[1]), &p[1])));
        }
    }
}

#[test]
fn product_metric_triangle_inequality() {
    let g = parse_group_builtin("prod(free:2,z)").unwrap();
    let ball = g.ball(2);
    for x in &ball {
        for y in &ball {
            for z in &ball {
                assert!(g.dist(x, z).unwrap() <= g.dist(x, y).unwrap() + g.dist(y, z).unwrap());
            }
        }
    }
}

#[test]
fn group_examples() {
    assert_eq!(Group::Z.op(&Elem::Int(2), &Elem::Int(-5)).unwrap(), Elem::Int(-3));
    assert_eq!(Group::Cyclic(6).op(&Elem::Int(4), &Elem::Int(5)).unwrap(), Elem::Int(3));
    let p = parse_group_builtin("prod(free:2,z)").unwrap();
    let x = p.parse_elem("(a|1)").unwrap();
    let y = p.parse_elem("(A|2)").unwrap();
    assert_eq!(p.op(&x, &y).unwrap(), p.parse_elem("(|3)").unwrap());
    assert_eq!(p.norm(&p.parse_elem("(ab|-2)").unwrap()), 4);
    let f2 = Group::Free(2);
    assert_eq!(f2.dist(&f2.parse_elem("a").unwrap(), &f2.parse_elem("b").unwrap()).unwrap(), 2);
    assert!(Group::Z.op(&Elem::Int(1), &Group::Free(2).identity()).is_err());
}
