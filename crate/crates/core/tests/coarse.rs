use coarsemap_core::coarse::{
    comm_profile, conj_restriction, default_slack, graph_sample, pertdelta_check, pi_probe, qsg_profile,
};
use coarsemap_core::gmaps::{GroupMap, Map};
use coarsemap_core::groups::{parse_group_builtin, Elem, Group};
use coarsemap_core::Classification;

fn f2() -> Group {
    Group::Free(2)
}

fn map(spec: &str, source: &Group, target: Option<&Group>) -> GroupMap {
    GroupMap::parse(spec, source, target).unwrap()
}

fn quasi_homs() -> Vec<GroupMap> {
    let z = Group::Z;
    vec![
        map("brooks{ab}", &f2(), None),
        map("brooks{aab}", &f2(), None),
        map("floor_scale{1,2}", &z, None),
        map("floor_scale{2,3}", &z, None),
        map("hom{1->3}", &z, None),
        map("hom{a->ab,b->b}", &f2(), None),
        map("id", &f2(), None),
        map("hom{1->a}", &z, Some(&f2())),
    ]
}

#[test]
fn conjugating_a_good_constant_keeps_it_good() {
    for m in quasi_homs() {
        let t = m.target().clone();
        for c in t.ball(2) {
            if !pi_probe(&m, &c, 5, 3).unwrap().classification.is_plateau() {
                continue;
            }
            for g in m.source().ball(2) {
                let fg = m.eval(&g).unwrap();
                let moved = t.conj(&c, &t.inv(&fg).unwrap()).unwrap();
                let p = pi_probe(&m, &moved, 5, 3).unwrap();
                assert!(p.classification.is_plateau(), "{}: c = {c}, g = {g}: {:?}", m.spec(), p.max_norms());
            }
        }
    }
}

#[test]
fn image_constants_match_conjugacy_restriction() {
    for m in quasi_homs() {
        for b in m.source().ball(2) {
            let fb = m.eval(&b).unwrap();
            let pi = pi_probe(&m, &fb, 5, 3).unwrap();
            let res = conj_restriction(&m, &b, 5, 3).unwrap();
            assert_eq!(
                pi.classification.is_plateau(),
                res.classification.is_plateau(),
                "{} at {b}: {:?} vs {:?}",
                m.spec(),
                pi.max_norms(),
                res.max_norms()
            );
        }
    }
}

#[test]
fn finite_sources_put_the_image_in_the_good_constants() {
    let s3 = parse_group_builtin("sym3").unwrap();
    let q8 = parse_group_builtin("quat8").unwrap();
    let maps = [
        map("random{seed=3,domR=3,tgtR=3}", &s3, Some(&f2())),
        map("random{seed=8,domR=4,tgtR=2}", &q8, Some(&f2())),
        map("hom{1->2}", &Group::Cyclic(6), Some(&s3)),
    ];
    for m in &maps {
        for x in m.source().ball(4) {
            let c = m.eval(&x).unwrap();
            let p = pi_probe(m, &c, 5, 3).unwrap();
            assert_eq!(p.classification, Classification::Plateau, "{} at {x}", m.spec());
        }
    }
}

#[test]
fn translated_quasi_subgroups_are_commensurated() {
    let maps = [map("id", &f2(), None), map("hom{a->ab,b->b}", &f2(), None), map("brooks{ab}", &f2(), None)];
    let mut both = 0;
    for m in &maps {
        let lambda = graph_sample(m, 7).unwrap();
        let g = lambda.group().clone();
        for x in m.source().ball(1) {
            for y in m.target().ball(1) {
                let t = Elem::pair(x.clone(), y.clone());
                let translated = lambda.translate(&t).unwrap();
                let q = qsg_profile(&translated, 3, 3).unwrap();
                let c = comm_profile(&lambda, &t, 3, 3, default_slack(&g, &t)).unwrap();
                if q.classification.is_plateau() {
                    both += 1;
                    assert!(c.classification.is_plateau(), "{} at {t}: {:?}", m.spec(), c.max_norms());
                }
            }
        }
    }
    assert!(both > 0);
}

#[test]
fn defect_perturbations_stay_quasi_homomorphisms() {
    let b = map("brooks{ab}", &f2(), None);
    let out = pertdelta_check(&b, 4, 2, 5, 3).unwrap();
    assert!(out.holds());
    assert!(out.tested.len() > 1);
    let fs = map("floor_scale{1,2}", &Group::Z, None);
    assert!(pertdelta_check(&fs, 6, 3, 8, 3).unwrap().holds());
    let p = map("perturb{id,c=a}", &f2(), None);
    assert_eq!(pertdelta_check(&p, 2, 2, 5, 3).unwrap().verdict, Classification::Inconclusive);
}
