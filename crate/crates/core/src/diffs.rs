//! Non-commutative difference operators.
//!
//! `(𝔡_g φ)(x) = φ(gx) φ(x)⁻¹` and `𝔡_{g1,…,gr} = 𝔡_{g1} ∘ … ∘ 𝔡_{gr}`, so
//! `g1` is applied last. `P_d(φ)` collects `(𝔡_{g1,…,g_{d+1}} φ)(1)`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::gmaps::Map;
use crate::groups::{Elem, Group};
use crate::profile::{nested_profile, Profile, ProfileKind};
use crate::sample::{for_each_tuple, Mode};
use crate::{Error, Result};

/// Largest supported `d` in `P_d`.
pub const MAX_DEGREE: usize = 3;

/// The map `x ↦ φ(gx) φ(x)⁻¹`.
pub struct Diff<M> {
    base: M,
    g: Elem,
}

/// `𝔡_g φ`.
pub fn dg<M: Map>(phi: M, g: Elem) -> Result<Diff<M>> {
    if !phi.source().contains(&g) {
        return Err(Error::GroupMismatch(alloc::format!("{g} is not in {}", phi.source())));
    }
    Ok(Diff { base: phi, g })
}

impl<M: Map> Map for Diff<M> {
    fn source(&self) -> &Group {
        self.base.source()
    }
    fn target(&self) -> &Group {
        self.base.target()
    }
    fn eval(&self, x: &Elem) -> Result<Elem> {
        let gx = self.source().op(&self.g, x)?;
        let t = self.target();
        t.op(&self.base.eval(&gx)?, &t.inv(&self.base.eval(x)?)?)
    }
}

fn expand<M: Map + ?Sized>(phi: &M, shifts: &[&Elem], x: &Elem) -> Result<Elem> {
    match shifts.split_first() {
        None => phi.eval(x),
        Some((g, rest)) => {
            let gx = phi.source().op(g, x)?;
            let t = phi.target();
            t.op(&expand(phi, rest, &gx)?, &t.inv(&expand(phi, rest, x)?)?)
        }
    }
}

/// `(𝔡_{g1,…,gk} φ)(1)` by literal recursive expansion (`2^k` evaluations).
pub fn iter_diff<M: Map + ?Sized>(phi: &M, shifts: &[Elem]) -> Result<Elem> {
    let src = phi.source();
    for g in shifts {
        if !src.contains(g) {
            return Err(Error::GroupMismatch(alloc::format!("{g} is not in {src}")));
        }
    }
    let refs: Vec<&Elem> = shifts.iter().collect();
    expand(phi, &refs, &src.identity())
}

/// Closed form of `(𝔡_{g1,g2,g3} φ)(1)`:
/// `φ(g3g2g1) φ(g2g1)⁻¹ φ(g1) φ(g3g1)⁻¹ φ(g3) φ(1)⁻¹ φ(g2) φ(g3g2)⁻¹`.
pub fn lemma43<M: Map + ?Sized>(phi: &M, g1: &Elem, g2: &Elem, g3: &Elem) -> Result<Elem> {
    let s = phi.source();
    let g3g2 = s.op(g3, g2)?;
    let g2g1 = s.op(g2, g1)?;
    let g3g1 = s.op(g3, g1)?;
    let g3g2g1 = s.op(&g3g2, g1)?;
    let v = [
        phi.eval(&g3g2g1)?,
        phi.eval(&g2g1)?,
        phi.eval(g1)?,
        phi.eval(&g3g1)?,
        phi.eval(g3)?,
        phi.eval(&s.identity())?,
        phi.eval(g2)?,
        phi.eval(&g3g2)?,
    ];
    phi.target().word(&[
        (&v[0], false),
        (&v[1], true),
        (&v[2], false),
        (&v[3], true),
        (&v[4], false),
        (&v[5], true),
        (&v[6], false),
        (&v[7], true),
    ])
}

/// `P_d(φ)` with shifts ranging over `ball(radius)^{d+1}`, sampled once the
/// tuple count exceeds `budget`.
pub fn set_pd<M: Map + ?Sized>(
    phi: &M,
    d: usize,
    radius: usize,
    budget: u64,
    seed: u64,
) -> Result<(BTreeSet<Elem>, Mode)> {
    if d > MAX_DEGREE {
        return Err(Error::Config(alloc::format!("P_d is supported for d ≤ {MAX_DEGREE}, got {d}")));
    }
    let ball = phi.source().ball(radius);
    let mut out = BTreeSet::new();
    let mode = match d {
        0 => {
            let t = phi.target();
            let inv_one = t.inv(&phi.eval(&phi.source().identity())?)?;
            for x in &ball {
                out.insert(t.op(&phi.eval(x)?, &inv_one)?);
            }
            Mode::Exact
        }
        2 => for_each_tuple(ball.len(), 3, budget, seed, |i| {
            out.insert(lemma43(phi, &ball[i[0]], &ball[i[1]], &ball[i[2]])?);
            Ok(())
        })?,
        _ => for_each_tuple(ball.len(), d + 1, budget, seed, |i| {
            let shifts: Vec<&Elem> = i.iter().map(|&k| &ball[k]).collect();
            out.insert(expand(phi, &shifts, &phi.source().identity())?);
            Ok(())
        })?,
    };
    Ok((out, mode))
}

pub fn pd_profile<M: Map + ?Sized>(
    phi: &M,
    d: usize,
    rmax: usize,
    window: usize,
    budget: u64,
    seed: u64,
) -> Result<Profile> {
    nested_profile(ProfileKind::Pd(d as u8), phi.target(), rmax, window, |r| set_pd(phi, d, r, budget, seed))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeEstimate {
    /// Profiles of `P_0, …, P_dmax`.
    pub profiles: Vec<Profile>,
    /// Smallest `d` whose profile is a plateau.
    pub degree: Option<usize>,
}

/// Profiles `P_d` for `d = 0..=dmax`, stopping at the first plateau.
pub fn degree_estimate<M: Map + ?Sized>(
    phi: &M,
    dmax: usize,
    rmax: usize,
    window: usize,
    budget: u64,
    seed: u64,
) -> Result<DegreeEstimate> {
    if dmax > MAX_DEGREE {
        return Err(Error::Config(alloc::format!("degree estimates go up to {MAX_DEGREE}, got {dmax}")));
    }
    let mut profiles = Vec::new();
    for d in 0..=dmax {
        let p = pd_profile(phi, d, rmax, window, budget, seed)?;
        let plateau = p.classification.is_plateau();
        profiles.push(p);
        if plateau {
            return Ok(DegreeEstimate { profiles, degree: Some(d) });
        }
    }
    Ok(DegreeEstimate { profiles, degree: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmaps::GroupMap;
    use crate::sample::DEFAULT_BUDGET;

    fn z_map(s: &str) -> GroupMap {
        GroupMap::parse(s, &Group::Z, None).unwrap()
    }

    #[test]
    fn single_difference() {
        let sq = z_map("monomial{2}");
        assert_eq!(dg(&sq, Elem::Int(5)).unwrap().eval(&Elem::Int(0)).unwrap(), Elem::Int(25));
        let id = GroupMap::parse("id", &Group::Free(2), None).unwrap();
        let a = Group::Free(2).parse_elem("a").unwrap();
        let b = Group::Free(2).parse_elem("b").unwrap();
        assert_eq!(dg(&id, a.clone()).unwrap().eval(&b).unwrap(), a);
    }

    #[test]
    fn iterated_differences_of_the_square() {
        let sq = z_map("monomial{2}");
        assert_eq!(iter_diff(&sq, &[Elem::Int(3), Elem::Int(5)]).unwrap(), Elem::Int(30));
        for (a, b, c) in [(1, 2, 3), (-4, 0, 7), (2, 2, -2)] {
            let g = [Elem::Int(a), Elem::Int(b), Elem::Int(c)];
            assert_eq!(iter_diff(&sq, &g).unwrap(), Elem::Int(0));
            assert_eq!(lemma43(&sq, &g[0], &g[1], &g[2]).unwrap(), Elem::Int(0));
        }
    }

    #[test]
    fn closed_form_matches_expansion_on_free_groups() {
        let f = GroupMap::parse("random{seed=3,domR=2,tgtR=2}", &Group::Free(2), None).unwrap();
        let p = |s| Group::Free(2).parse_elem(s).unwrap();
        let (g1, g2, g3) = (p("a"), p("b"), p("A"));
        assert_eq!(lemma43(&f, &g1, &g2, &g3).unwrap(), iter_diff(&f, &[g1.clone(), g2.clone(), g3.clone()]).unwrap());
        let unital = GroupMap::parse("unitalize{perturb{id,c=ab}}", &Group::Free(2), None).unwrap();
        assert!(lemma43(&unital, &g1, &g2, &p("")).unwrap().as_word().unwrap().is_identity());
    }

    #[test]
    fn p_sets_of_the_square() {
        let sq = z_map("monomial{2}");
        let (p1, mode) = set_pd(&sq, 1, 5, DEFAULT_BUDGET, 0).unwrap();
        assert_eq!(mode, Mode::Exact);
        let want: BTreeSet<Elem> = (-5..=5).flat_map(|a: i64| (-5..=5).map(move |b| Elem::Int(2 * a * b))).collect();
        assert_eq!(p1, want);
        let (p2, _) = set_pd(&sq, 2, 4, DEFAULT_BUDGET, 0).unwrap();
        assert_eq!(p2.into_iter().collect::<Vec<_>>(), [Elem::Int(0)]);
        let (p0, _) = set_pd(&sq, 0, 2, DEFAULT_BUDGET, 0).unwrap();
        assert_eq!(p0.into_iter().collect::<Vec<_>>(), [0, 1, 4].map(Elem::Int));
    }

    #[test]
    fn degrees() {
        let est = |s: &str| degree_estimate(&z_map(s), 3, 5, 3, DEFAULT_BUDGET, 0).unwrap().degree;
        assert_eq!(est("const{4}"), Some(0));
        assert_eq!(est("floor_scale{1,2}"), Some(1));
        assert_eq!(est("floor_quad{1,3}"), Some(2));
        assert_eq!(est("compose{floor_scale{1,2},monomial{2}}"), Some(2));
        assert_eq!(est("monomial{3}"), Some(3));
    }

    #[test]
    fn p_sets_are_nested() {
        let f = GroupMap::parse("random{seed=9,domR=3,tgtR=2}", &Group::Free(2), None).unwrap();
        for d in 0..=2 {
            let (small, _) = set_pd(&f, d, 1, DEFAULT_BUDGET, 0).unwrap();
            let (big, _) = set_pd(&f, d, 2, DEFAULT_BUDGET, 0).unwrap();
            assert!(small.is_subset(&big));
        }
    }
}
