//! Quasi-subgroup and commensurator witnesses, graphs of maps, and the
//! conjugation probes attached to a map.
//!
//! Subsets `Λ ⊆ Γ` are handled as finite [`Layered`] samples. A graph
//! `{(x, φ(x))}` is layered by `‖x‖`; any other sample by the norm in `Γ`.
//! "`Λ ∩ ball(R)`" always means the elements of layer at most `R`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::defects::{self, PairDefect};
use crate::gmaps::{FnMap, Map};
use crate::groups::{Elem, Group};
use crate::profile::{nested_profile, Classification, Profile, ProfileKind, Row};
use crate::sample::Mode;
use crate::{Error, Result};

/// A finite sample of a subset of `group`, sorted by layer and then by
/// canonical order. `radius` is the largest layer the sample is complete up
/// to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layered {
    group: Group,
    items: Vec<(u64, Elem)>,
    radius: usize,
}

impl Layered {
    pub fn new(group: Group, mut items: Vec<(u64, Elem)>, radius: usize) -> Result<Self> {
        for (_, x) in &items {
            if !group.contains(x) {
                return Err(Error::GroupMismatch(alloc::format!("{x} is not in {group}")));
            }
        }
        items.sort();
        items.dedup_by(|a, b| a.1 == b.1);
        Ok(Layered { group, items, radius })
    }

    /// Layers elements by their norm, keeping those of norm at most `radius`.
    pub fn by_norm(group: Group, elems: impl IntoIterator<Item = Elem>, radius: usize) -> Result<Self> {
        let mut items = Vec::new();
        for x in elems {
            if !group.contains(&x) {
                return Err(Error::GroupMismatch(alloc::format!("{x} is not in {group}")));
            }
            let n = group.norm(&x);
            if n <= radius as u64 {
                items.push((n, x));
            }
        }
        Layered::new(group, items, radius)
    }

    /// `{g^n}` of norm at most `radius`.
    pub fn cyclic(group: Group, g: &Elem, radius: usize) -> Result<Self> {
        let mut elems = Vec::new();
        for n in -(radius as i64)..=radius as i64 {
            elems.push(crate::gmaps::power(&group, g, n)?);
        }
        Layered::by_norm(group, elems, radius)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[(u64, Elem)] {
        &self.items
    }

    /// Elements of layer at most `r`.
    pub fn upto(&self, r: usize) -> &[(u64, Elem)] {
        let end = self.items.partition_point(|(l, _)| *l <= r as u64);
        &self.items[..end]
    }

    /// Right translate `Λ t`, keeping layers.
    pub fn translate(&self, t: &Elem) -> Result<Self> {
        let items = self.items.iter().map(|(l, x)| Ok((*l, self.group.op(x, t)?))).collect::<Result<_>>()?;
        Layered::new(self.group.clone(), items, self.radius)
    }
}

/// `{(x, φ(x)) : x ∈ ball(radius)}` in `G × H`.
pub fn graph_sample<M: Map + ?Sized>(phi: &M, radius: usize) -> Result<Layered> {
    let group = Group::product(phi.source().clone(), phi.target().clone());
    let items = phi
        .source()
        .ball(radius)
        .into_iter()
        .map(|x| Ok((phi.source().norm(&x), Elem::pair(x.clone(), phi.eval(&x)?))))
        .collect::<Result<_>>()?;
    Layered::new(group, items, radius)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    /// `Λ⁻¹ ⊆ Λ F`.
    InverseCover,
    /// `Λ² ⊆ Λ F`.
    SquareCover,
    /// `a Λ a⁻¹ ⊆ Λ F`.
    LeftComm,
    /// `a⁻¹ Λ a ⊆ F Λ`.
    RightComm,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::InverseCover => "InverseCover",
            Condition::SquareCover => "SquareCover",
            Condition::LeftComm => "LeftComm",
            Condition::RightComm => "RightComm",
        })
    }
}

/// Minimal witnesses for one covering condition. `witness_set` collects the
/// chosen `f` for every probed element; `exhausted` is false when the sample
/// did not reach the search radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub condition: Condition,
    pub scale: usize,
    pub probe_radius: usize,
    pub probed: usize,
    pub worst_witness_norm: Option<u64>,
    pub witness_set: BTreeSet<Elem>,
    pub exhausted: bool,
}

impl WitnessReport {
    fn empty(condition: Condition, scale: usize, probe_radius: usize, exhausted: bool) -> Self {
        WitnessReport {
            condition,
            scale,
            probe_radius,
            probed: 0,
            worst_witness_norm: Some(0),
            witness_set: BTreeSet::new(),
            exhausted,
        }
    }

    fn record(&mut self, w: Option<(u64, Elem)>) {
        self.probed += 1;
        match w {
            Some((n, f)) => {
                if let Some(worst) = self.worst_witness_norm.as_mut() {
                    *worst = (*worst).max(n);
                }
                self.witness_set.insert(f);
            }
            None => self.worst_witness_norm = None,
        }
    }
}

/// Search space `Λ ∩ ball(R')` with cached inverses.
struct Search<'a> {
    group: &'a Group,
    invs: Vec<Elem>,
}

impl<'a> Search<'a> {
    fn new(lambda: &'a Layered, r: usize) -> Result<Self> {
        let group = &lambda.group;
        let invs = lambda.upto(r).iter().map(|(_, x)| group.inv(x)).collect::<Result<_>>()?;
        Ok(Search { group, invs })
    }

    /// Minimal `(‖f‖, f)` with `t = μ f` (`left`) or `t = f μ`, ties broken
    /// by canonical order. Products are pruned on the first component.
    fn best(&self, t: &Elem, left: bool) -> Result<Option<(u64, Elem)>> {
        let g = self.group;
        let mut best: Option<(u64, Elem)> = None;
        let beats = |n: u64, best: &Option<(u64, Elem)>| best.as_ref().is_none_or(|(b, _)| n <= *b);
        for mu_inv in &self.invs {
            let f = match (g, t, mu_inv) {
                (Group::Product(l, r), Elem::Pair(tp), Elem::Pair(mp)) => {
                    let fl = if left { l.op(&mp.0, &tp.0)? } else { l.op(&tp.0, &mp.0)? };
                    let nl = l.norm(&fl);
                    if !beats(nl, &best) {
                        continue;
                    }
                    let fr = if left { r.op(&mp.1, &tp.1)? } else { r.op(&tp.1, &mp.1)? };
                    Elem::pair(fl, fr)
                }
                _ if left => g.op(mu_inv, t)?,
                _ => g.op(t, mu_inv)?,
            };
            let n = g.norm(&f);
            let better = match &best {
                None => true,
                Some((bn, bf)) => n < *bn || (n == *bn && f < *bf),
            };
            if better {
                best = Some((n, f));
            }
        }
        Ok(best)
    }
}

/// Worst minimal witnesses for `Λ⁻¹ ⊆ Λ F₁` and `Λ² ⊆ Λ F₂`, probing
/// `Λ ∩ ball(r)` and searching `Λ ∩ ball(r_search)`.
pub fn quasi_subgroup_witness(lambda: &Layered, r: usize, r_search: usize) -> Result<(WitnessReport, WitnessReport)> {
    if r_search < 2 * r {
        return Err(Error::Config(alloc::format!("search radius {r_search} must be at least twice the scale {r}")));
    }
    let g = &lambda.group;
    let exhausted = lambda.radius >= r_search;
    let search = Search::new(lambda, r_search)?;
    let probes = lambda.upto(r);
    let mut inv = WitnessReport::empty(Condition::InverseCover, r, r_search, exhausted);
    let mut sq = WitnessReport::empty(Condition::SquareCover, r, r_search, exhausted);
    for (_, x) in probes {
        inv.record(search.best(&g.inv(x)?, true)?);
    }
    for (_, x) in probes {
        for (_, y) in probes {
            sq.record(search.best(&g.op(x, y)?, true)?);
        }
    }
    Ok((inv, sq))
}

/// Worst minimal witnesses for `a Λ a⁻¹ ⊆ Λ F` and `a⁻¹ Λ a ⊆ F Λ`.
pub fn comm_probe(lambda: &Layered, a: &Elem, r: usize, r_search: usize) -> Result<(WitnessReport, WitnessReport)> {
    let g = &lambda.group;
    if !g.contains(a) {
        return Err(Error::GroupMismatch(alloc::format!("{a} is not in {g}")));
    }
    let need = r as u64 + 2 * g.norm(a);
    if (r_search as u64) < need {
        return Err(Error::Config(alloc::format!("search radius {r_search} must be at least {need}")));
    }
    let exhausted = lambda.radius >= r_search;
    let search = Search::new(lambda, r_search)?;
    let a_inv = g.inv(a)?;
    let mut left = WitnessReport::empty(Condition::LeftComm, r, r_search, exhausted);
    let mut right = WitnessReport::empty(Condition::RightComm, r, r_search, exhausted);
    for (_, x) in lambda.upto(r) {
        left.record(search.best(&g.word(&[(a, false), (x, false), (&a_inv, false)])?, true)?);
        right.record(search.best(&g.word(&[(&a_inv, false), (x, false), (a, false)])?, false)?);
    }
    Ok((left, right))
}

/// Extra search radius used by [`comm_profile`]: `max(4, 2‖a‖)`.
pub fn default_slack(group: &Group, a: &Elem) -> usize {
    (2 * group.norm(a) as usize).max(4)
}

fn worst(reports: &[&WitnessReport]) -> u64 {
    reports.iter().map(|w| w.worst_witness_norm.unwrap_or(u64::MAX)).max().unwrap_or(0)
}

/// Commensurator profile of `a`: row `r` is the worse of the two
/// [`comm_probe`] reports at scale `r` with search radius `r + slack`.
pub fn comm_profile(lambda: &Layered, a: &Elem, rmax: usize, window: usize, slack: usize) -> Result<Profile> {
    let mut rows = Vec::with_capacity(rmax);
    for r in 1..=rmax {
        let (l, rt) = comm_probe(lambda, a, r, r + slack)?;
        let mode = if l.exhausted { Mode::Exact } else { Mode::Sampled };
        rows.push(Row { radius: r, set_size: l.probed, max_norm: worst(&[&l, &rt]), mode });
    }
    Ok(Profile::new(ProfileKind::Comm, rows, window))
}

/// Quasi-subgroup profile: row `r` is the worse of the two
/// [`quasi_subgroup_witness`] reports at scale `r`, search radius `2r`.
pub fn qsg_profile(lambda: &Layered, rmax: usize, window: usize) -> Result<Profile> {
    let mut rows = Vec::with_capacity(rmax);
    for r in 1..=rmax {
        let (i, s) = quasi_subgroup_witness(lambda, r, 2 * r)?;
        let mode = if i.exhausted { Mode::Exact } else { Mode::Sampled };
        rows.push(Row { radius: r, set_size: i.probed, max_norm: worst(&[&i, &s]), mode });
    }
    Ok(Profile::new(ProfileKind::Qsg, rows, window))
}

/// Rows record `max ‖φ(x)⁻¹ c⁻¹ φ(x)‖` over `x ∈ ball(r)`.
pub fn pi_probe<M: Map + ?Sized>(phi: &M, c: &Elem, rmax: usize, window: usize) -> Result<Profile> {
    let t = phi.target();
    let c_inv = t.inv(c)?;
    let src = phi.source();
    nested_profile(ProfileKind::Pi, t, rmax, window, |r| {
        let mut set = BTreeSet::new();
        for x in src.ball(r) {
            set.insert(t.conj(&c_inv, &phi.eval(&x)?)?);
        }
        Ok((set, Mode::Exact))
    })
}

/// Rows record `max ‖φ(x⁻¹ b⁻¹ x)‖` over `x ∈ ball(r)`.
pub fn conj_restriction<M: Map + ?Sized>(phi: &M, b: &Elem, rmax: usize, window: usize) -> Result<Profile> {
    let src = phi.source();
    let b_inv = src.inv(b)?;
    nested_profile(ProfileKind::ConjRestriction, phi.target(), rmax, window, |r| {
        let mut set = BTreeSet::new();
        for x in src.ball(r) {
            set.insert(phi.eval(&src.conj(&b_inv, &x)?)?);
        }
        Ok((set, Mode::Exact))
    })
}

/// Rows record `max ‖φ(z⁻¹ a⁻¹ z) · φ(z)⁻¹ b φ(z)‖` over `z ∈ ball(r)`.
pub fn s_ab_probe<M: Map + ?Sized>(phi: &M, a: &Elem, b: &Elem, rmax: usize, window: usize) -> Result<Profile> {
    let (src, t) = (phi.source(), phi.target());
    let a_inv = src.inv(a)?;
    if !t.contains(b) {
        return Err(Error::GroupMismatch(alloc::format!("{b} is not in {t}")));
    }
    nested_profile(ProfileKind::SAb, t, rmax, window, |r| {
        let mut set = BTreeSet::new();
        for z in src.ball(r) {
            let left = phi.eval(&src.conj(&a_inv, &z)?)?;
            set.insert(t.op(&left, &t.conj(b, &phi.eval(&z)?)?)?);
        }
        Ok((set, Mode::Exact))
    })
}

/// All products of at most `len` factors from `gens ∪ gens⁻¹`, including
/// the empty product. Stops growing once the set reaches `cap` elements and
/// then reports [`Mode::Sampled`].
pub fn products_upto(group: &Group, gens: &BTreeSet<Elem>, len: usize, cap: usize) -> Result<(BTreeSet<Elem>, Mode)> {
    let mut sym = BTreeSet::new();
    for g in gens {
        sym.insert(g.clone());
        sym.insert(group.inv(g)?);
    }
    let mut all = BTreeSet::new();
    all.insert(group.identity());
    let mut frontier: Vec<Elem> = alloc::vec![group.identity()];
    for _ in 0..len {
        let mut next = Vec::new();
        for x in &frontier {
            for s in &sym {
                let y = group.op(x, s)?;
                if !all.contains(&y) {
                    if all.len() >= cap {
                        return Ok((all, Mode::Sampled));
                    }
                    all.insert(y.clone());
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok((all, Mode::Exact))
}

/// Default size cap for generated subgroup samples.
pub const DEFAULT_SAMPLE_CAP: usize = 100_000;

/// Products of at most `len` elements of `D(φ, radius) ∪ D(φ, radius)⁻¹`.
pub fn delta_sample<M: Map + ?Sized>(phi: &M, radius: usize, len: usize, cap: usize) -> Result<(BTreeSet<Elem>, Mode)> {
    let d = defects::set_d(phi, radius)?;
    products_upto(phi.target(), &d, len, cap)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PertDeltaOutcome {
    pub verdict: Classification,
    /// Constants whose perturbation was profiled, in canonical order.
    pub tested: Vec<Elem>,
    pub failing: Option<Elem>,
}

impl PertDeltaOutcome {
    pub fn holds(&self) -> bool {
        self.verdict == Classification::Plateau
    }
}

/// For every `c` in [`delta_sample`], checks that the left-defect profile of
/// `g ↦ φ(g) c` is a plateau. Verdict `Plateau` means every perturbation
/// passed, `Growing` that some `c` failed, `Inconclusive` that `φ` itself
/// does not plateau.
pub fn pertdelta_check<M: Map + ?Sized>(
    phi: &M,
    radius: usize,
    len: usize,
    rmax: usize,
    window: usize,
) -> Result<PertDeltaOutcome> {
    let base = defects::profile(ProfileKind::D, phi, rmax, window, 0, 0)?;
    if !base.classification.is_plateau() {
        return Ok(PertDeltaOutcome { verdict: Classification::Inconclusive, tested: Vec::new(), failing: None });
    }
    let (cs, _) = delta_sample(phi, radius, len, DEFAULT_SAMPLE_CAP)?;
    let (src, t) = (phi.source().clone(), phi.target().clone());
    let mut tested = Vec::new();
    for c in cs {
        let perturbed = FnMap::new(src.clone(), t.clone(), |x: &Elem| t.op(&phi.eval(x)?, &c));
        let p = defects::profile(ProfileKind::D, &perturbed, rmax, window, 0, 0)?;
        tested.push(c.clone());
        if !p.classification.is_plateau() {
            return Ok(PertDeltaOutcome { verdict: Classification::Growing, tested, failing: Some(c) });
        }
    }
    Ok(PertDeltaOutcome { verdict: Classification::Plateau, tested, failing: None })
}

/// Largest norm of `D(φ, radius)²`, the slack allowed when a map is only
/// symmetric up to its defect.
pub fn symmetry_slack<M: Map + ?Sized>(phi: &M, radius: usize) -> Result<u64> {
    let d = defects::pair_set(phi, PairDefect::D, radius)?;
    let t = phi.target();
    let mut worst = 0;
    for x in &d {
        for y in &d {
            worst = worst.max(t.norm(&t.op(x, y)?));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmaps::GroupMap;

    fn f2() -> Group {
        Group::Free(2)
    }

    fn w(s: &str) -> Elem {
        f2().parse_elem(s).unwrap()
    }

    #[test]
    fn graph_sizes() {
        let b = GroupMap::parse("brooks{ab}", &f2(), None).unwrap();
        assert_eq!(graph_sample(&b, 3).unwrap().len(), 53);
        let c = GroupMap::parse("const{ab}", &f2(), None).unwrap();
        let g = graph_sample(&c, 1).unwrap();
        assert!(g.items().iter().all(|(_, x)| matches!(x, Elem::Pair(p) if p.1 == w("ab"))));
    }

    #[test]
    fn subgroups_need_no_witnesses() {
        let h = GroupMap::parse("hom{a->ab,b->b}", &f2(), None).unwrap();
        let lambda = graph_sample(&h, 5).unwrap();
        let (inv, sq) = quasi_subgroup_witness(&lambda, 2, 5).unwrap();
        assert_eq!((inv.worst_witness_norm, sq.worst_witness_norm), (Some(0), Some(0)));
        assert!(quasi_subgroup_witness(&lambda, 3, 5).is_err());
    }

    #[test]
    fn brooks_square_witnesses_live_in_right_defects() {
        let b = GroupMap::parse("brooks{ab}", &f2(), None).unwrap();
        let lambda = graph_sample(&b, 4).unwrap();
        let (_, sq) = quasi_subgroup_witness(&lambda, 2, 6).unwrap();
        let dstar = crate::profile::max_norm(&Group::Z, &defects::set_dstar(&b, 2).unwrap());
        assert!(sq.worst_witness_norm.unwrap() <= dstar);
        let r = GroupMap::parse("random{seed=5,domR=4,tgtR=4}", &f2(), None).unwrap();
        let (_, sq_r) = quasi_subgroup_witness(&graph_sample(&r, 4).unwrap(), 2, 6).unwrap();
        assert!(sq_r.worst_witness_norm > sq.worst_witness_norm);
    }

    #[test]
    fn pi_probe_on_free_identity() {
        let id = GroupMap::parse("id", &f2(), None).unwrap();
        let p = pi_probe(&id, &w("a"), 5, 3).unwrap();
        assert_eq!(p.max_norms(), [3, 5, 7, 9, 11]);
        assert_eq!(p.classification, Classification::Growing);
        let z = GroupMap::parse("floor_scale{1,2}", &Group::Z, None).unwrap();
        assert_eq!(pi_probe(&z, &Elem::Int(-2), 5, 3).unwrap().max_norms(), [2; 5]);
    }

    #[test]
    fn s_probe_examples() {
        let id = GroupMap::parse("id", &f2(), None).unwrap();
        let p = s_ab_probe(&id, &w("a"), &w("A"), 4, 3).unwrap();
        assert_eq!(p.max_norms(), [4, 6, 8, 10]);
        let p = s_ab_probe(&id, &w("A"), &w("A"), 4, 3).unwrap();
        assert_eq!(p.max_norms(), [0; 4]);
        let p = s_ab_probe(&id, &w(""), &w(""), 4, 3).unwrap();
        assert_eq!(p.classification, Classification::Plateau);
    }

    #[test]
    fn delta_samples() {
        let f = GroupMap::parse("floor_scale{1,2}", &Group::Z, None).unwrap();
        let (d, mode) = delta_sample(&f, 6, 3, DEFAULT_SAMPLE_CAP).unwrap();
        assert_eq!(mode, Mode::Exact);
        assert_eq!(d, (-3..=3).map(Elem::Int).collect());
        let h = GroupMap::parse("hom{a->ab,b->b}", &f2(), None).unwrap();
        assert_eq!(delta_sample(&h, 3, 3, DEFAULT_SAMPLE_CAP).unwrap().0.len(), 1);
    }

    #[test]
    fn commensurator_examples() {
        let cyc = Layered::cyclic(f2(), &w("a"), 6).unwrap();
        let (l, r) = comm_probe(&cyc, &w("a"), 2, 6).unwrap();
        assert_eq!((l.worst_witness_norm, r.worst_witness_norm), (Some(0), Some(0)));

        let h = GroupMap::parse("hom{1->a}", &Group::Z, Some(&f2())).unwrap();
        let lambda = graph_sample(&h, 8).unwrap();
        let a = Elem::pair(Elem::Int(0), w("a"));
        let (l, r) = comm_probe(&lambda, &a, 2, 6).unwrap();
        assert_eq!((l.worst_witness_norm, r.worst_witness_norm), (Some(0), Some(0)));

        let id = GroupMap::parse("id", &f2(), None).unwrap();
        let lambda = graph_sample(&id, 7).unwrap();
        let a = Elem::pair(w(""), w("a"));
        let p = comm_profile(&lambda, &a, 3, 3, 4).unwrap();
        assert_eq!(p.classification, Classification::Growing, "{:?}", p.max_norms());
    }
}
