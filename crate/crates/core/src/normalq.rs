//! Normality conditions for quasi-quadratic maps.
//!
//! With `K = P_2(φ)` and `Ξ = ⟨K⟩`, a unital map is checked for
//!
//! 1. `P_2(φ)` bounded (profile plateau),
//! 2. `φ(G)` normalizes `Ξ`,
//! 3. `φ(G) ∪ φ(G)⁻¹` is covered by finitely many cosets `C_H(Ξ) y`, `y ∈ Y`,
//!    with `Y` symmetric,
//! 4. `Y^{n+1} ⊆ Y^n C_H(Ξ) Ξ` for some `n`.
//!
//! Abelian targets pass 2–4 outright. Finite targets are decided exactly.
//! In free targets the centralizer of a nontrivial element is the cyclic
//! group generated by its primitive root, which makes 2–4 exact whenever `Ξ`
//! is cyclic. A non-cyclic `Ξ` in a free group has trivial centralizer;
//! membership in `Ξ` is then only searched for in a finite sample.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::coarse::{products_upto, DEFAULT_SAMPLE_CAP};
use crate::diffs::{pd_profile, set_pd};
use crate::gmaps::Map;
use crate::groups::{Elem, Group};
use crate::profile::{Classification, Profile};
use crate::sample::{Mode, DEFAULT_BUDGET};
use crate::words::Word;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetKind {
    Abelian,
    Finite,
    Free,
}

impl TargetKind {
    pub fn of(g: &Group) -> Result<Self> {
        if g.is_abelian() {
            Ok(TargetKind::Abelian)
        } else if g.is_finite() {
            Ok(TargetKind::Finite)
        } else if matches!(g, Group::Free(_)) {
            Ok(TargetKind::Free)
        } else {
            Err(Error::Config(alloc::format!("normality checks do not support the target {g}")))
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TargetKind::Abelian => "abelian",
            TargetKind::Finite => "finite",
            TargetKind::Free => "free",
        }
    }
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest `n` tried for the power cover.
    pub max_power: usize,
    /// Size cap for generated subgroup samples.
    pub sample_cap: usize,
    pub budget: u64,
    pub window: usize,
    pub seed: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_power: 6, sample_cap: DEFAULT_SAMPLE_CAP, budget: DEFAULT_BUDGET, window: 3, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q1 {
    pub profile: Profile,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q2 {
    pub outcome: Outcome,
    /// `(g, k)` with `φ(g) k φ(g)⁻¹` not found in `Ξ`.
    pub counterexample: Option<(Elem, Elem)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q3 {
    pub outcome: Outcome,
    pub transversal: Vec<Elem>,
    pub uncovered: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q4 {
    pub outcome: Outcome,
    pub n: Option<usize>,
    pub exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalityReport {
    pub target_kind: TargetKind,
    pub xi_sample: BTreeSet<Elem>,
    pub xi_mode: Mode,
    pub q1: Q1,
    pub q2: Q2,
    pub q3: Q3,
    pub q4: Q4,
}

impl NormalityReport {
    pub fn passes(&self) -> bool {
        [self.q1.outcome, self.q2.outcome, self.q3.outcome, self.q4.outcome].iter().all(|o| *o == Outcome::Pass)
    }
}

/// Products of at most `len` elements of `P_2(φ, radius)^{±1}`.
pub fn xi_sample<M: Map + ?Sized>(phi: &M, radius: usize, len: usize, caps: &Caps) -> Result<(BTreeSet<Elem>, Mode)> {
    let (k, mode) = set_pd(phi, 2, radius, caps.budget, caps.seed)?;
    let (xi, m2) = products_upto(phi.target(), &k, len, caps.sample_cap)?;
    Ok((xi, mode.join(m2)))
}

/// What is known about `Ξ` and its centralizer.
enum Structure {
    /// `C_H(Ξ) = H`.
    Central,
    /// Finite target: `Ξ` and `C_H(Ξ)` listed exactly.
    Finite { xi: BTreeSet<Elem>, centralizer: BTreeSet<Elem> },
    /// Free target with `Ξ = ⟨root^step⟩` and `C_H(Ξ) = ⟨root⟩`.
    Cyclic { root: Word, step: i64 },
    /// Free target with non-cyclic `Ξ`: trivial centralizer, sampled `Ξ`.
    Wide { sample: BTreeSet<Elem> },
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn structure(h: &Group, kind: TargetKind, k: &BTreeSet<Elem>, xi: &BTreeSet<Elem>) -> Result<Structure> {
    let nontrivial: Vec<&Elem> = k.iter().filter(|x| **x != h.identity()).collect();
    if kind == TargetKind::Abelian || nontrivial.is_empty() {
        return Ok(Structure::Central);
    }
    match kind {
        TargetKind::Finite => {
            let all = h.ball(usize::MAX >> 1);
            let (closure, _) = products_upto(h, k, all.len(), usize::MAX)?;
            let mut centralizer = BTreeSet::new();
            for x in all {
                let mut central = true;
                for g in &nontrivial {
                    central &= h.commutes(&x, g)?;
                }
                if central {
                    centralizer.insert(x);
                }
            }
            Ok(Structure::Finite { xi: closure, centralizer })
        }
        _ => {
            let first = nontrivial[0].as_word().expect("free target");
            let (mut root, _) = first.root()?;
            if root.inv() < root {
                root = root.inv();
            }
            let mut step = 0;
            for x in &nontrivial {
                match x.as_word().and_then(|w| w.log_base(&root)) {
                    Some(e) => step = gcd(step, e),
                    None => return Ok(Structure::Wide { sample: xi.clone() }),
                }
            }
            Ok(Structure::Cyclic { root, step })
        }
    }
}

impl Structure {
    /// `Some(answer)` when membership in `Ξ` is decided.
    fn in_xi(&self, h: &Group, x: &Elem) -> Option<bool> {
        match self {
            Structure::Central => None,
            Structure::Finite { xi, .. } => Some(xi.contains(x)),
            Structure::Cyclic { root, step } => {
                Some(x.as_word().and_then(|w| w.log_base(root)).is_some_and(|e| e % step == 0))
            }
            Structure::Wide { sample } => {
                if sample.contains(x) || *x == h.identity() {
                    Some(true)
                } else {
                    None
                }
            }
        }
    }

    fn in_centralizer(&self, h: &Group, x: &Elem) -> Result<bool> {
        Ok(match self {
            Structure::Central => true,
            Structure::Finite { centralizer, .. } => centralizer.contains(x),
            Structure::Cyclic { root, .. } => h.commutes(x, &Elem::Word(root.clone()))?,
            Structure::Wide { .. } => *x == h.identity(),
        })
    }

    /// Whether `x ∈ C_H(Ξ) Ξ`; `None` when undecided.
    fn in_cxi(&self, h: &Group, x: &Elem) -> Result<Option<bool>> {
        Ok(match self {
            Structure::Central => Some(true),
            Structure::Finite { xi, .. } => {
                let mut found = false;
                for k in xi {
                    found |= self.in_centralizer(h, &h.op(x, &h.inv(k)?)?)?;
                }
                Some(found)
            }
            // Ξ ⊆ C_H(Ξ) here.
            Structure::Cyclic { .. } => Some(self.in_centralizer(h, x)?),
            Structure::Wide { .. } => self.in_xi(h, x),
        })
    }
}

fn images_pm<M: Map + ?Sized>(phi: &M, radius: usize) -> Result<Vec<Elem>> {
    let h = phi.target();
    let mut set = BTreeSet::new();
    for x in phi.source().ball(radius) {
        let v = phi.eval(&x)?;
        set.insert(h.inv(&v)?);
        set.insert(v);
    }
    let mut out: Vec<Elem> = set.into_iter().collect();
    out.sort_by(|a, b| h.norm(a).cmp(&h.norm(b)).then_with(|| a.cmp(b)));
    Ok(out)
}

fn covered(st: &Structure, h: &Group, y: &[Elem], x: &Elem) -> Result<bool> {
    for t in y {
        if st.in_centralizer(h, &h.op(x, &h.inv(t)?)?)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn check_q3(st: &Structure, h: &Group, build: &[Elem], test: &[Elem]) -> Result<Q3> {
    let mut y = alloc::vec![h.identity()];
    for x in build {
        if !covered(st, h, &y, x)? {
            let xi = h.inv(x)?;
            y.push(x.clone());
            if xi != *x {
                y.push(xi);
            }
        }
    }
    let mut uncovered = Vec::new();
    for x in test {
        if !covered(st, h, &y, x)? {
            uncovered.push(x.clone());
        }
    }
    let outcome = if uncovered.is_empty() { Outcome::Pass } else { Outcome::Fail };
    Ok(Q3 { outcome, transversal: y, uncovered })
}

fn product_set(h: &Group, a: &BTreeSet<Elem>, b: &[Elem]) -> Result<BTreeSet<Elem>> {
    let mut out = BTreeSet::new();
    for x in a {
        for y in b {
            out.insert(h.op(x, y)?);
        }
    }
    Ok(out)
}

fn check_q4(st: &Structure, h: &Group, y: &[Elem], caps: &Caps) -> Result<Q4> {
    // powers[n] = Y^n
    let mut prev: BTreeSet<Elem> = core::iter::once(h.identity()).collect();
    let mut exhausted = true;
    for n in 0..=caps.max_power {
        let next = product_set(h, &prev, y)?;
        if next.len() > caps.sample_cap || prev.len() > caps.sample_cap {
            exhausted = false;
            break;
        }
        let mut holds = true;
        let mut decided = true;
        'z: for z in &next {
            for w in &prev {
                match st.in_cxi(h, &h.op(&h.inv(w)?, z)?)? {
                    Some(true) => continue 'z,
                    Some(false) => {}
                    None => decided = false,
                }
            }
            holds = false;
            break;
        }
        if holds {
            return Ok(Q4 { outcome: Outcome::Pass, n: Some(n), exhausted });
        }
        exhausted &= decided;
        prev = next;
    }
    let outcome = if exhausted && h.is_finite() { Outcome::Fail } else { Outcome::Inconclusive };
    Ok(Q4 { outcome, n: None, exhausted })
}

/// Runs the four normality checks with images over `ball(radius)` and a
/// `Ξ` sample of words of length at most `len` in `P_2`.
pub fn check_normality<M: Map + ?Sized>(phi: &M, radius: usize, len: usize, caps: &Caps) -> Result<NormalityReport> {
    let h = phi.target();
    let kind = TargetKind::of(h)?;
    let profile = pd_profile(phi, 2, radius, caps.window, caps.budget, caps.seed)?;
    let q1_outcome = match profile.classification {
        Classification::Plateau => Outcome::Pass,
        Classification::Growing => Outcome::Fail,
        Classification::Inconclusive => Outcome::Inconclusive,
    };
    let (k, _) = set_pd(phi, 2, radius, caps.budget, caps.seed)?;
    let (xi, xi_mode) = products_upto(h, &k, len, caps.sample_cap)?;
    let st = structure(h, kind, &k, &xi)?;

    let mut q2 = Q2 { outcome: Outcome::Pass, counterexample: None };
    if !matches!(st, Structure::Central) {
        'outer: for g in phi.source().ball(radius) {
            let v = phi.eval(&g)?;
            let v_inv = h.inv(&v)?;
            for kk in &k {
                let conj = h.word(&[(&v, false), (kk, false), (&v_inv, false)])?;
                match st.in_xi(h, &conj) {
                    Some(true) => {}
                    Some(false) => {
                        q2 = Q2 { outcome: Outcome::Fail, counterexample: Some((g, kk.clone())) };
                        break 'outer;
                    }
                    None if q2.counterexample.is_none() => {
                        q2 = Q2 { outcome: Outcome::Inconclusive, counterexample: Some((g.clone(), kk.clone())) };
                    }
                    None => {}
                }
            }
        }
    }

    let test = images_pm(phi, radius)?;
    let build = if h.is_finite() { test.clone() } else { images_pm(phi, radius.saturating_sub(1))? };
    let q3 = check_q3(&st, h, &build, &test)?;
    let q4 = check_q4(&st, h, &q3.transversal, caps)?;
    Ok(NormalityReport {
        target_kind: kind,
        xi_sample: xi,
        xi_mode,
        q1: Q1 { profile, outcome: q1_outcome },
        q2,
        q3,
        q4,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HyperbolicVerdict {
    /// `P_2` sample is trivial.
    QuadraticLike,
    /// All sampled images are powers of `root`.
    CyclicImage { root: Word },
    /// Two sampled images with different primitive roots.
    Violation { x: Elem, y: Elem },
}

impl HyperbolicVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            HyperbolicVerdict::QuadraticLike => "QuadraticLike",
            HyperbolicVerdict::CyclicImage { .. } => "CyclicImage",
            HyperbolicVerdict::Violation { .. } => "Violation",
        }
    }
}

/// For maps into a free group: quadratic at this scale, cyclic image, or
/// neither.
pub fn hyperbolic_desk_check<M: Map + ?Sized>(phi: &M, radius: usize, caps: &Caps) -> Result<HyperbolicVerdict> {
    let h = phi.target();
    if !matches!(h, Group::Free(_)) {
        return Err(Error::Config(alloc::format!("expected a free target, got {h}")));
    }
    let (k, _) = set_pd(phi, 2, radius, caps.budget, caps.seed)?;
    if k.iter().all(|x| *x == h.identity()) {
        return Ok(HyperbolicVerdict::QuadraticLike);
    }
    let mut root: Option<(Word, Elem)> = None;
    for x in phi.source().ball(radius) {
        let v = phi.eval(&x)?;
        let w = v.as_word().expect("free target");
        if w.is_identity() {
            continue;
        }
        match &root {
            None => {
                let (r, _) = w.root()?;
                root = Some((if r.inv() < r { r.inv() } else { r }, v.clone()));
            }
            Some((r, first)) => {
                if w.log_base(r).is_none() {
                    return Ok(HyperbolicVerdict::Violation { x: first.clone(), y: v });
                }
            }
        }
    }
    let root = root.map_or_else(|| Word::identity(h_rank(h)), |(r, _)| r);
    Ok(HyperbolicVerdict::CyclicImage { root })
}

fn h_rank(h: &Group) -> u32 {
    match h {
        Group::Free(k) => *k,
        _ => 0,
    }
}
