//! Defect sets of a map `φ: G → H` over balls of the source.
//!
//! * left defect `D`: `φ(y)⁻¹ φ(x)⁻¹ φ(xy)`
//! * right defect `D*`: `φ(x) φ(y) φ(xy)⁻¹`
//! * middle defect `M`: `φ(x)⁻¹ φ(xy) φ(y)⁻¹`
//! * quadruple set `A`: `μ_φ(x1, x2, x3, x4)` over multiplicative quadruples.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::gmaps::Map;
use crate::groups::{Elem, Group};
use crate::profile::{nested_profile, row_of, Profile, ProfileKind};
use crate::sample::{for_each_tuple, Mode};
use crate::{Error, Result};

/// The pairwise defect sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairDefect {
    D,
    Dstar,
    M,
}

impl PairDefect {
    pub fn kind(self) -> ProfileKind {
        match self {
            PairDefect::D => ProfileKind::D,
            PairDefect::Dstar => ProfileKind::Dstar,
            PairDefect::M => ProfileKind::M,
        }
    }

    /// The defect at `(x, y)` given `φ(x)`, `φ(y)` and `φ(xy)`.
    fn combine(self, h: &Group, fx: &Elem, fy: &Elem, fxy: &Elem) -> Result<Elem> {
        match self {
            PairDefect::D => h.word(&[(fy, true), (fx, true), (fxy, false)]),
            PairDefect::Dstar => h.word(&[(fx, false), (fy, false), (fxy, true)]),
            PairDefect::M => h.word(&[(fx, true), (fxy, false), (fy, true)]),
        }
    }

    pub fn at<M: Map + ?Sized>(self, phi: &M, x: &Elem, y: &Elem) -> Result<Elem> {
        let xy = phi.source().op(x, y)?;
        self.combine(phi.target(), &phi.eval(x)?, &phi.eval(y)?, &phi.eval(&xy)?)
    }
}

/// Incremental pair enumeration: each call to `extend` adds the pairs that
/// involve at least one element of the new ball shell.
struct PairScan<'m, M: ?Sized> {
    phi: &'m M,
    which: PairDefect,
    ball: Vec<Elem>,
    values: Vec<Elem>,
    set: BTreeSet<Elem>,
}

impl<'m, M: Map + ?Sized> PairScan<'m, M> {
    fn new(phi: &'m M, which: PairDefect) -> Self {
        PairScan { phi, which, ball: Vec::new(), values: Vec::new(), set: BTreeSet::new() }
    }

    fn extend(&mut self, radius: usize) -> Result<()> {
        let (src, tgt) = (self.phi.source(), self.phi.target());
        let ball = src.ball(radius);
        let old = self.ball.len();
        debug_assert!(ball[..old] == self.ball[..]);
        for x in &ball[old..] {
            self.values.push(self.phi.eval(x)?);
        }
        for i in 0..ball.len() {
            let j0 = if i < old { old } else { 0 };
            for j in j0..ball.len() {
                let xy = src.op(&ball[i], &ball[j])?;
                let fxy = self.phi.eval(&xy)?;
                self.set.insert(self.which.combine(tgt, &self.values[i], &self.values[j], &fxy)?);
            }
        }
        self.ball = ball;
        Ok(())
    }
}

/// The defect set over all pairs in `ball(radius)²`.
pub fn pair_set<M: Map + ?Sized>(phi: &M, which: PairDefect, radius: usize) -> Result<BTreeSet<Elem>> {
    let mut scan = PairScan::new(phi, which);
    scan.extend(radius)?;
    Ok(scan.set)
}

pub fn set_d<M: Map + ?Sized>(phi: &M, radius: usize) -> Result<BTreeSet<Elem>> {
    pair_set(phi, PairDefect::D, radius)
}

pub fn set_dstar<M: Map + ?Sized>(phi: &M, radius: usize) -> Result<BTreeSet<Elem>> {
    pair_set(phi, PairDefect::Dstar, radius)
}

pub fn set_m<M: Map + ?Sized>(phi: &M, radius: usize) -> Result<BTreeSet<Elem>> {
    pair_set(phi, PairDefect::M, radius)
}

/// A multiplicative quadruple `x1 x2⁻¹ x3 x4⁻¹ = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadruple(pub [Elem; 4]);

impl Quadruple {
    /// The quadruple with `x4 = x1 x2⁻¹ x3`.
    pub fn complete(g: &Group, x1: &Elem, x2: &Elem, x3: &Elem) -> Result<Self> {
        let x4 = g.word(&[(x1, false), (x2, true), (x3, false)])?;
        Ok(Quadruple([x1.clone(), x2.clone(), x3.clone(), x4]))
    }

    pub fn new(g: &Group, x: [Elem; 4]) -> Result<Self> {
        let rel = g.word(&[(&x[0], false), (&x[1], true), (&x[2], false), (&x[3], true)])?;
        if rel != g.identity() {
            return Err(Error::Malformed(alloc::format!(
                "({}, {}, {}, {}) is not multiplicative",
                x[0],
                x[1],
                x[2],
                x[3]
            )));
        }
        Ok(Quadruple(x))
    }

    /// `(x4, x3, x2, x1)`.
    pub fn opposite(&self) -> Self {
        let [a, b, c, d] = self.0.clone();
        Quadruple([d, c, b, a])
    }

    /// Right translate `(x1 t, x2 t, x3 t, x4 t)`.
    pub fn translate(&self, g: &Group, t: &Elem) -> Result<Self> {
        let mut out = self.0.clone();
        for x in out.iter_mut() {
            *x = g.op(x, t)?;
        }
        Ok(Quadruple(out))
    }
}

/// `μ_φ(x) = φ(x1) φ(x2)⁻¹ φ(x3) φ(x4)⁻¹`.
pub fn mu<M: Map + ?Sized>(phi: &M, q: &Quadruple) -> Result<Elem> {
    let v = [phi.eval(&q.0[0])?, phi.eval(&q.0[1])?, phi.eval(&q.0[2])?, phi.eval(&q.0[3])?];
    phi.target().word(&[(&v[0], false), (&v[1], true), (&v[2], false), (&v[3], true)])
}

/// `A(φ)` over `(x1, x2, x3) ∈ ball(radius)³`.
pub fn set_a<M: Map + ?Sized>(phi: &M, radius: usize, budget: u64, seed: u64) -> Result<(BTreeSet<Elem>, Mode)> {
    let src = phi.source();
    let ball = src.ball(radius);
    let values: Vec<Elem> = ball.iter().map(|x| phi.eval(x)).collect::<Result<_>>()?;
    let inv: Vec<Elem> = ball.iter().map(|x| src.inv(x)).collect::<Result<_>>()?;
    let tgt = phi.target();
    let mut out = BTreeSet::new();
    let mode = for_each_tuple(ball.len(), 3, budget, seed, |i| {
        let x4 = src.op(&src.op(&ball[i[0]], &inv[i[1]])?, &ball[i[2]])?;
        let f4 = phi.eval(&x4)?;
        let v = tgt.word(&[(&values[i[0]], false), (&values[i[1]], true), (&values[i[2]], false), (&f4, true)])?;
        out.insert(v);
        Ok(())
    })?;
    Ok((out, mode))
}

/// Profile of one of the sets `D`, `D*`, `M` or `A` over radii `1..=rmax`.
pub fn profile<M: Map + ?Sized>(
    kind: ProfileKind,
    phi: &M,
    rmax: usize,
    window: usize,
    budget: u64,
    seed: u64,
) -> Result<Profile> {
    let which = match kind {
        ProfileKind::D => PairDefect::D,
        ProfileKind::Dstar => PairDefect::Dstar,
        ProfileKind::M => PairDefect::M,
        ProfileKind::A => {
            return nested_profile(kind, phi.target(), rmax, window, |r| set_a(phi, r, budget, seed));
        }
        other => return Err(Error::Config(alloc::format!("{other} is not a defect set"))),
    };
    let mut scan = PairScan::new(phi, which);
    let mut rows = Vec::with_capacity(rmax);
    for r in 1..=rmax {
        scan.extend(r)?;
        rows.push(row_of(phi.target(), r, &scan.set, Mode::Exact));
    }
    Ok(Profile::new(kind, rows, window))
}

/// Equivariance defect of `μ_φ` under right translation: rows record
/// `max ‖μ_φ(x t)⁻¹ μ_φ(x)‖` over `(x1, x2, x3, t) ∈ ball(r)⁴`.
pub fn equiv_defect<M: Map + ?Sized>(phi: &M, rmax: usize, window: usize, budget: u64, seed: u64) -> Result<Profile> {
    let src = phi.source();
    let tgt = phi.target();
    nested_profile(ProfileKind::Equiv, tgt, rmax, window, |r| {
        let ball = src.ball(r);
        let mut out = BTreeSet::new();
        let mode = for_each_tuple(ball.len(), 4, budget, seed, |i| {
            let q = Quadruple::complete(src, &ball[i[0]], &ball[i[1]], &ball[i[2]])?;
            let moved = q.translate(src, &ball[i[3]])?;
            out.insert(tgt.op(&tgt.inv(&mu(phi, &moved)?)?, &mu(phi, &q)?)?);
            Ok(())
        })?;
        Ok((out, mode))
    })
}

/// `{ a⁻¹ b : a ∈ m, b ∈ m }`.
pub fn inverse_product(group: &Group, m: &BTreeSet<Elem>) -> Result<BTreeSet<Elem>> {
    let mut out = BTreeSet::new();
    for a in m {
        let ai = group.inv(a)?;
        for b in m {
            out.insert(group.op(&ai, b)?);
        }
    }
    Ok(out)
}

/// Whether `z ∈ m⁻¹ m`, i.e. some `a ∈ m` has `a z ∈ m`.
pub fn in_inverse_product(group: &Group, m: &BTreeSet<Elem>, z: &Elem) -> Result<bool> {
    for a in m {
        if m.contains(&group.op(a, z)?) {
            return Ok(true);
        }
    }
    Ok(false)
}
