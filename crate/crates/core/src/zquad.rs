//! Unital quadratic candidates on `Z` generated from their values at 1 and 2,
//! and degree-two relator checks.
//!
//! A unital quadratic map `φ: Z → H` satisfies
//! `φ(n+1) φ(2)⁻¹ φ(1) φ(n)⁻¹ φ(n-1) φ(1) φ(n)⁻¹ = 1` for all `n`. Here the
//! recursion is taken as the definition of the sequence; whether the result
//! really is quadratic is checked separately by [`window_check`].

use alloc::vec::Vec;

use crate::diffs;
use crate::gmaps::Map;
use crate::groups::{Elem, Group};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZQuadSeed {
    pub a: Elem,
    pub b: Elem,
    pub target: Group,
}

impl ZQuadSeed {
    pub fn new(target: Group, a: Elem, b: Elem) -> Result<Self> {
        for x in [&a, &b] {
            if !target.contains(x) {
                return Err(Error::GroupMismatch(alloc::format!("{x} is not in {target}")));
            }
        }
        Ok(ZQuadSeed { a, b, target })
    }
}

/// Memoized two-sided sequence `n ↦ φ(n)`.
#[derive(Clone, Debug)]
pub struct ZQuadSeq {
    seed: ZQuadSeed,
    a_inv: Elem,
    /// `pos[n] = φ(n)`.
    pos: Vec<Elem>,
    /// `neg[n] = φ(-n)`.
    neg: Vec<Elem>,
}

impl ZQuadSeq {
    pub fn new(seed: ZQuadSeed) -> Self {
        let g = &seed.target;
        let one = g.identity();
        let a_inv = g.inv(&seed.a).expect("seed validated");
        ZQuadSeq { a_inv, pos: alloc::vec![one.clone(), seed.a.clone(), seed.b.clone()], neg: alloc::vec![one], seed }
    }

    pub fn seed(&self) -> &ZQuadSeed {
        &self.seed
    }

    pub fn get(&mut self, n: i64) -> Result<Elem> {
        let g = &self.seed.target;
        let k = n.unsigned_abs() as usize;
        if n >= 0 {
            while self.pos.len() <= k {
                // φ(n+1) = φ(n) a⁻¹ φ(n-1)⁻¹ φ(n) a⁻¹ b
                let m = self.pos.len() - 1;
                let (cur, prev) = (&self.pos[m], &self.pos[m - 1]);
                let next = g.word(&[
                    (cur, false),
                    (&self.a_inv, false),
                    (prev, true),
                    (cur, false),
                    (&self.a_inv, false),
                    (&self.seed.b, false),
                ])?;
                self.pos.push(next);
            }
            Ok(self.pos[k].clone())
        } else {
            while self.neg.len() <= k {
                // φ(n-1) = φ(n) a⁻¹ b φ(n+1)⁻¹ φ(n) a⁻¹ with n = -(len-1)
                let m = self.neg.len() - 1;
                let cur = &self.neg[m];
                let after = if m == 0 { &self.pos[1] } else { &self.neg[m - 1] };
                let next = g.word(&[
                    (cur, false),
                    (&self.a_inv, false),
                    (&self.seed.b, false),
                    (after, true),
                    (cur, false),
                    (&self.a_inv, false),
                ])?;
                self.neg.push(next);
            }
            Ok(self.neg[k].clone())
        }
    }
}

/// `φ(n)` for the sequence generated by `seed`.
pub fn extend(seed: &ZQuadSeed, n: i64) -> Result<Elem> {
    ZQuadSeq::new(seed.clone()).get(n)
}

/// The sequence as a map `Z → target`.
pub struct ZQuadMap {
    source: Group,
    target: Group,
    seq: core::cell::RefCell<ZQuadSeq>,
}

impl ZQuadMap {
    pub fn new(seed: ZQuadSeed) -> Self {
        ZQuadMap { source: Group::Z, target: seed.target.clone(), seq: core::cell::RefCell::new(ZQuadSeq::new(seed)) }
    }
}

impl Map for ZQuadMap {
    fn source(&self) -> &Group {
        &self.source
    }

    fn target(&self) -> &Group {
        &self.target
    }

    fn eval(&self, x: &Elem) -> Result<Elem> {
        match x {
            Elem::Int(n) => self.seq.borrow_mut().get(*n),
            _ => Err(Error::GroupMismatch(alloc::format!("{x} is not an integer"))),
        }
    }
}

/// Outcome of a relator or window check; `witness` is the first violating
/// triple in enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub holds: bool,
    pub witness: Option<[Elem; 3]>,
    pub value: Option<Elem>,
    pub checked: u64,
}

/// Checks `(𝔡_{g1,g2,g3}φ)(1) = 1` for all `|g_i| ≤ s`, evaluating the
/// sequence only on `[-3s, 3s]`. Requires `n ≥ 3s`.
pub fn window_check(seed: &ZQuadSeed, n: u64, s: u64) -> Result<CheckOutcome> {
    if n < 3 * s {
        return Err(Error::Config(alloc::format!("window N = {n} must be at least 3S = {}", 3 * s)));
    }
    let mut seq = ZQuadSeq::new(seed.clone());
    let s = s as i64;
    let values: Vec<Elem> = (-3 * s..=3 * s).map(|k| seq.get(k)).collect::<Result<_>>()?;
    let phi = |k: i64| &values[(k + 3 * s) as usize];
    let g = &seed.target;
    let shifts = Group::Z.ball(s as usize);
    let mut checked = 0;
    for g1 in &shifts {
        for g2 in &shifts {
            for g3 in &shifts {
                let (x1, x2, x3) = (g1.as_int().unwrap(), g2.as_int().unwrap(), g3.as_int().unwrap());
                checked += 1;
                let v = g.word(&[
                    (phi(x3 + x2 + x1), false),
                    (phi(x2 + x1), true),
                    (phi(x1), false),
                    (phi(x3 + x1), true),
                    (phi(x3), false),
                    (phi(0), true),
                    (phi(x2), false),
                    (phi(x3 + x2), true),
                ])?;
                if v != g.identity() {
                    return Ok(CheckOutcome {
                        holds: false,
                        witness: Some([g1.clone(), g2.clone(), g3.clone()]),
                        value: Some(v),
                        checked,
                    });
                }
            }
        }
    }
    Ok(CheckOutcome { holds: true, witness: None, value: None, checked })
}

/// Whether `[a, b]` commutes with `b⁻¹ a²`, a necessary condition for the
/// sequence generated by `(a, b)` to be quadratic.
pub fn l49_identity(seed: &ZQuadSeed) -> Result<bool> {
    let g = &seed.target;
    let (a, b) = (&seed.a, &seed.b);
    let comm = g.word(&[(a, true), (b, true), (a, false), (b, false)])?;
    let other = g.word(&[(b, true), (a, false), (a, false)])?;
    g.commutes(&comm, &other)
}

/// One degree-two relator
/// `τ(g3g2g1) τ(g2g1)⁻¹ τ(g1) τ(g3g1)⁻¹ τ(g3) τ(g2) τ(g3g2)⁻¹`
/// of the universal group on symbols `τ(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pol2Relator {
    pub g: [Elem; 3],
    /// `(argument, inverted)` pairs.
    pub word: [(Elem, bool); 7],
}

impl Pol2Relator {
    pub fn new(source: &Group, g1: &Elem, g2: &Elem, g3: &Elem) -> Result<Self> {
        let g3g2 = source.op(g3, g2)?;
        let g2g1 = source.op(g2, g1)?;
        let g3g1 = source.op(g3, g1)?;
        let g3g2g1 = source.op(&g3g2, g1)?;
        Ok(Pol2Relator {
            g: [g1.clone(), g2.clone(), g3.clone()],
            word: [
                (g3g2g1, false),
                (g2g1, true),
                (g1.clone(), false),
                (g3g1, true),
                (g3.clone(), false),
                (g2.clone(), false),
                (g3g2, true),
            ],
        })
    }

    /// Image of the relator under `τ(g) ↦ φ(g)`.
    pub fn evaluate<M: Map + ?Sized>(&self, phi: &M) -> Result<Elem> {
        let vals: Vec<(Elem, bool)> =
            self.word.iter().map(|(x, inv)| Ok((phi.eval(x)?, *inv))).collect::<Result<_>>()?;
        let refs: Vec<(&Elem, bool)> = vals.iter().map(|(x, i)| (x, *i)).collect();
        phi.target().word(&refs)
    }
}

/// Checks that `τ(g) ↦ φ(g)` kills every relator with `g1, g2, g3` in the
/// ball of radius `radius`, i.e. that the induced homomorphism from the
/// universal degree-two group is well defined. `φ` must be unital.
pub fn pol2_relator_check<M: Map + ?Sized>(phi: &M, radius: usize) -> Result<CheckOutcome> {
    let (src, tgt) = (phi.source(), phi.target());
    if phi.eval(&src.identity())? != tgt.identity() {
        return Err(Error::Config("relator check needs a unital map".into()));
    }
    let ball = src.ball(radius);
    let mut checked = 0;
    for g1 in &ball {
        for g2 in &ball {
            for g3 in &ball {
                checked += 1;
                let v = Pol2Relator::new(src, g1, g2, g3)?.evaluate(phi)?;
                if v != tgt.identity() {
                    return Ok(CheckOutcome {
                        holds: false,
                        witness: Some([g1.clone(), g2.clone(), g3.clone()]),
                        value: Some(v),
                        checked,
                    });
                }
            }
        }
    }
    Ok(CheckOutcome { holds: true, witness: None, value: None, checked })
}

/// `φ(n)` for the sequence generated by `seed`, and the difference operator
/// route for the same quantity. Used by tests to pin that the recursion
/// is the `g1 = g2 = 1` case of the three-fold difference.
pub fn recursion_residual(seed: &ZQuadSeed, n: i64) -> Result<Elem> {
    let map = crate::gmaps::FnMap::new(Group::Z, seed.target.clone(), {
        let seq = core::cell::RefCell::new(ZQuadSeq::new(seed.clone()));
        move |x: &Elem| seq.borrow_mut().get(x.as_int().unwrap())
    });
    diffs::lemma43(&map, &Elem::Int(1), &Elem::Int(1), &Elem::Int(n - 1))
}
