//! Map families, the map DSL and the evaluable [`GroupMap`].
//!
//! Grammar (arguments are positional or `name=value`):
//!
//! ```text
//! hom{a->w1,b->w2,...}    free source; `hom{1->w}` for Z or cyclic sources
//! id
//! const{c}
//! brooks{w}               free:k -> z, occurrences of w minus those of w⁻¹
//! floor_scale{p,q}        z -> z, n ↦ ⌊pn/q⌋
//! monomial{d}             z -> z, n ↦ n^d
//! floor_quad{p,q}         z -> z, n ↦ ⌊pn²/q⌋
//! perturb{base,c=..}      g ↦ base(g)·c
//! shift{base,a=..}        g ↦ base(g·a)
//! unitalize{base}         g ↦ base(g)·base(1)⁻¹
//! compose{outer,inner}    g ↦ outer(inner(g))
//! zquad{a=..,b=..}        z -> H, quadratic recursion seeded by φ(1), φ(2)
//! random{seed=..,domR=..,tgtR=..}
//! ```

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cell::RefCell;
use core::fmt;

use crate::groups::{Elem, Group};
use crate::sample::mix64;
use crate::words::Word;
use crate::zquad::{ZQuadSeed, ZQuadSeq};
use crate::{Error, Result};

/// Anything that can be evaluated as a map between two groups.
pub trait Map {
    fn source(&self) -> &Group;
    fn target(&self) -> &Group;
    fn eval(&self, x: &Elem) -> Result<Elem>;
}

impl<M: Map + ?Sized> Map for &M {
    fn source(&self) -> &Group {
        (**self).source()
    }
    fn target(&self) -> &Group {
        (**self).target()
    }
    fn eval(&self, x: &Elem) -> Result<Elem> {
        (**self).eval(x)
    }
}

/// A map given by a closure.
pub struct FnMap<F> {
    source: Group,
    target: Group,
    f: F,
}

impl<F: Fn(&Elem) -> Result<Elem>> FnMap<F> {
    pub fn new(source: Group, target: Group, f: F) -> Self {
        FnMap { source, target, f }
    }
}

impl<F: Fn(&Elem) -> Result<Elem>> Map for FnMap<F> {
    fn source(&self) -> &Group {
        &self.source
    }
    fn target(&self) -> &Group {
        &self.target
    }
    fn eval(&self, x: &Elem) -> Result<Elem> {
        (self.f)(x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// Images of the generators (free source) or of 1 (`Z`/cyclic source).
    Hom(Vec<Elem>),
    Id,
    Const(Elem),
    Brooks(Word),
    FloorScale {
        p: i64,
        q: i64,
    },
    Monomial(u32),
    FloorQuad {
        p: i64,
        q: i64,
    },
    Perturb(Box<MapSpec>, Elem),
    Shift(Box<MapSpec>, Elem),
    Unitalize(Box<MapSpec>),
    Compose {
        outer: Box<MapSpec>,
        inner: Box<MapSpec>,
    },
    ZQuad {
        a: Elem,
        b: Elem,
    },
    Random {
        seed: u64,
        dom_r: usize,
        tgt_r: usize,
    },
}

/// A well-typed map description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapSpec {
    pub source: Group,
    pub target: Group,
    pub family: Family,
}

impl MapSpec {
    /// Parses and type-checks `text` for maps out of `source`. `target` pins
    /// the codomain where the family does not determine it.
    pub fn parse(text: &str, source: &Group, target: Option<&Group>) -> Result<MapSpec> {
        let expr = parse_expr(text, 0)?;
        check(&expr, source, target)
    }

    pub fn perturb(base: MapSpec, c: Elem) -> Result<MapSpec> {
        if !base.target.contains(&c) {
            return Err(Error::GroupMismatch(alloc::format!("{c} is not in {}", base.target)));
        }
        Ok(MapSpec {
            source: base.source.clone(),
            target: base.target.clone(),
            family: Family::Perturb(Box::new(base), c),
        })
    }

    pub fn unitalize(base: MapSpec) -> MapSpec {
        MapSpec { source: base.source.clone(), target: base.target.clone(), family: Family::Unitalize(Box::new(base)) }
    }

    pub fn shift(base: MapSpec, a: Elem) -> Result<MapSpec> {
        if !base.source.contains(&a) {
            return Err(Error::GroupMismatch(alloc::format!("{a} is not in {}", base.source)));
        }
        Ok(MapSpec {
            source: base.source.clone(),
            target: base.target.clone(),
            family: Family::Shift(Box::new(base), a),
        })
    }

    pub fn compose(outer: MapSpec, inner: MapSpec) -> Result<MapSpec> {
        if inner.target != outer.source {
            return Err(Error::Type(alloc::format!(
                "inner map lands in {} but the outer map starts from {}",
                inner.target,
                outer.source
            )));
        }
        Ok(MapSpec {
            source: inner.source.clone(),
            target: outer.target.clone(),
            family: Family::Compose { outer: Box::new(outer), inner: Box::new(inner) },
        })
    }
}

// ---------------------------------------------------------------------------
// Syntax

#[derive(Debug)]
struct Arg<'a> {
    key: Option<&'a str>,
    value: &'a str,
    pos: usize,
}

#[derive(Debug)]
struct Expr<'a> {
    name: &'a str,
    args: Vec<Arg<'a>>,
    pos: usize,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

fn is_ident_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

/// Splits at top-level occurrences of `sep`, tracking `{}`, `()` and `[]`.
fn split_top(s: &str, sep: u8, base: usize) -> Result<Vec<(usize, &str)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, b) in s.bytes().enumerate() {
        match b {
            b'{' | b'(' | b'[' => depth += 1,
            b'}' | b')' | b']' => {
                depth -= 1;
                if depth < 0 {
                    return Err(syntax(base + i, "unbalanced closing bracket"));
                }
            }
            _ if b == sep && depth == 0 => {
                out.push((base + start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(syntax(base + s.len(), "unbalanced bracket"));
    }
    out.push((base + start, &s[start..]));
    Ok(out)
}

fn trim_at(s: &str, pos: usize) -> (&str, usize) {
    let lead = s.len() - s.trim_start().len();
    (s.trim(), pos + lead)
}

fn parse_expr(text: &str, base: usize) -> Result<Expr<'_>> {
    let (s, pos) = trim_at(text, base);
    let name_len = s.bytes().take_while(|&b| is_ident_byte(b)).count();
    if name_len == 0 {
        return Err(syntax(pos, alloc::format!("expected a map family, found {s:?}")));
    }
    let name = &s[..name_len];
    let rest = &s[name_len..];
    if rest.is_empty() {
        return Ok(Expr { name, args: Vec::new(), pos });
    }
    if !rest.starts_with('{') {
        return Err(syntax(pos + name_len, "expected '{' after family name"));
    }
    if !rest.ends_with('}') {
        return Err(syntax(pos + s.len(), "expected '}' at end of expression"));
    }
    let inner = &rest[1..rest.len() - 1];
    let inner_pos = pos + name_len + 1;
    // The closing brace must match the opening one.
    let mut depth = 0i32;
    for (i, b) in inner.bytes().enumerate() {
        match b {
            b'{' | b'(' | b'[' => depth += 1,
            b'}' | b')' | b']' => {
                depth -= 1;
                if depth < 0 {
                    return Err(syntax(inner_pos + i, "unexpected closing bracket"));
                }
            }
            _ => {}
        }
    }
    let mut args = Vec::new();
    if !inner.trim().is_empty() || name == "const" {
        for (p, piece) in split_top(inner, b',', inner_pos)? {
            let (piece, p) = trim_at(piece, p);
            let key_len = piece.bytes().take_while(|&b| is_ident_byte(b)).count();
            let arg = if key_len > 0 && piece[key_len..].starts_with('=') {
                let (value, vp) = trim_at(&piece[key_len + 1..], p + key_len + 1);
                Arg { key: Some(&piece[..key_len]), value, pos: vp }
            } else {
                Arg { key: None, value: piece, pos: p }
            };
            args.push(arg);
        }
    }
    Ok(Expr { name, args, pos })
}

// ---------------------------------------------------------------------------
// Type checking

struct Args<'e, 'a> {
    expr: &'e Expr<'a>,
    names: &'static [&'static str],
}

impl<'e, 'a> Args<'e, 'a> {
    fn new(expr: &'e Expr<'a>, names: &'static [&'static str]) -> Result<Self> {
        for (i, a) in expr.args.iter().enumerate() {
            match a.key {
                Some(k) if !names.contains(&k) => {
                    return Err(syntax(a.pos, alloc::format!("{} has no argument named {k}", expr.name)))
                }
                None if i >= names.len() => {
                    return Err(syntax(a.pos, alloc::format!("{} takes {} arguments", expr.name, names.len())))
                }
                _ => {}
            }
        }
        Ok(Args { expr, names })
    }

    fn get(&self, name: &str) -> Result<&'e Arg<'a>> {
        let idx = self.names.iter().position(|n| *n == name).expect("known name");
        self.expr
            .args
            .iter()
            .find(|a| a.key == Some(name))
            .or_else(|| self.expr.args.get(idx).filter(|a| a.key.is_none()))
            .ok_or_else(|| syntax(self.expr.pos, alloc::format!("{} is missing argument {name}", self.expr.name)))
    }

    fn int(&self, name: &str) -> Result<i64> {
        let a = self.get(name)?;
        a.value
            .parse::<i64>()
            .map_err(|_| syntax(a.pos, alloc::format!("{name} must be an integer, found {:?}", a.value)))
    }

    fn elem(&self, name: &str, group: &Group) -> Result<Elem> {
        let a = self.get(name)?;
        group.parse_elem(a.value).map_err(|e| syntax(a.pos, e.to_string()))
    }
}

fn want_target(expr: &Expr<'_>, natural: Group, hint: Option<&Group>) -> Result<Group> {
    match hint {
        Some(h) if *h != natural => {
            Err(Error::Type(alloc::format!("{} maps into {natural}, but {h} was requested", expr.name)))
        }
        _ => Ok(natural),
    }
}

fn want_source(expr: &Expr<'_>, source: &Group, ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Type(alloc::format!("{} needs {what} source, got {source}", expr.name)))
    }
}

fn check(expr: &Expr<'_>, source: &Group, hint: Option<&Group>) -> Result<MapSpec> {
    let default_target = || hint.cloned().unwrap_or_else(|| source.clone());
    let (target, family) = match expr.name {
        "id" => {
            Args::new(expr, &[])?;
            (want_target(expr, source.clone(), hint)?, Family::Id)
        }
        "const" => {
            let args = Args::new(expr, &["c"])?;
            let t = default_target();
            let c = args.elem("c", &t)?;
            (t, Family::Const(c))
        }
        "hom" => {
            let t = default_target();
            let images = check_hom(expr, source, &t)?;
            (t, Family::Hom(images))
        }
        "brooks" => {
            let args = Args::new(expr, &["w"])?;
            let Group::Free(k) = source else {
                return Err(Error::Type(alloc::format!("brooks needs a free source, got {source}")));
            };
            let a = args.get("w")?;
            let w = Word::parse(a.value, *k).map_err(|e| syntax(a.pos, e.to_string()))?;
            if w.is_identity() {
                return Err(syntax(a.pos, "brooks needs a nontrivial word"));
            }
            (want_target(expr, Group::Z, hint)?, Family::Brooks(w))
        }
        "floor_scale" | "floor_quad" => {
            let args = Args::new(expr, &["p", "q"])?;
            want_source(expr, source, *source == Group::Z, "a z")?;
            let (p, q) = (args.int("p")?, args.int("q")?);
            if q <= 0 {
                return Err(syntax(args.get("q")?.pos, "q must be positive"));
            }
            let fam = if expr.name == "floor_scale" { Family::FloorScale { p, q } } else { Family::FloorQuad { p, q } };
            (want_target(expr, Group::Z, hint)?, fam)
        }
        "monomial" => {
            let args = Args::new(expr, &["d"])?;
            want_source(expr, source, *source == Group::Z, "a z")?;
            let d = args.int("d")?;
            if !(0..=16).contains(&d) {
                return Err(syntax(args.get("d")?.pos, "degree must lie in 0..=16"));
            }
            (want_target(expr, Group::Z, hint)?, Family::Monomial(d as u32))
        }
        "perturb" | "shift" => {
            let key = if expr.name == "perturb" { "c" } else { "a" };
            let names: &'static [&'static str] = if key == "c" { &["base", "c"] } else { &["base", "a"] };
            let args = Args::new(expr, names)?;
            let b = args.get("base")?;
            let base = check(&parse_expr(b.value, b.pos)?, source, hint)?;
            if key == "c" {
                let c = args.elem("c", &base.target)?;
                return MapSpec::perturb(base, c);
            }
            let a = args.elem("a", &base.source)?;
            return MapSpec::shift(base, a);
        }
        "unitalize" => {
            let args = Args::new(expr, &["base"])?;
            let b = args.get("base")?;
            let base = check(&parse_expr(b.value, b.pos)?, source, hint)?;
            return Ok(MapSpec::unitalize(base));
        }
        "compose" => {
            let args = Args::new(expr, &["outer", "inner"])?;
            let i = args.get("inner")?;
            let inner = check(&parse_expr(i.value, i.pos)?, source, None)?;
            let o = args.get("outer")?;
            let outer = check(&parse_expr(o.value, o.pos)?, &inner.target, hint).map_err(|e| match e {
                Error::Type(m) => Error::Type(alloc::format!("compose: inner target is {}; {m}", inner.target)),
                other => other,
            })?;
            return MapSpec::compose(outer, inner);
        }
        "zquad" => {
            let args = Args::new(expr, &["a", "b"])?;
            want_source(expr, source, *source == Group::Z, "a z")?;
            let Some(t) = hint.cloned() else {
                return Err(Error::Type("zquad needs an explicit target group".into()));
            };
            let (a, b) = (args.elem("a", &t)?, args.elem("b", &t)?);
            (t, Family::ZQuad { a, b })
        }
        "random" => {
            let args = Args::new(expr, &["seed", "domR", "tgtR"])?;
            let seed = args.int("seed")?;
            let (dom_r, tgt_r) = (args.int("domR")?, args.int("tgtR")?);
            if seed < 0 || dom_r < 0 || tgt_r < 0 {
                return Err(syntax(expr.pos, "random parameters must be non-negative"));
            }
            (default_target(), Family::Random { seed: seed as u64, dom_r: dom_r as usize, tgt_r: tgt_r as usize })
        }
        other => return Err(syntax(expr.pos, alloc::format!("unknown map family {other:?}"))),
    };
    Ok(MapSpec { source: source.clone(), target, family })
}

fn check_hom(expr: &Expr<'_>, source: &Group, target: &Group) -> Result<Vec<Elem>> {
    let n_gens = match source {
        Group::Free(k) => *k as usize,
        Group::Z | Group::Cyclic(_) => 1,
        _ => return Err(Error::Type(alloc::format!("hom needs a free, z or cyclic source, got {source}"))),
    };
    let mut images: Vec<Option<Elem>> = alloc::vec![None; n_gens];
    for a in &expr.args {
        if a.key.is_some() {
            return Err(syntax(a.pos, "hom arguments have the form g->w"));
        }
        let Some(arrow) = a.value.find("->") else {
            return Err(syntax(a.pos, "hom arguments have the form g->w"));
        };
        let lhs = a.value[..arrow].trim();
        let idx = match source {
            Group::Free(k) => {
                let w = Word::parse(lhs, *k).map_err(|e| syntax(a.pos, e.to_string()))?;
                match w.letters() {
                    [l] if *l > 0 => *l as usize - 1,
                    _ => return Err(syntax(a.pos, alloc::format!("{lhs:?} is not a generator"))),
                }
            }
            _ if lhs == "1" => 0,
            _ => return Err(syntax(a.pos, "the generator of a cyclic source is written 1")),
        };
        let rhs = &a.value[arrow + 2..];
        let img = target.parse_elem(rhs).map_err(|e| syntax(a.pos + arrow + 2, e.to_string()))?;
        if images[idx].replace(img).is_some() {
            return Err(syntax(a.pos, alloc::format!("generator {lhs} assigned twice")));
        }
    }
    let images: Vec<Elem> = images.into_iter().map(|x| x.unwrap_or_else(|| target.identity())).collect();
    if let Group::Cyclic(m) = source {
        if power(target, &images[0], *m as i64)? != target.identity() {
            return Err(Error::Type(alloc::format!("image of 1 does not have order dividing {m}")));
        }
    }
    Ok(images)
}

// ---------------------------------------------------------------------------
// Printing

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Hom(images) => {
                f.write_str("hom{")?;
                for (i, img) in images.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    match self.source {
                        Group::Free(_) => write!(f, "{}->{img}", (b'a' + i as u8) as char)?,
                        _ => write!(f, "1->{img}")?,
                    }
                }
                f.write_str("}")
            }
            Family::Id => f.write_str("id"),
            Family::Const(c) => write!(f, "const{{{c}}}"),
            Family::Brooks(w) => write!(f, "brooks{{{w}}}"),
            Family::FloorScale { p, q } => write!(f, "floor_scale{{{p},{q}}}"),
            Family::Monomial(d) => write!(f, "monomial{{{d}}}"),
            Family::FloorQuad { p, q } => write!(f, "floor_quad{{{p},{q}}}"),
            Family::Perturb(b, c) => write!(f, "perturb{{{b},c={c}}}"),
            Family::Shift(b, a) => write!(f, "shift{{{b},a={a}}}"),
            Family::Unitalize(b) => write!(f, "unitalize{{{b}}}"),
            Family::Compose { outer, inner } => write!(f, "compose{{{outer},{inner}}}"),
            Family::ZQuad { a, b } => write!(f, "zquad{{a={a},b={b}}}"),
            Family::Random { seed, dom_r, tgt_r } => write!(f, "random{{seed={seed},domR={dom_r},tgtR={tgt_r}}}"),
        }
    }
}

// ---------------------------------------------------------------------------
// Evaluation

/// `x^n` by repeated squaring.
pub fn power(group: &Group, x: &Elem, n: i64) -> Result<Elem> {
    let mut base = if n < 0 { group.inv(x)? } else { x.clone() };
    let mut e = n.unsigned_abs();
    let mut acc = group.identity();
    while e > 0 {
        if e & 1 == 1 {
            acc = group.op(&acc, &base)?;
        }
        e >>= 1;
        if e > 0 {
            base = group.op(&base, &base)?;
        }
    }
    Ok(acc)
}

fn count_occurrences(hay: &[i32], needle: &[i32]) -> i64 {
    if needle.len() > hay.len() {
        return 0;
    }
    hay.windows(needle.len()).filter(|w| *w == needle).count() as i64
}

/// Compiled evaluation tree.
enum Node {
    Hom(Vec<Elem>),
    Id,
    Const(Elem),
    Brooks { pattern: Vec<i32>, inverse: Vec<i32> },
    FloorScale(i64, i64),
    Monomial(u32),
    FloorQuad(i64, i64),
    Perturb(Box<Compiled>, Elem),
    Shift(Box<Compiled>, Elem),
    Unitalize(Box<Compiled>, Elem),
    Compose(Box<Compiled>, Box<Compiled>),
    ZQuad(RefCell<ZQuadSeq>),
    Random(BTreeMap<Elem, Elem>),
}

struct Compiled {
    source: Group,
    target: Group,
    node: Node,
}

fn floor_div(n: i64, q: i64) -> i64 {
    n.div_euclid(q)
}

impl Compiled {
    fn new(spec: &MapSpec) -> Result<Compiled> {
        let node = match &spec.family {
            Family::Hom(images) => Node::Hom(images.clone()),
            Family::Id => Node::Id,
            Family::Const(c) => Node::Const(c.clone()),
            Family::Brooks(w) => Node::Brooks { pattern: w.letters().to_vec(), inverse: w.inv().letters().to_vec() },
            Family::FloorScale { p, q } => Node::FloorScale(*p, *q),
            Family::Monomial(d) => Node::Monomial(*d),
            Family::FloorQuad { p, q } => Node::FloorQuad(*p, *q),
            Family::Perturb(b, c) => Node::Perturb(Box::new(Compiled::new(b)?), c.clone()),
            Family::Shift(b, a) => Node::Shift(Box::new(Compiled::new(b)?), a.clone()),
            Family::Unitalize(b) => {
                let base = Compiled::new(b)?;
                let at_one = base.eval(&b.source.identity())?;
                let inv = b.target.inv(&at_one)?;
                Node::Unitalize(Box::new(base), inv)
            }
            Family::Compose { outer, inner } => {
                Node::Compose(Box::new(Compiled::new(outer)?), Box::new(Compiled::new(inner)?))
            }
            Family::ZQuad { a, b } => {
                let seed = ZQuadSeed::new(spec.target.clone(), a.clone(), b.clone())?;
                Node::ZQuad(RefCell::new(ZQuadSeq::new(seed)))
            }
            Family::Random { seed, dom_r, tgt_r } => {
                Node::Random(random_table(&spec.source, &spec.target, *seed, *dom_r, *tgt_r))
            }
        };
        Ok(Compiled { source: spec.source.clone(), target: spec.target.clone(), node })
    }

    fn eval(&self, x: &Elem) -> Result<Elem> {
        let t = &self.target;
        Ok(match &self.node {
            Node::Hom(images) => match x {
                Elem::Word(w) => {
                    let mut acc = t.identity();
                    for &l in w.letters() {
                        let img = &images[l.unsigned_abs() as usize - 1];
                        let f = if l < 0 { t.inv(img)? } else { img.clone() };
                        acc = t.op(&acc, &f)?;
                    }
                    acc
                }
                Elem::Int(n) => power(t, &images[0], *n)?,
                _ => unreachable!("source checked"),
            },
            Node::Id => x.clone(),
            Node::Const(c) => c.clone(),
            Node::Brooks { pattern, inverse } => {
                let w = x.as_word().expect("source checked");
                Elem::Int(count_occurrences(w.letters(), pattern) - count_occurrences(w.letters(), inverse))
            }
            Node::FloorScale(p, q) => {
                let n = x.as_int().expect("source checked");
                Elem::Int(floor_div(p.checked_mul(n).ok_or(Error::Overflow)?, *q))
            }
            Node::Monomial(d) => {
                let n = x.as_int().expect("source checked");
                Elem::Int(n.checked_pow(*d).ok_or(Error::Overflow)?)
            }
            Node::FloorQuad(p, q) => {
                let n = x.as_int().expect("source checked");
                let sq = n.checked_mul(n).and_then(|s| s.checked_mul(*p)).ok_or(Error::Overflow)?;
                Elem::Int(floor_div(sq, *q))
            }
            Node::Perturb(base, c) => t.op(&base.eval(x)?, c)?,
            Node::Shift(base, a) => base.eval(&self.source.op(x, a)?)?,
            Node::Unitalize(base, inv_one) => t.op(&base.eval(x)?, inv_one)?,
            Node::Compose(outer, inner) => outer.eval(&inner.eval(x)?)?,
            Node::ZQuad(seq) => seq.borrow_mut().get(x.as_int().expect("source checked"))?,
            Node::Random(table) => table.get(x).cloned().unwrap_or_else(|| t.identity()),
        })
    }
}

/// Value table of `random{seed,domR,tgtR}`: the `i`-th element of the
/// domain ball goes to `ball(tgtR)[mix64(seed ^ i) mod |ball(tgtR)|]`,
/// except that the identity is fixed.
fn random_table(source: &Group, target: &Group, seed: u64, dom_r: usize, tgt_r: usize) -> BTreeMap<Elem, Elem> {
    let dom = source.ball(dom_r);
    let tgt = target.ball(tgt_r);
    dom.into_iter()
        .enumerate()
        .map(|(i, g)| {
            let v = if i == 0 {
                target.identity()
            } else {
                tgt[(mix64(seed ^ i as u64) % tgt.len() as u64) as usize].clone()
            };
            (g, v)
        })
        .collect()
}

/// Evaluable map with a memoization table keyed by canonical encoding.
pub struct GroupMap {
    spec: MapSpec,
    root: Compiled,
    cache: RefCell<BTreeMap<Elem, Elem>>,
    cache_cap: usize,
}

impl fmt::Debug for GroupMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupMap({}: {} -> {})", self.spec, self.spec.source, self.spec.target)
    }
}

impl Clone for GroupMap {
    fn clone(&self) -> Self {
        GroupMap::new(self.spec.clone()).expect("spec compiled once already")
    }
}

/// Default number of memoized values per map.
pub const DEFAULT_CACHE_CAP: usize = 1 << 16;

impl GroupMap {
    pub fn new(spec: MapSpec) -> Result<GroupMap> {
        let root = Compiled::new(&spec)?;
        Ok(GroupMap { spec, root, cache: RefCell::new(BTreeMap::new()), cache_cap: DEFAULT_CACHE_CAP })
    }

    pub fn parse(text: &str, source: &Group, target: Option<&Group>) -> Result<GroupMap> {
        GroupMap::new(MapSpec::parse(text, source, target)?)
    }

    /// Sets the memoization capacity; 0 disables caching.
    pub fn with_cache_cap(mut self, cap: usize) -> Self {
        self.cache_cap = cap;
        self.cache.get_mut().clear();
        self
    }

    pub fn spec(&self) -> &MapSpec {
        &self.spec
    }

    pub fn eval_uncached(&self, x: &Elem) -> Result<Elem> {
        if !self.spec.source.contains(x) {
            return Err(Error::GroupMismatch(alloc::format!("{x} is not in {}", self.spec.source)));
        }
        self.root.eval(x)
    }

    pub fn is_unital(&self) -> Result<bool> {
        Ok(self.eval(&self.spec.source.identity())? == self.spec.target.identity())
    }
}

impl Map for GroupMap {
    fn source(&self) -> &Group {
        &self.spec.source
    }

    fn target(&self) -> &Group {
        &self.spec.target
    }

    fn eval(&self, x: &Elem) -> Result<Elem> {
        if self.cache_cap == 0 {
            return self.eval_uncached(x);
        }
        if let Some(v) = self.cache.borrow().get(x) {
            return Ok(v.clone());
        }
        let v = self.eval_uncached(x)?;
        let mut cache = self.cache.borrow_mut();
        if cache.len() < self.cache_cap {
            cache.insert(x.clone(), v.clone());
        }
        Ok(v)
    }
}
