//! Groups with exact arithmetic and left-invariant word metrics.
//!
//! Elements carry only their payload; operations take the [`Group`] they are
//! meant to live in and reject payloads of the wrong shape.

use alloc::boxed::Box;
use alloc::collections::VecDeque;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::words::{self, Word};
use crate::{Error, Result};

/// A finite group given by its multiplication table and a generating set.
#[derive(Clone, PartialEq, Eq)]
pub struct CayleyTable {
    name: String,
    order: usize,
    table: Vec<u32>,
    identity: u32,
    inverse: Vec<u32>,
    generators: Vec<u32>,
    norms: Vec<u32>,
}

impl fmt::Debug for CayleyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CayleyTable").field("name", &self.name).field("order", &self.order).finish()
    }
}

impl CayleyTable {
    /// Validates a Cayley table. `generators` is closed under inverses
    /// before norms are computed.
    pub fn new(name: impl Into<String>, order: usize, table: Vec<u32>, generators: &[u32]) -> Result<Self> {
        let bad = |m: String| Err(Error::Malformed(m));
        if order == 0 {
            return bad("table of order 0".into());
        }
        if table.len() != order * order {
            return bad(alloc::format!("expected {} table entries, got {}", order * order, table.len()));
        }
        if let Some(&e) = table.iter().find(|&&e| e as usize >= order) {
            return bad(alloc::format!("table entry {e} out of range for order {order}"));
        }
        let at = |i: usize, j: usize| table[i * order + j] as usize;
        let identity = match (0..order).find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x)) {
            Some(e) => e,
            None => return bad("table has no two-sided identity".into()),
        };
        let mut seen = vec![false; order];
        for i in 0..order {
            for by_row in [true, false] {
                seen.iter_mut().for_each(|s| *s = false);
                for j in 0..order {
                    let v = if by_row { at(i, j) } else { at(j, i) };
                    if core::mem::replace(&mut seen[v], true) {
                        return bad(alloc::format!("table is not a latin square at index {i}"));
                    }
                }
            }
        }
        let check = |x: usize, y: usize, z: usize| at(at(x, y), z) == at(x, at(y, z));
        if order <= 64 {
            for x in 0..order {
                for y in 0..order {
                    for z in 0..order {
                        if !check(x, y, z) {
                            return bad(alloc::format!("associativity fails at ({x},{y},{z})"));
                        }
                    }
                }
            }
        } else {
            let mut s = crate::sample::SplitMix::new(order as u64);
            for _ in 0..100_000 {
                let (x, y, z) = (s.below(order), s.below(order), s.below(order));
                if !check(x, y, z) {
                    return bad(alloc::format!("associativity fails at ({x},{y},{z})"));
                }
            }
        }
        let inverse: Vec<u32> =
            (0..order).map(|x| (0..order).find(|&y| at(x, y) == identity).unwrap() as u32).collect();
        let mut gens: Vec<u32> = Vec::new();
        for &g in generators {
            if g as usize >= order {
                return bad(alloc::format!("generator {g} out of range"));
            }
            for h in [g, inverse[g as usize]] {
                if h as usize != identity && !gens.contains(&h) {
                    gens.push(h);
                }
            }
        }
        gens.sort_unstable();
        let mut norms = vec![u32::MAX; order];
        norms[identity] = 0;
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = at(x, g as usize);
                if norms[y] == u32::MAX {
                    norms[y] = norms[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        if norms.contains(&u32::MAX) {
            return bad("generators do not generate the table group".into());
        }
        Ok(CayleyTable { name: name.into(), order, table, identity: identity as u32, inverse, generators: gens, norms })
    }

    /// Whitespace-separated text: the order, then `order × order` 0-based
    /// entries, then the generator indices.
    pub fn parse(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut nums = Vec::new();
        for tok in text.split_whitespace() {
            nums.push(tok.parse::<u32>().map_err(|_| Error::Malformed(alloc::format!("bad table token {tok:?}")))?);
        }
        let Some((&order, rest)) = nums.split_first() else {
            return Err(Error::Malformed("empty table file".into()));
        };
        let order = order as usize;
        if rest.len() < order * order {
            return Err(Error::Malformed("table file truncated".into()));
        }
        let (table, gens) = rest.split_at(order * order);
        CayleyTable::new(name, order, table.to_vec(), gens)
    }

    fn from_elements<T: PartialEq>(name: &str, elems: &[T], mul: impl Fn(&T, &T) -> T, gens: &[u32]) -> Self {
        let n = elems.len();
        let mut table = Vec::with_capacity(n * n);
        for x in elems {
            for y in elems {
                let p = mul(x, y);
                table.push(elems.iter().position(|e| *e == p).expect("closed") as u32);
            }
        }
        CayleyTable::new(name, n, table, gens).expect("builtin table is valid")
    }

    /// `Z/m` with generators `±1`.
    pub fn cyclic(m: u32) -> Self {
        let elems: Vec<u32> = (0..m.max(1)).collect();
        let name = alloc::format!("cyctable:{m}");
        CayleyTable::from_elements(&name, &elems, |x, y| (x + y) % m.max(1), if m > 1 { &[1] } else { &[] })
    }

    /// Permutations of `{0,1,2}` in lexicographic order; generated by the
    /// transpositions at indices 1 and 2. Indices 3 and 4 are the 3-cycles.
    pub fn sym3() -> Self {
        let elems: [[u8; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        CayleyTable::from_elements(
            "sym3",
            &elems,
            |p, q| [p[q[0] as usize], p[q[1] as usize], p[q[2] as usize]],
            &[1, 2],
        )
    }

    /// Dihedral group of order 8: index `2i + j` is `r^i s^j`.
    pub fn dih4() -> Self {
        let elems: Vec<(u8, u8)> = (0..4).flat_map(|i| (0..2).map(move |j| (i, j))).collect();
        // r^i s^j · r^k s^l = r^(i + (-1)^j k) s^(j + l)
        let mul = |&(i, j): &(u8, u8), &(k, l): &(u8, u8)| {
            let k = if j == 1 { (4 - k) % 4 } else { k };
            ((i + k) % 4, (j + l) % 2)
        };
        CayleyTable::from_elements("dih4", &elems, mul, &[2, 1])
    }

    /// Quaternion group: indices `1, -1, i, -i, j, -j, k, -k`.
    pub fn quat8() -> Self {
        // (sign, unit) with unit 0=1, 1=i, 2=j, 3=k.
        let elems: Vec<(i8, u8)> = (0..4).flat_map(|u| [(1, u), (-1, u)]).collect();
        let unit_mul = |a: u8, b: u8| -> (i8, u8) {
            match (a, b) {
                (0, x) | (x, 0) => (1, x),
                (x, y) if x == y => (-1, 0),
                (1, 2) => (1, 3),
                (2, 3) => (1, 1),
                (3, 1) => (1, 2),
                (2, 1) => (-1, 3),
                (3, 2) => (-1, 1),
                (1, 3) => (-1, 2),
                _ => unreachable!(),
            }
        };
        let mul = |&(s, a): &(i8, u8), &(t, b): &(i8, u8)| {
            let (u, c) = unit_mul(a, b);
            (s * t * u, c)
        };
        CayleyTable::from_elements("quat8", &elems, mul, &[2, 4])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn mul(&self, x: u32, y: u32) -> u32 {
        self.table[x as usize * self.order + y as usize]
    }

    pub fn inverse(&self, x: u32) -> u32 {
        self.inverse[x as usize]
    }

    pub fn norm(&self, x: u32) -> u32 {
        self.norms[x as usize]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order as u32).all(|x| (0..x).all(|y| self.mul(x, y) == self.mul(y, x)))
    }
}

/// The supported group families.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Group {
    Free(u32),
    Z,
    ZPow(u32),
    Cyclic(u64),
    Table(Arc<CayleyTable>),
    Product(Box<Group>, Box<Group>),
}

/// Element payloads. Integers serve both `Z` and `Cyclic(m)` (canonical
/// representative in `0..m`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Elem {
    Word(Word),
    Int(i64),
    Vector(Vec<i64>),
    Table(u32),
    Pair(Box<(Elem, Elem)>),
}

/// Zigzag key: 0, 1, -1, 2, -2, …
#[inline]
fn zigzag(n: i64) -> u64 {
    (n.unsigned_abs() << 1) - u64::from(n > 0)
}

impl Elem {
    fn tag(&self) -> u8 {
        match self {
            Elem::Word(_) => 0,
            Elem::Int(_) => 1,
            Elem::Vector(_) => 2,
            Elem::Table(_) => 3,
            Elem::Pair(_) => 4,
        }
    }

    pub fn pair(l: Elem, r: Elem) -> Elem {
        Elem::Pair(Box::new((l, r)))
    }

    pub fn as_word(&self) -> Option<&Word> {
        match self {
            Elem::Word(w) => Some(w),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Elem::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_vector(&self) -> Option<&[i64]> {
        match self {
            Elem::Vector(v) => Some(v),
            _ => None,
        }
    }
}

impl Ord for Elem {
    /// Canonical encoding order.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Elem::Word(a), Elem::Word(b)) => a.cmp(b),
            (Elem::Int(a), Elem::Int(b)) => zigzag(*a).cmp(&zigzag(*b)),
            (Elem::Vector(a), Elem::Vector(b)) => {
                a.len().cmp(&b.len()).then_with(|| a.iter().map(|&x| zigzag(x)).cmp(b.iter().map(|&x| zigzag(x))))
            }
            (Elem::Table(a), Elem::Table(b)) => a.cmp(b),
            (Elem::Pair(a), Elem::Pair(b)) => a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)),
            _ => self.tag().cmp(&other.tag()),
        }
    }
}

impl PartialOrd for Elem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Word(w) => write!(f, "{w}"),
            Elem::Int(n) => write!(f, "{n}"),
            Elem::Vector(v) => {
                f.write_str("[")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("]")
            }
            Elem::Table(i) => write!(f, "{i}"),
            Elem::Pair(p) => write!(f, "({}|{})", p.0, p.1),
        }
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Elem({self})")
    }
}

fn mismatch(g: &Group, x: &Elem) -> Error {
    Error::GroupMismatch(alloc::format!("element {x} does not belong to {g}"))
}

impl Group {
    pub fn product(l: Group, r: Group) -> Group {
        Group::Product(Box::new(l), Box::new(r))
    }

    pub fn identity(&self) -> Elem {
        match self {
            Group::Free(k) => Elem::Word(Word::identity(*k)),
            Group::Z | Group::Cyclic(_) => Elem::Int(0),
            Group::ZPow(n) => Elem::Vector(vec![0; *n as usize]),
            Group::Table(t) => Elem::Table(t.identity),
            Group::Product(l, r) => Elem::pair(l.identity(), r.identity()),
        }
    }

    pub fn contains(&self, x: &Elem) -> bool {
        match (self, x) {
            (Group::Free(k), Elem::Word(w)) => w.rank() == *k,
            (Group::Z, Elem::Int(_)) => true,
            (Group::Cyclic(m), Elem::Int(n)) => *n >= 0 && (*n as u64) < *m,
            (Group::ZPow(n), Elem::Vector(v)) => v.len() == *n as usize,
            (Group::Table(t), Elem::Table(i)) => (*i as usize) < t.order,
            (Group::Product(l, r), Elem::Pair(p)) => l.contains(&p.0) && r.contains(&p.1),
            _ => false,
        }
    }

    pub fn op(&self, x: &Elem, y: &Elem) -> Result<Elem> {
        Ok(match (self, x, y) {
            (Group::Free(k), Elem::Word(a), Elem::Word(b)) if a.rank() == *k && b.rank() == *k => {
                Elem::Word(a.mul_unchecked(b))
            }
            (Group::Z, Elem::Int(a), Elem::Int(b)) => Elem::Int(a.checked_add(*b).ok_or(Error::Overflow)?),
            (Group::Cyclic(m), Elem::Int(a), Elem::Int(b)) if self.contains(x) && self.contains(y) => {
                Elem::Int(((*a as u64 + *b as u64) % m) as i64)
            }
            (Group::ZPow(n), Elem::Vector(a), Elem::Vector(b)) if a.len() == *n as usize && b.len() == a.len() => {
                let mut out = Vec::with_capacity(a.len());
                for (p, q) in a.iter().zip(b) {
                    out.push(p.checked_add(*q).ok_or(Error::Overflow)?);
                }
                Elem::Vector(out)
            }
            (Group::Table(t), Elem::Table(a), Elem::Table(b)) if self.contains(x) && self.contains(y) => {
                Elem::Table(t.mul(*a, *b))
            }
            (Group::Product(l, r), Elem::Pair(a), Elem::Pair(b)) => Elem::pair(l.op(&a.0, &b.0)?, r.op(&a.1, &b.1)?),
            _ => return Err(mismatch(self, if self.contains(x) { y } else { x })),
        })
    }

    pub fn inv(&self, x: &Elem) -> Result<Elem> {
        if !self.contains(x) {
            return Err(mismatch(self, x));
        }
        Ok(self.inv_member(x))
    }

    fn inv_member(&self, x: &Elem) -> Elem {
        match (self, x) {
            (Group::Free(_), Elem::Word(w)) => Elem::Word(w.inv()),
            (Group::Z, Elem::Int(n)) => Elem::Int(-n),
            (Group::Cyclic(m), Elem::Int(n)) => Elem::Int(((*m - *n as u64) % m) as i64),
            (Group::ZPow(_), Elem::Vector(v)) => Elem::Vector(v.iter().map(|x| -x).collect()),
            (Group::Table(t), Elem::Table(i)) => Elem::Table(t.inverse(*i)),
            (Group::Product(l, r), Elem::Pair(p)) => Elem::pair(l.inv_member(&p.0), r.inv_member(&p.1)),
            _ => unreachable!("membership checked"),
        }
    }

    /// Product of a sequence of elements, each optionally inverted.
    pub fn word(&self, factors: &[(&Elem, bool)]) -> Result<Elem> {
        let mut acc = self.identity();
        for &(x, inverted) in factors {
            let f = if inverted { self.inv(x)? } else { x.clone() };
            acc = self.op(&acc, &f)?;
        }
        Ok(acc)
    }

    /// `x^b = b⁻¹ x b`.
    pub fn conj(&self, x: &Elem, b: &Elem) -> Result<Elem> {
        self.word(&[(b, true), (x, false), (b, false)])
    }

    pub fn commutes(&self, x: &Elem, y: &Elem) -> Result<bool> {
        Ok(self.op(x, y)? == self.op(y, x)?)
    }

    pub fn eq(&self, x: &Elem, y: &Elem) -> Result<bool> {
        if !self.contains(x) {
            return Err(mismatch(self, x));
        }
        if !self.contains(y) {
            return Err(mismatch(self, y));
        }
        Ok(x == y)
    }

    /// Word norm with respect to the canonical symmetric generating set.
    /// Products use the sum of component norms.
    pub fn norm(&self, x: &Elem) -> u64 {
        match (self, x) {
            (Group::Free(_), Elem::Word(w)) => w.len() as u64,
            (Group::Z, Elem::Int(n)) => n.unsigned_abs(),
            (Group::Cyclic(m), Elem::Int(n)) => {
                let n = (*n).rem_euclid(*m as i64) as u64;
                n.min(m - n)
            }
            (Group::ZPow(_), Elem::Vector(v)) => v.iter().map(|x| x.unsigned_abs()).sum(),
            (Group::Table(t), Elem::Table(i)) => u64::from(t.norm(*i)),
            (Group::Product(l, r), Elem::Pair(p)) => l.norm(&p.0) + r.norm(&p.1),
            _ => panic!("norm of {x} requested in {self}"),
        }
    }

    /// `d(x, y) = ‖x⁻¹ y‖`.
    pub fn dist(&self, x: &Elem, y: &Elem) -> Result<u64> {
        let d = self.op(&self.inv(x)?, y)?;
        Ok(self.norm(&d))
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            Group::Free(k) => *k <= 1,
            Group::Z | Group::ZPow(_) | Group::Cyclic(_) => true,
            Group::Table(t) => t.is_abelian(),
            Group::Product(l, r) => l.is_abelian() && r.is_abelian(),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Group::Free(k) => *k == 0,
            Group::Z => false,
            Group::ZPow(n) => *n == 0,
            Group::Cyclic(_) | Group::Table(_) => true,
            Group::Product(l, r) => l.is_finite() && r.is_finite(),
        }
    }

    /// All elements of norm at most `radius`, sorted by norm and then by
    /// canonical encoding.
    pub fn ball(&self, radius: usize) -> Vec<Elem> {
        let mut out: Vec<Elem> = match self {
            Group::Free(k) => return words::ball(*k, radius).into_iter().map(Elem::Word).collect(),
            Group::Z => {
                let mut v = vec![Elem::Int(0)];
                for n in 1..=radius as i64 {
                    v.push(Elem::Int(n));
                    v.push(Elem::Int(-n));
                }
                return v;
            }
            Group::Cyclic(m) => (0..*m as i64).map(Elem::Int).filter(|x| self.norm(x) <= radius as u64).collect(),
            Group::ZPow(n) => {
                let mut acc = Vec::new();
                lattice_ball(*n as usize, radius as i64, &mut Vec::new(), &mut acc);
                acc.into_iter().map(Elem::Vector).collect()
            }
            Group::Table(t) => (0..t.order as u32).filter(|&i| t.norm(i) as usize <= radius).map(Elem::Table).collect(),
            Group::Product(l, r) => {
                let mut acc = Vec::new();
                for x in l.ball(radius) {
                    let rest = radius - l.norm(&x) as usize;
                    for y in r.ball(rest) {
                        acc.push(Elem::pair(x.clone(), y));
                    }
                }
                acc
            }
        };
        out.sort_by(|a, b| self.norm(a).cmp(&self.norm(b)).then_with(|| a.cmp(b)));
        out
    }

    /// Parses an element literal: ASCII words, decimal integers,
    /// comma-separated vectors (brackets optional) and `(<elem>|<elem>)`.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        let bad = || Error::Malformed(alloc::format!("{s:?} is not an element of {self}"));
        let parse_int = |t: &str| t.trim().parse::<i64>().map_err(|_| bad());
        let e = match self {
            Group::Free(k) => Elem::Word(Word::parse(s, *k)?),
            Group::Z => Elem::Int(parse_int(s)?),
            Group::Cyclic(m) => Elem::Int(parse_int(s)?.rem_euclid(*m as i64)),
            Group::ZPow(n) => {
                let inner = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')).unwrap_or(s);
                let v = if inner.trim().is_empty() {
                    Vec::new()
                } else {
                    inner.split(',').map(parse_int).collect::<Result<Vec<_>>>()?
                };
                if v.len() != *n as usize {
                    return Err(bad());
                }
                Elem::Vector(v)
            }
            Group::Table(t) => {
                let i = s.parse::<u32>().map_err(|_| bad())?;
                if i as usize >= t.order {
                    return Err(bad());
                }
                Elem::Table(i)
            }
            Group::Product(l, r) => {
                let inner = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
                let mut depth = 0i32;
                let mut split = None;
                for (i, c) in inner.char_indices() {
                    match c {
                        '(' | '[' => depth += 1,
                        ')' | ']' => depth -= 1,
                        '|' if depth == 0 => {
                            split = Some(i);
                            break;
                        }
                        _ => {}
                    }
                }
                let i = split.ok_or_else(bad)?;
                Elem::pair(l.parse_elem(&inner[..i])?, r.parse_elem(&inner[i + 1..])?)
            }
        };
        Ok(e)
    }
}

fn lattice_ball(dims: usize, budget: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if prefix.len() == dims {
        out.push(prefix.clone());
        return;
    }
    for x in -budget..=budget {
        prefix.push(x);
        lattice_ball(dims, budget - x.abs(), prefix, out);
        prefix.pop();
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Free(k) => write!(f, "free:{k}"),
            Group::Z => f.write_str("z"),
            Group::ZPow(n) => write!(f, "zpow:{n}"),
            Group::Cyclic(m) => write!(f, "cyc:{m}"),
            Group::Table(t) => f.write_str(&t.name),
            Group::Product(l, r) => write!(f, "prod({l},{r})"),
        }
    }
}

/// Parses a group spec: `free:k`, `z`, `zpow:n`, `cyc:m`, `sym3`, `dih4`,
/// `quat8`, `cyctable:m`, `table:<path>` or `prod(<spec>,<spec>)`. Table paths are handed
/// to `load_table`, which returns the file contents.
pub fn parse_group(spec: &str, load_table: &mut dyn FnMut(&str) -> Result<String>) -> Result<Group> {
    let s = spec.trim();
    let num = |t: &str| -> Result<u64> {
        t.trim().parse::<u64>().map_err(|_| Error::Malformed(alloc::format!("bad number in group spec {spec:?}")))
    };
    if let Some(inner) = s.strip_prefix("prod(").and_then(|t| t.strip_suffix(')')) {
        let mut depth = 0i32;
        for (i, c) in inner.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    let l = parse_group(&inner[..i], load_table)?;
                    let r = parse_group(&inner[i + 1..], load_table)?;
                    return Ok(Group::product(l, r));
                }
                _ => {}
            }
        }
        return Err(Error::Malformed(alloc::format!("product spec {spec:?} needs two factors")));
    }
    if let Some(path) = s.strip_prefix("table:") {
        let text = load_table(path)?;
        return Ok(Group::Table(Arc::new(CayleyTable::parse(s.to_string(), &text)?)));
    }
    let g = match s {
        "z" => Group::Z,
        "sym3" => Group::Table(Arc::new(CayleyTable::sym3())),
        "dih4" => Group::Table(Arc::new(CayleyTable::dih4())),
        "quat8" => Group::Table(Arc::new(CayleyTable::quat8())),
        _ => {
            if let Some(k) = s.strip_prefix("free:") {
                let k = num(k)?;
                if k > u64::from(words::MAX_RANK) {
                    return Err(Error::Malformed(alloc::format!("free rank {k} too large")));
                }
                Group::Free(k as u32)
            } else if let Some(n) = s.strip_prefix("zpow:") {
                Group::ZPow(num(n)? as u32)
            } else if let Some(m) = s.strip_prefix("cyc:") {
                let m = num(m)?;
                if m == 0 {
                    return Err(Error::Malformed("cyc:0 is not a finite cyclic group".into()));
                }
                Group::Cyclic(m)
            } else if let Some(m) = s.strip_prefix("cyctable:") {
                Group::Table(Arc::new(CayleyTable::cyclic(num(m)? as u32)))
            } else {
                return Err(Error::Malformed(alloc::format!("unknown group spec {spec:?}")));
            }
        }
    };
    Ok(g)
}

/// [`parse_group`] without table-file support.
pub fn parse_group_builtin(spec: &str) -> Result<Group> {
    parse_group(spec, &mut |p| Err(Error::Config(alloc::format!("table files are not available here ({p})"))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(spec: &str) -> Group {
        parse_group_builtin(spec).unwrap()
    }

    fn e(grp: &Group, s: &str) -> Elem {
        grp.parse_elem(s).unwrap()
    }

    #[test]
    fn op_examples() {
        let z = Group::Z;
        assert_eq!(z.op(&Elem::Int(2), &Elem::Int(-5)).unwrap(), Elem::Int(-3));
        let c6 = Group::Cyclic(6);
        assert_eq!(c6.op(&Elem::Int(4), &Elem::Int(5)).unwrap(), Elem::Int(3));
        let p = g("prod(free:2,z)");
        assert_eq!(p.op(&e(&p, "(a|1)"), &e(&p, "(A|2)")).unwrap(), e(&p, "(|3)"));
    }

    #[test]
    fn op_rejects_mismatch() {
        let z = Group::Z;
        let w = Elem::Word(Word::parse("a", 2).unwrap());
        assert!(matches!(z.op(&Elem::Int(1), &w), Err(Error::GroupMismatch(_))));
        assert!(matches!(Group::Cyclic(6).op(&Elem::Int(7), &Elem::Int(1)), Err(Error::GroupMismatch(_))));
        assert!(Group::Free(3).inv(&w).is_err());
    }

    #[test]
    fn norm_examples() {
        assert_eq!(Group::Z.norm(&Elem::Int(-3)), 3);
        let f2 = Group::Free(2);
        assert_eq!(f2.norm(&e(&f2, "abA")), 3);
        let p = g("prod(free:2,z)");
        assert_eq!(p.norm(&e(&p, "(ab|-2)")), 4);
        assert_eq!(Group::Cyclic(6).norm(&Elem::Int(4)), 2);
        assert_eq!(g("zpow:3").norm(&e(&g("zpow:3"), "1,-2,0")), 3);
    }

    #[test]
    fn dist_examples() {
        assert_eq!(Group::Z.dist(&Elem::Int(3), &Elem::Int(7)).unwrap(), 4);
        let f2 = Group::Free(2);
        assert_eq!(f2.dist(&e(&f2, "a"), &e(&f2, "b")).unwrap(), 2);
        let x = e(&f2, "abA");
        assert_eq!(f2.dist(&x, &x).unwrap(), 0);
    }

    #[test]
    fn ball_examples() {
        let z: Vec<i64> = Group::Z.ball(4).iter().map(|x| x.as_int().unwrap()).collect();
        assert_eq!(z, [0, 1, -1, 2, -2, 3, -3, 4, -4]);
        assert_eq!(Group::Free(2).ball(3).len(), 53);
        assert_eq!(g("prod(free:2,z)").ball(2).len(), 29);
        assert_eq!(g("zpow:2").ball(2).len(), 13);
        assert_eq!(g("sym3").ball(3).len(), 6);
    }

    #[test]
    fn builtin_tables() {
        for (name, order, abelian) in
            [("sym3", 6, false), ("dih4", 8, false), ("quat8", 8, false), ("cyctable:5", 5, true)]
        {
            let grp = g(name);
            let Group::Table(t) = &grp else { panic!() };
            assert_eq!(t.order(), order);
            assert_eq!(t.is_abelian(), abelian, "{name}");
        }
        let s3 = CayleyTable::sym3();
        // 3-cycles have order 3.
        for c in [3, 4] {
            assert_ne!(s3.mul(c, c), s3.identity());
            assert_eq!(s3.mul(s3.mul(c, c), c), s3.identity());
        }
    }

    #[test]
    fn table_parse_and_validation() {
        let t = CayleyTable::parse("t", "3\n0 1 2\n1 2 0\n2 0 1\n1\n").unwrap();
        assert_eq!(t.norm(1), 1);
        assert_eq!(t.norm(2), 1);
        assert_eq!(t.generators(), &[1, 2]);
        assert!(CayleyTable::parse("t", "2\n0 1\n1 1\n1").is_err());
        assert!(CayleyTable::parse("t", "3\n0 1 2\n1 2 0\n2 0 1\n").is_err());
        assert!(CayleyTable::parse("t", "2\n0 1\n1").is_err());
    }

    #[test]
    fn group_spec_round_trip() {
        for spec in ["free:2", "z", "zpow:3", "cyc:6", "sym3", "prod(free:2,prod(z,cyc:4))"] {
            assert_eq!(g(spec).to_string(), spec);
        }
        assert!(parse_group_builtin("table:x").is_err());
        assert!(parse_group_builtin("free:x").is_err());
    }

    #[test]
    fn elem_literals() {
        let p = g("prod(zpow:2,prod(free:2,z))");
        let x = e(&p, "([1,-1]|(ab|3))");
        assert_eq!(x.to_string(), "([1,-1]|(ab|3))");
        assert_eq!(e(&p, &x.to_string()), x);
        assert!(p.parse_elem("(1|2)").is_err());
    }
}
