//! Reduced words in a free group of finite rank.
//!
//! Letters are signed generator indices: `i > 0` is generator `i`, `-i` its
//! inverse. The ASCII form writes generator 1 as `a`, 2 as `b`, … and inverses
//! in upper case, so ranks are limited to 26.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::{Error, Result};

pub const MAX_RANK: u32 = 26;

/// A freely reduced word. Equality is structural; [`Ord`] is shortlex with
/// letter order `1 < -1 < 2 < -2 < …`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    rank: u32,
    letters: Vec<i32>,
}

fn check_rank(rank: u32) -> Result<()> {
    if rank > MAX_RANK {
        return Err(Error::Malformed(alloc::format!("rank {rank} exceeds the supported maximum {MAX_RANK}")));
    }
    Ok(())
}

/// Position of a letter in the shortlex alphabet.
#[inline]
fn letter_key(l: i32) -> u32 {
    2 * (l.unsigned_abs() - 1) + u32::from(l < 0)
}

#[inline]
fn key_letter(k: u32) -> i32 {
    let g = (k / 2 + 1) as i32;
    if k % 2 == 1 {
        -g
    } else {
        g
    }
}

/// Appends `l` to an already reduced buffer, cancelling when possible.
#[inline]
fn push_reduced(buf: &mut Vec<i32>, l: i32) {
    if buf.last() == Some(&-l) {
        buf.pop();
    } else {
        buf.push(l);
    }
}

impl Word {
    pub fn identity(rank: u32) -> Self {
        Word { rank, letters: Vec::new() }
    }

    /// Freely reduces a raw letter sequence.
    pub fn reduce(letters: &[i32], rank: u32) -> Result<Self> {
        check_rank(rank)?;
        let mut buf = Vec::with_capacity(letters.len());
        for &l in letters {
            if l == 0 || l.unsigned_abs() > rank {
                return Err(Error::Malformed(alloc::format!(
                    "letter {l} is not a generator of the free group of rank {rank}"
                )));
            }
            push_reduced(&mut buf, l);
        }
        Ok(Word { rank, letters: buf })
    }

    pub fn generator(i: u32, rank: u32) -> Result<Self> {
        Word::reduce(&[i as i32], rank)
    }

    /// Parses the ASCII form; the empty string is the identity.
    pub fn parse(s: &str, rank: u32) -> Result<Self> {
        check_rank(rank)?;
        let mut raw = Vec::with_capacity(s.len());
        for (i, ch) in s.char_indices() {
            let l = match ch {
                'a'..='z' => (ch as u8 - b'a') as i32 + 1,
                'A'..='Z' => -((ch as u8 - b'A') as i32 + 1),
                _ => return Err(Error::Malformed(alloc::format!("unexpected character {ch:?} at {i} in word {s:?}"))),
            };
            if l.unsigned_abs() > rank {
                return Err(Error::Malformed(alloc::format!("letter {ch:?} exceeds rank {rank}")));
            }
            raw.push(l);
        }
        Word::reduce(&raw, rank)
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn same_rank(&self, other: &Word) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::GroupMismatch(alloc::format!("words of rank {} and {}", self.rank, other.rank)));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Word) -> Result<Word> {
        self.same_rank(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Word) -> Word {
        // Only the junction can cancel.
        let mut k = 0;
        let (a, b) = (&self.letters, &other.letters);
        while k < a.len() && k < b.len() && a[a.len() - 1 - k] == -b[k] {
            k += 1;
        }
        let mut letters = Vec::with_capacity(a.len() + b.len() - 2 * k);
        letters.extend_from_slice(&a[..a.len() - k]);
        letters.extend_from_slice(&b[k..]);
        Word { rank: self.rank, letters }
    }

    pub fn inv(&self) -> Word {
        Word { rank: self.rank, letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    /// `self^b = b⁻¹ · self · b`.
    pub fn conj(&self, b: &Word) -> Result<Word> {
        self.same_rank(b)?;
        Ok(b.inv().mul_unchecked(self).mul_unchecked(b))
    }

    /// `[self, b] = self⁻¹ b⁻¹ self b`.
    pub fn commutator(&self, b: &Word) -> Result<Word> {
        self.same_rank(b)?;
        Ok(self.inv().mul_unchecked(&b.inv()).mul_unchecked(self).mul_unchecked(b))
    }

    pub fn commutes(&self, other: &Word) -> Result<bool> {
        self.same_rank(other)?;
        Ok(self.mul_unchecked(other) == other.mul_unchecked(self))
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inv() } else { self.clone() };
        let mut acc = Word::identity(self.rank);
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul_unchecked(&base);
        }
        acc
    }

    /// Splits `self = c⁻¹ · core · c` with `core` cyclically reduced.
    pub fn cyclic_core(&self) -> (Word, Word) {
        let l = &self.letters;
        let mut k = 0;
        while 2 * k + 1 < l.len() && l[k] == -l[l.len() - 1 - k] {
            k += 1;
        }
        let core = Word { rank: self.rank, letters: l[k..l.len() - k].to_vec() };
        let c = Word { rank: self.rank, letters: l[l.len() - k..].to_vec() };
        (core, c)
    }

    /// Primitive root and exponent: `self = root^exponent` with `root` not a
    /// proper power.
    pub fn root(&self) -> Result<(Word, u32)> {
        if self.is_identity() {
            return Err(Error::Degenerate("the identity has no primitive root".into()));
        }
        let (core, c) = self.cyclic_core();
        let n = core.letters.len();
        let period = (1..=n)
            .filter(|d| n % d == 0)
            .find(|&d| (d..n).all(|i| core.letters[i] == core.letters[i - d]))
            .unwrap_or(n);
        let prim = Word { rank: self.rank, letters: core.letters[..period].to_vec() };
        let root = c.inv().mul_unchecked(&prim).mul_unchecked(&c);
        Ok((root, (n / period) as u32))
    }

    /// If `self` is a power of the primitive word `root`, the exponent.
    pub fn log_base(&self, root: &Word) -> Option<i64> {
        if self.rank != root.rank || root.is_identity() {
            return None;
        }
        if self.is_identity() {
            return Some(0);
        }
        let (r, e) = self.root().ok()?;
        if r == *root {
            Some(e as i64)
        } else if r == root.inv() {
            Some(-(e as i64))
        } else {
            None
        }
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank
            .cmp(&other.rank)
            .then(self.letters.len().cmp(&other.letters.len()))
            .then_with(|| self.letters.iter().map(|&l| letter_key(l)).cmp(other.letters.iter().map(|&l| letter_key(l))))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self
            .letters
            .iter()
            .map(|&l| {
                let c = (b'a' + (l.unsigned_abs() - 1) as u8) as char;
                if l < 0 {
                    c.to_ascii_uppercase()
                } else {
                    c
                }
            })
            .collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({:?})", alloc::format!("{self}"))
    }
}

/// Number of reduced words of length exactly `n` in rank `k`.
pub fn sphere_size(rank: u32, n: usize) -> u64 {
    if n == 0 {
        return 1;
    }
    if rank == 0 {
        return 0;
    }
    let k = u64::from(rank);
    2 * k * (2 * k - 1).pow(n as u32 - 1)
}

/// All reduced words of length at most `radius`, in shortlex order.
pub fn ball(rank: u32, radius: usize) -> Vec<Word> {
    let mut out = alloc::vec![Word::identity(rank)];
    let mut sphere_start = 0;
    for _ in 0..radius {
        let sphere_end = out.len();
        for i in sphere_start..sphere_end {
            for k in 0..2 * rank {
                let l = key_letter(k);
                if out[i].letters.last() == Some(&-l) {
                    continue;
                }
                let mut letters = Vec::with_capacity(out[i].letters.len() + 1);
                letters.extend_from_slice(&out[i].letters);
                letters.push(l);
                out.push(Word { rank, letters });
            }
        }
        sphere_start = sphere_end;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(w("abB").to_string(), "a");
        assert_eq!(w("aA").to_string(), "");
        assert_eq!(w("abAB").to_string(), "abAB");
        assert_eq!(Word::reduce(&[1, 2, -2], 2).unwrap(), w("a"));
    }

    #[test]
    fn reduce_rejects_bad_letters() {
        assert!(matches!(Word::reduce(&[0], 2), Err(Error::Malformed(_))));
        assert!(matches!(Word::reduce(&[3], 2), Err(Error::Malformed(_))));
        assert!(matches!(Word::parse("c", 2), Err(Error::Malformed(_))));
        assert!(matches!(Word::parse("a1", 2), Err(Error::Malformed(_))));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(w("ab").mul(&w("BA")).unwrap(), w(""));
        assert_eq!(w("ab").mul(&w("a")).unwrap().to_string(), "aba");
        assert_eq!(w("aB").mul(&w("ba")).unwrap().to_string(), "aa");
        let a3 = Word::parse("a", 3).unwrap();
        assert!(matches!(w("a").mul(&a3), Err(Error::GroupMismatch(_))));
    }

    #[test]
    fn inv_examples() {
        assert_eq!(w("ab").inv().to_string(), "BA");
        assert_eq!(w("").inv().to_string(), "");
        assert_eq!(w("aab").inv().to_string(), "BAA");
    }

    #[test]
    fn conj_examples() {
        assert_eq!(w("a").conj(&w("b")).unwrap().to_string(), "Bab");
        assert_eq!(w("a").conj(&w("")).unwrap().to_string(), "a");
        assert_eq!(w("ab").conj(&w("ab")).unwrap().to_string(), "ab");
    }

    #[test]
    fn commutator_examples() {
        assert_eq!(w("a").commutator(&w("b")).unwrap().to_string(), "ABab");
        assert_eq!(w("a").commutator(&w("aa")).unwrap().to_string(), "");
        assert_eq!(w("ab").commutator(&w("")).unwrap().to_string(), "");
    }

    #[test]
    fn root_examples() {
        let (r, e) = w("abab").root().unwrap();
        assert_eq!((r.to_string().as_str(), e), ("ab", 2));
        assert_eq!(r.mul(&r).unwrap(), w("abab"));
        let (r, e) = w("a").root().unwrap();
        assert_eq!((r.to_string().as_str(), e), ("a", 1));
        let (r, e) = w("Baba").root().unwrap();
        assert_eq!((r.to_string().as_str(), e), ("Baba", 1));
        // Conjugated power: b⁻¹ a³ b.
        let (r, e) = w("Baaab").root().unwrap();
        assert_eq!((r.to_string().as_str(), e), ("Bab", 3));
        assert!(matches!(w("").root(), Err(Error::Degenerate(_))));
    }

    #[test]
    fn commutes_examples() {
        assert!(w("a").commutes(&w("aa")).unwrap());
        assert!(!w("a").commutes(&w("b")).unwrap());
        assert!(w("ab").commutes(&w("abab")).unwrap());
    }

    #[test]
    fn ball_examples() {
        assert_eq!(ball(2, 0), vec![w("")]);
        assert_eq!(ball(2, 1).len(), 5);
        assert_eq!(ball(2, 3).len(), 53);
        let order: Vec<_> = ball(2, 1).iter().map(|x| x.to_string()).collect();
        assert_eq!(order, ["", "a", "A", "b", "B"]);
    }

    #[test]
    fn ball_is_sorted_and_sized() {
        for rank in 1..=3 {
            for r in 0..=4 {
                let b = ball(rank, r);
                assert!(b.windows(2).all(|p| p[0] < p[1]));
                let expected: u64 = (0..=r).map(|i| sphere_size(rank, i)).sum();
                assert_eq!(b.len() as u64, expected);
            }
        }
    }

    #[test]
    fn log_base() {
        let r = w("ab");
        assert_eq!(w("ababab").log_base(&r), Some(3));
        assert_eq!(w("BABA").log_base(&r), Some(-2));
        assert_eq!(w("").log_base(&r), Some(0));
        assert_eq!(w("aab").log_base(&r), None);
    }
}
