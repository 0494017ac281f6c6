//! Radius profiles and their plateau classification.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::groups::{Elem, Group};
use crate::sample::Mode;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProfileKind {
    D,
    Dstar,
    M,
    A,
    Pd(u8),
    Pi,
    SAb,
    Equiv,
    /// Norms of a map on conjugates `x⁻¹ b⁻¹ x`.
    ConjRestriction,
    /// Worst quasi-subgroup witness norm.
    Qsg,
    /// Worst commensurator witness norm.
    Comm,
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileKind::D => f.write_str("D"),
            ProfileKind::Dstar => f.write_str("Dstar"),
            ProfileKind::M => f.write_str("M"),
            ProfileKind::A => f.write_str("A"),
            ProfileKind::Pd(d) => write!(f, "P_{d}"),
            ProfileKind::Pi => f.write_str("Pi"),
            ProfileKind::SAb => f.write_str("S_ab"),
            ProfileKind::Equiv => f.write_str("Equiv"),
            ProfileKind::ConjRestriction => f.write_str("ConjRestriction"),
            ProfileKind::Qsg => f.write_str("QSG"),
            ProfileKind::Comm => f.write_str("Comm"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Plateau,
    Growing,
    Inconclusive,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Plateau => "Plateau",
            Classification::Growing => "Growing",
            Classification::Inconclusive => "Inconclusive",
        }
    }

    pub fn is_plateau(self) -> bool {
        self == Classification::Plateau
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub radius: usize,
    pub set_size: usize,
    pub max_norm: u64,
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub kind: ProfileKind,
    pub rows: Vec<Row>,
    pub window: usize,
    pub classification: Classification,
}

/// Plateau iff the last `window` statistics are equal; Growing iff they are
/// strictly increasing; Inconclusive otherwise (including too few rows).
pub fn classify(max_norms: &[u64], window: usize) -> Classification {
    if window == 0 || max_norms.len() < window {
        return Classification::Inconclusive;
    }
    let tail = &max_norms[max_norms.len() - window..];
    if tail.windows(2).all(|w| w[0] == w[1]) {
        Classification::Plateau
    } else if tail.windows(2).all(|w| w[0] < w[1]) {
        Classification::Growing
    } else {
        Classification::Inconclusive
    }
}

impl Profile {
    pub fn new(kind: ProfileKind, rows: Vec<Row>, window: usize) -> Self {
        let norms: Vec<u64> = rows.iter().map(|r| r.max_norm).collect();
        let classification = classify(&norms, window);
        Profile { kind, rows, window, classification }
    }

    pub fn max_norms(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.max_norm).collect()
    }

    pub fn last_max(&self) -> u64 {
        self.rows.last().map_or(0, |r| r.max_norm)
    }

    pub fn mode(&self) -> Mode {
        self.rows.iter().fold(Mode::Exact, |m, r| m.join(r.mode))
    }
}

/// Largest norm in a set (0 for the empty set).
pub fn max_norm(group: &Group, set: &BTreeSet<Elem>) -> u64 {
    set.iter().map(|x| group.norm(x)).max().unwrap_or(0)
}

pub fn row_of(group: &Group, radius: usize, set: &BTreeSet<Elem>, mode: Mode) -> Row {
    Row { radius, set_size: set.len(), max_norm: max_norm(group, set), mode }
}

/// Builds rows for radii `1..=rmax` from per-radius sets. Each row records
/// the union of all sets so far, so rows stay nested even when a radius was
/// only sampled.
pub fn nested_profile<F>(kind: ProfileKind, group: &Group, rmax: usize, window: usize, mut set_at: F) -> Result<Profile>
where
    F: FnMut(usize) -> Result<(BTreeSet<Elem>, Mode)>,
{
    let mut acc = BTreeSet::new();
    let mut rows = Vec::with_capacity(rmax);
    for r in 1..=rmax {
        let (set, mode) = set_at(r)?;
        acc.extend(set);
        rows.push(row_of(group, r, &acc, mode));
    }
    Ok(Profile::new(kind, rows, window))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_rules() {
        assert_eq!(classify(&[1, 3, 3, 3], 3), Classification::Plateau);
        assert_eq!(classify(&[1, 2, 3], 3), Classification::Growing);
        assert_eq!(classify(&[2, 2, 3], 3), Classification::Inconclusive);
        assert_eq!(classify(&[5, 5], 3), Classification::Inconclusive);
        assert_eq!(classify(&[0, 0, 0], 3), Classification::Plateau);
    }
}
