//! Coarse calculus of maps between computable groups.
//!
//! The crate works over a small family of groups with exact arithmetic (free
//! groups, `Z`, `Z^n`, finite cyclic groups, finite Cayley tables and direct
//! products of these) and provides:
//!
//! * [`words`]: reduced words in free groups,
//! * [`groups`]: the uniform group/element abstraction with word metrics,
//! * [`gmaps`]: a small DSL describing maps between groups and its evaluator,
//! * [`defects`]: left/right/middle defect sets, multiplicative quadruples and
//!   radius profiles,
//! * [`diffs`]: iterated non-commutative difference operators,
//! * [`zquad`]: quadratic sequences on `Z` and second-order relator checks,
//! * [`coarse`]: quasi-subgroup and commensurator witness searches,
//! * [`normalq`]: normality checks for quasi-quadratic maps.
//!
//! "Bounded" is never decided here. Every statement about boundedness is a
//! finite-radius profile with an explicit plateau classification.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod coarse;
pub mod defects;
pub mod diffs;
mod error;
pub mod gmaps;
pub mod groups;
pub mod normalq;
pub mod profile;
pub mod sample;
pub mod words;
pub mod zquad;

pub use error::{Error, Result};
pub use gmaps::{GroupMap, MapSpec};
pub use groups::{Elem, Group};
pub use profile::{Classification, Profile, ProfileKind, Row};
pub use words::Word;
