//! Deterministic pseudo-randomness and budgeted tuple enumeration.

use crate::Result;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 output finalizer.
#[inline]
pub fn mix64(x: u64) -> u64 {
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// SplitMix64 stream.
#[derive(Clone, Debug)]
pub struct SplitMix {
    state: u64,
}

impl SplitMix {
    pub fn new(seed: u64) -> Self {
        SplitMix { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform-ish index below `n` (modulo bias is irrelevant at these sizes).
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// Whether a set was computed over every tuple or over a seeded sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Exact,
    Sampled,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Sampled => "sampled",
        }
    }

    pub fn join(self, other: Mode) -> Mode {
        self.max(other)
    }
}

impl core::fmt::Display for Mode {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Default cap on enumerated tuples before switching to sampling.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Calls `f` on index tuples of the given arity over `0..n`: every tuple in
/// lexicographic order when `n^arity ≤ budget`, otherwise `budget` tuples
/// drawn from a SplitMix64 stream seeded with `seed`.
pub fn for_each_tuple<F>(n: usize, arity: usize, budget: u64, seed: u64, mut f: F) -> Result<Mode>
where
    F: FnMut(&[usize]) -> Result<()>,
{
    let mut idx = [0usize; 8];
    assert!(arity <= idx.len(), "tuple arity {arity} unsupported");
    let idx = &mut idx[..arity];
    if n == 0 {
        return Ok(Mode::Exact);
    }
    let total = (n as u64).checked_pow(arity as u32);
    match total {
        Some(t) if t <= budget => loop {
            f(idx)?;
            let mut k = arity;
            loop {
                if k == 0 {
                    return Ok(Mode::Exact);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < n {
                    break;
                }
                idx[k] = 0;
            }
        },
        _ => {
            let mut rng = SplitMix::new(seed);
            for _ in 0..budget {
                for slot in idx.iter_mut() {
                    *slot = rng.below(n);
                }
                f(idx)?;
            }
            Ok(Mode::Sampled)
        }
    }
}
