//! Flags and flat JSON config files.
//!
//! A config file is a JSON object whose keys mirror the long flag names
//! (`"map"`, `"group"`, `"radius"`, ...). Flags given on the command line
//! override values from the file.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Every option understood by some subcommand.
#[derive(Clone, Debug, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Settings {
    /// Map in the map DSL, e.g. "perturb{id,c=a}".
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<String>,
    /// Source group spec (default z).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    /// Target group spec when the map cannot infer it.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    /// Largest radius (or scale, for witness searches).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    /// Plateau window; for `zquad`, the shift bound S of a window check.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    /// Tuple budget before enumeration switches to sampling.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Output file (standard output if absent).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,

    /// Which pair defect set: d or dstar.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    /// Largest degree tried by poly-degree.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dmax: Option<usize>,
    /// Search radius R' for witness searches.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<usize>,
    /// Radius of the sampled graph (default: the search radius).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample: Option<usize>,
    /// Product length for subgroup samples.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub len: Option<usize>,
    /// Constant for pi-probe.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    /// First element argument (s-probe, comm-probe, zquad).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    /// Second element argument (s-probe, zquad).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    /// Index at which zquad evaluates the sequence.
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    /// zquad: test the commutation identity.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identity: Option<bool>,
    /// Expected classification (or degree); a mismatch exits with 1.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expect: Option<String>,
    /// Largest acceptable witness norm; a larger one exits with 1.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
}

macro_rules! overlay {
    ($hi:expr, $lo:expr, $($f:ident),*) => {
        Settings { $($f: $hi.$f.or($lo.$f)),* }
    };
}

impl Settings {
    /// Values from `self`, falling back to `lower`.
    pub fn over(self, lower: Settings) -> Settings {
        overlay!(
            self, lower, map, group, target, radius, window, budget, seed, out, format, kind, dmax, search, sample,
            len, c, a, b, n, identity, expect, bound
        )
    }

    pub fn load(path: &Path) -> Result<Settings> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Names of the command-specific options that are set.
    pub fn specific_keys(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let mut add = |set: bool, name| {
            if set {
                out.push(name)
            }
        };
        add(self.kind.is_some(), "kind");
        add(self.dmax.is_some(), "dmax");
        add(self.search.is_some(), "search");
        add(self.sample.is_some(), "sample");
        add(self.len.is_some(), "len");
        add(self.c.is_some(), "c");
        add(self.a.is_some(), "a");
        add(self.b.is_some(), "b");
        add(self.n.is_some(), "n");
        add(self.identity.is_some(), "identity");
        add(self.expect.is_some(), "expect");
        add(self.bound.is_some(), "bound");
        out
    }

    /// Rejects command-specific flags that `command` does not read.
    pub fn check_applicable(&self, command: &str, allowed: &[&str]) -> Result<()> {
        for key in self.specific_keys() {
            if !allowed.contains(&key) {
                bail!("--{key} does not apply to {command}");
            }
        }
        Ok(())
    }

    pub fn radius_or(&self, d: usize) -> usize {
        self.radius.unwrap_or(d)
    }

    pub fn window_or_default(&self) -> usize {
        self.window.unwrap_or(3)
    }

    pub fn budget_or_default(&self) -> u64 {
        self.budget.unwrap_or(coarsemap_core::sample::DEFAULT_BUDGET)
    }

    pub fn seed_or_default(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}
