use std::collections::BTreeSet;

use anyhow::{bail, Context, Result};
use clap::Subcommand;
use coarsemap_core::coarse::{self, WitnessReport};
use coarsemap_core::defects;
use coarsemap_core::diffs::degree_estimate;
use coarsemap_core::gmaps::{GroupMap, Map};
use coarsemap_core::groups::{parse_group, Elem, Group};
use coarsemap_core::normalq::{check_normality, hyperbolic_desk_check, Caps, HyperbolicVerdict};
use coarsemap_core::sample::Mode;
use coarsemap_core::zquad::{extend, l49_identity, pol2_relator_check, window_check, ZQuadSeed};
use coarsemap_core::{Classification, ProfileKind};
use serde_json::json;

use crate::config::Settings;
use crate::report::Report;
use crate::suite;

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Left (or right, with --kind dstar) defect profile.
    DefectProfile(Settings),
    /// Middle defect profile.
    MiddleProfile(Settings),
    /// Profile of the multiplicative-quadruple set.
    AProfile(Settings),
    /// Smallest d whose iterated-difference profile plateaus.
    PolyDegree(Settings),
    /// Equivariance defect of the quadruple map.
    Equivariance(Settings),
    /// Quadratic sequences on Z: --n, --window S or --identity.
    Zquad(Settings),
    /// Second-order relator check.
    Pol2Check(Settings),
    /// Conjugation probe of a constant --c.
    PiProbe(Settings),
    /// Probe of the pair --a (source), --b (target).
    SProbe(Settings),
    /// Quasi-subgroup witnesses on the graph of the map.
    QsgWitness(Settings),
    /// Commensurator witnesses of --a (an element of source x target).
    CommProbe(Settings),
    /// Normality checks for quasi-quadratic maps.
    NormalityCheck(Settings),
    /// The full acceptance battery.
    TheoremSuite(Settings),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::DefectProfile(_) => "defect-profile",
            Command::MiddleProfile(_) => "middle-profile",
            Command::AProfile(_) => "a-profile",
            Command::PolyDegree(_) => "poly-degree",
            Command::Equivariance(_) => "equivariance",
            Command::Zquad(_) => "zquad",
            Command::Pol2Check(_) => "pol2-check",
            Command::PiProbe(_) => "pi-probe",
            Command::SProbe(_) => "s-probe",
            Command::QsgWitness(_) => "qsg-witness",
            Command::CommProbe(_) => "comm-probe",
            Command::NormalityCheck(_) => "normality-check",
            Command::TheoremSuite(_) => "theorem-suite",
        }
    }

    pub fn settings(&self) -> &Settings {
        match self {
            Command::DefectProfile(s)
            | Command::MiddleProfile(s)
            | Command::AProfile(s)
            | Command::PolyDegree(s)
            | Command::Equivariance(s)
            | Command::Zquad(s)
            | Command::Pol2Check(s)
            | Command::PiProbe(s)
            | Command::SProbe(s)
            | Command::QsgWitness(s)
            | Command::CommProbe(s)
            | Command::NormalityCheck(s)
            | Command::TheoremSuite(s) => s,
        }
    }

    /// Command-specific options this command reads.
    pub fn allowed(&self) -> &'static [&'static str] {
        match self {
            Command::DefectProfile(_) => &["kind", "expect"],
            Command::MiddleProfile(_) | Command::AProfile(_) | Command::Equivariance(_) => &["expect"],
            Command::PolyDegree(_) => &["dmax", "expect"],
            Command::Zquad(_) => &["a", "b", "n", "identity"],
            Command::Pol2Check(_) | Command::TheoremSuite(_) => &[],
            Command::PiProbe(_) => &["c", "expect"],
            Command::SProbe(_) => &["a", "b", "expect"],
            Command::QsgWitness(_) => &["search", "sample", "bound"],
            Command::CommProbe(_) => &["a", "search", "sample", "bound"],
            Command::NormalityCheck(_) => &["len"],
        }
    }

    /// Profile-style commands default to CSV output.
    pub fn is_profile(&self) -> bool {
        matches!(
            self,
            Command::DefectProfile(_)
                | Command::MiddleProfile(_)
                | Command::AProfile(_)
                | Command::Equivariance(_)
                | Command::PiProbe(_)
                | Command::SProbe(_)
        )
    }
}

/// Parses a group spec, reading `table:<path>` files from disk.
pub fn load_group(spec: &str) -> Result<Group> {
    let mut read = |p: &str| {
        std::fs::read_to_string(p).map_err(|e| coarsemap_core::Error::Config(format!("cannot read table {p}: {e}")))
    };
    Ok(parse_group(spec, &mut read)?)
}

pub fn load_map(s: &Settings) -> Result<GroupMap> {
    let text = s.map.as_deref().context("--map is required")?;
    let source = load_group(s.group.as_deref().unwrap_or("z"))?;
    let target = s.target.as_deref().map(load_group).transpose()?;
    Ok(GroupMap::parse(text, &source, target.as_ref())?)
}

fn elem(g: &Group, text: Option<&str>, flag: &str) -> Result<Elem> {
    let text = text.with_context(|| format!("--{flag} is required"))?;
    g.parse_elem(text).with_context(|| format!("--{flag}"))
}

fn strings<'a>(xs: impl IntoIterator<Item = &'a Elem>) -> Vec<String> {
    xs.into_iter().map(|x| x.to_string()).collect()
}

fn parse_class(s: &str) -> Result<Classification> {
    Ok(match s.to_ascii_lowercase().as_str() {
        "plateau" => Classification::Plateau,
        "growing" => Classification::Growing,
        "inconclusive" => Classification::Inconclusive,
        _ => bail!("--expect must be plateau, growing or inconclusive, got {s:?}"),
    })
}

fn expect_class(rep: &mut Report, s: &Settings, got: Classification) -> Result<()> {
    if let Some(e) = &s.expect {
        if parse_class(e)? != got {
            rep.ok = false;
            rep.witness("expected", e);
            rep.witness("got", got.as_str());
        }
    }
    Ok(())
}

fn witness_json(w: &WitnessReport) -> serde_json::Value {
    json!({
        "condition": w.condition.to_string(),
        "scale": w.scale,
        "probe_radius": w.probe_radius,
        "probed": w.probed,
        "worst_witness_norm": w.worst_witness_norm,
        "witness_set": strings(&w.witness_set),
        "exhausted": w.exhausted,
    })
}

fn check_bound(rep: &mut Report, s: &Settings, reports: &[&WitnessReport]) {
    if reports.iter().any(|w| !w.exhausted) {
        rep.set_mode(Mode::Sampled);
    }
    if let Some(bound) = s.bound {
        for w in reports {
            if w.worst_witness_norm.is_none_or(|n| n > bound) {
                rep.ok = false;
                rep.witness(&w.condition.to_string(), w.worst_witness_norm);
            }
        }
    }
}

/// Runs one command on fully merged settings.
pub fn run(cmd: &Command, s: &Settings) -> Result<Report> {
    let name = cmd.name();
    let mut rep = Report::new(name, s);
    let (window, budget, seed) = (s.window_or_default(), s.budget_or_default(), s.seed_or_default());
    match cmd {
        Command::DefectProfile(_) | Command::MiddleProfile(_) | Command::AProfile(_) => {
            let m = load_map(s)?;
            let kind = match cmd {
                Command::MiddleProfile(_) => ProfileKind::M,
                Command::AProfile(_) => ProfileKind::A,
                _ => match s.kind.as_deref().unwrap_or("d") {
                    "d" | "D" => ProfileKind::D,
                    "dstar" | "Dstar" => ProfileKind::Dstar,
                    k => bail!("--kind must be d or dstar, got {k:?}"),
                },
            };
            let p = defects::profile(kind, &m, s.radius_or(4), window, budget, seed)?;
            rep.add_profile(&p);
            expect_class(&mut rep, s, p.classification)?;
        }
        Command::Equivariance(_) => {
            let m = load_map(s)?;
            let p = defects::equiv_defect(&m, s.radius_or(4), window, budget, seed)?;
            rep.add_profile(&p);
            expect_class(&mut rep, s, p.classification)?;
        }
        Command::PolyDegree(_) => {
            let m = load_map(s)?;
            let est = degree_estimate(&m, s.dmax.unwrap_or(2), s.radius_or(4), window, budget, seed)?;
            for p in &est.profiles {
                rep.add_profile(p);
            }
            let degrees: Vec<_> = est
                .profiles
                .iter()
                .enumerate()
                .map(|(d, p)| json!({"d": d, "classification": p.classification.as_str()}))
                .collect();
            rep.result("map", m.spec().to_string());
            rep.result("degrees", degrees);
            rep.result("verdict", est.degree);
            if let Some(e) = &s.expect {
                let want = match e.as_str() {
                    "none" => None,
                    d => Some(d.parse::<usize>().with_context(|| format!("--expect {d:?} is not a degree"))?),
                };
                if want != est.degree {
                    rep.ok = false;
                    rep.witness("expected", e);
                }
            }
        }
        Command::Zquad(_) => {
            let target = load_group(s.target.as_deref().unwrap_or("free:2"))?;
            let seed = ZQuadSeed::new(
                target.clone(),
                elem(&target, s.a.as_deref(), "a")?,
                elem(&target, s.b.as_deref(), "b")?,
            )?;
            let modes = [s.n.is_some(), s.window.is_some(), s.identity.is_some()];
            if modes.iter().filter(|m| **m).count() != 1 {
                bail!("zquad needs exactly one of --n, --window or --identity");
            }
            if let Some(n) = s.n {
                rep.result("n", n);
                rep.result("value", extend(&seed, n)?.to_string());
            } else if let Some(w) = s.window {
                let w = w as u64;
                let out = window_check(&seed, 3 * w, w)?;
                rep.result("holds", out.holds);
                rep.result("checked", out.checked);
                if let Some(t) = &out.witness {
                    rep.witness("triple", strings(t));
                    rep.witness("value", out.value.as_ref().map(|v| v.to_string()));
                }
                rep.ok = out.holds;
            } else {
                let holds = l49_identity(&seed)?;
                rep.result("identity_holds", holds);
                rep.ok = holds;
            }
        }
        Command::Pol2Check(_) => {
            let m = load_map(s)?;
            let out = pol2_relator_check(&m, s.radius_or(3))?;
            rep.result("holds", out.holds);
            rep.result("checked", out.checked);
            if let Some(t) = &out.witness {
                rep.witness("triple", strings(t));
                rep.witness("value", out.value.as_ref().map(|v| v.to_string()));
            }
            rep.ok = out.holds;
        }
        Command::PiProbe(_) => {
            let m = load_map(s)?;
            let c = elem(m.target(), s.c.as_deref(), "c")?;
            let p = coarse::pi_probe(&m, &c, s.radius_or(5), window)?;
            rep.add_profile(&p);
            expect_class(&mut rep, s, p.classification)?;
        }
        Command::SProbe(_) => {
            let m = load_map(s)?;
            let a = elem(m.source(), s.a.as_deref(), "a")?;
            let b = elem(m.target(), s.b.as_deref(), "b")?;
            let p = coarse::s_ab_probe(&m, &a, &b, s.radius_or(5), window)?;
            rep.add_profile(&p);
            expect_class(&mut rep, s, p.classification)?;
        }
        Command::QsgWitness(_) => {
            let m = load_map(s)?;
            let r = s.radius_or(2);
            let search = s.search.unwrap_or(2 * r);
            let lambda = coarse::graph_sample(&m, s.sample.unwrap_or(search))?;
            let (inv, sq) = coarse::quasi_subgroup_witness(&lambda, r, search)?;
            rep.result("inverse_cover", witness_json(&inv));
            rep.result("square_cover", witness_json(&sq));
            check_bound(&mut rep, s, &[&inv, &sq]);
        }
        Command::CommProbe(_) => {
            let m = load_map(s)?;
            let g = Group::product(m.source().clone(), m.target().clone());
            let a = elem(&g, s.a.as_deref(), "a")?;
            let r = s.radius_or(2);
            let search = s.search.unwrap_or(r + 2 * g.norm(&a) as usize);
            let lambda = coarse::graph_sample(&m, s.sample.unwrap_or(search))?;
            let (left, right) = coarse::comm_probe(&lambda, &a, r, search)?;
            rep.result("left", witness_json(&left));
            rep.result("right", witness_json(&right));
            check_bound(&mut rep, s, &[&left, &right]);
        }
        Command::NormalityCheck(_) => {
            let m = load_map(s)?;
            let caps = Caps { budget, window, seed, ..Caps::default() };
            let r = check_normality(&m, s.radius_or(4), s.len.unwrap_or(3), &caps)?;
            rep.set_mode(r.xi_mode);
            rep.add_profile(&r.q1.profile);
            rep.result("target_kind", r.target_kind.as_str());
            rep.result("xi_sample", strings(&r.xi_sample));
            rep.result("q1", r.q1.outcome.as_str());
            rep.result("q2", r.q2.outcome.as_str());
            rep.result("q3", json!({"outcome": r.q3.outcome.as_str(), "transversal": strings(&r.q3.transversal)}));
            rep.result("q4", json!({"outcome": r.q4.outcome.as_str(), "n": r.q4.n, "exhausted": r.q4.exhausted}));
            if let Some((g, k)) = &r.q2.counterexample {
                rep.witness("q2", [g.to_string(), k.to_string()]);
            }
            if !r.q3.uncovered.is_empty() {
                rep.witness("q3_uncovered", strings(&r.q3.uncovered));
            }
            if matches!(m.target(), Group::Free(_)) {
                let v = hyperbolic_desk_check(&m, s.radius_or(4), &caps)?;
                rep.result("hyperbolic", v.name());
                match v {
                    HyperbolicVerdict::CyclicImage { root } => rep.witness("root", root.to_string()),
                    HyperbolicVerdict::Violation { x, y } => {
                        rep.witness("non_commuting", [x.to_string(), y.to_string()])
                    }
                    HyperbolicVerdict::QuadraticLike => {}
                }
            }
            rep.ok = r.passes();
        }
        Command::TheoremSuite(_) => {
            let results = suite::run_all(seed);
            for r in &results {
                eprintln!("{}", r.line());
            }
            rep.ok = results.iter().all(|r| r.passed);
            rep.result("criteria", &results);
            let failed: BTreeSet<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
            if !failed.is_empty() {
                rep.witness("failed", failed);
            }
        }
    }
    Ok(rep)
}
