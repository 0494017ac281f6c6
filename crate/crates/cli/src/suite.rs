//! The acceptance battery behind `theorem-suite`.
//!
//! Each criterion is a fixed desk-scale experiment with an exact expected
//! outcome and a wall-clock limit. A criterion passes only if both hold.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use anyhow::{ensure, Context, Result};
use coarsemap_core::coarse::{comm_profile, default_slack, delta_sample, graph_sample, pertdelta_check, pi_probe};
use coarsemap_core::defects::{self, in_inverse_product, set_a, set_m};
use coarsemap_core::diffs::{iter_diff, lemma43};
use coarsemap_core::gmaps::{GroupMap, Map, MapSpec};
use coarsemap_core::groups::{parse_group_builtin, Elem, Group};
use coarsemap_core::normalq::{check_normality, hyperbolic_desk_check, Caps, HyperbolicVerdict, Outcome};
use coarsemap_core::sample::{SplitMix, DEFAULT_BUDGET};
use coarsemap_core::zquad::{extend, l49_identity, pol2_relator_check, window_check, ZQuadSeed};
use coarsemap_core::{Classification, ProfileKind};
use serde::Serialize;

/// Largest equivariance defect of `floor_quad{1,3}` over radius 4, from an
/// independent brute-force run.
pub const FLOOR_QUAD_EQUIV_BOUND: u64 = 1;

/// Total time allowed for the whole battery.
pub const SUITE_LIMIT: Duration = Duration::from_secs(600);

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub limit: Duration,
}

impl CriterionResult {
    /// One line for humans, timing included.
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:2} {:<34} {:>7.2}s / {:>3}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs(),
            self.detail
        )
    }
}

pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub limit: Duration,
    run: fn(u64) -> Result<String>,
}

pub const CRITERIA: [Criterion; 10] = [
    Criterion { id: 1, title: "triple difference closed form", limit: secs(10), run: closed_form_oracle },
    Criterion { id: 2, title: "middle to left round trip", limit: secs(60), run: round_trip },
    Criterion { id: 3, title: "perturbation identity", limit: secs(30), run: perturbation_identity },
    Criterion { id: 4, title: "quadruple set inclusions", limit: secs(120), run: quadruple_inclusions },
    Criterion { id: 5, title: "quadratic sequences on Z", limit: secs(5), run: zquad_anchors },
    Criterion { id: 6, title: "second-order relators", limit: secs(60), run: relator_battery },
    Criterion { id: 7, title: "conjugation probes", limit: secs(30), run: conjugation_probes },
    Criterion { id: 8, title: "probe/commensurator agreement", limit: secs(120), run: coarse_correspondence },
    Criterion { id: 9, title: "normality battery", limit: secs(30), run: normality_battery },
    Criterion { id: 10, title: "brooks profile timing", limit: secs(30), run: brooks_timing },
];

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

impl Criterion {
    pub fn run(&self, seed: u64) -> CriterionResult {
        let start = Instant::now();
        let out = (self.run)(seed);
        let elapsed = start.elapsed();
        let (passed, detail) = match out {
            Ok(d) if elapsed <= self.limit => (true, d),
            Ok(d) => (false, format!("too slow; {d}")),
            Err(e) => (false, format!("{e:#}")),
        };
        CriterionResult { id: self.id, title: self.title, passed, detail, elapsed, limit: self.limit }
    }
}

/// Runs every criterion in order.
pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|c| c.run(seed)).collect()
}

fn f2() -> Group {
    Group::Free(2)
}

fn map(spec: &str, source: &Group, target: Option<&Group>) -> Result<GroupMap> {
    GroupMap::parse(spec, source, target).with_context(|| format!("map {spec}"))
}

/// General corpus of example maps.
pub fn corpus() -> Result<Vec<GroupMap>> {
    let z = Group::Z;
    Ok(vec![
        map("brooks{ab}", &f2(), None)?,
        map("brooks{aab}", &f2(), None)?,
        map("floor_scale{1,2}", &z, None)?,
        map("floor_scale{2,3}", &z, None)?,
        map("hom{1->3}", &z, None)?,
        map("monomial{2}", &z, None)?,
        map("floor_quad{1,3}", &z, None)?,
        map("hom{a->ab,b->b}", &f2(), None)?,
        map("id", &f2(), None)?,
        map("perturb{id,c=a}", &f2(), None)?,
        map("random{seed=5,domR=2,tgtR=2}", &f2(), None)?,
        map("hom{1->a}", &z, Some(&f2()))?,
    ])
}

/// Quasi-homomorphisms whose constant perturbations make up the middle
/// quasi-homomorphism corpus.
pub fn quasi_hom_corpus() -> Result<Vec<GroupMap>> {
    let z = Group::Z;
    Ok(vec![
        map("brooks{ab}", &f2(), None)?,
        map("brooks{aab}", &f2(), None)?,
        map("floor_scale{1,2}", &z, None)?,
        map("floor_scale{2,3}", &z, None)?,
        map("hom{1->3}", &z, None)?,
        map("hom{1->-2}", &z, None)?,
        map("hom{a->ab,b->b}", &f2(), None)?,
        map("hom{a->B,b->ba}", &f2(), None)?,
        map("id", &f2(), None)?,
        map("hom{1->a}", &z, Some(&f2()))?,
    ])
}

fn closed_form_oracle(seed: u64) -> Result<String> {
    let mut checked = 0u64;
    let shifts = f2().ball(1);
    for i in 0..100 {
        let m = map(&format!("random{{seed={},domR=2,tgtR=2}}", seed.wrapping_add(i)), &f2(), None)?;
        for g1 in &shifts {
            for g2 in &shifts {
                for g3 in &shifts {
                    let closed = lemma43(&m, g1, g2, g3)?;
                    let expanded = iter_diff(&m, &[g1.clone(), g2.clone(), g3.clone()])?;
                    ensure!(closed == expanded, "{} at ({g1}, {g2}, {g3}): {closed} vs {expanded}", m.spec());
                    checked += 1;
                }
            }
        }
    }
    for i in 0..100 {
        let m = map(&format!("random{{seed={},domR=8,tgtR=8}}", seed.wrapping_add(1000 + i)), &Group::Z, None)?;
        for g1 in -2..=2 {
            for g2 in -2..=2 {
                for g3 in -2..=2 {
                    let s = [g1, g2, g3].map(Elem::Int);
                    let closed = lemma43(&m, &s[0], &s[1], &s[2])?;
                    ensure!(closed == iter_diff(&m, &s)?, "{} at ({g1}, {g2}, {g3})", m.spec());
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} shift triples agree"))
}

fn profile_of(kind: ProfileKind, m: &GroupMap) -> Result<Classification> {
    Ok(defects::profile(kind, m, 5, 3, DEFAULT_BUDGET, 0)?.classification)
}

fn round_trip(seed: u64) -> Result<String> {
    let mut middle = 0;
    for phi in quasi_hom_corpus()? {
        let mut kept = 0;
        for c in phi.target().ball(2) {
            let psi = GroupMap::new(MapSpec::perturb(phi.spec().clone(), c.clone())?)?;
            if !profile_of(ProfileKind::M, &psi)?.is_plateau() {
                continue;
            }
            kept += 1;
            let unital = GroupMap::new(MapSpec::unitalize(psi.spec().clone()))?;
            let cls = profile_of(ProfileKind::D, &unital)?;
            ensure!(cls.is_plateau(), "unitalized {} is {cls}", psi.spec());
        }
        ensure!(kept > 0, "no constant perturbation of {} has a bounded middle defect", phi.spec());
        middle += kept;
    }
    let mut rng = SplitMix::new(seed);
    let ball = Group::Z.ball(2);
    for _ in 0..5 {
        let (p, q) = (1 + rng.below(3), 1 + rng.below(4));
        let c = &ball[rng.below(ball.len())];
        let spec = format!("perturb{{floor_quad{{{p},{q}}},c={c}}}");
        let psi = map(&spec, &Group::Z, None)?;
        let unital = GroupMap::new(MapSpec::unitalize(psi.spec().clone()))?;
        let cls = profile_of(ProfileKind::D, &unital)?;
        ensure!(!cls.is_plateau(), "unitalized {spec} plateaus");
    }
    Ok(format!("{middle} middle quasi-homomorphisms round-trip; 5 unbounded maps rejected"))
}

fn perturbation_identity(_seed: u64) -> Result<String> {
    let mut pairs = 0;
    for m in corpus()? {
        let t = m.target().clone();
        let base = set_m(&m, 3)?;
        for c in t.ball(2) {
            let pc = GroupMap::new(MapSpec::perturb(m.spec().clone(), c.clone())?)?;
            let ci = t.inv(&c)?;
            let moved = base.iter().map(|x| t.op(&ci, x)).collect::<coarsemap_core::Result<BTreeSet<_>>>()?;
            ensure!(set_m(&pc, 3)? == moved, "{} perturbed by {c}", m.spec());
            pairs += 1;
        }
    }
    Ok(format!("{pairs} (map, constant) pairs"))
}

fn quadruple_inclusions(seed: u64) -> Result<String> {
    for m in corpus()? {
        let t = m.target().clone();
        let one = m.eval(&m.source().identity())?;
        let a4 = set_a(&m, 4, u64::MAX, seed)?.0;
        for x in set_m(&m, 2)? {
            let y = t.op(&one, &x)?;
            ensure!(a4.contains(&y), "{}: {y} from the middle set is missing in A(4)", m.spec());
        }
        let m6 = set_m(&m, 6)?;
        for x in set_a(&m, 2, u64::MAX, seed)?.0 {
            ensure!(in_inverse_product(&t, &m6, &x)?, "{}: {x} is outside M(6)^-1 M(6)", m.spec());
        }
    }
    Ok("both inclusions exact on the corpus".into())
}

fn zquad_anchors(_seed: u64) -> Result<String> {
    let w = |s: &str| f2().parse_elem(s);
    let free = ZQuadSeed::new(f2(), w("a")?, w("b")?)?;
    ensure!(extend(&free, 3)? == w("bAAbAb")?, "phi(3) = {}", extend(&free, 3)?);
    ensure!(extend(&free, -1)? == w("AbAA")?, "phi(-1) = {}", extend(&free, -1)?);
    ensure!(!l49_identity(&free)?, "commutation identity holds for free generators");
    ensure!(!window_check(&free, 6, 2)?.holds, "window check passes for free generators");

    let z2 = Group::ZPow(2);
    for a in z2.ball(2) {
        for b in z2.ball(2) {
            let s = ZQuadSeed::new(z2.clone(), a.clone(), b.clone())?;
            ensure!(l49_identity(&s)?, "commutation identity fails for ({a}, {b})");
            let (av, bv) = (a.as_vector().unwrap(), b.as_vector().unwrap());
            for n in -20..=20i64 {
                let c = n * (n - 1) / 2;
                let want: Vec<i64> = av.iter().zip(bv).map(|(x, y)| n * x + c * (y - 2 * x)).collect();
                ensure!(extend(&s, n)? == Elem::Vector(want), "closed form at ({a}, {b}), n = {n}");
            }
        }
    }
    for target in [Group::Z, Group::Cyclic(5)] {
        for a in target.ball(2) {
            for b in target.ball(2) {
                ensure!(l49_identity(&ZQuadSeed::new(target.clone(), a.clone(), b.clone())?)?, "{target}: ({a}, {b})");
            }
        }
    }
    Ok("anchors, closed form and identities hold".into())
}

fn relator_battery(seed: u64) -> Result<String> {
    let z = Group::Z;
    let sq = map("monomial{2}", &z, None)?;
    let fq = map("floor_quad{1,3}", &z, None)?;
    ensure!(pol2_relator_check(&sq, 5)?.holds, "monomial{{2}} violates a relator");
    let out = pol2_relator_check(&fq, 5)?;
    ensure!(!out.holds && out.witness.is_some(), "floor_quad{{1,3}} passes the relator check");
    let e = defects::equiv_defect(&sq, 4, 3, DEFAULT_BUDGET, seed)?;
    ensure!(e.max_norms().iter().all(|&v| v == 0), "monomial{{2}} equivariance {:?}", e.max_norms());
    let e = defects::equiv_defect(&fq, 4, 3, DEFAULT_BUDGET, seed)?;
    ensure!(e.classification.is_plateau(), "floor_quad{{1,3}} equivariance {:?}", e.max_norms());
    ensure!(e.last_max() <= FLOOR_QUAD_EQUIV_BOUND, "floor_quad{{1,3}} equivariance {:?}", e.max_norms());
    let [g1, g2, g3] = out.witness.unwrap();
    Ok(format!("relator witness ({g1}, {g2}, {g3}); equivariance max {}", e.last_max()))
}

fn conjugation_probes(_seed: u64) -> Result<String> {
    for m in corpus()? {
        let t = m.target();
        if !t.is_abelian() {
            continue;
        }
        for c in t.ball(2) {
            let p = pi_probe(&m, &c, 5, 3)?;
            ensure!(p.max_norms().iter().all(|&v| v == t.norm(&c)), "{} with {c}: {:?}", m.spec(), p.max_norms());
        }
    }
    let id = map("id", &f2(), None)?;
    let p = pi_probe(&id, &f2().parse_elem("a")?, 5, 3)?;
    ensure!(p.max_norms() == [3, 5, 7, 9, 11], "id with a: {:?}", p.max_norms());
    let h = map("hom{1->a}", &Group::Z, Some(&f2()))?;
    let p = pi_probe(&h, &f2().parse_elem("b")?, 5, 3)?;
    ensure!(p.max_norms() == [3, 5, 7, 9, 11], "hom{{1->a}} with b: {:?}", p.max_norms());
    let b = map("brooks{ab}", &f2(), None)?;
    let out = pertdelta_check(&b, 4, 2, 5, 3)?;
    ensure!(out.holds(), "perturbing brooks{{ab}} by {:?} breaks it", out.failing);
    Ok(format!("{} defect perturbations of brooks{{ab}} stay bounded", out.tested.len()))
}

fn is_symmetric(m: &GroupMap) -> Result<bool> {
    let (s, t) = (m.source(), m.target());
    for x in s.ball(3) {
        if m.eval(&s.inv(&x)?)? != t.inv(&m.eval(&x)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn coarse_correspondence(_seed: u64) -> Result<String> {
    let (rmax, window) = (5, 3);
    let mut pairs = 0;
    let mut bounded = 0;
    for m in quasi_hom_corpus()? {
        if !is_symmetric(&m)? {
            continue;
        }
        let t = m.target().clone();
        let mut cs = vec![t.identity(), t.ball(1)[1].clone()];
        let (delta, _) = delta_sample(&m, 2, 2, 64)?;
        let mut delta: Vec<Elem> = delta.into_iter().collect();
        delta.sort_by_key(|x| t.norm(x));
        cs.extend(delta.into_iter().take(4));
        cs.sort();
        cs.dedup();
        let lambda_group = Group::product(m.source().clone(), t.clone());
        let slack_max = cs
            .iter()
            .map(|c| default_slack(&lambda_group, &Elem::pair(m.source().identity(), c.clone())))
            .max()
            .unwrap();
        let lambda = graph_sample(&m, rmax + slack_max)?;
        for c in cs {
            let pi = pi_probe(&m, &c, rmax, window)?.classification;
            let a = Elem::pair(m.source().identity(), c.clone());
            let comm = comm_profile(&lambda, &a, rmax, window, default_slack(&lambda_group, &a))?;
            ensure!(
                pi.is_plateau() == comm.classification.is_plateau(),
                "{} with {c}: probe {pi}, commensurator {:?}",
                m.spec(),
                comm.max_norms()
            );
            pairs += 1;
            bounded += pi.is_plateau() as usize;
        }
    }
    Ok(format!("{pairs} pairs agree ({bounded} bounded)"))
}

fn normality_battery(seed: u64) -> Result<String> {
    let caps = Caps { seed, ..Caps::default() };
    let s3 = parse_group_builtin("sym3")?;
    let almost = map("compose{hom{1->3},random{seed=11,domR=6,tgtR=2}}", &Group::Z, Some(&s3))?;
    let r = check_normality(&almost, 6, 3, &caps)?;
    ensure!(r.passes() && r.q4.exhausted, "almost quadratic example: {r:?}");
    let comp = map("compose{floor_scale{1,2},monomial{2}}", &Group::Z, None)?;
    let r = check_normality(&comp, 5, 3, &caps)?;
    ensure!(r.passes(), "composition example: {r:?}");
    let zq = map("zquad{a=a,b=b}", &Group::Z, Some(&f2()))?;
    let r = check_normality(&zq, 4, 2, &caps)?;
    ensure!(r.q1.outcome == Outcome::Fail, "free quadratic candidate: Q1 {}", r.q1.outcome);

    let h = map("hom{1->a}", &Group::Z, Some(&f2()))?;
    ensure!(hyperbolic_desk_check(&h, 4, &caps)? == HyperbolicVerdict::QuadraticLike, "hom{{1->a}}");
    let c = map("compose{hom{1->ab},floor_quad{1,3}}", &Group::Z, Some(&f2()))?;
    let v = hyperbolic_desk_check(&c, 4, &caps)?;
    ensure!(matches!(v, HyperbolicVerdict::CyclicImage { .. }), "cyclic example gave {}", v.name());
    let r = map("random{seed=2,domR=3,tgtR=3}", &f2(), None)?;
    let v = hyperbolic_desk_check(&r, 3, &caps)?;
    ensure!(matches!(v, HyperbolicVerdict::Violation { .. }), "random example gave {}", v.name());
    Ok("Q1-Q4 and hyperbolic verdicts as expected".into())
}

fn brooks_timing(_seed: u64) -> Result<String> {
    let b = map("brooks{ab}", &f2(), None)?;
    let p = defects::profile(ProfileKind::D, &b, 6, 3, DEFAULT_BUDGET, 0)?;
    ensure!(p.classification.is_plateau(), "brooks{{ab}} D-profile {:?}", p.max_norms());
    Ok(format!("D-profile to radius 6: {:?}", p.max_norms()))
}
