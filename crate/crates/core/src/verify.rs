//! The verification suites behind `krss verify`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::bredon::{orbit_restriction, rp_reduced_cohomology, rp_reduced_homology, weight_column, Site};
use crate::coeffring::{basis_at, mackey_at, restrict_etale_to_orbit, ring_soundness, verify_against_bredon_with, MackeyPair, RingElement, Theory, Window};
use crate::exactalg::{FGAbelianGroup, GroupHom};
use crate::exec::Strategy;
use crate::krtower::{build_with, check_against_reference, default_window, e2_crosscheck, etale_comparison, weight_filtration_report, Comparison, Match, Mode, Space, Tower, Variant};
use crate::mackey::MackeyZ2;
use crate::ssengine::{adams_action, Spot};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    Coeffs,
    Ring,
    Ss,
    Etale,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "coeffs" => Ok(Suite::Coeffs),
            "ring" => Ok(Suite::Ring),
            "ss" => Ok(Suite::Ss),
            "etale" => Ok(Suite::Etale),
            "all" => Ok(Suite::All),
            _ => Err(format!("unknown suite `{s}`")),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Coeffs => "coeffs",
            Suite::Ring => "ring",
            Suite::Ss => "ss",
            Suite::Etale => "etale",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

impl Suite {
    pub fn criteria(&self) -> &'static [u8] {
        match self {
            Suite::Coeffs => &[1, 2, 8],
            Suite::Ring => &[3],
            Suite::Ss => &[4, 5, 7, 9],
            Suite::Etale => &[6],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9],
        }
    }

    pub fn of(criterion: u8) -> Suite {
        match criterion {
            1 | 2 | 8 => Suite::Coeffs,
            3 => Suite::Ring,
            6 => Suite::Etale,
            _ => Suite::Ss,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub criterion: u8,
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// first failing bidegree, when there is one
    pub witness: Option<(i64, i64)>,
    pub millis: u128,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {} [{}] {}: {status} ({} ms) {}", self.criterion, self.suite, self.name, self.millis, self.detail)?;
        if let Some((p, q)) = self.witness {
            write!(f, " witness ({p},{q})")?;
        }
        Ok(())
    }
}

/// Inputs of a verification run.
#[derive(Clone, Debug)]
pub struct Config {
    /// coefficients fed to the Bredon computations
    pub coefficients: MackeyZ2,
    pub strategy: Strategy,
    /// half-width of the coefficient window
    pub coeff_radius: i64,
    pub ring_radius: i64,
    pub degree_radius: i64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            coefficients: MackeyZ2::constant(&FGAbelianGroup::z()),
            strategy: Strategy::default(),
            coeff_radius: 8,
            ring_radius: 10,
            degree_radius: 12,
        }
    }
}

impl Config {
    /// The constant functor with its transfer negated, which is not a Mackey functor.
    pub fn with_flipped_transfer(mut self) -> Self {
        let m = &mut self.coefficients;
        m.tr = GroupHom::scalar(&m.m_fixed, &-m.tr.as_scalar().unwrap_or_else(BigInt::one));
        self
    }
}

struct Check {
    passed: bool,
    detail: String,
    witness: Option<(i64, i64)>,
}

impl Check {
    fn pass(detail: impl Into<String>) -> Self {
        Check {
            passed: true,
            detail: detail.into(),
            witness: None,
        }
    }

    fn fail(detail: impl Into<String>, witness: Option<(i64, i64)>) -> Self {
        Check {
            passed: false,
            detail: detail.into(),
            witness,
        }
    }
}

pub const NAMES: [&str; 9] = [
    "coefficient table",
    "Mackey structure per degree",
    "ring soundness",
    "KR of the point",
    "orbit collapse",
    "etale sequence and descent",
    "rational collapse and Adams compatibility",
    "RP column oracle",
    "truncation consistency",
];

/// Pages shared by the spectral sequence criteria.
struct Towers {
    kr: Tower,
    kret: Tower,
    orbit: Tower,
}

fn towers(cfg: &Config) -> Result<Towers, String> {
    let b = |s, v| build_with(s, v, Mode::Stable, default_window(), cfg.strategy).map_err(|e| e.to_string());
    Ok(Towers {
        kr: b(Space::Pt, Variant::Kr)?,
        kret: b(Space::Pt, Variant::KrEt)?,
        orbit: b(Space::Orbit, Variant::Kr)?,
    })
}

pub fn run(suite: Suite, cfg: &Config) -> Vec<Outcome> {
    let mut cached: Option<Result<Towers, String>> = None;
    let mut out = Vec::new();
    for &c in suite.criteria() {
        let start = Instant::now();
        let needs_towers = matches!(c, 4..=7 | 9);
        if needs_towers && cached.is_none() {
            cached = Some(towers(cfg));
        }
        let t = cached.as_ref();
        let check = match (c, t) {
            (1, _) => criterion1(cfg),
            (2, _) => criterion2(cfg),
            (3, _) => criterion3(cfg),
            (8, _) => criterion8(cfg),
            (_, Some(Err(e))) => Check::fail(format!("pages failed to build: {e}"), None),
            (4, Some(Ok(t))) => criterion4(cfg, t),
            (5, Some(Ok(t))) => criterion5(cfg, t),
            (6, Some(Ok(t))) => criterion6(cfg, t),
            (7, Some(Ok(t))) => criterion7(cfg, t),
            (9, Some(Ok(t))) => criterion9(cfg, t),
            _ => unreachable!("criteria are numbered 1 to 9"),
        };
        out.push(Outcome {
            criterion: c,
            suite: Suite::of(c),
            name: NAMES[c as usize - 1].to_string(),
            passed: check.passed,
            detail: check.detail,
            witness: check.witness,
            millis: start.elapsed().as_millis(),
        });
    }
    out
}

fn criterion1(cfg: &Config) -> Check {
    let w = Window::square(cfg.coeff_radius);
    let bad = verify_against_bredon_with(w, &cfg.coefficients, cfg.strategy);
    match bad.first() {
        None => Check::pass(format!("pt and orbit agree on |p|,|q| <= {}", cfg.coeff_radius)),
        Some(m) => Check::fail(format!("{} mismatches, first: {m}", bad.len()), Some((m.p, m.q))),
    }
}

fn criterion2(cfg: &Config) -> Check {
    let r = cfg.coeff_radius / 2;
    for n in -r..=r {
        let f = match orbit_restriction(&cfg.coefficients, 0, 2 * n) {
            Ok(f) => f,
            Err(e) => return Check::fail(format!("restriction at (0,{}): {e}", 2 * n), Some((0, 2 * n))),
        };
        let expected = if n >= 0 { 1 } else { 2 };
        if f.domain != FGAbelianGroup::z() || f.codomain != FGAbelianGroup::z() || !f.is_multiplication_by(expected) {
            return Check::fail(format!("restriction at (0,{}) is {:?}, expected x{expected}", 2 * n, f.matrix.to_dense()), Some((0, 2 * n)));
        }
        let closed = mackey_at(MackeyPair::Pt, n);
        if !closed.res.is_multiplication_by(expected) {
            return Check::fail(format!("closed-form Mackey functor disagrees at n={n}"), Some((0, 2 * n)));
        }
        let g = basis_at(Theory::Etale, 0, 2 * n).expect("etale Z");
        let res = restrict_etale_to_orbit(&RingElement::monomial(g));
        if !mackey_at(MackeyPair::Etale, n).res.is_multiplication_by(1) || res.terms().count() != 1 || !res.terms().all(|(_, c)| c.is_one()) {
            return Check::fail(format!("etale restriction not an isomorphism at n={n}"), Some((0, 2 * n)));
        }
    }
    Check::pass(format!("iso for 0 <= n <= {r}, x2 for -{r} <= n < 0, etale iso throughout"))
}

fn criterion3(cfg: &Config) -> Check {
    let v = ring_soundness(Window::square(cfg.ring_radius), cfg.strategy);
    match v.first() {
        None => Check::pass(format!("all basis triples in |p|,|q| <= {}", cfg.ring_radius)),
        Some(x) => {
            let b = x.witness[0].bidegree();
            Check::fail(format!("{} violations, first: {x}", v.len()), Some((b.p, b.q)))
        }
    }
}

fn columns_match(t: &Tower, radius: i64, allow_extension: bool) -> Result<usize, Check> {
    let mut ext = 0;
    for c in check_against_reference(t, -radius..=radius) {
        match c.verdict {
            Some(Match::Exact) => {}
            Some(Match::Extension) if allow_extension => ext += 1,
            Some(v) => {
                return Err(Check::fail(
                    format!("{} column {} is {:?} against {}", t.space, c.degree, c.column.graded().map(|g| g.to_string()), c.expected) + &format!(" ({v:?})"),
                    Some((0, c.degree)),
                ))
            }
            None => return Err(Check::fail(format!("{} column {} not certified: {:?}", t.space, c.degree, c.column), Some((0, c.degree)))),
        }
    }
    Ok(ext)
}

fn criterion4(cfg: &Config, t: &Towers) -> Check {
    let kr = &t.kr;
    let model = crate::krtower::RingModel { theory: Theory::Pt };
    use crate::ssengine::Multiplicative;
    for (s, g) in kr.e2.cells() {
        let m = model.generator(*s);
        if m.map(|m| m.group()) != Some(g.clone()) {
            return Check::fail(format!("E2 cell at {s} is not the closed form"), Some((s.p, s.q)));
        }
    }
    match e2_crosscheck(kr, cfg.coeff_radius, cfg.strategy) {
        Ok(bad) if bad.is_empty() => {}
        Ok(bad) => return Check::fail("E2 differs from Bredon cohomology", Some((bad[0].p, bad[0].q))),
        Err(e) => return Check::fail(format!("E2 cross-check failed: {e}"), None),
    }
    if let Err(s) = kr.d3_matches_closed_form() {
        return Check::fail(format!("seeded d3 differs from the closed form at {s}"), Some((s.p, s.q)));
    }
    let ext = match columns_match(kr, cfg.degree_radius, true) {
        Ok(e) => e,
        Err(c) => return c,
    };
    let expect = [(0, 0), (-1, 1), (-2, 2), (-4, 2), (-8, 4)];
    for (n, w) in expect {
        match weight_filtration_report(kr, n) {
            Ok(p) if p.len() == 1 && p[0].weight == w => {}
            other => return Check::fail(format!("KO^{n} weights {other:?}, expected pure weight {w}"), Some((0, n))),
        }
    }
    Check::pass(format!(
        "E4 certified and matches KO for |n| <= {} ({ext} columns via extension); weights of KO^0, KO^-1, KO^-2, KO^-4, KO^-8 are 0, 1, 2, 2, 4",
        cfg.degree_radius
    ))
}

fn criterion5(cfg: &Config, t: &Towers) -> Check {
    let o = &t.orbit;
    if let Some((s, _)) = o.e2.cells().find(|(s, _)| s.p != 0) {
        return Check::fail(format!("E2 cell off p = 0 at {s}"), Some((s.p, s.q)));
    }
    if let Some((s, _)) = o.e3.differentials().next() {
        return Check::fail(format!("nonzero differential at {s}"), Some((s.p, s.q)));
    }
    if !o.e4.cells().eq(o.e2.cells()) {
        return Check::fail("E4 differs from E2", None);
    }
    match columns_match(o, cfg.degree_radius, false) {
        Ok(_) => Check::pass(format!("E2 = E_inf on p = 0, columns are KU for |n| <= {}", cfg.degree_radius)),
        Err(c) => c,
    }
}

fn criterion6(cfg: &Config, t: &Towers) -> Check {
    if !t.kret.tail_certified() {
        return Check::fail("periodic tail of the etale page not certified", None);
    }
    if let Err(c) = columns_match(&t.kret, cfg.degree_radius, false) {
        return c;
    }
    let cmp = match etale_comparison(&t.kr, &t.kret, -cfg.degree_radius..=cfg.degree_radius) {
        Ok(c) => c,
        Err(e) => return Check::fail(format!("comparison failed: {e}"), None),
    };
    if let Err(e) = &cmp.commutes {
        return Check::fail(format!("comparison does not commute with d3: {e}"), None);
    }
    let mut via_ext = Vec::new();
    for (n, v) in &cmp.verdicts {
        if *n <= 0 || n % 4 == 0 {
            match v {
                Comparison::Iso => {}
                Comparison::IsoViaExtension => via_ext.push(*n),
                other => return Check::fail(format!("comparison in degree {n} is {other:?}"), Some((0, *n))),
            }
        }
    }
    Check::pass(format!(
        "etale columns are KO for |n| <= {r}; comparison commutes with d3 and is iso for n <= 0 and n = 0 mod 4 (through an extension in degrees {via_ext:?})",
        r = cfg.degree_radius
    ))
}

fn criterion7(cfg: &Config, t: &Towers) -> Check {
    for tower in [&t.kr, &t.kret, &t.orbit] {
        if let Err(s) = tower.e3.images_are_torsion() {
            return Check::fail(format!("{} {:?}: d3 at {s} has infinite image", tower.space, tower.variant), Some((s.p, s.q)));
        }
    }
    for v in [Variant::Kr, Variant::KrEt] {
        let u = match build_with(Space::Pt, v, Mode::Unstable, default_window(), cfg.strategy) {
            Ok(u) => u,
            Err(e) => return Check::fail(format!("unstable pages: {e}"), None),
        };
        for k in [3, 5] {
            let psi = match adams_action(k, &u.e3) {
                Ok(p) => p,
                Err(e) => return Check::fail(format!("psi^{k}: {e}"), None),
            };
            if let Err(e) = psi.commutes(&u.e3, &u.e3) {
                let w = match e {
                    crate::ssengine::SsError::NonCommuting(s) => Some((s.p, s.q)),
                    _ => None,
                };
                return Check::fail(format!("psi^{k} on {v:?}: {e}"), w);
            }
        }
    }
    Check::pass("all d3 images are torsion; psi^3 and psi^5 commute with d3 on the unstable pages")
}

fn criterion8(cfg: &Config) -> Check {
    for q in 1..=6i64 {
        let n = (q - 1) as usize;
        for (w, dual) in [(-q, false), (q, true)] {
            let col = match weight_column(&Site::Pt, w, &cfg.coefficients) {
                Ok(c) => c,
                Err(e) => return Check::fail(format!("weight {w}: {e}"), Some((0, w))),
            };
            for s in -q - 2..=q + 2 {
                let expected = match (dual, s == q) {
                    (true, true) => FGAbelianGroup::cyclic(2),
                    (true, false) => rp_reduced_homology(n, q - 1 - s),
                    (false, _) => rp_reduced_cohomology(n, s + q - 1),
                };
                let found = col.get(&s).cloned().unwrap_or_default();
                if found != expected {
                    return Check::fail(format!("H^({s},{w}) = {found}, RP^{n} gives {expected}"), Some((s, w)));
                }
            }
        }
    }
    Check::pass("weight -q columns are RP^{q-1} cohomology and weight +q columns its homology (with Z/2 at (q,q)), 1 <= q <= 6")
}

fn criterion9(cfg: &Config, t: &Towers) -> Check {
    let keep = |s: Spot| Mode::Unstable.admits(s);
    let mut edge = Vec::new();
    for (stable, space, v) in [(&t.kr, Space::Pt, Variant::Kr), (&t.orbit, Space::Orbit, Variant::Kr), (&t.kret, Space::Pt, Variant::KrEt)] {
        let u = match build_with(space, v, Mode::Unstable, default_window(), cfg.strategy) {
            Ok(u) => u,
            Err(e) => return Check::fail(format!("unstable pages: {e}"), None),
        };
        for (r, a, b) in [(2, &stable.e2, &u.e2), (3, &stable.e3, &u.e3), (4, &stable.e4, &u.e4)] {
            let restricted = a.restrict(keep);
            let mut spots: Vec<Spot> = restricted.cells().map(|(s, _)| *s).chain(b.cells().map(|(s, _)| *s)).collect();
            spots.sort();
            spots.dedup();
            for s in spots {
                if restricted.group(s) == b.group(s) {
                    continue;
                }
                // the truncation discards differentials leaving the quadrant through the edge p + q = 0
                if r == 4 && s.total() == 0 {
                    edge.push((v, s));
                    continue;
                }
                return Check::fail(format!("{space} {v:?} E{r} differs at {s}"), Some((s.p, s.q)));
            }
            if r == 3 && restricted.differentials().count() != b.differentials().count() {
                return Check::fail(format!("{space} {v:?} E3 differentials differ"), None);
            }
        }
    }
    if edge.iter().any(|(v, _)| *v == Variant::Kr) {
        let (_, s) = edge[0];
        return Check::fail(format!("KR E4 differs on the edge at {s}"), Some((s.p, s.q)));
    }
    let note = if edge.is_empty() {
        String::new()
    } else {
        let spots: Vec<String> = edge.iter().map(|(_, s)| s.to_string()).collect();
        format!("; KR_ET E4 keeps edge classes {} whose d3 leaves the quadrant", spots.join(" "))
    };
    Check::pass(format!("KR pages E2..E4 of pt and orbit equal the restricted stable pages; KR_ET agrees on E2, E3 and off the edge{note}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        assert_eq!("coeffs".parse::<Suite>().unwrap(), Suite::Coeffs);
        assert!("bogus".parse::<Suite>().is_err());
        assert_eq!(Suite::All.criteria().len(), 9);
    }

    #[test]
    fn flipped_transfer_fails_coeffs_with_witness() {
        let cfg = Config {
            coeff_radius: 2,
            ..Config::default()
        }
        .with_flipped_transfer();
        let out = run(Suite::Coeffs, &cfg);
        assert!(!out[0].passed);
        assert_eq!(out[0].suite, Suite::Coeffs);
        assert!(out[0].witness.is_some());
    }

    #[test]
    fn ring_suite_small_window() {
        let cfg = Config {
            ring_radius: 4,
            ..Config::default()
        };
        assert!(run(Suite::Ring, &cfg).iter().all(|o| o.passed));
    }
}
