//! Closed-form models of the coefficient rings of the point, the free orbit
//! and the étale (Borel) theory, with their structure maps.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bredon::{weight_column, BredonError, Site};
use crate::exactalg::{FGAbelianGroup, GroupHom};
use crate::exec::Strategy;
use crate::mackey::MackeyZ2;

/// Bidegree `(p, q)`: `p` the topological dimension, `q` the weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bidegree {
    pub p: i64,
    pub q: i64,
}

impl Bidegree {
    pub fn new(p: i64, q: i64) -> Self {
        Bidegree { p, q }
    }
}

impl std::ops::Add for Bidegree {
    type Output = Bidegree;
    fn add(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.p + o.p, self.q + o.q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theory {
    /// `H^{*,*}(pt; Z)`
    Pt,
    /// `H^{*,*}(Z/2; Z) = Z[u, u^-1]`
    Orbit,
    /// `Z[x, x^-1, y]/(2y)`
    Etale,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("elements of different theories cannot be multiplied")]
    MixedTheories,
    #[error("operation needs an element of the point theory")]
    NotPoint,
    #[error("Mackey structure is only known in degrees (0, 2n), not ({p},{q})")]
    UnsupportedDegree { p: i64, q: i64 },
}

/// The generator of a nonzero bidegree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisMonomial {
    /// `x^a y^b` at `(b, 2a + b)`
    PosMono { a: i64, b: i64 },
    /// `α_a = 2/x^a` at `(0, -2a)`, `a ≥ 1`
    NegFree { a: i64 },
    /// `θ/(x^a y^b)` at `(-b, -3 - 2a - b)`
    NegTor { a: i64, b: i64 },
    /// étale `x^a y^b`, any integer `a`
    EtaleMono { a: i64, b: i64 },
    /// `u^n` at `(0, n)`
    OrbitMono { n: i64 },
}

use BasisMonomial::*;

impl BasisMonomial {
    pub fn theory(&self) -> Theory {
        match self {
            PosMono { .. } | NegFree { .. } | NegTor { .. } => Theory::Pt,
            EtaleMono { .. } => Theory::Etale,
            OrbitMono { .. } => Theory::Orbit,
        }
    }

    pub fn bidegree(&self) -> Bidegree {
        match *self {
            PosMono { a, b } | EtaleMono { a, b } => Bidegree::new(b, 2 * a + b),
            NegFree { a } => Bidegree::new(0, -2 * a),
            NegTor { a, b } => Bidegree::new(-b, -3 - 2 * a - b),
            OrbitMono { n } => Bidegree::new(0, n),
        }
    }

    /// Order of the cyclic group it generates; `None` for `Z`.
    pub fn order(&self) -> Option<u64> {
        match *self {
            PosMono { b, .. } | EtaleMono { b, .. } if b > 0 => Some(2),
            NegTor { .. } => Some(2),
            _ => None,
        }
    }

    pub fn is_torsion(&self) -> bool {
        self.order().is_some()
    }

    pub fn group(&self) -> FGAbelianGroup {
        let g = match self.order() {
            Some(n) => FGAbelianGroup::cyclic(n),
            None => FGAbelianGroup::z(),
        };
        g.with_names([self.to_string()])
    }
}

fn power(base: &str, e: i64) -> String {
    match e {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{base}^{e}"),
    }
}

impl fmt::Display for BasisMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PosMono { a, b } | EtaleMono { a, b } => {
                let s = format!("{}{}", power("x", a), power("y", b));
                f.write_str(if s.is_empty() { "1" } else { &s })
            }
            NegFree { a } => write!(f, "α_{a}"),
            NegTor { a, b } => {
                let d = format!("{}{}", power("x", a), power("y", b));
                match (a > 0) as u8 + (b > 0) as u8 {
                    0 => f.write_str("θ"),
                    1 if !d.contains('^') => write!(f, "θ/{d}"),
                    _ => write!(f, "θ/({d})"),
                }
            }
            OrbitMono { n } => match n {
                0 => f.write_str("1"),
                1 => f.write_str("u"),
                _ => write!(f, "u^{n}"),
            },
        }
    }
}

/// The basis monomial in bidegree `(p, q)`, if the group there is nonzero.
pub fn basis_at(theory: Theory, p: i64, q: i64) -> Option<BasisMonomial> {
    match theory {
        Theory::Pt => {
            if p == 0 && q.rem_euclid(2) == 0 {
                Some(if q >= 0 { PosMono { a: q / 2, b: 0 } } else { NegFree { a: -q / 2 } })
            } else if p > 0 && q >= p && (q - p) % 2 == 0 {
                Some(PosMono { a: (q - p) / 2, b: p })
            } else if p <= 0 && (p - q).rem_euclid(2) == 1 && q + 1 < p {
                Some(NegTor { a: (-3 - q + p) / 2, b: -p })
            } else {
                None
            }
        }
        Theory::Etale => (p >= 0 && (q - p).rem_euclid(2) == 0).then(|| EtaleMono { a: (q - p).div_euclid(2), b: p }),
        Theory::Orbit => (p == 0).then_some(OrbitMono { n: q }),
    }
}

/// `H^{p,q}` of the given theory with its named generator.
pub fn group_at(theory: Theory, p: i64, q: i64) -> FGAbelianGroup {
    basis_at(theory, p, q).map_or_else(FGAbelianGroup::zero, |m| m.group())
}

/// Sparse combination of basis monomials; torsion coefficients live in `{0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElement {
    pub theory: Theory,
    terms: BTreeMap<BasisMonomial, BigInt>,
}

impl RingElement {
    pub fn zero(theory: Theory) -> Self {
        RingElement {
            theory,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(theory: Theory) -> Self {
        let m = match theory {
            Theory::Pt => PosMono { a: 0, b: 0 },
            Theory::Etale => EtaleMono { a: 0, b: 0 },
            Theory::Orbit => OrbitMono { n: 0 },
        };
        Self::monomial(m)
    }

    pub fn monomial(m: BasisMonomial) -> Self {
        Self::scaled(m, BigInt::one())
    }

    pub fn scaled(m: BasisMonomial, c: BigInt) -> Self {
        let mut e = Self::zero(m.theory());
        e.add_term(m, c);
        e
    }

    pub fn x() -> Self {
        Self::monomial(PosMono { a: 1, b: 0 })
    }

    pub fn y() -> Self {
        Self::monomial(PosMono { a: 0, b: 1 })
    }

    pub fn alpha(a: i64) -> Self {
        Self::monomial(NegFree { a })
    }

    pub fn theta(a: i64, b: i64) -> Self {
        Self::monomial(NegTor { a, b })
    }

    fn add_term(&mut self, m: BasisMonomial, c: BigInt) {
        let e = self.terms.entry(m).or_default();
        *e += c;
        if let Some(n) = m.order() {
            *e = e.mod_floor(&BigInt::from(n));
        }
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisMonomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `m` (zero when absent).
    pub fn coefficient(&self, m: &BasisMonomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement, RingError> {
        if self.theory != other.theory {
            return Err(RingError::MixedTheories);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> RingElement {
        let mut out = Self::zero(self.theory);
        for (m, v) in &self.terms {
            out.add_term(*m, v * c);
        }
        out
    }

    pub fn multiply(&self, other: &RingElement) -> Result<RingElement, RingError> {
        if self.theory != other.theory {
            return Err(RingError::MixedTheories);
        }
        let mut out = Self::zero(self.theory);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((m, c)) = multiply_basis(m1, m2) {
                    out.add_term(m, c * c1 * c2);
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| if c.is_one() { m.to_string() } else { format!("{c}·{m}") })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Product of two basis monomials of one theory as `coefficient · monomial`,
/// `None` when it vanishes.
pub fn multiply_basis(m1: &BasisMonomial, m2: &BasisMonomial) -> Option<(BasisMonomial, BigInt)> {
    let one = BigInt::one();
    let two = BigInt::from(2);
    let reduce = |m: BasisMonomial, c: BigInt| -> Option<(BasisMonomial, BigInt)> {
        let c = match m.order() {
            Some(n) => c.mod_floor(&BigInt::from(n)),
            None => c,
        };
        (!c.is_zero()).then_some((m, c))
    };
    match (*m1, *m2) {
        (PosMono { a, b }, PosMono { a: c, b: d }) => reduce(PosMono { a: a + c, b: b + d }, one),
        (PosMono { a, b }, NegFree { a: c }) | (NegFree { a: c }, PosMono { a, b }) => {
            if b > 0 {
                None
            } else if c > a {
                reduce(NegFree { a: c - a }, one)
            } else {
                reduce(PosMono { a: a - c, b: 0 }, two)
            }
        }
        (PosMono { a, b }, NegTor { a: c, b: d }) | (NegTor { a: c, b: d }, PosMono { a, b }) => {
            (a <= c && b <= d).then_some((NegTor { a: c - a, b: d - b }, one))
        }
        // derived: x-multiplication is injective on the α classes
        (NegFree { a }, NegFree { a: c }) => reduce(NegFree { a: a + c }, two),
        // derived: the products land in groups where they must vanish
        (NegFree { .. }, NegTor { .. }) | (NegTor { .. }, NegFree { .. }) | (NegTor { .. }, NegTor { .. }) => None,
        (EtaleMono { a, b }, EtaleMono { a: c, b: d }) => reduce(EtaleMono { a: a + c, b: b + d }, one),
        (OrbitMono { n }, OrbitMono { n: m }) => reduce(OrbitMono { n: n + m }, one),
        _ => None,
    }
}

/// Ring map to the free orbit: `x ↦ u²`, `y ↦ 0`, `α_a ↦ 2u^{-2a}`, `θ ↦ 0`.
pub fn restrict_to_orbit(e: &RingElement) -> Result<RingElement, RingError> {
    if e.theory != Theory::Pt {
        return Err(RingError::NotPoint);
    }
    let mut out = RingElement::zero(Theory::Orbit);
    for (m, c) in e.terms() {
        match *m {
            PosMono { a, b: 0 } => out.add_term(OrbitMono { n: 2 * a }, c.clone()),
            NegFree { a } => out.add_term(OrbitMono { n: -2 * a }, c * 2),
            _ => {}
        }
    }
    Ok(out)
}

/// Ring map to the étale ring: identity on `x^a y^b`, `α_a ↦ 2x^{-a}`, `θ ↦ 0`.
pub fn compare_to_etale(e: &RingElement) -> Result<RingElement, RingError> {
    if e.theory != Theory::Pt {
        return Err(RingError::NotPoint);
    }
    let mut out = RingElement::zero(Theory::Etale);
    for (m, c) in e.terms() {
        match *m {
            PosMono { a, b } => out.add_term(EtaleMono { a, b }, c.clone()),
            NegFree { a } => out.add_term(EtaleMono { a: -a, b: 0 }, c * 2),
            _ => {}
        }
    }
    Ok(out)
}

/// Étale analog of the restriction: `x^a y^b ↦ u^{2a}` when `b = 0`.
pub fn restrict_etale_to_orbit(e: &RingElement) -> RingElement {
    let mut out = RingElement::zero(Theory::Orbit);
    for (m, c) in e.terms() {
        if let EtaleMono { a, b: 0 } = *m {
            out.add_term(OrbitMono { n: 2 * a }, c.clone());
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MackeyPair {
    /// point and free orbit
    Pt,
    /// étale theory and free orbit
    Etale,
}

/// Mackey functor in degree `(0, 2n)`, read off the restriction of the
/// generator. The transfer follows from `res ∘ tr = 2` on `Z`.
pub fn mackey_at(pair: MackeyPair, n: i64) -> MackeyZ2 {
    let res = match pair {
        MackeyPair::Pt => {
            let g = basis_at(Theory::Pt, 0, 2 * n).expect("Z in degree (0, 2n)");
            restrict_to_orbit(&RingElement::monomial(g)).expect("point theory")
        }
        MackeyPair::Etale => {
            let g = basis_at(Theory::Etale, 0, 2 * n).expect("Z in degree (0, 2n)");
            restrict_etale_to_orbit(&RingElement::monomial(g))
        }
    };
    let r = res.coefficient(&OrbitMono { n: 2 * n });
    let z = FGAbelianGroup::z();
    let tr = BigInt::from(2) / &r;
    MackeyZ2 {
        m_free: z.clone(),
        m_fixed: z.clone(),
        t_star: GroupHom::identity(&z),
        res: GroupHom::scalar(&z, &r),
        tr: GroupHom::scalar(&z, &tr),
    }
}

/// As [`mackey_at`] for an explicit bidegree; only `(0, 2n)` is supported.
pub fn mackey_at_degree(pair: MackeyPair, p: i64, q: i64) -> Result<MackeyZ2, RingError> {
    if p != 0 || q.rem_euclid(2) != 0 {
        return Err(RingError::UnsupportedDegree { p, q });
    }
    Ok(mackey_at(pair, q / 2))
}

/// Rectangle of bidegrees, bounds inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub pmin: i64,
    pub pmax: i64,
    pub qmin: i64,
    pub qmax: i64,
}

impl Window {
    pub fn new(pmin: i64, pmax: i64, qmin: i64, qmax: i64) -> Self {
        Window { pmin, pmax, qmin, qmax }
    }

    pub fn square(r: i64) -> Self {
        Self::new(-r, r, -r, r)
    }

    pub fn empty() -> Self {
        Self::new(0, -1, 0, -1)
    }

    pub fn is_empty(&self) -> bool {
        self.pmin > self.pmax || self.qmin > self.qmax
    }

    pub fn contains(&self, p: i64, q: i64) -> bool {
        self.pmin <= p && p <= self.pmax && self.qmin <= q && q <= self.qmax
    }

    pub fn spots(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (self.pmin..=self.pmax).flat_map(move |p| (self.qmin..=self.qmax).map(move |q| (p, q)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub site: Theory,
    pub p: i64,
    pub q: i64,
    pub expected: FGAbelianGroup,
    pub found: Result<FGAbelianGroup, BredonError>,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let found = match &self.found {
            Ok(g) => g.to_string(),
            Err(e) => format!("error: {e}"),
        };
        write!(f, "{:?} ({},{}): closed form {} but Bredon {}", self.site, self.p, self.q, self.expected, found)
    }
}

/// Compares the closed forms of the point and orbit rings with the Bredon
/// computation for coefficients `m` on every spot of the window.
pub fn verify_against_bredon_with(window: Window, m: &MackeyZ2, strategy: Strategy) -> Vec<Mismatch> {
    if window.is_empty() {
        return Vec::new();
    }
    let jobs: Vec<(Theory, i64)> = [Theory::Pt, Theory::Orbit]
        .into_iter()
        .flat_map(|t| (window.qmin..=window.qmax).map(move |q| (t, q)))
        .collect();
    let columns = strategy.map(jobs, |(t, q)| {
        let site = if t == Theory::Pt { Site::Pt } else { Site::Orbit };
        (t, q, weight_column(&site, q, m))
    });
    let mut out = Vec::new();
    for (t, q, col) in columns {
        for p in window.pmin..=window.pmax {
            let expected = group_at(t, p, q);
            let found = col.as_ref().map(|c| c.get(&p).cloned().unwrap_or_default()).map_err(Clone::clone);
            if found.as_ref() != Ok(&expected) {
                out.push(Mismatch {
                    site: t,
                    p,
                    q,
                    expected,
                    found,
                });
            }
        }
    }
    out.sort_by_key(|m| (m.site, m.q, m.p));
    out
}

pub fn verify_against_bredon(window: Window) -> Vec<Mismatch> {
    verify_against_bredon_with(window, &MackeyZ2::constant(&FGAbelianGroup::z()), Strategy::default())
}

/// All basis monomials of a theory whose bidegree lies in the window.
pub fn basis_in_window(theory: Theory, window: Window) -> Vec<BasisMonomial> {
    window.spots().filter_map(|(p, q)| basis_at(theory, p, q)).collect()
}

/// Homotopy groups `π_k`, `0 ≤ k ≤ 2n`, of the fixed set of the
/// Eilenberg-MacLane space of weight `n`, as `H^{2n-k, n}`.
pub fn fixed_set_homotopy(theory: Theory, n: i64) -> Vec<FGAbelianGroup> {
    (0..=2 * n).map(|k| group_at(theory, 2 * n - k, n)).collect()
}

pub fn is_unit_multiple(e: &RingElement, m: &BasisMonomial) -> bool {
    e.terms().count() == 1 && e.coefficient(m).abs().is_one()
}

/// A failed ring identity with the basis monomials involved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingViolation {
    pub law: &'static str,
    pub witness: Vec<BasisMonomial>,
}

impl fmt::Display for RingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.witness.iter().map(|m| format!("{m} at {:?}", m.bidegree())).collect();
        write!(f, "{} fails on [{}]", self.law, w.join(", "))
    }
}

fn mul(a: &BasisMonomial, b: &BasisMonomial) -> RingElement {
    RingElement::monomial(*a).multiply(&RingElement::monomial(*b)).expect("same theory")
}

fn times(e: &RingElement, m: &BasisMonomial) -> RingElement {
    e.multiply(&RingElement::monomial(*m)).expect("same theory")
}

/// Associativity, commutativity, the defining relations, bijectivity of
/// x-multiplication on the negative classes and the ring-map property of
/// both structure maps, over every basis monomial in the window.
pub fn ring_soundness(window: Window, strategy: Strategy) -> Vec<RingViolation> {
    let mut out = Vec::new();
    for theory in [Theory::Pt, Theory::Etale, Theory::Orbit] {
        let basis = basis_in_window(theory, window);
        let found = strategy.map(basis.clone(), |a| {
            let mut bad = Vec::new();
            for b in &basis {
                let ab = mul(&a, b);
                if ab != mul(b, &a) {
                    bad.push(RingViolation { law: "commutativity", witness: vec![a, *b] });
                }
                for c in &basis {
                    if times(&ab, c) != RingElement::monomial(a).multiply(&mul(b, c)).expect("same theory") {
                        bad.push(RingViolation { law: "associativity", witness: vec![a, *b, *c] });
                    }
                }
                if theory == Theory::Pt {
                    let mapped = restrict_to_orbit(&RingElement::monomial(a))
                        .and_then(|x| x.multiply(&restrict_to_orbit(&RingElement::monomial(*b))?));
                    if restrict_to_orbit(&ab).ok() != mapped.ok() {
                        bad.push(RingViolation { law: "restriction is multiplicative", witness: vec![a, *b] });
                    }
                    let mapped = compare_to_etale(&RingElement::monomial(a))
                        .and_then(|x| x.multiply(&compare_to_etale(&RingElement::monomial(*b))?));
                    if compare_to_etale(&ab).ok() != mapped.ok() {
                        bad.push(RingViolation { law: "étale comparison is multiplicative", witness: vec![a, *b] });
                    }
                }
            }
            bad
        });
        out.extend(found.into_iter().flatten());
    }
    let x = PosMono { a: 1, b: 0 };
    let y = PosMono { a: 0, b: 1 };
    let one = RingElement::one(Theory::Pt);
    if !RingElement::monomial(y).scale(&BigInt::from(2)).is_zero() {
        out.push(RingViolation { law: "2y = 0", witness: vec![y] });
    }
    if mul(&x, &NegFree { a: 1 }) != one.scale(&BigInt::from(2)) {
        out.push(RingViolation { law: "xα = 2", witness: vec![x, NegFree { a: 1 }] });
    }
    if restrict_to_orbit(&one).ok() != Some(RingElement::one(Theory::Orbit)) || compare_to_etale(&one).ok() != Some(RingElement::one(Theory::Etale)) {
        out.push(RingViolation { law: "unital structure maps", witness: vec![PosMono { a: 0, b: 0 }] });
    }
    for m in basis_in_window(Theory::Pt, window) {
        let (src, tgt) = match m {
            NegTor { a, b } if a >= 1 => (m, NegTor { a: a - 1, b }),
            NegFree { a } if a >= 2 => (m, NegFree { a: a - 1 }),
            _ => continue,
        };
        if !is_unit_multiple(&mul(&x, &src), &tgt) {
            out.push(RingViolation { law: "x-multiplication is bijective", witness: vec![x, src] });
        }
    }
    out
}
