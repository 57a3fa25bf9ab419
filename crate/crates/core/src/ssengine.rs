//! Windowed bigraded spectral sequences: pages, page turning, Leibniz
//! closure of seed differentials, Adams operations and abutment readout.
//!
//! Spots use Serre indexing, `d_r: (p, q) → (p + r, q - r + 1)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::coeffring::Window;
use crate::exactalg::{AlgebraError, FGAbelianGroup, GroupHom, IntMatrix, Subquotient};
use crate::exec::Strategy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Spot {
    pub p: i64,
    pub q: i64,
}

impl Spot {
    pub fn new(p: i64, q: i64) -> Self {
        Spot { p, q }
    }

    /// Total degree `p + q`.
    pub fn total(&self) -> i64 {
        self.p + self.q
    }

    pub fn shift(&self, dp: i64, dq: i64) -> Spot {
        Spot::new(self.p + dp, self.q + dq)
    }

    /// Target of `d_r`.
    pub fn d_target(&self, r: u32) -> Spot {
        let r = r as i64;
        self.shift(r, 1 - r)
    }

    /// Source of the `d_r` landing here.
    pub fn d_source(&self, r: u32) -> Spot {
        let r = r as i64;
        self.shift(-r, r - 1)
    }
}

impl fmt::Display for Spot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

fn in_window(w: &Window, s: Spot) -> bool {
    w.contains(s.p, s.q)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SsError {
    #[error("spot {0} lies outside the page window")]
    OutsideWindow(Spot),
    #[error("differential from {from} leaves the window")]
    Leakage { from: Spot },
    #[error("differential at {0} does not match the cells")]
    Shape(Spot),
    #[error("d∘d is nonzero at {0}")]
    NotComplex(Spot),
    #[error("even-page differential at {0} is nonzero although all weights are even")]
    Parity(Spot),
    #[error("cell at {0} is not cyclic")]
    NonCyclic(Spot),
    #[error("inconsistent Leibniz propagation at {spot}: {witness}")]
    Inconsistent { spot: Spot, witness: String },
    #[error("cell at {0} has odd q")]
    OddRow(Spot),
    #[error("cell at {0} has negative weight, where the Adams action is not integral")]
    NegativeWeight(Spot),
    #[error("spot {0} is indeterminate")]
    Indeterminate(Spot),
    #[error("map does not commute with differentials at {0}")]
    NonCommuting(Spot),
    #[error("map is not defined on page cells at {0}")]
    NotAChainMap(Spot),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// One page `E_r` restricted to a window.
#[derive(Clone, Debug)]
pub struct Page {
    r: u32,
    window: Window,
    cells: BTreeMap<Spot, FGAbelianGroup>,
    differentials: BTreeMap<Spot, GroupHom>,
    indeterminate: BTreeSet<Spot>,
    homology: BTreeMap<Spot, Subquotient>,
}

impl Page {
    pub fn new(r: u32, window: Window, cells: impl IntoIterator<Item = (Spot, FGAbelianGroup)>) -> Result<Self, SsError> {
        let mut map = BTreeMap::new();
        for (s, g) in cells {
            if !in_window(&window, s) {
                return Err(SsError::OutsideWindow(s));
            }
            if !g.is_zero() {
                map.insert(s, g);
            }
        }
        Ok(Page {
            r,
            window,
            cells: map,
            differentials: BTreeMap::new(),
            indeterminate: BTreeSet::new(),
            homology: BTreeMap::new(),
        })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn group(&self, s: Spot) -> FGAbelianGroup {
        self.cells.get(&s).cloned().unwrap_or_default()
    }

    /// Nonzero cells.
    pub fn cells(&self) -> impl Iterator<Item = (&Spot, &FGAbelianGroup)> {
        self.cells.iter()
    }

    pub fn spots(&self) -> impl Iterator<Item = Spot> + '_ {
        self.window.spots().map(|(p, q)| Spot::new(p, q))
    }

    pub fn is_indeterminate(&self, s: Spot) -> bool {
        self.indeterminate.contains(&s)
    }

    pub fn indeterminate(&self) -> &BTreeSet<Spot> {
        &self.indeterminate
    }

    pub fn mark_indeterminate(&mut self, s: Spot) {
        self.indeterminate.insert(s);
    }

    pub fn differentials(&self) -> impl Iterator<Item = (&Spot, &GroupHom)> {
        self.differentials.iter()
    }

    /// `d_r` leaving `s`, the zero map when none is installed.
    pub fn differential(&self, s: Spot) -> GroupHom {
        match self.differentials.get(&s) {
            Some(d) => d.clone(),
            None => GroupHom::zero(&self.group(s), &self.group(s.d_target(self.r))),
        }
    }

    /// This page's cell at `s` as a subquotient of the previous page's cell.
    pub fn homology_data(&self, s: Spot) -> Option<&Subquotient> {
        self.homology.get(&s)
    }

    pub fn install(&mut self, s: Spot, d: GroupHom) -> Result<(), SsError> {
        let t = s.d_target(self.r);
        if d.domain != self.group(s) || d.codomain != self.group(t) {
            return Err(SsError::Shape(s));
        }
        if d.is_zero() {
            self.differentials.remove(&s);
            return Ok(());
        }
        if !in_window(&self.window, s) || !in_window(&self.window, t) {
            return Err(SsError::Leakage { from: s });
        }
        self.differentials.insert(s, d);
        Ok(())
    }

    /// Checks `d_r ∘ d_r = 0` wherever both maps live in the window.
    pub fn check_d_squared(&self) -> Result<(), SsError> {
        for (s, d) in &self.differentials {
            let t = s.d_target(self.r);
            if let Some(d2) = self.differentials.get(&t) {
                if !d2.compose(d)?.is_zero() {
                    return Err(SsError::NotComplex(*s));
                }
            }
        }
        Ok(())
    }

    /// Spots on the line `p + q = n` inside the window, by increasing `p`.
    pub fn line(&self, n: i64) -> Vec<Spot> {
        (self.window.pmin..=self.window.pmax)
            .map(|p| Spot::new(p, n - p))
            .filter(|s| in_window(&self.window, *s))
            .collect()
    }

    /// Cells satisfying `keep`, with their differentials; the window is kept.
    pub fn restrict(&self, keep: impl Fn(Spot) -> bool) -> Page {
        let mut out = self.clone();
        out.cells.retain(|s, _| keep(*s));
        out.differentials.retain(|s, _| keep(*s) && keep(s.d_target(self.r)));
        out.homology.retain(|s, _| keep(*s));
        out
    }

    /// Every installed differential has finite image.
    pub fn images_are_torsion(&self) -> Result<(), Spot> {
        for (s, d) in &self.differentials {
            if !d.image().group.is_finite() {
                return Err(*s);
            }
        }
        Ok(())
    }

    fn all_rows_even(&self) -> bool {
        self.cells.keys().all(|s| s.q.rem_euclid(2) == 0)
    }

    /// Cell-by-cell comparison of groups and indeterminacy.
    pub fn same_cells(&self, other: &Page) -> bool {
        self.cells == other.cells && self.indeterminate == other.indeterminate
    }
}

/// Display label of `Σ v_i g_i`.
pub fn combination_label(v: &[BigInt], names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let name = names.get(i).cloned().unwrap_or_else(|| format!("g{i}"));
        parts.push(if c.is_one() {
            name
        } else if c == &-BigInt::one() {
            format!("-{name}")
        } else {
            format!("{c}·{name}")
        });
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// `E_{r+1}` from `E_r`: each cell becomes `ker d_out / im d_in`. Spots whose
/// incoming or outgoing differential crosses the window boundary, or touches
/// an indeterminate spot, are marked indeterminate.
pub fn turn_page(page: &Page) -> Result<Page, SsError> {
    turn_page_with(page, Strategy::default())
}

pub fn turn_page_with(page: &Page, strategy: Strategy) -> Result<Page, SsError> {
    let r = page.r;
    let parity_zero = r.is_multiple_of(2) && page.all_rows_even();
    if parity_zero {
        if let Some(s) = page.differentials.keys().next() {
            return Err(SsError::Parity(*s));
        }
    }
    for s in page.differentials.keys() {
        if !in_window(&page.window, s.d_target(r)) {
            return Err(SsError::Leakage { from: *s });
        }
    }
    let spots: Vec<Spot> = page.spots().collect();
    let results = strategy.map(spots, |s| {
        let src = s.d_source(r);
        let tgt = s.d_target(r);
        let crosses = !parity_zero && (!in_window(&page.window, src) || !in_window(&page.window, tgt));
        let touches = page.is_indeterminate(s) || page.is_indeterminate(src) || page.is_indeterminate(tgt);
        let g = page.group(s);
        // a zero cell stays zero on every later page
        let crosses = crosses && !g.is_zero();
        let touches = touches && !g.is_zero();
        let hom = if g.is_zero() {
            None
        } else {
            Some(cell_homology(&g, &page.differential(s), &page.differential(src)))
        };
        (s, crosses || touches, hom)
    });
    let mut out = Page::new(r + 1, page.window, Vec::new())?;
    for (s, indet, hom) in results {
        if indet {
            out.indeterminate.insert(s);
        }
        if let Some(h) = hom {
            let h = h?;
            if !h.group.is_zero() {
                out.cells.insert(s, h.group.clone());
            }
            out.homology.insert(s, h);
        }
    }
    Ok(out)
}

fn cell_homology(g: &FGAbelianGroup, d_out: &GroupHom, d_in: &GroupHom) -> Result<Subquotient, SsError> {
    let n = g.ngens();
    let cycles = if d_out.is_zero() { IntMatrix::identity(n) } else { d_out.kernel().lattice().clone() };
    let killed = d_in.matrix.hstack(&g.relations());
    let mut sq = Subquotient::new(cycles, &killed)?;
    sq.normalize_signs();
    let names: Vec<String> = (0..sq.group.ngens()).map(|i| combination_label(&sq.lift(i), g.names())).collect();
    sq.group = sq.group.clone().with_names(names);
    Ok(sq)
}

/// A page whose cells are cyclic and carry a multiplicative generator.
pub trait Multiplicative {
    type Gen: Copy + Ord + fmt::Debug + fmt::Display + Send + Sync;

    fn generator(&self, s: Spot) -> Option<Self::Gen>;

    fn spot(&self, g: &Self::Gen) -> Spot;

    /// Order of the generator, `None` when it has infinite order.
    fn order(&self, g: &Self::Gen) -> Option<u64>;

    /// `a · b` as a multiple of the generator at the sum of the spots.
    fn product(&self, a: &Self::Gen, b: &Self::Gen) -> BigInt;

    /// Spot of the unit, whose differential is zero.
    fn unit(&self) -> Option<Spot> {
        None
    }
}

/// Differentials produced by [`leibniz_close`], as coefficients of the target
/// generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leibniz {
    pub r: u32,
    pub values: BTreeMap<Spot, BigInt>,
    pub unreachable: Vec<Spot>,
}

fn modulus(order: Option<u64>) -> Option<BigInt> {
    order.map(BigInt::from)
}

fn reduce_mod(x: BigInt, m: &Option<BigInt>) -> BigInt {
    match m {
        Some(m) => x.mod_floor(m),
        None => x,
    }
}

/// Unique `x` with `c·x ≡ rhs`, for `x` taken mod `src` and the equation mod
/// `tgt`. `None` unless `x ↦ c·x` is injective.
fn solve_linear(c: &BigInt, rhs: &BigInt, src: &Option<BigInt>, tgt: &Option<BigInt>) -> Option<BigInt> {
    match (src, tgt) {
        (None, None) => {
            if c.is_zero() || !rhs.is_multiple_of(c) {
                None
            } else {
                Some(rhs / c)
            }
        }
        (Some(n), Some(m)) => {
            // x ↦ c x from Z/n to Z/m is injective iff n | m/gcd(c, m)
            let g = c.gcd(m);
            if !(m / &g).is_multiple_of(n) {
                return None;
            }
            (0..n.to_u64_digits().1.first().copied().unwrap_or(0))
                .map(BigInt::from)
                .find(|x| (c * x - rhs).is_multiple_of(m))
        }
        _ => None,
    }
}

/// `a · b = k · c` as `(a, b, c, k)`.
type Product<G> = (G, G, G, BigInt);

/// Extends seed values of `d_r` over every generator in the window using
/// `d(ab) = d(a) b + (-1)^{|a|} a d(b)`, read forwards or solved for a factor.
/// Differentials into zero groups are zero. Generators left undetermined are
/// listed in `unreachable`.
pub fn leibniz_close<M: Multiplicative + Sync>(
    model: &M,
    window: Window,
    r: u32,
    seeds: &[(M::Gen, BigInt)],
) -> Result<Leibniz, SsError> {
    let gens: Vec<M::Gen> = window.spots().filter_map(|(p, q)| model.generator(Spot::new(p, q))).collect();
    let target = |g: &M::Gen| model.generator(model.spot(g).d_target(r));
    let mut known: BTreeMap<Spot, BigInt> = BTreeMap::new();
    let set = |known: &mut BTreeMap<Spot, BigInt>, g: &M::Gen, v: BigInt, why: &dyn Fn() -> String| -> Result<bool, SsError> {
        let s = model.spot(g);
        let m = target(g).map(|t| modulus(model.order(&t)));
        let v = match &m {
            Some(m) => reduce_mod(v, m),
            None => BigInt::zero(),
        };
        match known.get(&s) {
            Some(old) if *old == v => Ok(false),
            Some(old) => Err(SsError::Inconsistent {
                spot: s,
                witness: format!("d({g}) = {old} and {v} via {}", why()),
            }),
            None => {
                known.insert(s, v);
                Ok(true)
            }
        }
    };
    for g in &gens {
        if target(g).is_none() {
            set(&mut known, g, BigInt::zero(), &|| "zero target".into())?;
        }
        if Some(model.spot(g)) == model.unit() {
            set(&mut known, g, BigInt::zero(), &|| "unit".into())?;
        }
    }
    for (g, v) in seeds {
        set(&mut known, g, v.clone(), &|| "seed".into())?;
    }
    let pairs: Vec<Product<M::Gen>> = gens
        .iter()
        .flat_map(|a| gens.iter().map(move |b| (*a, *b)))
        .filter_map(|(a, b)| {
            let s = model.spot(&a).shift(model.spot(&b).p, model.spot(&b).q);
            if !in_window(&window, s) {
                return None;
            }
            let k = model.product(&a, &b);
            if k.is_zero() {
                return None;
            }
            Some((a, b, model.generator(s)?, k))
        })
        .collect();
    loop {
        let mut progress = false;
        for (a, b, g, k) in &pairs {
            let Some(t) = target(g) else { continue };
            let m = modulus(model.order(&t));
            let sign = if model.spot(a).total().rem_euclid(2) == 0 { BigInt::one() } else { -BigInt::one() };
            let ta = target(a);
            let tb = target(b);
            // d(a)·b and a·d(b) as multiples of the target generator, per unit of d(a), d(b)
            let ca = ta.map_or(BigInt::zero(), |ta| model.product(&ta, b));
            let cb = tb.map_or(BigInt::zero(), |tb| sign.clone() * model.product(a, &tb));
            let (da, db, dg) = (known.get(&model.spot(a)).cloned(), known.get(&model.spot(b)).cloned(), known.get(&model.spot(g)).cloned());
            let why = || format!("{a}·{b} = {k}·{g}");
            match (da, db, dg) {
                (Some(da), Some(db), dg) => {
                    let rhs = reduce_mod(&ca * da + &cb * db, &m);
                    match dg {
                        Some(dg) => {
                            if !reduce_mod(k * dg - &rhs, &m).is_zero() {
                                return Err(SsError::Inconsistent {
                                    spot: model.spot(g),
                                    witness: why(),
                                });
                            }
                        }
                        None => {
                            if let Some(x) = solve_linear(k, &rhs, &m, &m) {
                                progress |= set(&mut known, g, x, &why)?;
                            }
                        }
                    }
                }
                (Some(da), None, Some(dg)) => {
                    if let Some(tb) = tb {
                        let rhs = reduce_mod(k * dg - &ca * da, &m);
                        if let Some(x) = solve_linear(&cb, &rhs, &modulus(model.order(&tb)), &m) {
                            progress |= set(&mut known, b, x, &why)?;
                        }
                    }
                }
                (None, Some(db), Some(dg)) => {
                    if let Some(ta) = ta {
                        let rhs = reduce_mod(k * dg - &cb * db, &m);
                        if let Some(x) = solve_linear(&ca, &rhs, &modulus(model.order(&ta)), &m) {
                            progress |= set(&mut known, a, x, &why)?;
                        }
                    }
                }
                _ => {}
            }
        }
        if !progress {
            break;
        }
    }
    let unreachable = gens.iter().map(|g| model.spot(g)).filter(|s| !known.contains_key(s)).collect();
    Ok(Leibniz {
        r,
        values: known,
        unreachable,
    })
}

impl Leibniz {
    /// Installs the nonzero values on a page of cyclic cells.
    pub fn install(&self, page: &mut Page) -> Result<(), SsError> {
        for (s, v) in &self.values {
            if v.is_zero() || !in_window(&page.window, *s) {
                continue;
            }
            if !in_window(&page.window, s.d_target(self.r)) {
                if page.is_indeterminate(*s) {
                    continue;
                }
                return Err(SsError::Leakage { from: *s });
            }
            let src = page.group(*s);
            let tgt = page.group(s.d_target(self.r));
            if src.ngens() != 1 {
                return Err(SsError::NonCyclic(*s));
            }
            if tgt.ngens() != 1 {
                return Err(SsError::NonCyclic(s.d_target(self.r)));
            }
            let d = GroupHom::new(src, tgt, IntMatrix::scalar(1, v))?;
            page.install(*s, d)?;
        }
        Ok(())
    }
}

/// A cellwise map between two pages of the same number.
#[derive(Clone, Debug, Default)]
pub struct PageMap {
    pub maps: BTreeMap<Spot, GroupHom>,
}

impl PageMap {
    pub fn at(&self, s: Spot, source: &Page, target: &Page) -> GroupHom {
        self.maps
            .get(&s)
            .cloned()
            .unwrap_or_else(|| GroupHom::zero(&source.group(s), &target.group(s)))
    }

    /// `d ∘ f = f ∘ d` at every spot of the source window.
    pub fn commutes(&self, source: &Page, target: &Page) -> Result<(), SsError> {
        let r = source.r;
        for s in source.spots() {
            let t = s.d_target(r);
            if !in_window(&source.window, t) {
                continue;
            }
            let lhs = target.differential(s).compose(&self.at(s, source, target))?;
            let rhs = self.at(t, source, target).compose(&source.differential(s))?;
            if lhs != rhs {
                return Err(SsError::NonCommuting(s));
            }
        }
        Ok(())
    }

    /// The map on the next pages.
    pub fn induced(&self, source_next: &Page, target_next: &Page, source: &Page, target: &Page) -> Result<PageMap, SsError> {
        let mut out = PageMap::default();
        for (s, g) in source_next.cells() {
            let f = self.at(*s, source, target);
            let sq = source_next.homology_data(*s).ok_or(SsError::NotAChainMap(*s))?;
            let h = target_next.group(*s);
            let mut m = IntMatrix::zeros(h.ngens(), g.ngens());
            if !h.is_zero() {
                let tq = target_next.homology_data(*s).ok_or(SsError::NotAChainMap(*s))?;
                for j in 0..g.ngens() {
                    let image = f.apply(&sq.lift(j));
                    let c = tq.coords(&image).map_err(|_| SsError::NotAChainMap(*s))?;
                    for (i, v) in c.into_iter().enumerate() {
                        m.set(i, j, v);
                    }
                }
            }
            out.maps.insert(*s, GroupHom::new(g.clone(), h, m)?);
        }
        Ok(out)
    }
}

/// `ψ^k` acting as `k^{-q/2}` on row `q`.
pub fn adams_action(k: i64, page: &Page) -> Result<PageMap, SsError> {
    let mut out = PageMap::default();
    for (s, g) in page.cells() {
        if s.q.rem_euclid(2) != 0 {
            return Err(SsError::OddRow(*s));
        }
        if s.q > 0 {
            return Err(SsError::NegativeWeight(*s));
        }
        let w = (-s.q / 2) as u32;
        out.maps.insert(*s, GroupHom::scalar(g, &BigInt::from(k).pow(w)));
    }
    Ok(out)
}

/// A graded piece of the abutment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub p: i64,
    pub weight: i64,
    pub group: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbutmentGraded {
    pub degree: i64,
    pub pieces: Vec<Piece>,
}

impl AbutmentGraded {
    pub fn groups(&self) -> Vec<FGAbelianGroup> {
        self.pieces.iter().map(|p| p.group.parse().expect("rendered group")).collect()
    }

    pub fn weights(&self) -> Vec<i64> {
        self.pieces.iter().map(|p| p.weight).collect()
    }
}

impl fmt::Display for AbutmentGraded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pieces.iter().map(|p| format!("w{} {}", p.weight, p.group)).collect();
        write!(f, "n={}: [{}]", self.degree, parts.join(", "))
    }
}

/// Surviving cells on the line `p + q = n`, by increasing filtration `p`.
pub fn abutment_graded(einfty: &Page, n: i64) -> Result<AbutmentGraded, SsError> {
    let mut pieces = Vec::new();
    for s in einfty.line(n) {
        if einfty.is_indeterminate(s) {
            return Err(SsError::Indeterminate(s));
        }
        let g = einfty.group(s);
        if g.is_zero() {
            continue;
        }
        if s.q.rem_euclid(2) != 0 {
            return Err(SsError::OddRow(s));
        }
        pieces.push(Piece {
            p: s.p,
            weight: -s.q / 2,
            group: g.to_string(),
        });
    }
    Ok(AbutmentGraded { degree: n, pieces })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> FGAbelianGroup {
        FGAbelianGroup::cyclic(2)
    }

    fn toy() -> Page {
        let cells = vec![
            (Spot::new(0, -4), FGAbelianGroup::z().with_names(["x"])),
            (Spot::new(3, -6), z2().with_names(["y3"])),
            (Spot::new(1, 1), z2()),
            (Spot::new(7, 0), z2()),
        ];
        let mut page = Page::new(3, Window::new(-4, 8, -10, 4), cells).unwrap();
        let d = GroupHom::new(FGAbelianGroup::z().with_names(["x"]), z2(), IntMatrix::from_rows(&[vec![1]])).unwrap();
        page.install(Spot::new(0, -4), d).unwrap();
        page
    }

    #[test]
    fn turning_a_surjection() {
        let e4 = turn_page(&toy()).unwrap();
        assert_eq!(e4.group(Spot::new(0, -4)), FGAbelianGroup::z());
        assert_eq!(e4.group(Spot::new(0, -4)).names(), ["2·x"]);
        assert!(e4.group(Spot::new(3, -6)).is_zero());
        assert_eq!(e4.group(Spot::new(1, 1)), z2());
        assert!(e4.is_indeterminate(Spot::new(7, 0)));
        assert!(!e4.is_indeterminate(Spot::new(8, 0)));
        assert!(!e4.is_indeterminate(Spot::new(0, -4)));
    }

    #[test]
    fn leakage_is_rejected() {
        let mut page = Page::new(3, Window::new(0, 2, -2, 0), vec![(Spot::new(0, 0), z2())]).unwrap();
        let d = Leibniz {
            r: 3,
            values: [(Spot::new(0, 0), BigInt::one())].into_iter().collect(),
            unreachable: Vec::new(),
        };
        assert_eq!(d.install(&mut page), Err(SsError::Leakage { from: Spot::new(0, 0) }));
        page.mark_indeterminate(Spot::new(0, 0));
        assert_eq!(d.install(&mut page), Ok(()));
    }

    #[test]
    fn zero_differentials_idempotent() {
        let cells = vec![(Spot::new(0, 0), FGAbelianGroup::z()), (Spot::new(1, -2), z2())];
        let page = Page::new(2, Window::new(-3, 3, -3, 3), cells).unwrap();
        let next = turn_page(&page).unwrap();
        assert!(next.indeterminate().is_empty());
        let again = turn_page(&next).unwrap();
        assert_eq!(again.cells().collect::<Vec<_>>(), page.cells().collect::<Vec<_>>());
    }

    #[test]
    fn d_squared_check() {
        let mut page = Page::new(1, Window::new(0, 3, -1, 1), vec![(Spot::new(0, 0), FGAbelianGroup::z()), (Spot::new(1, 0), FGAbelianGroup::z()), (Spot::new(2, 0), FGAbelianGroup::z())]).unwrap();
        let z = FGAbelianGroup::z();
        page.install(Spot::new(0, 0), GroupHom::identity(&z)).unwrap();
        page.install(Spot::new(1, 0), GroupHom::identity(&z)).unwrap();
        assert_eq!(page.check_d_squared(), Err(SsError::NotComplex(Spot::new(0, 0))));
    }

    #[test]
    fn adams_scalars() {
        let cells = vec![(Spot::new(0, -4), FGAbelianGroup::z()), (Spot::new(1, -2), z2()), (Spot::new(0, 0), FGAbelianGroup::z())];
        let page = Page::new(3, Window::new(-1, 4, -6, 1), cells).unwrap();
        let psi3 = adams_action(3, &page).unwrap();
        assert!(psi3.maps[&Spot::new(0, -4)].is_multiplication_by(9));
        assert!(psi3.maps[&Spot::new(0, 0)].is_multiplication_by(1));
        assert!(adams_action(2, &page).unwrap().maps[&Spot::new(1, -2)].is_zero());
        let odd = Page::new(3, Window::new(0, 0, 0, 1), vec![(Spot::new(0, 1), z2())]).unwrap();
        assert_eq!(adams_action(3, &odd).unwrap_err(), SsError::OddRow(Spot::new(0, 1)));
    }

    #[test]
    fn abutment_readout() {
        let e4 = turn_page(&toy()).unwrap();
        let a = abutment_graded(&e4, -4).unwrap();
        assert_eq!(a.pieces, vec![Piece { p: 0, weight: 2, group: "Z".into() }]);
        assert!(abutment_graded(&e4, -3).unwrap().pieces.is_empty());
        assert!(matches!(abutment_graded(&e4, 7), Err(SsError::Indeterminate(_))));
    }

    #[test]
    fn solving_linear_equations() {
        let two = Some(BigInt::from(2));
        assert_eq!(solve_linear(&BigInt::one(), &BigInt::one(), &two, &two), Some(BigInt::one()));
        assert_eq!(solve_linear(&BigInt::from(2), &BigInt::zero(), &two, &two), None);
        assert_eq!(solve_linear(&BigInt::from(3), &BigInt::from(6), &None, &None), Some(BigInt::from(2)));
        assert_eq!(solve_linear(&BigInt::from(3), &BigInt::from(5), &None, &None), None);
    }
}
