//! Bredon (co)chains with Mackey coefficients and the RO(Z/2)-graded
//! reduction to integer homological algebra.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::equivcw::{smash, CWZ2, CellularMap, CwError, SpaceExpr};
use crate::exactalg::{
    induced_between_reduced, AlgebraError, Direction, FGAbelianGroup, GroupHom, IntChainComplex, IntMatrix, ReducedComplex,
};
use crate::mackey::{MackeyError, MackeyZ2};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BredonError {
    #[error(transparent)]
    Mackey(#[from] MackeyError),
    #[error(transparent)]
    Cw(#[from] CwError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("coefficients with torsion values are not supported")]
    TorsionCoefficients,
    #[error("positive weights are only available for pt, orbit and spheres")]
    PositiveWeightUnsupported,
    #[error("induced maps in positive weight need 0-dimensional spaces")]
    NotZeroDimensional,
}

/// Blocks of a Bredon complex: one per fixed cell and one per free orbit.
#[derive(Clone, Debug)]
struct Blocks {
    /// per degree: `(cell, offset)` for every block, in cell order
    blocks: BTreeMap<usize, Vec<(usize, usize)>>,
    ranks: BTreeMap<usize, usize>,
}

impl Blocks {
    fn new(x: &CWZ2, m: &MackeyZ2) -> Self {
        let mut blocks = BTreeMap::new();
        let mut ranks = BTreeMap::new();
        for d in 0..=x.dim() {
            let mut list = Vec::new();
            let mut off = 0;
            for c in x.reduced_cells_in_dim(d) {
                if x.is_fixed(c) {
                    list.push((c, off));
                    off += m.m_fixed.ngens();
                } else if x.orbit_rep(c) == c {
                    list.push((c, off));
                    off += m.m_free.ngens();
                }
            }
            blocks.insert(d, list);
            ranks.insert(d, off);
        }
        Blocks { blocks, ranks }
    }

    fn offset(&self, d: usize, cell: usize) -> Option<usize> {
        let list = &self.blocks[&d];
        list.binary_search_by_key(&cell, |(c, _)| *c).ok().map(|k| list[k].1)
    }
}

fn check(m: &MackeyZ2) -> Result<(), BredonError> {
    m.validate().map_err(|v| BredonError::Mackey(MackeyError::Invalid(v)))?;
    if !m.is_free() {
        return Err(BredonError::TorsionCoefficients);
    }
    Ok(())
}

fn place(out: &mut IntMatrix, row: usize, col: usize, block: &IntMatrix, c: i64) {
    let c = BigInt::from(c);
    for i in 0..block.rows() {
        for (j, v) in block.row_entries(i) {
            out.add_to(row + i, col + j, &(v * &c));
        }
    }
}

/// A term `v·f` on a free cell, rewritten on its orbit representative:
/// `(representative, block, coefficient)`.
fn free_term<'a>(x: &CWZ2, f: usize, v: i64, id: &'a IntMatrix, t: &'a IntMatrix) -> (usize, &'a IntMatrix, i64) {
    let rep = x.orbit_rep(f);
    if rep == f {
        (rep, id, v)
    } else {
        (rep, t, v * x.cell(f).sign)
    }
}

/// Reduced Bredon cochains: `δφ(ρ) = φ(∂ρ)` assembled blockwise.
pub fn cochain_complex(x: &CWZ2, m: &MackeyZ2) -> Result<IntChainComplex, BredonError> {
    check(m)?;
    x.validate()?;
    let blocks = Blocks::new(x, m);
    let id_fixed = IntMatrix::identity(m.m_fixed.ngens());
    let id_free = IntMatrix::identity(m.m_free.ngens());
    let (res, t) = (&m.res.matrix, &m.t_star.matrix);
    let top = x.dim();
    let ranks: Vec<usize> = (0..=top).map(|d| blocks.ranks[&d]).collect();
    let mut diffs = Vec::new();
    for d in 0..=top {
        let rows = if d < top { blocks.ranks[&(d + 1)] } else { 0 };
        let mut out = IntMatrix::zeros(rows, blocks.ranks[&d]);
        if d < top {
            for (rho, row) in &blocks.blocks[&(d + 1)] {
                let rho_fixed = x.is_fixed(*rho);
                for (f, v) in &x.cell(*rho).boundary {
                    if *f == x.basepoint() {
                        continue;
                    }
                    if x.is_fixed(*f) {
                        let col = blocks.offset(d, *f).expect("fixed block");
                        let block = if rho_fixed { &id_fixed } else { res };
                        place(&mut out, *row, col, block, *v);
                    } else {
                        let (rep, block, c) = free_term(x, *f, *v, &id_free, t);
                        let col = blocks.offset(d, rep).expect("orbit block");
                        place(&mut out, *row, col, block, c);
                    }
                }
            }
        }
        diffs.push(out);
    }
    Ok(IntChainComplex::new(Direction::Cohomological, 0, ranks, diffs)?)
}

/// Reduced Bredon chains with the transfer on free-to-fixed incidences.
pub fn chain_complex(x: &CWZ2, m: &MackeyZ2) -> Result<IntChainComplex, BredonError> {
    check(m)?;
    x.validate()?;
    let blocks = Blocks::new(x, m);
    let id_fixed = IntMatrix::identity(m.m_fixed.ngens());
    let id_free = IntMatrix::identity(m.m_free.ngens());
    let (tr, t) = (&m.tr.matrix, &m.t_star.matrix);
    let top = x.dim();
    let ranks: Vec<usize> = (0..=top).map(|d| blocks.ranks[&d]).collect();
    let mut diffs = vec![IntMatrix::zeros(0, ranks[0])];
    for d in 1..=top {
        let mut out = IntMatrix::zeros(blocks.ranks[&(d - 1)], blocks.ranks[&d]);
        for (rho, col) in &blocks.blocks[&d] {
            let rho_fixed = x.is_fixed(*rho);
            for (f, v) in &x.cell(*rho).boundary {
                if *f == x.basepoint() {
                    continue;
                }
                if x.is_fixed(*f) {
                    let row = blocks.offset(d - 1, *f).expect("fixed block");
                    let block = if rho_fixed { &id_fixed } else { tr };
                    place(&mut out, row, *col, block, *v);
                } else {
                    let (rep, block, c) = free_term(x, *f, *v, &id_free, t);
                    let row = blocks.offset(d - 1, rep).expect("orbit block");
                    place(&mut out, row, *col, block, c);
                }
            }
        }
        diffs.push(out);
    }
    Ok(IntChainComplex::new(Direction::Homological, 0, ranks, diffs)?)
}

/// Where a RO(Z/2)-graded group is evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Site {
    /// the point, as the based space `S^0`
    Pt,
    /// the free orbit, as `Z/2₊`
    Orbit,
    /// reduced cohomology of the sphere `S(c,d)`
    Sphere(i64, i64),
    /// reduced cohomology of a built complex
    Space(SpaceExpr),
}

impl Site {
    pub fn parse(s: &str) -> Result<Self, CwError> {
        match s.trim() {
            "pt" => Ok(Site::Pt),
            "orbit" => Ok(Site::Orbit),
            other => match SpaceExpr::parse(other)? {
                SpaceExpr::Sphere(0, 0) => Ok(Site::Pt),
                SpaceExpr::Sphere(c, d) => Ok(Site::Sphere(c, d)),
                SpaceExpr::Orbit(e) if *e == SpaceExpr::Sphere(0, 0) => Ok(Site::Orbit),
                e => Ok(Site::Space(e)),
            },
        }
    }

    /// Based complex whose reduced groups are computed.
    pub fn complex(&self) -> Result<CWZ2, CwError> {
        match self {
            Site::Pt => Ok(CWZ2::s0()),
            Site::Orbit => Ok(CWZ2::orbit_s0()),
            Site::Sphere(c, d) => CWZ2::sphere(*c, *d),
            Site::Space(e) => e.build(),
        }
    }
}

/// `S^{k,k} ∧ X`.
fn suspend(x: &CWZ2, k: i64) -> Result<CWZ2, CwError> {
    Ok(smash(&CWZ2::sphere(k, k)?, x))
}

/// Nonzero groups `H^{p,w}(site; m)` for all `p` at a fixed weight `w`.
pub fn weight_column(site: &Site, w: i64, m: &MackeyZ2) -> Result<BTreeMap<i64, FGAbelianGroup>, BredonError> {
    check(m)?;
    if let Site::Sphere(c, d) = site {
        CWZ2::sphere(*c, *d)?;
        if w > 0 {
            let col = weight_column(&Site::Pt, w - d, m)?;
            return Ok(col.into_iter().map(|(p, g)| (p + c, g)).collect());
        }
    }
    let x = site.complex()?;
    let mut out = BTreeMap::new();
    if w <= 0 {
        let c = cochain_complex(&suspend(&x, -w)?, m)?;
        for n in c.degrees() {
            let g = c.homology_group(n);
            if !g.is_zero() {
                out.insert(n + w, g);
            }
        }
    } else {
        if !matches!(site, Site::Pt | Site::Orbit) {
            return Err(BredonError::PositiveWeightUnsupported);
        }
        let c = chain_complex(&suspend(&x, w)?, m)?;
        for n in c.degrees() {
            let g = c.homology_group(n);
            if !g.is_zero() {
                out.insert(w - n, g);
            }
        }
    }
    Ok(out)
}

/// `H^{p,q}(site; m)` with `p` the dimension and `q` the weight.
pub fn ro_graded(site: &Site, p: i64, q: i64, m: &MackeyZ2) -> Result<FGAbelianGroup, BredonError> {
    Ok(weight_column(site, q, m)?.remove(&p).unwrap_or_default())
}

/// Blocks of `x` as `(degree, cell) → offset` for map assembly.
fn block_table(x: &CWZ2, m: &MackeyZ2) -> Blocks {
    Blocks::new(x, m)
}

/// Matrix of `f^*` on Bredon cochains (`target → source`) in degree `d`.
fn cochain_pullback(f: &CellularMap, m: &MackeyZ2, d: usize) -> IntMatrix {
    let (xs, xt) = (&f.source, &f.target);
    let (bs, bt) = (block_table(xs, m), block_table(xt, m));
    let id_fixed = IntMatrix::identity(m.m_fixed.ngens());
    let id_free = IntMatrix::identity(m.m_free.ngens());
    let rows = bs.ranks.get(&d).copied().unwrap_or(0);
    let cols = bt.ranks.get(&d).copied().unwrap_or(0);
    let mut out = IntMatrix::zeros(rows, cols);
    let Some(list) = bs.blocks.get(&d) else {
        return out;
    };
    for (sigma, row) in list {
        let sigma_fixed = xs.is_fixed(*sigma);
        for (y, c) in f.image(*sigma) {
            if *y == xt.basepoint() {
                continue;
            }
            if xt.is_fixed(*y) {
                let col = bt.offset(d, *y).expect("fixed block");
                let block = if sigma_fixed { &id_fixed } else { &m.res.matrix };
                place(&mut out, *row, col, block, *c);
            } else if sigma_fixed {
                // a fixed cell over a free pair: only the representative term counts
                if xt.orbit_rep(*y) == *y {
                    let col = bt.offset(d, *y).expect("orbit block");
                    place(&mut out, *row, col, &m.tr.matrix, *c);
                }
            } else {
                let (rep, block, k) = free_term(xt, *y, *c, &id_free, &m.t_star.matrix);
                let col = bt.offset(d, rep).expect("orbit block");
                place(&mut out, *row, col, block, k);
            }
        }
    }
    out
}

/// Matrix of `f_*` on Bredon chains (`source → target`) in degree `d`.
fn chain_pushforward(f: &CellularMap, m: &MackeyZ2, d: usize) -> IntMatrix {
    let (xs, xt) = (&f.source, &f.target);
    let (bs, bt) = (block_table(xs, m), block_table(xt, m));
    let id_fixed = IntMatrix::identity(m.m_fixed.ngens());
    let id_free = IntMatrix::identity(m.m_free.ngens());
    let rows = bt.ranks.get(&d).copied().unwrap_or(0);
    let cols = bs.ranks.get(&d).copied().unwrap_or(0);
    let mut out = IntMatrix::zeros(rows, cols);
    let Some(list) = bs.blocks.get(&d) else {
        return out;
    };
    for (sigma, col) in list {
        let sigma_fixed = xs.is_fixed(*sigma);
        for (y, c) in f.image(*sigma) {
            if *y == xt.basepoint() {
                continue;
            }
            if xt.is_fixed(*y) {
                let row = bt.offset(d, *y).expect("fixed block");
                let block = if sigma_fixed { &id_fixed } else { &m.tr.matrix };
                place(&mut out, row, *col, block, *c);
            } else if sigma_fixed {
                if xt.orbit_rep(*y) == *y {
                    let row = bt.offset(d, *y).expect("orbit block");
                    place(&mut out, row, *col, &m.res.matrix, *c);
                }
            } else {
                let (rep, block, k) = free_term(xt, *y, *c, &id_free, &m.t_star.matrix);
                let row = bt.offset(d, rep).expect("orbit block");
                place(&mut out, row, *col, block, k);
            }
        }
    }
    out
}

/// Transpose of a map between 0-dimensional based complexes.
fn dual_of_points(f: &CellularMap) -> Result<CellularMap, BredonError> {
    if f.source.dim() != 0 || f.target.dim() != 0 {
        return Err(BredonError::NotZeroDimensional);
    }
    let mut images: Vec<Vec<(usize, i64)>> = vec![Vec::new(); f.target.num_cells()];
    for s in 0..f.source.num_cells() {
        for (t, c) in f.image(s) {
            if *t == f.target.basepoint() || s == f.source.basepoint() {
                continue;
            }
            images[*t].push((s, *c));
        }
    }
    images[f.target.basepoint()] = vec![(f.source.basepoint(), 1)];
    Ok(CellularMap::new(f.target.clone(), f.source.clone(), images)?)
}

/// `f^* : H^{p,q}(target) → H^{p,q}(source)`.
///
/// Negative and zero weights pull back Bredon cochains of `S^{|q|,|q|} ∧ f`;
/// positive weights push the dual map forward on Bredon chains, which needs
/// 0-dimensional source and target.
pub fn induced_map(f: &CellularMap, m: &MackeyZ2, p: i64, q: i64) -> Result<GroupHom, BredonError> {
    check(m)?;
    if q <= 0 {
        let n = p - q;
        let g = f.smash_left(&CWZ2::sphere(-q, -q)?);
        let cs = ReducedComplex::new(&cochain_complex(&g.source, m)?);
        let ct = ReducedComplex::new(&cochain_complex(&g.target, m)?);
        if n < 0 || n as usize > g.source.dim().max(g.target.dim()) {
            return Ok(GroupHom::zero(&FGAbelianGroup::zero(), &FGAbelianGroup::zero()));
        }
        let pull = cochain_pullback(&g, m, n as usize);
        Ok(induced_between_reduced(&ct, &cs, n, &pull))
    } else {
        let dual = dual_of_points(f)?;
        let n = q - p;
        let g = dual.smash_left(&CWZ2::sphere(q, q)?);
        let cs = ReducedComplex::new(&chain_complex(&g.source, m)?);
        let ct = ReducedComplex::new(&chain_complex(&g.target, m)?);
        if n < 0 || n as usize > g.source.dim().max(g.target.dim()) {
            return Ok(GroupHom::zero(&FGAbelianGroup::zero(), &FGAbelianGroup::zero()));
        }
        let push = chain_pushforward(&g, m, n as usize);
        Ok(induced_between_reduced(&cs, &ct, n, &push))
    }
}

/// Restriction `H^{p,q}(pt) → H^{p,q}(Z/2)` induced by the orbit projection.
pub fn orbit_restriction(m: &MackeyZ2, p: i64, q: i64) -> Result<GroupHom, BredonError> {
    induced_map(&CellularMap::orbit_projection(), m, p, q)
}

/// `H^{p,q}(Z/2; Z)` by the closed rule: `Z` exactly when `p = 0`.
pub fn orbit_closed_form(p: i64) -> FGAbelianGroup {
    if p == 0 {
        FGAbelianGroup::z()
    } else {
        FGAbelianGroup::zero()
    }
}

/// Cellular chains of `RP^n`, boundaries alternating `0, 2`.
pub fn rp_chain_complex(n: usize) -> IntChainComplex {
    let b = (1..=n)
        .map(|k| IntMatrix::from_rows(&[vec![if k % 2 == 0 { 2 } else { 0 }]]))
        .collect();
    IntChainComplex::from_boundaries(b).expect("RP^n chains")
}

/// Reduced cohomology of `RP^n` in degree `k` from the cellular cochains.
pub fn rp_reduced_cohomology(n: usize, k: i64) -> FGAbelianGroup {
    let c = rp_chain_complex(n);
    let t = IntChainComplex::new(
        Direction::Cohomological,
        0,
        c.degrees().map(|d| c.rank(d)).collect(),
        c.degrees().map(|d| c.in_map(d).transpose()).collect(),
    )
    .expect("dual complex");
    reduced(&t, k)
}

/// Reduced homology of `RP^n` in degree `k`.
pub fn rp_reduced_homology(n: usize, k: i64) -> FGAbelianGroup {
    reduced(&rp_chain_complex(n), k)
}

fn reduced(c: &IntChainComplex, k: i64) -> FGAbelianGroup {
    let g = c.homology_group(k);
    if k == 0 {
        FGAbelianGroup::new(g.free_rank().saturating_sub(1), g.torsion().to_vec()).expect("canonical")
    } else {
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zbar() -> MackeyZ2 {
        MackeyZ2::named("Z").unwrap()
    }

    fn groups(c: &IntChainComplex) -> Vec<String> {
        c.degrees().map(|n| c.homology_group(n).to_string()).collect()
    }

    #[test]
    fn cochain_examples() {
        let m = zbar();
        assert_eq!(groups(&cochain_complex(&CWZ2::s0(), &m).unwrap()), vec!["Z"]);
        assert_eq!(groups(&cochain_complex(&CWZ2::sphere(1, 1).unwrap(), &m).unwrap()), vec!["0", "0"]);
        assert_eq!(groups(&cochain_complex(&CWZ2::orbit_s0(), &m).unwrap()), vec!["Z"]);
    }

    #[test]
    fn chain_examples() {
        let m = zbar();
        assert_eq!(groups(&chain_complex(&CWZ2::sphere(1, 1).unwrap(), &m).unwrap())[0], "Z/2");
        assert_eq!(groups(&chain_complex(&CWZ2::s0(), &m).unwrap()), vec!["Z"]);
        for q in 1..=5 {
            let c = chain_complex(&CWZ2::sphere(q, q).unwrap(), &m).unwrap();
            assert!(c.homology_group(1).is_zero(), "q = {q}");
        }
    }

    #[test]
    fn dispatcher_examples() {
        let m = zbar();
        let g = |p, q| ro_graded(&Site::Pt, p, q, &m).unwrap().to_string();
        assert_eq!(g(0, 0), "Z");
        assert_eq!(g(1, 1), "Z/2");
        assert_eq!(g(0, -2), "Z");
        assert_eq!(g(2, 3), "0");
        assert_eq!(g(0, -3), "Z/2");
        assert_eq!(ro_graded(&Site::Orbit, 0, -5, &m).unwrap().to_string(), "Z");
        assert_eq!(ro_graded(&Site::Orbit, 1, 3, &m).unwrap().to_string(), "0");
    }

    #[test]
    fn invalid_coefficients_rejected() {
        let mut m = zbar();
        m.tr = GroupHom::scalar(&FGAbelianGroup::z(), &BigInt::from(-2));
        assert!(matches!(ro_graded(&Site::Pt, 0, 0, &m), Err(BredonError::Mackey(_))));
        let z2 = MackeyZ2::constant(&FGAbelianGroup::cyclic(2));
        assert_eq!(ro_graded(&Site::Pt, 0, 0, &z2), Err(BredonError::TorsionCoefficients));
    }

    #[test]
    fn restriction_maps() {
        let m = zbar();
        assert!(orbit_restriction(&m, 0, -2).unwrap().is_multiplication_by(2));
        assert!(orbit_restriction(&m, 0, -4).unwrap().is_multiplication_by(2));
        assert!(orbit_restriction(&m, 0, 0).unwrap().is_isomorphism());
        assert!(orbit_restriction(&m, 0, 2).unwrap().is_isomorphism());
        assert!(orbit_restriction(&m, 0, 4).unwrap().is_isomorphism());
    }

    #[test]
    fn identity_induces_identity() {
        let x = CWZ2::sphere(2, 1).unwrap();
        let h = induced_map(&CellularMap::identity(&x), &zbar(), 1, -1).unwrap();
        assert!(h.is_isomorphism());
        assert_eq!(h.domain, ro_graded(&Site::Sphere(2, 1), 1, -1, &zbar()).unwrap());
    }

    #[test]
    fn rp_oracle() {
        assert_eq!(rp_reduced_cohomology(2, 2).to_string(), "Z/2");
        assert_eq!(rp_reduced_cohomology(3, 3).to_string(), "Z");
        assert_eq!(rp_reduced_homology(2, 1).to_string(), "Z/2");
        assert!(rp_reduced_homology(0, 0).is_zero());
    }
}
