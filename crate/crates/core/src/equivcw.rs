//! Finite based Z/2-CW complexes as signed combinatorial data.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::exactalg::{Direction, IntChainComplex, IntMatrix};

/// Sparse integral chain: `(cell, coefficient)` sorted by cell, no zeros.
pub type Chain = Vec<(usize, i64)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub dim: usize,
    /// `τ(σ) = sign · τσ` on cellular chains.
    pub tau: usize,
    pub sign: i64,
    pub boundary: Chain,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CwError {
    #[error("τ is not an involution with sign +1 at cell {0}")]
    NotInvolution(usize),
    #[error("∂∘∂ ≠ 0 on cell {0}")]
    BoundarySquare(usize),
    #[error("τ does not commute with ∂ on cell {0}")]
    TauBoundary(usize),
    #[error("cell {0} is fixed with orientation reversed")]
    ReversedFixedCell(usize),
    #[error("fixed cell {0} has boundary on a free cell")]
    FixedOnFree(usize),
    #[error("boundary of cell {0} has wrong dimension or index")]
    BadBoundary(usize),
    #[error("basepoint must be a fixed 0-cell with zero boundary")]
    Basepoint,
    #[error("sphere S({p},{q}) needs p ≥ q ≥ 0")]
    BadSphere { p: i64, q: i64 },
    #[error("cannot parse space expression `{0}`")]
    Parse(String),
    #[error("cellular map is not a chain map at cell {0}")]
    MapNotChain(usize),
    #[error("cellular map is not equivariant at cell {0}")]
    MapNotEquivariant(usize),
    #[error("cellular map data is malformed at cell {0}")]
    MapMalformed(usize),
}

/// A finite based Z/2-CW complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CWZ2 {
    cells: Vec<Cell>,
    basepoint: usize,
}

fn add_term(acc: &mut BTreeMap<usize, i64>, cell: usize, c: i64) {
    let e = acc.entry(cell).or_insert(0);
    *e += c;
    if *e == 0 {
        acc.remove(&cell);
    }
}

fn to_chain(acc: BTreeMap<usize, i64>) -> Chain {
    acc.into_iter().collect()
}

impl CWZ2 {
    pub fn new(cells: Vec<Cell>, basepoint: usize) -> Result<Self, CwError> {
        let x = CWZ2 { cells, basepoint };
        x.validate()?;
        Ok(x)
    }

    /// Checks every structural invariant.
    pub fn validate(&self) -> Result<(), CwError> {
        let n = self.cells.len();
        let b = self.cells.get(self.basepoint).ok_or(CwError::Basepoint)?;
        if b.dim != 0 || b.tau != self.basepoint || b.sign != 1 || !b.boundary.is_empty() {
            return Err(CwError::Basepoint);
        }
        for (i, c) in self.cells.iter().enumerate() {
            if c.tau >= n || !(c.sign == 1 || c.sign == -1) {
                return Err(CwError::NotInvolution(i));
            }
            let back = &self.cells[c.tau];
            if back.tau != i || back.sign * c.sign != 1 || back.dim != c.dim {
                return Err(CwError::NotInvolution(i));
            }
            if c.tau == i && c.sign == -1 {
                return Err(CwError::ReversedFixedCell(i));
            }
            for w in c.boundary.windows(2) {
                if w[0].0 >= w[1].0 {
                    return Err(CwError::BadBoundary(i));
                }
            }
            for (f, v) in &c.boundary {
                if *f >= n || *v == 0 || self.cells[*f].dim + 1 != c.dim {
                    return Err(CwError::BadBoundary(i));
                }
                if c.tau == i && !self.is_fixed(*f) {
                    return Err(CwError::FixedOnFree(i));
                }
            }
        }
        for i in 0..n {
            if !self.boundary_chain(&self.cells[i].boundary).is_empty() {
                return Err(CwError::BoundarySquare(i));
            }
            let c = &self.cells[i];
            let lhs = self.tau_chain(&c.boundary);
            let rhs: Chain = self.cells[c.tau].boundary.iter().map(|(f, v)| (*f, v * c.sign)).collect();
            if lhs != rhs {
                return Err(CwError::TauBoundary(i));
            }
        }
        Ok(())
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &Cell {
        &self.cells[i]
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn dim(&self) -> usize {
        self.cells.iter().map(|c| c.dim).max().unwrap_or(0)
    }

    pub fn is_fixed(&self, i: usize) -> bool {
        self.cells[i].tau == i
    }

    /// Orbit representative: the lower index of the pair.
    pub fn orbit_rep(&self, i: usize) -> usize {
        i.min(self.cells[i].tau)
    }

    pub fn is_free_everywhere_but_basepoint(&self) -> bool {
        (0..self.cells.len()).all(|i| i == self.basepoint || !self.is_fixed(i))
    }

    pub fn cells_in_dim(&self, d: usize) -> Vec<usize> {
        (0..self.cells.len()).filter(|i| self.cells[*i].dim == d).collect()
    }

    /// Non-basepoint cells of dimension `d`.
    pub fn reduced_cells_in_dim(&self, d: usize) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|i| *i != self.basepoint && self.cells[*i].dim == d)
            .collect()
    }

    /// `(fixed cells, free orbits)` of dimension `d`, basepoint excluded.
    pub fn cell_counts(&self, d: usize) -> (usize, usize) {
        let cells = self.reduced_cells_in_dim(d);
        let fixed = cells.iter().filter(|i| self.is_fixed(**i)).count();
        (fixed, (cells.len() - fixed) / 2)
    }

    pub fn boundary_chain(&self, chain: &Chain) -> Chain {
        let mut acc = BTreeMap::new();
        for (c, v) in chain {
            for (f, w) in &self.cells[*c].boundary {
                add_term(&mut acc, *f, v * w);
            }
        }
        to_chain(acc)
    }

    pub fn tau_chain(&self, chain: &Chain) -> Chain {
        let mut acc = BTreeMap::new();
        for (c, v) in chain {
            let cell = &self.cells[*c];
            add_term(&mut acc, cell.tau, v * cell.sign);
        }
        to_chain(acc)
    }

    /// Unreduced cellular boundary `C_d → C_{d-1}` on all cells.
    pub fn boundary_matrix(&self, d: usize) -> IntMatrix {
        let cols = self.cells_in_dim(d);
        let rows = if d == 0 { Vec::new() } else { self.cells_in_dim(d - 1) };
        let pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(k, c)| (*c, k)).collect();
        let mut m = IntMatrix::zeros(rows.len(), cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (f, v) in &self.cells[*c].boundary {
                m.set(pos[f], j, BigInt::from(*v));
            }
        }
        m
    }

    /// Reduced homological complex on the chosen cells, where `project`
    /// sends a boundary cell to a basis index with sign (or drops it).
    fn assemble<F>(&self, basis: impl Fn(usize) -> Vec<usize>, project: F) -> IntChainComplex
    where
        F: Fn(usize) -> Option<(usize, i64)>,
    {
        let top = self.dim();
        let levels: Vec<Vec<usize>> = (0..=top).map(&basis).collect();
        let ranks: Vec<usize> = levels.iter().map(Vec::len).collect();
        let mut diffs = vec![IntMatrix::zeros(0, ranks[0])];
        for d in 1..=top {
            let mut m = IntMatrix::zeros(ranks[d - 1], ranks[d]);
            for (j, c) in levels[d].iter().enumerate() {
                for (f, v) in &self.cells[*c].boundary {
                    if let Some((i, s)) = project(*f) {
                        m.add_to(i, j, &BigInt::from(v * s));
                    }
                }
            }
            diffs.push(m);
        }
        IntChainComplex::new(Direction::Homological, 0, ranks, diffs).expect("validated complex")
    }

    fn index_of(&self, levels: impl Fn(usize) -> Vec<usize>) -> BTreeMap<usize, usize> {
        let mut pos = BTreeMap::new();
        for d in 0..=self.dim() {
            for (k, c) in levels(d).into_iter().enumerate() {
                pos.insert(c, k);
            }
        }
        pos
    }

    /// Reduced cellular chains of the underlying space.
    pub fn underlying_chains(&self) -> IntChainComplex {
        let pos = self.index_of(|d| self.reduced_cells_in_dim(d));
        self.assemble(|d| self.reduced_cells_in_dim(d), |f| pos.get(&f).map(|k| (*k, 1)))
    }

    /// Reduced cellular chains of the fixed subcomplex.
    pub fn fixed_chains(&self) -> IntChainComplex {
        let fixed = |d: usize| -> Vec<usize> {
            self.reduced_cells_in_dim(d)
                .into_iter()
                .filter(|c| self.is_fixed(*c))
                .collect()
        };
        let pos = self.index_of(fixed);
        self.assemble(fixed, |f| pos.get(&f).map(|k| (*k, 1)))
    }

    /// Reduced cellular chains of the orbit space.
    pub fn quotient(&self) -> IntChainComplex {
        let reps = |d: usize| -> Vec<usize> {
            self.reduced_cells_in_dim(d)
                .into_iter()
                .filter(|c| self.orbit_rep(*c) == *c)
                .collect()
        };
        let pos = self.index_of(reps);
        self.assemble(reps, |f| {
            let r = self.orbit_rep(f);
            let s = if r == f { 1 } else { self.cells[f].sign };
            pos.get(&r).map(|k| (*k, s))
        })
    }

    /// `S^0`: basepoint and one fixed point.
    pub fn s0() -> Self {
        let pt = |i| Cell {
            dim: 0,
            tau: i,
            sign: 1,
            boundary: Vec::new(),
        };
        CWZ2 {
            cells: vec![pt(0), pt(1)],
            basepoint: 0,
        }
    }

    /// `S^{1,0}`: basepoint and one fixed 1-cell with zero boundary.
    pub fn s10() -> Self {
        CWZ2 {
            cells: vec![
                Cell {
                    dim: 0,
                    tau: 0,
                    sign: 1,
                    boundary: Vec::new(),
                },
                Cell {
                    dim: 1,
                    tau: 1,
                    sign: 1,
                    boundary: Vec::new(),
                },
            ],
            basepoint: 0,
        }
    }

    /// `S^{1,1}`: basepoint `v0`, fixed `v1`, free pair `e, τe` with `∂e = v1 - v0`.
    pub fn s11() -> Self {
        let e = |tau| Cell {
            dim: 1,
            tau,
            sign: 1,
            boundary: vec![(0, -1), (1, 1)],
        };
        CWZ2 {
            cells: vec![
                Cell {
                    dim: 0,
                    tau: 0,
                    sign: 1,
                    boundary: Vec::new(),
                },
                Cell {
                    dim: 0,
                    tau: 1,
                    sign: 1,
                    boundary: Vec::new(),
                },
                e(3),
                e(2),
            ],
            basepoint: 0,
        }
    }

    /// `Z/2₊`: basepoint and a free pair of points.
    pub fn orbit_s0() -> Self {
        let p = |tau| Cell {
            dim: 0,
            tau,
            sign: 1,
            boundary: Vec::new(),
        };
        CWZ2 {
            cells: vec![p(0), p(2), p(1)],
            basepoint: 0,
        }
    }

    /// Representation sphere of dimension `p` and weight `q`, built as a
    /// smash of `p - q` trivial and `q` sign circles.
    pub fn sphere(p: i64, q: i64) -> Result<Self, CwError> {
        if q < 0 || p < q {
            return Err(CwError::BadSphere { p, q });
        }
        let mut x = Self::s0();
        for _ in 0..(p - q) {
            x = smash(&x, &Self::s10());
        }
        for _ in 0..q {
            x = smash(&x, &Self::s11());
        }
        Ok(x)
    }
}

/// Pairs `(i, j)` of non-basepoint cells with their index in the smash.
struct SmashIndex {
    pos: BTreeMap<(usize, usize), usize>,
}

impl SmashIndex {
    fn new(x: &CWZ2, y: &CWZ2) -> Self {
        let mut pos = BTreeMap::new();
        let mut next = 1;
        for i in 0..x.num_cells() {
            if i == x.basepoint {
                continue;
            }
            for j in 0..y.num_cells() {
                if j == y.basepoint {
                    continue;
                }
                pos.insert((i, j), next);
                next += 1;
            }
        }
        SmashIndex { pos }
    }

    /// Index of `a ∧ b`; basepoint factors collapse to the basepoint when
    /// the cell is 0-dimensional and vanish otherwise.
    fn locate(&self, x: &CWZ2, y: &CWZ2, a: usize, b: usize) -> Option<usize> {
        if a == x.basepoint || b == y.basepoint {
            (x.cells[a].dim + y.cells[b].dim == 0).then_some(0)
        } else {
            Some(self.pos[&(a, b)])
        }
    }
}

/// Smash product with the Koszul sign on the boundary and the diagonal
/// involution.
pub fn smash(x: &CWZ2, y: &CWZ2) -> CWZ2 {
    let index = SmashIndex::new(x, y);
    let mut cells = vec![Cell {
        dim: 0,
        tau: 0,
        sign: 1,
        boundary: Vec::new(),
    }];
    for &(i, j) in index.pos.keys() {
        let (a, b) = (&x.cells[i], &y.cells[j]);
        let mut acc = BTreeMap::new();
        for (f, v) in &a.boundary {
            if let Some(k) = index.locate(x, y, *f, j) {
                add_term(&mut acc, k, *v);
            }
        }
        let koszul = if a.dim % 2 == 0 { 1 } else { -1 };
        for (f, v) in &b.boundary {
            if let Some(k) = index.locate(x, y, i, *f) {
                add_term(&mut acc, k, koszul * v);
            }
        }
        cells.push(Cell {
            dim: a.dim + b.dim,
            tau: index.pos[&(a.tau, b.tau)],
            sign: a.sign * b.sign,
            boundary: to_chain(acc),
        });
    }
    let out = CWZ2 { cells, basepoint: 0 };
    if let Err(e) = out.validate() {
        panic!("smash produced an invalid complex: {e}");
    }
    out
}

/// `Z/2₊ ∧ X`: two swapped copies of every non-basepoint cell.
pub fn orbit_plus(x: &CWZ2) -> CWZ2 {
    smash(&CWZ2::orbit_s0(), x)
}

/// A based map given cell by cell as chains in the target, checked as a
/// map of reduced cellular chains.
#[derive(Clone, Debug)]
pub struct CellularMap {
    pub source: CWZ2,
    pub target: CWZ2,
    images: Vec<Chain>,
}

impl CellularMap {
    /// Validates dimensions, basepoint, equivariance and the chain map identity.
    pub fn new(source: CWZ2, target: CWZ2, images: Vec<Chain>) -> Result<Self, CwError> {
        if images.len() != source.num_cells() {
            return Err(CwError::MapMalformed(images.len()));
        }
        for (i, img) in images.iter().enumerate() {
            let d = source.cells[i].dim;
            if img.iter().any(|(c, v)| *c >= target.num_cells() || target.cells[*c].dim != d || *v == 0) {
                return Err(CwError::MapMalformed(i));
            }
            if img.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(CwError::MapMalformed(i));
            }
        }
        if images[source.basepoint] != vec![(target.basepoint, 1)] {
            return Err(CwError::MapMalformed(source.basepoint));
        }
        let f = CellularMap { source, target, images };
        for i in 0..f.source.num_cells() {
            let c = &f.source.cells[i];
            let bp = f.target.basepoint;
            let mut lhs = f.target.boundary_chain(&f.images[i]);
            let mut rhs = f.apply(&c.boundary);
            lhs.retain(|(k, _)| *k != bp);
            rhs.retain(|(k, _)| *k != bp);
            if lhs != rhs {
                return Err(CwError::MapNotChain(i));
            }
            let lhs = f.target.tau_chain(&f.images[i]);
            let rhs: Chain = f.images[c.tau].iter().map(|(k, v)| (*k, v * c.sign)).collect();
            if lhs != rhs {
                return Err(CwError::MapNotEquivariant(i));
            }
        }
        Ok(f)
    }

    pub fn identity(x: &CWZ2) -> Self {
        let images = (0..x.num_cells()).map(|i| vec![(i, 1)]).collect();
        CellularMap {
            source: x.clone(),
            target: x.clone(),
            images,
        }
    }

    /// The collapse `Z/2₊ → S^0` sending both points to the non-basepoint.
    pub fn orbit_projection() -> Self {
        Self::new(CWZ2::orbit_s0(), CWZ2::s0(), vec![vec![(0, 1)], vec![(1, 1)], vec![(1, 1)]]).expect("projection is cellular")
    }

    pub fn image(&self, i: usize) -> &Chain {
        &self.images[i]
    }

    pub fn apply(&self, chain: &Chain) -> Chain {
        let mut acc = BTreeMap::new();
        for (c, v) in chain {
            for (k, w) in &self.images[*c] {
                add_term(&mut acc, *k, v * w);
            }
        }
        to_chain(acc)
    }

    /// `id_L ∧ f : L ∧ X → L ∧ Y`.
    pub fn smash_left(&self, left: &CWZ2) -> Self {
        let src = smash(left, &self.source);
        let tgt = smash(left, &self.target);
        let si = SmashIndex::new(left, &self.source);
        let ti = SmashIndex::new(left, &self.target);
        let mut images = vec![Vec::new(); src.num_cells()];
        images[0] = vec![(0, 1)];
        for (&(a, b), &k) in si.pos.iter() {
            let mut acc = BTreeMap::new();
            for (c, v) in &self.images[b] {
                if let Some(t) = ti.locate(left, &self.target, a, *c) {
                    add_term(&mut acc, t, *v);
                }
            }
            images[k] = to_chain(acc);
        }
        Self::new(src, tgt, images).expect("smash of cellular maps is cellular")
    }
}

/// Builder expressions: `S(p,q)`, `orbit(E)`, `smash(E,E)`, and `pt` for `S(0,0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpaceExpr {
    Sphere(i64, i64),
    Orbit(Box<SpaceExpr>),
    Smash(Box<SpaceExpr>, Box<SpaceExpr>),
}

impl SpaceExpr {
    pub fn parse(s: &str) -> Result<Self, CwError> {
        let toks: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser { toks: &toks, pos: 0, src: s };
        let e = p.expr()?;
        if p.pos != toks.len() {
            return Err(CwError::Parse(s.to_string()));
        }
        Ok(e)
    }

    pub fn build(&self) -> Result<CWZ2, CwError> {
        match self {
            SpaceExpr::Sphere(p, q) => CWZ2::sphere(*p, *q),
            SpaceExpr::Orbit(e) => Ok(orbit_plus(&e.build()?)),
            SpaceExpr::Smash(a, b) => Ok(smash(&a.build()?, &b.build()?)),
        }
    }
}

impl fmt::Display for SpaceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceExpr::Sphere(p, q) => write!(f, "S({p},{q})"),
            SpaceExpr::Orbit(e) => write!(f, "orbit({e})"),
            SpaceExpr::Smash(a, b) => write!(f, "smash({a},{b})"),
        }
    }
}

struct Parser<'a> {
    toks: &'a [char],
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self) -> CwError {
        CwError::Parse(self.src.to_string())
    }

    fn eat(&mut self, c: char) -> Result<(), CwError> {
        if self.toks.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err())
        }
    }

    fn word(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.toks.len() && self.toks[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        self.toks[start..self.pos].iter().collect()
    }

    fn int(&mut self) -> Result<i64, CwError> {
        let start = self.pos;
        if self.toks.get(self.pos) == Some(&'-') {
            self.pos += 1;
        }
        while self.pos < self.toks.len() && self.toks[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s: String = self.toks[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err())
    }

    fn expr(&mut self) -> Result<SpaceExpr, CwError> {
        match self.word().as_str() {
            "pt" => Ok(SpaceExpr::Sphere(0, 0)),
            "S" => {
                self.eat('(')?;
                let p = self.int()?;
                self.eat(',')?;
                let q = self.int()?;
                self.eat(')')?;
                Ok(SpaceExpr::Sphere(p, q))
            }
            "orbit" => {
                self.eat('(')?;
                let e = self.expr()?;
                self.eat(')')?;
                Ok(SpaceExpr::Orbit(Box::new(e)))
            }
            "smash" => {
                self.eat('(')?;
                let a = self.expr()?;
                self.eat(',')?;
                let b = self.expr()?;
                self.eat(')')?;
                Ok(SpaceExpr::Smash(Box::new(a), Box::new(b)))
            }
            _ => Err(self.err()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::FGAbelianGroup;

    fn reduced_homology(c: &IntChainComplex) -> Vec<String> {
        c.degrees().map(|n| c.homology_group(n).to_string()).collect()
    }

    #[test]
    fn small_spheres() {
        let s11 = CWZ2::sphere(1, 1).unwrap();
        assert_eq!(s11.cell_counts(0), (1, 0));
        assert_eq!(s11.cell_counts(1), (0, 1));
        let s10 = CWZ2::sphere(1, 0).unwrap();
        assert_eq!(s10.cell_counts(0), (0, 0));
        assert_eq!(s10.cell_counts(1), (1, 0));
        let s22 = CWZ2::sphere(2, 2).unwrap();
        assert_eq!(s22.cell_counts(0), (1, 0));
        assert_eq!(s22.cell_counts(1), (0, 2));
        assert_eq!(s22.cell_counts(2), (0, 2));
        assert!(CWZ2::sphere(1, 2).is_err());
        assert!(CWZ2::sphere(-1, 0).is_err());
    }

    #[test]
    fn smash_unit() {
        let x = CWZ2::sphere(2, 1).unwrap();
        let y = smash(&x, &CWZ2::s0());
        assert_eq!(x, y);
    }

    #[test]
    fn two_trivial_circles() {
        let x = smash(&CWZ2::s10(), &CWZ2::s10());
        assert_eq!(reduced_homology(&x.underlying_chains()), vec!["0", "0", "Z"]);
    }

    #[test]
    fn quotients() {
        let q = CWZ2::sphere(2, 2).unwrap().quotient();
        assert_eq!(reduced_homology(&q), vec!["0", "0", "Z"]);
        let q = CWZ2::sphere(3, 3).unwrap().quotient();
        assert_eq!(q.homology_group(2), FGAbelianGroup::cyclic(2));
        assert!(q.homology_group(3).is_zero());
        let s = CWZ2::sphere(3, 0).unwrap();
        assert_eq!(s.quotient(), s.underlying_chains());
        let o = orbit_plus(&CWZ2::s0()).quotient();
        assert_eq!(reduced_homology(&o), vec!["Z"]);
    }

    #[test]
    fn fixed_points_of_spheres() {
        for (p, q) in [(3, 1), (4, 4), (5, 2)] {
            let f = CWZ2::sphere(p, q).unwrap().fixed_chains();
            for n in 0..=p {
                let expect = if n == p - q { "Z" } else { "0" };
                assert_eq!(f.homology_group(n).to_string(), expect, "S({p},{q}) degree {n}");
            }
        }
    }

    #[test]
    fn orbit_is_free() {
        let o = orbit_plus(&CWZ2::sphere(2, 1).unwrap());
        assert!(o.is_free_everywhere_but_basepoint());
        assert_eq!(orbit_plus(&CWZ2::s0()).cell_counts(0), (0, 1));
    }

    #[test]
    fn invariants_rejected() {
        let mut x = CWZ2::s11();
        x.cells[2].boundary = vec![(1, 1)];
        assert!(matches!(x.validate(), Err(CwError::TauBoundary(_))));
        let mut x = CWZ2::s10();
        x.cells[1].sign = -1;
        assert!(x.validate().is_err());
    }

    #[test]
    fn expressions() {
        let e = SpaceExpr::parse("smash(S(2,1), orbit(pt))").unwrap();
        assert_eq!(e.to_string(), "smash(S(2,1),orbit(S(0,0)))");
        assert!(e.build().is_ok());
        assert!(SpaceExpr::parse("S(1,").is_err());
        assert!(SpaceExpr::parse("T(1,1)").is_err());
    }

    #[test]
    fn maps() {
        let f = CellularMap::orbit_projection();
        let g = f.smash_left(&CWZ2::sphere(2, 2).unwrap());
        assert_eq!(g.source.num_cells(), 1 + 2 * 9);
        let x = CWZ2::orbit_s0();
        let swap_only_one = CellularMap::new(x.clone(), x, vec![vec![(0, 1)], vec![(1, 1)], vec![(1, 1)]]);
        assert!(matches!(swap_only_one, Err(CwError::MapNotEquivariant(_))));
    }
}
