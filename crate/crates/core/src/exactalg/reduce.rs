//! Gaussian elimination of unit pairs in a chain complex.
//!
//! Produces a small homotopy equivalent complex together with the
//! projection and inclusion chain maps, so homology classes of large sparse
//! complexes can be lifted and identified cheaply.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::complex::{Homology, IntChainComplex};
use super::group::GroupHom;
use super::matrix::IntMatrix;

type SparseVec = BTreeMap<usize, BigInt>;

#[derive(Clone, Debug)]
struct Elimination {
    src: i64,
    tgt: i64,
    a: usize,
    b: usize,
    eps: BigInt,
    col_b: Vec<(usize, BigInt)>,
    row_a: Vec<(usize, BigInt)>,
}

/// A complex with all unit pairs cancelled, plus the maps back and forth.
#[derive(Clone, Debug)]
pub struct ReducedComplex {
    pub small: IntChainComplex,
    ops: Vec<Elimination>,
    live: BTreeMap<i64, Vec<usize>>,
    ranks: BTreeMap<i64, usize>,
}

struct Work {
    step: i64,
    cols: BTreeMap<i64, BTreeMap<usize, SparseVec>>,
    rows: BTreeMap<i64, BTreeMap<usize, BTreeSet<usize>>>,
    live: BTreeMap<i64, BTreeSet<usize>>,
}

impl Work {
    fn entry(&mut self, src: i64, y: usize, x: usize, delta: &BigInt) {
        let tgt = src + self.step;
        let col = self.cols.entry(src).or_default().entry(y).or_default();
        let e = col.entry(x).or_default();
        *e += delta;
        if e.is_zero() {
            col.remove(&x);
            if let Some(r) = self.rows.get_mut(&tgt).and_then(|r| r.get_mut(&x)) {
                r.remove(&y);
            }
        } else {
            self.rows.entry(tgt).or_default().entry(x).or_default().insert(y);
        }
    }

    fn pick(&self, src: i64, b: usize) -> Option<(usize, BigInt)> {
        let tgt = src + self.step;
        let col = self.cols.get(&src)?.get(&b)?;
        col.iter()
            .filter(|(_, v)| v.abs().is_one())
            .min_by_key(|(x, _)| (self.rows.get(&tgt).and_then(|r| r.get(*x)).map_or(0, BTreeSet::len), **x))
            .map(|(x, v)| (*x, v.clone()))
    }

    fn eliminate(&mut self, src: i64, b: usize, a: usize, eps: BigInt) -> Elimination {
        let step = self.step;
        let tgt = src + step;
        let col_b: Vec<(usize, BigInt)> = self.cols[&src][&b].iter().map(|(x, v)| (*x, v.clone())).collect();
        let users: Vec<usize> = self.rows[&tgt][&a].iter().copied().filter(|y| *y != b).collect();
        let row_a: Vec<(usize, BigInt)> = users.iter().map(|y| (*y, self.cols[&src][y][&a].clone())).collect();
        for (y, c) in &row_a {
            let factor = c * &eps;
            for (x, v) in &col_b {
                self.entry(src, *y, *x, &(-(&factor * v)));
            }
        }
        // drop b
        if let Some(col) = self.cols.get_mut(&src).and_then(|c| c.remove(&b)) {
            for x in col.keys() {
                if let Some(r) = self.rows.get_mut(&tgt).and_then(|r| r.get_mut(x)) {
                    r.remove(&b);
                }
            }
        }
        if let Some(zs) = self.rows.get_mut(&src).and_then(|r| r.remove(&b)) {
            for z in zs {
                if let Some(col) = self.cols.get_mut(&(src - step)).and_then(|c| c.get_mut(&z)) {
                    col.remove(&b);
                }
            }
        }
        self.live.get_mut(&src).expect("live degree").remove(&b);
        // drop a
        if let Some(col) = self.cols.get_mut(&tgt).and_then(|c| c.remove(&a)) {
            for w in col.keys() {
                if let Some(r) = self.rows.get_mut(&(tgt + step)).and_then(|r| r.get_mut(w)) {
                    r.remove(&a);
                }
            }
        }
        if let Some(r) = self.rows.get_mut(&tgt) {
            r.remove(&a);
        }
        self.live.get_mut(&tgt).expect("live degree").remove(&a);
        Elimination {
            src,
            tgt,
            a,
            b,
            eps,
            col_b,
            row_a,
        }
    }
}

impl ReducedComplex {
    pub fn new(c: &IntChainComplex) -> Self {
        let step = c.direction().step();
        let mut work = Work {
            step,
            cols: BTreeMap::new(),
            rows: BTreeMap::new(),
            live: BTreeMap::new(),
        };
        let mut ranks = BTreeMap::new();
        for d in c.degrees() {
            ranks.insert(d, c.rank(d));
            work.live.insert(d, (0..c.rank(d)).collect());
            let m = c.out_map(d);
            let cols = work.cols.entry(d).or_default();
            for y in 0..m.cols() {
                cols.insert(y, SparseVec::new());
            }
            for x in 0..m.rows() {
                for (y, v) in m.row_entries(x) {
                    work.cols.get_mut(&d).unwrap().get_mut(&y).unwrap().insert(x, v.clone());
                    work.rows.entry(d + step).or_default().entry(x).or_default().insert(y);
                }
            }
        }
        let mut ops = Vec::new();
        loop {
            let mut progressed = false;
            for src in c.degrees() {
                let bs: Vec<usize> = work.live[&src].iter().copied().collect();
                for b in bs {
                    if !work.live[&src].contains(&b) {
                        continue;
                    }
                    if let Some((a, eps)) = work.pick(src, b) {
                        ops.push(work.eliminate(src, b, a, eps));
                        progressed = true;
                    }
                }
            }
            if !progressed {
                break;
            }
        }
        let live: BTreeMap<i64, Vec<usize>> = work.live.iter().map(|(d, s)| (*d, s.iter().copied().collect())).collect();
        let small_ranks: Vec<usize> = c.degrees().map(|d| live[&d].len()).collect();
        let diffs = c
            .degrees()
            .map(|d| {
                let t = d + step;
                let tgt_live = live.get(&t).cloned().unwrap_or_default();
                let pos: BTreeMap<usize, usize> = tgt_live.iter().enumerate().map(|(k, x)| (*x, k)).collect();
                let mut m = IntMatrix::zeros(tgt_live.len(), live[&d].len());
                for (j, y) in live[&d].iter().enumerate() {
                    for (x, v) in &work.cols[&d][y] {
                        m.set(pos[x], j, v.clone());
                    }
                }
                m
            })
            .collect();
        let small = IntChainComplex::new(c.direction(), c.lowest(), small_ranks, diffs).expect("reduction preserves d² = 0");
        ReducedComplex { small, ops, live, ranks }
    }

    fn rank(&self, d: i64) -> usize {
        self.ranks.get(&d).copied().unwrap_or(0)
    }

    /// Projection of an original chain in degree `d` to the small complex.
    pub fn project(&self, d: i64, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rank(d), "vector length mismatch");
        let mut x: SparseVec = v.iter().enumerate().filter(|(_, e)| !e.is_zero()).map(|(i, e)| (i, e.clone())).collect();
        for op in &self.ops {
            if op.tgt == d {
                if let Some(xa) = x.get(&op.a).cloned() {
                    let f = &xa * &op.eps;
                    for (k, w) in &op.col_b {
                        let e = x.entry(*k).or_default();
                        *e -= &f * w;
                        if e.is_zero() {
                            x.remove(k);
                        }
                    }
                }
            } else if op.src == d {
                x.remove(&op.b);
            }
        }
        let live = self.live.get(&d).cloned().unwrap_or_default();
        live.iter().map(|i| x.get(i).cloned().unwrap_or_default()).collect()
    }

    /// Inclusion of a small-complex chain in degree `d` into the original.
    pub fn include(&self, d: i64, v: &[BigInt]) -> Vec<BigInt> {
        let live = self.live.get(&d).cloned().unwrap_or_default();
        assert_eq!(v.len(), live.len(), "vector length mismatch");
        let mut y: SparseVec = live.iter().zip(v).filter(|(_, e)| !e.is_zero()).map(|(i, e)| (*i, e.clone())).collect();
        for op in self.ops.iter().rev() {
            if op.src != d {
                continue;
            }
            let mut s = BigInt::zero();
            for (k, c) in &op.row_a {
                if let Some(e) = y.get(k) {
                    s += c * e;
                }
            }
            if !s.is_zero() {
                y.insert(op.b, -(&op.eps * s));
            }
        }
        let mut out = vec![BigInt::zero(); self.rank(d)];
        for (i, e) in y {
            out[i] = e;
        }
        out
    }

    pub fn homology_at(&self, n: i64) -> Homology {
        self.small.homology_at(n)
    }
}

/// Map on homology induced by a chain-level matrix between two reduced complexes.
pub fn induced_between_reduced(source: &ReducedComplex, target: &ReducedComplex, n: i64, f: &IntMatrix) -> GroupHom {
    let hs = source.homology_at(n);
    let ht = target.homology_at(n);
    let g = hs.group();
    let mut m = IntMatrix::zeros(ht.group().ngens(), g.ngens());
    for j in 0..g.ngens() {
        let lifted = source.include(n, &hs.sq.lift(j));
        let image = target.project(n, &f.apply(&lifted));
        let c = ht.sq.coords(&image).expect("chain map sends cycles to cycles");
        for (i, v) in c.into_iter().enumerate() {
            m.set(i, j, v);
        }
    }
    GroupHom::new(g.clone(), ht.group().clone(), m).expect("induced maps are well defined")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ChainMap;

    fn rp(n: usize) -> IntChainComplex {
        let b = (1..=n)
            .map(|k| IntMatrix::from_rows(&[vec![if k % 2 == 0 { 2 } else { 0 }]]))
            .collect();
        IntChainComplex::from_boundaries(b).unwrap()
    }

    #[test]
    fn reduction_keeps_homology() {
        let c = IntChainComplex::from_boundaries(vec![
            IntMatrix::from_rows(&[vec![1, 1, 0], vec![-1, 0, 1], vec![0, -1, -1]]),
            IntMatrix::from_rows(&[vec![1], vec![-1], vec![1]]),
        ])
        .unwrap();
        let r = ReducedComplex::new(&c);
        for n in c.degrees() {
            assert_eq!(r.homology_at(n).group(), c.homology_at(n).group());
        }
        assert!(r.small.rank(1) + r.small.rank(2) < c.rank(1) + c.rank(2));
    }

    #[test]
    fn project_after_include_is_identity() {
        let c = IntChainComplex::from_boundaries(vec![
            IntMatrix::from_rows(&[vec![1, 1, 0], vec![-1, 0, 1], vec![0, -1, -1]]),
            IntMatrix::from_rows(&[vec![1], vec![-1], vec![1]]),
        ])
        .unwrap();
        let r = ReducedComplex::new(&c);
        for n in c.degrees() {
            for j in 0..r.small.rank(n) {
                let mut e = vec![BigInt::zero(); r.small.rank(n)];
                e[j] = BigInt::one();
                assert_eq!(r.project(n, &r.include(n, &e)), e);
            }
        }
    }

    #[test]
    fn induced_identity_through_reduction() {
        let c = rp(4);
        let r = ReducedComplex::new(&c);
        let id = ChainMap::identity(&c);
        for n in c.degrees() {
            let h = induced_between_reduced(&r, &r, n, &id.at(n));
            assert!(h.is_isomorphism());
        }
    }
}
