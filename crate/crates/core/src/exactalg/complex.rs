use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::group::{FGAbelianGroup, GroupHom, Subquotient};
use super::lattice::kernel_basis;
use super::matrix::IntMatrix;
use super::snf::invariant_factors;
use super::AlgebraError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// differentials lower degree by one
    Homological,
    /// differentials raise degree by one
    Cohomological,
}

impl Direction {
    pub fn step(self) -> i64 {
        match self {
            Direction::Homological => -1,
            Direction::Cohomological => 1,
        }
    }
}

/// A bounded complex of free abelian groups `Z^{r_n}` with integer
/// differentials, supported in degrees `lowest .. lowest + ranks.len()`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntChainComplex {
    direction: Direction,
    lowest: i64,
    ranks: Vec<usize>,
    diffs: Vec<IntMatrix>,
}

impl IntChainComplex {
    /// `diffs[i]` is the differential leaving degree `lowest + i`; its shape
    /// is `rank(target) × rank(lowest + i)`.
    pub fn new(direction: Direction, lowest: i64, ranks: Vec<usize>, diffs: Vec<IntMatrix>) -> Result<Self, AlgebraError> {
        if diffs.len() != ranks.len() {
            return Err(AlgebraError::ShapeMismatch {
                expected: (ranks.len(), 0),
                found: (diffs.len(), 0),
            });
        }
        let c = IntChainComplex {
            direction,
            lowest,
            ranks,
            diffs,
        };
        for (i, d) in c.diffs.iter().enumerate() {
            let n = c.lowest + i as i64;
            let expected = (c.rank(n + direction.step()), c.rank(n));
            if (d.rows(), d.cols()) != expected {
                return Err(AlgebraError::ShapeMismatch {
                    expected,
                    found: (d.rows(), d.cols()),
                });
            }
        }
        for i in 0..c.diffs.len() {
            let n = c.lowest + i as i64;
            let next = c.out_map(n + direction.step());
            if !(&next * &c.diffs[i]).is_zero() {
                return Err(AlgebraError::NotAComplex { degree: n });
            }
        }
        Ok(c)
    }

    /// Homological complex from boundary maps `∂_n` for `n = 1..=k`, with
    /// ranks inferred from the shapes.
    pub fn from_boundaries(boundaries: Vec<IntMatrix>) -> Result<Self, AlgebraError> {
        let mut ranks = Vec::new();
        if let Some(first) = boundaries.first() {
            ranks.push(first.rows());
        } else {
            ranks.push(0);
        }
        for b in &boundaries {
            ranks.push(b.cols());
        }
        let mut diffs = vec![IntMatrix::zeros(0, ranks[0])];
        diffs.extend(boundaries);
        Self::new(Direction::Homological, 0, ranks, diffs)
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn lowest(&self) -> i64 {
        self.lowest
    }

    pub fn highest(&self) -> i64 {
        self.lowest + self.ranks.len() as i64 - 1
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.lowest..=self.highest()
    }

    pub fn rank(&self, n: i64) -> usize {
        self.index(n).map_or(0, |i| self.ranks[i])
    }

    fn index(&self, n: i64) -> Option<usize> {
        let i = n - self.lowest;
        (i >= 0 && (i as usize) < self.ranks.len()).then_some(i as usize)
    }

    /// Differential leaving degree `n`.
    pub fn out_map(&self, n: i64) -> IntMatrix {
        match self.index(n) {
            Some(i) => self.diffs[i].clone(),
            None => IntMatrix::zeros(self.rank(n + self.direction.step()), 0),
        }
    }

    /// Differential arriving in degree `n`.
    pub fn in_map(&self, n: i64) -> IntMatrix {
        let src = n - self.direction.step();
        match self.index(src) {
            Some(i) => self.diffs[i].clone(),
            None => IntMatrix::zeros(self.rank(n), 0),
        }
    }

    /// Cycles modulo boundaries in degree `n`, with generator lifts.
    pub fn homology_at(&self, n: i64) -> Homology {
        let rank = self.rank(n);
        let out = self.out_map(n);
        let lattice = if out.is_zero() {
            IntMatrix::identity(rank)
        } else {
            kernel_basis(&out)
        };
        let sq = Subquotient::new(lattice, &self.in_map(n)).expect("boundaries are cycles");
        Homology { degree: n, sq }
    }

    /// Homology group only; avoids transforms and scales to large complexes.
    pub fn homology_group(&self, n: i64) -> FGAbelianGroup {
        let rank = self.rank(n);
        if rank == 0 {
            return FGAbelianGroup::zero();
        }
        let (rank_out, _) = invariant_factors(&self.out_map(n));
        let (rank_in, diag) = invariant_factors(&self.in_map(n));
        let torsion: Vec<BigInt> = diag.into_iter().filter(|d| *d > BigInt::from(1)).collect();
        FGAbelianGroup::new(rank - rank_out - rank_in, torsion).expect("invariant factors form a chain")
    }

    /// Euler characteristic of the chain groups.
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|n| sign(n) * self.rank(n) as i64).sum()
    }

    /// Applies a change of basis `P_n` in every degree: `d' = P_{n±1} d P_n^{-1}`.
    pub fn conjugate(&self, bases: &BTreeMap<i64, (IntMatrix, IntMatrix)>) -> Result<Self, AlgebraError> {
        let ident = |n: i64| (IntMatrix::identity(self.rank(n)), IntMatrix::identity(self.rank(n)));
        let diffs = self
            .degrees()
            .map(|n| {
                let t = n + self.direction.step();
                let (p_t, _) = bases.get(&t).cloned().unwrap_or_else(|| ident(t));
                let (_, pinv_n) = bases.get(&n).cloned().unwrap_or_else(|| ident(n));
                &(&p_t * &self.out_map(n)) * &pinv_n
            })
            .collect();
        Self::new(self.direction, self.lowest, self.ranks.clone(), diffs)
    }
}

fn sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Homology in one degree together with the subquotient data.
#[derive(Clone, Debug)]
pub struct Homology {
    pub degree: i64,
    pub sq: Subquotient,
}

impl Homology {
    pub fn group(&self) -> &FGAbelianGroup {
        &self.sq.group
    }
}

/// Degree-preserving chain map; `maps[n]` has shape
/// `target.rank(n) × source.rank(n)`. Missing degrees are zero.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: IntChainComplex,
    pub target: IntChainComplex,
    maps: BTreeMap<i64, IntMatrix>,
}

impl ChainMap {
    pub fn new(source: IntChainComplex, target: IntChainComplex, maps: BTreeMap<i64, IntMatrix>) -> Result<Self, AlgebraError> {
        if source.direction != target.direction {
            return Err(AlgebraError::ShapeMismatch {
                expected: (0, 0),
                found: (1, 1),
            });
        }
        let f = ChainMap { source, target, maps };
        let lo = f.source.lowest.min(f.target.lowest);
        let hi = f.source.highest().max(f.target.highest());
        for n in lo..=hi {
            let m = f.at(n);
            let expected = (f.target.rank(n), f.source.rank(n));
            if (m.rows(), m.cols()) != expected {
                return Err(AlgebraError::ShapeMismatch {
                    expected,
                    found: (m.rows(), m.cols()),
                });
            }
            let t = n + f.source.direction.step();
            if &f.target.out_map(n) * &m != &f.at(t) * &f.source.out_map(n) {
                return Err(AlgebraError::NonCommuting { degree: n });
            }
        }
        Ok(f)
    }

    pub fn identity(c: &IntChainComplex) -> Self {
        let maps = c.degrees().map(|n| (n, IntMatrix::identity(c.rank(n)))).collect();
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            maps,
        }
    }

    pub fn at(&self, n: i64) -> IntMatrix {
        self.maps
            .get(&n)
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(self.target.rank(n), self.source.rank(n)))
    }

    pub fn induced_on_homology(&self, n: i64) -> GroupHom {
        let hs = self.source.homology_at(n);
        let ht = self.target.homology_at(n);
        induced_between(&hs, &ht, &self.at(n))
    }

    /// Cone with `C_n = B_n ⊕ A_{n+s}` (`s` the direction step) and
    /// `d(b, a) = (d b + f a, -d a)`.
    pub fn mapping_cone(&self) -> IntChainComplex {
        let s = self.source.direction.step();
        let a = &self.source;
        let b = &self.target;
        let lo = b.lowest.min(a.lowest - s).min(a.highest() - s);
        let hi = b.highest().max(a.highest() - s).max(a.lowest - s);
        let rank = |n: i64| b.rank(n) + a.rank(n + s);
        let ranks: Vec<usize> = (lo..=hi).map(rank).collect();
        let minus_one = BigInt::from(-1);
        let diffs = (lo..=hi)
            .map(|n| {
                let t = n + s;
                let mut d = IntMatrix::zeros(rank(t), rank(n));
                let db = b.out_map(n);
                let f = self.at(n + s);
                let da = a.out_map(n + s);
                for i in 0..db.rows() {
                    for (j, v) in db.row_entries(i) {
                        d.set(i, j, v.clone());
                    }
                }
                for i in 0..f.rows() {
                    for (j, v) in f.row_entries(i) {
                        d.set(i, b.rank(n) + j, v.clone());
                    }
                }
                for i in 0..da.rows() {
                    for (j, v) in da.row_entries(i) {
                        d.set(b.rank(t) + i, b.rank(n) + j, v * &minus_one);
                    }
                }
                d
            })
            .collect();
        IntChainComplex::new(a.direction, lo, ranks, diffs).expect("cone of a chain map is a complex")
    }
}

/// Map on homology induced by a chain-level matrix between two computed
/// homology groups. The matrix must carry cycles to cycles.
pub fn induced_between(source: &Homology, target: &Homology, f: &IntMatrix) -> GroupHom {
    let g = source.group();
    let mut m = IntMatrix::zeros(target.group().ngens(), g.ngens());
    for j in 0..g.ngens() {
        let image = f.apply(&source.sq.lift(j));
        let c = target.sq.coords(&image).expect("chain map sends cycles to cycles");
        for (i, v) in c.into_iter().enumerate() {
            if !v.is_zero() {
                m.set(i, j, v);
            }
        }
    }
    GroupHom::new(g.clone(), target.group().clone(), m).expect("induced maps are well defined")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp2() -> IntChainComplex {
        IntChainComplex::from_boundaries(vec![IntMatrix::from_rows(&[vec![0]]), IntMatrix::from_rows(&[vec![2]])]).unwrap()
    }

    fn circle() -> IntChainComplex {
        IntChainComplex::from_boundaries(vec![IntMatrix::from_rows(&[vec![0]])]).unwrap()
    }

    #[test]
    fn rp2_homology() {
        let c = rp2();
        assert_eq!(c.homology_at(0).group().to_string(), "Z");
        assert_eq!(c.homology_at(1).group().to_string(), "Z/2");
        assert_eq!(c.homology_at(2).group().to_string(), "0");
        assert_eq!(c.homology_at(7).group().to_string(), "0");
        for n in -1..4 {
            assert_eq!(c.homology_group(n), *c.homology_at(n).group());
        }
    }

    #[test]
    fn circle_and_point() {
        let c = circle();
        assert_eq!(c.homology_at(0).group(), &FGAbelianGroup::z());
        assert_eq!(c.homology_at(1).group(), &FGAbelianGroup::z());
        let pt = IntChainComplex::from_boundaries(vec![]).unwrap();
        assert_eq!(pt.rank(0), 0);
        let pt = IntChainComplex::new(Direction::Homological, 0, vec![1], vec![IntMatrix::zeros(0, 1)]).unwrap();
        assert_eq!(pt.homology_at(0).group(), &FGAbelianGroup::z());
        assert!(pt.homology_at(1).group().is_zero());
    }

    #[test]
    fn d_squared_rejected() {
        let bad = IntChainComplex::from_boundaries(vec![IntMatrix::from_rows(&[vec![1]]), IntMatrix::from_rows(&[vec![1]])]);
        assert!(matches!(bad, Err(AlgebraError::NotAComplex { degree: 2 })));
    }

    #[test]
    fn identity_and_degree_two() {
        let c = circle();
        let id = ChainMap::identity(&c);
        assert_eq!(id.induced_on_homology(1), GroupHom::identity(&FGAbelianGroup::z()));
        let maps = BTreeMap::from([(0, IntMatrix::identity(1)), (1, IntMatrix::from_rows(&[vec![2]]))]);
        let f = ChainMap::new(c.clone(), c, maps).unwrap();
        assert!(f.induced_on_homology(1).is_multiplication_by(2));
    }

    #[test]
    fn non_commuting_rejected() {
        let c = rp2();
        let maps = BTreeMap::from([(1, IntMatrix::identity(1))]);
        assert!(matches!(ChainMap::new(c.clone(), c, maps), Err(AlgebraError::NonCommuting { .. })));
    }

    #[test]
    fn fold_map_on_reduced_h0() {
        // two points over one point, reduced via the augmentation: the fold
        // is the sum map Z^2 -> Z; composed with its transpose it is x2
        let two = IntChainComplex::new(Direction::Homological, 0, vec![2], vec![IntMatrix::zeros(0, 2)]).unwrap();
        let pt = IntChainComplex::new(Direction::Homological, 0, vec![1], vec![IntMatrix::zeros(0, 1)]).unwrap();
        let fold = ChainMap::new(two.clone(), pt.clone(), BTreeMap::from([(0, IntMatrix::from_rows(&[vec![1, 1]]))])).unwrap();
        let diag = ChainMap::new(pt, two, BTreeMap::from([(0, IntMatrix::from_rows(&[vec![1], vec![1]]))])).unwrap();
        let h = fold.induced_on_homology(0).compose(&diag.induced_on_homology(0)).unwrap();
        assert!(h.is_multiplication_by(2));
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let c = rp2();
        let cone = ChainMap::identity(&c).mapping_cone();
        for n in cone.degrees() {
            assert!(cone.homology_group(n).is_zero(), "degree {n}");
        }
    }
}
