use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Result of a Smith normal form computation: `u * m * v == s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Nonzero diagonal entries of `s` in order; these form a divisibility chain.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.s.rows().min(self.s.cols());
        (0..k)
            .map(|i| self.s.get(i, i))
            .take_while(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().len()
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    track: bool,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            if self.track {
                self.u.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in self.a.iter_mut() {
                r.swap(i, j);
            }
            if self.track {
                for r in self.v.iter_mut() {
                    r.swap(i, j);
                }
            }
        }
    }

    /// row_dst += c * row_src
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let (d, s) = two_mut(&mut self.a, dst, src);
        for (x, y) in d.iter_mut().zip(s.iter()) {
            if !y.is_zero() {
                *x += c * y;
            }
        }
        if self.track {
            let (d, s) = two_mut(&mut self.u, dst, src);
            for (x, y) in d.iter_mut().zip(s.iter()) {
                if !y.is_zero() {
                    *x += c * y;
                }
            }
        }
    }

    /// col_dst += c * col_src
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for r in self.a.iter_mut() {
            if !r[src].is_zero() {
                let t = c * &r[src];
                r[dst] += t;
            }
        }
        if self.track {
            for r in self.v.iter_mut() {
                if !r[src].is_zero() {
                    let t = c * &r[src];
                    r[dst] += t;
                }
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -std::mem::take(x);
        }
        if self.track {
            for x in self.u[i].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
    }
}

fn two_mut<T>(v: &mut [T], i: usize, j: usize) -> (&mut T, &T) {
    assert_ne!(i, j);
    if i < j {
        let (lo, hi) = v.split_at_mut(j);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(i);
        (&mut hi[0], &lo[j])
    }
}

fn dense_identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

fn reduce(work: &mut Work) {
    let rows = work.a.len();
    let cols = work.a.first().map_or(0, |r| r.len());
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero |entry| in the trailing block, first in row-major order
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let e = &work.a[i][j];
                    if e.is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => e.abs() < work.a[bi][bj].abs(),
                    };
                    if better {
                        best = Some((i, j));
                        if e.abs().is_one() {
                            break;
                        }
                    }
                }
                if let Some((bi, bj)) = best {
                    if work.a[bi][bj].abs().is_one() {
                        break;
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return;
            };
            work.swap_rows(t, pi);
            work.swap_cols(t, pj);

            let pivot = work.a[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if work.a[i][t].is_zero() {
                    continue;
                }
                let q = work.a[i][t].div_floor(&pivot);
                work.add_row(i, t, &-q);
                if !work.a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if work.a[t][j].is_zero() {
                    continue;
                }
                let q = work.a[t][j].div_floor(&pivot);
                work.add_col(j, t, &-q);
                if !work.a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !work.a[i][j].is_zero() && !work.a[i][j].is_multiple_of(&pivot) {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => work.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if work.a[t][t].is_negative() {
            work.negate_row(t);
        }
    }
}

/// Smith normal form with unimodular transforms. Deterministic for a fixed input.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let mut work = Work {
        a: m.to_dense(),
        u: dense_identity(m.rows()),
        v: dense_identity(m.cols()),
        track: true,
    };
    reduce(&mut work);
    Snf {
        u: IntMatrix::from_big_rows(&work.u, m.rows()),
        s: IntMatrix::from_big_rows(&work.a, m.cols()),
        v: IntMatrix::from_big_rows(&work.v, m.cols()),
    }
}

/// Invariant factors without transforms: `(rank, nonzero diagonal)`.
///
/// Unit pivots are eliminated on the sparse representation first, which
/// leaves a small dense remainder for the full reduction.
pub fn invariant_factors(m: &IntMatrix) -> (usize, Vec<BigInt>) {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = (0..m.rows())
        .map(|i| m.row_entries(i).map(|(j, v)| (j, v.clone())).collect())
        .collect();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols()];
    for (i, r) in rows.iter().enumerate() {
        for j in r.keys() {
            col_rows[*j].insert(i);
        }
    }
    let mut alive = vec![true; m.rows()];
    let mut unit_pivots = 0usize;

    loop {
        let mut progressed = false;
        for i in 0..rows.len() {
            if !alive[i] {
                continue;
            }
            let pick = rows[i]
                .iter()
                .filter(|(_, v)| v.abs().is_one())
                .min_by_key(|(j, _)| (col_rows[**j].len(), **j))
                .map(|(j, v)| (*j, v.clone()));
            let Some((j, pv)) = pick else { continue };
            let pivot_row = rows[i].clone();
            let others: Vec<usize> = col_rows[j].iter().copied().filter(|k| *k != i).collect();
            for k in others {
                // row_k -= (a_kj / pv) * row_i ; pv is a unit so a_kj * pv is exact
                let factor = &rows[k][&j] * &pv;
                for (c, v) in &pivot_row {
                    let e = rows[k].entry(*c).or_default();
                    *e -= &factor * v;
                    if e.is_zero() {
                        rows[k].remove(c);
                        col_rows[*c].remove(&k);
                    } else {
                        col_rows[*c].insert(k);
                    }
                }
            }
            for c in pivot_row.keys() {
                col_rows[*c].remove(&i);
            }
            rows[i].clear();
            alive[i] = false;
            unit_pivots += 1;
            progressed = true;
        }
        if !progressed {
            break;
        }
    }

    let live_rows: Vec<usize> = (0..rows.len()).filter(|i| !rows[*i].is_empty()).collect();
    let live_cols: Vec<usize> = (0..col_rows.len()).filter(|j| !col_rows[*j].is_empty()).collect();
    let mut rest = IntMatrix::zeros(live_rows.len(), live_cols.len());
    let col_pos: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(n, o)| (*o, n)).collect();
    for (ni, oi) in live_rows.iter().enumerate() {
        for (c, v) in &rows[*oi] {
            rest.set(ni, col_pos[c], v.clone());
        }
    }
    let mut work = Work {
        a: rest.to_dense(),
        u: Vec::new(),
        v: Vec::new(),
        track: false,
    };
    reduce(&mut work);
    let k = live_rows.len().min(live_cols.len());
    let mut diag: Vec<BigInt> = vec![BigInt::one(); unit_pivots];
    diag.extend((0..k).map(|i| work.a[i][i].clone()).take_while(|d| !d.is_zero()));
    (diag.len(), diag)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> Snf {
        let snf = smith_normal_form(m);
        assert_eq!(&(&snf.u * m) * &snf.v, snf.s);
        assert!(snf.u.determinant().abs().is_one());
        assert!(snf.v.determinant().abs().is_one());
        let d = snf.diagonal();
        for w in d.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        snf
    }

    #[test]
    fn identity_is_fixed() {
        let i3 = IntMatrix::identity(3);
        let snf = check(&i3);
        assert_eq!(snf.u, i3);
        assert_eq!(snf.s, i3);
        assert_eq!(snf.v, i3);
    }

    #[test]
    fn two_by_two_example() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let snf = check(&m);
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn zero_matrix() {
        let snf = check(&IntMatrix::from_rows(&[vec![0]]));
        assert_eq!(snf.s, IntMatrix::from_rows(&[vec![0]]));
        assert_eq!(snf.rank(), 0);
    }

    #[test]
    fn fast_path_agrees() {
        let m = IntMatrix::from_rows(&[
            vec![1, 2, 0, 3],
            vec![2, 4, 6, 6],
            vec![0, 0, 4, 0],
            vec![1, 0, 0, 1],
        ]);
        let snf = check(&m);
        let (rank, diag) = invariant_factors(&m);
        assert_eq!(rank, snf.rank());
        assert_eq!(diag, snf.diagonal());
    }

    #[test]
    fn empty_shapes() {
        let m = IntMatrix::zeros(0, 3);
        let snf = check(&m);
        assert_eq!(snf.rank(), 0);
        assert_eq!(invariant_factors(&IntMatrix::zeros(2, 0)), (0, vec![]));
    }
}
