//! Sublattices of `Z^n` given by generating columns, and exact solving.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::matrix::IntMatrix;
use super::snf::{smith_normal_form, Snf};

/// Basis (as columns) of the integer kernel of `m`.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let idx: Vec<usize> = (r..m.cols()).collect();
    snf.v.select_cols(&idx)
}

/// Basis (as columns) of the lattice spanned by the columns of `gens`.
pub fn span_basis(gens: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(gens);
    let r = snf.rank();
    let gv = gens * &snf.v;
    gv.select_cols(&(0..r).collect::<Vec<_>>())
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(u: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(u);
    debug_assert_eq!(snf.s, IntMatrix::identity(u.rows()), "matrix is not unimodular");
    &snf.v * &snf.u
}

/// A lattice basis together with its Smith form, for repeated exact solves.
#[derive(Clone, Debug)]
pub struct Solver {
    basis: IntMatrix,
    snf: Snf,
    rank: usize,
}

impl Solver {
    pub fn new(basis: IntMatrix) -> Self {
        let snf = smith_normal_form(&basis);
        let rank = snf.rank();
        Solver { basis, snf, rank }
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Some `x` with `basis * x == z`, if one exists. Unique when the basis
    /// columns are independent.
    pub fn solve(&self, z: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.snf.u.apply(z);
        let mut w = vec![BigInt::zero(); self.basis.cols()];
        for (i, yi) in y.iter().enumerate() {
            if i < self.rank {
                let d = self.snf.s.get(i, i);
                let (q, r) = yi.div_rem(&d);
                if !r.is_zero() {
                    return None;
                }
                w[i] = q;
            } else if !yi.is_zero() {
                return None;
            }
        }
        Some(self.snf.v.apply(&w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_row() {
        let m = IntMatrix::from_rows(&[vec![1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 1);
        assert!((&m * &k).is_zero());
    }

    #[test]
    fn non_saturated_solve() {
        let s = Solver::new(IntMatrix::from_rows(&[vec![2]]));
        assert_eq!(s.solve(&[BigInt::from(4)]), Some(vec![BigInt::from(2)]));
        assert_eq!(s.solve(&[BigInt::from(3)]), None);
    }

    #[test]
    fn inverse_round_trip() {
        let u = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(&u * &unimodular_inverse(&u), IntMatrix::identity(2));
    }
}
