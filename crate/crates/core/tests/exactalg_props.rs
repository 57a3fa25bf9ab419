use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;

use krss_core::exactalg::{smith_normal_form, unimodular_inverse, ChainMap, Direction, FGAbelianGroup, IntChainComplex, IntMatrix};

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| proptest::collection::vec(-9i64..=9, r * c).prop_map(move |v| IntMatrix::from_rows(&v.chunks(c).map(|x| x.to_vec()).collect::<Vec<_>>())))
}

/// Product of elementary row operations, with its inverse.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> (IntMatrix, IntMatrix) {
    let mut p = IntMatrix::identity(n);
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        let mut e = IntMatrix::identity(n);
        if i == j {
            e.set(i, i, BigInt::from(-1));
        } else {
            e.set(i, j, BigInt::from(c));
        }
        p = &e * &p;
    }
    let inv = unimodular_inverse(&p);
    (p, inv)
}

/// A complex with prescribed homology: in each degree `n` a free part `free[n]`,
/// plus diagonal blocks `B_n → A_{n-1}` with divisors from `{1, 2, 4, 8}`.
#[derive(Clone, Debug)]
struct Model {
    free: Vec<usize>,
    blocks: Vec<Vec<u32>>,
}

impl Model {
    fn complex(&self) -> IntChainComplex {
        let top = self.free.len();
        // degree n: [A_n (targets of d_{n+1}) | B_n (sources of d_n) | F_n]
        let a = |n: usize| if n + 1 < top { self.blocks[n + 1].len() } else { 0 };
        let b = |n: usize| if n >= 1 { self.blocks[n].len() } else { 0 };
        let rank = |n: usize| a(n) + b(n) + self.free[n];
        let diffs = (0..top)
            .map(|n| {
                let rows = if n == 0 { 0 } else { rank(n - 1) };
                let mut d = IntMatrix::zeros(rows, rank(n));
                if n >= 1 {
                    for (i, e) in self.blocks[n].iter().enumerate() {
                        d.set(i, a(n) + i, BigInt::from(2u32.pow(*e)));
                    }
                }
                d
            })
            .collect();
        IntChainComplex::new(Direction::Homological, 0, (0..top).map(rank).collect(), diffs).unwrap()
    }

    fn homology(&self, n: usize) -> FGAbelianGroup {
        let mut t: Vec<BigInt> = if n + 1 < self.free.len() {
            self.blocks[n + 1].iter().filter(|e| **e > 0).map(|e| BigInt::from(2u32.pow(*e))).collect()
        } else {
            Vec::new()
        };
        t.sort();
        FGAbelianGroup::new(self.free[n], t).unwrap()
    }
}

fn model() -> impl Strategy<Value = Model> {
    (2usize..5).prop_flat_map(|top| {
        (
            proptest::collection::vec(0usize..3, top),
            proptest::collection::vec(proptest::collection::vec(0u32..4, 0..3), top),
        )
            .prop_map(|(free, mut blocks)| {
                blocks[0].clear();
                Model { free, blocks }
            })
    })
}

fn ops() -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    proptest::collection::vec((0usize..8, 0usize..8, -3i64..=3), 0..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_a_factorization(m in matrix()) {
        let snf = smith_normal_form(&m);
        prop_assert_eq!(&(&snf.u * &m) * &snf.v, snf.s.clone());
        prop_assert!(snf.u.determinant().abs().is_one());
        prop_assert!(snf.v.determinant().abs().is_one());
        let d = snf.diagonal();
        for w in d.windows(2) {
            prop_assert!((&w[1] % &w[0]) == BigInt::from(0));
        }
        for i in 0..snf.s.rows() {
            for j in 0..snf.s.cols() {
                if i != j {
                    prop_assert_eq!(snf.s.get(i, j), BigInt::from(0));
                }
            }
        }
    }

    #[test]
    fn homology_is_basis_invariant(m in model(), changes in proptest::collection::vec(ops(), 4)) {
        let c = m.complex();
        for n in c.degrees() {
            prop_assert_eq!(c.homology_group(n), m.homology(n as usize));
        }
        let bases: BTreeMap<i64, (IntMatrix, IntMatrix)> = c
            .degrees()
            .filter(|n| c.rank(*n) > 0)
            .map(|n| (n, unimodular(c.rank(n), &changes[n as usize % changes.len()])))
            .collect();
        let conj = c.conjugate(&bases).unwrap();
        for n in c.degrees() {
            prop_assert_eq!(conj.homology_group(n), m.homology(n as usize));
        }
    }

    #[test]
    fn cone_is_euler_additive(m1 in model(), m2 in model(), k in -3i64..=3) {
        let a = m1.complex();
        let b = m2.complex();
        let h_euler = |c: &IntChainComplex| c.degrees().map(|n| if n.rem_euclid(2) == 0 { 1 } else { -1 } * c.homology_group(n).free_rank() as i64).sum::<i64>();

        // zero map: the cone splits as B ⊕ ΣA
        let zero = ChainMap::new(a.clone(), b.clone(), BTreeMap::new()).unwrap();
        let cone = zero.mapping_cone();
        prop_assert_eq!(cone.euler_characteristic(), b.euler_characteristic() - a.euler_characteristic());
        prop_assert_eq!(h_euler(&cone), h_euler(&b) - h_euler(&a));
        for n in cone.degrees() {
            let expected = b.homology_group(n).free_rank() + a.homology_group(n - 1).free_rank();
            prop_assert_eq!(cone.homology_group(n).free_rank(), expected);
            let order = |g: FGAbelianGroup| g.torsion_order();
            prop_assert_eq!(order(cone.homology_group(n)), order(b.homology_group(n)) * order(a.homology_group(n - 1)));
        }

        // multiplication by k on A
        let maps = a.degrees().map(|n| (n, IntMatrix::scalar(a.rank(n), &BigInt::from(k)))).collect();
        let cone = ChainMap::new(a.clone(), a.clone(), maps).unwrap().mapping_cone();
        prop_assert_eq!(cone.euler_characteristic(), 0);
        prop_assert_eq!(h_euler(&cone), 0);
        if k.abs() == 1 {
            prop_assert!(cone.degrees().all(|n| cone.homology_group(n).is_zero()));
        }
    }

    #[test]
    fn nonzero_square_is_rejected(x in 1i64..5) {
        let d1 = IntMatrix::from_rows(&[vec![x]]);
        let d2 = IntMatrix::from_rows(&[vec![1]]);
        prop_assert!(IntChainComplex::from_boundaries(vec![d1, d2]).is_err());
    }
}
