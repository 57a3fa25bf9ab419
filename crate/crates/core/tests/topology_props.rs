use num_bigint::BigInt;
use proptest::prelude::*;

use krss_core::bredon::{chain_complex, cochain_complex, orbit_closed_form, ro_graded, rp_reduced_homology, Site};
use krss_core::equivcw::{orbit_plus, smash, CWZ2};
use krss_core::exactalg::{FGAbelianGroup, IntChainComplex};
use krss_core::mackey::MackeyZ2;

/// Smash of `S^{1,0}` (false) and `S^{1,1}` (true) factors in the given order.
fn word_space(word: &[bool]) -> CWZ2 {
    word.iter().fold(CWZ2::s0(), |x, sign| smash(&x, &if *sign { CWZ2::s11() } else { CWZ2::s10() }))
}

fn word() -> impl Strategy<Value = Vec<bool>> {
    proptest::collection::vec(any::<bool>(), 0..5)
}

fn groups(c: &IntChainComplex) -> Vec<(i64, FGAbelianGroup)> {
    c.degrees().map(|n| (n, c.homology_group(n))).filter(|(_, g)| !g.is_zero()).collect()
}

fn sphere_homology(n: i64) -> Vec<(i64, FGAbelianGroup)> {
    vec![(n, FGAbelianGroup::z())]
}

fn mackey() -> impl Strategy<Value = MackeyZ2> {
    prop_oneof![Just("Z"), Just("Zop"), Just("A")].prop_map(|n| MackeyZ2::named(n).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn smash_words_are_representation_spheres(w in word()) {
        let x = word_space(&w);
        prop_assert!(x.validate().is_ok());
        let p = w.len() as i64;
        let q = w.iter().filter(|s| **s).count() as i64;
        prop_assert_eq!(groups(&x.underlying_chains()), sphere_homology(p));
        prop_assert_eq!(groups(&x.fixed_chains()), sphere_homology(p - q));
        // the orbit space is the (p - q + 1)-fold suspension of RP^{q-1}
        let expected: Vec<(i64, FGAbelianGroup)> = if q == 0 {
            sphere_homology(p)
        } else {
            (0..=p)
                .map(|k| (k, rp_reduced_homology((q - 1) as usize, k - (p - q + 1))))
                .filter(|(_, g)| !g.is_zero())
                .collect()
        };
        prop_assert_eq!(groups(&x.quotient()), expected);
        prop_assert!(orbit_plus(&x).validate().is_ok());
    }

    #[test]
    fn smash_is_symmetric_and_associative(a in word(), b in word(), c in word()) {
        let (x, y, z) = (word_space(&a), word_space(&b), word_space(&c));
        let invariants = |s: &CWZ2| (groups(&s.underlying_chains()), groups(&s.fixed_chains()), groups(&s.quotient()));
        prop_assert_eq!(invariants(&smash(&x, &y)), invariants(&smash(&y, &x)));
        prop_assert_eq!(invariants(&smash(&smash(&x, &y), &z)), invariants(&smash(&x, &smash(&y, &z))));
        let o = orbit_plus(&x);
        prop_assert_eq!(invariants(&smash(&o, &y)), invariants(&smash(&y, &o)));
    }

    #[test]
    fn bredon_complexes_square_to_zero(w in word(), orbit in any::<bool>(), m in mackey()) {
        let x = word_space(&w);
        let x = if orbit { orbit_plus(&x) } else { x };
        prop_assert!(cochain_complex(&x, &m).is_ok());
        prop_assert!(chain_complex(&x, &m).is_ok());
    }

    #[test]
    fn suspension_invariance(p in -6i64..=6, q in -6i64..=0, c in 1i64..=2) {
        let m = MackeyZ2::constant(&FGAbelianGroup::z());
        prop_assume!(q + c <= 0);
        let direct = ro_graded(&Site::Pt, p, q, &m).unwrap();
        let suspended = ro_graded(&Site::Sphere(c, c), p + c, q + c, &m).unwrap();
        prop_assert_eq!(direct.clone(), suspended);
        let via_expr = ro_graded(&Site::parse(&format!("smash(S({c},{c}),S(0,0))")).unwrap(), p + c, q + c, &m).unwrap();
        prop_assert_eq!(direct, via_expr);
    }

    #[test]
    fn orbit_is_z_in_dimension_zero(p in -6i64..=6, q in -6i64..=6) {
        let m = MackeyZ2::constant(&FGAbelianGroup::z());
        let g = ro_graded(&Site::Orbit, p, q, &m).unwrap();
        prop_assert_eq!(g.clone(), orbit_closed_form(p));
        prop_assert_eq!(g == FGAbelianGroup::z(), p == 0);
    }

    #[test]
    fn constant_functors_are_mackey(free in 0usize..3, t in proptest::collection::vec(1u32..4, 0..3)) {
        let mut t: Vec<BigInt> = t.into_iter().map(|e| BigInt::from(2u32.pow(e))).collect();
        t.sort();
        let a = FGAbelianGroup::new(free, t).unwrap();
        let m = MackeyZ2::constant(&a);
        prop_assert!(m.validate().is_ok());
        prop_assert!(m.tr.is_multiplication_by(2));
        prop_assert!(m.res.is_multiplication_by(1));
        prop_assert!(MackeyZ2::constant_op(&a).validate().is_ok());
    }
}
