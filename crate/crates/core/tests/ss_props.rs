use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;

use krss_core::coeffring::Window;
use krss_core::exactalg::{FGAbelianGroup, GroupHom};
use krss_core::krtower::{build, default_window, Mode, Space, Variant};
use krss_core::ssengine::{adams_action, turn_page, Page, Spot};

/// A page of `Z/2` cells with `d_r` an isomorphism on disjoint pairs.
fn paired_page(r: u32, spots: &BTreeSet<(i64, i64)>, pair: &[bool]) -> (Page, usize) {
    let window = Window::new(-6, 6, -6, 6);
    let z2 = FGAbelianGroup::cyclic(2);
    let mut page = Page::new(r, window, spots.iter().map(|(p, q)| (Spot::new(*p, *q), z2.clone()))).unwrap();
    let mut used = BTreeSet::new();
    let mut pairs = 0;
    for (i, (p, q)) in spots.iter().enumerate() {
        let s = Spot::new(*p, *q);
        let t = s.d_target(r);
        if !pair.get(i).copied().unwrap_or(false) || !spots.contains(&(t.p, t.q)) || used.contains(&s) || used.contains(&t) {
            continue;
        }
        page.install(s, GroupHom::identity(&z2)).unwrap();
        used.insert(s);
        used.insert(t);
        pairs += 1;
    }
    (page, pairs)
}

fn spots() -> impl Strategy<Value = BTreeSet<(i64, i64)>> {
    proptest::collection::btree_set((-4i64..=4, -4i64..=4), 0..24)
}

fn sphere() -> impl Strategy<Value = Space> {
    prop_oneof![Just(Space::Pt), Just(Space::Orbit), (0i64..=3, 0i64..=2).prop_map(|(c, d)| Space::Sphere(c, d))]
}

fn variant() -> impl Strategy<Value = Variant> {
    prop_oneof![Just(Variant::Kr), Just(Variant::KrEt)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn turning_kills_paired_cells(s in spots(), pair in proptest::collection::vec(any::<bool>(), 24)) {
        let (page, pairs) = paired_page(3, &s, &pair);
        prop_assert!(page.check_d_squared().is_ok());
        let next = turn_page(&page).unwrap();
        prop_assert_eq!(next.r(), 4);
        prop_assert_eq!(next.cells().count(), s.len() - 2 * pairs);
    }

    #[test]
    fn turning_without_differentials_is_idempotent(s in spots()) {
        let (page, _) = paired_page(3, &s, &[]);
        let next = turn_page(&page).unwrap();
        prop_assert!(next.cells().eq(page.cells()));
        let again = turn_page(&next).unwrap();
        prop_assert!(again.cells().eq(next.cells()));
    }

    #[test]
    fn towers_are_consistent(space in sphere(), v in variant()) {
        let t = build(space, v, Mode::Stable, default_window()).unwrap();
        prop_assert_eq!(t.e2.differentials().count(), 0);
        prop_assert!(t.e3.check_d_squared().is_ok());
        prop_assert!(t.e3.images_are_torsion().is_ok());
        prop_assert!(t.d3_matches_closed_form().is_ok());
        prop_assert!(t.e4.differentials().next().is_none());
        let e5 = turn_page(&t.e4).unwrap();
        prop_assert!(e5.cells().eq(t.e4.cells()));
    }

    #[test]
    fn adams_operations_commute_with_d3(v in variant(), k in 2i64..=7) {
        let t = build(Space::Pt, v, Mode::Unstable, default_window()).unwrap();
        let e3 = &t.e3;
        let psi = adams_action(k, e3).unwrap();
        if k % 2 == 1 {
            prop_assert!(psi.commutes(e3, e3).is_ok());
        }
        for (s, d) in e3.differentials() {
            if !e3.group(*s).is_finite() {
                continue;
            }
            let target = s.d_target(3);
            let left = psi.at(target, e3, e3).compose(d).unwrap();
            let right = d.compose(&psi.at(*s, e3, e3)).unwrap();
            for i in 0..d.domain.ngens() {
                let mut e = vec![BigInt::from(0); d.domain.ngens()];
                e[i] = BigInt::from(1);
                prop_assert_eq!(left.apply(&e), right.apply(&e), "psi^{} at {}", k, s);
            }
        }
    }
}
