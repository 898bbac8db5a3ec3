use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use symplectic_core::finabel::{enumerate_subgroups, random_hom, Element, Group, Subgroup};
use symplectic_core::forms::{enumerate_lagrangians, BilinearForm, SymplecticSpace, QZ};
use symplectic_core::heisenberg::{heisenberg_mul, HeisenbergElement};

const GROUPS: &[&[i64]] = &[
    &[2],
    &[3],
    &[4],
    &[6],
    &[12],
    &[2, 2],
    &[2, 4],
    &[3, 3],
    &[2, 6],
    &[4, 4],
    &[2, 2, 2],
    &[2, 2, 4],
];

fn group() -> impl Strategy<Value = Group> {
    prop::sample::select(GROUPS).prop_map(|f| Group::new(f.to_vec()).unwrap())
}

fn element_of(g: &Group, seed: u64) -> Element {
    g.element_at((seed % g.order()) as usize)
}

fn element_set(s: &Subgroup) -> BTreeSet<Element> {
    s.elements().into_iter().collect()
}

fn divisor_count(n: i64) -> usize {
    (1..=n).filter(|d| n % d == 0).count()
}

#[test]
fn cyclic_groups_have_one_subgroup_per_divisor() {
    for n in 2..=60 {
        let g = Group::cyclic(n).unwrap();
        let subs = enumerate_subgroups(&g, 4096).unwrap();
        assert_eq!(subs.len(), divisor_count(n), "Z/{n}");
    }
}

/// Every subgroup of a group of rank at most two is generated by two
/// elements, so closing all pairs lists them all.
fn brute_force_subgroups(a: i64, b: i64) -> BTreeSet<BTreeSet<(i64, i64)>> {
    let points: Vec<(i64, i64)> = (0..a).flat_map(|x| (0..b).map(move |y| (x, y))).collect();
    let mut out = BTreeSet::new();
    for &g in &points {
        for &h in &points {
            let mut span = BTreeSet::new();
            for i in 0..a.max(b) {
                for j in 0..a.max(b) {
                    span.insert(((i * g.0 + j * h.0) % a, (i * g.1 + j * h.1) % b));
                }
            }
            out.insert(span);
        }
    }
    out
}

#[test]
fn rank_two_subgroups_match_brute_force() {
    for (a, b) in [(2, 2), (2, 4), (3, 3), (4, 4), (2, 6), (3, 9), (2, 8)] {
        let g = Group::new(vec![a, b]).unwrap();
        let found: BTreeSet<BTreeSet<(i64, i64)>> = enumerate_subgroups(&g, 4096)
            .unwrap()
            .iter()
            .map(|s| s.elements().iter().map(|x| (x.coords[0], x.coords[1])).collect())
            .collect();
        assert_eq!(found, brute_force_subgroups(a, b), "Z/{a} + Z/{b}");
    }
}

/// Lagrangians counted directly from the element sets of all subgroups.
#[test]
fn lagrangian_counts_match_the_subgroup_filter() {
    for b in [&[2][..], &[3], &[4], &[2, 2], &[6]] {
        let space = SymplecticSpace::standard(&Group::new(b.to_vec()).unwrap());
        let k = space.carrier();
        let expected = enumerate_subgroups(k, 4096)
            .unwrap()
            .iter()
            .filter(|s| {
                let xs = s.elements();
                xs.len() as u64 * xs.len() as u64 == k.order()
                    && xs.iter().all(|x| xs.iter().all(|y| space.e(x, y).is_zero()))
            })
            .count();
        assert_eq!(enumerate_lagrangians(&space, 4096).unwrap().len(), expected, "{b:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dual_is_an_involution_and_reverses_composition(a in group(), b in group(), c in group(), seed: u64) {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = random_hom(&a, &b, &mut rng);
        let g = random_hom(&b, &c, &mut rng);
        let double = f.dual().dual();
        prop_assert_eq!(double.matrix(), f.matrix());
        let left = f.then(&g).unwrap().dual();
        let right = g.dual().then(&f.dual()).unwrap();
        prop_assert_eq!(left.matrix(), right.matrix());
    }

    #[test]
    fn dual_hom_is_adjoint_for_the_evaluation_pairing(a in group(), b in group(), seed: u64, s in any::<u64>(), t in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = random_hom(&a, &b, &mut rng);
        let x = element_of(&a, s);
        let xi = element_of(&b.dual(), t);
        let on_b = BilinearForm::duality(&b).eval(&xi, &f.apply(&x));
        let on_a = BilinearForm::duality(&a).eval(&f.dual().apply(&xi), &x);
        prop_assert_eq!(on_a, on_b);
    }

    #[test]
    fn kernel_and_image_orders_multiply_to_the_source(a in group(), b in group(), seed: u64) {
        let f = random_hom(&a, &b, &mut StdRng::seed_from_u64(seed));
        prop_assert_eq!(f.kernel().order() * f.image().order(), a.order());
        for x in f.kernel().elements() {
            prop_assert!(f.apply(&x).is_zero());
        }
    }

    #[test]
    fn perp_is_an_order_reversing_involution(b in group(), s in any::<u64>(), t in any::<u64>()) {
        let space = SymplecticSpace::standard(&b);
        let k = space.carrier();
        let y = Subgroup::generated(k, &[element_of(k, s), element_of(k, t)]).unwrap();
        let perp = space.perp(&y).unwrap();
        prop_assert_eq!(y.order() * perp.order(), k.order());
        prop_assert_eq!(element_set(&space.perp(&perp).unwrap()), element_set(&y));
        for u in y.elements() {
            for v in perp.elements() {
                prop_assert!(space.e(&u, &v).is_zero());
            }
        }
    }

    #[test]
    fn heisenberg_law_is_associative_with_commutator_e(b in group(), s in prop::array::uniform6(any::<u64>())) {
        let space = SymplecticSpace::standard(&b);
        let k = space.carrier();
        let h = |i: usize| {
            let t = QZ::new((s[i] % 97) as i64, 12);
            HeisenbergElement::new(t, element_of(k, s[i + 3]))
        };
        let (x, y, z) = (h(0), h(1), h(2));
        let left = heisenberg_mul(&space, &heisenberg_mul(&space, &x, &y), &z);
        let right = heisenberg_mul(&space, &x, &heisenberg_mul(&space, &y, &z));
        prop_assert_eq!(left, right);
        let xy = heisenberg_mul(&space, &x, &y);
        let yx = heisenberg_mul(&space, &y, &x);
        prop_assert_eq!(&xy.point, &yx.point);
        prop_assert_eq!(xy.scalar - yx.scalar, space.e(&x.point, &y.point));
    }
}
