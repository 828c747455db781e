use std::collections::BTreeMap;

use algvar_core::algebra::{change_basis, derivation_algebra_dim, product_span_dim, LinearMap, MultiLinearMap};
use algvar_core::catalog::Catalog;
use algvar_core::report::sampled_instances;
use algvar_core::{Poly, Rational, Tensor};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| q(n, d))
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((-6i64..=6, 0u32..=2, 0u32..=2, 0u32..=1), 0..5).prop_map(|terms| {
        let mut p = Poly::zero();
        for (c, ex, ey, ez) in terms {
            let m = &(&Poly::from_i64(c) * &Poly::var("x").pow(ex)) * &(&Poly::var("y").pow(ey) * &Poly::var("z").pow(ez));
            p = &p + &m;
        }
        p
    })
}

fn assignment() -> impl Strategy<Value = BTreeMap<String, Rational>> {
    (rational(), rational(), rational()).prop_map(|(x, y, z)| {
        [("x", x), ("y", y), ("z", z)].into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    })
}

fn invertible() -> impl Strategy<Value = LinearMap<Rational>> {
    (rational(), rational(), rational(), rational())
        .prop_filter("singular", |(a, b, c, d)| a * d != b * c)
        .prop_map(|(a, b, c, d)| LinearMap::from_scalars(&vec![vec![a, b], vec![c, d]]))
}

fn tensor() -> impl Strategy<Value = Tensor> {
    prop::collection::vec(rational(), 8).prop_map(|v| {
        MultiLinearMap::from_fn(2, 2, |idx, k| Poly::constant(v[idx[0] * 4 + idx[1] * 2 + k].clone()))
    })
}

fn catalog_instances() -> Vec<Tensor> {
    let cat = Catalog::embedded().unwrap();
    let mut out = Vec::new();
    for table in 1..=4 {
        for f in cat.table(table) {
            out.extend(sampled_instances(f, 2, 5).unwrap().into_iter().map(|(_, t)| t));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(), b in poly(), at in assignment()) {
        let (x, y) = (a.eval(&at).unwrap(), b.eval(&at).unwrap());
        prop_assert_eq!((&a * &b).eval(&at).unwrap(), &x * &y);
        prop_assert_eq!((&a + &b).eval(&at).unwrap(), &x + &y);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn basis_change_round_trip(t in tensor(), g in invertible()) {
        let moved = change_basis(&t, &g).unwrap();
        prop_assert_eq!(change_basis(&moved, &g.inverse().unwrap()).unwrap(), t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn invariants_survive_basis_change(g in invertible()) {
        for t in catalog_instances() {
            let moved = change_basis(&t, &g).unwrap();
            prop_assert_eq!(derivation_algebra_dim(&moved).unwrap(), derivation_algebra_dim(&t).unwrap());
            prop_assert_eq!(product_span_dim(&moved).unwrap(), product_span_dim(&t).unwrap());
        }
    }
}

#[test]
fn rationals_normalize() {
    assert_eq!(q(4, -6), q(-2, 3));
    assert_eq!(q(4, -6).to_string(), "-2/3");
}
