use super::*;
use crate::algebra::{change_basis, MultiLinearMap};
use crate::{Poly, Rational};

fn p(s: &str) -> Poly {
    s.parse().unwrap()
}

fn vars(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn gb(names: &[&str], gens: &[&str]) -> GroebnerBasis<Rational> {
    let ideal = Ideal::new(vars(names), gens.iter().map(|s| p(s)).collect()).unwrap();
    buchberger(&ideal, Caps::default()).unwrap()
}

fn tensor(products: &[(usize, usize, [&str; 2])]) -> StructureTensor<Rational> {
    let prods: Vec<(usize, usize, Vec<Poly>)> = products
        .iter()
        .map(|(i, j, v)| (*i, *j, v.iter().map(|s| p(s)).collect()))
        .collect();
    MultiLinearMap::from_products(2, &prods)
}

#[test]
fn inconsistent_linear_pair_gives_unit() {
    let b = gb(&["x"], &["x", "x - 1"]);
    assert!(b.is_unit());
}

#[test]
fn redundant_generator_is_dropped() {
    let b = gb(&["x"], &["x^2 - 1", "x - 1"]);
    assert_eq!(b.polys(), vec![p("x - 1")]);
}

#[test]
fn zero_ideal_has_empty_basis() {
    let b = gb(&["x", "y"], &[]);
    assert!(b.is_empty());
    assert!(!b.is_unit());
}

#[test]
fn basis_satisfies_criterion() {
    let b = gb(&["x", "y", "z"], &["x^2 + y*z - 2", "y^2 - x*z + 1", "x*y*z - 3"]);
    assert!(b.satisfies_buchberger_criterion());
    for g in ["x^2 + y*z - 2", "y^2 - x*z + 1", "x*y*z - 3"] {
        assert!(b.contains(&p(g)));
    }
}

#[test]
fn lex_and_grevlex_agree_on_membership() {
    let gens = ["x^2 - y", "x*y - 1"];
    let g1 = gb(&["x", "y"], &gens);
    let ideal = Ideal::new(vars(&["x", "y"]), gens.iter().map(|s| p(s)).collect())
        .unwrap()
        .with_order(MonomialOrder::Lex);
    let g2 = buchberger(&ideal, Caps::default()).unwrap();
    for q in g1.polys() {
        assert!(g2.contains(&q));
    }
    for q in g2.polys() {
        assert!(g1.contains(&q));
    }
    assert!(g2.polys().contains(&p("y^3 - 1")));
}

#[test]
fn tiny_caps_exhaust() {
    let ideal = Ideal::new(
        vars(&["x", "y", "z"]),
        vec![p("x^2 + y*z - 2"), p("y^2 - x*z + 1"), p("x*y*z - 3")],
    )
    .unwrap();
    let r = buchberger(&ideal, Caps { degree: 20, pairs: 1 });
    assert!(matches!(r, Err(GroebnerError::ResourceExhausted { .. })));
}

#[test]
fn undeclared_variable_is_rejected() {
    let r = Ideal::<Rational>::new(vars(&["x"]), vec![p("x + y")]);
    assert_eq!(r.unwrap_err(), GroebnerError::UndeclaredVariable("y".into()));
}

#[test]
fn emptiness_examples() {
    let xs = vars(&["x", "y"]);
    let r = is_empty(&xs, &[p("x + y - 1"), p("x + y - 2")], &[], Caps::default());
    assert_eq!(r, Emptiness::Empty);
    let r = is_empty(&xs, &[p("x*y - 1")], &[p("x")], Caps::default());
    match r {
        Emptiness::NonEmpty(Some(pt)) => {
            assert_eq!(p("x*y").eval(&pt).unwrap(), Rational::from_i64(1));
        }
        other => panic!("expected a point, got {other:?}"),
    }
    let r = is_empty(&xs, &[p("x*y")], &[p("x"), p("y")], Caps::default());
    assert_eq!(r, Emptiness::Empty);
}

#[test]
fn irrational_points_are_nonempty_without_witness() {
    let r = is_empty(&vars(&["x"]), &[p("x^2 - 2")], &[], Caps::default());
    assert_eq!(r, Emptiness::NonEmpty(None));
}

#[test]
fn reduce_keeps_foreign_symbols() {
    let b = gb(&["x"], &["x - 1"]);
    assert_eq!(b.reduce(&p("a*x + x^2")), p("a + 1"));
}

#[test]
fn candidate_values_start_small() {
    let c: Vec<Rational> = candidate_values(2);
    let shown: Vec<String> = c.iter().map(|x| x.to_string()).collect();
    assert_eq!(shown, ["0", "1", "-1", "2", "-2", "1/2", "-1/2"]);
}

#[test]
fn isomorphism_examples() {
    let a1_1 = tensor(&[(1, 1, ["1", "1"]), (1, 2, ["0", "1"])]);
    let a1_2 = tensor(&[(1, 1, ["1", "1"]), (1, 2, ["0", "2"]), (2, 1, ["0", "-1"])]);
    assert_eq!(are_isomorphic(&a1_1, &a1_2, Caps::default()), Isomorphism::NotIsomorphic);
    let t04 = tensor(&[(2, 1, ["1", "0"])]);
    let t05 = tensor(&[(1, 2, ["2", "0"]), (2, 1, ["-1", "0"])]);
    assert_eq!(are_isomorphic(&t04, &t05, Caps::default()), Isomorphism::NotIsomorphic);
    let g = LinearMap::from_scalars(&vec![
        vec![Rational::from_i64(1), Rational::from_i64(2)],
        vec![Rational::from_i64(1), Rational::from_i64(3)],
    ]);
    let rebased = change_basis(&a1_2, &g).unwrap();
    match are_isomorphic(&a1_2, &rebased, Caps::default()) {
        Isomorphism::Isomorphic(Some(w)) => {
            assert_eq!(change_basis(&rebased, &w).unwrap(), a1_2);
        }
        other => panic!("expected a witness, got {other:?}"),
    }
}
