use super::*;
use crate::{Poly, Rational};

fn p(s: &str) -> Poly {
    s.parse().unwrap()
}

fn alg(e11: [&str; 2], e12: [&str; 2], e21: [&str; 2], e22: [&str; 2]) -> StructureTensor<Rational> {
    let prods: Vec<(usize, usize, Vec<Poly>)> = [(1, 1, e11), (1, 2, e12), (2, 1, e21), (2, 2, e22)]
        .iter()
        .map(|(i, j, v)| (*i, *j, v.iter().map(|s| p(s)).collect()))
        .collect();
    MultiLinearMap::from_products(2, &prods)
}

const Z: [&str; 2] = ["0", "0"];

fn a1(alpha: &str) -> StructureTensor<Rational> {
    let one_minus = format!("1 - ({alpha})");
    alg(["1", "1"], ["0", alpha], ["0", &one_minus], Z)
}

fn t09() -> StructureTensor<Rational> {
    alg(["1", "0"], Z, Z, ["0", "1"])
}

fn t03() -> StructureTensor<Rational> {
    alg(["0", "1"], Z, Z, Z)
}

fn zero() -> StructureTensor<Rational> {
    MultiLinearMap::zero(2, 2)
}

fn c_family(a: &str, b: &str) -> StructureTensor<Rational> {
    let e12 = [format!("1 - ({a})"), b.to_string()];
    let e21 = [a.to_string(), format!("-({b})")];
    alg(["0", "1"], [&e12[0], &e12[1]], [&e21[0], &e21[1]], ["0", "1"])
}

fn d1(a: &str, b: &str) -> StructureTensor<Rational> {
    let e12 = [format!("1 - ({a})"), b.to_string()];
    let e21 = [a.to_string(), format!("-({b})")];
    alg(["1", "0"], [&e12[0], &e12[1]], [&e21[0], &e21[1]], Z)
}

fn e5(a: &str) -> StructureTensor<Rational> {
    let x = format!("1 - ({a})");
    alg(["1", "0"], [&x, a], [a, &x], ["0", "1"])
}

#[test]
fn terminal_examples() {
    assert!(is_terminal(&t09()).unwrap().verdict.is_yes());
    assert!(is_terminal(&zero()).unwrap().verdict.is_yes());
    let a4_0 = alg(["0", "1"], ["1", "0"], ["-1", "0"], Z);
    assert!(!is_terminal(&a4_0).unwrap().verdict.is_yes());
    let b2_0 = alg(Z, ["1", "0"], Z, Z);
    assert!(!is_terminal(&b2_0).unwrap().verdict.is_yes());
}

#[test]
fn terminal_family_is_identically_terminal() {
    let e = e5("alpha");
    assert!(is_terminal(&e).unwrap().verdict.is_yes());
    let d2 = alg(["1", "0"], ["0", "alpha"], ["0", "3 - 2*alpha"], Z);
    assert!(terminal_conditions(&d2).unwrap().is_empty());
}

#[test]
fn conservative_examples() {
    let a3 = t03();
    let r = is_conservative(&a3).unwrap();
    assert_eq!((r.verdict, r.solution_dim), (Verdict::Yes, Some(8)));
    let b1_0 = alg(Z, ["1", "1"], ["0", "-1"], Z);
    assert_eq!(is_conservative(&b1_0).unwrap().verdict, Verdict::No);
    assert_eq!(is_conservative(&d1("1/2", "0")).unwrap().verdict, Verdict::No);
    let r = is_conservative(&a1("2")).unwrap();
    assert_eq!(r.solution_dim, Some(4));
    let w = r.witness.unwrap();
    assert_eq!(w.free_symbols, ["lambda2", "mu2", "tau2", "nu2"]);
    assert_eq!(w.f.image(&[0, 0]), vec![p("1"), p("lambda2")]);
    assert_eq!(w.f.image(&[0, 1]), vec![p("0"), p("mu2")]);
    assert_eq!(w.f.image(&[1, 0]), vec![p("0"), p("tau2")]);
    assert_eq!(w.f.image(&[1, 1]), vec![p("0"), p("nu2")]);
}

#[test]
fn rigid_examples() {
    assert!(is_rigid(&c_family("1", "0")).unwrap().verdict.is_yes());
    assert!(!is_rigid(&c_family("0", "0")).unwrap().verdict.is_yes());
    let r = is_rigid(&e5("7")).unwrap();
    assert_eq!(r.solution_dim, Some(8));
    let r = is_rigid(&d1("1/2", "0")).unwrap();
    assert_eq!(r.solution_dim, Some(0));
    let w = r.witness.unwrap();
    assert_eq!(w.f.image(&[0, 0]), vec![p("0"), p("0")]);
    assert_eq!(w.f.image(&[0, 1]), vec![p("-1/2"), p("1")]);
    assert_eq!(w.f.image(&[1, 0]), vec![p("0"), p("0")]);
    assert_eq!(w.f.image(&[1, 1]), vec![p("0"), p("1/2")]);
    assert_eq!(w.phi.phi, vec![vec![p("1"), p("1/2")], vec![p("1/2"), p("0")]]);
}

#[test]
fn solved_witnesses_verify() {
    for t in [a1("1"), a1("2"), t03(), e5("-3"), d1("1/2", "0"), c_family("1", "0")] {
        let w = is_rigid(&t).unwrap().witness.unwrap();
        assert!(verify_witness(&t, &w, &[]).unwrap());
        assert!(verify_witness(&t, &w.specialize_zero(), &[]).unwrap());
    }
}

#[test]
fn a1_one_rigid_dimension() {
    let r = is_rigid(&a1("1")).unwrap();
    assert_eq!(r.solution_dim, Some(8));
}

#[test]
fn case_conditions_for_a1() {
    let cases = case_conditions(&a1("alpha")).unwrap();
    let two_a = cases.iter().find(|c| c.label == "2.a").unwrap();
    let mut got: Vec<Poly> = two_a.equations.iter().map(|e| e.monic()).collect();
    got.sort_by_key(|e| e.to_string());
    let mut want = vec![p("mu1 + phi12").monic(), p("(2 - alpha)*mu1 + phi12").monic()];
    want.sort_by_key(|e| e.to_string());
    assert_eq!(got, want);
    let one_a = cases.iter().find(|c| c.label == "1.a").unwrap();
    assert_eq!(one_a.equations[0], p("1 - lambda1 - phi11"));
    assert_eq!(one_a.equations[1], p("(alpha - 2)*(alpha - 2 + lambda1) - phi11"));
}

#[test]
fn case_conditions_for_zero_algebra() {
    let cases = case_conditions(&zero()).unwrap();
    assert_eq!(cases.len(), 16);
    assert!(cases.iter().all(|c| c.is_trivial()));
    assert_eq!(cases.iter().map(|c| c.equations.len()).sum::<usize>(), 32);
}

#[test]
fn jordan_examples() {
    assert!(is_commutative(&t09()) && is_jordan(&t09()).unwrap());
    assert!(is_commutative(&t03()) && is_jordan(&t03()).unwrap());
    let b3 = alg(Z, ["0", "1"], ["0", "-1"], Z);
    assert_eq!(is_jordan(&b3), Err(IdentityError::NonCommutative));
    let non_jordan = alg(["0", "1"], ["1", "0"], ["1", "0"], Z);
    assert!(!is_jordan(&non_jordan).unwrap());
}

#[test]
fn pinned_f_matches_terminality() {
    assert!(pinned_conservative(&t09()).unwrap());
    assert!(pinned_conservative(&a1("2")).unwrap());
    assert!(!pinned_conservative(&c_family("1", "0")).unwrap());
}

#[test]
fn parametric_c_family_is_rigid_only_at_one_zero() {
    let t = c_family("alpha", "beta");
    let (unknowns, a, b) = linear_system(&t, true).unwrap();
    let domain = Domain::new(vec!["alpha".into(), "beta".into()]);
    let part = solve_parametric(&a, &b, unknowns.len(), &domain, Caps::default(), MAX_CELLS).unwrap();
    assert!(part.consistent_cells().count() >= 1);
    for cell in part.consistent_cells() {
        assert!(cell.domain.implies_zero(&p("alpha - 1"), Caps::default()).unwrap());
        assert!(cell.domain.implies_zero(&p("beta"), Caps::default()).unwrap());
    }
}

#[test]
fn parametric_a1_conservative_cells() {
    let t = a1("alpha");
    let (unknowns, a, b) = linear_system(&t, false).unwrap();
    let domain = Domain::new(vec!["alpha".into()]);
    let part = solve_parametric(&a, &b, unknowns.len(), &domain, Caps::default(), MAX_CELLS).unwrap();
    let poly = p("(alpha - 1)*(alpha - 2)");
    for cell in &part.cells {
        if cell.consistent {
            assert!(cell.domain.implies_zero(&poly, Caps::default()).unwrap());
        } else {
            assert!(cell.domain.implies_nonzero(&poly, Caps::default()).unwrap());
        }
    }
}
