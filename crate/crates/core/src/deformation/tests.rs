use std::collections::BTreeMap;

use super::*;
use crate::algebra::MultiLinearMap;
use crate::catalog::{Catalog, DegenerationKind};
use crate::groebner::Caps;
use crate::identity::Domain;
use crate::symbolic::parse_laurent;
use crate::{Laurent, Poly, Rational, Tensor};

fn l(s: &str) -> Laurent {
    parse_laurent(s).unwrap()
}

fn p(s: &str) -> Poly {
    s.parse().unwrap()
}

fn cat() -> Catalog {
    Catalog::embedded().unwrap()
}

fn numeric(cat: &Catalog, name: &str) -> Tensor {
    cat.family(name).unwrap().instantiate(&BTreeMap::new()).unwrap()
}

fn at(cat: &Catalog, name: &str, alpha: &str) -> Tensor {
    let pt = [("alpha".to_string(), alpha.parse::<Rational>().unwrap())].into_iter().collect();
    cat.family(name).unwrap().instantiate(&pt).unwrap()
}

fn plain(id: &str, source: Tensor, target: Tensor, basis: [[&str; 2]; 2]) -> DegenerationWitness {
    DegenerationWitness {
        id: id.into(),
        source,
        domain: Domain::default(),
        target,
        basis: basis.iter().map(|r| r.iter().map(|s| l(s)).collect()).collect(),
        index: BTreeMap::new(),
    }
}

#[test]
fn t01_to_t03() {
    let c = cat();
    let w = plain("x", numeric(&c, "T01"), numeric(&c, "T03"), [["t", "0"], ["0", "t^2"]]);
    assert_eq!(verify_degeneration(&w, Caps::default()).unwrap(), DegenerationOutcome::Verified { det_order: 3 });
}

#[test]
fn wrong_target_is_a_mismatch() {
    let c = cat();
    let w = plain("x", numeric(&c, "T01"), numeric(&c, "T06"), [["t", "0"], ["0", "t^2"]]);
    assert!(matches!(
        verify_degeneration(&w, Caps::default()).unwrap(),
        DegenerationOutcome::Refuted(Refutation::MismatchAtZero { .. })
    ));
}

#[test]
fn pole_is_refuted() {
    let c = cat();
    let w = plain("x", numeric(&c, "T09"), numeric(&c, "T03"), [["t^-1", "0"], ["0", "1"]]);
    assert!(matches!(
        verify_degeneration(&w, Caps::default()).unwrap(),
        DegenerationOutcome::Refuted(Refutation::PoleAtZero { .. })
    ));
}

#[test]
fn singular_basis_is_an_error() {
    let c = cat();
    let w = plain("x", numeric(&c, "T09"), numeric(&c, "T03"), [["1", "t"], ["1", "t"]]);
    assert!(matches!(verify_degeneration(&w, Caps::default()), Err(DeformationError::SingularBasis(_))));
}

#[test]
fn trivial_witnesses() {
    let c = cat();
    for f in c.table(4) {
        let g = f.generic().unwrap();
        let d = g.domain();
        assert!(verify_degeneration(&identity_witness("id", &g.tensor, &d), Caps::default()).unwrap().is_verified());
        assert!(verify_degeneration(&universal_witness("k2", &g.tensor, &d), Caps::default()).unwrap().is_verified());
    }
}

#[test]
fn index_witness_t07_to_t01() {
    let c = cat();
    let g = c.family("T07").unwrap().generic().unwrap();
    let mut w = plain("x", g.tensor.clone(), numeric(&c, "T01"), [["1", "1"], ["0", "t"]]);
    w.domain = g.domain();
    w.index.insert("alpha".into(), l("1 + t"));
    assert!(verify_degeneration(&w, Caps::default()).unwrap().is_verified());
    w.index.insert("alpha".into(), l("1"));
    assert!(matches!(
        verify_degeneration(&w, Caps::default()).unwrap(),
        DegenerationOutcome::Refuted(Refutation::IndexLeavesDomain { .. })
    ));
}

#[test]
fn every_catalog_witness_verifies() {
    let c = cat();
    assert_eq!(c.degenerations.iter().filter(|d| d.kind == DegenerationKind::Uniform).count(), 10);
    assert_eq!(c.degenerations.iter().filter(|d| d.kind == DegenerationKind::Index).count(), 5);
    for spec in &c.degenerations {
        let w = witness_from_spec(&c, spec).unwrap();
        let out = verify_degeneration(&w, Caps::default()).unwrap();
        assert!(out.is_verified(), "{}: {:?}", spec.id, out);
    }
}

#[test]
fn compositions_verify() {
    let c = cat();
    let mut count = 0;
    for a in &c.degenerations {
        for b in &c.degenerations {
            if !composable(a, b) {
                continue;
            }
            count += 1;
            let got = verify_composition(&c, a, b, Caps::default()).unwrap();
            assert!(got.is_some(), "{} then {}", a.id, b.id);
        }
    }
    assert!(count >= 9, "only {count} composable pairs");
}

#[test]
fn necessary_condition_examples() {
    let c = cat();
    let t09 = numeric(&c, "T09");
    let t07_0 = at(&c, "T07", "0");
    let t03 = numeric(&c, "T03");
    assert!(check_necessary_conditions(&t09, &t07_0, false).unwrap().passes());
    let r = check_necessary_conditions(&t03, &t09, false).unwrap();
    assert_eq!(r.failed, vec![NecessaryCondition::DerivationDim, NecessaryCondition::ProductSpan]);
    let zero: Tensor = MultiLinearMap::zero(2, 2);
    assert!(!check_necessary_conditions(&zero, &t03, false).unwrap().passes());
    assert!(!check_necessary_conditions(&zero, &zero, false).unwrap().passes());
}

#[test]
fn triangular_orders() {
    let vars = condition_vars(2);
    let conds = vec![p("c22_1"), p("c22_2"), p("c12_1"), p("2*c12_2 + c21_2 + c11_1"), p("c11_1*(c12_2 + c21_2) - c11_2*c21_1")];
    let order = triangular_order(&conds, &vars).unwrap();
    assert_eq!(order.steps.len(), 5);
    assert_eq!(order.free.len(), 3);
    assert!(triangular_order(&[p("c11_1^2 - c11_2")], &vars).is_some());
    assert!(triangular_order(&[p("c11_1^2 + c11_2^2")], &vars).is_none());
}

#[test]
fn t10_family_separates_t03() {
    let c = cat();
    let spec = c.separating.iter().find(|s| s.id.starts_with("T10")).unwrap();
    let cfg = SeparatingConfig { points: 20, group_elements: 2, ..Default::default() };
    let r = verify_separating_set(&c, spec, &cfg).unwrap();
    assert!(r.passed(), "{r:?}");
}

#[test]
fn empty_conditions_do_not_separate() {
    let c = cat();
    let mut spec = c.separating[0].clone();
    spec.conditions.clear();
    let s = separating_from_spec(&c, &spec).unwrap();
    let e = &s.excluded[0];
    let v = orbit_misses_region(&s, e, &e.tensor, &e.equations, &e.inequations, Caps::default()).unwrap();
    assert_eq!(v, SubVerdict::Fail);
}

#[test]
fn borel_moves_stay_in_the_region() {
    let c = cat();
    let t = numeric(&c, "T01");
    let g = borel_element(&"2".parse().unwrap(), &"3".parse().unwrap(), &"-1".parse().unwrap());
    let moved = crate::algebra::change_basis(&t, &g).unwrap();
    for cond in conditions_at(&c.separating[0].conditions, &moved) {
        assert!(cond.is_zero());
    }
}

#[test]
fn dot_round_trip() {
    let mut edges = std::collections::BTreeSet::new();
    edges.insert(PrimaryEdge { from: "T09".into(), to: "T07".into(), label: Some("alpha=0".into()) });
    edges.insert(PrimaryEdge { from: "T03".into(), to: "k2".into(), label: None });
    let g = PrimaryGraph { edges, levels: [("T09".to_string(), 0usize)].into_iter().collect() };
    let dot = primary_to_dot(&g);
    assert!(dot.contains("style=dashed"));
    let parsed = parse_dot_edges(&dot).unwrap();
    assert_eq!(parsed.len(), 2);
    assert!(parsed.contains(&DotEdge { from: "T09".into(), to: "T07".into(), label: Some("alpha=0".into()) }));
    assert!(parse_dot_edges("digraph g {\n  -> x;\n}").is_err());
}

#[test]
fn singleton_graph() {
    let mut g = DegenerationGraph::new([Node { label: "k2".into(), family: "k2".into(), is_family: false, level: 4 }]);
    g.add_structural_edges().unwrap();
    assert_eq!(g.open_orbits(2), vec!["k2".to_string()]);
    assert_eq!(g.components().len(), 1);
    assert!(g.add_edge("k2", "T01", EdgeKind::Uniform).is_err());
}
