use super::*;
use crate::identity::verify_witness;

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn p(s: &str) -> Poly {
    s.parse().unwrap()
}

fn point(kv: &[(&str, &str)]) -> BTreeMap<String, Rational> {
    kv.iter().map(|(k, v)| (k.to_string(), q(v))).collect()
}

fn cat() -> Catalog {
    Catalog::embedded().unwrap()
}

#[test]
fn table_sizes() {
    let c = cat();
    assert_eq!(c.table(1).len(), 16);
    assert_eq!(c.table(2).len(), 21);
    assert_eq!(c.table(3).len(), 17);
    assert_eq!(c.table(4).len(), 10);
    assert!(c.families().all(|f| f.dim() == 2));
}

#[test]
fn instantiate_a1() {
    let c = cat();
    let t = c.family("A1").unwrap().instantiate(&point(&[("alpha", "1")])).unwrap();
    assert_eq!(t.image(&[0, 0]), vec![p("1"), p("1")]);
    assert_eq!(t.image(&[0, 1]), vec![p("0"), p("1")]);
    assert_eq!(t.image(&[1, 0]), vec![p("0"), p("0")]);
}

#[test]
fn instantiate_reports_violations_and_missing_values() {
    let c = cat();
    let d2 = c.family("D2").unwrap();
    assert!(matches!(
        d2.instantiate(&point(&[("alpha", "1"), ("beta", "0")])),
        Err(CatalogError::ConstraintViolation { .. })
    ));
    assert!(d2.instantiate(&point(&[("alpha", "2"), ("beta", "0")])).is_ok());
    assert!(matches!(
        d2.instantiate(&point(&[("alpha", "2")])),
        Err(CatalogError::MissingParameter { .. })
    ));
    let e5 = c.family("E5").unwrap();
    let t = e5.instantiate(&point(&[("alpha", "0")])).unwrap();
    assert_eq!(t.image(&[0, 1]), vec![p("1"), p("0")]);
    let e3 = c.family("E3").unwrap();
    assert!(matches!(
        e3.instantiate(&point(&[("alpha", "1"), ("beta", "1"), ("gamma", "0")])),
        Err(CatalogError::ConstraintViolation { .. })
    ));
}

#[test]
fn v_set_expansion() {
    let ineqs = expand_set("V", &[p("a"), p("b"), p("c"), p("d")]).unwrap();
    assert_eq!(ineqs, vec![p("(a + c)*(b + d) - 1"), p("b + d - 1"), p("c + a - 1")]);
    assert!(matches!(expand_set("W", &[]), Err(CatalogError::UnknownSet(_))));
    assert!(expand_set("U", &[p("a"), p("b")]).unwrap().is_empty());
}

#[test]
fn gamma_examples() {
    let g = gamma_functions([&q("0"), &q("0"), &q("0"), &q("0")]).unwrap();
    assert_eq!(g.d, q("-1"));
    assert_eq!(g.c3, (q("1"), q("1")));
    let g = gamma_functions([&q("1"), &q("2"), &q("3"), &q("4")]).unwrap();
    assert_eq!(g.d, q("23"));
    assert_eq!(g.c1, (q("2"), q("4")));
    assert_eq!(g.c2, (q("3"), q("1")));
    assert_eq!(g.c3, (q("6/23"), q("2/23")));
    assert_eq!(
        gamma_functions([&q("1"), &q("0"), &q("0"), &q("1")]),
        Err(CatalogError::DegenerateGamma)
    );
}

#[test]
fn sampling_is_deterministic_and_admissible() {
    let c = cat();
    let e1 = c.family("E1").unwrap();
    let a = e1.sample(20, 7).unwrap();
    let b = e1.sample(20, 7).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, e1.sample(20, 8).unwrap());
    for pt in &a {
        assert!(e1.instantiate(pt).is_ok());
    }
    assert_eq!(c.family("A3").unwrap().sample(3, 1).unwrap().len(), 3);
}

#[test]
fn conjecture_families() {
    let s = conjecture_family(ConjectureKind::DirectSum, 3, None).unwrap();
    assert_eq!(s.image(&[2, 2]), vec![p("0"), p("0"), p("1")]);
    assert_eq!(s.image(&[0, 1]), vec![p("0"), p("0"), p("0")]);
    let n = conjecture_family(ConjectureKind::Nu, 3, Some(&q("1/3"))).unwrap();
    assert_eq!(n.image(&[0, 2]), vec![p("0"), p("0"), p("1/3")]);
    assert_eq!(n.image(&[2, 0]), vec![p("0"), p("0"), p("2/3")]);
    assert!(conjecture_family(ConjectureKind::Nu, 3, None).is_err());
    assert!(conjecture_family(ConjectureKind::DirectSum, 1, None).is_err());
}

#[test]
fn aliases_match_their_origin_rows() {
    let c = cat();
    for table in [2u8, 3, 4] {
        for f in c.table(table) {
            let origin = f.origin.as_ref().expect("alias");
            let src = c.family(&origin.family).unwrap();
            let pts = f.sample(5, 11).unwrap();
            for pt in pts {
                let (name, op) = f.origin_point(&pt).unwrap().unwrap();
                assert_eq!(name, src.name);
                let mine = f.instantiate(&pt).unwrap();
                let theirs = src.instantiate(&op).unwrap();
                assert_eq!(mine, theirs, "{} vs {}", f.name, src.name);
            }
        }
    }
}

#[test]
fn displayed_witnesses_verify() {
    let c = cat();
    for w in &c.witnesses {
        for row in &w.rows {
            let fam = c.family(row).unwrap();
            let spec = fam.generic().unwrap();
            let mut rels = spec.relations.clone();
            rels.extend(w.all_relations());
            let wit = if fam.table == 3 { w.conservative(true) } else { w.witness(true) };
            assert!(verify_witness(&spec.tensor, &wit, &rels).unwrap(), "{} on {row}", w.id);
        }
    }
}

#[test]
fn printed_d1_witness_needs_phi12_equal_phi11() {
    let c = cat();
    let w = c.witnesses.iter().find(|w| !w.errata.is_empty()).unwrap();
    let t = c.family(&w.rows[0]).unwrap().generic().unwrap().tensor;
    assert!(!verify_witness(&t, &w.witness(false), &[]).unwrap());
    assert!(verify_witness(&t, &w.witness(false), &[p("phi12 - phi11")]).unwrap());
    assert!(verify_witness(&t, &w.witness(true), &[]).unwrap());
}

#[test]
fn from_dir_matches_embedded() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let a = Catalog::from_dir(&dir).unwrap();
    let b = cat();
    assert_eq!(a.witnesses, b.witnesses);
    assert_eq!(a.degenerations, b.degenerations);
    assert!(Catalog::from_dir(Path::new("/nonexistent")).is_err());
}

#[test]
fn node_labels() {
    let c = cat();
    let labels: Vec<String> = c.degenerations.iter().map(|d| d.target.label()).collect();
    assert!(labels.contains(&"T10(1)".to_string()));
    assert!(c.degenerations.iter().any(|d| d.source.label() == "T07(*)"));
}
