use algvar_core::catalog::Catalog;
use algvar_core::report::{build_graph, compare_geometry, RunConfig};

#[test]
fn rebuilt_geometry_matches_golden_data() {
    let cat = Catalog::embedded().unwrap();
    let built = build_graph(&cat, &RunConfig::default(), false).unwrap();
    assert!(built.failed.is_empty(), "{:?}", built.failed);
    let r = compare_geometry(&cat, &built.graph);
    assert!(r.figure1_matches, "missing {:?} extra {:?}", r.figure1_missing, r.figure1_extra);
    assert!(r.levels_match);
    assert!(r.figure2_matches, "missing {:?} extra {:?}", r.figure2_missing, r.figure2_extra);
    assert!(r.closures_match, "{:?}", r.closures);
    assert!(r.components_match, "{:?}", r.components);
    assert_eq!(r.open_orbits, vec!["T09".to_string()]);
}
