//! Table-by-table verification runs, graph assembly and the reports built from them.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::{derivation_algebra_dim, product_span_dim};
use crate::catalog::{Catalog, CatalogError, DegenerationKind, Family};
use crate::deformation::{
    check_necessary_conditions, universal_witness, verify_degeneration, verify_separating_set, witness_from_spec,
    Certificate, CertificateKind, DegenerationGraph, DeformationError, EdgeKind, Node, SeparatingConfig, ZERO_NODE,
};
use crate::groebner::Caps;
use crate::identity::{
    is_conservative, is_rigid, is_terminal, linear_system, solve_parametric, verify_witness, Domain, IdentityError,
    MAX_CELLS,
};
use crate::{Rational, Tensor};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("no table {0}")]
    UnknownTable(u8),
    #[error("no row {row} in table {table}")]
    UnknownRow { table: u8, row: String },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Deformation(#[from] DeformationError),
    #[error(transparent)]
    Identity(#[from] IdentityError),
    #[error(transparent)]
    Parametric(#[from] crate::identity::ParametricError),
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
}

pub const TABLES: [u8; 8] = [1, 2, 3, 4, 5, 6, 7, 8];

/// Every knob of a run; all randomness derives from `seed`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: usize,
    pub degree_cap: u32,
    pub pair_cap: usize,
    pub stability_points: usize,
    pub group_elements: usize,
    pub forbidden_samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let caps = Caps::default();
        RunConfig {
            seed: 2024,
            samples: 20,
            degree_cap: caps.degree,
            pair_cap: caps.pairs,
            stability_points: 200,
            group_elements: 5,
            forbidden_samples: 10,
        }
    }
}

impl RunConfig {
    pub fn caps(&self) -> Caps {
        Caps {
            degree: self.degree_cap,
            pairs: self.pair_cap,
        }
    }

    pub fn separating(&self) -> SeparatingConfig {
        SeparatingConfig {
            points: self.stability_points,
            group_elements: self.group_elements,
            forbidden_samples: self.forbidden_samples,
            seed: self.seed,
            caps: self.caps(),
        }
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).unwrap_or_default();
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowReport {
    pub table: u8,
    pub row_id: String,
    pub passed: bool,
    pub details: Value,
}

impl RowReport {
    pub fn certificate(&self) -> Certificate {
        let kind = match self.table {
            6 | 8 => CertificateKind::SeparatingSet,
            _ => CertificateKind::Witness,
        };
        Certificate::new(&self.row_id, kind, self.passed, &self.details)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableReport {
    pub table: u8,
    pub passed: usize,
    pub total: usize,
    pub rows: Vec<RowReport>,
}

impl TableReport {
    pub fn from_rows(table: u8, rows: Vec<RowReport>) -> Self {
        TableReport {
            table,
            passed: rows.iter().filter(|r| r.passed).count(),
            total: rows.len(),
            rows,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub seed: u64,
    pub config_hash: String,
    pub config: RunConfig,
    pub tables: Vec<TableReport>,
}

impl RunReport {
    pub fn new(config: &RunConfig, tables: Vec<TableReport>) -> Self {
        RunReport {
            seed: config.seed,
            config_hash: config.hash(),
            config: config.clone(),
            tables,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.tables.iter().all(|t| t.all_passed())
    }
}

/// Row identifiers of a table, in catalog order.
pub fn row_ids(cat: &Catalog, table: u8) -> Result<Vec<String>, ReportError> {
    Ok(match table {
        1..=4 => cat.table(table).iter().map(|f| f.name.clone()).collect(),
        5 => degeneration_ids(cat, DegenerationKind::Uniform),
        7 => degeneration_ids(cat, DegenerationKind::Index),
        6 | 8 => cat.separating.iter().filter(|s| s.table == table).map(|s| s.id.clone()).collect(),
        other => return Err(ReportError::UnknownTable(other)),
    })
}

fn degeneration_ids(cat: &Catalog, kind: DegenerationKind) -> Vec<String> {
    cat.degenerations.iter().filter(|d| d.kind == kind).map(|d| d.id.clone()).collect()
}

/// Verify one row.
pub fn verify_row(cat: &Catalog, table: u8, row: &str, cfg: &RunConfig) -> Result<RowReport, ReportError> {
    let missing = || ReportError::UnknownRow {
        table,
        row: row.to_string(),
    };
    let (passed, details) = match table {
        1 => classification_row(cat.family(row)?, cfg)?,
        2 | 3 => identity_row(cat, cat.family(row)?, table == 2, cfg)?,
        4 => terminal_row(cat.family(row)?, cfg)?,
        5 | 7 => {
            let spec = cat.degenerations.iter().find(|d| d.id == row).ok_or_else(missing)?;
            degeneration_row(cat, spec, cfg)?
        }
        6 | 8 => {
            let spec = cat.separating.iter().find(|s| s.id == row && s.table == table).ok_or_else(missing)?;
            let r = verify_separating_set(cat, spec, &cfg.separating())?;
            (r.passed(), serde_json::to_value(&r).unwrap_or(Value::Null))
        }
        other => return Err(ReportError::UnknownTable(other)),
    };
    Ok(RowReport {
        table,
        row_id: row.to_string(),
        passed,
        details,
    })
}

/// All rows of a table, one after another.
pub fn verify_table(cat: &Catalog, table: u8, cfg: &RunConfig) -> Result<TableReport, ReportError> {
    let rows = row_ids(cat, table)?
        .iter()
        .map(|r| verify_row(cat, table, r, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TableReport::from_rows(table, rows))
}

/// Numeric instances at `count` sampled points, or the single instance of a constant row.
pub fn sampled_instances(f: &Family, count: usize, seed: u64) -> Result<Vec<(String, Tensor)>, ReportError> {
    if !f.is_parametric() {
        return Ok(vec![(String::new(), f.instantiate(&BTreeMap::new())?)]);
    }
    let mut out = Vec::new();
    for pt in f.sample(count, seed)? {
        let label = pt.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",");
        out.push((label, f.instantiate(&pt)?));
    }
    Ok(out)
}

fn classification_row(f: &Family, cfg: &RunConfig) -> Result<(bool, Value), ReportError> {
    let inst = sampled_instances(f, cfg.samples, cfg.seed)?;
    let mut terminal = 0;
    for (_, t) in &inst {
        if is_terminal(t)?.verdict.is_yes() {
            terminal += 1;
        }
    }
    Ok((
        !inst.is_empty(),
        json!({"samples": inst.len(), "terminal_at": terminal, "params": f.params}),
    ))
}

fn identity_row(cat: &Catalog, f: &Family, rigid: bool, cfg: &RunConfig) -> Result<(bool, Value), ReportError> {
    let inst = sampled_instances(f, cfg.samples, cfg.seed)?;
    let mut failures = Vec::new();
    let mut dims = BTreeSet::new();
    for (label, t) in &inst {
        let r = if rigid { is_rigid(t)? } else { is_conservative(t)? };
        if !r.verdict.is_yes() {
            failures.push(label.clone());
        }
        if let Some(d) = r.solution_dim {
            dims.insert(d);
        }
    }
    let g = f.generic()?;
    let mut witness_results = Vec::new();
    for w in cat.witnesses_for(&f.name) {
        let wit = if rigid { w.witness(true) } else { w.conservative(true) };
        let mut rels = g.relations.clone();
        rels.extend(w.all_relations());
        let ok = verify_witness(&g.tensor, &wit, &rels)?;
        let mut entry = json!({"witness": w.id, "verified": ok});
        if !w.errata.is_empty() {
            let printed = if rigid { w.witness(false) } else { w.conservative(false) };
            entry["printed_verified"] = json!(verify_witness(&g.tensor, &printed, &rels)?);
            entry["errata"] = serde_json::to_value(&w.errata).unwrap_or(Value::Null);
        }
        witness_results.push(entry);
    }
    let witnesses_ok =
        !witness_results.is_empty() && witness_results.iter().all(|e| e["verified"].as_bool() == Some(true));
    Ok((
        failures.is_empty() && witnesses_ok,
        json!({
            "identity": if rigid { "rigid" } else { "conservative" },
            "samples": inst.len(),
            "failed_at": failures,
            "solution_dims": dims,
            "witnesses": witness_results,
        }),
    ))
}

fn terminal_row(f: &Family, cfg: &RunConfig) -> Result<(bool, Value), ReportError> {
    let inst = sampled_instances(f, cfg.samples, cfg.seed)?;
    let mut failures = Vec::new();
    for (label, t) in &inst {
        if !is_terminal(t)?.verdict.is_yes() {
            failures.push(label.clone());
        }
    }
    let symbolic = is_terminal(&f.generic()?.tensor)?.verdict.is_yes();
    Ok((
        failures.is_empty() && symbolic,
        json!({"samples": inst.len(), "failed_at": failures, "symbolic": symbolic}),
    ))
}

fn degeneration_row(
    cat: &Catalog,
    spec: &crate::catalog::DegenerationSpec,
    cfg: &RunConfig,
) -> Result<(bool, Value), ReportError> {
    let w = witness_from_spec(cat, spec)?;
    let outcome = verify_degeneration(&w, cfg.caps())?;
    let mut conditions = Vec::new();
    let mut conditions_ok = true;
    if outcome.is_verified() && w.target.is_numeric() {
        let source = cat.family(&spec.source.family)?;
        let family_source = spec.kind != DegenerationKind::Uniform;
        let sources: Vec<(String, Tensor)> = if w.source.is_numeric() {
            vec![(String::new(), w.source.clone())]
        } else {
            generic_members(source, cfg.seed)?
        };
        for (label, s) in sources {
            let check = check_necessary_conditions(&s, &w.target, family_source)?;
            conditions_ok &= check.passes();
            conditions.push(json!({"at": label, "check": check}));
        }
    }
    Ok((
        outcome.is_verified() && conditions_ok,
        json!({"outcome": outcome, "necessary_conditions": conditions}),
    ))
}

/// Sampled members with the fewest derivations and the largest product span.
fn generic_members(f: &Family, seed: u64) -> Result<Vec<(String, Tensor)>, ReportError> {
    let mut scored = Vec::new();
    for (label, t) in sampled_instances(f, 10, seed)? {
        let key = (derivation_algebra_dim(&t)?, std::cmp::Reverse(product_span_dim(&t)?));
        scored.push((key, label, t));
    }
    let best = scored.iter().map(|(k, _, _)| *k).min();
    Ok(scored.into_iter().filter(|(k, _, _)| Some(*k) == best).map(|(_, l, t)| (l, t)).collect())
}

/// Generic derivation dimension: the minimum over sampled members.
pub fn generic_level(f: &Family, seed: u64) -> Result<usize, ReportError> {
    let mut best = usize::MAX;
    for (_, t) in sampled_instances(f, 5, seed)? {
        best = best.min(derivation_algebra_dim(&t)?);
    }
    Ok(best)
}

/// Outcome of verifying every degeneration record plus the universal ones.
#[derive(Clone, Debug, Serialize)]
pub struct GraphBuild {
    #[serde(skip)]
    pub graph: DegenerationGraph,
    pub verified: Vec<String>,
    pub failed: Vec<String>,
}

/// Verify all catalog degenerations over Table 4 and assemble the graph; unverified edges are an error unless `force`.
pub fn build_graph(cat: &Catalog, cfg: &RunConfig, force: bool) -> Result<GraphBuild, ReportError> {
    let mut nodes = vec![Node {
        label: ZERO_NODE.into(),
        family: ZERO_NODE.into(),
        is_family: false,
        level: 4,
    }];
    for f in cat.table(4) {
        if f.is_parametric() {
            nodes.push(Node {
                label: format!("{}(*)", f.name),
                family: f.name.clone(),
                is_family: true,
                level: generic_level(f, cfg.seed)?,
            });
        } else {
            let t = f.instantiate(&BTreeMap::new())?;
            nodes.push(Node {
                label: f.name.clone(),
                family: f.name.clone(),
                is_family: false,
                level: derivation_algebra_dim(&t)?,
            });
        }
    }
    for d in &cat.degenerations {
        for r in [&d.source, &d.target] {
            let label = r.label();
            if nodes.iter().any(|n| n.label == label) {
                continue;
            }
            let t = cat.resolve(r)?.tensor;
            nodes.push(Node {
                label,
                family: r.family.clone(),
                is_family: false,
                level: derivation_algebra_dim(&t)?,
            });
        }
    }
    let mut graph = DegenerationGraph::new(nodes);
    let mut verified = Vec::new();
    let mut failed = Vec::new();
    for d in &cat.degenerations {
        let ok = verify_degeneration(&witness_from_spec(cat, d)?, cfg.caps())?.is_verified();
        if ok || force {
            graph.add_degeneration(d)?;
        }
        if ok {
            verified.push(d.id.clone());
        } else {
            failed.push(d.id.clone());
        }
    }
    for f in cat.table(4) {
        let g = f.generic()?;
        let w = universal_witness(&format!("{}->k2", f.name), &g.tensor, &g.domain());
        if verify_degeneration(&w, cfg.caps())?.is_verified() {
            verified.push(w.id);
        } else {
            failed.push(w.id);
        }
    }
    if !failed.is_empty() && !force {
        return Err(DeformationError::Unverified(failed.join(", ")).into());
    }
    graph.add_structural_edges()?;
    Ok(GraphBuild {
        graph,
        verified,
        failed,
    })
}

/// Comparison of the rebuilt geometry with the golden data.
#[derive(Clone, Debug, Serialize)]
pub struct GeometryReport {
    pub figure1_matches: bool,
    pub figure1_missing: Vec<String>,
    pub figure1_extra: Vec<String>,
    pub figure2_matches: bool,
    pub figure2_missing: Vec<(String, String)>,
    pub figure2_extra: Vec<(String, String)>,
    pub levels_match: bool,
    pub closures_match: bool,
    pub closures: BTreeMap<String, BTreeSet<String>>,
    pub components_match: bool,
    pub components: Vec<BTreeSet<String>>,
    pub open_orbits: Vec<String>,
    pub open_orbits_match: bool,
}

impl GeometryReport {
    pub fn all_match(&self) -> bool {
        self.figure1_matches && self.figure2_matches && self.levels_match && self.closures_match
            && self.components_match
            && self.open_orbits_match
    }
}

fn edge_key(from: &str, to: &str, label: &Option<String>) -> String {
    match label {
        Some(l) => format!("{from} -> {to} [{l}]"),
        None => format!("{from} -> {to}"),
    }
}

pub fn compare_geometry(cat: &Catalog, g: &DegenerationGraph) -> GeometryReport {
    let primary = g.primary();
    let got1: BTreeSet<String> = primary.edges.iter().map(|e| edge_key(&e.from, &e.to, &e.label)).collect();
    let want1: BTreeSet<String> = cat.figure1.edges.iter().map(|e| edge_key(&e.from, &e.to, &e.label)).collect();
    let levels_match = cat
        .figure1
        .levels
        .iter()
        .all(|(k, v)| primary.levels.get(k).map(|x| *x as u32) == Some(*v));
    let got2 = g.lattice();
    let want2: BTreeSet<(String, String)> = cat.figure2.edges.iter().cloned().collect();
    let closures: BTreeMap<String, BTreeSet<String>> =
        cat.closures.closures.keys().map(|k| (k.clone(), g.closure(k))).collect();
    let closures_match = cat
        .closures
        .closures
        .iter()
        .all(|(k, v)| closures.get(k) == Some(&v.iter().cloned().collect()));
    let components = g.components();
    let want_components: BTreeSet<BTreeSet<String>> =
        cat.closures.components.iter().map(|c| c.iter().cloned().collect()).collect();
    let got_components: BTreeSet<BTreeSet<String>> = components.iter().cloned().collect();
    let open_orbits = g.open_orbits(2);
    GeometryReport {
        figure1_matches: got1 == want1,
        figure1_missing: want1.difference(&got1).cloned().collect(),
        figure1_extra: got1.difference(&want1).cloned().collect(),
        figure2_matches: got2 == want2,
        figure2_missing: want2.difference(&got2).cloned().collect(),
        figure2_extra: got2.difference(&want2).cloned().collect(),
        levels_match,
        closures_match,
        closures,
        components_match: got_components == want_components && components.len() == want_components.len(),
        components,
        open_orbits_match: open_orbits == cat.closures.open_orbits,
        open_orbits,
    }
}

/// Whether an edge kind came from verified catalog data rather than structure.
pub fn is_data_edge(kind: EdgeKind) -> bool {
    matches!(kind, EdgeKind::Uniform | EdgeKind::Index | EdgeKind::Limit)
}

/// Invariants shown by the `invariants` subcommand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub dim: usize,
    pub derivation_dim: usize,
    pub orbit_dim: usize,
    pub product_span_dim: usize,
    pub commutative: bool,
    pub terminal: bool,
    pub conservative: bool,
    pub rigid: bool,
}

pub fn invariants(t: &Tensor) -> Result<Invariants, ReportError> {
    let n = t.dim();
    let der = derivation_algebra_dim(t)?;
    Ok(Invariants {
        dim: n,
        derivation_dim: der,
        orbit_dim: n * n - der,
        product_span_dim: product_span_dim(t)?,
        commutative: crate::algebra::is_commutative(t),
        terminal: is_terminal(t)?.verdict.is_yes(),
        conservative: is_conservative(t)?.verdict.is_yes(),
        rigid: is_rigid(t)?.verdict.is_yes(),
    })
}

/// Where on the domain the identity holds: every cell solvable, none, or some.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParametricVerdict {
    Everywhere,
    Nowhere,
    Somewhere,
}

/// Decide rigidity (`with_phi`) or conservativity over a family's whole domain.
pub fn parametric_identity(f: &Family, with_phi: bool, caps: Caps) -> Result<ParametricVerdict, ReportError> {
    let g = f.generic()?;
    let (unknowns, a, b) = linear_system(&g.tensor, with_phi)?;
    let domain: Domain<Rational> = g.domain();
    let part = solve_parametric(&a, &b, unknowns.len(), &domain, caps, MAX_CELLS)?;
    Ok(if part.all_consistent() {
        ParametricVerdict::Everywhere
    } else if part.none_consistent() {
        ParametricVerdict::Nowhere
    } else {
        ParametricVerdict::Somewhere
    })
}
