use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CatalogError, DisplayedWitness, Family, Origin, ParamConstraint};
use crate::algebra::{BilinearForm, MultiLinearMap};
use crate::symbolic::parse_laurent;
use crate::{Laurent, Poly};

/// Environment variable naming a directory that overrides the embedded data.
pub const DATA_ENV: &str = "ALGVAR_DATA";

pub const TABLE_FILES: [(u8, &str); 4] = [
    (1, "table1.json"),
    (2, "table2.json"),
    (3, "table3.json"),
    (4, "table4.json"),
];

pub(super) fn embedded_reader(name: &str) -> Result<String, CatalogError> {
    let s = match name {
        "table1.json" => include_str!("../../../../data/table1.json"),
        "table2.json" => include_str!("../../../../data/table2.json"),
        "table3.json" => include_str!("../../../../data/table3.json"),
        "table4.json" => include_str!("../../../../data/table4.json"),
        "witnesses.json" => include_str!("../../../../data/witnesses.json"),
        "degenerations.json" => include_str!("../../../../data/degenerations.json"),
        "separating.json" => include_str!("../../../../data/separating.json"),
        "figure1.json" => include_str!("../../../../data/figure1.json"),
        "figure2.json" => include_str!("../../../../data/figure2.json"),
        "closures.json" => include_str!("../../../../data/closures.json"),
        other => {
            return Err(CatalogError::Data {
                file: other.to_string(),
                msg: "no embedded copy".into(),
            })
        }
    };
    Ok(s.to_string())
}

/// A family at given parameter values; params may stay symbolic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRef {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, Poly>,
}

impl NodeRef {
    /// `T07(0)`, `T07(*)` when the parameters are symbolic, or the bare name.
    pub fn label(&self) -> String {
        if self.params.is_empty() {
            return self.family.clone();
        }
        if self.params.values().any(|p| !p.is_constant()) {
            return format!("{}(*)", self.family);
        }
        let vals: Vec<String> = self.params.values().map(|p| p.to_string()).collect();
        format!("{}({})", self.family, vals.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegenerationKind {
    /// Uniform over the source parameters.
    Uniform,
    /// The source parameter moves with t.
    Index,
    /// Limit of a family at a point excluded from its domain.
    Limit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerationSpec {
    pub id: String,
    pub kind: DegenerationKind,
    pub source: NodeRef,
    pub target: NodeRef,
    /// basis[i] = coordinates of E_i(t) in the source basis.
    pub basis: Vec<Vec<Laurent>>,
    pub index: BTreeMap<String, Laurent>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Erratum {
    /// (i, j, k) of F(e_i, e_j)_k, 0-based.
    pub entry: [usize; 3],
    pub printed: Poly,
    pub corrected: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcludedSpec {
    pub family: String,
    #[serde(default)]
    pub rename: BTreeMap<String, String>,
    #[serde(default)]
    pub constraints: Vec<Poly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatingSpec {
    pub id: String,
    pub table: u8,
    pub source: NodeRef,
    pub conditions: Vec<Poly>,
    pub excluded: Vec<ExcludedSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Figure1Edge {
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Figure1 {
    pub nodes: Vec<String>,
    pub edges: Vec<Figure1Edge>,
    pub levels: BTreeMap<String, u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Figure2 {
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureTable {
    pub closures: BTreeMap<String, Vec<String>>,
    pub components: Vec<Vec<String>>,
    pub open_orbits: Vec<String>,
}

#[derive(Deserialize)]
struct RawTable {
    table: u8,
    rows: Vec<RawRow>,
}

#[derive(Deserialize)]
struct RawRow {
    name: String,
    dim: usize,
    params: Vec<String>,
    #[serde(default)]
    origin_alias: Option<Origin>,
    #[serde(default)]
    inverse_symbols: BTreeMap<String, Poly>,
    constants: Vec<Vec<Vec<Poly>>>,
    #[serde(default)]
    constraints: Vec<ParamConstraint>,
}

#[derive(Deserialize)]
struct RawWitnessFile {
    witnesses: Vec<RawWitness>,
}

#[derive(Deserialize)]
struct RawWitness {
    id: String,
    rows: Vec<String>,
    f: Vec<Vec<Vec<Poly>>>,
    phi: Vec<Vec<Poly>>,
    #[serde(default)]
    relations: Vec<Poly>,
    #[serde(default)]
    inverse_symbols: BTreeMap<String, Poly>,
    #[serde(default)]
    errata: Vec<Erratum>,
}

#[derive(Deserialize)]
struct RawDegenerations {
    degenerations: Vec<RawDegeneration>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawTableTag {
    Number(u8),
    Label(String),
}

#[derive(Deserialize)]
struct RawDegeneration {
    id: String,
    table: RawTableTag,
    source: NodeRef,
    target: NodeRef,
    basis: Vec<Vec<String>>,
    #[serde(default)]
    index: BTreeMap<String, String>,
}

#[derive(Deserialize)]
struct RawSeparating {
    variables: Vec<String>,
    separating_sets: Vec<SeparatingSpec>,
}

fn parse_json<T: for<'de> Deserialize<'de>>(file: &str, text: &str) -> Result<T, CatalogError> {
    serde_json::from_str(text).map_err(|e| CatalogError::Data {
        file: file.to_string(),
        msg: e.to_string(),
    })
}

fn data_err(file: &str, msg: impl Into<String>) -> CatalogError {
    CatalogError::Data {
        file: file.to_string(),
        msg: msg.into(),
    }
}

fn laurent(file: &str, s: &str) -> Result<Laurent, CatalogError> {
    parse_laurent(s).map_err(|e| data_err(file, format!("`{s}`: {e}")))
}

fn tensor(file: &str, what: &str, c: Vec<Vec<Vec<Poly>>>) -> Result<crate::Tensor, CatalogError> {
    MultiLinearMap::from_table(c).map_err(|e| data_err(file, format!("{what}: {e}")))
}

pub(super) fn load(read: &dyn Fn(&str) -> Result<String, CatalogError>) -> Result<super::Catalog, CatalogError> {
    let mut tables = BTreeMap::new();
    for (n, file) in TABLE_FILES {
        let raw: RawTable = parse_json(file, &read(file)?)?;
        if raw.table != n {
            return Err(data_err(file, format!("declares table {} instead of {n}", raw.table)));
        }
        let mut rows = Vec::new();
        for r in raw.rows {
            let t = tensor(file, &r.name, r.constants)?;
            if t.dim() != r.dim {
                return Err(data_err(file, format!("{}: declared dim {} but table has {}", r.name, r.dim, t.dim())));
            }
            for c in &r.constraints {
                c.expand().map_err(|e| data_err(file, format!("{}: {e}", r.name)))?;
            }
            rows.push(Family {
                name: r.name,
                table: n,
                params: r.params,
                inverse_symbols: r.inverse_symbols,
                tensor: t,
                constraints: r.constraints,
                origin: r.origin_alias,
            });
        }
        tables.insert(n, rows);
    }

    let file = "witnesses.json";
    let raw: RawWitnessFile = parse_json(file, &read(file)?)?;
    let mut witnesses = Vec::new();
    for w in raw.witnesses {
        let f = tensor(file, &w.id, w.f)?;
        if w.phi.len() != f.dim() || w.phi.iter().any(|r| r.len() != f.dim()) {
            return Err(data_err(file, format!("{}: phi has the wrong shape", w.id)));
        }
        witnesses.push(DisplayedWitness {
            id: w.id,
            rows: w.rows,
            f,
            phi: BilinearForm { phi: w.phi },
            relations: w.relations,
            inverse_symbols: w.inverse_symbols,
            errata: w.errata,
        });
    }

    let file = "degenerations.json";
    let raw: RawDegenerations = parse_json(file, &read(file)?)?;
    let mut degenerations = Vec::new();
    for d in raw.degenerations {
        let kind = match &d.table {
            RawTableTag::Number(5) => DegenerationKind::Uniform,
            RawTableTag::Number(7) => DegenerationKind::Index,
            RawTableTag::Label(l) if l == "limit" => DegenerationKind::Limit,
            _ => return Err(data_err(file, format!("{}: unknown table tag", d.id))),
        };
        let basis = d
            .basis
            .iter()
            .map(|row| row.iter().map(|s| laurent(file, s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let mut index = BTreeMap::new();
        for (k, v) in &d.index {
            index.insert(k.clone(), laurent(file, v)?);
        }
        degenerations.push(DegenerationSpec {
            id: d.id,
            kind,
            source: d.source,
            target: d.target,
            basis,
            index,
        });
    }

    let file = "separating.json";
    let raw: RawSeparating = parse_json(file, &read(file)?)?;
    let separating = raw.separating_sets;
    let separating_vars = raw.variables;

    let figure1: Figure1 = parse_json("figure1.json", &read("figure1.json")?)?;
    let figure2: Figure2 = parse_json("figure2.json", &read("figure2.json")?)?;
    let closures: ClosureTable = parse_json("closures.json", &read("closures.json")?)?;

    let cat = super::Catalog {
        tables,
        witnesses,
        degenerations,
        separating,
        separating_vars,
        figure1,
        figure2,
        closures,
    };
    validate(&cat)?;
    Ok(cat)
}

fn validate(cat: &super::Catalog) -> Result<(), CatalogError> {
    let mut seen = std::collections::BTreeSet::new();
    for f in cat.families() {
        if !seen.insert(f.name.clone()) {
            return Err(data_err("tables", format!("duplicate family name {}", f.name)));
        }
    }
    for f in cat.families() {
        if let Some(o) = &f.origin {
            cat.family(&o.family)
                .map_err(|_| data_err("tables", format!("{}: unknown origin {}", f.name, o.family)))?;
        }
    }
    for w in &cat.witnesses {
        for r in &w.rows {
            cat.family(r)
                .map_err(|_| data_err("witnesses.json", format!("{}: unknown row {r}", w.id)))?;
        }
    }
    for d in &cat.degenerations {
        for node in [&d.source, &d.target] {
            cat.family(&node.family)
                .map_err(|_| data_err("degenerations.json", format!("{}: unknown family {}", d.id, node.family)))?;
        }
    }
    for s in &cat.separating {
        cat.family(&s.source.family)
            .map_err(|_| data_err("separating.json", format!("{}: unknown source", s.id)))?;
        for e in &s.excluded {
            cat.family(&e.family)
                .map_err(|_| data_err("separating.json", format!("{}: unknown family {}", s.id, e.family)))?;
        }
    }
    Ok(())
}
