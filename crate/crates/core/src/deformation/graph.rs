use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::DeformationError;
use crate::catalog::{DegenerationKind, DegenerationSpec, NodeRef};

pub const ZERO_NODE: &str = "k2";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Node {
    pub label: String,
    /// Table row name, or k2.
    pub family: String,
    /// A whole one-parameter family rather than a single orbit.
    pub is_family: bool,
    /// Derivation algebra dimension (at a generic member for families).
    pub level: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeKind {
    Uniform,
    Index,
    Limit,
    Member,
    Universal,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub kind: EdgeKind,
}

/// Orbits and families with verified degenerations between them.
#[derive(Clone, Debug, Default, Serialize)]
pub struct DegenerationGraph {
    pub nodes: BTreeMap<String, Node>,
    pub edges: BTreeSet<Edge>,
}

impl DegenerationGraph {
    pub fn new(nodes: impl IntoIterator<Item = Node>) -> Self {
        DegenerationGraph {
            nodes: nodes.into_iter().map(|n| (n.label.clone(), n)).collect(),
            edges: BTreeSet::new(),
        }
    }

    fn require(&self, label: &str) -> Result<(), DeformationError> {
        if self.nodes.contains_key(label) {
            Ok(())
        } else {
            Err(DeformationError::UnknownNode(label.to_string()))
        }
    }

    pub fn add_edge(&mut self, from: &str, to: &str, kind: EdgeKind) -> Result<(), DeformationError> {
        self.require(from)?;
        self.require(to)?;
        if from != to {
            self.edges.insert(Edge {
                from: from.to_string(),
                to: to.to_string(),
                kind,
            });
        }
        Ok(())
    }

    /// Instances of a family present in the graph.
    pub fn members(&self, family_label: &str) -> Vec<String> {
        let Some(node) = self.nodes.get(family_label) else {
            return Vec::new();
        };
        if !node.is_family {
            return Vec::new();
        }
        self.nodes
            .values()
            .filter(|n| !n.is_family && n.family == node.family && n.label != node.family)
            .map(|n| n.label.clone())
            .collect()
    }

    /// Add a verified record; uniform records from a family also apply to each member.
    pub fn add_degeneration(&mut self, spec: &DegenerationSpec) -> Result<(), DeformationError> {
        let from = spec.source.label();
        let to = spec.target.label();
        match spec.kind {
            DegenerationKind::Uniform => {
                self.add_edge(&from, &to, EdgeKind::Uniform)?;
                if self.nodes.get(&from).map(|n| n.is_family).unwrap_or(false) {
                    for m in self.members(&from) {
                        self.add_edge(&m, &to, EdgeKind::Uniform)?;
                    }
                }
            }
            DegenerationKind::Index => self.add_edge(&from, &to, EdgeKind::Index)?,
            DegenerationKind::Limit => self.add_edge(&from, &to, EdgeKind::Limit)?,
        }
        Ok(())
    }

    /// Family to member edges and the universal edges to the zero algebra.
    pub fn add_structural_edges(&mut self) -> Result<(), DeformationError> {
        let labels: Vec<String> = self.nodes.keys().cloned().collect();
        for l in &labels {
            for m in self.members(l) {
                self.add_edge(l, &m, EdgeKind::Member)?;
            }
            if self.nodes.contains_key(ZERO_NODE) {
                self.add_edge(l, ZERO_NODE, EdgeKind::Universal)?;
            }
        }
        Ok(())
    }

    fn successors<'a>(&'a self, label: &'a str) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges.iter().filter(move |e| e.from == label)
    }

    /// Every node reachable from `label`, itself included.
    pub fn reachable(&self, label: &str) -> BTreeSet<String> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![label.to_string()];
        while let Some(x) = stack.pop() {
            if seen.insert(x.clone()) {
                stack.extend(self.successors(&x).map(|e| e.to.clone()));
            }
        }
        seen
    }

    /// The orbit closure: reachable nodes, with a family's own members folded into the family.
    pub fn closure(&self, label: &str) -> BTreeSet<String> {
        let own: BTreeSet<String> = self.members(label).into_iter().collect();
        self.reachable(label).into_iter().filter(|x| !own.contains(x)).collect()
    }

    /// Nodes whose reachable set is not strictly inside another's.
    pub fn component_roots(&self) -> Vec<String> {
        let sets: BTreeMap<&String, BTreeSet<String>> = self.nodes.keys().map(|l| (l, self.reachable(l))).collect();
        let mut roots = Vec::new();
        for (l, s) in &sets {
            let dominated = sets.iter().any(|(m, t)| m != l && s.is_subset(t) && (s != t || !t.contains(*l)));
            if !dominated {
                roots.push((*l).clone());
            }
        }
        roots
    }

    /// Irreducible components as closures of their generic points.
    pub fn components(&self) -> Vec<BTreeSet<String>> {
        self.component_roots().iter().map(|r| self.closure(r)).collect()
    }

    /// Dimension of the orbit (or union of orbits for a family) inside the variety of n-dimensional algebras.
    pub fn dimension(&self, label: &str, n: usize) -> usize {
        let node = &self.nodes[label];
        let orbit = (n * n).saturating_sub(node.level);
        if node.is_family {
            orbit + 1
        } else {
            orbit
        }
    }

    /// Single orbits in no other closure whose dimension is that of the whole variety.
    pub fn open_orbits(&self, n: usize) -> Vec<String> {
        let top = self.nodes.keys().map(|l| self.dimension(l, n)).max().unwrap_or(0);
        self.nodes
            .values()
            .filter(|node| !node.is_family)
            .filter(|node| self.dimension(&node.label, n) == top)
            .filter(|node| {
                !self
                    .nodes
                    .keys()
                    .any(|other| *other != node.label && self.reachable(other).contains(&node.label))
            })
            .map(|node| node.label.clone())
            .collect()
    }

    /// Hasse diagram of strict inclusion between reachable sets.
    pub fn lattice(&self) -> BTreeSet<(String, String)> {
        let sets: BTreeMap<&String, BTreeSet<String>> = self.nodes.keys().map(|l| (l, self.reachable(l))).collect();
        let below = |a: &String, b: &String| sets[b].is_subset(&sets[a]) && sets[a] != sets[b];
        let mut out = BTreeSet::new();
        for a in sets.keys() {
            for b in sets.keys() {
                if !below(a, b) {
                    continue;
                }
                let covered = sets.keys().any(|c| below(a, c) && below(c, b));
                if !covered {
                    out.insert(((*a).clone(), (*b).clone()));
                }
            }
        }
        out
    }

    /// Primary degenerations between table rows: instances folded into their family, labels record the instance value,
    /// transitively reduced.
    pub fn primary(&self) -> PrimaryGraph {
        let fold = |l: &str| -> (String, Option<String>) {
            let node = &self.nodes[l];
            if node.is_family || node.label == node.family {
                return (node.family.clone(), None);
            }
            let value = l.trim_start_matches(&node.family).trim_start_matches('(').trim_end_matches(')');
            (node.family.clone(), Some(format!("alpha={value}")))
        };
        let mut edges: BTreeMap<(String, String), Option<String>> = BTreeMap::new();
        for e in &self.edges {
            if !matches!(e.kind, EdgeKind::Uniform | EdgeKind::Universal) {
                continue;
            }
            let (a, from_label) = fold(&e.from);
            let (b, label) = fold(&e.to);
            if a == b || from_label.is_some() {
                continue;
            }
            edges.entry((a, b)).or_insert(label);
        }
        let keys: BTreeSet<(String, String)> = edges.keys().cloned().collect();
        let reach = |from: &str, to: &str, skip: &(String, String)| -> bool {
            let mut seen = BTreeSet::new();
            let mut stack = vec![from.to_string()];
            while let Some(x) = stack.pop() {
                if x == to {
                    return true;
                }
                if seen.insert(x.clone()) {
                    stack.extend(keys.iter().filter(|k| k.0 == x && *k != skip).map(|k| k.1.clone()));
                }
            }
            false
        };
        let reduced = edges
            .into_iter()
            .filter(|(k, _)| !reach(&k.0, &k.1, k))
            .map(|((from, to), label)| PrimaryEdge { from, to, label })
            .collect();
        let mut levels = BTreeMap::new();
        for node in self.nodes.values() {
            levels.entry(node.family.clone()).or_insert(node.level);
            if node.is_family {
                levels.insert(node.family.clone(), node.level);
            }
        }
        PrimaryGraph { edges: reduced, levels }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PrimaryEdge {
    pub from: String,
    pub to: String,
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimaryGraph {
    pub edges: BTreeSet<PrimaryEdge>,
    pub levels: BTreeMap<String, usize>,
}

/// Label used by graph nodes for a catalog reference.
pub fn node_label(r: &NodeRef) -> String {
    r.label()
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT for the primary graph; parameter-labeled edges are dashed.
pub fn primary_to_dot(g: &PrimaryGraph) -> String {
    let mut out = String::from("digraph primary {\n  rankdir=TB;\n");
    for (name, level) in &g.levels {
        out.push_str(&format!("  {} [label={}];\n", quote(name), quote(&format!("{name}\\nder {level}"))));
    }
    for e in &g.edges {
        match &e.label {
            Some(l) => out.push_str(&format!(
                "  {} -> {} [label={}, style=dashed];\n",
                quote(&e.from),
                quote(&e.to),
                quote(l)
            )),
            None => out.push_str(&format!("  {} -> {};\n", quote(&e.from), quote(&e.to))),
        }
    }
    out.push_str("}\n");
    out
}

/// DOT for an unlabeled edge set.
pub fn edges_to_dot(name: &str, nodes: &[String], edges: &BTreeSet<(String, String)>) -> String {
    let mut out = format!("digraph {name} {{\n");
    for n in nodes {
        out.push_str(&format!("  {};\n", quote(n)));
    }
    for (a, b) in edges {
        out.push_str(&format!("  {} -> {};\n", quote(a), quote(b)));
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DotEdge {
    pub from: String,
    pub to: String,
    pub label: Option<String>,
}

fn unquote(s: &str) -> String {
    let s = s.trim();
    if s.len() >= 2 && s.starts_with('"') && s.ends_with('"') {
        s[1..s.len() - 1].replace("\\\"", "\"").replace("\\\\", "\\")
    } else {
        s.to_string()
    }
}

/// Edges of a DOT file written one statement per line.
pub fn parse_dot_edges(src: &str) -> Result<BTreeSet<DotEdge>, DeformationError> {
    let mut out = BTreeSet::new();
    for (lineno, line) in src.lines().enumerate() {
        let line = line.trim().trim_end_matches(';');
        let Some((lhs, rhs)) = line.split_once("->") else {
            continue;
        };
        let (target, attrs) = match rhs.find('[') {
            Some(p) => (&rhs[..p], Some(&rhs[p..])),
            None => (rhs, None),
        };
        let from = unquote(lhs);
        let to = unquote(target);
        if from.is_empty() || to.is_empty() {
            return Err(DeformationError::Dot(format!("line {}: malformed edge", lineno + 1)));
        }
        let label = attrs.and_then(|a| {
            let start = a.find("label=")? + "label=".len();
            let rest = &a[start..];
            if let Some(stripped) = rest.strip_prefix('"') {
                let end = stripped.find('"')?;
                Some(stripped[..end].to_string())
            } else {
                let end = rest.find([',', ']']).unwrap_or(rest.len());
                Some(rest[..end].trim().to_string())
            }
        });
        out.insert(DotEdge { from, to, label });
    }
    Ok(out)
}
