use std::collections::BTreeMap;

use serde::Serialize;

use super::DeformationError;
use crate::algebra::{derivation_algebra_dim, product_span_dim, MultiLinearMap};
use crate::catalog::{Catalog, DegenerationKind, DegenerationSpec, NodeRef};
use crate::groebner::Caps;
use crate::identity::Domain;
use crate::linalg;
use crate::{Laurent, Poly, Rational, Tensor};

/// A parametrized basis E(t), optionally with a parametrized index f(t), from a source to a target tensor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerationWitness {
    pub id: String,
    pub source: Tensor,
    /// Where the source parameters live, before the index is applied.
    pub domain: Domain<Rational>,
    pub target: Tensor,
    /// basis[i][j] = coordinate j of E_i(t).
    pub basis: Vec<Vec<Laurent>>,
    pub index: BTreeMap<String, Laurent>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum Refutation {
    /// c_ij^k(t) has a pole of the given order at t = 0.
    PoleAtZero { entry: [usize; 3], order: i32 },
    MismatchAtZero { entry: [usize; 3], limit: String, expected: String },
    /// The index leaves the source domain: this inequation vanishes identically.
    IndexLeavesDomain { inequation: String },
    /// The lowest coefficient of det E(t) may vanish on the domain.
    LeadingDeterminant { coefficient: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum DegenerationOutcome {
    Verified { det_order: i32 },
    Refuted(Refutation),
}

impl DegenerationOutcome {
    pub fn is_verified(&self) -> bool {
        matches!(self, DegenerationOutcome::Verified { .. })
    }
}

fn undecided(e: impl std::fmt::Display) -> DeformationError {
    DeformationError::Undecided(e.to_string())
}

/// Apply the index and basis change, check for poles and compare the t = 0 limit with the target.
pub fn verify_degeneration(w: &DegenerationWitness, caps: Caps) -> Result<DegenerationOutcome, DeformationError> {
    let n = w.source.dim();
    if w.target.dim() != n || w.basis.len() != n || w.basis.iter().any(|r| r.len() != n) {
        return Err(DeformationError::Shape(format!("{}: basis or target has the wrong size", w.id)));
    }
    for q in &w.domain.inequations {
        if Laurent::lift(q, &w.index).is_zero() {
            return Ok(DegenerationOutcome::Refuted(Refutation::IndexLeavesDomain {
                inequation: q.to_string(),
            }));
        }
    }
    let mut domain = w.domain.clone();
    domain.inequations.retain(|q| w.index.keys().all(|k| !q.contains_var(k)));
    domain.params.retain(|p| !w.index.contains_key(p));

    let mut c: Vec<Vec<Vec<Laurent>>> = vec![vec![Vec::new(); n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = (0..n).map(|k| Laurent::lift(w.source.get(&[i, j], k), &w.index)).collect();
        }
    }

    let g: Vec<Vec<Laurent>> = (0..n).map(|k| (0..n).map(|i| w.basis[i][k].clone()).collect()).collect();
    let det = linalg::det(&g);
    if det.is_zero() {
        return Err(DeformationError::SingularBasis(w.id.clone()));
    }
    let (k0, d0) = det.leading().map(|(e, c)| (e, c.clone())).ok_or_else(|| DeformationError::SingularBasis(w.id.clone()))?;
    if !domain.implies_nonzero(&d0, caps).map_err(undecided)? {
        return Ok(DegenerationOutcome::Refuted(Refutation::LeadingDeterminant {
            coefficient: d0.to_string(),
        }));
    }
    let adj = linalg::adjugate(&g);

    for i in 0..n {
        for j in 0..n {
            let mut prod = vec![Laurent::zero(); n];
            for a in 0..n {
                if w.basis[i][a].is_zero() {
                    continue;
                }
                for b in 0..n {
                    if w.basis[j][b].is_zero() {
                        continue;
                    }
                    let s = &w.basis[i][a] * &w.basis[j][b];
                    for (m, slot) in prod.iter_mut().enumerate() {
                        if !c[a][b][m].is_zero() {
                            *slot = &*slot + &(&s * &c[a][b][m]);
                        }
                    }
                }
            }
            let image = linalg::mat_vec(&adj, &prod);
            for (m, num) in image.iter().enumerate() {
                for (e, coeff) in num.terms() {
                    if e >= k0 {
                        break;
                    }
                    if !domain.implies_zero(coeff, caps).map_err(undecided)? {
                        return Ok(DegenerationOutcome::Refuted(Refutation::PoleAtZero {
                            entry: [i, j, m],
                            order: e - k0,
                        }));
                    }
                }
                let limit = num.coeff(k0);
                let expected = w.target.get(&[i, j], m);
                let diff = &limit - &(&d0 * expected);
                if !domain.implies_zero(&diff, caps).map_err(undecided)? {
                    let shown = match d0.as_constant() {
                        Some(c) => limit.scale(&c.recip()).to_string(),
                        None => format!("({limit})/({d0})"),
                    };
                    return Ok(DegenerationOutcome::Refuted(Refutation::MismatchAtZero {
                        entry: [i, j, m],
                        limit: shown,
                        expected: expected.to_string(),
                    }));
                }
            }
        }
    }
    Ok(DegenerationOutcome::Verified { det_order: k0 })
}

/// E_i = t e_i, degenerating anything to the zero algebra.
pub fn universal_witness(id: &str, source: &Tensor, domain: &Domain<Rational>) -> DegenerationWitness {
    let n = source.dim();
    DegenerationWitness {
        id: id.to_string(),
        source: source.clone(),
        domain: domain.clone(),
        target: MultiLinearMap::zero(n, 2),
        basis: (0..n)
            .map(|i| (0..n).map(|j| if i == j { Laurent::t_power(1) } else { Laurent::zero() }).collect())
            .collect(),
        index: BTreeMap::new(),
    }
}

/// The identity basis, degenerating a tensor to itself.
pub fn identity_witness(id: &str, source: &Tensor, domain: &Domain<Rational>) -> DegenerationWitness {
    let n = source.dim();
    DegenerationWitness {
        id: id.to_string(),
        source: source.clone(),
        domain: domain.clone(),
        target: source.clone(),
        basis: (0..n)
            .map(|i| (0..n).map(|j| if i == j { Laurent::one() } else { Laurent::zero() }).collect())
            .collect(),
        index: BTreeMap::new(),
    }
}

/// Resolve a catalog record into a witness.
pub fn witness_from_spec(cat: &Catalog, spec: &DegenerationSpec) -> Result<DegenerationWitness, DeformationError> {
    let source = cat.resolve(&spec.source)?;
    let target = cat.resolve(&spec.target)?;
    Ok(DegenerationWitness {
        id: spec.id.clone(),
        domain: source.domain(),
        source: source.tensor,
        target: target.tensor,
        basis: spec.basis.clone(),
        index: spec.index.clone(),
    })
}

/// Parameters of `second.source` that must be fixed to follow `first`, or None when the pair does not chain.
fn unify(first: &NodeRef, second: &NodeRef) -> Option<BTreeMap<String, Poly>> {
    if first.family != second.family {
        return None;
    }
    let mut sigma = BTreeMap::new();
    for (k, v) in &second.params {
        let fixed = first.params.get(k)?;
        if v.is_constant() {
            if v != fixed {
                return None;
            }
        } else if *v == Poly::var(k) {
            sigma.insert(k.clone(), fixed.clone());
        } else {
            return None;
        }
    }
    Some(sigma)
}

/// Whether `second` can follow `first`.
pub fn composable(first: &DegenerationSpec, second: &DegenerationSpec) -> bool {
    second.index.is_empty() && second.kind != DegenerationKind::Limit && unify(&first.target, &second.source).is_some()
}

/// A chained witness: E''_i(t) = sum_j b2[i][j](t) E'_j(t^speed).
pub fn compose_specs(first: &DegenerationSpec, second: &DegenerationSpec, speed: i32) -> Option<DegenerationSpec> {
    if !composable(first, second) {
        return None;
    }
    let sigma = unify(&first.target, &second.source)?;
    let n = first.basis.len();
    let fast: Vec<Vec<Laurent>> = first
        .basis
        .iter()
        .map(|r| r.iter().map(|x| x.compose_power(speed)).collect())
        .collect();
    let slow: Vec<Vec<Laurent>> = second
        .basis
        .iter()
        .map(|r| r.iter().map(|x| x.map_coefficients(|c| c.substitute(&sigma))).collect())
        .collect();
    let mut basis = vec![vec![Laurent::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            for (k, coord) in basis[i].iter_mut().enumerate() {
                *coord = &*coord + &(&slow[i][j] * &fast[j][k]);
            }
        }
    }
    let target = NodeRef {
        family: second.target.family.clone(),
        params: second
            .target
            .params
            .iter()
            .map(|(k, v)| (k.clone(), v.substitute(&sigma)))
            .collect(),
    };
    Some(DegenerationSpec {
        id: format!("{} ; {}", first.id, second.id),
        kind: first.kind,
        source: first.source.clone(),
        target,
        basis,
        index: first.index.iter().map(|(k, v)| (k.clone(), v.compose_power(speed))).collect(),
    })
}

pub const MAX_SPEED: i32 = 8;

/// Try t -> t^N on the first witness for N = 1..=MAX_SPEED; returns the first N that verifies.
pub fn verify_composition(
    cat: &Catalog,
    first: &DegenerationSpec,
    second: &DegenerationSpec,
    caps: Caps,
) -> Result<Option<(i32, DegenerationSpec)>, DeformationError> {
    for speed in 1..=MAX_SPEED {
        let Some(spec) = compose_specs(first, second, speed) else {
            return Ok(None);
        };
        let w = witness_from_spec(cat, &spec)?;
        match verify_degeneration(&w, caps) {
            Ok(o) if o.is_verified() => return Ok(Some((speed, spec))),
            Ok(_) | Err(DeformationError::SingularBasis(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NecessaryCondition {
    DerivationDim,
    ProductSpan,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NecessaryCheck {
    pub source_derivations: usize,
    pub target_derivations: usize,
    pub source_span: usize,
    pub target_span: usize,
    pub failed: Vec<NecessaryCondition>,
}

impl NecessaryCheck {
    pub fn passes(&self) -> bool {
        self.failed.is_empty()
    }
}

/// dim Der(A) < dim Der(B) and dim A^2 >= dim B^2, required of any proper degeneration A -> B.
///
/// With `family_source` the orbit dimension of A is raised by one, as for the union of orbits of a 1-parameter family.
pub fn check_necessary_conditions(a: &Tensor, b: &Tensor, family_source: bool) -> Result<NecessaryCheck, DeformationError> {
    let da = derivation_algebra_dim(a)?;
    let db = derivation_algebra_dim(b)?;
    let sa = product_span_dim(a)?;
    let sb = product_span_dim(b)?;
    let mut failed = Vec::new();
    let lhs = if family_source { da } else { da + 1 };
    if lhs > db {
        failed.push(NecessaryCondition::DerivationDim);
    }
    if sa < sb {
        failed.push(NecessaryCondition::ProductSpan);
    }
    Ok(NecessaryCheck {
        source_derivations: da,
        target_derivations: db,
        source_span: sa,
        target_span: sb,
        failed,
    })
}
