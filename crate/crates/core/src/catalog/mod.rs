//! Families of 2-dimensional algebras with parameter domains, displayed witnesses and golden geometric data.

mod files;
mod sets;

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, BilinearForm, MultiLinearMap};
use crate::identity::{unknown_names, Domain, Witness};
use crate::symbolic::SymbolicError;
use num_traits::{One, Zero};

use crate::{Poly, Rational, Scalar, Tensor};

pub use files::{
    ClosureTable, DegenerationKind, DegenerationSpec, Erratum, ExcludedSpec, Figure1, Figure1Edge, Figure2, NodeRef,
    SeparatingSpec, DATA_ENV, TABLE_FILES,
};
pub use sets::{expand_set, gamma_functions, GammaValues, SET_NAMES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("{family}: constraint violated: {constraint}")]
    ConstraintViolation { family: String, constraint: String },
    #[error("{family}: no value given for parameter `{param}`")]
    MissingParameter { family: String, param: String },
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("unknown parameter set `{0}`")]
    UnknownSet(String),
    #[error("parameter set `{set}` takes {expected} arguments, got {found}")]
    SetArity { set: String, expected: usize, found: usize },
    #[error("{family}: no admissible sample after {attempts} draws")]
    Exhausted { family: String, attempts: usize },
    #[error("D(alpha, beta, gamma, delta) vanishes, C3 is undefined")]
    DegenerateGamma,
    #[error("{file}: {msg}")]
    Data { file: String, msg: String },
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintKind {
    Equation,
    Inequation,
    SetMembership,
}

/// A condition on the parameters of a family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamConstraint {
    pub kind: ConstraintKind,
    pub polys: Vec<Poly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<String>,
}

impl ParamConstraint {
    /// (equations, inequations) expressing the constraint.
    pub fn expand(&self) -> Result<(Vec<Poly>, Vec<Poly>), CatalogError> {
        match self.kind {
            ConstraintKind::Equation => Ok((self.polys.clone(), Vec::new())),
            ConstraintKind::Inequation => Ok((Vec::new(), self.polys.clone())),
            ConstraintKind::SetMembership => {
                let set = self.set.as_deref().unwrap_or_default();
                Ok((Vec::new(), expand_set(set, &self.polys)?))
            }
        }
    }

    pub fn describe(&self) -> String {
        let args: Vec<String> = self.polys.iter().map(|p| p.to_string()).collect();
        match self.kind {
            ConstraintKind::Equation => args.iter().map(|a| format!("{a} = 0")).collect::<Vec<_>>().join(", "),
            ConstraintKind::Inequation => args.iter().map(|a| format!("{a} != 0")).collect::<Vec<_>>().join(", "),
            ConstraintKind::SetMembership => {
                format!("({}) in {}", args.join(", "), self.set.as_deref().unwrap_or("?"))
            }
        }
    }
}

/// The Table 1 row a later table row specializes, with parameter values in the row's own symbols.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Origin {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, Poly>,
}

/// One row of a classification table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub name: String,
    pub table: u8,
    pub params: Vec<String>,
    /// Symbols standing for 1/base, e.g. gamma_inv for gamma.
    pub inverse_symbols: BTreeMap<String, Poly>,
    pub tensor: Tensor,
    pub constraints: Vec<ParamConstraint>,
    pub origin: Option<Origin>,
}

/// A family with parameters replaced by polynomials in new symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Specialization {
    pub tensor: Tensor,
    /// Remaining free symbols, parameters first.
    pub vars: Vec<String>,
    /// sym * base - 1 for the inverse symbols that stayed symbolic.
    pub relations: Vec<Poly>,
    pub equations: Vec<Poly>,
    pub inequations: Vec<Poly>,
}

impl Specialization {
    pub fn domain(&self) -> Domain<Rational> {
        Domain {
            params: self.vars.clone(),
            equations: [self.relations.clone(), self.equations.clone()].concat(),
            inequations: self.inequations.clone(),
        }
    }

    pub fn is_numeric(&self) -> bool {
        self.tensor.is_numeric()
    }
}

impl Family {
    pub fn dim(&self) -> usize {
        self.tensor.dim()
    }

    pub fn is_parametric(&self) -> bool {
        !self.params.is_empty()
    }

    /// Constraint equations and inequations, the latter including every inverse-symbol base.
    pub fn conditions(&self) -> Result<(Vec<Poly>, Vec<Poly>), CatalogError> {
        let mut eqs = Vec::new();
        let mut ineqs = Vec::new();
        for c in &self.constraints {
            let (e, i) = c.expand()?;
            eqs.extend(e);
            ineqs.extend(i);
        }
        ineqs.extend(self.inverse_symbols.values().cloned());
        Ok((eqs, ineqs))
    }

    pub fn relations(&self) -> Vec<Poly> {
        self.inverse_symbols
            .iter()
            .map(|(s, base)| &(&Poly::var(s) * base) - &Poly::one())
            .collect()
    }

    /// The family over its whole parameter domain.
    pub fn generic(&self) -> Result<Specialization, CatalogError> {
        let identity: BTreeMap<String, Poly> = self.params.iter().map(|p| (p.clone(), Poly::var(p))).collect();
        self.specialize(&identity)
    }

    /// Substitute parameters; constant results are checked against the constraints.
    pub fn specialize(&self, map: &BTreeMap<String, Poly>) -> Result<Specialization, CatalogError> {
        for p in &self.params {
            if !map.contains_key(p) {
                return Err(CatalogError::MissingParameter {
                    family: self.name.clone(),
                    param: p.clone(),
                });
            }
        }
        let violation = |what: String| CatalogError::ConstraintViolation {
            family: self.name.clone(),
            constraint: what,
        };
        let mut subst: BTreeMap<String, Poly> = map.clone();
        let mut relations = Vec::new();
        let mut inverse_vars = Vec::new();
        for (sym, base) in &self.inverse_symbols {
            let b = base.substitute(map);
            match b.as_constant() {
                Some(c) if c.is_zero() => return Err(violation(format!("{base} != 0"))),
                Some(c) => {
                    subst.insert(sym.clone(), Poly::constant(Rational::one() / c));
                }
                None => {
                    relations.push(&(&Poly::var(sym) * &b) - &Poly::one());
                    inverse_vars.push(sym.clone());
                }
            }
        }
        let mut equations = Vec::new();
        let mut inequations = Vec::new();
        for c in &self.constraints {
            let (eqs, ineqs) = c.expand()?;
            for e in eqs {
                let v = e.substitute(&subst);
                match v.as_constant() {
                    Some(x) if x.is_zero() => {}
                    Some(_) => return Err(violation(c.describe())),
                    None => equations.push(v),
                }
            }
            for q in ineqs {
                let v = q.substitute(&subst);
                match v.as_constant() {
                    Some(x) if x.is_zero() => return Err(violation(c.describe())),
                    Some(_) => {}
                    None => inequations.push(v),
                }
            }
        }
        let tensor = self.tensor.substitute(&subst);
        let mut vars: Vec<String> = Vec::new();
        for p in map.values() {
            for v in p.vars() {
                if !vars.contains(v) {
                    vars.push(v.clone());
                }
            }
        }
        vars.extend(inverse_vars);
        Ok(Specialization {
            tensor,
            vars,
            relations,
            equations,
            inequations,
        })
    }

    /// Numeric tensor at a parameter point, after checking every constraint exactly.
    pub fn instantiate(&self, values: &BTreeMap<String, Rational>) -> Result<Tensor, CatalogError> {
        let map: BTreeMap<String, Poly> = values
            .iter()
            .filter(|(k, _)| self.params.contains(k))
            .map(|(k, v)| (k.clone(), Poly::constant(v.clone())))
            .collect();
        Ok(self.specialize(&map)?.tensor)
    }

    /// Values of the inverse symbols at a parameter point.
    pub fn inverse_values(&self, values: &BTreeMap<String, Rational>) -> Result<BTreeMap<String, Rational>, CatalogError> {
        let mut out = BTreeMap::new();
        for (sym, base) in &self.inverse_symbols {
            let b = base.eval(values)?;
            if b.is_zero() {
                return Err(CatalogError::ConstraintViolation {
                    family: self.name.clone(),
                    constraint: format!("{base} != 0"),
                });
            }
            out.insert(sym.clone(), Rational::one() / b);
        }
        Ok(out)
    }

    /// Deterministic admissible parameter points by rejection sampling.
    pub fn sample(&self, count: usize, seed: u64) -> Result<Vec<BTreeMap<String, Rational>>, CatalogError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        let limit = 1000 * count.max(1);
        let mut attempts = 0;
        while out.len() < count {
            if attempts >= limit {
                return Err(CatalogError::Exhausted {
                    family: self.name.clone(),
                    attempts,
                });
            }
            attempts += 1;
            let point: BTreeMap<String, Rational> =
                self.params.iter().map(|p| (p.clone(), random_rational(&mut rng))).collect();
            if self.instantiate(&point).is_ok() {
                out.push(point);
            }
        }
        Ok(out)
    }

    /// Parameter values of the origin row at a point of this row.
    pub fn origin_point(&self, values: &BTreeMap<String, Rational>) -> Result<Option<(String, BTreeMap<String, Rational>)>, CatalogError> {
        let Some(origin) = &self.origin else {
            return Ok(None);
        };
        let mut full = values.clone();
        full.extend(self.inverse_values(values)?);
        let mut params = BTreeMap::new();
        for (k, p) in &origin.params {
            params.insert(k.clone(), p.eval(&full)?);
        }
        Ok(Some((origin.family.clone(), params)))
    }
}

/// Rational with numerator in [-12, 12] and denominator in [1, 6].
pub fn random_rational(rng: &mut impl Rng) -> Rational {
    let n: i64 = rng.gen_range(-12..=12);
    let d: i64 = rng.gen_range(1..=6);
    Rational::ratio(n, d)
}

/// A witness as displayed for a rigid or conservative row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisplayedWitness {
    pub id: String,
    pub rows: Vec<String>,
    pub f: Tensor,
    pub phi: BilinearForm<Rational>,
    pub relations: Vec<Poly>,
    pub inverse_symbols: BTreeMap<String, Poly>,
    pub errata: Vec<Erratum>,
}

impl DisplayedWitness {
    /// The witness with errata applied (`corrected`) or as printed.
    pub fn witness(&self, corrected: bool) -> Witness<Rational> {
        let mut f = self.f.clone();
        if corrected {
            for e in &self.errata {
                f.set(&[e.entry[0], e.entry[1]], e.entry[2], e.corrected.clone());
            }
        }
        let (fnames, pnames) = unknown_names(2);
        let mut free = Vec::new();
        for name in fnames.iter().chain(&pnames) {
            let used = f.entries().iter().any(|x| x.contains_var(name))
                || self.phi.phi.iter().flatten().any(|x| x.contains_var(name));
            if used {
                free.push(name.clone());
            }
        }
        Witness {
            f,
            phi: self.phi.clone(),
            free_symbols: free,
            constraints: Vec::new(),
        }
    }

    /// sym * base - 1 for the witness's own inverse symbols, plus its case equations.
    pub fn all_relations(&self) -> Vec<Poly> {
        let mut out = self.relations.clone();
        for (s, base) in &self.inverse_symbols {
            out.push(&(&Poly::var(s) * base) - &Poly::one());
        }
        out
    }

    /// The conservative specialization: every phi symbol set to zero.
    pub fn conservative(&self, corrected: bool) -> Witness<Rational> {
        let (_, pnames) = unknown_names(2);
        let zeros: BTreeMap<String, Rational> = pnames.iter().map(|p| (p.clone(), Rational::zero())).collect();
        let w = self.witness(corrected);
        Witness {
            f: w.f.substitute_values(&zeros),
            phi: BilinearForm {
                phi: w
                    .phi
                    .phi
                    .iter()
                    .map(|r| r.iter().map(|x| x.substitute_values(&zeros)).collect())
                    .collect(),
            },
            free_symbols: w.free_symbols.into_iter().filter(|s| !pnames.contains(s)).collect(),
            constraints: Vec::new(),
        }
    }
}

/// All catalog data: Tables 1 to 4, displayed witnesses, degeneration and separating data, golden figures.
#[derive(Clone, Debug)]
pub struct Catalog {
    pub tables: BTreeMap<u8, Vec<Family>>,
    pub witnesses: Vec<DisplayedWitness>,
    pub degenerations: Vec<DegenerationSpec>,
    pub separating: Vec<SeparatingSpec>,
    pub separating_vars: Vec<String>,
    pub figure1: Figure1,
    pub figure2: Figure2,
    pub closures: ClosureTable,
}

impl Catalog {
    /// The copy compiled into the binary.
    pub fn embedded() -> Result<Self, CatalogError> {
        files::load(&files::embedded_reader)
    }

    pub fn from_dir(dir: &Path) -> Result<Self, CatalogError> {
        let read = |name: &str| {
            std::fs::read_to_string(dir.join(name)).map_err(|e| CatalogError::Data {
                file: dir.join(name).display().to_string(),
                msg: e.to_string(),
            })
        };
        files::load(&read)
    }

    /// `ALGVAR_DATA` when set, otherwise the embedded copy.
    pub fn load() -> Result<Self, CatalogError> {
        match std::env::var_os(DATA_ENV) {
            Some(dir) => Self::from_dir(Path::new(&dir)),
            None => Self::embedded(),
        }
    }

    pub fn table(&self, n: u8) -> &[Family] {
        self.tables.get(&n).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn family(&self, name: &str) -> Result<&Family, CatalogError> {
        self.tables
            .values()
            .flatten()
            .find(|f| f.name == name)
            .ok_or_else(|| CatalogError::UnknownFamily(name.to_string()))
    }

    pub fn families(&self) -> impl Iterator<Item = &Family> {
        self.tables.values().flatten()
    }

    /// Displayed witnesses attached to a table row.
    pub fn witnesses_for(&self, row: &str) -> Vec<&DisplayedWitness> {
        self.witnesses.iter().filter(|w| w.rows.iter().any(|r| r == row)).collect()
    }

    /// Instantiate the node a degeneration or separating record refers to.
    pub fn resolve(&self, node: &NodeRef) -> Result<Specialization, CatalogError> {
        let fam = self.family(&node.family)?;
        fam.specialize(&node.params)
    }
}

/// The zero algebra on k^n.
pub fn zero_algebra(n: usize) -> Tensor {
    MultiLinearMap::zero(n, 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConjectureKind {
    DirectSum,
    Nu,
}

/// The n-dimensional algebras e_i^2 = e_i (direct sum) and e^2 = e, e n_i = alpha n_i, n_i e = (1 - alpha) n_i.
pub fn conjecture_family(kind: ConjectureKind, n: usize, alpha: Option<&Rational>) -> Result<Tensor, CatalogError> {
    if n < 2 {
        return Err(CatalogError::Algebra(AlgebraError::Shape(format!("dimension {n} < 2"))));
    }
    let mut t = MultiLinearMap::zero(n, 2);
    match kind {
        ConjectureKind::DirectSum => {
            for i in 0..n {
                t.set(&[i, i], i, Poly::one());
            }
        }
        ConjectureKind::Nu => {
            let a = alpha.ok_or_else(|| CatalogError::MissingParameter {
                family: "nu".into(),
                param: "alpha".into(),
            })?;
            t.set(&[0, 0], 0, Poly::one());
            for i in 1..n {
                t.set(&[0, i], i, Poly::constant(a.clone()));
                t.set(&[i, 0], i, Poly::constant(Rational::one() - a));
            }
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests;
