//! Buchberger's algorithm over an exact field, emptiness over the algebraic closure, and isomorphism tests.

mod dpoly;
mod search;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::algebra::{change_basis_with_inverse, AlgebraError, LinearMap, StructureTensor};
use crate::symbolic::{MultiPoly, Scalar};

pub use dpoly::{DPoly, MonomialOrder};
pub use search::{candidate_values, find_rational_point, SearchBudget};

use dpoly::{coprime, divides, lcm, normal_form, s_polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("resource exhausted after {pairs} S-pairs (degree cap {degree_cap}, pair cap {pair_cap})")]
    ResourceExhausted { pairs: usize, degree_cap: u32, pair_cap: usize },
    #[error("variable `{0}` is not declared in the ideal")]
    UndeclaredVariable(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub degree: u32,
    pub pairs: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            degree: 20,
            pairs: 50_000,
        }
    }
}

/// Finitely generated ideal over a declared variable list.
#[derive(Clone, Debug)]
pub struct Ideal<F> {
    pub vars: Vec<String>,
    pub generators: Vec<MultiPoly<F>>,
    pub order: MonomialOrder,
}

impl<F: Scalar> Ideal<F> {
    pub fn new(vars: Vec<String>, generators: Vec<MultiPoly<F>>) -> Result<Self, GroebnerError> {
        for g in &generators {
            for v in g.vars() {
                if !vars.contains(v) {
                    return Err(GroebnerError::UndeclaredVariable(v.clone()));
                }
            }
        }
        Ok(Ideal {
            vars,
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
            order: MonomialOrder::Grevlex,
        })
    }

    /// Variables sorted by name.
    pub fn from_generators(generators: Vec<MultiPoly<F>>) -> Self {
        let mut vars: Vec<String> = generators.iter().flat_map(|g| g.vars().iter().cloned()).collect();
        vars.sort();
        vars.dedup();
        Ideal {
            vars,
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
            order: MonomialOrder::Grevlex,
        }
    }

    pub fn with_order(mut self, order: MonomialOrder) -> Self {
        self.order = order;
        self
    }
}

/// Reduced Gröbner basis.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<F> {
    pub vars: Vec<String>,
    pub order: MonomialOrder,
    polys: Vec<DPoly<F>>,
    pub pairs_processed: usize,
}

impl<F: Scalar> GroebnerBasis<F> {
    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_constant()
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn polys(&self) -> Vec<MultiPoly<F>> {
        self.polys.iter().map(|p| p.to_poly(&self.vars)).collect()
    }

    /// Normal form; variables outside the ring are carried along as extra symbols.
    pub fn reduce(&self, p: &MultiPoly<F>) -> MultiPoly<F> {
        if self.polys.is_empty() || p.is_zero() {
            return p.clone();
        }
        let mut vars = self.vars.clone();
        for v in p.vars() {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        let extra = vars.len() - self.vars.len();
        let basis: Vec<DPoly<F>> = if extra == 0 {
            self.polys.clone()
        } else {
            self.polys
                .iter()
                .map(|g| DPoly {
                    terms: g
                        .terms
                        .iter()
                        .map(|(e, c)| {
                            let mut e = e.clone();
                            e.extend(std::iter::repeat_n(0, extra));
                            (e, c.clone())
                        })
                        .collect(),
                })
                .collect()
        };
        // extra symbols act as coefficients: order them below the ring variables by block comparison
        let order = self.order;
        let n = self.vars.len();
        let block = move |a: &[u32], b: &[u32]| {
            order
                .cmp(&a[..n], &b[..n])
                .then_with(|| MonomialOrder::Grevlex.cmp(&a[n..], &b[n..]))
        };
        let mut terms = p.exponents_in(&vars).expect("all variables declared");
        terms.sort_by(|x, y| block(&y.0, &x.0));
        let nf = block_normal_form(DPoly { terms }, &basis, n, order);
        nf.to_poly(&vars)
    }

    pub fn contains(&self, p: &MultiPoly<F>) -> bool {
        self.reduce(p).is_zero()
    }

    /// Post-hoc check that every S-polynomial reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        for i in 0..self.polys.len() {
            for j in (i + 1)..self.polys.len() {
                let s = s_polynomial(&self.polys[i], &self.polys[j], self.order);
                if !normal_form(&s, &self.polys, self.order).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

impl<F: Scalar> fmt::Display for GroebnerBasis<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.polys().iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Reduce only the ring-variable part of leading monomials (extra symbols are coefficients).
fn block_normal_form<F: Scalar>(p: DPoly<F>, basis: &[DPoly<F>], n: usize, order: MonomialOrder) -> DPoly<F> {
    let cmp = move |a: &[u32], b: &[u32]| {
        order
            .cmp(&a[..n], &b[..n])
            .then_with(|| MonomialOrder::Grevlex.cmp(&a[n..], &b[n..]))
    };
    let mut rest = p;
    let mut done: Vec<(Vec<u32>, F)> = Vec::new();
    while !rest.terms.is_empty() {
        let (lm, lc) = rest.terms[0].clone();
        let divisor = basis.iter().find(|g| divides(&g.lm()[..n], &lm[..n]));
        match divisor {
            Some(g) => {
                let m: Vec<u32> = lm.iter().zip(g.lm()).map(|(a, b)| a - b).collect();
                let c = lc / g.lc().clone();
                let shifted: Vec<(Vec<u32>, F)> = g
                    .terms
                    .iter()
                    .map(|(e, k)| (e.iter().zip(&m).map(|(a, b)| a + b).collect(), k.clone() * c.clone()))
                    .collect();
                let mut merged: BTreeMap<Vec<u32>, F> = BTreeMap::new();
                for (e, k) in rest.terms.into_iter() {
                    merged.insert(e, k);
                }
                for (e, k) in shifted {
                    let v = merged.remove(&e).unwrap_or_else(F::zero) - k;
                    if !v.is_zero() {
                        merged.insert(e, v);
                    }
                }
                let mut terms: Vec<(Vec<u32>, F)> = merged.into_iter().collect();
                terms.sort_by(|x, y| cmp(&y.0, &x.0));
                rest = DPoly { terms };
            }
            None => done.push(rest.terms.remove(0)),
        }
    }
    DPoly { terms: done }
}

/// Buchberger with the product and chain criteria and the normal selection strategy.
pub fn buchberger<F: Scalar>(ideal: &Ideal<F>, caps: Caps) -> Result<GroebnerBasis<F>, GroebnerError> {
    let order = ideal.order;
    let vars = ideal.vars.clone();
    let unit = |pairs| GroebnerBasis {
        vars: vars.clone(),
        order,
        polys: vec![DPoly {
            terms: vec![(vec![0; vars.len()], F::one())],
        }],
        pairs_processed: pairs,
    };
    let mut g: Vec<DPoly<F>> = Vec::new();
    for p in &ideal.generators {
        let d = DPoly::from_poly(p, &vars, order);
        let r = normal_form(&d, &g, order);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(unit(0));
        }
        g.push(r.monic());
    }
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..g.len() {
        for i in 0..j {
            pairs.insert((i, j));
        }
    }
    let mut processed = 0usize;
    while !pairs.is_empty() {
        let &(i, j) = pairs
            .iter()
            .min_by(|a, b| {
                let la = lcm(g[a.0].lm(), g[a.1].lm());
                let lb = lcm(g[b.0].lm(), g[b.1].lm());
                order.cmp(&la, &lb).then_with(|| a.cmp(b))
            })
            .unwrap();
        pairs.remove(&(i, j));
        if coprime(g[i].lm(), g[j].lm()) {
            continue;
        }
        let l = lcm(g[i].lm(), g[j].lm());
        let chain = (0..g.len()).any(|k| {
            k != i
                && k != j
                && divides(g[k].lm(), &l)
                && !pairs.contains(&(i.min(k), i.max(k)))
                && !pairs.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        processed += 1;
        let deg: u32 = l.iter().sum();
        if processed > caps.pairs || deg > caps.degree {
            return Err(GroebnerError::ResourceExhausted {
                pairs: processed,
                degree_cap: caps.degree,
                pair_cap: caps.pairs,
            });
        }
        let s = s_polynomial(&g[i], &g[j], order);
        let r = normal_form(&s, &g, order);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(unit(processed));
        }
        let r = r.monic();
        let new = g.len();
        g.push(r);
        for k in 0..new {
            pairs.insert((k, new));
        }
    }
    Ok(GroebnerBasis {
        polys: reduce_basis(g, order),
        vars,
        order,
        pairs_processed: processed,
    })
}

fn reduce_basis<F: Scalar>(g: Vec<DPoly<F>>, order: MonomialOrder) -> Vec<DPoly<F>> {
    let mut minimal: Vec<DPoly<F>> = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let redundant = g.iter().enumerate().any(|(j, q)| {
            j != i && divides(q.lm(), p.lm()) && (q.lm() != p.lm() || j < i)
        });
        if !redundant {
            minimal.push(p.clone());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<DPoly<F>> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, q)| q.clone())
            .collect();
        out.push(normal_form(&minimal[i], &others, order).monic());
    }
    out.sort_by(|a, b| order.cmp(b.lm(), a.lm()));
    out
}

/// Outcome of an emptiness query over the algebraic closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Emptiness<F> {
    /// 1 lies in the saturated ideal.
    Empty,
    /// Points exist over the closure; a rational witness is attached when the search found one.
    NonEmpty(Option<BTreeMap<String, F>>),
    Unknown,
}

impl<F> Emptiness<F> {
    pub fn is_empty(&self) -> bool {
        matches!(self, Emptiness::Empty)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Emptiness::Empty => "yes",
            Emptiness::NonEmpty(_) => "no",
            Emptiness::Unknown => "unknown",
        }
    }
}

pub const RABINOWITSCH_PREFIX: &str = "rab_y";

/// Saturate by each nonvanishing q with a fresh variable y and q*y - 1, then decide 1 ∈ I.
pub fn is_empty<F: Scalar>(
    vars: &[String],
    system: &[MultiPoly<F>],
    nonvanishing: &[MultiPoly<F>],
    caps: Caps,
) -> Emptiness<F> {
    match saturated_basis(vars, system, nonvanishing, caps) {
        Ok(gb) if gb.is_unit() => Emptiness::Empty,
        Ok(_) => Emptiness::NonEmpty(point_for(vars, system, nonvanishing)),
        Err(_) => match point_for(vars, system, nonvanishing) {
            Some(p) => Emptiness::NonEmpty(Some(p)),
            None => Emptiness::Unknown,
        },
    }
}

/// Like `is_empty` but skips the rational point search.
pub fn is_empty_fast<F: Scalar>(
    vars: &[String],
    system: &[MultiPoly<F>],
    nonvanishing: &[MultiPoly<F>],
    caps: Caps,
) -> Emptiness<F> {
    match saturated_basis(vars, system, nonvanishing, caps) {
        Ok(gb) if gb.is_unit() => Emptiness::Empty,
        Ok(_) => Emptiness::NonEmpty(None),
        Err(_) => Emptiness::Unknown,
    }
}

/// Gröbner basis of ⟨system, q_i y_i - 1⟩ with the declared variables first.
pub fn saturated_basis<F: Scalar>(
    vars: &[String],
    system: &[MultiPoly<F>],
    nonvanishing: &[MultiPoly<F>],
    caps: Caps,
) -> Result<GroebnerBasis<F>, GroebnerError> {
    let mut all_vars: Vec<String> = vars.to_vec();
    for p in system.iter().chain(nonvanishing) {
        for v in p.vars() {
            if !all_vars.contains(v) {
                all_vars.push(v.clone());
            }
        }
    }
    let mut gens: Vec<MultiPoly<F>> = system.to_vec();
    for (k, q) in nonvanishing.iter().enumerate() {
        if q.as_constant().map(|c| !c.is_zero()).unwrap_or(false) {
            continue;
        }
        let y = format!("{RABINOWITSCH_PREFIX}{k}");
        all_vars.push(y.clone());
        gens.push(&(q * &MultiPoly::var(&y)) - &MultiPoly::one());
    }
    let ideal = Ideal::new(all_vars, gens)?;
    buchberger(&ideal, caps)
}

fn point_for<F: Scalar>(
    vars: &[String],
    system: &[MultiPoly<F>],
    nonvanishing: &[MultiPoly<F>],
) -> Option<BTreeMap<String, F>> {
    let mut all_vars: Vec<String> = vars.to_vec();
    for p in system.iter().chain(nonvanishing) {
        for v in p.vars() {
            if !all_vars.contains(v) {
                all_vars.push(v.clone());
            }
        }
    }
    find_rational_point(&all_vars, system, nonvanishing, SearchBudget::default())
}

/// Isomorphism verdict over the algebraic closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Isomorphism<F> {
    /// g with change_basis(b, g) = a, when the search found a rational one.
    Isomorphic(Option<LinearMap<F>>),
    NotIsomorphic,
    Unknown,
}

impl<F> Isomorphism<F> {
    pub fn label(&self) -> &'static str {
        match self {
            Isomorphism::Isomorphic(_) => "yes",
            Isomorphism::NotIsomorphic => "no",
            Isomorphism::Unknown => "unknown",
        }
    }
}

pub fn group_variables(n: usize) -> Vec<String> {
    let mut out = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            out.push(format!("g{}{}", r + 1, c + 1));
        }
    }
    out
}

/// Generic matrix with entries g_rc.
pub fn generic_matrix<F: Scalar>(n: usize) -> LinearMap<F> {
    LinearMap {
        m: (0..n)
            .map(|r| (0..n).map(|c| MultiPoly::var(&format!("g{}{}", r + 1, c + 1))).collect())
            .collect(),
    }
}

/// Decide whether an invertible g with b(gx, gy) = g a(x, y) exists.
pub fn are_isomorphic<F: Scalar>(a: &StructureTensor<F>, b: &StructureTensor<F>, caps: Caps) -> Isomorphism<F> {
    if a.dim() != b.dim() {
        return Isomorphism::NotIsomorphic;
    }
    let n = a.dim();
    let g = generic_matrix::<F>(n);
    let cols: Vec<Vec<MultiPoly<F>>> = (0..n).map(|i| g.column(i)).collect();
    let mut eqs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let lhs = b.multiply(&cols[i], &cols[j]).expect("same dimension");
            let rhs = g.apply(&a.image(&[i, j]));
            for k in 0..n {
                let e = &lhs[k] - &rhs[k];
                if !e.is_zero() {
                    eqs.push(e);
                }
            }
        }
    }
    let vars = group_variables(n);
    let det = g.det();
    match saturated_basis(&vars, &eqs, std::slice::from_ref(&det), caps) {
        Ok(gb) if gb.is_unit() => Isomorphism::NotIsomorphic,
        Ok(_) => Isomorphism::Isomorphic(isomorphism_witness(a, b, &vars, &eqs, &det)),
        Err(_) => match isomorphism_witness(a, b, &vars, &eqs, &det) {
            Some(w) => Isomorphism::Isomorphic(Some(w)),
            None => Isomorphism::Unknown,
        },
    }
}

fn isomorphism_witness<F: Scalar>(
    a: &StructureTensor<F>,
    b: &StructureTensor<F>,
    vars: &[String],
    eqs: &[MultiPoly<F>],
    det: &MultiPoly<F>,
) -> Option<LinearMap<F>> {
    let point = find_rational_point(vars, eqs, std::slice::from_ref(det), SearchBudget::default())?;
    let n = a.dim();
    let m: Vec<Vec<F>> = (0..n)
        .map(|r| (0..n).map(|c| point[&format!("g{}{}", r + 1, c + 1)].clone()).collect())
        .collect();
    let g = LinearMap::from_scalars(&m);
    let inv = g.inverse().ok()?;
    let rebased = change_basis_with_inverse(b, &g, &inv).ok()?;
    if &rebased == a {
        Some(g)
    } else {
        None
    }
}

#[cfg(test)]
mod tests;

