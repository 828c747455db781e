//! Deciders and witness solvers for terminal, conservative and rigid (quasi-conservative) algebras.

mod cases;
mod parametric;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    basis_vector, bracket_bil_bil, bracket_lin_bil, is_commutative, left_mult, slice, AlgebraError, BilinearForm,
    BilinearMap, LinearMap, MultiLinearMap, StructureTensor, Vector,
};
use crate::groebner::{buchberger, Caps, GroebnerError, Ideal};
use crate::linalg::{self, Matrix};
use crate::symbolic::{MultiPoly, Scalar, SymbolicError};

pub use cases::{case_conditions, case_label, CaseCondition, CASE_LABELS};
pub use parametric::{solve_parametric, Cell, Domain, ParametricError, Partition, MAX_CELLS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("tensor has symbolic entries; use the parametric solver or sample parameters")]
    NotNumeric,
    #[error("is_jordan requires a commutative algebra")]
    NonCommutative,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// Which identity a decider targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IdentityKind {
    Terminal,
    Conservative,
    Rigid,
    Jordan,
}

impl fmt::Display for IdentityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IdentityKind::Terminal => "terminal",
            IdentityKind::Conservative => "conservative",
            IdentityKind::Rigid => "rigid",
            IdentityKind::Jordan => "jordan",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for IdentityKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "terminal" => Ok(IdentityKind::Terminal),
            "conservative" => Ok(IdentityKind::Conservative),
            "rigid" => Ok(IdentityKind::Rigid),
            "jordan" => Ok(IdentityKind::Jordan),
            other => Err(format!("unknown identity `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_yes() { "yes" } else { "no" })
    }
}

/// Auxiliary multiplication and bilinear form, affine in `free_symbols`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness<F> {
    pub f: BilinearMap<F>,
    pub phi: BilinearForm<F>,
    pub free_symbols: Vec<String>,
    pub constraints: Vec<MultiPoly<F>>,
}

impl<F: Scalar> Witness<F> {
    /// Set every free symbol to zero.
    pub fn specialize_zero(&self) -> Witness<F> {
        let zeros: BTreeMap<String, F> = self.free_symbols.iter().map(|s| (s.clone(), F::zero())).collect();
        Witness {
            f: self.f.substitute_values(&zeros),
            phi: BilinearForm {
                phi: self
                    .phi
                    .phi
                    .iter()
                    .map(|r| r.iter().map(|x| x.substitute_values(&zeros)).collect())
                    .collect(),
            },
            free_symbols: Vec::new(),
            constraints: self.constraints.iter().map(|c| c.substitute_values(&zeros)).collect(),
        }
    }

    pub fn phi_is_zero(&self) -> bool {
        self.phi.phi.iter().flatten().all(|x| x.is_zero())
    }

    /// Lines `F(e1,e1) = ...` followed by the form.
    pub fn display_lines(&self) -> Vec<String> {
        let n = self.f.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                out.push(format!(
                    "F(e{},e{}) = {}",
                    i + 1,
                    j + 1,
                    crate::algebra::format_vector(&self.f.image(&[i, j]))
                ));
            }
        }
        for i in 0..n {
            for j in 0..n {
                out.push(format!("phi(e{},e{}) = {}", i + 1, j + 1, self.phi.phi[i][j]));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport<F> {
    pub verdict: Verdict,
    pub witness: Option<Witness<F>>,
    pub solution_dim: Option<usize>,
}

impl<F> IdentityReport<F> {
    fn no() -> Self {
        IdentityReport {
            verdict: Verdict::No,
            witness: None,
            solution_dim: None,
        }
    }
}

/// Unknown names in the fixed order: F entries by (i, j, k), then phi by (i, j).
///
/// Dimension 2 uses lambda/mu/tau/nu for F(e1,e1), F(e1,e2), F(e2,e1), F(e2,e2).
pub fn unknown_names(n: usize) -> (Vec<String>, Vec<String>) {
    if n == 2 {
        let f = ["lambda1", "lambda2", "mu1", "mu2", "tau1", "tau2", "nu1", "nu2"];
        let p = ["phi11", "phi12", "phi21", "phi22"];
        return (
            f.iter().map(|s| s.to_string()).collect(),
            p.iter().map(|s| s.to_string()).collect(),
        );
    }
    let mut f = Vec::new();
    let mut p = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                f.push(format!("f{i}{j}_{k}"));
            }
            p.push(format!("phi{i}{j}"));
        }
    }
    (f, p)
}

pub fn unknown_f<F: Scalar>(n: usize) -> BilinearMap<F> {
    let (names, _) = unknown_names(n);
    MultiLinearMap::from_fn(n, 2, |idx, k| MultiPoly::var(&names[(idx[0] * n + idx[1]) * n + k]))
}

pub fn unknown_phi<F: Scalar>(n: usize) -> BilinearForm<F> {
    let (_, names) = unknown_names(n);
    BilinearForm {
        phi: (0..n)
            .map(|i| (0..n).map(|j| MultiPoly::var(&names[i * n + j])).collect())
            .collect(),
    }
}

/// F(a, b) = (2/3) ab + (1/3) ba.
pub fn pinned_f<F: Scalar>(t: &StructureTensor<F>) -> BilinearMap<F> {
    let two_thirds = MultiPoly::constant(F::ratio(2, 3));
    let one_third = MultiPoly::constant(F::ratio(1, 3));
    MultiLinearMap::from_fn(t.dim(), 2, |idx, k| {
        &(t.c(idx[0], idx[1], k) * &two_thirds) + &(t.c(idx[1], idx[0], k) * &one_third)
    })
}

/// R(a,b)(x,y) = [L_b,[L_a,P]](x,y) + [L_{F(a,b)},P](x,y) - phi(a,b) P(x,y), indexed (a, b, x, y, k).
pub fn residual<F: Scalar>(
    t: &StructureTensor<F>,
    f: &BilinearMap<F>,
    phi: &BilinearForm<F>,
) -> Result<MultiLinearMap<F>, AlgebraError> {
    let n = t.dim();
    let lefts: Vec<LinearMap<F>> = (0..n)
        .map(|i| left_mult(t, &basis_vector(n, i)))
        .collect::<Result<_, _>>()?;
    let inner: Vec<BilinearMap<F>> = lefts
        .iter()
        .map(|l| bracket_lin_bil(l, t))
        .collect::<Result<_, _>>()?;
    let mut double = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            double.push(bracket_lin_bil(&lefts[b], &inner[a])?);
        }
    }
    Ok(MultiLinearMap::from_fn(n, 4, |idx, k| {
        let (a, b, x, y) = (idx[0], idx[1], idx[2], idx[3]);
        let mut acc = double[a * n + b].get(&[x, y], k).clone();
        for m in 0..n {
            let w = f.c(a, b, m);
            if !w.is_zero() {
                acc = &acc + &(w * inner[m].get(&[x, y], k));
            }
        }
        let p = &phi.phi[a][b];
        if !p.is_zero() {
            acc = &acc - &(p * t.c(x, y, k));
        }
        acc
    }))
}

/// [[[P,a],P],P] for a over the basis, indexed (a, x, y, z, k).
pub fn terminal_tensor<F: Scalar>(t: &StructureTensor<F>) -> Result<MultiLinearMap<F>, AlgebraError> {
    let n = t.dim();
    let mut parts = Vec::with_capacity(n);
    for a in 0..n {
        let pa = slice(t, &basis_vector(n, a))?;
        let inner = bracket_lin_bil(&pa, t)?;
        parts.push(bracket_bil_bil(&inner, t)?);
    }
    Ok(MultiLinearMap::from_fn(n, 4, |idx, k| {
        parts[idx[0]].get(&[idx[1], idx[2], idx[3]], k).clone()
    }))
}

/// Nonzero entries of the terminal tensor; the algebra is terminal exactly where they vanish.
pub fn terminal_conditions<F: Scalar>(t: &StructureTensor<F>) -> Result<Vec<MultiPoly<F>>, AlgebraError> {
    Ok(nonzero_entries(&terminal_tensor(t)?))
}

fn nonzero_entries<F: Scalar>(m: &MultiLinearMap<F>) -> Vec<MultiPoly<F>> {
    let mut out: Vec<MultiPoly<F>> = m.entries().iter().filter(|e| !e.is_zero()).cloned().collect();
    out.sort_by_key(|p| p.to_string());
    out.dedup();
    out
}

/// Terminality; parametric tensors answer yes only when the identity holds identically.
pub fn is_terminal<F: Scalar>(t: &StructureTensor<F>) -> Result<IdentityReport<F>, IdentityError> {
    let ok = terminal_tensor(t)?.is_zero();
    Ok(IdentityReport {
        verdict: Verdict::from_bool(ok),
        witness: None,
        solution_dim: None,
    })
}

/// Linear system A u = b over the unknowns: rows are residual entries.
pub fn linear_system<F: Scalar>(
    t: &StructureTensor<F>,
    with_phi: bool,
) -> Result<(Vec<String>, Matrix<MultiPoly<F>>, Vec<MultiPoly<F>>), IdentityError> {
    let n = t.dim();
    let (fnames, pnames) = unknown_names(n);
    let f = unknown_f(n);
    let (phi, unknowns) = if with_phi {
        (unknown_phi(n), [fnames, pnames].concat())
    } else {
        (BilinearForm::zero(n), fnames)
    };
    let r = residual(t, &f, &phi)?;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for e in r.entries() {
        if e.is_zero() {
            continue;
        }
        let (coeffs, rest) = e.linear_parts(&unknowns)?;
        rows.push(coeffs);
        rhs.push(-rest);
    }
    Ok((unknowns, rows, rhs))
}

fn solve_numeric<F: Scalar>(t: &StructureTensor<F>, with_phi: bool) -> Result<IdentityReport<F>, IdentityError> {
    if !t.is_numeric() {
        return Err(IdentityError::NotNumeric);
    }
    let n = t.dim();
    let (unknowns, rows, rhs) = linear_system(t, with_phi)?;
    let a: Matrix<F> = rows
        .iter()
        .map(|r| r.iter().map(|c| c.as_constant().expect("numeric system")).collect())
        .collect();
    let b: Vec<F> = rhs.iter().map(|c| c.as_constant().expect("numeric system")).collect();
    let Some(sol) = linalg::solve_affine(&a, &b, unknowns.len()) else {
        return Ok(IdentityReport::no());
    };
    let values: Vec<MultiPoly<F>> = (0..unknowns.len())
        .map(|u| {
            let mut v = MultiPoly::constant(sol.particular[u].clone());
            for (f, basis) in sol.free.iter().zip(&sol.basis) {
                if !basis[u].is_zero() {
                    v = &v + &MultiPoly::var(&unknowns[*f]).scale(&basis[u]);
                }
            }
            v
        })
        .collect();
    let f = MultiLinearMap::from_fn(n, 2, |idx, k| values[(idx[0] * n + idx[1]) * n + k].clone());
    let phi = if with_phi {
        let off = n * n * n;
        BilinearForm {
            phi: (0..n)
                .map(|i| (0..n).map(|j| values[off + i * n + j].clone()).collect())
                .collect(),
        }
    } else {
        BilinearForm::zero(n)
    };
    let witness = Witness {
        f,
        phi,
        free_symbols: sol.free.iter().map(|&i| unknowns[i].clone()).collect(),
        constraints: Vec::new(),
    };
    Ok(IdentityReport {
        verdict: Verdict::Yes,
        solution_dim: Some(sol.free.len()),
        witness: Some(witness),
    })
}

/// Conservative: the identity with phi = 0, solved for F.
pub fn is_conservative<F: Scalar>(t: &StructureTensor<F>) -> Result<IdentityReport<F>, IdentityError> {
    solve_numeric(t, false)
}

/// Rigid (quasi-conservative): the identity solved for F and phi.
pub fn is_rigid<F: Scalar>(t: &StructureTensor<F>) -> Result<IdentityReport<F>, IdentityError> {
    solve_numeric(t, true)
}

/// Whether the conservative identity holds with F pinned to (2/3)ab + (1/3)ba.
pub fn pinned_conservative<F: Scalar>(t: &StructureTensor<F>) -> Result<bool, IdentityError> {
    Ok(residual(t, &pinned_f(t), &BilinearForm::zero(t.dim()))?.is_zero())
}

/// Substitute a witness into the identity; entries are reduced modulo `relations` and the witness constraints.
pub fn verify_witness<F: Scalar>(
    t: &StructureTensor<F>,
    w: &Witness<F>,
    relations: &[MultiPoly<F>],
) -> Result<bool, IdentityError> {
    let r = residual(t, &w.f, &w.phi)?;
    let rels: Vec<MultiPoly<F>> = relations.iter().chain(&w.constraints).cloned().collect();
    if rels.is_empty() {
        return Ok(r.is_zero());
    }
    let gb = buchberger(&Ideal::from_generators(rels), Caps::default())?;
    Ok(r.entries().iter().all(|e| e.is_zero() || gb.reduce(e).is_zero()))
}

/// Jordan identity (x^2 y) x = x^2 (y x), fully linearized and checked on basis substitutions.
pub fn is_jordan<F: Scalar>(t: &StructureTensor<F>) -> Result<bool, IdentityError> {
    if !is_commutative(t) {
        return Err(IdentityError::NonCommutative);
    }
    let n = t.dim();
    let e: Vec<Vector<F>> = (0..n).map(|i| basis_vector(n, i)).collect();
    let mul = |x: &[MultiPoly<F>], y: &[MultiPoly<F>]| t.multiply(x, y);
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut idx = [0usize; 4];
    loop {
        let xs = [&e[idx[0]], &e[idx[1]], &e[idx[2]]];
        let y = &e[idx[3]];
        let mut acc = vec![MultiPoly::zero(); n];
        for p in perms {
            let sq = mul(xs[p[0]], xs[p[1]])?;
            let lhs = mul(&mul(&sq, y)?, xs[p[2]])?;
            let rhs = mul(&sq, &mul(y, xs[p[2]])?)?;
            for k in 0..n {
                acc[k] = &acc[k] + &(&lhs[k] - &rhs[k]);
            }
        }
        if acc.iter().any(|c| !c.is_zero()) {
            return Ok(false);
        }
        if !crate::algebra::advance(&mut idx, n) {
            break;
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests;
