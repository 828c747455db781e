use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::AlgebraError;
use crate::linalg::{self, Matrix};
use crate::symbolic::{MultiPoly, Scalar, SymbolicError};

/// Dense multilinear map V^arity -> V stored in the standard basis.
///
/// Entry `(i_1, .., i_r, k)` is the coefficient of e_k in the image of
/// (e_{i_1}, .., e_{i_r}).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiLinearMap<F> {
    dim: usize,
    arity: usize,
    coeffs: Vec<MultiPoly<F>>,
}

/// Multiplication table: c[i][j][k] is the coefficient of e_k in e_i e_j.
pub type StructureTensor<F> = MultiLinearMap<F>;
pub type BilinearMap<F> = MultiLinearMap<F>;
pub type TrilinearMap<F> = MultiLinearMap<F>;
pub type Vector<F> = Vec<MultiPoly<F>>;

pub fn basis_vector<F: Scalar>(dim: usize, i: usize) -> Vector<F> {
    (0..dim)
        .map(|k| if k == i { MultiPoly::one() } else { MultiPoly::zero() })
        .collect()
}

pub fn zero_vector<F: Scalar>(dim: usize) -> Vector<F> {
    vec![MultiPoly::zero(); dim]
}

pub fn scalar_vector<F: Scalar>(v: &[F]) -> Vector<F> {
    v.iter().map(|x| MultiPoly::constant(x.clone())).collect()
}

impl<F: Scalar> MultiLinearMap<F> {
    pub fn zero(dim: usize, arity: usize) -> Self {
        MultiLinearMap {
            dim,
            arity,
            coeffs: vec![MultiPoly::zero(); dim.pow(arity as u32 + 1)],
        }
    }

    pub fn from_fn(dim: usize, arity: usize, mut f: impl FnMut(&[usize], usize) -> MultiPoly<F>) -> Self {
        let mut out = Self::zero(dim, arity);
        let mut idx = vec![0usize; arity];
        loop {
            for k in 0..dim {
                let pos = out.offset(&idx, k);
                out.coeffs[pos] = f(&idx, k);
            }
            if !advance(&mut idx, dim) {
                break;
            }
        }
        out
    }

    /// Structure tensor from a nested c[i][j][k] table.
    pub fn from_table(c: Vec<Vec<Vec<MultiPoly<F>>>>) -> Result<Self, AlgebraError> {
        let n = c.len();
        if n == 0 {
            return Err(AlgebraError::Shape("empty table".into()));
        }
        let mut out = Self::zero(n, 2);
        for (i, row) in c.into_iter().enumerate() {
            if row.len() != n {
                return Err(AlgebraError::Shape(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            for (j, v) in row.into_iter().enumerate() {
                if v.len() != n {
                    return Err(AlgebraError::Shape(format!(
                        "entry ({i},{j}) has {} components, expected {n}",
                        v.len()
                    )));
                }
                for (k, x) in v.into_iter().enumerate() {
                    out.set(&[i, j], k, x);
                }
            }
        }
        Ok(out)
    }

    /// Build a structure tensor from products written as (i, j, vector) with 1-based indices.
    pub fn from_products(dim: usize, products: &[(usize, usize, Vec<MultiPoly<F>>)]) -> Self {
        let mut out = Self::zero(dim, 2);
        for (i, j, v) in products {
            for (k, x) in v.iter().enumerate() {
                out.set(&[i - 1, j - 1], k, x.clone());
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    fn offset(&self, idx: &[usize], k: usize) -> usize {
        let mut p = 0;
        for &i in idx {
            p = p * self.dim + i;
        }
        p * self.dim + k
    }

    pub fn get(&self, idx: &[usize], k: usize) -> &MultiPoly<F> {
        debug_assert_eq!(idx.len(), self.arity);
        &self.coeffs[self.offset(idx, k)]
    }

    pub fn set(&mut self, idx: &[usize], k: usize, value: MultiPoly<F>) {
        let p = self.offset(idx, k);
        self.coeffs[p] = value;
    }

    /// c[i][j][k] for a structure tensor.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &MultiPoly<F> {
        self.get(&[i, j], k)
    }

    /// Image of basis arguments as a vector.
    pub fn image(&self, idx: &[usize]) -> Vector<F> {
        (0..self.dim).map(|k| self.get(idx, k).clone()).collect()
    }

    pub fn entries(&self) -> &[MultiPoly<F>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_numeric(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_constant())
    }

    /// Names of all symbols occurring in the entries.
    pub fn symbols(&self) -> Vec<String> {
        let mut out: Vec<String> = self.coeffs.iter().flat_map(|c| c.vars().iter().cloned()).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn map_entries(&self, f: impl Fn(&MultiPoly<F>) -> MultiPoly<F>) -> Self {
        MultiLinearMap {
            dim: self.dim,
            arity: self.arity,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn substitute(&self, map: &BTreeMap<String, MultiPoly<F>>) -> Self {
        self.map_entries(|c| c.substitute(map))
    }

    pub fn substitute_values(&self, values: &BTreeMap<String, F>) -> Self {
        self.map_entries(|c| c.substitute_values(values))
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        Ok(MultiLinearMap {
            dim: self.dim,
            arity: self.arity,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        Ok(MultiLinearMap {
            dim: self.dim,
            arity: self.arity,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, s: &MultiPoly<F>) -> Self {
        self.map_entries(|c| c * s)
    }

    fn check_same(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.dim != other.dim || self.arity != other.arity {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    /// Evaluate on arbitrary coordinate vectors.
    pub fn apply(&self, args: &[&[MultiPoly<F>]]) -> Result<Vector<F>, AlgebraError> {
        if args.len() != self.arity {
            return Err(AlgebraError::Shape(format!("expected {} arguments, got {}", self.arity, args.len())));
        }
        for a in args {
            if a.len() != self.dim {
                return Err(AlgebraError::DimensionMismatch {
                    expected: self.dim,
                    found: a.len(),
                });
            }
        }
        let mut out = zero_vector(self.dim);
        let mut idx = vec![0usize; self.arity];
        loop {
            let mut w = MultiPoly::one();
            let mut zero = false;
            for (r, &i) in idx.iter().enumerate() {
                if args[r][i].is_zero() {
                    zero = true;
                    break;
                }
                w = &w * &args[r][i];
            }
            if !zero {
                for (k, slot) in out.iter_mut().enumerate() {
                    let c = self.get(&idx, k);
                    if !c.is_zero() {
                        *slot = &*slot + &(&w * c);
                    }
                }
            }
            if !advance(&mut idx, self.dim) {
                break;
            }
        }
        Ok(out)
    }

    /// The product x*y of a structure tensor.
    pub fn multiply(&self, x: &[MultiPoly<F>], y: &[MultiPoly<F>]) -> Result<Vector<F>, AlgebraError> {
        self.apply(&[x, y])
    }

    /// Numeric entries as scalars.
    pub fn numeric_entries(&self) -> Result<Vec<F>, AlgebraError> {
        self.coeffs
            .iter()
            .map(|c| c.as_constant().ok_or(AlgebraError::NotNumeric))
            .collect()
    }

    /// Nested c[i][j][k] view of a structure tensor.
    pub fn table(&self) -> Vec<Vec<Vec<MultiPoly<F>>>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.image(&[i, j])).collect())
            .collect()
    }

    pub fn to_json(&self) -> TensorFile<F> {
        TensorFile {
            dim: self.dim,
            constants: self.table(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self, AlgebraError> {
        let file: TensorFile<F> = serde_json::from_str(s).map_err(|e| AlgebraError::Json(e.to_string()))?;
        file.into_tensor()
    }
}

/// Advance a multi-index in base `dim`; false once it wraps around.
pub(crate) fn advance(idx: &mut [usize], dim: usize) -> bool {
    for p in (0..idx.len()).rev() {
        idx[p] += 1;
        if idx[p] < dim {
            return true;
        }
        idx[p] = 0;
    }
    false
}

/// On-disk structure tensor.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "F: Scalar")]
pub struct TensorFile<F> {
    pub dim: usize,
    pub constants: Vec<Vec<Vec<MultiPoly<F>>>>,
}

impl<F: Scalar> TensorFile<F> {
    pub fn into_tensor(self) -> Result<MultiLinearMap<F>, AlgebraError> {
        if self.constants.len() != self.dim {
            return Err(AlgebraError::Shape(format!(
                "declared dim {} but table has {} rows",
                self.dim,
                self.constants.len()
            )));
        }
        MultiLinearMap::from_table(self.constants)
    }
}

impl<F: Scalar> fmt::Display for MultiLinearMap<F> {
    /// Nonzero products as `e1e2 = ...` lines (arity 2) or raw entries otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arity != 2 {
            return write!(f, "{:?}", self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>());
        }
        let mut any = false;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let v = self.image(&[i, j]);
                if v.iter().all(|c| c.is_zero()) {
                    continue;
                }
                if any {
                    write!(f, ", ")?;
                }
                any = true;
                write!(f, "e{}e{} = {}", i + 1, j + 1, format_vector(&v))?;
            }
        }
        if !any {
            write!(f, "zero product")?;
        }
        Ok(())
    }
}

pub fn format_vector<F: Scalar>(v: &[MultiPoly<F>]) -> String {
    let mut parts = Vec::new();
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let coeff = c.to_string();
        let piece = if coeff == "1" {
            format!("e{}", k + 1)
        } else if c.num_terms() == 1 {
            format!("{coeff}*e{}", k + 1)
        } else {
            format!("({coeff})*e{}", k + 1)
        };
        parts.push(piece);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Linear map with m[k][j] the coefficient of e_k in the image of e_j.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearMap<F> {
    pub m: Matrix<MultiPoly<F>>,
}

impl<F: Scalar> LinearMap<F> {
    pub fn zero(dim: usize) -> Self {
        LinearMap {
            m: vec![vec![MultiPoly::zero(); dim]; dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        LinearMap {
            m: linalg::identity(dim),
        }
    }

    /// Columns are images of basis vectors.
    pub fn from_columns(cols: &[Vector<F>]) -> Self {
        let n = cols.len();
        LinearMap {
            m: (0..n).map(|k| (0..n).map(|j| cols[j][k].clone()).collect()).collect(),
        }
    }

    pub fn from_scalars(rows: &Matrix<F>) -> Self {
        LinearMap {
            m: rows
                .iter()
                .map(|r| r.iter().map(|x| MultiPoly::constant(x.clone())).collect())
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    pub fn column(&self, j: usize) -> Vector<F> {
        self.m.iter().map(|r| r[j].clone()).collect()
    }

    pub fn apply(&self, v: &[MultiPoly<F>]) -> Vector<F> {
        linalg::mat_vec(&self.m, v)
    }

    pub fn compose(&self, other: &Self) -> Self {
        LinearMap {
            m: linalg::mat_mul(&self.m, &other.m),
        }
    }

    pub fn det(&self) -> MultiPoly<F> {
        linalg::det(&self.m)
    }

    pub fn adjugate(&self) -> Self {
        LinearMap {
            m: linalg::adjugate(&self.m),
        }
    }

    pub fn scalar_matrix(&self) -> Result<Matrix<F>, AlgebraError> {
        self.m
            .iter()
            .map(|r| r.iter().map(|c| c.as_constant().ok_or(AlgebraError::NotNumeric)).collect())
            .collect()
    }

    /// Inverse when the determinant is a nonzero constant.
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        let d = self.det();
        match d.as_constant() {
            Some(c) if c.is_zero() => Err(AlgebraError::Singular),
            Some(c) => {
                let s = MultiPoly::constant(F::one() / c);
                let adj = self.adjugate();
                Ok(LinearMap {
                    m: adj.m.iter().map(|r| r.iter().map(|x| x * &s).collect()).collect(),
                })
            }
            None if d.is_zero() => Err(AlgebraError::Singular),
            None => Err(AlgebraError::SymbolicInverse),
        }
    }
}

/// Bilinear form with phi[i][j] = phi(e_i, e_j).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BilinearForm<F> {
    pub phi: Matrix<MultiPoly<F>>,
}

impl<F: Scalar> BilinearForm<F> {
    pub fn zero(dim: usize) -> Self {
        BilinearForm {
            phi: vec![vec![MultiPoly::zero(); dim]; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.phi.len()
    }

    pub fn eval(&self, x: &[MultiPoly<F>], y: &[MultiPoly<F>]) -> MultiPoly<F> {
        let mut acc = MultiPoly::zero();
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                if !xi.is_zero() && !yj.is_zero() && !self.phi[i][j].is_zero() {
                    acc = &acc + &(&(xi * yj) * &self.phi[i][j]);
                }
            }
        }
        acc
    }
}

impl From<SymbolicError> for AlgebraError {
    fn from(e: SymbolicError) -> Self {
        AlgebraError::Symbolic(e)
    }
}
