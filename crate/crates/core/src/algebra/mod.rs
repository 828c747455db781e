//! Structure tensors, the linear/bilinear brackets, basis change and invariants.

mod tensor;

use thiserror::Error;

use crate::linalg;
use crate::symbolic::{MultiPoly, Scalar, SymbolicError};

pub(crate) use tensor::advance;
pub use tensor::{
    basis_vector, format_vector, scalar_vector, zero_vector, BilinearForm, BilinearMap, LinearMap, MultiLinearMap,
    StructureTensor, TensorFile, TrilinearMap, Vector,
};


#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("malformed tensor: {0}")]
    Shape(String),
    #[error("singular basis change")]
    Singular,
    #[error("symbolic determinant is not a unit; pass the inverse explicitly")]
    SymbolicInverse,
    #[error("tensor has symbolic entries where numbers are required")]
    NotNumeric,
    #[error("invalid tensor JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Symbolic(SymbolicError),
}

fn check_dims(a: usize, b: usize) -> Result<(), AlgebraError> {
    if a != b {
        return Err(AlgebraError::DimensionMismatch { expected: a, found: b });
    }
    Ok(())
}

fn vsub<F: Scalar>(a: &[MultiPoly<F>], b: &[MultiPoly<F>]) -> Vector<F> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn vadd<F: Scalar>(a: &[MultiPoly<F>], b: &[MultiPoly<F>]) -> Vector<F> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// The operator y -> a*y.
pub fn left_mult<F: Scalar>(t: &StructureTensor<F>, a: &[MultiPoly<F>]) -> Result<LinearMap<F>, AlgebraError> {
    check_dims(t.dim(), a.len())?;
    let n = t.dim();
    let cols: Vec<Vector<F>> = (0..n)
        .map(|j| t.multiply(a, &basis_vector(n, j)))
        .collect::<Result<_, _>>()?;
    Ok(LinearMap::from_columns(&cols))
}

/// Curry the first argument: x -> A(a, x).
pub fn slice<F: Scalar>(a_map: &BilinearMap<F>, a: &[MultiPoly<F>]) -> Result<LinearMap<F>, AlgebraError> {
    left_mult(a_map, a)
}

/// [A,B](x,y) = A(B(x,y)) - B(Ax,y) - B(x,Ay).
pub fn bracket_lin_bil<F: Scalar>(a: &LinearMap<F>, b: &BilinearMap<F>) -> Result<BilinearMap<F>, AlgebraError> {
    check_dims(b.dim(), a.dim())?;
    let n = b.dim();
    let images: Vec<Vector<F>> = (0..n).map(|i| a.column(i)).collect();
    let mut out = MultiLinearMap::zero(n, 2);
    for i in 0..n {
        for j in 0..n {
            let bij = b.image(&[i, j]);
            let first = a.apply(&bij);
            let second = b.apply(&[&images[i], &basis_vector(n, j)])?;
            let third = b.apply(&[&basis_vector(n, i), &images[j]])?;
            let v = vsub(&vsub(&first, &second), &third);
            for (k, x) in v.into_iter().enumerate() {
                out.set(&[i, j], k, x);
            }
        }
    }
    Ok(out)
}

/// The six-term trilinear bracket
/// A(B(x,y),z) + A(x,B(y,z)) + A(y,B(x,z)) - B(A(x,y),z) - B(x,A(y,z)) - B(y,A(x,z)).
pub fn bracket_bil_bil<F: Scalar>(a: &BilinearMap<F>, b: &BilinearMap<F>) -> Result<TrilinearMap<F>, AlgebraError> {
    check_dims(a.dim(), b.dim())?;
    let n = a.dim();
    let e: Vec<Vector<F>> = (0..n).map(|i| basis_vector(n, i)).collect();
    let mut out = MultiLinearMap::zero(n, 3);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let bxy = b.image(&[x, y]);
                let byz = b.image(&[y, z]);
                let bxz = b.image(&[x, z]);
                let axy = a.image(&[x, y]);
                let ayz = a.image(&[y, z]);
                let axz = a.image(&[x, z]);
                let plus = vadd(
                    &vadd(&a.apply(&[&bxy, &e[z]])?, &a.apply(&[&e[x], &byz])?),
                    &a.apply(&[&e[y], &bxz])?,
                );
                let minus = vadd(
                    &vadd(&b.apply(&[&axy, &e[z]])?, &b.apply(&[&e[x], &ayz])?),
                    &b.apply(&[&e[y], &axz])?,
                );
                for (k, v) in vsub(&plus, &minus).into_iter().enumerate() {
                    out.set(&[x, y, z], k, v);
                }
            }
        }
    }
    Ok(out)
}

/// Tensor of the same algebra in the basis E_i = g(e_i), given g and its inverse.
pub fn change_basis_with_inverse<F: Scalar>(
    t: &StructureTensor<F>,
    g: &LinearMap<F>,
    g_inv: &LinearMap<F>,
) -> Result<StructureTensor<F>, AlgebraError> {
    check_dims(t.dim(), g.dim())?;
    check_dims(t.dim(), g_inv.dim())?;
    let n = t.dim();
    let cols: Vec<Vector<F>> = (0..n).map(|i| g.column(i)).collect();
    let mut out = MultiLinearMap::zero(n, 2);
    for i in 0..n {
        for j in 0..n {
            let prod = t.multiply(&cols[i], &cols[j])?;
            for (k, x) in g_inv.apply(&prod).into_iter().enumerate() {
                out.set(&[i, j], k, x);
            }
        }
    }
    Ok(out)
}

/// Basis change for g with a constant nonzero determinant.
pub fn change_basis<F: Scalar>(t: &StructureTensor<F>, g: &LinearMap<F>) -> Result<StructureTensor<F>, AlgebraError> {
    let inv = g.inverse()?;
    change_basis_with_inverse(t, g, &inv)
}

/// Homogenized basis change: returns (adj(g) T(g., g.), det g); the true tensor is the first divided by the second.
pub fn change_basis_adjugate<F: Scalar>(
    t: &StructureTensor<F>,
    g: &LinearMap<F>,
) -> Result<(StructureTensor<F>, MultiPoly<F>), AlgebraError> {
    let adj = g.adjugate();
    let d = g.det();
    Ok((change_basis_with_inverse(t, g, &adj)?, d))
}

/// Dimension of the derivation algebra {D : D(xy) = D(x)y + xD(y)}.
pub fn derivation_algebra_dim<F: Scalar>(t: &StructureTensor<F>) -> Result<usize, AlgebraError> {
    let n = t.dim();
    let c = t.numeric_entries()?;
    let at = |i: usize, j: usize, k: usize| c[(i * n + j) * n + k].clone();
    let mut rows = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut row = vec![F::zero(); n * n];
                for l in 0..n {
                    row[k * n + l] = row[k * n + l].clone() + at(i, j, l);
                }
                for m in 0..n {
                    row[m * n + i] = row[m * n + i].clone() - at(m, j, k);
                    row[m * n + j] = row[m * n + j].clone() - at(i, m, k);
                }
                rows.push(row);
            }
        }
    }
    Ok(n * n - linalg::rank(&rows))
}

/// dim span{e_i e_j}.
pub fn product_span_dim<F: Scalar>(t: &StructureTensor<F>) -> Result<usize, AlgebraError> {
    let n = t.dim();
    let c = t.numeric_entries()?;
    let rows: Vec<Vec<F>> = (0..n * n).map(|p| c[p * n..(p + 1) * n].to_vec()).collect();
    Ok(linalg::rank(&rows))
}

/// dim span{e_i e_j - e_j e_i}; diagnostic only.
pub fn commutator_span_dim<F: Scalar>(t: &StructureTensor<F>) -> Result<usize, AlgebraError> {
    let n = t.dim();
    let c = t.numeric_entries()?;
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            rows.push(
                (0..n)
                    .map(|k| c[(i * n + j) * n + k].clone() - c[(j * n + i) * n + k].clone())
                    .collect(),
            );
        }
    }
    Ok(linalg::rank(&rows))
}

pub fn is_commutative<F: Scalar>(t: &StructureTensor<F>) -> bool {
    let n = t.dim();
    (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| t.c(i, j, k) == t.c(j, i, k))))
}

/// [L_b,[L_a,P]] + [L_{w},P] for the pinned w = (2/3)ab + (1/3)ba on basis vectors a, b.
pub fn pinned_bracket_residual<F: Scalar>(
    t: &StructureTensor<F>,
    a: usize,
    b: usize,
) -> Result<BilinearMap<F>, AlgebraError> {
    let n = t.dim();
    let la = left_mult(t, &basis_vector(n, a))?;
    let lb = left_mult(t, &basis_vector(n, b))?;
    let inner = bracket_lin_bil(&la, t)?;
    let lhs = bracket_lin_bil(&lb, &inner)?;
    let two_thirds = MultiPoly::constant(F::ratio(2, 3));
    let one_third = MultiPoly::constant(F::ratio(1, 3));
    let w: Vector<F> = t
        .image(&[a, b])
        .iter()
        .zip(t.image(&[b, a]))
        .map(|(x, y)| &(x * &two_thirds) + &(&y * &one_third))
        .collect();
    let lw = left_mult(t, &w)?;
    lhs.add(&bracket_lin_bil(&lw, t)?)
}
