//! Dense exact linear algebra over a field, plus determinant and adjugate over commutative rings.

use std::ops::{Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::symbolic::Scalar;

pub type Matrix<T> = Vec<Vec<T>>;

/// Commutative ring element usable in determinant expansions.
pub trait RingElem: Clone + PartialEq + Zero + One + Neg<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {}

impl<T> RingElem for T where T: Clone + PartialEq + Zero + One + Neg<Output = T> + Sub<Output = T> + Mul<Output = T> {}

pub fn identity<T: RingElem>(n: usize) -> Matrix<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

pub fn mat_mul<T: RingElem>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = T::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc = acc + row[k].clone() * b[k][j].clone();
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<T: RingElem>(a: &Matrix<T>, v: &[T]) -> Vec<T> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
        })
        .collect()
}

pub fn transpose<T: Clone>(a: &Matrix<T>) -> Matrix<T> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

fn minor<T: Clone>(m: &Matrix<T>, skip_row: usize, skip_col: usize) -> Matrix<T> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip_row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != skip_col)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Determinant by cofactor expansion; intended for n <= 4.
pub fn det<T: RingElem>(m: &Matrix<T>) -> T {
    let n = m.len();
    match n {
        0 => T::one(),
        1 => m[0][0].clone(),
        2 => m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone(),
        _ => {
            let mut acc = T::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let term = m[0][j].clone() * det(&minor(m, 0, j));
                acc = if j % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

/// Classical adjugate: adj(m) * m = det(m) * I.
pub fn adjugate<T: RingElem>(m: &Matrix<T>) -> Matrix<T> {
    let n = m.len();
    if n == 1 {
        return vec![vec![T::one()]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = det(&minor(m, j, i));
                    if (i + j) % 2 == 0 {
                        c
                    } else {
                        -c
                    }
                })
                .collect()
        })
        .collect()
}

/// Reduced row echelon form with the pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    pub rows: Matrix<F>,
    pub pivots: Vec<usize>,
}

pub fn rref<F: Scalar>(m: &Matrix<F>, ncols: usize) -> Echelon<F> {
    let mut a: Matrix<F> = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = F::one() / a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..a[i].len() {
                    if !a[r][j].is_zero() {
                        let v = a[i][j].clone() - f.clone() * a[r][j].clone();
                        a[i][j] = v;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r.max(pivots.len()));
    Echelon { rows: a, pivots }
}

/// Rank by fraction-free (Bareiss) elimination.
pub fn rank<F: Scalar>(m: &Matrix<F>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let mut a = m.clone();
    let rows = a.len();
    let cols = a[0].len();
    let mut prev = F::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for i in (r + 1)..rows {
            let f = a[i][c].clone();
            for j in 0..cols {
                let v = (piv.clone() * a[i][j].clone() - f.clone() * a[r][j].clone()) / prev.clone();
                a[i][j] = v;
            }
        }
        prev = piv;
        r += 1;
    }
    r
}

pub fn nullspace<F: Scalar>(m: &Matrix<F>, ncols: usize) -> Vec<Vec<F>> {
    let e = rref(m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); ncols];
            v[f] = F::one();
            for (row, &p) in e.pivots.iter().enumerate() {
                v[p] = -e.rows[row][f].clone();
            }
            v
        })
        .collect()
}

/// General solution x = particular + Σ s_f basis_f of A x = b.
#[derive(Clone, Debug)]
pub struct AffineSolution<F> {
    pub particular: Vec<F>,
    pub free: Vec<usize>,
    pub basis: Vec<Vec<F>>,
}

pub fn solve_affine<F: Scalar>(a: &Matrix<F>, b: &[F], ncols: usize) -> Option<AffineSolution<F>> {
    let aug: Matrix<F> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut row = r.clone();
            row.push(x.clone());
            row
        })
        .collect();
    let e = rref(&aug, ncols + 1);
    if e.pivots.contains(&ncols) {
        return None;
    }
    let mut particular = vec![F::zero(); ncols];
    for (row, &p) in e.pivots.iter().enumerate() {
        particular[p] = e.rows[row][ncols].clone();
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !e.pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![F::zero(); ncols];
            v[f] = F::one();
            for (row, &p) in e.pivots.iter().enumerate() {
                v[p] = -e.rows[row][f].clone();
            }
            v
        })
        .collect();
    Some(AffineSolution {
        particular,
        free,
        basis,
    })
}

pub fn inverse<F: Scalar>(m: &Matrix<F>) -> Option<Matrix<F>> {
    let n = m.len();
    let aug: Matrix<F> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            row
        })
        .collect();
    let e = rref(&aug, n);
    if e.pivots.len() < n {
        return None;
    }
    Some(e.rows.iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        assert!(mat_vec(&a, &ns[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn inverse_and_adjugate_agree() {
        let a = m(&[&[2, 1, 0], &[0, 1, 3], &[1, 0, 1]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(3));
        let d = det(&a);
        let adj = adjugate(&a);
        let scaled: Matrix<Rational> = inv.iter().map(|r| r.iter().map(|x| x.clone() * d.clone()).collect()).collect();
        assert_eq!(adj, scaled);
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn affine_solution_shape() {
        let a = m(&[&[1, 1, 0], &[0, 0, 1]]);
        let b = vec![q(3), q(4)];
        let s = solve_affine(&a, &b, 3).unwrap();
        assert_eq!(s.free, vec![1]);
        assert_eq!(s.particular, vec![q(3), q(0), q(4)]);
        assert!(solve_affine(&m(&[&[0, 0]]), &[q(1)], 2).is_none());
    }
}
