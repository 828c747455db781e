//! Fraction-free elimination over polynomial entries with case splits on pivot vanishing.

use std::fmt;

use thiserror::Error;

use crate::groebner::{buchberger, is_empty_fast, Caps, Emptiness, GroebnerBasis, GroebnerError, Ideal};
use crate::linalg::Matrix;
use crate::symbolic::{MultiPoly, Scalar};

pub const MAX_CELLS: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParametricError {
    #[error("case split produced more than {0} cells")]
    TooManyCells(usize),
    #[error("could not decide a pivot condition: {0}")]
    Undecided(String),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// Constructible parameter region: equations = 0 and every inequation != 0.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Domain<F> {
    pub params: Vec<String>,
    pub equations: Vec<MultiPoly<F>>,
    pub inequations: Vec<MultiPoly<F>>,
}

impl<F: Scalar> Domain<F> {
    pub fn new(params: Vec<String>) -> Self {
        Domain {
            params,
            equations: Vec::new(),
            inequations: Vec::new(),
        }
    }

    pub fn is_empty(&self, caps: Caps) -> Result<bool, ParametricError> {
        match is_empty_fast(&self.params, &self.equations, &self.nonvanishing(), caps) {
            Emptiness::Empty => Ok(true),
            Emptiness::NonEmpty(_) => Ok(false),
            Emptiness::Unknown => Err(ParametricError::Undecided("domain emptiness".into())),
        }
    }

    /// The product of the inequations, so saturation needs a single extra variable.
    fn nonvanishing(&self) -> Vec<MultiPoly<F>> {
        if self.inequations.is_empty() {
            return Vec::new();
        }
        let mut prod = MultiPoly::one();
        for q in &self.inequations {
            prod = &prod * q;
        }
        vec![prod]
    }

    /// Whether p vanishes at every point of the region.
    pub fn implies_zero(&self, p: &MultiPoly<F>, caps: Caps) -> Result<bool, ParametricError> {
        if p.is_zero() {
            return Ok(true);
        }
        let mut d = self.clone();
        d.inequations.push(p.clone());
        d.is_empty(caps)
    }

    /// Whether p is nonzero at every point of the region.
    pub fn implies_nonzero(&self, p: &MultiPoly<F>, caps: Caps) -> Result<bool, ParametricError> {
        if p.as_constant().map(|c| !c.is_zero()).unwrap_or(false) {
            return Ok(true);
        }
        let mut d = self.clone();
        d.equations.push(p.clone());
        d.is_empty(caps)
    }
}

impl<F: Scalar> fmt::Display for Domain<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.equations.iter().map(|e| format!("{e} = 0")).collect();
        parts.extend(self.inequations.iter().map(|e| format!("{e} != 0")));
        if parts.is_empty() {
            f.write_str("all parameters")
        } else {
            f.write_str(&parts.join(", "))
        }
    }
}

/// One region of the partition with the solvability of the system there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell<F> {
    pub domain: Domain<F>,
    pub consistent: bool,
    pub rank: usize,
    pub solution_dim: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition<F> {
    pub cells: Vec<Cell<F>>,
}

impl<F: Scalar> Partition<F> {
    pub fn all_consistent(&self) -> bool {
        self.cells.iter().all(|c| c.consistent)
    }

    pub fn none_consistent(&self) -> bool {
        self.cells.iter().all(|c| !c.consistent)
    }

    pub fn consistent_cells(&self) -> impl Iterator<Item = &Cell<F>> {
        self.cells.iter().filter(|c| c.consistent)
    }
}

enum Status {
    Zero,
    Unit,
    Split,
}

struct State<F> {
    domain: Domain<F>,
    rows: Matrix<MultiPoly<F>>,
    rank: usize,
    col: usize,
}

struct Solver<F> {
    ncols: usize,
    caps: Caps,
    max_cells: usize,
    cells: Vec<Cell<F>>,
    stack: Vec<State<F>>,
}

fn reducer<F: Scalar>(d: &Domain<F>, caps: Caps) -> Result<Option<GroebnerBasis<F>>, ParametricError> {
    if d.equations.is_empty() {
        return Ok(None);
    }
    let ideal = Ideal::new(d.params.clone(), d.equations.clone())?;
    Ok(Some(buchberger(&ideal, caps)?))
}

fn reduce_row<F: Scalar>(row: &mut [MultiPoly<F>], gb: &Option<GroebnerBasis<F>>) {
    if let Some(gb) = gb {
        for x in row.iter_mut() {
            if !x.is_zero() {
                *x = gb.reduce(x);
            }
        }
    }
}

impl<F: Scalar> Solver<F> {
    fn status(&self, p: &MultiPoly<F>, d: &Domain<F>) -> Result<Status, ParametricError> {
        if p.is_zero() {
            return Ok(Status::Zero);
        }
        if d.implies_nonzero(p, self.caps)? {
            return Ok(Status::Unit);
        }
        if d.implies_zero(p, self.caps)? {
            return Ok(Status::Zero);
        }
        Ok(Status::Split)
    }

    fn branch(&mut self, s: &State<F>, p: &MultiPoly<F>) -> Result<(), ParametricError> {
        let mut domain = s.domain.clone();
        domain.equations.push(p.clone());
        let gb = reducer(&domain, self.caps)?;
        let mut rows = s.rows.clone();
        for r in rows.iter_mut() {
            reduce_row(r, &gb);
        }
        self.stack.push(State {
            domain,
            rows,
            rank: s.rank,
            col: s.col,
        });
        if self.stack.len() + self.cells.len() > self.max_cells {
            return Err(ParametricError::TooManyCells(self.max_cells));
        }
        Ok(())
    }

    fn run(&mut self, mut s: State<F>) -> Result<(), ParametricError> {
        let gb = reducer(&s.domain, self.caps)?;
        'cols: while s.col < self.ncols {
            let c = s.col;
            let mut r = s.rank;
            while r < s.rows.len() {
                let p = s.rows[r][c].clone();
                match self.status(&p, &s.domain)? {
                    Status::Zero => {
                        s.rows[r][c] = MultiPoly::zero();
                        r += 1;
                    }
                    Status::Split => {
                        self.branch(&s, &p)?;
                        s.domain.inequations.push(p);
                        self.pivot(&mut s, r, &gb);
                        continue 'cols;
                    }
                    Status::Unit => {
                        self.pivot(&mut s, r, &gb);
                        continue 'cols;
                    }
                }
            }
            s.col += 1;
        }
        let mut consistent = true;
        let mut r = s.rank;
        while r < s.rows.len() {
            let q = s.rows[r][self.ncols].clone();
            match self.status(&q, &s.domain)? {
                Status::Zero => r += 1,
                Status::Unit => {
                    consistent = false;
                    break;
                }
                Status::Split => {
                    self.branch(&s, &q)?;
                    s.domain.inequations.push(q);
                    consistent = false;
                    break;
                }
            }
        }
        self.cells.push(Cell {
            consistent,
            rank: s.rank,
            solution_dim: consistent.then_some(self.ncols - s.rank),
            domain: s.domain,
        });
        if self.cells.len() > self.max_cells {
            return Err(ParametricError::TooManyCells(self.max_cells));
        }
        Ok(())
    }

    /// Use row r as pivot for the current column and clear the entries below.
    fn pivot(&self, s: &mut State<F>, r: usize, gb: &Option<GroebnerBasis<F>>) {
        let c = s.col;
        s.rows.swap(s.rank, r);
        let piv_row = s.rows[s.rank].clone();
        let p = piv_row[c].clone();
        for i in (s.rank + 1)..s.rows.len() {
            let m = s.rows[i][c].clone();
            if m.is_zero() {
                continue;
            }
            let mut row: Vec<MultiPoly<F>> = s.rows[i]
                .iter()
                .zip(&piv_row)
                .map(|(x, y)| &(x * &p) - &(y * &m))
                .collect();
            reduce_row(&mut row, gb);
            s.rows[i] = row;
        }
        s.rank += 1;
        s.col += 1;
    }
}

/// Partition `domain` into cells on which the system `a u = b` has constant rank and solvability.
pub fn solve_parametric<F: Scalar>(
    a: &Matrix<MultiPoly<F>>,
    b: &[MultiPoly<F>],
    ncols: usize,
    domain: &Domain<F>,
    caps: Caps,
    max_cells: usize,
) -> Result<Partition<F>, ParametricError> {
    let mut solver = Solver {
        ncols,
        caps,
        max_cells,
        cells: Vec::new(),
        stack: Vec::new(),
    };
    if domain.is_empty(caps)? {
        return Ok(Partition { cells: Vec::new() });
    }
    let gb = reducer(domain, caps)?;
    let rows: Matrix<MultiPoly<F>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut row = r.clone();
            row.push(x.clone());
            reduce_row(&mut row, &gb);
            row
        })
        .collect();
    solver.stack.push(State {
        domain: domain.clone(),
        rows,
        rank: 0,
        col: 0,
    });
    while let Some(s) = solver.stack.pop() {
        solver.run(s)?;
    }
    Ok(Partition { cells: solver.cells })
}
