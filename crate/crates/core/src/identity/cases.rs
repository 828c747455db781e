use crate::algebra::{AlgebraError, StructureTensor};
use crate::symbolic::{MultiPoly, Scalar};

use super::{residual, unknown_f, unknown_phi};

/// Labels of the sixteen basis specializations (a, b, x, y), 0-based indices.
pub const CASE_LABELS: [(&str, [usize; 4]); 16] = [
    ("1.a", [0, 0, 0, 0]),
    ("1.b", [1, 1, 1, 1]),
    ("2.a", [0, 1, 0, 0]),
    ("2.b", [1, 0, 1, 1]),
    ("3.a", [1, 0, 0, 0]),
    ("3.b", [0, 1, 1, 1]),
    ("4.a", [0, 0, 1, 0]),
    ("4.b", [1, 1, 0, 1]),
    ("5.a", [0, 0, 0, 1]),
    ("5.b", [1, 1, 1, 0]),
    ("6.a", [1, 1, 0, 0]),
    ("6.b", [0, 0, 1, 1]),
    ("7.a", [0, 1, 0, 1]),
    ("7.b", [1, 0, 1, 0]),
    ("8.a", [1, 0, 0, 1]),
    ("8.b", [0, 1, 1, 0]),
];

pub fn case_label(abxy: [usize; 4]) -> Option<&'static str> {
    CASE_LABELS.iter().find(|(_, c)| *c == abxy).map(|(l, _)| *l)
}

/// The equations contributed by one specialization, one per output component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseCondition<F> {
    pub label: &'static str,
    pub abxy: [usize; 4],
    pub equations: Vec<MultiPoly<F>>,
}

impl<F: Scalar> CaseCondition<F> {
    pub fn is_trivial(&self) -> bool {
        self.equations.iter().all(|e| e.is_zero())
    }
}

/// The 32 scalar equations of the rigid identity for a 2-dimensional algebra, grouped by case.
pub fn case_conditions<F: Scalar>(t: &StructureTensor<F>) -> Result<Vec<CaseCondition<F>>, AlgebraError> {
    if t.dim() != 2 {
        return Err(AlgebraError::DimensionMismatch {
            expected: 2,
            found: t.dim(),
        });
    }
    let r = residual(t, &unknown_f(2), &unknown_phi(2))?;
    Ok(CASE_LABELS
        .iter()
        .map(|(label, abxy)| CaseCondition {
            label,
            abxy: *abxy,
            equations: (0..2).map(|k| r.get(abxy, k).clone()).collect(),
        })
        .collect())
}
