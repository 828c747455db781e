use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::error::SymbolicError;
use super::poly::MultiPoly;
use super::scalar::Scalar;

pub const DEFORMATION_VAR: &str = "t";

/// Laurent polynomial in `t` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly<F> {
    terms: BTreeMap<i32, MultiPoly<F>>,
}

impl<F: Scalar> LaurentPoly<F> {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_poly(MultiPoly::one())
    }

    pub fn from_poly(p: MultiPoly<F>) -> Self {
        Self::monomial(p, 0)
    }

    pub fn monomial(coeff: MultiPoly<F>, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        LaurentPoly { terms }
    }

    pub fn t_power(exp: i32) -> Self {
        Self::monomial(MultiPoly::one(), exp)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &MultiPoly<F>)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn as_constant(&self) -> Option<F> {
        match self.terms.len() {
            0 => Some(F::zero()),
            1 => self.terms.get(&0).and_then(|c| c.as_constant()),
            _ => None,
        }
    }

    /// Minimal exponent with a nonzero coefficient.
    pub fn order(&self) -> Result<i32, SymbolicError> {
        self.terms.keys().next().copied().ok_or(SymbolicError::ZeroPolynomial)
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, exp: i32) -> MultiPoly<F> {
        self.terms.get(&exp).cloned().unwrap_or_else(MultiPoly::zero)
    }

    /// The coefficient of the lowest power of t.
    pub fn leading(&self) -> Option<(i32, &MultiPoly<F>)> {
        self.terms.iter().next().map(|(e, c)| (*e, c))
    }

    pub fn eval_at_zero(&self) -> Result<MultiPoly<F>, SymbolicError> {
        match self.terms.keys().next() {
            Some(&e) if e < 0 => Err(SymbolicError::PoleAtZero(e)),
            _ => Ok(self.coeff(0)),
        }
    }

    /// Inverse of c*t^k for a nonzero constant c.
    pub fn monomial_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&e, c) = self.terms.iter().next()?;
        let c = c.as_constant()?;
        Some(Self::monomial(MultiPoly::constant(F::one() / c), -e))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn scale(&self, p: &MultiPoly<F>) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (*e, c * p))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        LaurentPoly { terms }
    }

    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Substitute t -> t^k for k >= 1.
    pub fn compose_power(&self, k: i32) -> Self {
        assert!(k >= 1, "compose_power needs a positive exponent");
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect(),
        }
    }

    pub fn map_coefficients(&self, f: impl Fn(&MultiPoly<F>) -> MultiPoly<F>) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Substitute Laurent values for variables of a polynomial.
    pub fn lift(p: &MultiPoly<F>, map: &BTreeMap<String, LaurentPoly<F>>) -> Self {
        let mut total = Self::zero();
        let vars = p.vars().to_vec();
        for (exps, c) in p.iter() {
            let mut coeff_part: MultiPoly<F> = MultiPoly::constant(c.clone());
            let mut series = Self::one();
            for (v, &e) in vars.iter().zip(exps) {
                if e == 0 {
                    continue;
                }
                match map.get(v) {
                    Some(img) => series = &series * &img.pow(e),
                    None => coeff_part = &coeff_part * &MultiPoly::var(v).pow(e),
                }
            }
            total = &total + &series.scale(&coeff_part);
        }
        total
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let c = if negate { -c } else { c.clone() };
            let merged = match terms.get(e) {
                Some(v) => v + &c,
                None => c,
            };
            if merged.is_zero() {
                terms.remove(e);
            } else {
                terms.insert(*e, merged);
            }
        }
        LaurentPoly { terms }
    }

    fn product(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<i32, MultiPoly<F>> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let p = ca * cb;
                let slot = terms.entry(ea + eb).or_insert_with(MultiPoly::zero);
                *slot = &*slot + &p;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        LaurentPoly { terms }
    }
}

impl<F: Scalar> Default for LaurentPoly<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a, F: Scalar> Add<&'a LaurentPoly<F>> for &'a LaurentPoly<F> {
    type Output = LaurentPoly<F>;
    fn add(self, rhs: &'a LaurentPoly<F>) -> LaurentPoly<F> {
        self.combine(rhs, false)
    }
}

impl<'a, F: Scalar> Sub<&'a LaurentPoly<F>> for &'a LaurentPoly<F> {
    type Output = LaurentPoly<F>;
    fn sub(self, rhs: &'a LaurentPoly<F>) -> LaurentPoly<F> {
        self.combine(rhs, true)
    }
}

impl<'a, F: Scalar> Mul<&'a LaurentPoly<F>> for &'a LaurentPoly<F> {
    type Output = LaurentPoly<F>;
    fn mul(self, rhs: &'a LaurentPoly<F>) -> LaurentPoly<F> {
        self.product(rhs)
    }
}

impl<F: Scalar> Add for LaurentPoly<F> {
    type Output = LaurentPoly<F>;
    fn add(self, rhs: LaurentPoly<F>) -> LaurentPoly<F> {
        self.combine(&rhs, false)
    }
}

impl<F: Scalar> Sub for LaurentPoly<F> {
    type Output = LaurentPoly<F>;
    fn sub(self, rhs: LaurentPoly<F>) -> LaurentPoly<F> {
        self.combine(&rhs, true)
    }
}

impl<F: Scalar> Mul for LaurentPoly<F> {
    type Output = LaurentPoly<F>;
    fn mul(self, rhs: LaurentPoly<F>) -> LaurentPoly<F> {
        self.product(&rhs)
    }
}

impl<F: Scalar> Neg for LaurentPoly<F> {
    type Output = LaurentPoly<F>;
    fn neg(self) -> LaurentPoly<F> {
        LaurentPoly {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl<F: Scalar> Zero for LaurentPoly<F> {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<F: Scalar> One for LaurentPoly<F> {
    fn one() -> Self {
        LaurentPoly::one()
    }
}

impl<F: Scalar> fmt::Display for LaurentPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let coeff = if c.num_terms() == 1 {
                c.to_string()
            } else {
                format!("({c})")
            };
            match *e {
                0 => write!(f, "{coeff}")?,
                1 if c.is_one_poly() => write!(f, "t")?,
                1 => write!(f, "{coeff}*t")?,
                e if c.is_one_poly() => write!(f, "t^{e}")?,
                e => write!(f, "{coeff}*t^{e}")?,
            }
        }
        Ok(())
    }
}

impl<F: Scalar> MultiPoly<F> {
    fn is_one_poly(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }
}
