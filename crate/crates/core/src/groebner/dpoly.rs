use std::cmp::Ordering;

use crate::symbolic::{MultiPoly, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    Grevlex,
    Lex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Grevlex => {
                let da: u32 = a.iter().sum();
                let db: u32 = b.iter().sum();
                da.cmp(&db).then_with(|| {
                    for k in (0..a.len()).rev() {
                        if a[k] != b[k] {
                            return b[k].cmp(&a[k]);
                        }
                    }
                    Ordering::Equal
                })
            }
        }
    }
}

/// Dense-exponent polynomial with terms sorted in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DPoly<F> {
    pub terms: Vec<(Vec<u32>, F)>,
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

impl<F: Scalar> DPoly<F> {
    pub fn zero() -> Self {
        DPoly { terms: Vec::new() }
    }

    pub fn from_poly(p: &MultiPoly<F>, vars: &[String], order: MonomialOrder) -> Self {
        let mut terms = p.exponents_in(vars).expect("variable outside the declared ring");
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        DPoly { terms }
    }

    pub fn to_poly(&self, vars: &[String]) -> MultiPoly<F> {
        MultiPoly::from_terms(vars, self.terms.iter().cloned())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0)
    }

    pub fn lm(&self) -> &[u32] {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &F {
        &self.terms[0].1
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn monic(mut self) -> Self {
        if let Some((_, c)) = self.terms.first() {
            let inv = F::one() / c.clone();
            for t in self.terms.iter_mut() {
                t.1 = t.1.clone() * inv.clone();
            }
        }
        self
    }

    /// self - c * x^m * other
    pub fn sub_scaled(&self, c: &F, m: &[u32], other: &Self, order: MonomialOrder) -> Self {
        let shifted = other.terms.iter().map(|(e, k)| {
            (
                e.iter().zip(m).map(|(a, b)| a + b).collect::<Vec<u32>>(),
                k.clone() * c.clone(),
            )
        });
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().cloned().peekable();
        let mut b = shifted.peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (e, k) = b.next().unwrap();
                    out.push((e, -k));
                }
                (Some(x), Some(y)) => match order.cmp(&x.0, &y.0) {
                    Ordering::Greater => out.push(a.next().unwrap()),
                    Ordering::Less => {
                        let (e, k) = b.next().unwrap();
                        out.push((e, -k));
                    }
                    Ordering::Equal => {
                        let (e, k1) = a.next().unwrap();
                        let (_, k2) = b.next().unwrap();
                        let k = k1 - k2;
                        if !k.is_zero() {
                            out.push((e, k));
                        }
                    }
                },
            }
        }
        DPoly { terms: out }
    }
}

/// Full normal form of p with respect to `basis`.
pub fn normal_form<F: Scalar>(p: &DPoly<F>, basis: &[DPoly<F>], order: MonomialOrder) -> DPoly<F> {
    let mut rest = p.clone();
    let mut done: Vec<(Vec<u32>, F)> = Vec::new();
    while !rest.is_zero() {
        let (lm, lc) = rest.terms[0].clone();
        let divisor = basis.iter().find(|g| divides(g.lm(), &lm));
        match divisor {
            Some(g) => {
                let m: Vec<u32> = lm.iter().zip(g.lm()).map(|(a, b)| a - b).collect();
                let c = lc / g.lc().clone();
                rest = rest.sub_scaled(&c, &m, g, order);
            }
            None => {
                done.push(rest.terms.remove(0));
            }
        }
    }
    DPoly { terms: done }
}

pub fn s_polynomial<F: Scalar>(f: &DPoly<F>, g: &DPoly<F>, order: MonomialOrder) -> DPoly<F> {
    let l = lcm(f.lm(), g.lm());
    let mf: Vec<u32> = l.iter().zip(f.lm()).map(|(a, b)| a - b).collect();
    let mg: Vec<u32> = l.iter().zip(g.lm()).map(|(a, b)| a - b).collect();
    let scaled_f = DPoly::zero().sub_scaled(&(-(F::one() / f.lc().clone())), &mf, f, order);
    scaled_f.sub_scaled(&(F::one() / g.lc().clone()), &mg, g, order)
}
