use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::error::SymbolicError;
use super::parse;
use super::scalar::Scalar;

/// Exponent vector ordered by graded lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with named variables.
///
/// Variables are kept sorted by name and only variables that occur in some
/// term are stored, so structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly<F> {
    vars: Vec<String>,
    terms: BTreeMap<Mono, F>,
}

fn union_vars(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                out.push(a[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl<F: Scalar> MultiPoly<F> {
    pub fn zero() -> Self {
        MultiPoly {
            vars: Vec::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono(Vec::new()), c);
        }
        MultiPoly {
            vars: Vec::new(),
            terms,
        }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::constant(F::from_i64(n))
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Mono(vec![1]), F::one());
        MultiPoly {
            vars: vec![name.to_string()],
            terms,
        }
    }

    /// Build from terms over an arbitrary (unsorted, unique) variable list.
    pub fn from_terms<I>(vars: &[String], terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, F)>,
    {
        let mut order: Vec<usize> = (0..vars.len()).collect();
        order.sort_by(|&a, &b| vars[a].cmp(&vars[b]));
        let sorted: Vec<String> = order.iter().map(|&i| vars[i].clone()).collect();
        let mut acc: BTreeMap<Mono, F> = BTreeMap::new();
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            let key = Mono(order.iter().map(|&i| e[i]).collect());
            match acc.get_mut(&key) {
                Some(v) => *v = v.clone() + c,
                None => {
                    acc.insert(key, c);
                }
            }
        }
        Self::normalized(sorted, acc)
    }

    fn normalized(vars: Vec<String>, terms: BTreeMap<Mono, F>) -> Self {
        let terms: BTreeMap<Mono, F> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let used: Vec<bool> = (0..vars.len())
            .map(|i| terms.keys().any(|m| m.0[i] > 0))
            .collect();
        if used.iter().all(|&u| u) {
            return MultiPoly { vars, terms };
        }
        let keep: Vec<usize> = (0..vars.len()).filter(|&i| used[i]).collect();
        let vars = keep.iter().map(|&i| vars[i].clone()).collect();
        let terms = terms
            .into_iter()
            .map(|(m, c)| (Mono(keep.iter().map(|&i| m.0[i]).collect()), c))
            .collect();
        MultiPoly { vars, terms }
    }

    fn embed(&self, vars: &[String]) -> impl Iterator<Item = (Mono, &F)> + '_ {
        let pos: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.binary_search(v).expect("variable missing from merged context"))
            .collect();
        let n = vars.len();
        self.terms.iter().map(move |(m, c)| {
            let mut e = vec![0u32; n];
            for (k, &p) in pos.iter().enumerate() {
                e[p] = m.0[k];
            }
            (Mono(e), c)
        })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn as_constant(&self) -> Option<F> {
        if self.is_constant() {
            Some(self.terms.values().next().cloned().unwrap_or_else(F::zero))
        } else {
            None
        }
    }

    pub fn contains_var(&self, name: &str) -> bool {
        self.vars.binary_search_by(|v| v.as_str().cmp(name)).is_ok()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Mono::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        match self.vars.iter().position(|v| v == name) {
            Some(i) => self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    /// Terms in increasing graded lexicographic order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&[u32], &F)> {
        self.terms.iter().map(|(m, c)| (m.0.as_slice(), c))
    }

    /// Terms with exponents laid out along `order`, which must contain every variable.
    pub fn exponents_in(&self, order: &[String]) -> Result<Vec<(Vec<u32>, F)>, SymbolicError> {
        let mut pos = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            match order.iter().position(|o| o == v) {
                Some(p) => pos.push(p),
                None => return Err(SymbolicError::MissingVariable(v.clone())),
            }
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u32; order.len()];
                for (k, &p) in pos.iter().enumerate() {
                    e[p] = m.0[k];
                }
                (e, c.clone())
            })
            .collect())
    }

    pub fn leading_coefficient(&self) -> Option<&F> {
        self.terms.values().next_back()
    }

    pub fn monic(&self) -> Self {
        match self.leading_coefficient() {
            Some(lc) => self.scale(&(F::one() / lc.clone())),
            None => self.clone(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn eval(&self, assignment: &BTreeMap<String, F>) -> Result<F, SymbolicError> {
        let mut values = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            match assignment.get(v) {
                Some(x) => values.push(x.clone()),
                None => return Err(SymbolicError::MissingVariable(v.clone())),
            }
        }
        let mut total = F::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t * values[k].clone();
                }
            }
            total = total + t;
        }
        Ok(total)
    }

    /// Substitute polynomials for some variables; unmapped variables stay symbolic.
    pub fn substitute(&self, map: &BTreeMap<String, MultiPoly<F>>) -> Self {
        if !self.vars.iter().any(|v| map.contains_key(v)) {
            return self.clone();
        }
        let images: Vec<MultiPoly<F>> = self
            .vars
            .iter()
            .map(|v| map.get(v).cloned().unwrap_or_else(|| Self::var(v)))
            .collect();
        let mut power_cache: Vec<Vec<MultiPoly<F>>> = images.iter().map(|p| vec![Self::one(), p.clone()]).collect();
        let mut total = Self::zero();
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for (k, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut power_cache[k];
                while cache.len() <= e as usize {
                    let next = &cache[cache.len() - 1] * &images[k];
                    cache.push(next);
                }
                t = &t * &cache[e as usize];
            }
            total = &total + &t;
        }
        total
    }

    pub fn substitute_values(&self, values: &BTreeMap<String, F>) -> Self {
        let map = values
            .iter()
            .map(|(k, v)| (k.clone(), Self::constant(v.clone())))
            .collect();
        self.substitute(&map)
    }

    pub fn rename(&self, map: &BTreeMap<String, String>) -> Self {
        let vars: Vec<String> = self
            .vars
            .iter()
            .map(|v| map.get(v).cloned().unwrap_or_else(|| v.clone()))
            .collect();
        let mut seen = vars.clone();
        seen.sort();
        seen.dedup();
        if seen.len() == vars.len() {
            Self::from_terms(&vars, self.terms.iter().map(|(m, c)| (m.0.clone(), c.clone())))
        } else {
            let sub = map
                .iter()
                .map(|(k, v)| (k.clone(), Self::var(v)))
                .collect();
            self.substitute(&sub)
        }
    }

    /// Split into Σ coeff_u · u + rest, with coefficients free of the unknowns.
    pub fn linear_parts(&self, unknowns: &[String]) -> Result<(Vec<MultiPoly<F>>, MultiPoly<F>), SymbolicError> {
        let idx: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| unknowns.iter().position(|u| u == v))
            .collect();
        let mut coeffs: Vec<BTreeMap<Mono, F>> = vec![BTreeMap::new(); unknowns.len()];
        let mut rest: BTreeMap<Mono, F> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut hit: Option<usize> = None;
            let mut reduced = m.0.clone();
            for (k, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if let Some(u) = idx[k] {
                    if e > 1 || hit.is_some() {
                        return Err(SymbolicError::Nonlinear(unknowns[u].clone()));
                    }
                    hit = Some(u);
                    reduced[k] = 0;
                }
            }
            match hit {
                Some(u) => {
                    coeffs[u].insert(Mono(reduced), c.clone());
                }
                None => {
                    rest.insert(m.clone(), c.clone());
                }
            }
        }
        let coeffs = coeffs
            .into_iter()
            .map(|t| Self::normalized(self.vars.clone(), t))
            .collect();
        Ok((coeffs, Self::normalized(self.vars.clone(), rest)))
    }

    /// Coefficients with respect to one variable, keyed by its exponent.
    pub fn coefficients_in(&self, name: &str) -> BTreeMap<u32, MultiPoly<F>> {
        let mut out: BTreeMap<u32, BTreeMap<Mono, F>> = BTreeMap::new();
        let pos = self.vars.iter().position(|v| v == name);
        for (m, c) in &self.terms {
            let (e, key) = match pos {
                Some(p) => {
                    let mut k = m.0.clone();
                    let e = k[p];
                    k[p] = 0;
                    (e, Mono(k))
                }
                None => (0, m.clone()),
            };
            out.entry(e).or_default().insert(key, c.clone());
        }
        out.into_iter()
            .map(|(e, t)| (e, Self::normalized(self.vars.clone(), t)))
            .collect()
    }

    fn combine(&self, other: &Self, negate_other: bool) -> Self {
        if self.vars == other.vars {
            let mut terms = self.terms.clone();
            for (m, c) in &other.terms {
                let c = if negate_other { -c.clone() } else { c.clone() };
                match terms.get_mut(m) {
                    Some(v) => *v = v.clone() + c,
                    None => {
                        terms.insert(m.clone(), c);
                    }
                }
            }
            return Self::normalized(self.vars.clone(), terms);
        }
        let vars = union_vars(&self.vars, &other.vars);
        let mut terms: BTreeMap<Mono, F> = self.embed(&vars).map(|(m, c)| (m, c.clone())).collect();
        for (m, c) in other.embed(&vars) {
            let c = if negate_other { -c.clone() } else { c.clone() };
            match terms.get_mut(&m) {
                Some(v) => *v = v.clone() + c,
                None => {
                    terms.insert(m, c);
                }
            }
        }
        Self::normalized(vars, terms)
    }

    fn product(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let vars = union_vars(&self.vars, &other.vars);
        let a: Vec<(Mono, F)> = self.embed(&vars).map(|(m, c)| (m, c.clone())).collect();
        let b: Vec<(Mono, F)> = other.embed(&vars).map(|(m, c)| (m, c.clone())).collect();
        let mut terms: BTreeMap<Mono, F> = BTreeMap::new();
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                let m = Mono(ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect());
                let c = ca.clone() * cb.clone();
                match terms.get_mut(&m) {
                    Some(v) => *v = v.clone() + c,
                    None => {
                        terms.insert(m, c);
                    }
                }
            }
        }
        Self::normalized(vars, terms)
    }
}

impl<F: Scalar> Default for MultiPoly<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a, F: Scalar> Add<&'a MultiPoly<F>> for &'a MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn add(self, rhs: &'a MultiPoly<F>) -> MultiPoly<F> {
        self.combine(rhs, false)
    }
}

impl<'a, F: Scalar> Sub<&'a MultiPoly<F>> for &'a MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn sub(self, rhs: &'a MultiPoly<F>) -> MultiPoly<F> {
        self.combine(rhs, true)
    }
}

impl<'a, F: Scalar> Mul<&'a MultiPoly<F>> for &'a MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn mul(self, rhs: &'a MultiPoly<F>) -> MultiPoly<F> {
        self.product(rhs)
    }
}

impl<F: Scalar> Add for MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn add(self, rhs: MultiPoly<F>) -> MultiPoly<F> {
        self.combine(&rhs, false)
    }
}

impl<F: Scalar> Sub for MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn sub(self, rhs: MultiPoly<F>) -> MultiPoly<F> {
        self.combine(&rhs, true)
    }
}

impl<F: Scalar> Mul for MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn mul(self, rhs: MultiPoly<F>) -> MultiPoly<F> {
        self.product(&rhs)
    }
}

impl<F: Scalar> Neg for MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn neg(self) -> MultiPoly<F> {
        MultiPoly {
            vars: self.vars,
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<F: Scalar> Neg for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn neg(self) -> MultiPoly<F> {
        -(self.clone())
    }
}

impl<F: Scalar> Zero for MultiPoly<F> {
    fn zero() -> Self {
        MultiPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<F: Scalar> One for MultiPoly<F> {
    fn one() -> Self {
        MultiPoly::one()
    }
}

impl<F: Scalar> From<F> for MultiPoly<F> {
    fn from(c: F) -> Self {
        MultiPoly::constant(c)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, vars: &[String], exps: &[u32]) -> fmt::Result {
    let mut first = true;
    for (v, &e) in vars.iter().zip(exps) {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{v}")?;
        } else {
            write!(f, "{v}^{e}")?;
        }
    }
    Ok(())
}

impl<F: Scalar> fmt::Display for MultiPoly<F> {
    /// Canonical form: terms in decreasing graded lexicographic order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_unit_mono = m.degree() == 0;
            if is_unit_mono {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write_monomial(f, &self.vars, &m.0)?;
            } else {
                write!(f, "{a}*")?;
                write_monomial(f, &self.vars, &m.0)?;
            }
        }
        Ok(())
    }
}

impl<F: Scalar> FromStr for MultiPoly<F> {
    type Err = SymbolicError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse_poly(s)
    }
}

impl<F: Scalar> Serialize for MultiPoly<F> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de, F: Scalar> Deserialize<'de> for MultiPoly<F> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Int(i) => i.to_string().parse().map_err(serde::de::Error::custom),
        }
    }
}
