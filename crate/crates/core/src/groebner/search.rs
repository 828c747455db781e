//! Bounded-height rational point search with unit propagation.

use std::collections::BTreeMap;

use crate::symbolic::{MultiPoly, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub nodes: usize,
    pub max_height: i64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            nodes: 20_000,
            max_height: 12,
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Rationals p/q with |p|, q <= h, ordered by height (0, 1, -1, 2, -2, 1/2, ...).
pub fn candidate_values<F: Scalar>(h: i64) -> Vec<F> {
    let mut raw: Vec<(i64, i64, i64)> = vec![(0, 0, 1)];
    for q in 1..=h {
        for p in 1..=h {
            if gcd(p, q) == 1 {
                raw.push((p.max(q), p, q));
            }
        }
    }
    raw.sort_by_key(|&(ht, p, q)| (ht, q, p));
    let mut out = Vec::with_capacity(2 * raw.len());
    for (_, p, q) in raw {
        if p == 0 {
            out.push(F::zero());
        } else {
            out.push(F::ratio(p, q));
            out.push(F::ratio(-p, q));
        }
    }
    out
}

struct Search<'a, F> {
    vars: &'a [String],
    candidates: Vec<F>,
    nodes_left: usize,
}

impl<'a, F: Scalar> Search<'a, F> {
    fn run(
        &mut self,
        assign: &mut BTreeMap<String, F>,
        eqs: Vec<MultiPoly<F>>,
        neqs: Vec<MultiPoly<F>>,
    ) -> Option<BTreeMap<String, F>> {
        if self.nodes_left == 0 {
            return None;
        }
        self.nodes_left -= 1;
        let mut live = Vec::with_capacity(eqs.len());
        for e in eqs {
            match e.as_constant() {
                Some(c) if c.is_zero() => {}
                Some(_) => return None,
                None => live.push(e),
            }
        }
        let mut open = Vec::with_capacity(neqs.len());
        for q in neqs {
            match q.as_constant() {
                Some(c) if c.is_zero() => return None,
                Some(_) => {}
                None => open.push(q),
            }
        }
        if live.is_empty() && open.is_empty() {
            let mut out = assign.clone();
            for v in self.vars {
                out.entry(v.clone()).or_insert_with(F::zero);
            }
            return Some(out);
        }
        // forced value from an equation linear in a single variable
        for e in &live {
            if e.vars().len() == 1 && e.degree_in(&e.vars()[0]) == 1 {
                let v = e.vars()[0].clone();
                let parts = e.coefficients_in(&v);
                let a = parts[&1].as_constant()?;
                let b = parts.get(&0).and_then(|p| p.as_constant()).unwrap_or_else(F::zero);
                let value = -b / a;
                return self.branch(assign, &live, &open, &v, value);
            }
        }
        // univariate of higher degree: try candidate roots
        if let Some(e) = live.iter().find(|e| e.vars().len() == 1) {
            let v = e.vars()[0].clone();
            let roots: Vec<F> = self
                .candidates
                .iter()
                .filter(|c| {
                    let mut m = BTreeMap::new();
                    m.insert(v.clone(), (*c).clone());
                    e.eval(&m).map(|x| x.is_zero()).unwrap_or(false)
                })
                .cloned()
                .collect();
            for r in roots {
                if let Some(found) = self.branch(assign, &live, &open, &v, r) {
                    return Some(found);
                }
            }
            return None;
        }
        let next = self
            .vars
            .iter()
            .filter(|v| !assign.contains_key(*v))
            .max_by_key(|v| {
                let in_eqs = live.iter().filter(|e| e.contains_var(v)).count();
                let in_neqs = open.iter().filter(|e| e.contains_var(v)).count();
                (in_eqs, in_neqs)
            })?
            .clone();
        let cands = self.candidates.clone();
        for c in cands {
            if self.nodes_left == 0 {
                return None;
            }
            if let Some(found) = self.branch(assign, &live, &open, &next, c) {
                return Some(found);
            }
        }
        None
    }

    fn branch(
        &mut self,
        assign: &mut BTreeMap<String, F>,
        eqs: &[MultiPoly<F>],
        neqs: &[MultiPoly<F>],
        var: &str,
        value: F,
    ) -> Option<BTreeMap<String, F>> {
        let mut single = BTreeMap::new();
        single.insert(var.to_string(), value.clone());
        let eqs: Vec<MultiPoly<F>> = eqs.iter().map(|e| e.substitute_values(&single)).collect();
        let neqs: Vec<MultiPoly<F>> = neqs.iter().map(|e| e.substitute_values(&single)).collect();
        assign.insert(var.to_string(), value);
        let out = self.run(assign, eqs, neqs);
        assign.remove(var);
        out
    }
}

/// Search for a rational point of `system` avoiding the zeros of `nonvanishing`.
pub fn find_rational_point<F: Scalar>(
    vars: &[String],
    system: &[MultiPoly<F>],
    nonvanishing: &[MultiPoly<F>],
    budget: SearchBudget,
) -> Option<BTreeMap<String, F>> {
    let mut search = Search {
        vars,
        candidates: candidate_values(budget.max_height),
        nodes_left: budget.nodes,
    };
    let mut assign = BTreeMap::new();
    let point = search.run(&mut assign, system.to_vec(), nonvanishing.to_vec())?;
    let ok = system.iter().all(|e| e.eval(&point).map(|x| x.is_zero()).unwrap_or(false))
        && nonvanishing
            .iter()
            .all(|q| q.eval(&point).map(|x| !x.is_zero()).unwrap_or(false));
    if ok {
        Some(point)
    } else {
        None
    }
}
