use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::DeformationError;
use crate::algebra::{change_basis, change_basis_adjugate, change_basis_with_inverse, LinearMap, MultiLinearMap};
use crate::catalog::{random_rational, Catalog, SeparatingSpec, Specialization};
use crate::groebner::{generic_matrix, group_variables, is_empty_fast, Caps, Emptiness};
use num_traits::Zero;

use crate::{Poly, Rational, Tensor};

/// Name of the condition variable for c_ij^k, 0-based indices.
pub fn condition_var(i: usize, j: usize, k: usize) -> String {
    format!("c{}{}_{}", i + 1, j + 1, k + 1)
}

pub fn condition_vars(n: usize) -> Vec<String> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out.push(condition_var(i, j, k));
            }
        }
    }
    out
}

fn tensor_assignment(t: &Tensor) -> BTreeMap<String, Poly> {
    let n = t.dim();
    let mut map = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                map.insert(condition_var(i, j, k), t.get(&[i, j], k).clone());
            }
        }
    }
    map
}

/// Conditions evaluated on a tensor.
pub fn conditions_at(conditions: &[Poly], t: &Tensor) -> Vec<Poly> {
    let map = tensor_assignment(t);
    conditions.iter().map(|c| c.substitute(&map)).collect()
}

/// The tensor whose entries are the condition variables.
pub fn generic_tensor(n: usize) -> Tensor {
    MultiLinearMap::from_fn(n, 2, |idx, k| Poly::var(&condition_var(idx[0], idx[1], k)))
}

/// Solving order for sampling points of the region: (condition index, dependent variable) pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Parametrization {
    pub steps: Vec<(usize, String)>,
    pub free: Vec<String>,
}

/// Find an order in which each condition is linear in a fresh variable whose other inputs are already known.
pub fn triangular_order(conditions: &[Poly], vars: &[String]) -> Option<Parametrization> {
    let mut steps = Vec::new();
    let mut used = vec![false; conditions.len()];
    if search(conditions, vars, &mut used, &mut steps) {
        let dependent: BTreeSet<&String> = steps.iter().map(|(_, v)| v).collect();
        let free = vars.iter().filter(|v| !dependent.contains(v)).cloned().collect();
        Some(Parametrization { steps, free })
    } else {
        None
    }
}

fn search(conditions: &[Poly], vars: &[String], used: &mut [bool], steps: &mut Vec<(usize, String)>) -> bool {
    if steps.len() == conditions.len() {
        return true;
    }
    let dependent: Vec<String> = steps.iter().map(|(_, v)| v.clone()).collect();
    for ci in 0..conditions.len() {
        if used[ci] {
            continue;
        }
        let c = &conditions[ci];
        let mut candidates: Vec<&String> = c
            .vars()
            .iter()
            .filter(|v| vars.contains(*v) && !dependent.contains(*v) && c.degree_in(v) == 1)
            .filter(|v| !steps.iter().any(|(k, _)| conditions[*k].contains_var(v)))
            .collect();
        candidates.sort_by_key(|v| !constant_coefficient(c, v));
        for v in candidates {
            used[ci] = true;
            steps.push((ci, v.clone()));
            if search(conditions, vars, used, steps) && order_is_causal(conditions, steps) {
                return true;
            }
            steps.pop();
            used[ci] = false;
        }
    }
    false
}

fn constant_coefficient(c: &Poly, v: &str) -> bool {
    c.linear_parts(&[v.to_string()]).map(|(lin, _)| lin[0].as_constant().is_some()).unwrap_or(false)
}

/// No step may use a variable that a later step solves for.
fn order_is_causal(conditions: &[Poly], steps: &[(usize, String)]) -> bool {
    for (pos, (ci, _)) in steps.iter().enumerate() {
        for (_, later) in &steps[pos + 1..] {
            if conditions[*ci].contains_var(later) {
                return false;
            }
        }
    }
    true
}

/// Random point of the region by the parametrization, or None if a solved coefficient vanished.
fn sample_point(
    conditions: &[Poly],
    param: &Parametrization,
    fixed: &BTreeMap<String, Rational>,
    rng: &mut impl Rng,
) -> Option<BTreeMap<String, Rational>> {
    let mut values = fixed.clone();
    for v in &param.free {
        values.insert(v.clone(), random_rational(rng));
    }
    for (ci, v) in &param.steps {
        let c = conditions[*ci].substitute_values(&values);
        let (lin, rest) = c.linear_parts(std::slice::from_ref(v)).ok()?;
        let a = lin[0].as_constant()?;
        let b = rest.as_constant()?;
        if a.is_zero() {
            return None;
        }
        values.insert(v.clone(), -b / a);
    }
    Some(values)
}

fn random_nonzero(rng: &mut impl Rng) -> Rational {
    loop {
        let x = random_rational(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Lower triangular g: g(e1) = a e1 + b e2, g(e2) = c e2.
pub fn borel_element(a: &Rational, b: &Rational, c: &Rational) -> LinearMap<Rational> {
    LinearMap::from_scalars(&vec![vec![a.clone(), Rational::zero()], vec![b.clone(), c.clone()]])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubVerdict {
    Pass,
    Fail,
    Unknown,
    Skipped,
}

impl SubVerdict {
    pub fn passed(self) -> bool {
        self == SubVerdict::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub sampled: SubVerdict,
    pub points: usize,
    pub group_elements: usize,
    pub symbolic: SubVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmptinessReport {
    pub target: String,
    pub symbolic: SubVerdict,
    pub sampled_parameters: Vec<(String, SubVerdict)>,
}

impl EmptinessReport {
    pub fn passed(&self) -> bool {
        self.symbolic.passed() && self.sampled_parameters.iter().all(|(_, v)| v.passed())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparatingReport {
    pub id: String,
    pub membership: SubVerdict,
    pub stability: StabilityReport,
    pub emptiness: Vec<EmptinessReport>,
}

impl SeparatingReport {
    pub fn passed(&self) -> bool {
        self.membership.passed()
            && self.stability.sampled.passed()
            && self.stability.symbolic != SubVerdict::Fail
            && self.stability.symbolic != SubVerdict::Unknown
            && !self.emptiness.is_empty()
            && self.emptiness.iter().all(|e| e.passed())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeparatingConfig {
    pub points: usize,
    pub group_elements: usize,
    pub forbidden_samples: usize,
    pub seed: u64,
    pub caps: Caps,
}

impl Default for SeparatingConfig {
    fn default() -> Self {
        SeparatingConfig {
            points: 200,
            group_elements: 5,
            forbidden_samples: 10,
            seed: 0,
            caps: Caps::default(),
        }
    }
}

/// The region as given: the source tensor with its parameters, and the polynomial conditions.
#[derive(Clone, Debug)]
pub struct SeparatingSet {
    pub id: String,
    pub family: String,
    pub source: Specialization,
    pub source_params: Vec<String>,
    pub conditions: Vec<Poly>,
    pub excluded: Vec<ExcludedTarget>,
}

#[derive(Clone, Debug)]
pub struct ExcludedTarget {
    pub label: String,
    pub tensor: Tensor,
    /// Target parameters after renaming.
    pub params: Vec<String>,
    pub equations: Vec<Poly>,
    pub inequations: Vec<Poly>,
    pub sample_family: Option<String>,
    pub rename: BTreeMap<String, String>,
}

pub fn separating_from_spec(cat: &Catalog, spec: &SeparatingSpec) -> Result<SeparatingSet, DeformationError> {
    let source = cat.resolve(&spec.source)?;
    let source_params = source.vars.clone();
    let mut excluded = Vec::new();
    for e in &spec.excluded {
        let fam = cat.family(&e.family)?;
        let g = fam.generic()?;
        let rn = |p: &Poly| p.rename(&e.rename);
        let params: Vec<String> = g.vars.iter().map(|v| e.rename.get(v).cloned().unwrap_or_else(|| v.clone())).collect();
        let mut inequations: Vec<Poly> = g.inequations.iter().map(rn).collect();
        inequations.extend(e.constraints.iter().cloned());
        let label = if params.is_empty() {
            e.family.clone()
        } else {
            format!("{}({})", e.family, params.join(","))
        };
        excluded.push(ExcludedTarget {
            label,
            tensor: g.tensor.map_entries(rn),
            params,
            equations: g.relations.iter().chain(&g.equations).map(rn).collect(),
            inequations,
            sample_family: fam.is_parametric().then(|| fam.name.clone()),
            rename: e.rename.clone(),
        });
    }
    Ok(SeparatingSet {
        id: spec.id.clone(),
        family: spec.source.family.clone(),
        source,
        source_params,
        conditions: spec.conditions.clone(),
        excluded,
    })
}

/// Every condition vanishes on the source family, modulo its domain.
pub fn check_membership(s: &SeparatingSet, caps: Caps) -> Result<SubVerdict, DeformationError> {
    let domain = s.source.domain();
    for c in conditions_at(&s.conditions, &s.source.tensor) {
        match domain.implies_zero(&c, caps) {
            Ok(true) => {}
            Ok(false) => return Ok(SubVerdict::Fail),
            Err(_) => return Ok(SubVerdict::Unknown),
        }
    }
    Ok(SubVerdict::Pass)
}

/// Sampled and symbolic stability under the lower triangular group.
pub fn check_stability(s: &SeparatingSet, cat: &Catalog, cfg: &SeparatingConfig) -> Result<StabilityReport, DeformationError> {
    let n = s.source.tensor.dim();
    let cvars = condition_vars(n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let param_points: Vec<BTreeMap<String, Rational>> = if s.source_params.is_empty() {
        vec![BTreeMap::new()]
    } else {
        let fam = cat.family(&s.family)?;
        fam.sample(cfg.points.max(1), cfg.seed)?
    };
    let Some(order) = triangular_order(&s.conditions, &cvars) else {
        return Ok(StabilityReport {
            sampled: SubVerdict::Unknown,
            points: 0,
            group_elements: cfg.group_elements,
            symbolic: symbolic_stability(s, cfg.caps),
            counterexample: None,
        });
    };
    let mut points = 0;
    let mut attempts = 0;
    while points < cfg.points {
        attempts += 1;
        if attempts > 100 * cfg.points.max(1) {
            return Ok(StabilityReport {
                sampled: SubVerdict::Unknown,
                points,
                group_elements: cfg.group_elements,
                symbolic: symbolic_stability(s, cfg.caps),
                counterexample: None,
            });
        }
        let fixed = &param_points[(attempts - 1) % param_points.len()];
        let Some(values) = sample_point(&s.conditions, &order, fixed, &mut rng) else {
            continue;
        };
        let t = MultiLinearMap::from_fn(n, 2, |idx, k| {
            Poly::constant(values[&condition_var(idx[0], idx[1], k)].clone())
        });
        for _ in 0..cfg.group_elements {
            let g = borel_element(&random_nonzero(&mut rng), &random_rational(&mut rng), &random_nonzero(&mut rng));
            let moved = change_basis(&t, &g)?;
            let mut all = fixed.clone();
            for (k, v) in tensor_assignment(&moved) {
                all.insert(k, v.as_constant().unwrap_or_else(Rational::zero));
            }
            for c in &s.conditions {
                if !c.eval(&all)?.is_zero() {
                    return Ok(StabilityReport {
                        sampled: SubVerdict::Fail,
                        points,
                        group_elements: cfg.group_elements,
                        symbolic: SubVerdict::Skipped,
                        counterexample: Some(all.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()),
                    });
                }
            }
        }
        points += 1;
    }
    Ok(StabilityReport {
        sampled: SubVerdict::Pass,
        points,
        group_elements: cfg.group_elements,
        symbolic: symbolic_stability(s, cfg.caps),
        counterexample: None,
    })
}

pub const BOREL_VARS: [&str; 5] = ["ga", "gb", "gc", "gu", "gv"];

/// Each transformed condition lies in the radical of the conditions plus the group relations.
pub fn symbolic_stability(s: &SeparatingSet, caps: Caps) -> SubVerdict {
    let n = s.source.tensor.dim();
    if n != 2 {
        return SubVerdict::Skipped;
    }
    let v = |name: &str| Poly::var(name);
    let g = LinearMap {
        m: vec![vec![v("ga"), Poly::zero()], vec![v("gb"), v("gc")]],
    };
    let g_inv = LinearMap {
        m: vec![
            vec![v("gu"), Poly::zero()],
            vec![-(&(&v("gb") * &v("gu")) * &v("gv")), v("gv")],
        ],
    };
    let generic = generic_tensor(n);
    let Ok(moved) = change_basis_with_inverse(&generic, &g, &g_inv) else {
        return SubVerdict::Unknown;
    };
    let mut system = s.conditions.clone();
    system.push(&(&v("ga") * &v("gu")) - &Poly::one());
    system.push(&(&v("gc") * &v("gv")) - &Poly::one());
    let mut vars = condition_vars(n);
    vars.extend(BOREL_VARS.iter().map(|s| s.to_string()));
    vars.extend(s.source_params.iter().cloned());
    let mut verdict = SubVerdict::Pass;
    for c in conditions_at(&s.conditions, &moved) {
        match is_empty_fast(&vars, &system, &[c], caps) {
            Emptiness::Empty => {}
            Emptiness::NonEmpty(_) => return SubVerdict::Fail,
            Emptiness::Unknown => verdict = SubVerdict::Unknown,
        }
    }
    verdict
}

/// Conditions on the homogenized transform adj(g) lambda(g., g.) with c = N / det(g).
fn homogenized_conditions(conditions: &[Poly], target: &Tensor) -> Result<(Vec<Poly>, Poly), DeformationError> {
    let n = target.dim();
    let g = generic_matrix::<Rational>(n);
    let (num, det) = change_basis_adjugate(target, &g)?;
    let assign = tensor_assignment(&num);
    let cvars: BTreeSet<String> = condition_vars(n).into_iter().collect();
    let mut out = Vec::new();
    for c in conditions {
        let vars = c.vars().to_vec();
        let degree = |exps: &[u32]| -> u32 {
            vars.iter().zip(exps).filter(|(v, _)| cvars.contains(*v)).map(|(_, e)| *e).sum()
        };
        let top = c.iter().map(|(e, _)| degree(e)).max().unwrap_or(0);
        let mut acc = Poly::zero();
        for (exps, coeff) in c.iter() {
            let mut term = Poly::constant(coeff.clone());
            for (var, &e) in vars.iter().zip(exps) {
                if e == 0 {
                    continue;
                }
                let base = if cvars.contains(var) { assign[var].clone() } else { Poly::var(var) };
                term = &term * &base.pow(e);
            }
            term = &term * &det.pow(top - degree(exps));
            acc = &acc + &term;
        }
        out.push(acc);
    }
    Ok((out, det))
}

/// O(target) meets the region nowhere: 1 lies in the saturation by det(g) and the domain inequations.
pub fn orbit_misses_region(
    s: &SeparatingSet,
    target: &ExcludedTarget,
    tensor: &Tensor,
    equations: &[Poly],
    inequations: &[Poly],
    caps: Caps,
) -> Result<SubVerdict, DeformationError> {
    let (mut system, det) = homogenized_conditions(&s.conditions, tensor)?;
    system.extend(equations.iter().cloned());
    system.extend(s.source.relations.iter().cloned());
    system.extend(s.source.equations.iter().cloned());
    let mut nonvanishing = vec![det];
    nonvanishing.extend(inequations.iter().cloned());
    nonvanishing.extend(s.source.inequations.iter().cloned());
    let mut vars = group_variables(tensor.dim());
    vars.extend(s.source_params.iter().cloned());
    vars.extend(target.params.iter().cloned());
    Ok(match is_empty_fast(&vars, &system, &nonvanishing, caps) {
        Emptiness::Empty => SubVerdict::Pass,
        Emptiness::NonEmpty(_) => SubVerdict::Fail,
        Emptiness::Unknown => SubVerdict::Unknown,
    })
}

/// Symbolic emptiness over all target parameters, plus sampled forbidden values.
pub fn check_emptiness(
    s: &SeparatingSet,
    cat: &Catalog,
    cfg: &SeparatingConfig,
) -> Result<Vec<EmptinessReport>, DeformationError> {
    let mut out = Vec::new();
    for (ti, target) in s.excluded.iter().enumerate() {
        let symbolic = orbit_misses_region(s, target, &target.tensor, &target.equations, &target.inequations, cfg.caps)?;
        let mut sampled = Vec::new();
        if let Some(name) = &target.sample_family {
            let fam = cat.family(name)?;
            let forbidden = forbidden_points(fam, target, cfg.forbidden_samples, cfg.seed.wrapping_add(ti as u64))?;
            for pt in forbidden {
                let renamed: BTreeMap<String, Rational> = pt
                    .iter()
                    .map(|(k, v)| (target.rename.get(k).cloned().unwrap_or_else(|| k.clone()), v.clone()))
                    .collect();
                let tensor = target.tensor.substitute_values(&renamed);
                let label = renamed.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",");
                let v = orbit_misses_region(s, target, &tensor, &[], &[], cfg.caps)?;
                sampled.push((label, v));
            }
        }
        out.push(EmptinessReport {
            target: target.label.clone(),
            symbolic,
            sampled_parameters: sampled,
        });
    }
    Ok(out)
}

/// Admissible target parameters that also satisfy the exclusion constraints.
fn forbidden_points(
    fam: &crate::catalog::Family,
    target: &ExcludedTarget,
    count: usize,
    seed: u64,
) -> Result<Vec<BTreeMap<String, Rational>>, DeformationError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 1000 * count.max(1) {
        attempts += 1;
        let pt: BTreeMap<String, Rational> = fam.params.iter().map(|p| (p.clone(), random_rational(&mut rng))).collect();
        if fam.instantiate(&pt).is_err() || out.contains(&pt) {
            continue;
        }
        let renamed: BTreeMap<String, Rational> = pt
            .iter()
            .map(|(k, v)| (target.rename.get(k).cloned().unwrap_or_else(|| k.clone()), v.clone()))
            .collect();
        let mut ok = true;
        for q in &target.inequations {
            if q.vars().iter().all(|v| renamed.contains_key(v)) && q.eval(&renamed)?.is_zero() {
                ok = false;
            }
        }
        if ok {
            out.push(pt);
        }
    }
    Ok(out)
}

/// All three sub-verdicts for one row.
pub fn verify_separating_set(cat: &Catalog, spec: &SeparatingSpec, cfg: &SeparatingConfig) -> Result<SeparatingReport, DeformationError> {
    let s = separating_from_spec(cat, spec)?;
    Ok(SeparatingReport {
        id: s.id.clone(),
        membership: check_membership(&s, cfg.caps)?,
        stability: check_stability(&s, cat, cfg)?,
        emptiness: check_emptiness(&s, cat, cfg)?,
    })
}
