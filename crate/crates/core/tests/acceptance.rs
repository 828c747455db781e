use std::collections::BTreeMap;
use std::process::ExitCode;

use algvar_core::algebra::{bracket_bil_bil, change_basis_adjugate, derivation_algebra_dim, LinearMap};
use algvar_core::catalog::{conjecture_family, random_rational, zero_algebra, Catalog, ConjectureKind, DegenerationKind};
use algvar_core::deformation::{universal_witness, verify_degeneration, witness_from_spec, DegenerationOutcome};
use algvar_core::identity::{case_conditions, is_conservative, is_rigid, is_terminal, pinned_conservative, verify_witness};
use algvar_core::report::{build_graph, compare_geometry, parametric_identity, sampled_instances, verify_row, ParametricVerdict, RunConfig};
use algvar_core::{Poly, Rational, Tensor};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 2024;

type Outcome = Result<String, String>;

fn main() -> ExitCode {
    let cat = Catalog::embedded().expect("embedded catalog");
    let cfg = RunConfig::default();
    let criteria: Vec<(&str, fn(&Catalog, &RunConfig) -> Outcome)> = vec![
        ("terminal families", terminality),
        ("rigid and conservative rows with displayed witnesses", witnesses),
        ("terminal, conservative, rigid containment", containment),
        ("degeneration witnesses", degenerations),
        ("separating sets", separating),
        ("derivation levels", levels),
        ("graph, closures, components, open orbit", geometry),
        ("higher dimensional terminal families", conjectures),
        ("brute-force oracle cross-checks", oracles),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run(&cat, &cfg) {
            Ok(note) => println!("PASS criterion {}: {name} ({note})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({why})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {} failed", criteria.len() - failed, failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn point(pairs: &[(&str, &str)]) -> BTreeMap<String, Rational> {
    pairs.iter().map(|(k, v)| (k.to_string(), q(v))).collect()
}

fn terminality(cat: &Catalog, _: &RunConfig) -> Outcome {
    let mut checked = 0;
    for f in cat.table(4) {
        let inst = sampled_instances(f, 20, SEED).map_err(err)?;
        if f.is_parametric() && inst.len() < 20 {
            return Err(format!("{} sampled only {}", f.name, inst.len()));
        }
        for (at, t) in &inst {
            if !is_terminal(t).map_err(err)?.verdict.is_yes() {
                return Err(format!("{} not terminal at {at}", f.name));
            }
            checked += 1;
        }
    }
    for name in ["T07", "T08", "T10"] {
        let g = cat.family(name).map_err(err)?.generic().map_err(err)?;
        if !is_terminal(&g.tensor).map_err(err)?.verdict.is_yes() {
            return Err(format!("{name} not terminal symbolically"));
        }
    }
    let mut negatives = 0;
    for name in ["A2", "A4", "B1", "C", "D1", "D3", "E1", "E2", "E3", "E4"] {
        let f = cat.family(name).map_err(err)?;
        for (at, t) in sampled_instances(f, 20, SEED).map_err(err)? {
            if is_terminal(&t).map_err(err)?.verdict.is_yes() {
                return Err(format!("{name} terminal at {at}"));
            }
            negatives += 1;
        }
    }
    let b2 = cat.family("B2").map_err(err)?.instantiate(&point(&[("alpha", "0")])).map_err(err)?;
    if is_terminal(&b2).map_err(err)?.verdict.is_yes() {
        return Err("B2(0) terminal".into());
    }
    Ok(format!("{checked} terminal instances, {} non-terminal instances", negatives + 1))
}

fn witnesses(cat: &Catalog, cfg: &RunConfig) -> Outcome {
    let mut rows = 0;
    for table in [2u8, 3] {
        for f in cat.table(table) {
            let r = verify_row(cat, table, &f.name, cfg).map_err(err)?;
            if !r.passed {
                return Err(format!("{}: {}", f.name, r.details));
            }
            rows += 1;
        }
    }
    let mut corrected = Vec::new();
    for w in cat.witnesses.iter().filter(|w| !w.errata.is_empty()) {
        let fam = cat.family(&w.rows[0]).map_err(err)?;
        let g = fam.generic().map_err(err)?;
        let mut rels = g.relations.clone();
        rels.extend(w.all_relations());
        let printed = verify_witness(&g.tensor, &w.witness(false), &rels).map_err(err)?;
        let fixed = verify_witness(&g.tensor, &w.witness(true), &rels).map_err(err)?;
        if printed || !fixed {
            return Err(format!("{}: printed {printed}, corrected {fixed}", w.id));
        }
        corrected.push(w.id.clone());
    }
    let mut symbolic = Vec::new();
    let mut sampled = 0;
    for name in ["A4", "B1", "D3"] {
        let f = cat.family(name).map_err(err)?;
        match parametric_identity(f, true, cfg.caps()) {
            Ok(ParametricVerdict::Nowhere) => symbolic.push(name),
            Ok(v) => return Err(format!("{name} rigid {v:?} on its domain")),
            Err(_) => {}
        }
        sampled += rigid_nowhere(f, 25)?;
    }
    let c = cat.family("C").map_err(err)?;
    let mut c_points = 0;
    for pt in c.sample(40, SEED).map_err(err)? {
        if pt["alpha"] == q("1") && pt["beta"] == q("0") {
            continue;
        }
        if is_rigid(&c.instantiate(&pt).map_err(err)?).map_err(err)?.verdict.is_yes() {
            return Err(format!("C rigid at {pt:?}"));
        }
        c_points += 1;
    }
    if c_points < 25 {
        return Err(format!("only {c_points} samples of C"));
    }
    let c10 = c.instantiate(&point(&[("alpha", "1"), ("beta", "0")])).map_err(err)?;
    if !is_rigid(&c10).map_err(err)?.verdict.is_yes() {
        return Err("C(1,0) not rigid".into());
    }
    Ok(format!(
        "{rows} rows, corrected witnesses {corrected:?}, symbolic negatives {symbolic:?}, {} sampled negatives",
        sampled + c_points
    ))
}

fn rigid_nowhere(f: &algvar_core::catalog::Family, count: usize) -> Result<usize, String> {
    let inst = sampled_instances(f, count, SEED).map_err(err)?;
    if f.is_parametric() && inst.len() < count {
        return Err(format!("{} sampled only {}", f.name, inst.len()));
    }
    for (at, t) in &inst {
        if is_rigid(t).map_err(err)?.verdict.is_yes() {
            return Err(format!("{} rigid at {at}", f.name));
        }
    }
    Ok(inst.len())
}

fn containment(cat: &Catalog, _: &RunConfig) -> Outcome {
    let mut count = 0;
    for table in 1..=4 {
        for f in cat.table(table) {
            for (at, t) in sampled_instances(f, 20, SEED).map_err(err)? {
                let term = is_terminal(&t).map_err(err)?.verdict.is_yes();
                let cons = is_conservative(&t).map_err(err)?.verdict.is_yes();
                let rigid = is_rigid(&t).map_err(err)?.verdict.is_yes();
                let pinned = pinned_conservative(&t).map_err(err)?;
                if (term && !cons) || (cons && !rigid) {
                    return Err(format!("{} at {at}: terminal {term} conservative {cons} rigid {rigid}", f.name));
                }
                if pinned != term {
                    return Err(format!("{} at {at}: pinned {pinned} terminal {term}", f.name));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} instances, zero violations"))
}

fn degenerations(cat: &Catalog, cfg: &RunConfig) -> Outcome {
    let mut counts = BTreeMap::new();
    for spec in &cat.degenerations {
        let out = verify_degeneration(&witness_from_spec(cat, spec).map_err(err)?, cfg.caps()).map_err(err)?;
        if !out.is_verified() {
            return Err(format!("{}: {out:?}", spec.id));
        }
        *counts.entry(format!("{:?}", spec.kind)).or_insert(0) += 1;
    }
    let want = [(DegenerationKind::Uniform, 10), (DegenerationKind::Index, 5), (DegenerationKind::Limit, 1)];
    for (kind, n) in want {
        if counts.get(&format!("{kind:?}")) != Some(&n) {
            return Err(format!("expected {n} {kind:?} rows, have {counts:?}"));
        }
    }
    let mut universal = 0;
    for f in cat.table(4) {
        let g = f.generic().map_err(err)?;
        let w = universal_witness(&f.name, &g.tensor, &g.domain());
        if !verify_degeneration(&w, cfg.caps()).map_err(err)?.is_verified() {
            return Err(format!("{} -> k2 not verified", f.name));
        }
        universal += 1;
    }
    Ok(format!("{counts:?}, {universal} universal"))
}

fn separating(cat: &Catalog, cfg: &RunConfig) -> Outcome {
    let mut rows = 0;
    for table in [6u8, 8] {
        for spec in cat.separating.iter().filter(|s| s.table == table) {
            let r = verify_row(cat, table, &spec.id, cfg).map_err(err)?;
            if !r.passed {
                return Err(format!("{}: {}", spec.id, r.details));
            }
            rows += 1;
        }
    }
    Ok(format!(
        "{rows} rows at {}x{} stability samples, {} forbidden parameters",
        cfg.stability_points, cfg.group_elements, cfg.forbidden_samples
    ))
}

fn levels(cat: &Catalog, _: &RunConfig) -> Outcome {
    let want = [
        ("T09", 0),
        ("T01", 1),
        ("T02", 1),
        ("T04", 1),
        ("T05", 1),
        ("T07", 1),
        ("T08", 1),
        ("T10", 2),
        ("T03", 2),
        ("T06", 2),
    ];
    for (name, level) in want {
        let f = cat.family(name).map_err(err)?;
        for (at, t) in sampled_instances(f, 10, SEED).map_err(err)? {
            let d = derivation_algebra_dim(&t).map_err(err)?;
            if d != level {
                return Err(format!("{name} at {at}: {d} derivations, expected {level}"));
            }
        }
    }
    let k2 = derivation_algebra_dim(&zero_algebra(2)).map_err(err)?;
    if k2 != 4 {
        return Err(format!("k2 has {k2} derivations"));
    }
    Ok("all strata reproduced".into())
}

fn geometry(cat: &Catalog, cfg: &RunConfig) -> Outcome {
    let built = build_graph(cat, cfg, false).map_err(err)?;
    let r = compare_geometry(cat, &built.graph);
    if !r.all_match() {
        return Err(format!("{r:?}"));
    }
    if r.components.len() != 4 || r.open_orbits != ["T09"] {
        return Err(format!("components {:?} open {:?}", r.components, r.open_orbits));
    }
    Ok(format!("{} verified edges, 4 components, open orbit T09", built.verified.len()))
}

fn conjectures(_: &Catalog, _: &RunConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let alphas: Vec<Rational> = (0..10).map(|_| random_rational(&mut rng)).collect();
    let mut checked = 0;
    for n in 2..=4 {
        let sum = conjecture_family(ConjectureKind::DirectSum, n, None).map_err(err)?;
        if !is_terminal(&sum).map_err(err)?.verdict.is_yes() {
            return Err(format!("direct sum of {n} copies not terminal"));
        }
        checked += 1;
        for a in &alphas {
            let nu = conjecture_family(ConjectureKind::Nu, n, Some(a)).map_err(err)?;
            if !is_terminal(&nu).map_err(err)?.verdict.is_yes() {
                return Err(format!("nu_{n}({a}) not terminal"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} algebras"))
}

/// Structure constants as plain nested vectors, multiplied out by explicit index sums.
struct Plain {
    c: Vec<Vec<Vec<Poly>>>,
}

impl Plain {
    fn of(t: &Tensor) -> Self {
        let n = t.dim();
        Plain {
            c: (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| t.c(i, j, k).clone()).collect()).collect()).collect(),
        }
    }

    fn n(&self) -> usize {
        self.c.len()
    }

    fn mul(&self, u: &[Poly], v: &[Poly]) -> Vec<Poly> {
        let n = self.n();
        let mut out = vec![Poly::zero(); n];
        for i in 0..n {
            for j in 0..n {
                let w = &u[i] * &v[j];
                if w.is_zero() {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o = &*o + &(&w * &self.c[i][j][k]);
                }
            }
        }
        out
    }
}

fn unit(n: usize, i: usize) -> Vec<Poly> {
    (0..n).map(|k| if k == i { Poly::one() } else { Poly::zero() }).collect()
}

fn add(u: &[Poly], v: &[Poly]) -> Vec<Poly> {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

fn sub(u: &[Poly], v: &[Poly]) -> Vec<Poly> {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

fn scale(s: &Poly, u: &[Poly]) -> Vec<Poly> {
    u.iter().map(|a| s * a).collect()
}

fn oracles(cat: &Catalog, cfg: &RunConfig) -> Outcome {
    let t03 = cat.family("T03").map_err(err)?.instantiate(&BTreeMap::new()).map_err(err)?;
    let n = t03.dim();
    let symbolic = algvar_core::algebra::MultiLinearMap::from_fn(n, 2, |idx, k| {
        Poly::var(&format!("b{}{}_{}", idx[0] + 1, idx[1] + 1, k + 1))
    });
    let p = Plain::of(&t03);
    let o = Plain::of(&symbolic);
    let main = bracket_bil_bil(&t03, &symbolic).map_err(err)?;
    let mut nonzero = 0;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (ex, ey, ez) = (unit(n, x), unit(n, y), unit(n, z));
                let plus = add(
                    &add(&p.mul(&o.mul(&ex, &ey), &ez), &p.mul(&ex, &o.mul(&ey, &ez))),
                    &p.mul(&ey, &o.mul(&ex, &ez)),
                );
                let minus = add(
                    &add(&o.mul(&p.mul(&ex, &ey), &ez), &o.mul(&ex, &p.mul(&ey, &ez))),
                    &o.mul(&ey, &p.mul(&ex, &ez)),
                );
                let want = sub(&plus, &minus);
                for k in 0..n {
                    if main.get(&[x, y, z], k) != &want[k] {
                        return Err(format!("bracket of T03 at ({x},{y},{z})[{k}]"));
                    }
                    if !want[k].is_zero() {
                        nonzero += 1;
                    }
                }
            }
        }
    }
    let same = bracket_bil_bil(&t03, &t03).map_err(err)?;
    if same.entries().iter().any(|e| !e.is_zero()) {
        return Err("[P,P] is not zero".into());
    }

    let a1 = cat.family("A1").map_err(err)?.generic().map_err(err)?.tensor;
    let p = Plain::of(&a1);
    let f_names = [["lambda1", "lambda2"], ["mu1", "mu2"], ["tau1", "tau2"], ["nu1", "nu2"]];
    let phi_names = [["phi11", "phi12"], ["phi21", "phi22"]];
    let cases = case_conditions(&a1).map_err(err)?;
    for case in &cases {
        let [a, b, x, y] = case.abxy;
        let (ea, eb, ex, ey) = (unit(2, a), unit(2, b), unit(2, x), unit(2, y));
        let inner = |u: &[Poly], v: &[Poly]| {
            sub(&sub(&p.mul(&ea, &p.mul(u, v)), &p.mul(&p.mul(&ea, u), v)), &p.mul(u, &p.mul(&ea, v)))
        };
        let double = sub(&sub(&p.mul(&eb, &inner(&ex, &ey)), &inner(&p.mul(&eb, &ex), &ey)), &inner(&ex, &p.mul(&eb, &ey)));
        let fab: Vec<Poly> = f_names[2 * a + b].iter().map(|s| Poly::var(s)).collect();
        let with_f = sub(&sub(&p.mul(&fab, &p.mul(&ex, &ey)), &p.mul(&p.mul(&fab, &ex), &ey)), &p.mul(&ex, &p.mul(&fab, &ey)));
        let want = sub(&add(&double, &with_f), &scale(&Poly::var(phi_names[a][b]), &p.mul(&ex, &ey)));
        if case.equations != want {
            return Err(format!("case {} of A1 differs from the oracle", case.label));
        }
    }

    let spec = cat.degenerations.iter().find(|d| d.id == "T01->T03").ok_or("no T01->T03 row")?;
    let t01 = cat.family("T01").map_err(err)?.instantiate(&BTreeMap::new()).map_err(err)?;
    let basis: Vec<Vec<Poly>> = vec![
        vec![Poly::var("t"), Poly::zero()],
        vec![Poly::zero(), &Poly::var("t") * &Poly::var("t")],
    ];
    let g = LinearMap {
        m: (0..2).map(|k| (0..2).map(|i| basis[i][k].clone()).collect()).collect(),
    };
    let (numer, det) = change_basis_adjugate(&t01, &g).map_err(err)?;
    let p = Plain::of(&t01);
    let det_oracle = &(&basis[0][0] * &basis[1][1]) - &(&basis[0][1] * &basis[1][0]);
    if det != det_oracle {
        return Err("determinant differs from the oracle".into());
    }
    let target = cat.family("T03").map_err(err)?.instantiate(&BTreeMap::new()).map_err(err)?;
    for i in 0..2 {
        for j in 0..2 {
            let v = p.mul(&basis[i], &basis[j]);
            let coords = [
                &(&basis[1][1] * &v[0]) - &(&basis[1][0] * &v[1]),
                &(&basis[0][0] * &v[1]) - &(&basis[0][1] * &v[0]),
            ];
            for k in 0..2 {
                if numer.c(i, j, k) != &coords[k] {
                    return Err(format!("T01->T03 constant ({i},{j})[{k}] differs from the oracle"));
                }
                let rest = &coords[k] - &(&det_oracle * target.c(i, j, k));
                if rest.coefficients_in("t").keys().any(|d| *d <= 3) {
                    return Err(format!("T01->T03 limit ({i},{j})[{k}] is not T03"));
                }
            }
        }
    }
    let out = verify_degeneration(&witness_from_spec(cat, spec).map_err(err)?, cfg.caps()).map_err(err)?;
    if out != (DegenerationOutcome::Verified { det_order: 3 }) {
        return Err(format!("main path gave {out:?}"));
    }
    Ok(format!(
        "T03 bracket with {nonzero} nonzero entries, {} A1 cases, T01->T03 constants",
        cases.len()
    ))
}
