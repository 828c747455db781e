use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use algvar_core::algebra::{format_vector, TensorFile};
use algvar_core::catalog::{zero_algebra, Catalog};
use algvar_core::deformation::{edges_to_dot, primary_to_dot};
use algvar_core::groebner::{are_isomorphic, Isomorphism};
use algvar_core::identity::{is_conservative, is_jordan, is_rigid, is_terminal, IdentityError, IdentityKind};
use algvar_core::report::{
    build_graph, compare_geometry, invariants, row_ids, verify_row, RunConfig, RunReport, TableReport, TABLES,
};
use algvar_core::{Rational, Tensor};
use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

const YES: u8 = 0;
const NO: u8 = 1;
const ERROR: u8 = 2;
const UNKNOWN: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "algvar", version, about = "Identities and degenerations of two-dimensional algebras")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = RunConfig::default().seed)]
    seed: u64,
    /// Sampled parameter points per family.
    #[arg(long, global = true, default_value_t = RunConfig::default().samples)]
    samples: usize,
    #[arg(long, global = true, default_value_t = RunConfig::default().degree_cap)]
    degree_cap: u32,
    #[arg(long, global = true, default_value_t = RunConfig::default().pair_cap)]
    pair_cap: usize,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Directory for the JSON report and certificates.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Catalog directory; the embedded catalog is used otherwise.
    #[arg(long, global = true, env = "ALGVAR_DATA")]
    data: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide an identity for one algebra.
    Check {
        algebra: String,
        #[arg(long, default_value = "terminal")]
        identity: IdentityKind,
    },
    /// Re-verify catalog tables row by row.
    VerifyTables {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=8))]
        tables: Vec<u8>,
    },
    /// Build the degeneration graph and compare it with the golden figures.
    Graph {
        /// Write the primary degeneration graph as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Also report the inclusion lattice of orbit closures.
        #[arg(long)]
        lattice: bool,
        /// Keep going when some edge fails to verify.
        #[arg(long)]
        force: bool,
    },
    /// Decide whether two algebras are isomorphic.
    Iso { a: String, b: String },
    /// Print numeric invariants.
    Invariants { algebra: String },
    /// Sample parameter points of a catalog family.
    Sample { family: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(ERROR)
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let cfg = RunConfig {
        seed: cli.seed,
        samples: cli.samples,
        degree_cap: cli.degree_cap,
        pair_cap: cli.pair_cap,
        ..RunConfig::default()
    };
    if cfg.samples == 0 || cfg.degree_cap == 0 || cfg.pair_cap == 0 {
        bail!("--samples, --degree-cap and --pair-cap must be positive");
    }
    let cat = match &cli.data {
        Some(dir) => Catalog::from_dir(dir).with_context(|| format!("loading catalog from {}", dir.display()))?,
        None => Catalog::embedded()?,
    };
    match &cli.command {
        Command::Check { algebra, identity } => check(cli, &cfg, &cat, algebra, *identity),
        Command::VerifyTables { tables } => verify_tables(cli, &cfg, &cat, tables),
        Command::Graph { dot, lattice, force } => graph(cli, &cfg, &cat, dot.as_deref(), *lattice, *force),
        Command::Iso { a, b } => iso(cli, &cfg, &cat, a, b),
        Command::Invariants { algebra } => {
            let t = load_algebra(&cat, algebra)?;
            let inv = invariants(&t)?;
            let report = with_config(&cfg, json!({"algebra": algebra, "invariants": inv}));
            emit(cli, &report, || {
                format!(
                    "{algebra}: dim {} derivations {} orbit {} product span {}\n commutative {} terminal {} conservative {} rigid {}",
                    inv.dim,
                    inv.derivation_dim,
                    inv.orbit_dim,
                    inv.product_span_dim,
                    inv.commutative,
                    inv.terminal,
                    inv.conservative,
                    inv.rigid
                )
            })?;
            Ok(YES)
        }
        Command::Sample { family } => {
            let f = cat.family(family)?;
            let points = f.sample(cfg.samples, cfg.seed)?;
            let rows: Vec<Value> = points
                .iter()
                .map(|p| -> Result<Value> {
                    let t = f.instantiate(p)?;
                    Ok(json!({"params": p.iter().map(|(k, v)| (k.clone(), v.to_string())).collect::<BTreeMap<_, _>>(), "algebra": t.to_json()}))
                })
                .collect::<Result<_>>()?;
            let report = with_config(&cfg, json!({"family": family, "samples": rows}));
            emit(cli, &report, || {
                points
                    .iter()
                    .map(|p| p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" "))
                    .collect::<Vec<_>>()
                    .join("\n")
            })?;
            Ok(YES)
        }
    }
}

fn with_config(cfg: &RunConfig, mut body: Value) -> Value {
    body["seed"] = json!(cfg.seed);
    body["config_hash"] = json!(cfg.hash());
    body["config"] = json!(cfg);
    body
}

fn emit(cli: &Cli, report: &Value, text: impl FnOnce() -> String) -> Result<()> {
    let pretty = serde_json::to_string_pretty(report)?;
    let body = if cli.json { pretty.clone() } else { text() };
    if let Err(e) = writeln!(std::io::stdout(), "{body}") {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            return Err(e.into());
        }
    }
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.json"), format!("{pretty}\n"))?;
    }
    Ok(())
}

/// A JSON file, `zero-algebra`/`k2`, a constant catalog name, or `NAME:alpha=1,beta=2`.
fn load_algebra(cat: &Catalog, spec: &str) -> Result<Tensor> {
    let path = Path::new(spec);
    if path.is_file() {
        return read_tensor_file(path);
    }
    if spec == "zero-algebra" || spec == "k2" {
        return Ok(zero_algebra(2));
    }
    let (name, params) = spec.split_once(':').unwrap_or((spec, ""));
    let family = cat.family(name).map_err(|_| anyhow!("`{spec}` is neither a file nor a catalog algebra"))?;
    let mut values = BTreeMap::new();
    for kv in params.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = kv.split_once('=').ok_or_else(|| anyhow!("expected name=value, got `{kv}`"))?;
        let v: Rational = v.trim().parse().map_err(|_| anyhow!("`{v}` is not a rational number"))?;
        values.insert(k.trim().to_string(), v);
    }
    if values.is_empty() && family.is_parametric() {
        return Ok(family.generic()?.tensor);
    }
    Ok(family.instantiate(&values)?)
}

fn read_tensor_file(path: &Path) -> Result<Tensor> {
    let src = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: TensorFile<Rational> = serde_json::from_str(&src).map_err(|e| {
        let line = src.lines().nth(e.line().saturating_sub(1)).unwrap_or("");
        anyhow!("{}:{}:{}: {e}\n  | {line}", path.display(), e.line(), e.column())
    })?;
    file.into_tensor().with_context(|| format!("{}", path.display()))
}

fn check(cli: &Cli, cfg: &RunConfig, cat: &Catalog, algebra: &str, kind: IdentityKind) -> Result<u8> {
    let t = load_algebra(cat, algebra)?;
    let (verdict, dim, witness) = match kind {
        IdentityKind::Jordan => match is_jordan(&t) {
            Ok(b) => (b, None, None),
            Err(IdentityError::NonCommutative) => (false, None, None),
            Err(e) => return Err(e.into()),
        },
        _ => {
            let r = match kind {
                IdentityKind::Terminal => is_terminal(&t)?,
                IdentityKind::Conservative => is_conservative(&t)?,
                _ => is_rigid(&t)?,
            };
            (r.verdict.is_yes(), r.solution_dim, r.witness.map(|w| w.display_lines()))
        }
    };
    let word = if verdict { "yes" } else { "no" };
    let report = with_config(
        cfg,
        json!({"algebra": algebra, "identity": kind, "verdict": word, "solution_dim": dim, "witness": witness}),
    );
    emit(cli, &report, || {
        let mut s = format!("{algebra}: {} {word}", identity_name(kind));
        if let Some(d) = dim {
            s.push_str(&format!(" (solution space dim {d})"));
        }
        for l in witness.iter().flatten() {
            s.push_str(&format!("\n  {l}"));
        }
        s
    })?;
    Ok(if verdict { YES } else { NO })
}

fn identity_name(kind: IdentityKind) -> &'static str {
    match kind {
        IdentityKind::Terminal => "terminal",
        IdentityKind::Conservative => "conservative",
        IdentityKind::Rigid => "rigid",
        IdentityKind::Jordan => "jordan",
    }
}

fn verify_tables(cli: &Cli, cfg: &RunConfig, cat: &Catalog, tables: &[u8]) -> Result<u8> {
    let mut wanted: Vec<u8> = if tables.is_empty() { TABLES.to_vec() } else { tables.to_vec() };
    wanted.sort_unstable();
    wanted.dedup();
    let mut tasks = Vec::new();
    for &t in &wanted {
        for r in row_ids(cat, t)? {
            tasks.push((t, r));
        }
    }
    let rows = tasks
        .par_iter()
        .map(|(t, r)| verify_row(cat, *t, r, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let reports: Vec<TableReport> = wanted
        .iter()
        .map(|&t| TableReport::from_rows(t, rows.iter().filter(|r| r.table == t).cloned().collect()))
        .collect();
    let run = RunReport::new(cfg, reports);
    if let Some(dir) = &cli.out {
        let certs = dir.join("certificates");
        fs::create_dir_all(&certs)?;
        for r in &rows {
            let c = r.certificate();
            let sub = certs.join(format!("table{}", r.table));
            fs::create_dir_all(&sub)?;
            fs::write(sub.join(c.file_name()), format!("{}\n", serde_json::to_string_pretty(&c)?))?;
        }
    }
    emit(cli, &serde_json::to_value(&run)?, || {
        let mut s = String::new();
        for t in &run.tables {
            s.push_str(&format!("table {}: {}/{} rows pass\n", t.table, t.passed, t.total));
            for r in t.rows.iter().filter(|r| !r.passed) {
                s.push_str(&format!("  FAIL {}\n", r.row_id));
            }
        }
        s.push_str(&format!("seed {} config {}", run.seed, run.config_hash));
        s
    })?;
    Ok(if run.all_passed() { YES } else { NO })
}

fn graph(cli: &Cli, cfg: &RunConfig, cat: &Catalog, dot: Option<&Path>, lattice: bool, force: bool) -> Result<u8> {
    if cat.degenerations.is_empty() {
        bail!("no verified degenerations to build a graph from");
    }
    let built = build_graph(cat, cfg, force)?;
    let g = &built.graph;
    let primary = g.primary();
    let geometry = compare_geometry(cat, g);
    let lattice_edges = g.lattice();
    let nodes: Vec<String> = g.nodes.keys().cloned().collect();
    if let Some(path) = dot {
        fs::write(path, primary_to_dot(&primary)).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("figure1.dot"), primary_to_dot(&primary))?;
        fs::write(dir.join("figure2.dot"), edges_to_dot("lattice", &nodes, &lattice_edges))?;
    }
    let report = with_config(
        cfg,
        json!({
            "verified": built.verified,
            "failed": built.failed,
            "primary_edges": primary.edges,
            "levels": primary.levels,
            "lattice": if lattice { json!(lattice_edges) } else { Value::Null },
            "geometry": geometry,
        }),
    );
    emit(cli, &report, || {
        let mut s = format!("{} degenerations verified, {} failed\n", built.verified.len(), built.failed.len());
        s.push_str(&format!("primary graph: {} edges\n", primary.edges.len()));
        if lattice {
            for (a, b) in &lattice_edges {
                s.push_str(&format!("  {a} > {b}\n"));
            }
        }
        s.push_str(&format!("{} irreducible components:\n", geometry.components.len()));
        for c in &geometry.components {
            s.push_str(&format!("  {{{}}}\n", c.iter().cloned().collect::<Vec<_>>().join(", ")));
        }
        s.push_str(&format!("open orbit: {}\n", geometry.open_orbits.join(", ")));
        s.push_str(&format!("matches golden figures: {}", geometry.all_match()));
        s
    })?;
    Ok(if built.failed.is_empty() && geometry.all_match() { YES } else { NO })
}

fn iso(cli: &Cli, cfg: &RunConfig, cat: &Catalog, a: &str, b: &str) -> Result<u8> {
    let ta = load_algebra(cat, a)?;
    let tb = load_algebra(cat, b)?;
    if ta.dim() != tb.dim() {
        bail!("dimension mismatch: {} vs {}", ta.dim(), tb.dim());
    }
    let result = are_isomorphic(&ta, &tb, cfg.caps());
    let g = match &result {
        Isomorphism::Isomorphic(Some(g)) => Some(
            (0..g.m.len())
                .map(|j| format_vector(&g.m.iter().map(|row| row[j].clone()).collect::<Vec<_>>()))
                .collect::<Vec<_>>(),
        ),
        _ => None,
    };
    let report = with_config(cfg, json!({"a": a, "b": b, "verdict": result.label(), "g_images": g}));
    emit(cli, &report, || {
        let mut s = format!("{a} ~ {b}: {}", result.label());
        for (j, img) in g.iter().flatten().enumerate() {
            s.push_str(&format!("\n  g(e{}) = {img}", j + 1));
        }
        s
    })?;
    Ok(match result {
        Isomorphism::Isomorphic(_) => YES,
        Isomorphism::NotIsomorphic => NO,
        Isomorphism::Unknown => UNKNOWN,
    })
}
