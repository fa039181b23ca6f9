//! `conevol`: build linear matroids and base polytopes from exact-rational
//! direction vectors, check subspace concentration, evaluate the volume
//! decomposition functionals by independent routes, and run the optimizer
//! and reproduction suites.

mod input;
mod report;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use conevol_core::concentration::{relint_equiv, scc_check, ConcentrationError, WeightVector};
use conevol_core::functionals::{
    brute_xk, closed_form_xk, identity_check, recursion_table, BRUTE_CAP,
};
use conevol_core::matroid::{build_matroid, LinearMatroid, MatroidSnapshot, VectorConfiguration};
use conevol_core::maximize::{
    edge_ascent, frank_wolfe_max, project_box_simplex, projected_gradient_max, vertex_oracle_max,
    Objective, OptResult, OptimizerConfig, VERTEX_ORACLE_CAP,
};
use conevol_core::polytope::{edges_smallcase, hrep, vrep, EDGE_VERTEX_CAP};
use conevol_core::reproduce::{reproduce, SuiteName};
use conevol_core::scalar::{rational_string, Rational, Scalar};
use input::parse_input;
use report::{emit, indices_1based, Format, Report};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "conevol", version, about = "Matroid base polytopes and volume decomposition functionals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, default_value = "json")]
    format: Format,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed echoed in reports and used by randomized methods.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Matroid structure: flats, bases, circuits, components.
    Analyze {
        #[arg(long)]
        input: PathBuf,
    },
    /// V-representation, H-representation, dimension and edges.
    Polytope {
        #[arg(long)]
        input: PathBuf,
    },
    /// Subspace concentration check plus relint equivalence (needs weights).
    Scc {
        #[arg(long)]
        input: PathBuf,
    },
    /// Evaluate the functionals X_k (needs weights).
    Eval {
        #[arg(long)]
        input: PathBuf,
        /// Evaluate only this k (default: all available).
        #[arg(long)]
        k: Option<usize>,
        /// brute | recursion | closed
        #[arg(long, default_value = "recursion")]
        method: String,
        /// Exact rational evaluation.
        #[arg(long)]
        exact: bool,
    },
    /// Decomposition identity residuals (needs weights).
    Identity {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        exact: bool,
    },
    /// Maximize an objective over the base polytope.
    Optimize {
        #[arg(long)]
        input: PathBuf,
        /// x2 | x3 | f
        #[arg(long)]
        objective: String,
        /// fw | pg | edge | vertex
        #[arg(long, default_value = "fw")]
        method: String,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Run a named reproduction suite: thm11 | thm12 | thm13 | ex35 | lyz.
    Reproduce { name: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// Builds the matroid, consulting `CONEVOL_CACHE_DIR` for cached flat/basis
/// enumerations keyed by a content hash of the configuration (best effort;
/// cache problems silently fall back to recomputation).
fn load_matroid(config: VectorConfiguration) -> LinearMatroid {
    let Some(dir) = std::env::var_os("CONEVOL_CACHE_DIR") else {
        return build_matroid(config);
    };
    let dir = PathBuf::from(dir);
    let key = {
        let mut hasher = Sha256::new();
        hasher.update(config.content_key().as_bytes());
        format!("{:x}", hasher.finalize())
    };
    let path = dir.join(format!("{key}.json"));
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(snapshot) = serde_json::from_str::<MatroidSnapshot>(&text) {
            if let Ok(m) = LinearMatroid::restore(config.clone(), snapshot) {
                return m;
            }
        }
    }
    let m = build_matroid(config);
    let mut snapshot = m.snapshot();
    snapshot.content_key_hashed = Some(key);
    if std::fs::create_dir_all(&dir).is_ok() {
        if let Ok(text) = serde_json::to_string(&snapshot) {
            let _ = std::fs::write(&path, text);
        }
    }
    m
}

fn write_output(cli_output: &Option<PathBuf>, text: &str) -> Result<()> {
    match cli_output {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("cannot write output to {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn require_weights(doc: &input::InputDocument) -> Result<WeightVector<Rational>> {
    doc.weights
        .clone()
        .ok_or_else(|| anyhow!("this command requires a \"weights\" array in the input document"))
}

fn run(cli: Cli) -> Result<u8> {
    let (report, code) = match &cli.command {
        Command::Analyze { input } => {
            let doc = parse_input(input)?;
            let m = load_matroid(doc.config);
            let payload = analyze_payload(&m);
            (Report::new("analyze", cli.seed).with_configuration(&m)?.with_payload(&payload)?, 0)
        }
        Command::Polytope { input } => {
            let doc = parse_input(input)?;
            let m = load_matroid(doc.config);
            let payload = polytope_payload(&m)?;
            (Report::new("polytope", cli.seed).with_configuration(&m)?.with_payload(&payload)?, 0)
        }
        Command::Scc { input } => {
            let doc = parse_input(input)?;
            let weights = require_weights(&doc)?;
            let m = load_matroid(doc.config);
            scc_report(&m, &weights, cli.seed)?
        }
        Command::Eval { input, k, method, exact } => {
            let doc = parse_input(input)?;
            let weights = require_weights(&doc)?;
            let m = load_matroid(doc.config);
            let payload = eval_payload(&m, &weights, *k, method, *exact)?;
            (Report::new("eval", cli.seed).with_configuration(&m)?.with_payload(&payload)?, 0)
        }
        Command::Identity { input, exact } => {
            let doc = parse_input(input)?;
            let weights = require_weights(&doc)?;
            let m = load_matroid(doc.config);
            identity_report(&m, &weights, *exact, cli.seed)?
        }
        Command::Optimize { input, objective, method, restarts, tol } => {
            let doc = parse_input(input)?;
            let m = load_matroid(doc.config);
            let cfg = OptimizerConfig {
                tolerance: *tol,
                restarts: *restarts,
                seed: cli.seed,
                ..Default::default()
            };
            let payload = optimize_payload(&m, objective, method, &cfg)?;
            (Report::new("optimize", cli.seed).with_configuration(&m)?.with_payload(&payload)?, 0)
        }
        Command::Reproduce { name } => {
            let suite: SuiteName = name.parse().map_err(|e: String| anyhow!(e))?;
            let suite_report = reproduce(suite, cli.seed);
            let passed = suite_report.passed;
            let report = Report::new("reproduce", cli.seed)
                .with_payload(&suite_report)?
                .with_passed(passed);
            (report, if passed { 0 } else { 2 })
        }
    };
    let text = emit(&report, cli.format)?;
    write_output(&cli.output, &text)?;
    Ok(code)
}

#[derive(Serialize)]
struct FlatOut {
    rank: usize,
    indices: Vec<usize>,
}

fn analyze_payload(m: &LinearMatroid) -> serde_json::Value {
    let flats: Vec<FlatOut> = m
        .flats()
        .iter()
        .map(|f| FlatOut { rank: f.rank, indices: indices_1based(f.indices) })
        .collect();
    let bases: Vec<Vec<usize>> = m.bases().iter().map(|b| indices_1based(*b)).collect();
    let circuits: Vec<Vec<usize>> = m.circuits().iter().map(|c| indices_1based(*c)).collect();
    let components: Vec<Vec<usize>> =
        m.components().blocks().iter().map(|b| indices_1based(*b)).collect();
    json!({
        "components": components,
        "flats": flats,
        "bases": bases,
        "circuits": circuits,
    })
}

fn polytope_payload(m: &LinearMatroid) -> Result<serde_json::Value> {
    let v = vrep(m);
    let h = hrep(m);
    let vertices: Vec<Vec<usize>> = v.vertices().iter().map(|b| indices_1based(*b)).collect();
    let hrep_rows: Vec<serde_json::Value> = h
        .rows()
        .iter()
        .map(|(mask, bound)| json!({"indices": indices_1based(*mask), "bound": bound}))
        .collect();
    let edges: Option<Vec<(usize, usize)>> = if v.len() <= EDGE_VERTEX_CAP {
        Some(edges_smallcase(m, EDGE_VERTEX_CAP).map_err(|e| anyhow!("{e}"))?)
    } else {
        None
    };
    Ok(json!({
        "dimension": conevol_core::polytope::dimension(m).map_err(|e| anyhow!("{e}"))?,
        "vertex_count": v.len(),
        "vertices_as_basis_indices": vertices,
        "equality_sum": h.target_sum(),
        "flat_inequalities": hrep_rows,
        "edges_as_vertex_pairs": edges,
    }))
}

fn scc_report(
    m: &LinearMatroid,
    weights: &WeightVector<Rational>,
    seed: u64,
) -> Result<(Report, u8)> {
    let scc = scc_check(m, weights, 0.0).map_err(|e| anyhow!("{e}"))?;
    let (relint, equivalence_ok, code) = match relint_equiv(m, weights, 0.0) {
        Ok(v) => (Some(v), true, 0),
        Err(ConcentrationError::EquivalenceViolated { scc, relint }) => {
            eprintln!(
                "internal inconsistency: concentration says {scc}, relative interior says {relint}"
            );
            (None, false, 2)
        }
        Err(e) => return Err(anyhow!("{e}")),
    };
    let payload = json!({
        "total": rational_string(&weights.total()),
        "satisfied": scc.satisfied,
        "inequality_violations": scc.inequality_violations.iter().map(|f| indices_1based(*f)).collect::<Vec<_>>(),
        "equality_flats": scc.equality_flats.iter().map(|f| indices_1based(*f)).collect::<Vec<_>>(),
        "missing_complements": scc.missing_complements.iter().map(|f| indices_1based(*f)).collect::<Vec<_>>(),
        "in_relative_interior": relint,
        "equivalence_consistent": equivalence_ok,
    });
    let report = Report::new("scc", seed)
        .with_configuration(m)?
        .with_payload(&payload)?
        .with_passed(equivalence_ok);
    Ok((report, code))
}

#[derive(Serialize)]
struct EvalRow {
    k: usize,
    xk_pow: f64,
    xk: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    xk_pow_exact: Option<String>,
}

fn eval_payload(
    m: &LinearMatroid,
    weights: &WeightVector<Rational>,
    k: Option<usize>,
    method: &str,
    exact: bool,
) -> Result<serde_json::Value> {
    let n = m.n();
    let ks: Vec<usize> = match (method, k) {
        (_, Some(k)) if k == 0 || k > n => bail!("k = {k} out of range 1..={n}"),
        ("closed", Some(k)) if k != 2 && k != 3 => bail!("closed form supports k in {{2, 3}}"),
        (_, Some(k)) => vec![k],
        ("closed", None) => (2..=3.min(n)).collect(),
        (_, None) => (1..=n).collect(),
    };
    let float_weights = WeightVector::new(weights.to_f64()).map_err(|e| anyhow!("{e}"))?;

    let mut rows: Vec<EvalRow> = Vec::new();
    let mut ratios = serde_json::Value::Null;
    match method {
        "recursion" => {
            let exact_table = exact.then(|| recursion_table(m, weights)).transpose()?;
            let table = recursion_table(m, &float_weights)?;
            for &k in &ks {
                rows.push(EvalRow {
                    k,
                    xk_pow: table.xk_pow(k),
                    xk: table.xk(k),
                    xk_pow_exact: exact_table
                        .as_ref()
                        .map(|t| rational_string(&t.xk_pow(k))),
                });
            }
            // exploratory per-subspace data (no asserted bound)
            let r = table.subspace_ratios(&float_weights);
            ratios = serde_json::to_value(
                r.iter()
                    .map(|(members, rank, values)| {
                        json!({
                            "indices": indices_1based(*members),
                            "rank": rank,
                            "xl_pow_over_mass_pow": values,
                        })
                    })
                    .collect::<Vec<_>>(),
            )?;
        }
        "brute" => {
            for &k in &ks {
                let value = brute_xk(m, &float_weights, k, BRUTE_CAP)?;
                rows.push(EvalRow {
                    k,
                    xk_pow: value,
                    xk: value.max(0.0).powf(1.0 / n as f64),
                    xk_pow_exact: exact
                        .then(|| brute_xk(m, weights, k, BRUTE_CAP))
                        .transpose()?
                        .map(|v| rational_string(&v)),
                });
            }
        }
        "closed" => {
            for &k in &ks {
                let value = closed_form_xk(m, &float_weights, k)?;
                rows.push(EvalRow {
                    k,
                    xk_pow: value,
                    xk: value.max(0.0).powf(1.0 / n as f64),
                    xk_pow_exact: exact
                        .then(|| closed_form_xk(m, weights, k))
                        .transpose()?
                        .map(|v| rational_string(&v)),
                });
            }
        }
        other => bail!("unknown method {other:?} (expected brute|recursion|closed)"),
    }

    let mut csv: Vec<Vec<String>> = vec![vec!["k".into(), "xk_pow".into(), "xk".into()]];
    for row in &rows {
        csv.push(vec![row.k.to_string(), format!("{}", row.xk_pow), format!("{}", row.xk)]);
    }
    Ok(json!({
        "method": method,
        "exact": exact,
        "total": rational_string(&weights.total()),
        "table": rows,
        "subspace_ratios": ratios,
        "csv": csv,
    }))
}

fn identity_report(
    m: &LinearMatroid,
    weights: &WeightVector<Rational>,
    exact: bool,
    seed: u64,
) -> Result<(Report, u8)> {
    let (report, scale) = if exact {
        (identity_check(m, weights, BRUTE_CAP)?, weights.total().to_f64())
    } else {
        let float_weights = WeightVector::new(weights.to_f64()).map_err(|e| anyhow!("{e}"))?;
        (identity_check(m, &float_weights, BRUTE_CAP)?, float_weights.total())
    };
    let budget = if exact { 0.0 } else { 1e-9 * scale.powi(m.n() as i32) };
    let passed = report.global_residual <= budget && report.max_local_residual <= budget;
    let payload = json!({
        "exact": report.exact,
        "global_residual": report.global_residual,
        "max_local_residual": report.max_local_residual,
        "lattice_entries": report.lattice_entries,
        "residual_budget": budget,
    });
    let out = Report::new("identity", seed)
        .with_configuration(m)?
        .with_payload(&payload)?
        .with_passed(passed);
    Ok((out, if passed { 0 } else { 2 }))
}

fn optimize_payload(
    m: &LinearMatroid,
    objective: &str,
    method: &str,
    cfg: &OptimizerConfig,
) -> Result<serde_json::Value> {
    let n = m.n();
    let obj = match objective {
        "x2" => Objective::X2Pow.compile(m),
        "x3" => {
            if n < 3 {
                bail!("objective x3 needs n >= 3");
            }
            Objective::X3Pow.compile(m)
        }
        "f" => {
            if n != 4 {
                bail!("objective f is the 4-dimensional box-simplex functional (n = 4)");
            }
            Objective::compile_free(m.ground_size())
        }
        other => bail!("unknown objective {other:?} (expected x2|x3|f)"),
    };
    let result: OptResult = match method {
        "edge" | "fw" => {
            let start = vrep(m).barycenter_floats();
            if method == "edge" {
                edge_ascent(m, &obj, &start, cfg)?
            } else {
                frank_wolfe_max(m, &obj, &start, cfg)?
            }
        }
        "pg" => {
            if objective != "f" {
                bail!("method pg is reserved for the box-simplex objective f");
            }
            let count = m.ground_size();
            let choose = |n: u64, k: u64| -> usize {
                let mut c = 1u64;
                for i in 0..k {
                    c = c * (n - i) / (i + 1);
                }
                c as usize
            };
            if m.bases().len() != choose(count as u64, n as u64) {
                bail!("method pg requires a configuration in general position");
            }
            let start = project_box_simplex(&vec![n as f64 / count as f64; count], n as f64);
            projected_gradient_max(&obj, &start, n as f64, cfg)?
        }
        "vertex" => vertex_oracle_max(m, &obj, VERTEX_ORACLE_CAP)?,
        other => bail!("unknown method {other:?} (expected fw|pg|edge|vertex)"),
    };
    let value_root = result.value.max(0.0).powf(1.0 / n as f64);
    Ok(json!({
        "objective": objective,
        "method": method,
        "value": result.value,
        "value_nth_root": value_root,
        "argmax": result.argmax,
        "boundary": result.boundary.as_ref().map(|b| b.tag),
        "trajectory_len": result.trajectory_len,
        "restarts": cfg.restarts,
        "tolerance": cfg.tolerance,
    }))
}
