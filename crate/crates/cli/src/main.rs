//! `plgtsp`: sample power-law graphs, run the TSP heuristics on them,
//! evaluate the closed-form bounds and build the hardness gadgets.
//!
//! JSON outputs carry a `config` object echoing every parameter of the run.
//! CSV outputs keep the bare `beta,value,bound_id` layout and echo the
//! config on stderr instead.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use plgtsp::bounds::{self, curves_to_csv, figure_csv, CatalogEntry, FIGURES};
use plgtsp::gadgets::{build_tsp_gadget_graph_with, embed_simple};
use plgtsp::matching::max_cardinality_matching;
use plgtsp::montecarlo::trial_stats;
use plgtsp::{
    build_instance, christofides, contract12_tour, emit_curve, evaluate_bound, even_degree_packing,
    exact_optimum, hardness_gap, instance_lower_bound, largest_component, matching_profile, min_cycle_cover,
    ms_report, mst_double_tour, node_cap_from_env, sample_plg, simplify, zeta, BoundId, EmbedMode,
    GadgetDefinition, GraphJson, MetricInstance, MetricKind, NodeId, PowerLawParams, StatsReport, Tour,
    DEFAULT_EXACT_CAP,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "plgtsp", version, about = "TSP experiments on power-law graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a power-law graph and write it as JSON.
    Gen(GenArgs),
    /// Run one algorithm on a graph file.
    Solve(SolveArgs),
    /// Check a tour produced by `solve` against its instance.
    Verify(VerifyArgs),
    /// Emit ratio curves as CSV.
    Curves(CurvesArgs),
    /// Monte-Carlo estimates of m1, A1, A2 and the neighbor totals.
    Stats(StatsArgs),
    /// Build the reduction gadget graph and certify it.
    Gadget(GadgetArgs),
    /// Print the catalog of closed-form bounds.
    Bounds(BoundsArgs),
}

#[derive(Args, Serialize)]
struct GenArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    seed: u64,
    /// Drop self-loops and parallel edges.
    #[arg(long)]
    simplify: bool,
    /// Keep only the largest connected component (implies --simplify).
    #[arg(long)]
    giant: bool,
    /// Accept beta <= 1, outside the range the solvers are meant for.
    #[arg(long)]
    allow_any_beta: bool,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize, serde::Deserialize, PartialEq, Eq, Debug)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Graphic,
    Onetwo,
}

impl From<Kind> for MetricKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Graphic => MetricKind::Graphic,
            Kind::Onetwo => MetricKind::OneTwo,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, Serialize, PartialEq, Eq, Debug)]
#[serde(rename_all = "kebab-case")]
enum Algorithm {
    Mst,
    Christofides,
    MsBound,
    Py12,
    Contract12,
    Exact,
}

impl Algorithm {
    fn name(self) -> &'static str {
        match self {
            Algorithm::Mst => "mst",
            Algorithm::Christofides => "christofides",
            Algorithm::MsBound => "ms-bound",
            Algorithm::Py12 => "py12",
            Algorithm::Contract12 => "contract12",
            Algorithm::Exact => "exact",
        }
    }

    fn required_kind(self) -> Option<Kind> {
        match self {
            Algorithm::Mst | Algorithm::Christofides | Algorithm::MsBound => Some(Kind::Graphic),
            Algorithm::Py12 | Algorithm::Contract12 => Some(Kind::Onetwo),
            Algorithm::Exact => None,
        }
    }
}

#[derive(Args, Serialize)]
struct SolveArgs {
    /// Graph JSON as written by `gen`.
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, value_enum)]
    alg: Algorithm,
    /// Largest instance the exact solver accepts.
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    cap: usize,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Result JSON written by `solve`, or a tour file `{"order": [...], "cost": n}`.
    #[arg(long)]
    result: PathBuf,
    /// Metric kind; required for tour files, which do not record it.
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct CurvesArgs {
    /// Bound id, see `plgtsp bounds`.
    #[arg(long, conflicts_with = "figure", required_unless_present = "figure", requires_all = ["lo", "hi"])]
    bound: Option<String>,
    #[arg(long)]
    lo: Option<f64>,
    #[arg(long)]
    hi: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    /// All curves of a named figure domain.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(FIGURES))]
    figure: Option<String>,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct StatsArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    #[serde(skip)]
    jobs: usize,
    #[arg(long)]
    allow_any_beta: bool,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Simple,
    Packing,
}

#[derive(Args, Serialize)]
struct GadgetArgs {
    /// Copies of the base hybrid instance.
    #[arg(long, default_value_t = 1)]
    v: usize,
    #[arg(long, required_unless_present = "print_definition")]
    beta: Option<f64>,
    #[arg(long, value_enum, default_value = "simple")]
    mode: Mode,
    /// Gadget definition JSON replacing the built-in one.
    #[arg(long)]
    definition: Option<PathBuf>,
    /// Include the node roles and edge list.
    #[arg(long)]
    emit_graph: bool,
    /// Print the built-in gadget definition and exit.
    #[arg(long)]
    #[serde(skip)]
    print_definition: bool,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct BoundsArgs {
    /// Also evaluate every bound at this beta.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    json: bool,
}

#[derive(Serialize)]
struct ExperimentConfig<'a, T: Serialize> {
    command: &'static str,
    version: &'static str,
    node_cap: u64,
    #[serde(flatten)]
    args: &'a T,
}

fn config<T: Serialize>(command: &'static str, args: &T) -> Value {
    serde_json::to_value(ExperimentConfig {
        command,
        version: env!("CARGO_PKG_VERSION"),
        node_cap: node_cap_from_env(),
        args,
    })
    .expect("config serializes")
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_json(out: Option<&Path>, doc: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(doc)?;
    text.push('\n');
    write_output(out, &text)
}

fn read_graph(path: &Path) -> Result<GraphJson> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing graph {}", path.display()))
}

fn check_beta(beta: f64, allow_any: bool) -> Result<()> {
    if !allow_any && !(beta > 1.0) {
        bail!("beta must be > 1 for the solvers, got {beta}; pass --allow-any-beta to sample anyway");
    }
    Ok(())
}

fn cmd_gen(args: &GenArgs) -> Result<ExitCode> {
    check_beta(args.beta, args.allow_any_beta)?;
    let params = PowerLawParams::new(args.alpha, args.beta)?;
    let multi = sample_plg(&params, args.seed, node_cap_from_env())?;
    let mut doc = json!({ "config": config("gen", args) });
    let graph = if args.simplify || args.giant {
        let simple = simplify(&multi);
        if args.giant {
            let (giant, ids) = largest_component(&simple);
            doc["original_ids"] = json!(ids);
            giant.to_json(Some(&params))
        } else {
            simple.to_json(Some(&params))
        }
    } else {
        multi.to_json(Some(&params))
    };
    merge(&mut doc, serde_json::to_value(graph)?);
    // Compact: graph files get large.
    write_output(args.out.as_deref(), &(serde_json::to_string(&doc)? + "\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn merge(doc: &mut Value, extra: Value) {
    if let (Value::Object(d), Value::Object(e)) = (doc, extra) {
        d.extend(e);
    }
}

fn instance_bound(inst: &MetricInstance) -> Result<Value> {
    let cover = match inst.kind() {
        MetricKind::OneTwo if inst.node_count() >= 3 => Some(min_cycle_cover(inst)?),
        _ => None,
    };
    Ok(serde_json::to_value(instance_lower_bound(inst, cover.as_ref())?)?)
}

fn cmd_solve(args: &SolveArgs) -> Result<ExitCode> {
    if let Some(k) = args.alg.required_kind() {
        if k != args.kind {
            let (want, got): (MetricKind, MetricKind) = (k.into(), args.kind.into());
            bail!(
                "{} needs a {} instance, got {}",
                args.alg.name(),
                want.as_str(),
                got.as_str()
            );
        }
    }
    let doc = read_graph(&args.instance)?;
    let inst = build_instance(doc.to_simple()?, args.kind.into())?;
    let lower = instance_bound(&inst)?;
    let lb = lower["value"].as_f64().unwrap_or(0.0);
    let mut details = Value::Null;
    let mut patch = json!({});
    let (tour, cost): (Option<Tour>, f64) = match args.alg {
        Algorithm::Mst => {
            let t = mst_double_tour(&inst)?;
            let c = t.cost as f64;
            (Some(t), c)
        }
        Algorithm::Christofides => {
            let t = christofides(&inst)?;
            let c = t.cost as f64;
            (Some(t), c)
        }
        Algorithm::MsBound => {
            let report = ms_report(inst.base())?;
            let c = report.tour_bound;
            details = serde_json::to_value(&report)?;
            // Reported next to the removable total, not compared with it.
            if let Some(p) = doc.params() {
                if let Ok(t) = bounds::t_beta(p.beta()) {
                    details["t_beta"] = json!(t);
                    details["t_beta_term"] = json!(2.0 / 3.0 * t * p.scale());
                }
            }
            (None, c)
        }
        Algorithm::Py12 => {
            let (state, t) = plgtsp::onetwo::solve_py(&inst)?;
            if let Some(s) = state {
                patch = json!({ "r2": s.r2, "n2": s.n2, "eq1_bound": s.eq1_bound });
                details = json!({ "cycles": s.cycle_count, "cover": min_cycle_cover(&inst)? });
            }
            let c = t.cost as f64;
            (Some(t), c)
        }
        Algorithm::Contract12 => {
            let r = contract12_tour(&inst)?;
            if let Some(s) = &r.residual_state {
                patch = json!({ "r2": s.r2, "n2": s.n2, "eq1_bound": s.eq1_bound });
            }
            details = json!({ "contracted_pairs": r.pairs.len() });
            let c = r.tour.cost as f64;
            (Some(r.tour), c)
        }
        Algorithm::Exact => {
            let t = exact_optimum(&inst, args.cap)?;
            let c = t.cost as f64;
            (Some(t), c)
        }
    };
    let ratio = if lb > 0.0 { Some(cost / lb) } else { None };
    let mut doc = json!({
        "config": config("solve", args),
        "algorithm": args.alg.name(),
        "kind": args.kind,
        "nodes": inst.node_count(),
        "cost": cost,
        "bound_only": tour.is_none(),
        "note": if tour.is_none() { Some("bound, not tour") } else { None },
        "ratio_vs_lower_bound": ratio,
        "lower_bound": lower,
        "tour": tour.map(|t| t.order),
        "details": details,
    });
    merge(&mut doc, patch);
    write_json(args.out.as_deref(), &doc)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode> {
    let text =
        fs::read_to_string(&args.result).with_context(|| format!("reading {}", args.result.display()))?;
    let result: Value = serde_json::from_str(&text)?;
    let kind: Kind = match args.kind {
        Some(k) => k,
        None => serde_json::from_value(result["kind"].clone())
            .context("result records no `kind`; pass --kind")?,
    };
    let order: Vec<NodeId> = match (&result["tour"], &result["order"]) {
        (Value::Null, Value::Null) => bail!("result is bound-only or carries no tour to verify"),
        (Value::Null, t) | (t, _) => serde_json::from_value(t.clone()).context("malformed tour order")?,
    };
    let reported = result["cost"]
        .as_f64()
        .ok_or_else(|| anyhow!("result has no numeric `cost`"))?;
    let inst = build_instance(read_graph(&args.instance)?.to_simple()?, kind.into())?;
    let lower = instance_bound(&inst)?;
    let lb = lower["value"].as_f64().unwrap_or(0.0);
    let (valid, error, recomputed) = match inst.validate(&order) {
        Ok(()) => (true, None, Some(inst.cycle_cost(&order) as f64)),
        Err(e) => (false, Some(e.to_string()), None),
    };
    let cost_matches = recomputed == Some(reported);
    let above_lower = recomputed.is_some_and(|c| c >= lb);
    let ok = valid && cost_matches && above_lower;
    let doc = json!({
        "config": config("verify", args),
        "valid_tour": valid,
        "error": error,
        "reported_cost": reported,
        "recomputed_cost": recomputed,
        "cost_matches": cost_matches,
        "lower_bound": lb,
        "at_least_lower_bound": above_lower,
        "verified": ok,
    });
    write_json(args.out.as_deref(), &doc)?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_curves(args: &CurvesArgs) -> Result<ExitCode> {
    eprintln!("# config: {}", config("curves", args));
    let csv = match (&args.figure, &args.bound) {
        (Some(name), _) => figure_csv(name, args.step)?,
        (None, Some(id)) => {
            let id: BoundId = id.parse()?;
            let (lo, hi) = (args.lo.unwrap(), args.hi.unwrap());
            curves_to_csv(&[emit_curve(id, lo, hi, args.step)?])
        }
        (None, None) => unreachable!("clap requires --bound or --figure"),
    };
    write_output(args.out.as_deref(), &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn closed_form(f: impl FnOnce() -> plgtsp::Result<f64>, scale: f64) -> Option<f64> {
    f().ok().map(|x| x * scale)
}

fn cmd_stats(args: &StatsArgs) -> Result<ExitCode> {
    check_beta(args.beta, args.allow_any_beta)?;
    if args.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let params = PowerLawParams::new(args.alpha, args.beta)?;
    let cap = node_cap_from_env();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.max(1))
        .build()?;
    let trials = pool.install(|| {
        (0..args.trials as u64)
            .into_par_iter()
            .map(|t| trial_stats(&params, args.seed, t, cap))
            .collect::<plgtsp::Result<Vec<_>>>()
    })?;
    let report = StatsReport::from_trials(&trials);
    let scale = params.scale();
    let beta = args.beta;
    let doc = json!({
        "config": config("stats", args),
        "scale": scale,
        "m1": report.m1,
        "a1": report.a1,
        "a2": report.a2,
        "n1_total": report.n1_total,
        "n2_total": report.n2_total,
        "closed_forms": {
            "m1": if beta > 2.0 { zeta(beta - 1.0).ok().map(|z| (2.0 - z) * scale) } else { None },
            "a1": closed_form(|| bounds::lemma5_term(beta), scale),
            "a2": closed_form(|| bounds::lemma6_term(beta), scale),
        },
    });
    write_json(args.out.as_deref(), &doc)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_gadget(args: &GadgetArgs) -> Result<ExitCode> {
    if args.print_definition {
        write_output(
            args.out.as_deref(),
            &(GadgetDefinition::canonical().to_json() + "\n"),
        )?;
        return Ok(ExitCode::SUCCESS);
    }
    let beta = args.beta.expect("clap requires --beta");
    let def = match &args.definition {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            GadgetDefinition::from_json(&text).context("gadget definition rejected")?
        }
        None => GadgetDefinition::canonical(),
    };
    let gadget = build_tsp_gadget_graph_with(&def, args.v)?;
    let n = gadget.graph.node_count();
    let mate = max_cardinality_matching(&gadget.graph);
    let matched = mate.iter().filter(|m| m.is_some()).count() / 2;
    let perfect = 2 * matched == n;
    let profile = matching_profile(&gadget, &gadget.canonical_matching)?;
    let histogram: serde_json::Map<String, Value> = gadget
        .histogram()
        .into_iter()
        .map(|(d, c)| (d.to_string(), json!(c)))
        .collect();
    let mode = match args.mode {
        Mode::Simple => EmbedMode::Simple,
        Mode::Packing => EmbedMode::Packing,
    };
    let gap = hardness_gap(args.v, beta, mode)?;
    let mut ok = perfect;
    let (alpha_min, packing) = match args.mode {
        Mode::Simple => (Some(embed_simple(args.v, beta)?.alpha_min), Value::Null),
        Mode::Packing => match even_degree_packing(args.v, beta, &profile) {
            Ok(plan) => {
                let audit = plan.audit();
                ok &= audit.is_ok();
                let summary = json!({
                    "feasible": true,
                    "alpha_min": plan.alpha_min,
                    "alpha": plan.alpha,
                    "retries": plan.retries,
                    "total_edges": plan.total_edges(),
                    "audit": audit.map(|_| "pass".to_string()).unwrap_or_else(|e| e.to_string()),
                });
                (Some(plan.alpha_min), summary)
            }
            Err(e) => {
                ok = false;
                (None, json!({ "feasible": false, "error": e.to_string() }))
            }
        },
    };
    let mut doc = json!({
        "config": config("gadget", args),
        "nodes": n,
        "edges": gadget.graph.edge_count(),
        "histogram": histogram,
        "perfect_matching": perfect,
        "maximum_matching": matched,
        "matching_profile": profile,
        "alpha_min": alpha_min,
        "packing": packing,
        "gap": gap,
        "certified": ok,
    });
    if args.emit_graph {
        doc["roles"] = json!(gadget.roles);
        doc["graph"] = serde_json::to_value(gadget.graph.to_json(None))?;
    }
    write_json(args.out.as_deref(), &doc)?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn cmd_bounds(args: &BoundsArgs) -> Result<ExitCode> {
    let entries: Vec<CatalogEntry> = bounds::catalog();
    let value = |id: BoundId| args.beta.and_then(|b| evaluate_bound(id, b).ok());
    if args.json {
        let rows: Vec<Value> = entries
            .iter()
            .map(|e| {
                let mut row = serde_json::to_value(e).expect("catalog serializes");
                if args.beta.is_some() {
                    row["value"] = json!(value(e.id));
                }
                row
            })
            .collect();
        write_json(None, &json!({ "config": config("bounds", args), "bounds": rows }))?;
    } else {
        for e in &entries {
            let v = match (args.beta, value(e.id)) {
                (None, _) => String::new(),
                (Some(_), Some(x)) => format!("{x:.6}  "),
                (Some(_), None) => "-         ".into(),
            };
            println!("{:<20} {:<18} {v}{}", e.id.as_str(), e.validity, e.formula);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Curves(a) => cmd_curves(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Gadget(a) => cmd_gadget(a),
        Command::Bounds(a) => cmd_bounds(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
