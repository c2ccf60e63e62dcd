mod dot;
mod formats;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use assur_core::assur::{
    contraction_circuits, edge_deletion_witnesses, minimality_witness, vertex_deletion_witnesses, DEFAULT_TRIALS,
};
use assur_core::counting::{pinned_conditions_violation, ORACLE_MAX_VERTICES};
use assur_core::generate::{
    assur_sweep, certify_within, circuit_sweep, enumerate_assur, enumerate_circuits, replay, verify_certificate,
};
use assur_core::numeric::{generic_rank_randomized, motion_space, motion_support};
use assur_core::pebble::{fundamental_circuit, generic_dof, pinned_dof, pinned_overbraced};
use assur_core::{
    decompose, grubler_dof, is_assur, pebble_rank, pinned_isostatic, recompose, remove_drivers, AssurMethod,
    AssurOptions, AssurScheme, Certificate, Error as CoreError, FloatConfiguration, PinnedGraph,
};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use formats::{lookup, read_config, write_json, GraphFile, LinkageFile};

/// Largest size cross-checked against the brute-force sweeps.
const SWEEP_MAX_VERTICES: usize = 6;

#[derive(Parser)]
#[command(name = "assur", version, about = "Rigidity and Assur graph analysis of planar pinned linkages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grübler mobility count of a linkage, before and after removing drivers.
    Dof {
        linkage: PathBuf,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Test a graph for Laman isostaticity, pinned isostaticity or the Assur property.
    Check {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Assur)]
        mode: Mode,
        /// Assur test to run: all, i (minimality), ii (circuit), iii (vertex deletion), iv (edge deletion).
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        /// Only delete inner vertices in the vertex-deletion test.
        #[arg(long)]
        inner_only: bool,
    },
    /// Split a pinned isostatic graph into Assur components.
    Decompose {
        graph: PathBuf,
        /// Write the cover relation as a Graphviz digraph.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the scheme as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Rebuild a graph from a scheme written by `decompose --json`.
    Recompose {
        scheme: PathBuf,
        /// Write the graph here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// First-order motions of a pinned graph, optionally with one edge removed.
    #[command(group(ArgGroup::new("placement").args(["seed", "config", "positions"])))]
    Motion {
        graph: PathBuf,
        /// Edge to delete first, as two vertex ids separated by a comma.
        #[arg(long, value_name = "U,W")]
        remove_edge: Option<String>,
        /// Seed for generic random placements (the default).
        #[arg(long)]
        seed: Option<u64>,
        /// JSON object mapping every vertex id to a position [x, y].
        #[arg(long)]
        config: Option<PathBuf>,
        /// Use the `pos` entries of the graph file.
        #[arg(long)]
        positions: bool,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
    },
    /// Enumerate rigidity circuits or Assur graphs up to isomorphism.
    #[command(group(ArgGroup::new("family").args(["circuits", "assur"]).required(true)))]
    Generate {
        #[arg(long)]
        circuits: bool,
        #[arg(long)]
        assur: bool,
        #[arg(long)]
        max_vertices: usize,
        /// Directory for the catalog file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Compare sizes up to 6 with a brute-force sweep.
        #[arg(long)]
        cross_check: bool,
    },
    /// Find a construction sequence for an Assur graph.
    Certify {
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Search time limit in seconds.
        #[arg(long, default_value_t = 10)]
        budget: u64,
    },
    /// Replay a certificate and compare with its claimed canonical code.
    Verify { certificate: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Laman,
    Pinned,
    Assur,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    All,
    I,
    Ii,
    Iii,
    Iv,
}

impl Method {
    fn methods(self) -> Vec<AssurMethod> {
        match self {
            Method::All => AssurMethod::ALL.to_vec(),
            Method::I => vec![AssurMethod::Minimality],
            Method::Ii => vec![AssurMethod::Circuit],
            Method::Iii => vec![AssurMethod::VertexDeletion],
            Method::Iv => vec![AssurMethod::EdgeDeletion],
        }
    }
}

enum Outcome {
    Holds,
    Fails,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Holds) => ExitCode::SUCCESS,
        Ok(Outcome::Fails) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Dof { linkage, json } => cmd_dof(&linkage, json),
        Command::Check { graph, mode, method, seed, trials, inner_only } => {
            let g = load_graph(&graph)?;
            let opts = AssurOptions {
                methods: method.methods(),
                seed,
                trials,
                delete_pins: !inner_only,
            };
            cmd_check(&g, mode, &opts)
        }
        Command::Decompose { graph, dot, json } => cmd_decompose(&load_graph(&graph)?, dot.as_deref(), json.as_deref()),
        Command::Recompose { scheme, out } => cmd_recompose(&scheme, out.as_deref()),
        Command::Motion { graph, remove_edge, seed, config, positions, trials } => {
            let file = GraphFile::read(&graph)?;
            let placement = match (config, positions) {
                (Some(path), _) => Some(read_config(&path)?),
                (None, true) => Some(file.positions()),
                (None, false) => None,
            };
            cmd_motion(file.to_graph()?, remove_edge.as_deref(), seed, placement, trials)
        }
        Command::Generate { circuits, max_vertices, out, cross_check, .. } => {
            cmd_generate(circuits, max_vertices, out.as_deref(), cross_check)
        }
        Command::Certify { graph, out, budget } => cmd_certify(&load_graph(&graph)?, out.as_deref(), budget),
        Command::Verify { certificate } => cmd_verify(&certificate),
    }
}

fn load_graph(path: &Path) -> Result<PinnedGraph> {
    GraphFile::read(path)?.to_graph()
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn edge_labels(g: &PinnedGraph, edges: &[usize]) -> Vec<[String; 2]> {
    edges
        .iter()
        .map(|&i| {
            let (a, b) = g.edge(i).ends();
            [g.label(a).to_string(), g.label(b).to_string()]
        })
        .collect()
}

fn vertex_labels(g: &PinnedGraph, vs: &[usize]) -> Vec<String> {
    vs.iter().map(|&v| g.label(v).to_string()).collect()
}

fn cmd_dof(path: &Path, as_json: bool) -> Result<Outcome> {
    let schema = LinkageFile::read(path)?.to_schema()?;
    let before = grubler_dof(&schema)?;
    let after = grubler_dof(&remove_drivers(&schema)?)?;
    if as_json {
        print_json(&json!({
            "mobility": before.mobility,
            "links": before.links,
            "joint_sum": before.joint_sum,
            "overbraced": before.overbraced,
            "drivers": schema.driver_count(),
            "mobility_without_drivers": after.mobility,
            "links_without_drivers": after.links,
            "joint_sum_without_drivers": after.joint_sum,
        }));
        return Ok(Outcome::Holds);
    }
    println!("F={}", before.mobility);
    println!(
        "  F = 3({} - 1) - 2*{} with {} links, joint sum {}",
        before.links, before.joint_sum, before.links, before.joint_sum
    );
    match before.overbraced {
        Some(true) => println!("  warning: some sub-collection of links counts negative; F is only a lower bound"),
        Some(false) => {}
        None => println!("  note: too many links to scan for overbraced sub-collections"),
    }
    println!(
        "after driver removal F={} ({} drivers removed, {} links, joint sum {})",
        after.mobility,
        schema.driver_count(),
        after.links,
        after.joint_sum
    );
    Ok(Outcome::Holds)
}

fn cmd_check(g: &PinnedGraph, mode: Mode, opts: &AssurOptions) -> Result<Outcome> {
    let (pass, mut report) = match mode {
        Mode::Laman => check_laman(g),
        Mode::Pinned => check_pinned(g)?,
        Mode::Assur => check_assur(g, opts)?,
    };
    report["seed"] = json!(opts.seed);
    report["trials"] = json!(opts.trials);
    report["pass"] = json!(pass);
    print_json(&report);
    Ok(if pass { Outcome::Holds } else { Outcome::Fails })
}

/// Pins are treated as ordinary vertices.
fn check_laman(g: &PinnedGraph) -> (bool, Value) {
    let m = g.to_multigraph();
    let n = m.vertex_count();
    let report = pebble_rank(&m, None);
    let mut out = json!({"mode": "laman", "vertices": n, "edges": m.edge_count(), "rank": report.rank});
    if let Some(&e) = report.rejected.first() {
        let circuit = fundamental_circuit(&m, &report, e).expect("rejected edge");
        out["witness"] = json!({"kind": "dependent", "circuit": edge_labels(g, &circuit)});
        return (false, out);
    }
    let dof = generic_dof(&m);
    if dof > 0 {
        out["witness"] = json!({"kind": "flexible", "dof": dof});
        return (false, out);
    }
    (true, out)
}

fn pinned_witness(g: &PinnedGraph) -> Result<Value> {
    let mut w = json!({"pinned_dof": pinned_dof(g)});
    let overbraced: Vec<Value> = pinned_overbraced(g)
        .into_iter()
        .map(|(e, c)| json!({"edge": edge_labels(g, &[e])[0], "circuit": edge_labels(g, &c)}))
        .collect();
    if !overbraced.is_empty() {
        w["overbraced"] = json!(overbraced);
    }
    if g.vertex_count() <= ORACLE_MAX_VERTICES {
        if let Some(v) = pinned_conditions_violation(g)? {
            w["violation"] = json!({
                "inner": vertex_labels(g, &v.inner),
                "pins": vertex_labels(g, &v.pins),
                "edges": v.edges,
                "bound": v.bound,
            });
        }
    }
    Ok(w)
}

fn check_pinned(g: &PinnedGraph) -> Result<(bool, Value)> {
    let g = g.without_isolated_pins();
    let pass = g.pin_count() >= 2 && pinned_isostatic(&g)?;
    let mut out = json!({"mode": "pinned", "inner": g.inner_count(), "pins": g.pin_count(), "edges": g.edge_count()});
    if !pass {
        out["witness"] = pinned_witness(&g)?;
    }
    Ok((pass, out))
}

fn check_assur(g: &PinnedGraph, opts: &AssurOptions) -> Result<(bool, Value)> {
    let g = g.without_isolated_pins();
    if g.pin_count() < 2 || !pinned_isostatic(&g)? {
        let out = json!({"mode": "assur", "reason": "not pinned isostatic", "witness": pinned_witness(&g)?});
        return Ok((false, out));
    }
    let verdict = is_assur(&g, opts)?;
    let mut out = json!({"mode": "assur", "verdict": verdict});
    let pass = opts.methods.iter().all(|&m| verdict.get(m) == Some(true));
    if verdict.disagreement {
        log::warn!("the selected tests disagree; see the verdict");
    }
    if pass {
        return Ok((true, out));
    }
    let mut w = json!({});
    let circuits = contraction_circuits(&g);
    if circuits.len() > 1 {
        w["circuits"] = json!(circuits.iter().map(|c| edge_labels(&g, c)).collect::<Vec<_>>());
    }
    for &m in &opts.methods {
        match m {
            AssurMethod::Minimality => {
                if let Some(inner) = minimality_witness(&g)? {
                    w["isostatic_subgraph_inner"] = json!(vertex_labels(&g, &inner));
                }
            }
            AssurMethod::Circuit => {}
            AssurMethod::VertexDeletion => {
                let found = vertex_deletion_witnesses(&g, opts.seed, opts.trials, opts.delete_pins)?;
                w["vertex_deletion"] = json!(found
                    .iter()
                    .map(|(v, fixed)| json!({"deleted": g.label(*v), "fixed": vertex_labels(&g, fixed)}))
                    .collect::<Vec<_>>());
            }
            AssurMethod::EdgeDeletion => {
                let found = edge_deletion_witnesses(&g, opts.seed, opts.trials)?;
                w["edge_deletion"] = json!(found
                    .iter()
                    .map(|(e, fixed)| json!({"deleted": edge_labels(&g, &[*e])[0], "fixed": vertex_labels(&g, fixed)}))
                    .collect::<Vec<_>>());
            }
        }
    }
    out["witness"] = w;
    Ok((false, out))
}

fn cmd_decompose(g: &PinnedGraph, dot_out: Option<&Path>, json_out: Option<&Path>) -> Result<Outcome> {
    let g = g.without_isolated_pins();
    if g.pin_count() < 2 || !pinned_isostatic(&g)? {
        println!("not pinned isostatic");
        print_json(&pinned_witness(&g)?);
        return Ok(Outcome::Fails);
    }
    let scheme = decompose(&g)?;
    println!("{} components on {} levels", scheme.components.len(), scheme.levels());
    for (i, c) in scheme.components.iter().enumerate() {
        println!(
            "C{i} level {}: inner [{}] pins [{}]",
            c.level,
            c.inner.join(", "),
            c.pins.join(", ")
        );
    }
    for &(a, b) in &scheme.covers {
        println!("C{a} < C{b}");
    }
    if let Some(path) = dot_out {
        fs::write(path, dot::scheme_to_dot(&scheme)).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = json_out {
        write_json(path, &scheme)?;
    }
    Ok(Outcome::Holds)
}

fn cmd_recompose(path: &Path, out: Option<&Path>) -> Result<Outcome> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let scheme: AssurScheme =
        serde_json::from_str(&text).with_context(|| format!("parsing scheme {}", path.display()))?;
    let g = recompose(&scheme)?;
    let file = GraphFile::from_graph(&g);
    match out {
        Some(p) => write_json(p, &file)?,
        None => println!("{}", serde_json::to_string_pretty(&file)?),
    }
    Ok(Outcome::Holds)
}

fn parse_edge(g: &PinnedGraph, spec: &str) -> Result<usize> {
    let Some((a, b)) = spec.split_once(',') else {
        bail!("expected an edge as U,W, got {spec:?}");
    };
    let (u, w) = (lookup(g, a.trim())?, lookup(g, b.trim())?);
    g.find_edge(u, w).with_context(|| format!("no edge between {a} and {b}"))
}

fn cmd_motion(
    mut g: PinnedGraph,
    remove: Option<&str>,
    seed: Option<u64>,
    placement: Option<BTreeMap<String, [f64; 2]>>,
    trials: usize,
) -> Result<Outcome> {
    let mut report = json!({});
    if let Some(spec) = remove {
        let e = parse_edge(&g, spec)?;
        report["removed_edge"] = json!(edge_labels(&g, &[e])[0]);
        g = g.without_edge(e);
    }
    let inner = g.inner();
    let moving: Vec<bool>;
    if let Some(positions) = placement {
        let points = (0..g.vertex_count())
            .map(|v| {
                positions
                    .get(g.label(v))
                    .copied()
                    .with_context(|| format!("no position for vertex {:?}", g.label(v)))
            })
            .collect::<Result<Vec<_>>>()?;
        let c = FloatConfiguration::new(points);
        let basis = motion_space(&g, &c)?;
        let scale = basis
            .vectors
            .iter()
            .flatten()
            .flat_map(|p| p.iter().map(|x| x.abs()))
            .fold(0.0f64, f64::max);
        let tol = 1e-9 * scale.max(1.0);
        moving = (0..g.vertex_count())
            .map(|v| basis.vectors.iter().any(|vel| vel[v].iter().any(|x| x.abs() > tol)))
            .collect();
        let vectors: Vec<Value> = basis
            .vectors
            .iter()
            .map(|vel| {
                inner
                    .iter()
                    .map(|&v| (g.label(v).to_string(), json!(vel[v])))
                    .collect::<serde_json::Map<_, _>>()
                    .into()
            })
            .collect();
        report["placement"] = json!("given");
        report["dimension"] = json!(basis.dimension());
        report["velocities"] = json!(vectors);
        report["ill_conditioned"] = json!(basis.ill_conditioned);
    } else {
        let seed = seed.unwrap_or(0);
        let rank = generic_rank_randomized(&g, seed, trials);
        moving = motion_support(&g, seed, trials);
        report["placement"] = json!("random");
        report["seed"] = json!(seed);
        report["trials"] = json!(trials);
        report["dimension"] = json!(2 * inner.len() - rank);
    }
    let fixed: Vec<usize> = inner.iter().copied().filter(|&v| !moving[v]).collect();
    let moved: Vec<usize> = inner.iter().copied().filter(|&v| moving[v]).collect();
    report["moving"] = json!(vertex_labels(&g, &moved));
    report["fixed"] = json!(vertex_labels(&g, &fixed));
    if moved.is_empty() {
        report["summary"] = json!("no motion");
    }
    print_json(&report);
    Ok(if fixed.is_empty() && !moved.is_empty() { Outcome::Holds } else { Outcome::Fails })
}

fn cmd_generate(circuits: bool, n_max: usize, out: Option<&Path>, cross_check: bool) -> Result<Outcome> {
    let mut entries = Vec::new();
    let mut counts = Vec::new();
    let mut agrees = true;
    if circuits {
        let cat = enumerate_circuits(n_max)?;
        for n in 4..=n_max {
            let found = cat.by_size.get(&n);
            counts.push((n, cat.count(n)));
            if cross_check && n <= SWEEP_MAX_VERTICES {
                let sweep: Vec<_> = circuit_sweep(n)?.into_keys().collect();
                let gen: Vec<_> = found.map(|m| m.keys().cloned().collect()).unwrap_or_default();
                agrees &= sweep == gen;
            }
            for (code, m) in found.into_iter().flatten() {
                entries.push(json!({"vertices": n, "code": code, "graph": GraphFile::from_multigraph(m)}));
            }
        }
    } else {
        let cat = enumerate_assur(n_max)?;
        for n in 3..=n_max {
            let found = cat.by_size.get(&n);
            counts.push((n, cat.count(n)));
            if cross_check && n <= SWEEP_MAX_VERTICES {
                let sweep: Vec<_> = assur_sweep(n)?.into_keys().collect();
                let gen: Vec<_> = found.map(|m| m.keys().cloned().collect()).unwrap_or_default();
                agrees &= sweep == gen;
            }
            for (code, g) in found.into_iter().flatten() {
                entries.push(json!({"vertices": n, "code": code, "graph": GraphFile::from_graph(g)}));
            }
        }
    }
    println!("vertices  classes");
    for (n, c) in &counts {
        println!("{n:>8}  {c:>7}");
    }
    println!("   total  {:>7}", entries.len());
    if cross_check {
        println!(
            "brute-force sweep up to {} vertices: {}",
            SWEEP_MAX_VERTICES.min(n_max),
            if agrees { "agrees" } else { "DIFFERS" }
        );
    }
    if let Some(dir) = out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let name = if circuits { "circuits.json" } else { "assur.json" };
        write_json(&dir.join(name), &json!({"max_vertices": n_max, "classes": entries}))?;
    }
    Ok(if agrees { Outcome::Holds } else { Outcome::Fails })
}

fn cmd_certify(g: &PinnedGraph, out: Option<&Path>, budget: u64) -> Result<Outcome> {
    let cert = match certify_within(g, Duration::from_secs(budget)) {
        Ok(c) => c,
        Err(e @ (CoreError::NotAssur | CoreError::NotPinnedIsostatic | CoreError::SearchExhausted)) => {
            println!("no certificate: {e}");
            return Ok(Outcome::Fails);
        }
        Err(e) => return Err(e.into()),
    };
    match out {
        Some(p) => write_json(p, &cert)?,
        None => println!("{}", serde_json::to_string_pretty(&cert)?),
    }
    Ok(Outcome::Holds)
}

fn cmd_verify(path: &Path) -> Result<Outcome> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let cert: Certificate =
        serde_json::from_str(&text).with_context(|| format!("parsing certificate {}", path.display()))?;
    if verify_certificate(&cert) {
        println!("valid: replay gives {}", cert.claimed);
        return Ok(Outcome::Holds);
    }
    match replay(&cert).and_then(|r| r.code()) {
        Ok(code) => println!("invalid: replay gives {code}, certificate claims {}", cert.claimed),
        Err(e) => println!("invalid: {e}"),
    }
    Ok(Outcome::Fails)
}
