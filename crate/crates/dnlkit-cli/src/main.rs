//! dnlkit command-line harness: load instances, run the library algorithms
//! with a single global seed, and emit JSON reports plus CSV sweep tables.
//!
//! Exit codes: 0 success, 2 validation failure, 3 hypothesis violation,
//! 64 usage error.

mod sweep;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use dnlkit::bits::VSet;
use dnlkit::chromatic::{
    self, ChromaticError, SimpleGraph,
};
use dnlkit::cluster::{self, ClusterError};
use dnlkit::core::{parse_frac, Frac, SetSystem, TriHypergraph, TriTournament};
use dnlkit::gen::{self, GenError};
use dnlkit::lp;
use dnlkit::metric::MetricError;
use dnlkit::nets::{self, NetRequest, NetsError};
use dnlkit::tournament::{self, TournamentError, TransitiveFamily, VoterProfile};
use dnlkit::vc;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug)]
pub enum AppError {
    Validation(String),
    Hypothesis(String),
    Usage(String),
}

impl AppError {
    fn code(&self) -> i32 {
        match self {
            AppError::Validation(_) => EXIT_VALIDATION,
            AppError::Hypothesis(_) => EXIT_HYPOTHESIS,
            AppError::Usage(_) => EXIT_USAGE,
        }
    }
    fn message(&self) -> &str {
        match self {
            AppError::Validation(m) | AppError::Hypothesis(m) | AppError::Usage(m) => m,
        }
    }
}

impl From<ChromaticError> for AppError {
    fn from(e: ChromaticError) -> Self {
        match e {
            ChromaticError::Hypothesis(m) => AppError::Hypothesis(m),
            ChromaticError::Verification { .. } => AppError::Validation(e.to_string()),
            ChromaticError::Cluster(c) => c.into(),
            ChromaticError::Nets(n) => n.into(),
            other => AppError::Usage(other.to_string()),
        }
    }
}

impl From<ClusterError> for AppError {
    fn from(e: ClusterError) -> Self {
        match e {
            ClusterError::Validation { .. } => AppError::Validation(e.to_string()),
            ClusterError::RedHypothesis { .. } => AppError::Hypothesis(e.to_string()),
            other => AppError::Usage(other.to_string()),
        }
    }
}

impl From<NetsError> for AppError {
    fn from(e: NetsError) -> Self {
        match e {
            NetsError::ZeroDisjointness => AppError::Hypothesis(e.to_string()),
            NetsError::RetriesExhausted(_) => AppError::Validation(e.to_string()),
            other => AppError::Usage(other.to_string()),
        }
    }
}

impl From<TournamentError> for AppError {
    fn from(e: TournamentError) -> Self {
        match e {
            TournamentError::Coverage(m) => AppError::Hypothesis(m),
            other => AppError::Usage(other.to_string()),
        }
    }
}

impl From<MetricError> for AppError {
    fn from(e: MetricError) -> Self {
        match e {
            MetricError::GapFailure { .. } => AppError::Validation(e.to_string()),
            other => AppError::Usage(other.to_string()),
        }
    }
}

impl From<GenError> for AppError {
    fn from(e: GenError) -> Self {
        match e {
            GenError::Verification(m) => AppError::Validation(m),
            other => AppError::Usage(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "dnlkit", version, about = "dense-neighborhood toolkit harness")]
struct Cli {
    /// Single global seed; every module derives its own labeled stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Directory for report.json, manifest.json and generated artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// VC-dimension of a tri-hypergraph (or of the refined-differences
    /// hypergraph of a set system, with --eps).
    Vcdim {
        #[arg(long)]
        input: PathBuf,
        /// disjointness parameter when the input is a set system
        #[arg(long, default_value = "1/2")]
        eps: String,
    },
    /// Sample a delta-net of a tri-hypergraph and validate it.
    Net {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "1/2")]
        delta: String,
        /// target failure probability
        #[arg(long, default_value_t = 0.1)]
        p: f64,
        /// VC-dimension to assume; computed exactly when omitted
        #[arg(long)]
        dimension: Option<usize>,
    },
    /// Compute and validate an (eps, eta)-clustering; with --regularity,
    /// a regularity partition of a set system instead.
    Cluster {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "1/5")]
        eps: String,
        #[arg(long, default_value = "1/5")]
        eta: String,
        /// Hamming closeness threshold as a fraction of the dimension
        /// (defaults to 1/2)
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long, default_value_t = false)]
        regularity: bool,
    },
    /// Color a dense triangle-free / K_t-free graph.
    Color {
        #[arg(long)]
        input: PathBuf,
        /// dnl (min-degree triangle-free), cluster (regular triangle-free),
        /// or kt (regular K_t-free)
        #[arg(long, default_value = "dnl")]
        algo: String,
        #[arg(long, default_value = "1/20")]
        eps: String,
        #[arg(long, default_value_t = 3)]
        t: usize,
        /// skip hypothesis checks (validators still run)
        #[arg(long, default_value_t = false)]
        force: bool,
    },
    /// K_t-free homomorphic quotient of a dense K_t-free graph.
    Quotient {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        t: usize,
        #[arg(long, default_value = "1/20")]
        eps: String,
        #[arg(long, default_value_t = false)]
        force: bool,
    },
    /// Dominating sets: tri-tournaments by sampling, tournaments through
    /// fractional acyclic colorings, voter profiles through majority digraphs.
    Dominate {
        #[arg(long)]
        input: PathBuf,
        /// tournament | fractional | majority
        #[arg(long, default_value = "tournament")]
        mode: String,
        /// majority margin (mode = majority)
        #[arg(long, default_value = "1/10")]
        eps: String,
    },
    /// Generate an instance from one of the named or random families.
    Generate {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        l: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        bigk: u32,
        #[arg(long, default_value_t = 4)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 12)]
        x: usize,
        #[arg(long, default_value_t = 60)]
        y: usize,
        #[arg(long, default_value = "1/20")]
        eps: String,
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        #[arg(long, default_value_t = 40)]
        scale: usize,
        #[arg(long, default_value_t = 0)]
        noise: usize,
        #[arg(long, default_value_t = 16)]
        dim: usize,
        #[arg(long, default_value_t = 3)]
        groups: usize,
        #[arg(long, default_value_t = 8)]
        per_group: usize,
    },
    /// Structural checks on a graph instance.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = false)]
        triangle_free: bool,
        /// require K_t-freeness for this t
        #[arg(long)]
        kt: Option<usize>,
        #[arg(long, default_value_t = false)]
        regular: bool,
        /// exact chromatic number to require (small graphs only)
        #[arg(long)]
        chi: Option<usize>,
        /// expected SHA-256 of the DIMACS form
        #[arg(long)]
        digest: Option<String>,
    },
    /// Run a batch suite; one CSV row per criterion.
    Sweep {
        #[arg(long, default_value = "acceptance")]
        suite: String,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version by "erroring" with a display kind
            use clap::error::ErrorKind::*;
            if matches!(e.kind(), DisplayHelp | DisplayVersion) {
                print!("{e}");
                std::process::exit(EXIT_OK);
            }
            eprintln!("{e}");
            std::process::exit(EXIT_USAGE);
        }
    };
    let seed = cli.seed;
    let out = cli.out.clone();
    match dispatch(cli) {
        Ok((name, report)) => {
            let report = finish_report(name, seed, report);
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            if let Some(dir) = out {
                if let Err(e) = write_outputs(&dir, name, seed, &report) {
                    eprintln!("error: {}", e.message());
                    std::process::exit(e.code());
                }
            }
            std::process::exit(EXIT_OK);
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.code());
        }
    }
}

fn finish_report(subcommand: &str, seed: u64, mut report: Value) -> Value {
    let obj = report.as_object_mut().expect("reports are objects");
    obj.insert("subcommand".into(), json!(subcommand));
    obj.insert("seed".into(), json!(seed));
    obj.insert("library_version".into(), json!(env!("CARGO_PKG_VERSION")));
    report
}

fn write_outputs(dir: &Path, subcommand: &str, seed: u64, report: &Value) -> Result<(), AppError> {
    fs::create_dir_all(dir).map_err(|e| AppError::Usage(format!("cannot create out dir: {e}")))?;
    let report_bytes = serde_json::to_vec_pretty(report).unwrap();
    let report_path = dir.join("report.json");
    fs::write(&report_path, &report_bytes)
        .map_err(|e| AppError::Usage(format!("cannot write report: {e}")))?;
    let manifest = json!({
        "subcommand": subcommand,
        "seed": seed,
        "library_version": env!("CARGO_PKG_VERSION"),
        "inputs": report.get("inputs").cloned().unwrap_or(json!([])),
        "params": report.get("params").cloned().unwrap_or(json!({})),
        "artifacts": [artifact_entry(&report_path, &report_bytes)],
        "outcome": "success",
    });
    fs::write(dir.join("manifest.json"), serde_json::to_vec_pretty(&manifest).unwrap())
        .map_err(|e| AppError::Usage(format!("cannot write manifest: {e}")))?;
    Ok(())
}

fn artifact_entry(path: &Path, bytes: &[u8]) -> Value {
    json!({ "path": path.display().to_string(), "sha256": sha256_hex(bytes) })
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn read_input(path: &Path) -> Result<(String, Value), AppError> {
    let text = fs::read_to_string(path)
        .map_err(|e| AppError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let digest = sha256_hex(text.as_bytes());
    Ok((text, json!([{ "path": path.display().to_string(), "sha256": digest }])))
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, AppError> {
    serde_json::from_str(text).map_err(|e| AppError::Usage(format!("cannot parse {what}: {e}")))
}

fn load_graph(path: &Path) -> Result<(SimpleGraph, Value), AppError> {
    let (text, inputs) = read_input(path)?;
    let g = if path.extension().map(|e| e == "dimacs" || e == "col").unwrap_or(false) {
        SimpleGraph::from_dimacs(&text).map_err(|e| AppError::Usage(e.to_string()))?
    } else {
        parse_json(&text, "graph")?
    };
    Ok((g, inputs))
}

fn frac_arg(s: &str, name: &str) -> Result<Frac, AppError> {
    parse_frac(s).map_err(|_| AppError::Usage(format!("cannot parse --{name} {s:?} as a fraction")))
}

fn frac_f64(f: Frac) -> f64 {
    f.to_f64().expect("fraction fits in f64")
}

fn vset_vec(s: &VSet) -> Vec<usize> {
    s.iter().collect()
}

fn dispatch(cli: Cli) -> Result<(&'static str, Value), AppError> {
    let seed = cli.seed;
    match cli.cmd {
        Cmd::Vcdim { input, eps } => cmd_vcdim(&input, &eps),
        Cmd::Net { input, delta, p, dimension } => cmd_net(&input, &delta, p, dimension, seed),
        Cmd::Cluster { input, eps, eta, tau, regularity } => {
            cmd_cluster(&input, &eps, &eta, tau, regularity, seed)
        }
        Cmd::Color { input, algo, eps, t, force } => cmd_color(&input, &algo, &eps, t, force, seed),
        Cmd::Quotient { input, t, eps, force } => cmd_quotient(&input, t, &eps, force, seed),
        Cmd::Dominate { input, mode, eps } => cmd_dominate(&input, &mode, &eps, seed),
        Cmd::Generate {
            family, n, m, l, k, bigk, t, d, x, y, eps, p, scale, noise, dim, groups, per_group,
        } => cmd_generate(GenParams {
            family, n, m, l, k, bigk, t, d, x, y, eps, p, scale, noise, dim, groups, per_group,
            seed,
            out: cli.out.clone(),
        }),
        Cmd::Verify { input, triangle_free, kt, regular, chi, digest } => {
            cmd_verify(&input, triangle_free, kt, regular, chi, digest)
        }
        Cmd::Sweep { suite } => sweep::cmd_sweep(&suite, cli.out.as_deref(), seed),
    }
}

fn cmd_vcdim(input: &Path, eps: &str) -> Result<(&'static str, Value), AppError> {
    let (text, inputs) = read_input(input)?;
    // a tri-hypergraph has an "edges" field, a set system has "sets"
    let probe: Value = parse_json(&text, "input")?;
    let (h, kind) = if probe.get("sets").is_some() {
        let f: SetSystem = parse_json(&text, "set system")?;
        let eps = frac_arg(eps, "eps")?;
        (cluster::refined_differences_sets(&f, eps), "set-system")
    } else {
        (parse_json::<TriHypergraph>(&text, "tri-hypergraph")?, "tri-hypergraph")
    };
    let report = vc::vc_dimension(&h, h.ground_size);
    Ok((
        "vcdim",
        json!({
            "inputs": inputs,
            "params": { "kind": kind, "eps": eps },
            "dimension": report.dimension,
            "exact": report.exact,
            "witness": report.witness.map(|w| w.shattered_set),
        }),
    ))
}

fn cmd_net(
    input: &Path,
    delta: &str,
    p: f64,
    dimension: Option<usize>,
    seed: u64,
) -> Result<(&'static str, Value), AppError> {
    let (text, inputs) = read_input(input)?;
    let h: TriHypergraph = parse_json(&text, "tri-hypergraph")?;
    if !(0.0 < p && p < 1.0) {
        return Err(AppError::Usage("need 0 < p < 1".into()));
    }
    let delta = frac_arg(delta, "delta")?;
    let dim = match dimension {
        Some(d) if d >= 1 => d,
        Some(_) => return Err(AppError::Usage("dimension must be at least 1".into())),
        None => vc::vc_dimension(&h, h.ground_size).dimension.max(1) as usize,
    };
    let req = NetRequest { delta, failure_prob: p, dimension: dim, seed };
    let report = nets::sample_delta_net(&h, &req);
    if !report.valid {
        return Err(AppError::Validation(format!(
            "sampled net misses delta-dense edge {}",
            report.violating_edge.unwrap()
        )));
    }
    Ok((
        "net",
        json!({
            "inputs": inputs,
            "params": { "delta": delta.to_string(), "p": p, "dimension": dim },
            "sample_size": report.sample.len(),
            "net": vset_vec(&report.deduplicated),
            "valid": report.valid,
        }),
    ))
}

fn cmd_cluster(
    input: &Path,
    eps: &str,
    eta: &str,
    tau: Option<f64>,
    regularity: bool,
    seed: u64,
) -> Result<(&'static str, Value), AppError> {
    let (text, inputs) = read_input(input)?;
    let probe: Value = parse_json(&text, "input")?;
    let eps_frac = frac_arg(eps, "eps")?;
    let eta_frac = frac_arg(eta, "eta")?;
    let params = json!({ "eps": eps, "eta": eta, "tau": tau, "regularity": regularity });

    if regularity {
        let f: SetSystem = parse_json(&text, "set system")?;
        let part = cluster::regularity_partition(&f, eps_frac, eta_frac, seed)?;
        return Ok((
            "cluster",
            json!({
                "inputs": inputs,
                "params": params,
                "parts": part.parts.len(),
                "bad_fraction": part.bad_fraction.to_string(),
                "eta": part.eta.to_string(),
                "non_homogeneous_pairs": part.non_homogeneous_pairs.len(),
            }),
        ));
    }

    let (clustering, validation, kind) = if probe.get("geometry").is_some() {
        let p: dnlkit::metric::PointCloud = parse_json(&text, "point cloud")?;
        match p.geometry {
            dnlkit::metric::Geometry::Hamming => {
                let c = tau.unwrap_or(0.5);
                let e = frac_f64(eps_frac);
                let (cl, val) = cluster::hamming_clustering(&p, c, e, eta_frac, seed)?;
                (cl, val, "hamming")
            }
            dnlkit::metric::Geometry::Euclidean => {
                let (cl, val) = cluster::euclidean_clustering(&p, frac_f64(eps_frac), eta_frac, seed)?;
                (cl, val, "euclidean")
            }
            dnlkit::metric::Geometry::Sphere => {
                return Err(AppError::Usage(
                    "sphere clouds are not clustered directly; embed to hamming first".into(),
                ))
            }
        }
    } else {
        let f: SetSystem = parse_json(&text, "set system")?;
        let (cl, val) = cluster::set_system_clustering(&f, eps_frac, eta_frac, seed)?;
        (cl, val, "set-system")
    };
    Ok((
        "cluster",
        json!({
            "inputs": inputs,
            "params": params,
            "kind": kind,
            "parts": clustering.parts.len(),
            "net_size": clustering.net.len(),
            "checked_pairs": validation.checked_pairs,
            "violations": validation.violations.len(),
            "sampled_validation": validation.sampled,
        }),
    ))
}

fn cmd_color(
    input: &Path,
    algo: &str,
    eps: &str,
    t: usize,
    force: bool,
    seed: u64,
) -> Result<(&'static str, Value), AppError> {
    let (g, inputs) = load_graph(input)?;
    let eps = frac_arg(eps, "eps")?;
    let result = match algo {
        "dnl" => chromatic::dnl_color_triangle_free(&g, eps, seed, force)?,
        "cluster" => chromatic::cluster_color_regular_triangle_free(&g, eps, seed, force)?,
        "kt" => chromatic::cluster_color_regular_kt_free(&g, t, eps, seed, None, force)?,
        other => return Err(AppError::Usage(format!("unknown --algo {other}"))),
    };
    if !result.proper {
        return Err(AppError::Validation("coloring is not proper".into()));
    }
    Ok((
        "color",
        json!({
            "inputs": inputs,
            "params": { "algo": algo, "eps": eps.to_string(), "t": t, "force": force },
            "n": g.ground_size(),
            "classes": result.classes_count,
            "proper": result.proper,
            "colors": result.colors,
        }),
    ))
}

fn cmd_quotient(
    input: &Path,
    t: usize,
    eps: &str,
    force: bool,
    seed: u64,
) -> Result<(&'static str, Value), AppError> {
    let (g, inputs) = load_graph(input)?;
    let eps = frac_arg(eps, "eps")?;
    if t < 3 {
        return Err(AppError::Usage("t must be at least 3".into()));
    }
    let q = chromatic::homomorphism_quotient(&g, t, eps, seed, force)?;
    Ok((
        "quotient",
        json!({
            "inputs": inputs,
            "params": { "t": t, "eps": eps.to_string(), "force": force },
            "n": g.ground_size(),
            "parts": q.parts.len(),
            "quotient_edges": q.quotient.edge_count(),
            "quotient_kt_free": true,
        }),
    ))
}

fn cmd_dominate(
    input: &Path,
    mode: &str,
    eps: &str,
    seed: u64,
) -> Result<(&'static str, Value), AppError> {
    let (text, inputs) = read_input(input)?;
    match mode {
        "tournament" => {
            let t: TriTournament = parse_json(&text, "tri-tournament")?;
            let x = tournament::dominating_set_tri_tournament(&t, seed);
            if !t.dominates(&x) {
                return Err(AppError::Validation("returned set does not dominate".into()));
            }
            Ok((
                "dominate",
                json!({
                    "inputs": inputs,
                    "params": { "mode": mode },
                    "n": t.ground_size(),
                    "size": x.len(),
                    "set": vset_vec(&x),
                    "validated": true,
                }),
            ))
        }
        "fractional" => {
            let t: TriTournament = parse_json(&text, "tri-tournament")?;
            let members = lp::maximal_transitive_sets(&t);
            let family = TransitiveFamily::new(&t, members)?;
            // realized coverage of the enumerated family, used as declared c
            let min_cov = family.coverage(t.ground_size()).into_iter().min().unwrap_or(0);
            if min_cov == 0 || family.size() == 0 {
                return Err(AppError::Hypothesis(
                    "some vertex lies in no transitive member".into(),
                ));
            }
            let c = dnlkit::core::frac(min_cov as i64, family.size() as i64);
            let x = tournament::dominate_from_fractional_coloring(&t, &family, c, seed)?;
            if !t.dominates(&x) {
                return Err(AppError::Validation("returned set does not dominate".into()));
            }
            Ok((
                "dominate",
                json!({
                    "inputs": inputs,
                    "params": { "mode": mode, "c": c.to_string() },
                    "n": t.ground_size(),
                    "family_size": family.size(),
                    "size": x.len(),
                    "set": vset_vec(&x),
                    "validated": true,
                }),
            ))
        }
        "majority" => {
            let p: VoterProfile = parse_json(&text, "voter profile")?;
            let eps = frac_arg(eps, "eps")?;
            let t = tournament::majority_tri_tournament(&p, eps);
            let x = tournament::dominating_set_tri_tournament(&t, seed);
            if !tournament::validate_majority_domination(&p, eps, &x) {
                return Err(AppError::Validation(
                    "set does not dominate the majority digraph".into(),
                ));
            }
            Ok((
                "dominate",
                json!({
                    "inputs": inputs,
                    "params": { "mode": mode, "eps": eps.to_string() },
                    "candidates": p.candidates,
                    "voters": p.voters(),
                    "size": x.len(),
                    "set": vset_vec(&x),
                    "validated": true,
                }),
            ))
        }
        other => Err(AppError::Usage(format!("unknown --mode {other}"))),
    }
}

struct GenParams {
    family: String,
    n: usize,
    m: usize,
    l: usize,
    k: usize,
    bigk: u32,
    t: usize,
    d: usize,
    x: usize,
    y: usize,
    eps: String,
    p: f64,
    scale: usize,
    noise: usize,
    dim: usize,
    groups: usize,
    per_group: usize,
    seed: u64,
    out: Option<PathBuf>,
}

fn cmd_generate(gp: GenParams) -> Result<(&'static str, Value), AppError> {
    let eps_frac = frac_arg(&gp.eps, "eps")?;
    let eps_f = frac_f64(eps_frac);
    let seed = gp.seed;
    // (serialized instance, extra report fields, optional dimacs form)
    let (instance, extra, dimacs): (Value, Value, Option<String>) = match gp.family.as_str() {
        name @ ("petersen" | "grotzsch" | "haggkvist" | "brandt12") => {
            let g = gen::named_graph(name)?;
            let digest = gen::named_graph_digest(name)?;
            (serde_json::to_value(&g).unwrap(), json!({ "digest": digest }), Some(g.to_dimacs()))
        }
        "kneser" => {
            let sg = gen::kneser_graph(gp.n, gp.k)?;
            (
                serde_json::to_value(&sg.graph).unwrap(),
                json!({ "vertices": sg.graph.ground_size() }),
                Some(sg.graph.to_dimacs()),
            )
        }
        "schrijver" => {
            let sg = gen::schrijver_graph(gp.l, gp.k)?;
            (
                serde_json::to_value(&sg.graph).unwrap(),
                json!({ "vertices": sg.graph.ground_size() }),
                Some(sg.graph.to_dimacs()),
            )
        }
        "schrijver-hajnal" => {
            let sh = gen::schrijver_hajnal(gp.l, gp.k, gp.bigk)?;
            let extra = json!({
                "schrijver_size": sh.schrijver_size,
                "block_size": sh.block_size,
                "b_size": sh.b_size,
            });
            let dim = sh.graph.to_dimacs();
            (serde_json::to_value(&sh.graph).unwrap(), extra, Some(dim))
        }
        "borsuk-hajnal" => {
            let bh = gen::borsuk_hajnal(gp.d, eps_f, gp.x, gp.y, seed)?;
            let extra = json!({
                "min_degree": bh.min_degree,
                "eps_prime": bh.eps_prime,
                "x": bh.x_size, "y": bh.y_size, "z": bh.z_size,
            });
            let dim = bh.graph.to_dimacs();
            (serde_json::to_value(&bh.graph).unwrap(), extra, Some(dim))
        }
        "orourke" => {
            let inst = gen::orourke_regular(gp.t, eps_f, gp.scale, seed)?;
            let extra = json!({
                "t": inst.t,
                "degree": inst.degree,
                "degree_ratio": inst.degree_ratio,
            });
            let dim = inst.graph.to_dimacs();
            (serde_json::to_value(&inst.graph).unwrap(), extra, Some(dim))
        }
        "dense-tf" => {
            let inst = gen::dense_tf_graph(gp.n, eps_frac, gp.noise, seed)?;
            let extra = json!({
                "core_k": inst.core_k,
                "blob": inst.blob,
                "deleted_edges": inst.deleted_edges,
            });
            let dim = inst.graph.to_dimacs();
            (serde_json::to_value(&inst.graph).unwrap(), extra, Some(dim))
        }
        "random-tournament" => {
            let t = gen::random_tournament(gp.n, seed);
            (serde_json::to_value(&t).unwrap(), json!({}), None)
        }
        "random-tri-tournament" => {
            let t = gen::random_tri_tournament(gp.n, gp.p, seed);
            (serde_json::to_value(&t).unwrap(), json!({}), None)
        }
        "random-profile" => {
            let p = gen::random_profile(gp.n, gp.m, seed);
            (serde_json::to_value(&p).unwrap(), json!({}), None)
        }
        "random-set-system" => {
            let f = gen::random_set_system(gp.n, gp.m, gp.p, seed);
            (serde_json::to_value(&f).unwrap(), json!({}), None)
        }
        "random-trigraph" => {
            let t = gen::random_trigraph(gp.n, gp.p, (gp.p / 3.0).min(1.0 - gp.p), seed);
            (serde_json::to_value(&t).unwrap(), json!({}), None)
        }
        "hamming-cloud" => {
            let c = gen::random_hamming_cloud(gp.n, gp.dim, seed);
            (serde_json::to_value(&c).unwrap(), json!({}), None)
        }
        "sphere-cloud" => {
            let c = gen::random_sphere_cloud(gp.n, gp.dim, seed);
            (serde_json::to_value(&c).unwrap(), json!({}), None)
        }
        "euclidean-cloud" => {
            let c = gen::random_euclidean_ball_cloud(gp.n, gp.dim, seed);
            (serde_json::to_value(&c).unwrap(), json!({}), None)
        }
        "clustered-cloud" => {
            let c = gen::clustered_euclidean_cloud(gp.groups, gp.per_group, gp.dim, seed);
            (serde_json::to_value(&c).unwrap(), json!({}), None)
        }
        other => return Err(AppError::Usage(format!("unknown --family {other}"))),
    };

    let bytes = serde_json::to_vec_pretty(&instance).unwrap();
    let mut artifacts = vec![json!({ "sha256": sha256_hex(&bytes) })];
    if let Some(dir) = &gp.out {
        fs::create_dir_all(dir)
            .map_err(|e| AppError::Usage(format!("cannot create out dir: {e}")))?;
        let path = dir.join(format!("{}.json", gp.family));
        fs::write(&path, &bytes).map_err(|e| AppError::Usage(format!("cannot write: {e}")))?;
        artifacts[0] = artifact_entry(&path, &bytes);
        if let Some(d) = &dimacs {
            let dpath = dir.join(format!("{}.dimacs", gp.family));
            fs::write(&dpath, d).map_err(|e| AppError::Usage(format!("cannot write: {e}")))?;
            artifacts.push(artifact_entry(&dpath, d.as_bytes()));
        }
    }
    Ok((
        "generate",
        json!({
            "inputs": [],
            "params": {
                "family": gp.family, "n": gp.n, "m": gp.m, "l": gp.l, "k": gp.k,
                "bigk": gp.bigk, "t": gp.t, "eps": gp.eps, "p": gp.p,
                "scale": gp.scale, "noise": gp.noise, "dim": gp.dim,
            },
            "artifacts": artifacts,
            "details": extra,
            "instance": if gp.out.is_some() { Value::Null } else { instance },
        }),
    ))
}

fn cmd_verify(
    input: &Path,
    triangle_free: bool,
    kt: Option<usize>,
    regular: bool,
    chi: Option<usize>,
    digest: Option<String>,
) -> Result<(&'static str, Value), AppError> {
    let (g, inputs) = load_graph(input)?;
    #[derive(Serialize)]
    struct Check {
        name: String,
        pass: bool,
        detail: String,
    }
    let mut checks: Vec<Check> = Vec::new();
    if triangle_free {
        let ok = chromatic::is_triangle_free(&g);
        checks.push(Check {
            name: "triangle-free".into(),
            pass: ok,
            detail: if ok { "no triangle".into() } else { "triangle found".into() },
        });
    }
    if let Some(t) = kt {
        let witness = chromatic::find_clique(&g, t);
        checks.push(Check {
            name: format!("k{t}-free"),
            pass: witness.is_none(),
            detail: match witness {
                None => format!("no K_{t}"),
                Some(c) => format!("clique {c:?}"),
            },
        });
    }
    if regular {
        let deg = g.regular_degree();
        checks.push(Check {
            name: "regular".into(),
            pass: deg.is_some(),
            detail: match deg {
                Some(d) => format!("degree {d}"),
                None => format!("degrees range {}..{}", g.min_degree(), g.max_degree()),
            },
        });
    }
    if let Some(want) = chi {
        let got = chromatic::chromatic_number(&g).map_err(AppError::from)?;
        checks.push(Check {
            name: "chromatic-number".into(),
            pass: got == want,
            detail: format!("chi = {got}"),
        });
    }
    if let Some(want) = digest {
        let got = sha256_hex(g.to_dimacs().as_bytes());
        checks.push(Check {
            name: "digest".into(),
            pass: got == want,
            detail: got,
        });
    }
    if checks.is_empty() {
        return Err(AppError::Usage("no checks requested".into()));
    }
    let all_pass = checks.iter().all(|c| c.pass);
    let report = json!({
        "inputs": inputs,
        "params": {},
        "n": g.ground_size(),
        "edges": g.edge_count(),
        "checks": serde_json::to_value(&checks).unwrap(),
        "pass": all_pass,
    });
    if !all_pass {
        let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        eprintln!("{}", serde_json::to_string_pretty(&report).unwrap());
        return Err(AppError::Validation(format!("checks failed: {}", failed.join(", "))));
    }
    Ok(("verify", report))
}
