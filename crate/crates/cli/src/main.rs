//! `eigtool`: command-line front end for the `eigraph` library.
//!
//! Exit codes: 0 success or valid, 1 usage or validation error, 2 a
//! certificate or covering map failed verification.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use eigraph::commation::{
    diameter_commation, radius_commation, to_regular, verify, Commation, CommationReport,
};
use eigraph::covers::{cyclic_cover_with, universal_ball, Recognition};
use eigraph::modular::{invariant_primes, is_unimodular, modular_data};
use eigraph::moves::{apply, essentialize, minimalize, MoveParams};
use eigraph::rigidity::{
    classify_quotients, cycle_lengths, g24_family, make_triangle, obstruction_chain,
    search_smooth_covers, triangle_obstruction, OBSTRUCTION_SEARCH_TOTAL,
};
use eigraph::sieve::{in_s, partial_sum_bound, primes_not_in};
use eigraph::{CoveringMap, EIGraph};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "eigtool", version, about = "Edge-indexed graphs, covers, commations, sieves")]
struct Cli {
    /// Also write a machine-readable report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json_out: Option<PathBuf>,
    /// Worker threads for search subcommands.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    group: Group,
}

#[derive(Subcommand, Debug)]
enum Group {
    /// Single-graph operations.
    #[command(subcommand)]
    Eig(EigCmd),
    /// Covering maps.
    #[command(subcommand)]
    Cover(CoverCmd),
    /// Commation synthesis and verification.
    #[command(subcommand)]
    Commation(CommationCmd),
    /// Smooth-number sums.
    #[command(subcommand)]
    Sieve(SieveCmd),
    /// Triangle groups and the G24 family.
    #[command(subcommand)]
    Rigidity(RigidityCmd),
}

#[derive(Args, Debug)]
struct OutArg {
    /// Write the resulting graph or certificate here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum EigCmd {
    /// Check a graph file.
    Validate { graph: PathBuf },
    /// Minimal (or essential) reduction.
    Reduce {
        graph: PathBuf,
        #[arg(long)]
        essential: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Apply one move given as JSON, e.g. '{"move":"collapse","edge":"e"}'.
    Move {
        graph: PathBuf,
        #[arg(long, value_name = "JSON")]
        params: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Modular data, unimodularity and invariant primes.
    Modular { graph: PathBuf },
    /// Ball in the universal cover and regular-tree recognition.
    Ucover {
        graph: PathBuf,
        #[arg(long)]
        base: Option<String>,
        #[arg(long, default_value_t = 2)]
        radius: u32,
    },
}

#[derive(Subcommand, Debug)]
enum CoverCmd {
    /// Verify a covering map file.
    Check { map: PathBuf },
    /// Cyclic cover with the given number of sheets.
    Sheets {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        /// Voltage edge id (default: smallest non-tree edge).
        #[arg(long)]
        voltage: Option<String>,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand, Debug)]
enum CommationCmd {
    ToRegular {
        graph: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    Diameter {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    Radius {
        graph: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    Verify { certificate: PathBuf },
}

#[derive(Subcommand, Debug)]
enum SieveCmd {
    Member {
        #[arg(long)]
        d: u32,
        #[arg(long = "N")]
        n: u64,
        m: u64,
    },
    PrimesNotIn {
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 10_000)]
        limit: u64,
    },
    PartialSum {
        #[arg(long)]
        d: u32,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value_t = 1_000_000)]
        limit: u64,
    },
}

#[derive(Args, Debug)]
struct Primes {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    r: u64,
    #[arg(long)]
    s: u64,
}

#[derive(Subcommand, Debug)]
enum RigidityCmd {
    Triangle {
        #[command(flatten)]
        p: Primes,
    },
    Obstruct {
        #[command(flatten)]
        p: Primes,
        #[arg(long = "N")]
        n: u64,
        /// Bound on the total number of vertices of searched covers.
        #[arg(long, default_value_t = OBSTRUCTION_SEARCH_TOTAL)]
        max_vertices: u64,
        /// Run the chain and the search even if the hypothesis fails.
        #[arg(long)]
        ungated: bool,
    },
    Classify {
        #[command(flatten)]
        p: Primes,
        #[arg(long)]
        max_vertices: usize,
        #[arg(long, default_value_t = 1)]
        max_label: u32,
    },
    G24 {
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        out: OutArg,
    },
}

struct Report {
    text: String,
    json: Value,
    code: u8,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, code: 0 }
    }
}

fn to_value(x: &impl Serialize) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

fn load_graph(path: &Path) -> Result<EIGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let g = EIGraph::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(g)
}

fn load_valid(path: &Path) -> Result<EIGraph> {
    let g = load_graph(path)?;
    g.ensure_valid().with_context(|| format!("validating {}", path.display()))?;
    Ok(g)
}

/// Writes `body` to `out` if given and returns the text to print.
fn emit(out: &OutArg, body: String, summary: String) -> Result<String> {
    match &out.out {
        Some(p) => {
            fs::write(p, body + "\n").with_context(|| format!("writing {}", p.display()))?;
            Ok(format!("{summary}\nwritten to {}", p.display()))
        }
        None => Ok(body),
    }
}

fn eig(cmd: EigCmd) -> Result<Report> {
    match cmd {
        EigCmd::Validate { graph } => {
            let g = load_graph(&graph)?;
            let rep = g.validate();
            let mut json = to_value(&rep)?;
            json["connected"] = json!(g.is_connected());
            let ok = rep.is_valid() && g.is_connected();
            let text = if ok {
                format!("valid: {} vertices, {} edges", g.vertex_count(), g.geometric_edge_count())
            } else if rep.is_valid() {
                "invalid: graph is not connected".into()
            } else {
                format!("invalid:\n{rep}")
            };
            Ok(Report { text, json, code: if ok { 0 } else { 1 } })
        }
        EigCmd::Reduce { graph, essential, out } => {
            let g = load_valid(&graph)?;
            let r = if essential { essentialize(&g)? } else { minimalize(&g)? };
            let summary = format!("{} collapses, degenerate: {}", r.sequence.len(), r.degenerate);
            let text = emit(&out, r.graph.to_json(), summary)?;
            Ok(Report::ok(text, to_value(&r)?))
        }
        EigCmd::Move { graph, params, out } => {
            let g = load_valid(&graph)?;
            let params: MoveParams =
                serde_json::from_str(&params).context("parsing --params")?;
            let (h, rec) = apply(&g, &params)?;
            let summary = format!("{:?}, arrow {:?}", rec.kind, rec.arrow);
            let text = emit(&out, h.to_json(), summary)?;
            Ok(Report::ok(text, json!({ "record": rec, "result": h })))
        }
        EigCmd::Modular { graph } => {
            let g = load_valid(&graph)?;
            let data = modular_data(&g)?;
            let uni = is_unimodular(&g)?;
            let reduced = minimalize(&g)?.graph;
            let primes = if reduced.edge_count() == 0 {
                Default::default()
            } else {
                invariant_primes(&reduced)?
            };
            let mut text = format!("unimodular: {uni}\n");
            for (id, r) in &data.generators {
                text += &format!("delta({id}) = {r}\n");
            }
            text += &format!(
                "invariant primes: {}",
                primes.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
            );
            Ok(Report::ok(
                text,
                json!({ "modular": data, "unimodular": uni, "invariant_primes": primes }),
            ))
        }
        EigCmd::Ucover { graph, base, radius } => {
            let g = load_valid(&graph)?;
            let b = match &base {
                Some(v) => g.vertex(v)?,
                None => g.vertices_sorted()[0],
            };
            let ball = universal_ball(&g, b, radius)?;
            let rec = ball.recognize();
            let text = format!(
                "ball of radius {radius} at {}: {} nodes, {}",
                g.vertex_id(b),
                ball.nodes.len(),
                match &rec {
                    Recognition::Regular(n) => format!("regular of degree {n}"),
                    Recognition::Mixed(ds) => format!("mixed degrees {ds:?}"),
                    Recognition::Degenerate => "degenerate".into(),
                }
            );
            Ok(Report::ok(text, json!({ "nodes": ball.nodes.len(), "recognition": rec })))
        }
    }
}

fn cover(cmd: CoverCmd) -> Result<Report> {
    match cmd {
        CoverCmd::Check { map } => {
            let text = fs::read_to_string(&map).with_context(|| format!("reading {}", map.display()))?;
            let p: CoveringMap = serde_json::from_str(&text).context("parsing covering map")?;
            let rep = p.check();
            let graph_cover = rep.is_valid() && p.is_graph_cover();
            let mut json = to_value(&rep)?;
            json["graph_cover"] = json!(graph_cover);
            json["fibers"] = to_value(&p.fiber_sizes())?;
            if rep.is_valid() {
                Ok(Report::ok(format!("valid cover, graph cover: {graph_cover}"), json))
            } else {
                Ok(Report { text: format!("invalid cover:\n{rep}"), json, code: 2 })
            }
        }
        CoverCmd::Sheets { graph, k, voltage, out } => {
            let g = load_valid(&graph)?;
            let v = voltage.as_deref().map(|id| g.edge(id)).transpose()?;
            let (_, map) = cyclic_cover_with(&g, k, v)?;
            let summary = format!(
                "{k}-sheeted cover with {} vertices, valid: {}",
                map.domain.vertex_count(),
                map.check().is_valid()
            );
            let text = emit(&out, serde_json::to_string_pretty(&map)?, summary)?;
            Ok(Report::ok(text, json!({ "sheets": k, "fibers": map.fiber_sizes() })))
        }
    }
}

fn describe(c: &Commation, rep: &CommationReport) -> String {
    let mut s = format!(
        "length {}, word {}, valid: {}",
        rep.length,
        if rep.word.is_empty() { "-" } else { rep.word.as_str() },
        rep.valid
    );
    if let Some(n) = c.final_degree() {
        s += &format!(", regular degree {n}");
    }
    if rep.axioms > 0 {
        s += &format!(", axiom arrows {}", rep.axioms);
    }
    s += "\nnodes: ";
    s += &c.nodes.iter().map(|n| n.label()).collect::<Vec<_>>().join(" | ");
    for v in &rep.violations {
        match v.arrow {
            Some(k) => s += &format!("\narrow {k}: {}", v.message),
            None => s += &format!("\n{}", v.message),
        }
    }
    s
}

fn certificate(c: Commation, out: &OutArg) -> Result<Report> {
    let rep = verify(&c);
    let summary = describe(&c, &rep);
    let text = emit(out, c.to_json(), summary)?;
    Ok(Report {
        text,
        json: to_value(&rep)?,
        code: if rep.valid { 0 } else { 2 },
    })
}

fn commation(cmd: CommationCmd) -> Result<Report> {
    match cmd {
        CommationCmd::ToRegular { graph, out } => certificate(to_regular(&load_valid(&graph)?)?, &out),
        CommationCmd::Diameter { left, right, out } => {
            let (g, h) = (load_valid(&left)?, load_valid(&right)?);
            certificate(diameter_commation(&g, &h)?, &out)
        }
        CommationCmd::Radius { graph, out } => certificate(radius_commation(&load_valid(&graph)?)?, &out),
        CommationCmd::Verify { certificate } => {
            let text = fs::read_to_string(&certificate)
                .with_context(|| format!("reading {}", certificate.display()))?;
            let c = Commation::from_json(&text).context("parsing certificate")?;
            let rep = verify(&c);
            Ok(Report {
                text: describe(&c, &rep),
                json: to_value(&rep)?,
                code: if rep.valid { 0 } else { 2 },
            })
        }
    }
}

fn sieve(cmd: SieveCmd) -> Result<Report> {
    match cmd {
        SieveCmd::Member { d, n, m } => {
            let yes = in_s(m, d, n);
            Ok(Report::ok(yes.to_string(), json!({ "m": m, "d": d, "N": n, "member": yes })))
        }
        SieveCmd::PrimesNotIn { n, count, limit } => {
            let ps = primes_not_in(n, count, limit)?;
            let text = ps.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
            Ok(Report::ok(text, json!({ "N": n, "primes": ps })))
        }
        SieveCmd::PartialSum { d, n, limit } => {
            let p = partial_sum_bound(d, n, limit);
            let text = format!(
                "{} terms, partial sum <= {:.12}, bound >= {:.12}, holds: {}",
                p.terms, p.partial, p.bound, p.holds
            );
            Ok(Report::ok(text, to_value(&p)?))
        }
    }
}

fn rigidity(cmd: RigidityCmd) -> Result<Report> {
    match cmd {
        RigidityCmd::Triangle { p } => {
            let t = make_triangle(p.q, p.r, p.s)?;
            let text = format!("{}\nN = 2qrs = {}", t.graph, t.n());
            Ok(Report::ok(text, json!({ "spec": t, "graph": t.graph })))
        }
        RigidityCmd::Obstruct { p, n, max_vertices, ungated } => {
            let t = make_triangle(p.q, p.r, p.s)?;
            let gate = if ungated { None } else { Some(triangle_obstruction(&t, n)?) };
            let chain = match &gate {
                Some(proof) => proof.chain.clone(),
                None => obstruction_chain(&t, n)?,
            };
            let search = match gate {
                Some(proof) if max_vertices == OBSTRUCTION_SEARCH_TOTAL => proof.search,
                _ => search_smooth_covers(&t, n, max_vertices)?,
            };
            let text = format!(
                "chain factor {} (contradiction: {}), {} fiber tuples checked, {} feasible, {} covers",
                chain.factor,
                chain.contradiction,
                search.tuples_checked,
                search.feasible.len(),
                search.covers.len()
            );
            Ok(Report::ok(text, json!({ "chain": chain, "search": search })))
        }
        RigidityCmd::Classify { p, max_vertices, max_label } => {
            let t = make_triangle(p.q, p.r, p.s)?;
            let c = classify_quotients(&t, max_vertices, max_label)?;
            let text = format!(
                "{} quotients with at most {max_vertices} vertices, cycle lengths {:?}, {} nodes visited, rejections {:?}",
                c.results.len(),
                cycle_lengths(&c),
                c.nodes_visited,
                c.rejections
            );
            Ok(Report::ok(text, to_value(&c)?))
        }
        RigidityCmd::G24 { k, out } => {
            let f = g24_family(k)?;
            let r = f.graph.vertex("r")?;
            let rec = universal_ball(&f.graph, r, 2)?.recognize();
            let summary = format!("k = {k}: {} moves, universal cover {rec:?}", f.sequence.len());
            let text = emit(&out, f.graph.to_json(), summary)?;
            Ok(Report::ok(text, json!({ "k": k, "recognition": rec, "family": f })))
        }
    }
}

fn dispatch(cli: Cli) -> Result<Report> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .map_err(|e| anyhow!("--jobs: {e}"))?;
    }
    match cli.group {
        Group::Eig(c) => eig(c),
        Group::Cover(c) => cover(c),
        Group::Commation(c) => commation(c),
        Group::Sieve(c) => sieve(c),
        Group::Rigidity(c) => rigidity(c),
    }
}

pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let json_out = cli.json_out.clone();
    match dispatch(cli) {
        Ok(rep) => {
            println!("{}", rep.text);
            if let Some(p) = json_out {
                let body = serde_json::to_string_pretty(&rep.json).expect("report serializes");
                if let Err(e) = fs::write(&p, body + "\n") {
                    eprintln!("error: writing {}: {e}", p.display());
                    return 1;
                }
            }
            rep.code
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}
