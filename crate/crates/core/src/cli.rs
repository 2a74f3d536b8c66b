//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 the
//! enumeration cap was exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::One;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::chromatic::{chromatic_partial, chromatic_subset_expansion, SweepOptions, DEFAULT_EDGE_CAP};
use crate::error::Error;
use crate::graph::{parse_graph, SimpleGraph, VertexSet};
use crate::group::{parse_group, FiniteGroup, GainGraph};
use crate::matroid::{
    check_rank_axioms, cross_check, spot_check_rank_axioms, CheckFamily, CrossCheckReport, HalfEdgeChoice,
    DEFAULT_MATROID_CAP,
};
use crate::poly::{GammaPolynomial, IntPolynomial, JsonInt};
use crate::whitney::{check_stirling_identity, check_vandermonde, WhitneyEngine};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Environment variable overriding the default enumeration cap.
pub const EDGE_CAP_ENV: &str = "DOWLING_EDGE_CAP";

#[derive(Parser, Debug)]
#[command(name = "dowling", version, about = "Whitney numbers of partially filled group expansions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Whitney numbers (symbolic in γ) or chromatic polynomials of one expansion.
    Compute(ComputeArgs),
    /// The six expansions of the path with two edges.
    TableP2(TableArgs),
    /// Cross-check every chromatic route over a family of expansions.
    Verify(VerifyArgs),
    /// Exhaustively check the Stirling and Vandermonde identities.
    Identities(IdentityArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Route {
    /// Stable-set formula in the base graph.
    Formula,
    /// Enumerate every edge subset of a concrete gain graph.
    SubsetExpansion,
}

#[derive(Args, Debug)]
struct ComputeArgs {
    /// Base graph: K<n>, P<k>, C<n>, E<n>, "n=<n>; u-v,..." or JSON.
    #[arg(long)]
    graph: String,
    /// Vertices carrying half edges: all, none, or a list such as 1,3.
    #[arg(long, default_value = "none")]
    half_edges: String,
    /// Group order, or `symbolic`.
    #[arg(long, default_value = "symbolic")]
    gamma: String,
    /// Whitney index, or `all`.
    #[arg(long = "i", default_value = "all")]
    index: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, value_enum, default_value = "formula")]
    route: Route,
    /// Group for the subset-expansion route (defaults to Z<gamma>).
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    edge_cap: Option<usize>,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Check every labeled graph with up to this many vertices.
    #[arg(long, default_value_t = 3)]
    max_n: usize,
    /// Orders of the cyclic groups to expand by.
    #[arg(long, default_value = "1,2,3", value_delimiter = ',')]
    gammas: Vec<usize>,
    /// Explicit groups, e.g. Z4,Z2xZ2; replaces --gammas.
    #[arg(long, value_delimiter = ',')]
    groups: Option<Vec<String>>,
    /// Check a single graph (all X) instead of every labeled graph.
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    edge_cap: Option<usize>,
    /// Seed for the randomized rank-axiom spot checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 32)]
    spot_checks: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct IdentityArgs {
    #[arg(long, default_value_t = 10)]
    stirling_max_n: usize,
    #[arg(long, default_value_t = 8)]
    vandermonde_max_c: usize,
}

/// Failure of a subcommand, carrying its exit code.
struct Exit {
    code: i32,
    message: String,
}

impl Exit {
    fn usage(message: impl ToString) -> Self {
        Exit { code: EXIT_USAGE, message: message.to_string() }
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::EdgeCapExceeded { .. } => EXIT_CAP,
            _ => EXIT_USAGE,
        };
        Exit { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Exit {
    fn from(e: std::io::Error) -> Self {
        Exit { code: EXIT_USAGE, message: e.to_string() }
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Compute(a) => compute(a, out),
        Command::TableP2(a) => table_p2(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Identities(a) => identities(a, out),
    };
    match result {
        Ok(code) => code,
        Err(exit) => {
            let _ = writeln!(err, "error: {}", exit.message);
            exit.code
        }
    }
}

fn edge_cap(flag: Option<usize>, default: usize) -> Result<usize, Exit> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var(EDGE_CAP_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Exit::usage(format!("{EDGE_CAP_ENV} must be an integer, got `{v}`"))),
        Err(_) => Ok(default),
    }
}

/// One Whitney number as emitted in JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WhitneyRecord {
    pub graph: SimpleGraph,
    #[serde(rename = "X")]
    pub x: Vec<usize>,
    pub i: usize,
    pub gamma_coeffs: Vec<JsonInt>,
    pub degree: Option<usize>,
    pub zero: bool,
}

impl WhitneyRecord {
    pub fn new(graph: &SimpleGraph, x: VertexSet, i: usize, w: &GammaPolynomial) -> Self {
        WhitneyRecord {
            graph: graph.clone(),
            x: x.labels(),
            i,
            gamma_coeffs: w.coeffs().iter().cloned().map(JsonInt).collect(),
            degree: w.degree(),
            zero: w.is_zero(),
        }
    }
}

/// Chromatic data of one expansion with a concrete group order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecializedRecord {
    pub graph: SimpleGraph,
    #[serde(rename = "X")]
    pub x: Vec<usize>,
    pub gamma: usize,
    pub route: String,
    pub whitney: Vec<JsonInt>,
    pub chromatic: IntPolynomial,
}

fn csv_line(fields: impl IntoIterator<Item = String>) -> String {
    fields.into_iter().collect::<Vec<_>>().join(",")
}

fn compute(a: ComputeArgs, out: &mut dyn Write) -> Result<i32, Exit> {
    let graph = parse_graph(&a.graph).map_err(Exit::usage)?;
    let n = graph.n();
    let x = VertexSet::parse(&a.half_edges, n).map_err(Exit::usage)?;
    let indices: Vec<usize> = match a.index.as_str() {
        "all" => (0..=n).collect(),
        s => {
            let i: usize = s.parse().map_err(|_| Exit::usage(format!("--i expects an index or `all`, got `{s}`")))?;
            if i > n {
                return Err(Exit::usage(format!("index {i} out of range 0..={n}")));
            }
            vec![i]
        }
    };
    let group = a.group.as_deref().map(parse_group).transpose().map_err(Exit::usage)?;
    let gamma: Option<usize> = match (a.gamma.as_str(), &group) {
        ("symbolic", None) => None,
        ("symbolic", Some(g)) => Some(g.order()),
        (s, _) => {
            let m: usize = s.parse().map_err(|_| Exit::usage(format!("--gamma expects an order or `symbolic`, got `{s}`")))?;
            if m == 0 {
                return Err(Exit::usage("--gamma must be at least 1"));
            }
            if group.as_ref().is_some_and(|g| g.order() != m) {
                return Err(Exit::usage("--gamma disagrees with the order of --group"));
            }
            Some(m)
        }
    };

    let Some(m) = gamma else {
        if a.route == Route::SubsetExpansion {
            return Err(Exit::usage("the subset-expansion route needs --gamma or --group"));
        }
        let mut engine = WhitneyEngine::new();
        let polys = indices
            .iter()
            .map(|&i| engine.partial(&graph, x, i))
            .collect::<Result<Vec<_>, _>>()?;
        match a.format {
            Format::Text if polys.len() == 1 => writeln!(out, "{}", polys[0])?,
            Format::Text => {
                for (i, p) in indices.iter().zip(&polys) {
                    writeln!(out, "w{i}: {p}")?;
                }
            }
            Format::Json => {
                let records: Vec<WhitneyRecord> =
                    indices.iter().zip(&polys).map(|(&i, p)| WhitneyRecord::new(&graph, x, i, p)).collect();
                let text = if records.len() == 1 {
                    serde_json::to_string(&records[0])
                } else {
                    serde_json::to_string(&records)
                };
                writeln!(out, "{}", text.expect("serializable"))?;
            }
            Format::Csv => {
                let width = polys.iter().map(|p| p.coeffs().len()).max().unwrap_or(0).max(1);
                writeln!(out, "{}", csv_line(std::iter::once("i".into()).chain((0..width).map(|k| format!("c{k}")))))?;
                for (i, p) in indices.iter().zip(&polys) {
                    let coeffs = (0..width).map(|k| p.coeff(k).to_string());
                    writeln!(out, "{}", csv_line(std::iter::once(i.to_string()).chain(coeffs)))?;
                }
            }
        }
        return Ok(EXIT_OK);
    };

    let (route, signless) = match a.route {
        Route::Formula => ("formula", chromatic_partial(&graph, x).specialize(&BigInt::from(m))),
        Route::SubsetExpansion => {
            let group = match group {
                Some(g) => g,
                None => FiniteGroup::cyclic(m).map_err(Exit::usage)?,
            };
            let cap = edge_cap(a.edge_cap, DEFAULT_EDGE_CAP)?;
            let phi = GainGraph::expand(&graph, x, &group);
            let chi = chromatic_subset_expansion(&phi, &SweepOptions::with_cap(cap))?;
            ("subset_expansion", chi.signless(n))
        }
    };
    let chromatic = signless.signless(n);
    let whitney: Vec<BigInt> = indices.iter().map(|&i| signless.coeff(n - i)).collect();
    match a.format {
        Format::Text => {
            for (i, w) in indices.iter().zip(&whitney) {
                writeln!(out, "w{i}: {w}")?;
            }
            writeln!(out, "chi: {chromatic}")?;
        }
        Format::Json => {
            let record = SpecializedRecord {
                graph: graph.clone(),
                x: x.labels(),
                gamma: m,
                route: route.into(),
                whitney: whitney.into_iter().map(JsonInt).collect(),
                chromatic,
            };
            writeln!(out, "{}", serde_json::to_string(&record).expect("serializable"))?;
        }
        Format::Csv => {
            writeln!(out, "i,value")?;
            for (i, w) in indices.iter().zip(&whitney) {
                writeln!(out, "{i},{w}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

/// One row of the table for the path with two edges.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    #[serde(rename = "X")]
    pub x: Vec<usize>,
    pub whitney: Vec<GammaPolynomial>,
    pub gamma_one: Vec<JsonInt>,
}

/// The six half-edge sets of the path `v1 v2 v3`, one per isomorphism class.
pub const P2_HALF_EDGE_SETS: [(&str, &[usize]); 6] = [
    ("∅", &[]),
    ("{v1}", &[1]),
    ("{v2}", &[2]),
    ("{v1,v2}", &[1, 2]),
    ("{v1,v3}", &[1, 3]),
    ("V", &[1, 2, 3]),
];

/// Rows of the table, computed from the stable-set formula.
pub fn p2_table() -> Vec<TableRow> {
    let p2 = SimpleGraph::path(2);
    let mut engine = WhitneyEngine::new();
    P2_HALF_EDGE_SETS
        .iter()
        .map(|&(label, labels)| {
            let x = VertexSet::from_labels(labels.iter().copied(), 3).expect("vertex of P2");
            let whitney: Vec<GammaPolynomial> =
                (0..=3).map(|i| engine.partial(&p2, x, i).expect("index in range")).collect();
            let gamma_one = whitney.iter().map(|w| JsonInt(w.eval(&BigInt::one()))).collect();
            TableRow { label: label.into(), x: x.labels(), whitney, gamma_one }
        })
        .collect()
}

fn table_p2(a: TableArgs, out: &mut dyn Write) -> Result<i32, Exit> {
    let rows = p2_table();
    match a.format {
        Format::Text => {
            let header: Vec<String> = ["X", "w0", "w1", "w2", "w3", "gamma=1"].iter().map(|s| s.to_string()).collect();
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut cells = vec![r.label.clone()];
                    cells.extend(r.whitney.iter().map(|w| w.to_string()));
                    cells.push(r.gamma_one.iter().map(|v| v.0.to_string()).collect::<Vec<_>>().join(", "));
                    cells
                })
                .collect();
            let widths: Vec<usize> = (0..header.len())
                .map(|c| std::iter::once(&header).chain(&body).map(|row| row[c].chars().count()).max().unwrap_or(0))
                .collect();
            for row in std::iter::once(&header).chain(&body) {
                let cells: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(cell, &w)| format!("{cell}{}", " ".repeat(w - cell.chars().count())))
                    .collect();
                writeln!(out, "{}", cells.join(" | ").trim_end())?;
            }
        }
        Format::Json => writeln!(out, "{}", serde_json::to_string(&rows).expect("serializable"))?,
        Format::Csv => {
            writeln!(out, "X,i,gamma=1,c0,c1,c2")?;
            for r in &rows {
                for (i, w) in r.whitney.iter().enumerate() {
                    let coeffs = (0..3).map(|k| w.coeff(k).to_string());
                    let fields = [r.label.clone(), i.to_string(), r.gamma_one[i].0.to_string()];
                    writeln!(out, "{}", csv_line(fields.into_iter().chain(coeffs)))?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

/// Report written by `verify`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    #[serde(flatten)]
    pub routes: CrossCheckReport,
    pub rank_checks: usize,
    pub rank_failures: Vec<String>,
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32, Exit> {
    let cap = edge_cap(a.edge_cap, DEFAULT_MATROID_CAP)?;
    let graphs: Vec<SimpleGraph> = match &a.graph {
        Some(spec) => vec![parse_graph(spec).map_err(Exit::usage)?],
        None => {
            if a.max_n == 0 {
                return Err(Exit::usage("--max-n must be at least 1"));
            }
            (1..=a.max_n).flat_map(SimpleGraph::all_labeled).collect()
        }
    };
    let groups: Vec<FiniteGroup> = match &a.groups {
        Some(specs) => specs.iter().map(|s| parse_group(s)).collect::<Result<_, _>>().map_err(Exit::usage)?,
        None => a
            .gammas
            .iter()
            .map(|&m| FiniteGroup::cyclic(m))
            .collect::<Result<_, _>>()
            .map_err(Exit::usage)?,
    };
    if groups.is_empty() {
        return Err(Exit::usage("no groups to check"));
    }
    let family = CheckFamily { graphs, half_edges: HalfEdgeChoice::All, groups, edge_cap: cap };
    let routes = cross_check(&family)?;

    let mut rng = StdRng::seed_from_u64(a.seed);
    let mut report = VerifyReport { routes, ..Default::default() };
    for g in &family.graphs {
        for bits in 0..1u32 << g.n() {
            for group in &family.groups {
                let phi = GainGraph::expand(g, VertexSet::from_bits(bits), group);
                let m = phi.edge_count();
                let outcome = if m <= 10 {
                    check_rank_axioms(&phi)
                } else if m <= cap {
                    spot_check_rank_axioms(&phi, &mut rng, a.spot_checks)
                } else {
                    continue;
                };
                report.rank_checks += 1;
                if let Err(msg) = outcome {
                    report.rank_failures.push(format!("{g} X={} group order {}: {msg}", VertexSet::from_bits(bits), group.order()));
                }
            }
        }
    }

    let text = serde_json::to_string_pretty(&report).expect("serializable");
    match &a.out {
        Some(path) => std::fs::write(path, format!("{text}\n"))?,
        None => writeln!(out, "{text}")?,
    }
    if report.routes.ok() && report.rank_failures.is_empty() {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_VERIFY_FAILED)
    }
}

fn identities(a: IdentityArgs, out: &mut dyn Write) -> Result<i32, Exit> {
    let mut stirling = 0;
    for n in 1..=a.stirling_max_n {
        for i in 0..=n {
            if !check_stirling_identity(n, i)? {
                return Err(Exit { code: EXIT_VERIFY_FAILED, message: format!("Stirling identity fails at n={n}, i={i}") });
            }
            stirling += 1;
        }
    }
    let mut vandermonde = 0;
    for c in 0..=a.vandermonde_max_c {
        for m in 0..=c {
            for zeta in 0..=c {
                if !check_vandermonde(c, zeta, m)? {
                    return Err(Exit {
                        code: EXIT_VERIFY_FAILED,
                        message: format!("Vandermonde identity fails at c={c}, zeta={zeta}, m={m}"),
                    });
                }
                vandermonde += 1;
            }
        }
    }
    writeln!(out, "stirling: {stirling} cases hold")?;
    writeln!(out, "vandermonde: {vandermonde} cases hold")?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("dowling").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn compute_single_index() {
        let (code, out, _) = run_capture(&["compute", "--graph", "K3", "--half-edges", "all", "--i", "1"]);
        assert_eq!((code, out.as_str()), (0, "3 + 3g\n"));
        let (code, out, _) = run_capture(&["compute", "--graph", "E1", "--half-edges", "none", "--i", "0"]);
        assert_eq!((code, out.as_str()), (0, "1\n"));
    }

    #[test]
    fn compute_usage_errors() {
        let (code, _, err) = run_capture(&["compute", "--graph", "Q3"]);
        assert_eq!(code, EXIT_USAGE);
        assert_eq!(err.lines().count(), 1);
        assert_eq!(run_capture(&["compute", "--graph", "P2", "--i", "9"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["compute", "--graph", "P2", "--gamma", "0"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["compute", "--graph", "P2", "--half-edges", "7"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["bogus"]).0, EXIT_USAGE);
    }

    #[test]
    fn compute_cap_exit() {
        let args = ["compute", "--graph", "K4", "--gamma", "3", "--route", "subset-expansion", "--edge-cap", "12"];
        assert_eq!(run_capture(&args).0, EXIT_CAP);
    }

    #[test]
    fn compute_routes_agree() {
        let formula = run_capture(&["compute", "--graph", "P2", "--half-edges", "1", "--gamma", "3", "--format", "csv"]);
        let brute = run_capture(&[
            "compute", "--graph", "P2", "--half-edges", "1", "--gamma", "3", "--format", "csv", "--route", "subset-expansion",
        ]);
        assert_eq!(formula.0, 0);
        assert_eq!(formula.1, brute.1);
    }

    #[test]
    fn identities_small_ranges() {
        assert_eq!(run_capture(&["identities", "--stirling-max-n", "1"]).0, 0);
        let (code, out, _) = run_capture(&["identities", "--vandermonde-max-c", "0", "--stirling-max-n", "0"]);
        assert_eq!(code, 0);
        assert!(out.contains("vandermonde: 1 cases hold"));
    }

    #[test]
    fn verify_rejects_zero_max_n() {
        assert_eq!(run_capture(&["verify", "--max-n", "0"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_exits_cleanly() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("table-p2"));
    }
}
