// SPDX-License-Identifier: MIT
//! `mpdagkit` command-line tool.

mod input;

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use mpdagkit::adjustment::{AdjustmentQuery, ListOptions, DEFAULT_UNIVERSE_CAP};
use mpdagkit::graph::Mark;
use mpdagkit::ida::{ida_effects_with, joint_ida_effects_with, DEDUP_TOLERANCE};
use mpdagkit::meek::{construct_max_pdag, validate_maximal_pdag, BackgroundKnowledge, OrientationOutcome};
use mpdagkit::paths::{b_possible_ancestors, b_possible_descendants};
use mpdagkit::sem::{format_g10, run_simulation, write_csv};
use mpdagkit::{Execution, PdagGraph};

use input::*;

pub const UNIVERSE_CAP_ENV: &str = "MPDAGKIT_UNIVERSE_CAP";

#[derive(Parser)]
#[command(name = "mpdagkit", version, about = "Causal queries on maximally oriented PDAGs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a graph is an acyclic, closed and extendable maximal PDAG
    Validate { graph: String },
    /// Add required orientations and close under the orientation rules
    Orient {
        graph: String,
        /// File of `A -> B` lines, or the statements inline (`;`-separated)
        #[arg(long)]
        bg: String,
    },
    /// b-possible descendants of a node set
    Possde(Reach),
    /// b-possible ancestors of a node set
    Possan(Reach),
    /// Covariate adjustment: check a set, find one, or list all
    Adjust(Adjust),
    /// Possible (joint) total effects from observational data
    Ida(Ida),
    /// Linear-SEM simulation study, written as CSV
    Simulate(Simulate),
}

#[derive(Args)]
struct Reach {
    graph: String,
    #[arg(long)]
    x: String,
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["z", "find", "list"])))]
struct Adjust {
    graph: String,
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    /// Candidate set to check (`""` or `{}` for the empty set)
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Print the canonical adjustment set, exit 1 if none exists
    #[arg(long)]
    find: bool,
    /// Print every valid adjustment set, smallest first
    #[arg(long)]
    list: bool,
    /// With --list, only inclusion-minimal sets
    #[arg(long, requires = "list")]
    minimal: bool,
    /// With --list, only sets of at most this size
    #[arg(long, requires = "list")]
    max_size: Option<usize>,
}

#[derive(Args)]
struct Ida {
    graph: String,
    /// One node, or several for joint effects
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    /// CSV with a header row of node names
    #[arg(long)]
    data: String,
    /// Print only the distinct effects
    #[arg(long)]
    unique: bool,
    #[arg(long, default_value_t = DEDUP_TOLERANCE)]
    tolerance: f64,
}

#[derive(Args)]
struct Simulate {
    /// TOML file with any of: preset, p, en, graphs, n, fractions, timing
    #[arg(long)]
    config: Option<String>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    en: Option<Vec<f64>>,
    #[arg(long)]
    graphs: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    fractions: Option<Vec<f64>>,
    /// Record per-row wall time (output is then not reproducible)
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    sequential: bool,
    /// Output file (stdout if absent)
    #[arg(long)]
    out: Option<String>,
}

/// A reason to stop with a nonzero exit code.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    pub fn input(kind: &'static str, message: String) -> Self {
        Failure { code: 2, kind, message }
    }

    pub fn domain(kind: &'static str, message: String) -> Self {
        Failure { code: 1, kind, message }
    }

    pub fn context(mut self, what: &str) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }
}

/// Text for stdout plus the exit code.
struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}: {}", f.kind, f.message.replace('\n', " "));
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> Result<Output, Failure> {
    match cmd {
        Command::Validate { graph } => validate(&read_graph(&graph)?),
        Command::Orient { graph, bg } => {
            let g = read_graph(&graph)?;
            let r = read_background(&bg, &g)?;
            orient(&g, &r)
        }
        Command::Possde(a) => reach(&a, true),
        Command::Possan(a) => reach(&a, false),
        Command::Adjust(a) => adjust(&a),
        Command::Ida(a) => ida(&a),
        Command::Simulate(a) => simulate(a),
    }
}

fn validate(g: &PdagGraph) -> Result<Output, Failure> {
    let r = validate_maximal_pdag(g);
    let text = format!(
        "acyclic: {}\nclosed: {}\nextendable: {}\nvalid: {}\n",
        r.acyclic,
        r.closed,
        r.extendable,
        r.is_valid()
    );
    Ok(Output { text, code: if r.is_valid() { 0 } else { 1 } })
}

fn orient(g: &PdagGraph, r: &BackgroundKnowledge) -> Result<Output, Failure> {
    match construct_max_pdag(g, r)? {
        OrientationOutcome::Success(h) => Ok(Output::ok(h.to_text())),
        OrientationOutcome::Failure { violating: (a, b), .. } => {
            let text = format!("FAIL: {}\n", describe_failure(g, r, a, b));
            Ok(Output { text, code: 1 })
        }
    }
}

/// Replays the requirements up to the violating one to say what it hit.
fn describe_failure(g: &PdagGraph, r: &BackgroundKnowledge, a: usize, b: usize) -> String {
    let edges = r.edges();
    let mut before = g.clone();
    for k in 0..edges.len() {
        let prefix = BackgroundKnowledge::from_edges(edges[..=k].to_vec()).expect("parsed requirements");
        match construct_max_pdag(g, &prefix) {
            Ok(OrientationOutcome::Success(h)) => before = h,
            _ => break,
        }
    }
    let (na, nb) = (g.name(a), g.name(b));
    match before.mark(a, b) {
        Mark::In => format!("{na} -> {nb} conflicts with {nb} -> {na}"),
        Mark::None => format!("{na} -> {nb} requires an edge between non-adjacent nodes"),
        _ => format!("{na} -> {nb} creates a directed cycle"),
    }
}

fn reach(a: &Reach, descendants: bool) -> Result<Output, Failure> {
    let g = read_graph(&a.graph)?;
    let xs = node_set(&g, &a.x)?;
    let r = if descendants { b_possible_descendants(&g, &xs)? } else { b_possible_ancestors(&g, &xs)? };
    Ok(Output::ok(format!("{}\n", g.format_set(&r.nodes))))
}

fn universe_cap() -> Result<usize, Failure> {
    match std::env::var(UNIVERSE_CAP_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::input("parameter", format!("{UNIVERSE_CAP_ENV}='{v}' is not a non-negative integer"))
        }),
        Err(_) => Ok(DEFAULT_UNIVERSE_CAP),
    }
}

fn adjust(a: &Adjust) -> Result<Output, Failure> {
    let g = read_graph(&a.graph)?;
    let xs = node_set(&g, &a.x)?;
    let ys = node_set(&g, &a.y)?;
    let mut q = AdjustmentQuery::new(&g, &xs, &ys)?;
    if let Some(z) = &a.z {
        let zs = node_set(&g, z)?;
        let v = q.verdict(&zs)?;
        let witness = v.witness.as_ref().map_or_else(|| "none".to_string(), |w| w.display(&g));
        let text = format!(
            "amenable: {}\nforbidden_ok: {}\nblocking_ok: {}\noverall: {}\nzero_effect: {}\nwitness: {}\n",
            v.amenable, v.forbidden_ok, v.blocking_ok, v.overall, v.zero_effect, witness
        );
        return Ok(Output::ok(text));
    }
    if a.find {
        return match q.adjust_set()? {
            Some(z) => Ok(Output::ok(format!("{}\n", g.format_set(&z)))),
            None => {
                let reason = if q.amenability().amenable { "no valid set" } else { "not amenable" };
                Err(Failure::domain("no_adjustment_set", reason.to_string()))
            }
        };
    }
    let opts = ListOptions { minimal_only: a.minimal, max_size: a.max_size, universe_cap: universe_cap()? };
    let mut text = String::new();
    for z in q.list(&opts)? {
        writeln!(text, "{}", g.format_set(&z)).expect("string write");
    }
    Ok(Output::ok(text))
}

fn ida(a: &Ida) -> Result<Output, Failure> {
    let g = read_graph(&a.graph)?;
    let xs = node_list(&g, &a.x)?;
    let y = g.require_node(a.y.trim())?;
    let data = read_data(&a.data)?;
    let m = if xs.len() == 1 {
        ida_effects_with(&g, xs[0], y, &data, Execution::Sequential)?
    } else {
        joint_ida_effects_with(&g, &xs, y, &data, Execution::Sequential)?
    };
    let render = |v: &[f64]| v.iter().map(|&e| format_g10(e)).collect::<Vec<_>>().join(",");
    let mut text = String::new();
    if a.unique {
        for v in m.unique(a.tolerance) {
            writeln!(text, "{}", render(&v)).expect("string write");
        }
        return Ok(Output::ok(text));
    }
    for e in &m.entries {
        let parents: Vec<String> = e.parents.iter().map(|p| g.format_set(p)).collect();
        let effect = match &e.effect {
            Ok(v) => render(v),
            Err(_) => "NA".to_string(),
        };
        writeln!(text, "{}\t{}", parents.join(";"), effect).expect("string write");
    }
    Ok(Output::ok(text))
}

fn simulate(a: Simulate) -> Result<Output, Failure> {
    let file = match &a.config {
        Some(path) => SimFile::read(path)?,
        None => SimFile::default(),
    };
    let preset = a.preset.clone().or(file.preset.clone()).unwrap_or_else(|| "desk".to_string());
    let mut cfg = SimFile::preset(&preset, a.seed)?;
    file.apply(&mut cfg);
    let flags = SimFile {
        preset: None,
        p: a.p,
        en: a.en,
        graphs: a.graphs,
        n: a.n,
        fractions: a.fractions,
        timing: a.timing.then_some(true),
    };
    flags.apply(&mut cfg);
    cfg.validate()?;
    let exec = if a.sequential { Execution::Sequential } else { Execution::Parallel };
    let rows = run_simulation(&cfg, exec)?;
    match &a.out {
        Some(path) => {
            let f = File::create(path).map_err(|e| Failure::input("io", format!("{path}: {e}")))?;
            let mut w = BufWriter::new(f);
            write_csv(&rows, &mut w)?;
            w.flush().map_err(|e| Failure::input("io", format!("{path}: {e}")))?;
            Ok(Output::ok(String::new()))
        }
        None => {
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf)?;
            Ok(Output::ok(String::from_utf8(buf).expect("csv output is utf-8")))
        }
    }
}
