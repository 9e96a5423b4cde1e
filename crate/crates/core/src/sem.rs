// SPDX-License-Identifier: MIT
//! Linear structural equation models, sampling, true effects, graded
//! background knowledge and the identifiability / unique-estimate simulation.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::adjustment::AdjustmentQuery;
use crate::error::{Error, Result};
use crate::graph::{GraphDocument, NodeId, NodeSet, PdagGraph};
use crate::ida::{ida_effects_with, total_effects, DEDUP_TOLERANCE};
use crate::meek::{construct_max_pdag_unchecked, cpdag_of, BackgroundKnowledge, ClosureOrder};
use crate::par::{map_ordered, Execution};
use crate::regression::Dataset;

/// A DAG with edge coefficients `coefficients[(child, parent)]` and Gaussian
/// noise scales.
#[derive(Debug, Clone, PartialEq)]
pub struct SemModel {
    dag: PdagGraph,
    coefficients: DMatrix<f64>,
    noise: Vec<f64>,
}

impl SemModel {
    pub fn new(dag: PdagGraph, weights: &BTreeMap<(NodeId, NodeId), f64>, noise: Vec<f64>) -> Result<Self> {
        if !dag.is_dag() {
            return Err(Error::NotDag("a structural model needs a DAG".into()));
        }
        let n = dag.n();
        if noise.len() != n || noise.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
            return Err(Error::Parameter("need one positive noise scale per node".into()));
        }
        let mut coefficients = DMatrix::zeros(n, n);
        for (&(a, b), &w) in weights {
            if !dag.directed(a, b) {
                return Err(Error::Parameter(format!(
                    "weight on {} -> {}, which is not an edge",
                    dag.name(a),
                    dag.name(b)
                )));
            }
            coefficients[(b, a)] = w;
        }
        for (a, b) in dag.directed_edges() {
            if !weights.contains_key(&(a, b)) {
                return Err(Error::Parameter(format!("missing weight on {} -> {}", dag.name(a), dag.name(b))));
            }
        }
        Ok(SemModel { dag, coefficients, noise })
    }

    /// Model from a weighted graph file, with unit noise scales.
    pub fn from_document(doc: &GraphDocument) -> Result<Self> {
        let n = doc.graph.n();
        SemModel::new(doc.graph.clone(), &doc.weights, vec![1.0; n])
    }

    pub fn dag(&self) -> &PdagGraph {
        &self.dag
    }

    pub fn coefficient(&self, from: NodeId, to: NodeId) -> f64 {
        self.coefficients[(to, from)]
    }

    pub fn noise(&self) -> &[f64] {
        &self.noise
    }
}

fn check_en(p: usize, en: f64) -> Result<()> {
    if p < 2 {
        return Err(Error::Parameter(format!("need at least 2 nodes, got {p}")));
    }
    if !(en > 0.0 && en <= (p - 1) as f64) {
        return Err(Error::Parameter(format!("expected neighborhood size {en} outside (0, {}]", p - 1)));
    }
    Ok(())
}

/// Nodes `V1..Vp` in topological order; each forward pair is an edge with
/// probability `en / (p - 1)`, weight uniform on `[-1, -0.1] ∪ [0.1, 1]`,
/// standard normal noise.
pub fn random_dag<R: Rng + ?Sized>(p: usize, en: f64, rng: &mut R) -> Result<SemModel> {
    check_en(p, en)?;
    let prob = en / (p - 1) as f64;
    let mut dag = PdagGraph::with_numbered_nodes(p);
    let mut weights = BTreeMap::new();
    for i in 0..p {
        for j in (i + 1)..p {
            if rng.random::<f64>() < prob {
                let mag = rng.random_range(0.1..=1.0);
                let w = if rng.random::<bool>() { mag } else { -mag };
                dag.set_directed(i, j);
                weights.insert((i, j), w);
            }
        }
    }
    SemModel::new(dag, &weights, vec![1.0; p])
}

/// `n` samples, columns in node order.
pub fn sample_data<R: Rng + ?Sized>(m: &SemModel, n: usize, rng: &mut R) -> Dataset {
    let p = m.dag.n();
    let order = m.dag.topological_order().expect("model graph is a DAG");
    let parents: Vec<Vec<NodeId>> = (0..p).map(|v| m.dag.parents(v).collect()).collect();
    let mut values = DMatrix::zeros(n, p);
    for i in 0..n {
        for &v in &order {
            let e: f64 = StandardNormal.sample(rng);
            let mut x = m.noise[v] * e;
            for &u in &parents[v] {
                x += m.coefficients[(v, u)] * values[(i, u)];
            }
            values[(i, v)] = x;
        }
    }
    Dataset::new(m.dag.names().to_vec(), values).expect("names match columns")
}

/// Sum over directed paths of coefficient products, per intervention node.
pub fn true_total_effect(m: &SemModel, xs: &[NodeId], y: NodeId) -> Result<Vec<f64>> {
    if xs.contains(&y) {
        return Err(Error::Precondition(format!("{} is both intervention and outcome", m.dag.name(y))));
    }
    if let Some(&v) = xs.iter().chain([&y]).find(|&&v| v >= m.dag.n()) {
        return Err(Error::UnknownNode(format!("#{v}")));
    }
    Ok(total_effects(&m.coefficients, xs, y))
}

/// Orients the first `k` edges of `edges` as in `dag`, then closes.
fn orient_prefix(cpdag: &PdagGraph, dag: &PdagGraph, edges: &[(NodeId, NodeId)], k: usize) -> PdagGraph {
    let mut bg = BackgroundKnowledge::new();
    for &(a, b) in &edges[..k] {
        if dag.directed(a, b) {
            bg.push(a, b);
        } else {
            bg.push(b, a);
        }
    }
    construct_max_pdag_unchecked(cpdag, &bg, &ClosureOrder::default())
        .into_graph()
        .expect("knowledge taken from a DAG of the class cannot fail")
}

fn check_pair(cpdag: &PdagGraph, dag: &PdagGraph) -> Result<()> {
    if cpdag_of(dag)? != *cpdag {
        return Err(Error::Precondition("graph is not the CPDAG of the given DAG".into()));
    }
    Ok(())
}

/// Replaces `round(fraction * u)` of the `u` undirected edges, chosen
/// uniformly, by their orientation in `dag` and closes the result.
pub fn add_background_fraction<R: Rng + ?Sized>(
    cpdag: &PdagGraph,
    dag: &PdagGraph,
    fraction: f64,
    rng: &mut R,
) -> Result<PdagGraph> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::Parameter(format!("fraction {fraction} outside [0, 1]")));
    }
    check_pair(cpdag, dag)?;
    let mut edges = cpdag.undirected_edges();
    edges.shuffle(rng);
    let k = (fraction * edges.len() as f64).round() as usize;
    Ok(orient_prefix(cpdag, dag, &edges, k))
}

fn components(g: &PdagGraph) -> Vec<usize> {
    let n = g.n();
    let mut comp = vec![usize::MAX; n];
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = s;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for w in g.adjacents(v).collect::<Vec<_>>() {
                if comp[w] == usize::MAX {
                    comp[w] = s;
                    stack.push(w);
                }
            }
        }
    }
    comp
}

/// Uniform `x`, then uniform `y` in the skeleton component of `x`, excluding
/// `x` and its parents; `x` is redrawn when no such `y` exists.
pub fn choose_xy<R: Rng + ?Sized>(dag: &PdagGraph, rng: &mut R) -> Result<(NodeId, NodeId)> {
    if dag.edge_count() == 0 {
        return Err(Error::Parameter("graph has no edges, so no connected pair".into()));
    }
    let comp = components(dag);
    loop {
        let x = rng.random_range(0..dag.n());
        let pa: NodeSet = dag.parents(x).collect();
        let cands: Vec<NodeId> = (0..dag.n()).filter(|&v| v != x && comp[v] == comp[x] && !pa.contains(&v)).collect();
        if let Some(&y) = cands.choose(rng) {
            return Ok((x, y));
        }
    }
}

/// A random maximal PDAG of a random DAG together with that DAG: the DAG's
/// CPDAG with a uniformly drawn fraction of its undirected edges oriented.
pub fn random_maximal_pdag<R: Rng + ?Sized>(p: usize, en: f64, rng: &mut R) -> Result<(PdagGraph, PdagGraph)> {
    let m = random_dag(p, en, rng)?;
    let cpdag = cpdag_of(&m.dag)?;
    let fraction = rng.random::<f64>();
    let g = add_background_fraction(&cpdag, &m.dag, fraction, rng)?;
    Ok((g, m.dag))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub ps: Vec<usize>,
    pub ens: Vec<f64>,
    pub graphs: usize,
    pub n: usize,
    pub fractions: Vec<f64>,
    pub seed: u64,
    /// Record wall time per row; off keeps the output reproducible.
    pub timing: bool,
}

fn fraction_grid() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

impl SimConfig {
    /// p ∈ {10, 20}, E[N] ∈ {3, 5}, 200 graphs per setting, n = 200.
    pub fn desk(seed: u64) -> Self {
        SimConfig {
            ps: vec![10, 20],
            ens: vec![3.0, 5.0],
            graphs: 200,
            n: 200,
            fractions: fraction_grid(),
            seed,
            timing: false,
        }
    }

    /// p ∈ {20, 30, …, 100}, E[N] ∈ {3, …, 10}, 278 graphs per setting
    /// (about 20 000 in total), n = 200.
    pub fn full(seed: u64) -> Self {
        SimConfig {
            ps: (2..=10).map(|k| k * 10).collect(),
            ens: (3..=10).map(f64::from).collect(),
            graphs: 278,
            n: 200,
            fractions: fraction_grid(),
            seed,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ps.is_empty() || self.ens.is_empty() || self.fractions.is_empty() {
            return Err(Error::Parameter("empty grid".into()));
        }
        for &p in &self.ps {
            for &en in &self.ens {
                check_en(p, en)?;
            }
        }
        if self.fractions.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Parameter("fractions must be sorted".into()));
        }
        if self.fractions.iter().any(|f| !(0.0..=1.0).contains(f)) {
            return Err(Error::Parameter("fractions must lie in [0, 1]".into()));
        }
        let max_p = *self.ps.iter().max().expect("non-empty");
        if self.n <= max_p {
            return Err(Error::Parameter(format!("sample size {} must exceed p = {max_p}", self.n)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimRow {
    /// Sub-seed of the replicate the row belongs to.
    pub seed: u64,
    pub p: usize,
    pub en: f64,
    pub fraction: f64,
    pub amenable: bool,
    pub identifiable: bool,
    pub true_effect: f64,
    pub n_tuples: usize,
    pub n_unique: usize,
    pub ms: f64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of replicate `rep` of setting `setting`:
/// `splitmix64(splitmix64(splitmix64(master) ^ setting) ^ rep)`.
pub fn replicate_seed(master: u64, setting: usize, rep: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ setting as u64) ^ rep as u64)
}

/// One replicate: a random model, its CPDAG, one `(x, y)` pair and one data
/// set. The undirected edges are shuffled once and each fraction orients a
/// prefix of that order, so the graphs of a replicate are nested.
pub fn run_replicate(p: usize, en: f64, n: usize, fractions: &[f64], seed: u64, timing: bool) -> Result<Vec<SimRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = loop {
        let m = random_dag(p, en, &mut rng)?;
        if m.dag.edge_count() > 0 {
            break m;
        }
    };
    let cpdag = cpdag_of(&m.dag)?;
    let (x, y) = choose_xy(&m.dag, &mut rng)?;
    let data = sample_data(&m, n, &mut rng);
    let true_effect = true_total_effect(&m, &[x], y)?[0];
    let mut edges = cpdag.undirected_edges();
    edges.shuffle(&mut rng);
    let (xs, ys): (NodeSet, NodeSet) = ([x].into(), [y].into());
    let mut rows = Vec::with_capacity(fractions.len());
    for &fraction in fractions {
        let start = Instant::now();
        let k = (fraction * edges.len() as f64).round() as usize;
        let g = orient_prefix(&cpdag, &m.dag, &edges, k);
        let mut q = AdjustmentQuery::new(&g, &xs, &ys)?;
        let amenable = q.amenability().amenable;
        let identifiable = q.adjust_set()?.is_some();
        let effects = ida_effects_with(&g, x, y, &data, Execution::Sequential)?;
        let ms = if timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
        rows.push(SimRow {
            seed,
            p,
            en,
            fraction,
            amenable,
            identifiable,
            true_effect,
            n_tuples: effects.len(),
            n_unique: effects.n_unique(DEDUP_TOLERANCE),
            ms,
        });
    }
    Ok(rows)
}

/// Every setting × replicate × fraction, in setting, replicate, fraction order.
pub fn run_simulation(cfg: &SimConfig, exec: Execution) -> Result<Vec<SimRow>> {
    cfg.validate()?;
    let mut jobs = Vec::new();
    let mut setting = 0;
    for &p in &cfg.ps {
        for &en in &cfg.ens {
            for rep in 0..cfg.graphs {
                jobs.push((p, en, replicate_seed(cfg.seed, setting, rep)));
            }
            setting += 1;
        }
    }
    let results =
        map_ordered(jobs, exec, |(p, en, seed)| run_replicate(p, en, cfg.n, &cfg.fractions, seed, cfg.timing));
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

pub const CSV_HEADER: &str = "seed,p,en,fraction,amenable,identifiable,true_effect,n_tuples,n_unique,ms";

/// `%.10g`-style rendering: 10 significant digits, trailing zeros dropped,
/// scientific notation outside `[1e-4, 1e10)`.
pub fn format_g10(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.9e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..10).contains(&exp) {
        let mant = trim_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mant}e{sign}{:02}", exp.abs());
    }
    let decimals = (9 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_csv<W: Write>(rows: &[SimRow], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.seed,
            r.p,
            format_g10(r.en),
            format_g10(r.fraction),
            r.amenable,
            r.identifiable,
            format_g10(r.true_effect),
            r.n_tuples,
            r.n_unique,
            format_g10(r.ms)
        )?;
    }
    Ok(())
}

/// Mean of `f` over the rows at each fraction, in fraction order.
pub fn mean_by_fraction(rows: &[SimRow], f: impl Fn(&SimRow) -> f64) -> Vec<(f64, f64)> {
    let mut acc: Vec<(f64, f64, usize)> = Vec::new();
    for r in rows {
        match acc.iter_mut().find(|(fr, _, _)| *fr == r.fraction) {
            Some(e) => {
                e.1 += f(r);
                e.2 += 1;
            }
            None => acc.push((r.fraction, f(r), 1)),
        }
    }
    acc.sort_by(|a, b| a.0.total_cmp(&b.0));
    acc.into_iter().map(|(fr, s, c)| (fr, s / c as f64)).collect()
}
