// SPDX-License-Identifier: MIT
// Independent oracles and instance generators shared by the integration tests.
#![allow(dead_code)]

use mpdagkit::extension::represents;
use mpdagkit::graph::EdgeState;
use mpdagkit::meek::{construct_max_pdag, cpdag_of, BackgroundKnowledge};
use mpdagkit::sem::{add_background_fraction, random_dag};
use mpdagkit::{NodeId, NodeSet, PdagGraph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random maximal PDAG on `p` nodes together with a DAG it represents: a
/// random DAG's CPDAG with a random fraction of true orientations added.
pub fn random_instance(p: usize, rng: &mut ChaCha8Rng) -> (PdagGraph, PdagGraph) {
    let en = rng.random_range(1.0..=((p - 1) as f64).min(4.0));
    let m = random_dag(p, en, rng).unwrap();
    let dag = m.dag().clone();
    let cpdag = cpdag_of(&dag).unwrap();
    let fraction = [0.0, 0.0, 0.2, 0.4, 0.6, 1.0][rng.random_range(0..6)];
    let g = add_background_fraction(&cpdag, &dag, fraction, rng).unwrap();
    (g, dag)
}

/// Random graph with arbitrary edge states (not necessarily acyclic).
pub fn random_graph(p: usize, rng: &mut ChaCha8Rng) -> PdagGraph {
    let mut g = PdagGraph::with_numbered_nodes(p);
    for i in 0..p {
        for j in (i + 1)..p {
            match rng.random_range(0..5) {
                0 => g.set_undirected(i, j),
                1 => g.set_directed(i, j),
                2 => g.set_directed(j, i),
                _ => {}
            }
        }
    }
    g
}

/// Background knowledge from the orientations of `dag` on a random subset of
/// the undirected edges of `g`, in random order.
pub fn random_true_knowledge(g: &PdagGraph, dag: &PdagGraph, rng: &mut ChaCha8Rng) -> BackgroundKnowledge {
    let mut edges = g.undirected_edges();
    edges.shuffle(rng);
    let k = rng.random_range(0..=edges.len());
    let mut r = BackgroundKnowledge::new();
    for &(a, b) in &edges[..k] {
        if dag.directed(a, b) {
            r.push(a, b);
        } else {
            r.push(b, a);
        }
    }
    r
}

/// Every DAG represented by `g`, by trying all orientations of its undirected
/// edges.
pub fn brute_force_dags(g: &PdagGraph) -> Vec<PdagGraph> {
    let und = g.undirected_edges();
    assert!(und.len() <= 16, "too many undirected edges for brute force");
    let mut out = Vec::new();
    for mask in 0..1u32 << und.len() {
        let mut h = g.clone();
        for (k, &(a, b)) in und.iter().enumerate() {
            if mask >> k & 1 == 1 {
                h.set_directed(a, b);
            } else {
                h.set_directed(b, a);
            }
        }
        if !h.has_directed_cycle() && represents(g, &h) {
            out.push(h);
        }
    }
    out
}

fn children_of(d: &PdagGraph, v: NodeId) -> Vec<NodeId> {
    (0..d.n()).filter(|&w| d.state(v, w) != EdgeState::Absent && d.directed(v, w)).collect()
}

/// Descendants in a DAG by plain depth-first search, including the start set.
pub fn dag_descendants(d: &PdagGraph, from: &NodeSet) -> NodeSet {
    let mut seen = from.clone();
    let mut stack: Vec<NodeId> = from.iter().copied().collect();
    while let Some(v) = stack.pop() {
        for w in children_of(d, v) {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen
}

/// Calls `visit` on every simple path starting in `xs` whose other nodes are
/// outside `xs` and whose last node is in `ys`.
pub fn proper_paths(g: &PdagGraph, xs: &NodeSet, ys: &NodeSet, visit: &mut dyn FnMut(&[NodeId])) {
    fn rec(g: &PdagGraph, xs: &NodeSet, ys: &NodeSet, path: &mut Vec<NodeId>, visit: &mut dyn FnMut(&[NodeId])) {
        let cur = *path.last().unwrap();
        for w in 0..g.n() {
            if !g.adjacent(cur, w) || xs.contains(&w) || path.contains(&w) {
                continue;
            }
            path.push(w);
            if ys.contains(&w) {
                visit(path);
            }
            rec(g, xs, ys, path, visit);
            path.pop();
        }
    }
    for &x in xs {
        let mut path = vec![x];
        rec(g, xs, ys, &mut path, visit);
    }
}

fn is_directed_path(d: &PdagGraph, p: &[NodeId]) -> bool {
    p.windows(2).all(|w| d.directed(w[0], w[1]))
}

/// Path-level blocking in a DAG.
pub fn path_blocked(d: &PdagGraph, p: &[NodeId], zs: &NodeSet) -> bool {
    for i in 1..p.len() - 1 {
        let collider = d.directed(p[i - 1], p[i]) && d.directed(p[i + 1], p[i]);
        if collider {
            if dag_descendants(d, &[p[i]].into()).is_disjoint(zs) {
                return true;
            }
        } else if zs.contains(&p[i]) {
            return true;
        }
    }
    false
}

/// d-separation by enumerating every path between the two sets.
pub fn dsep_by_paths(d: &PdagGraph, xs: &NodeSet, ys: &NodeSet, zs: &NodeSet) -> bool {
    let mut open = false;
    let all_x_side: NodeSet = xs.clone();
    // paths may pass through other members of xs, so do not use proper_paths
    fn rec(d: &PdagGraph, ys: &NodeSet, zs: &NodeSet, path: &mut Vec<NodeId>, open: &mut bool) {
        if *open {
            return;
        }
        let cur = *path.last().unwrap();
        for w in 0..d.n() {
            if !d.adjacent(cur, w) || path.contains(&w) {
                continue;
            }
            path.push(w);
            if ys.contains(&w) && !path_blocked(d, path, zs) {
                *open = true;
            }
            rec(d, ys, zs, path, open);
            path.pop();
        }
    }
    for &x in &all_x_side {
        let mut path = vec![x];
        rec(d, ys, zs, &mut path, &mut open);
    }
    !open
}

/// Generalized adjustment criterion in a DAG, by path enumeration: no member
/// of `zs` descends from a non-treatment node on a proper causal path, and
/// every proper non-causal path is blocked.
pub fn dag_adjustment(d: &PdagGraph, xs: &NodeSet, ys: &NodeSet, zs: &NodeSet) -> bool {
    let mut on_causal = NodeSet::new();
    let mut non_causal_open = false;
    proper_paths(d, xs, ys, &mut |p| {
        if is_directed_path(d, p) {
            on_causal.extend(p[1..].iter().copied());
        } else if !path_blocked(d, p, zs) {
            non_causal_open = true;
        }
    });
    let forb = dag_descendants(d, &on_causal);
    forb.is_disjoint(zs) && !non_causal_open
}

/// All subsets of `universe`, smallest first.
pub fn subsets(universe: &[NodeId]) -> Vec<NodeSet> {
    let mut out: Vec<NodeSet> = (0..1u32 << universe.len())
        .map(|m| universe.iter().enumerate().filter(|(k, _)| m >> k & 1 == 1).map(|(_, &v)| v).collect())
        .collect();
    out.sort_by_key(|s: &NodeSet| s.len());
    out
}

pub fn set(vs: &[NodeId]) -> NodeSet {
    vs.iter().copied().collect()
}

/// Runs `construct_max_pdag`, returning the graph on success.
pub fn orient(g: &PdagGraph, r: &BackgroundKnowledge) -> Option<PdagGraph> {
    construct_max_pdag(g, r).unwrap().into_graph()
}
