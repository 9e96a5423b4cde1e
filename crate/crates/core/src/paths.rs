// SPDX-License-Identifier: MIT
//! b-possibly causal paths and the b-possible descendant / ancestor sets.
//!
//! A path is b-possibly causal when no pair of its nodes, consecutive or not,
//! carries a directed edge pointing back towards the start. Reachability along
//! such paths is computed by a search over `(previous, current)` states that
//! only follows unshielded steps; [`oracle_reach`] is the exhaustive
//! path-enumeration reference it is tested against.

use crate::error::{Error, Result};
use crate::graph::{Mark, NodeId, NodePath, NodeSet, PdagGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathVerdict {
    BPossiblyCausal,
    BNonCausal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathClassification {
    pub verdict: PathVerdict,
    /// Positions `(i, j)`, `i < j`, with `V_i <- V_j` in the graph.
    pub witness: Option<(usize, usize)>,
}

impl PathClassification {
    pub fn is_b_possibly_causal(&self) -> bool {
        self.verdict == PathVerdict::BPossiblyCausal
    }
}

/// Classifies `p`, reporting the first backward pair in `(i, j)` order.
pub fn classify_path(g: &PdagGraph, p: &NodePath) -> PathClassification {
    let nodes = p.nodes();
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            if g.directed(nodes[j], nodes[i]) {
                return PathClassification { verdict: PathVerdict::BNonCausal, witness: Some((i, j)) };
            }
        }
    }
    PathClassification { verdict: PathVerdict::BPossiblyCausal, witness: None }
}

/// Every consecutive triple is unshielded.
pub fn is_unshielded(g: &PdagGraph, p: &NodePath) -> bool {
    p.nodes().windows(3).all(|w| !g.adjacent(w[0], w[2]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Descendants,
    Ancestors,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachSet {
    pub nodes: NodeSet,
    pub query: NodeSet,
    pub direction: Direction,
}

impl ReachSet {
    pub fn contains(&self, v: NodeId) -> bool {
        self.nodes.contains(&v)
    }
}

fn check_nodes(g: &PdagGraph, xs: &NodeSet) -> Result<()> {
    match xs.iter().find(|&&v| v >= g.n()) {
        Some(v) => Err(Error::UnknownNode(format!("#{v}"))),
        None => Ok(()),
    }
}

/// Copy of `g` with every directed edge reversed.
pub fn reverse_directed(g: &PdagGraph) -> PdagGraph {
    let mut r = g.clone();
    for (a, b) in g.directed_edges() {
        r.set_directed(b, a);
    }
    r
}

/// Nodes reachable from `xs` by b-possibly causal paths in `g`, plus `xs`.
pub(crate) fn b_poss_de(g: &PdagGraph, xs: &NodeSet) -> NodeSet {
    let n = g.n();
    // state (prev, cur) at slot (prev + 1) * n + cur; prev = none at row 0
    let mut seen = vec![false; (n + 1) * n];
    let mut stack: Vec<(Option<NodeId>, NodeId)> = Vec::new();
    let mut out = xs.clone();
    for &x in xs {
        seen[x] = true;
        stack.push((None, x));
    }
    while let Some((prev, cur)) = stack.pop() {
        for w in 0..n {
            if w == cur || Some(w) == prev {
                continue;
            }
            if !matches!(g.mark(cur, w), Mark::Out | Mark::Undirected) {
                continue;
            }
            if let Some(p) = prev {
                if g.adjacent(p, w) {
                    continue;
                }
            }
            let slot = (cur + 1) * n + w;
            if !seen[slot] {
                seen[slot] = true;
                out.insert(w);
                stack.push((Some(cur), w));
            }
        }
    }
    out
}

pub fn b_possible_descendants(g: &PdagGraph, xs: &NodeSet) -> Result<ReachSet> {
    check_nodes(g, xs)?;
    Ok(ReachSet { nodes: b_poss_de(g, xs), query: xs.clone(), direction: Direction::Descendants })
}

pub fn b_possible_ancestors(g: &PdagGraph, xs: &NodeSet) -> Result<ReachSet> {
    check_nodes(g, xs)?;
    Ok(ReachSet { nodes: b_poss_de(&reverse_directed(g), xs), query: xs.clone(), direction: Direction::Ancestors })
}

pub const DEFAULT_ORACLE_LIMIT: usize = 12;

/// Reference semantics of the b-possible descendant / ancestor sets: every
/// simple path from `xs` is enumerated and classified. Prefixes that already
/// contain a backward pair are pruned, since no extension of them can be
/// b-possibly causal.
pub fn oracle_reach(g: &PdagGraph, xs: &NodeSet, direction: Direction) -> Result<ReachSet> {
    oracle_reach_with_limit(g, xs, direction, DEFAULT_ORACLE_LIMIT)
}

pub fn oracle_reach_with_limit(g: &PdagGraph, xs: &NodeSet, direction: Direction, limit: usize) -> Result<ReachSet> {
    check_nodes(g, xs)?;
    if g.n() > limit {
        return Err(Error::SizeGuard { nodes: g.n(), limit });
    }
    let h = match direction {
        Direction::Descendants => g.clone(),
        Direction::Ancestors => reverse_directed(g),
    };
    let mut nodes = xs.clone();
    for &x in xs {
        let mut path = vec![x];
        extend_paths(&h, &mut path, &mut |p| {
            let path = NodePath::new_unchecked(p.to_vec());
            if classify_path(&h, &path).is_b_possibly_causal() {
                nodes.insert(path.last());
            }
        });
    }
    Ok(ReachSet { nodes, query: xs.clone(), direction })
}

/// Depth-first extension of `path` over simple paths with no backward pair,
/// calling `visit` on every path of two or more nodes.
pub(crate) fn extend_paths(g: &PdagGraph, path: &mut Vec<NodeId>, visit: &mut dyn FnMut(&[NodeId])) {
    let cur = *path.last().expect("non-empty path");
    for w in g.adjacents(cur).collect::<Vec<_>>() {
        if path.contains(&w) || path.iter().any(|&v| g.directed(w, v)) {
            continue;
        }
        path.push(w);
        visit(path);
        extend_paths(g, path, visit);
        path.pop();
    }
}
