// SPDX-License-Identifier: MIT
//! Consistent extensions of a PDAG to a DAG, exhaustive listing of the DAGs a
//! maximal PDAG represents, and the "represents" relation itself.

use crate::graph::{Mark, NodeId, PdagGraph};
use crate::meek::{close_in_place, ClosureOrder};

pub const DEFAULT_DAG_LIMIT: usize = 100_000;

/// True iff `g` represents `h`: identical skeletons, identical unshielded
/// colliders, and every directed edge of `g` present with the same
/// orientation in `h`.
pub fn represents(g: &PdagGraph, h: &PdagGraph) -> bool {
    if !g.same_skeleton(h) {
        return false;
    }
    if g.directed_edges().into_iter().any(|(a, b)| !h.directed(a, b)) {
        return false;
    }
    g.unshielded_colliders() == h.unshielded_colliders()
}

/// One DAG represented by `g`, found by repeatedly removing a sink whose
/// undirected neighbors are adjacent to all its other neighbors (lowest index
/// first). `None` when no such DAG exists.
pub fn consistent_extension(g: &PdagGraph) -> Option<PdagGraph> {
    if g.has_directed_cycle() {
        return None;
    }
    let n = g.n();
    let mut out = g.clone();
    let mut alive = vec![true; n];
    for _ in 0..n {
        let x = (0..n).find(|&x| alive[x] && removable(g, &alive, x))?;
        for (y, &live) in alive.iter().enumerate() {
            if live && g.mark(x, y) == Mark::Undirected {
                out.set_directed(y, x);
            }
        }
        alive[x] = false;
    }
    debug_assert!(out.is_dag());
    Some(out)
}

fn removable(g: &PdagGraph, alive: &[bool], x: NodeId) -> bool {
    let adj: Vec<NodeId> = (0..g.n()).filter(|&v| alive[v] && g.adjacent(x, v)).collect();
    if adj.iter().any(|&v| g.mark(x, v) == Mark::Out) {
        return false;
    }
    adj.iter().filter(|&&y| g.mark(x, y) == Mark::Undirected).all(|&y| adj.iter().all(|&z| z == y || g.adjacent(y, z)))
}

/// DAGs represented by a graph, in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DagList {
    pub dags: Vec<PdagGraph>,
    pub truncated: bool,
}

impl DagList {
    pub fn len(&self) -> usize {
        self.dags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dags.is_empty()
    }
}

/// Lists every DAG represented by `g`, at most `limit` of them (`None` means
/// unbounded). Branches on the first undirected edge in canonical order, trying
/// `lo -> hi` before `hi -> lo`, re-closing after each choice.
pub fn enumerate_dags(g: &PdagGraph, limit: Option<usize>) -> DagList {
    let mut out = DagList { dags: Vec::new(), truncated: false };
    if g.has_directed_cycle() {
        return out;
    }
    let cap = limit.unwrap_or(usize::MAX);
    let order = ClosureOrder::default();
    let mut stack = vec![g.clone()];
    while let Some(h) = stack.pop() {
        let Some(&(u, v)) = h.undirected_edges().first() else {
            if represents(g, &h) {
                if out.dags.len() == cap {
                    out.truncated = true;
                    break;
                }
                out.dags.push(h);
            }
            continue;
        };
        // pushed in reverse so that u -> v is explored first
        for (a, b) in [(v, u), (u, v)] {
            let mut next = h.clone();
            next.set_directed(a, b);
            close_in_place(&mut next, &order);
            if !next.has_directed_cycle() {
                stack.push(next);
            }
        }
    }
    out
}
