// SPDX-License-Identifier: MIT
//! Covariate adjustment in maximal PDAGs.
//!
//! The production routes only need b-possible descendant searches and one
//! consistent extension:
//!
//! - a proper b-possibly causal path from `x` that starts with `x - c`
//!   continues with a b-possibly causal path from `c` avoiding the treatments
//!   and the parents of `x`, so amenability takes one reachability search per
//!   sibling in an induced subgraph;
//! - in an amenable graph the forbidden set is the b-possible descendant set
//!   of the nodes that are directed descendants of the treatments and reach
//!   an outcome along a b-possibly causal path. b-possible descendance is not
//!   transitive, so descendants of the second path nodes alone do not suffice;
//! - blocking is checked by d-separation in one DAG of the class after removing
//!   the first edge of every proper causal path.
//!
//! [`reference`] holds the path-enumeration semantics these are tested against.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::extension::consistent_extension;
use crate::graph::{NodeId, NodePath, NodeSet, PdagGraph};
use crate::paths::{b_poss_de, classify_path, reverse_directed, DEFAULT_ORACLE_LIMIT};

pub const DEFAULT_UNIVERSE_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenSet {
    pub nodes: NodeSet,
    /// Nodes on proper b-possibly causal paths from the treatments to the
    /// outcomes whose b-possible descendants make up `nodes`.
    pub on_path: NodeSet,
    /// False only for large non-amenable graphs, where `nodes` may miss some
    /// members. The criterion fails on amenability there regardless.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Path(NodePath),
    Node(NodeId),
}

impl Witness {
    pub fn display(&self, g: &PdagGraph) -> String {
        match self {
            Witness::Path(p) => p.display(g),
            Witness::Node(v) => g.name(*v).to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Amenability {
    pub amenable: bool,
    /// A proper b-possibly causal path starting with an undirected edge.
    pub witness: Option<NodePath>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockingCheck {
    pub blocked: bool,
    /// A proper b-non-causal definite status path left open by `zs`.
    pub witness: Option<NodePath>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjustmentVerdict {
    pub amenable: bool,
    pub forbidden_ok: bool,
    /// Only evaluated when the first two conditions hold; `false` otherwise.
    pub blocking_ok: bool,
    pub overall: bool,
    /// No outcome node is a b-possible descendant of the treatments.
    pub zero_effect: bool,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ListOptions {
    pub minimal_only: bool,
    pub max_size: Option<usize>,
    pub universe_cap: usize,
}

impl Default for ListOptions {
    fn default() -> Self {
        ListOptions { minimal_only: false, max_size: None, universe_cap: DEFAULT_UNIVERSE_CAP }
    }
}

fn check_disjoint(g: &PdagGraph, sets: &[(&str, &NodeSet)]) -> Result<()> {
    for (name, s) in sets {
        if let Some(v) = s.iter().find(|&&v| v >= g.n()) {
            return Err(Error::UnknownNode(format!("#{v}")));
        }
        if s.is_empty() && (*name == "x" || *name == "y") {
            return Err(Error::Precondition(format!("{name} set is empty")));
        }
    }
    for (i, (na, a)) in sets.iter().enumerate() {
        for (nb, b) in &sets[i + 1..] {
            if let Some(&v) = a.intersection(b).next() {
                return Err(Error::Precondition(format!("{na} and {nb} sets overlap at {}", g.name(v))));
            }
        }
    }
    Ok(())
}

/// Per-(treatment, outcome) state shared by every query about candidate sets.
#[derive(Debug, Clone)]
pub struct AdjustmentQuery<'g> {
    g: &'g PdagGraph,
    xs: NodeSet,
    ys: NodeSet,
    amenability: Amenability,
    forbidden: Option<ForbiddenSet>,
    zero_effect: bool,
    // extension DAG with the first edges of proper causal paths removed
    backdoor: Option<PdagGraph>,
}

impl<'g> AdjustmentQuery<'g> {
    pub fn new(g: &'g PdagGraph, xs: &NodeSet, ys: &NodeSet) -> Result<Self> {
        check_disjoint(g, &[("x", xs), ("y", ys)])?;
        let amenability = match undirected_start(g, xs, ys) {
            None => Amenability { amenable: true, witness: None },
            Some((x, c)) => Amenability { amenable: false, witness: non_amenable_witness(g, xs, ys, x, c) },
        };
        let zero_effect = b_poss_de(g, xs).is_disjoint(ys);
        Ok(AdjustmentQuery {
            g,
            xs: xs.clone(),
            ys: ys.clone(),
            amenability,
            forbidden: None,
            zero_effect,
            backdoor: None,
        })
    }

    pub fn amenability(&self) -> &Amenability {
        &self.amenability
    }

    /// Computed on first use. Non-amenable graphs with more than
    /// [`DEFAULT_ORACLE_LIMIT`] nodes get a possibly incomplete set.
    pub fn forbidden(&mut self) -> Result<&ForbiddenSet> {
        if self.forbidden.is_none() {
            let (g, xs, ys) = (self.g, &self.xs, &self.ys);
            let f = if self.amenability.amenable {
                let on_path = directed_on_path(g, xs, ys);
                ForbiddenSet { nodes: b_poss_de(g, &on_path), on_path, exact: true }
            } else if g.n() <= DEFAULT_ORACLE_LIMIT {
                reference::forbidden_set(g, xs, ys)?
            } else {
                let on_path = directed_on_path(g, xs, ys);
                ForbiddenSet { nodes: b_poss_de(g, &on_path), on_path, exact: false }
            };
            self.forbidden = Some(f);
        }
        Ok(self.forbidden.as_ref().expect("just computed"))
    }

    pub fn zero_effect(&self) -> bool {
        self.zero_effect
    }

    fn backdoor_graph(&mut self) -> Result<&PdagGraph> {
        if self.backdoor.is_none() {
            let d = consistent_extension(self.g).ok_or(Error::NoExtension)?;
            self.backdoor = Some(proper_backdoor_graph(&d, &self.xs, &self.ys));
        }
        Ok(self.backdoor.as_ref().expect("just built"))
    }

    /// Blocking check through one DAG of the class. Requires amenability and
    /// `zs` disjoint from the forbidden set.
    pub fn blocking(&mut self, zs: &NodeSet) -> Result<BlockingCheck> {
        check_disjoint(self.g, &[("x", &self.xs), ("y", &self.ys), ("z", zs)])?;
        if !self.amenability.amenable {
            return Err(Error::Precondition("graph is not amenable".into()));
        }
        if let Some(&v) = zs.intersection(&self.forbidden()?.nodes).next() {
            return Err(Error::Precondition(format!("{} is in the forbidden set", self.g.name(v))));
        }
        let blocked = self.blocked_unchecked(zs)?;
        let witness = if blocked {
            None
        } else {
            reference::open_non_causal_path(self.g, &self.xs, &self.ys, zs, WITNESS_SEARCH_LIMIT)
        };
        Ok(BlockingCheck { blocked, witness })
    }

    fn blocked_unchecked(&mut self, zs: &NodeSet) -> Result<bool> {
        let (xs, ys) = (self.xs.clone(), self.ys.clone());
        let bd = self.backdoor_graph()?;
        Ok(d_separated_unchecked(bd, &xs, &ys, zs))
    }

    /// Evaluates amenability, the forbidden-set condition and blocking, in that
    /// order.
    pub fn verdict(&mut self, zs: &NodeSet) -> Result<AdjustmentVerdict> {
        check_disjoint(self.g, &[("x", &self.xs), ("y", &self.ys), ("z", zs)])?;
        let amenable = self.amenability.amenable;
        let clash = zs.intersection(&self.forbidden()?.nodes).next().copied();
        let forbidden_ok = clash.is_none();
        let witness;
        let mut blocking_ok = false;
        if !amenable {
            witness = self.amenability.witness.clone().map(Witness::Path);
        } else if let Some(v) = clash {
            witness = Some(Witness::Node(v));
        } else {
            let check = self.blocking(zs)?;
            blocking_ok = check.blocked;
            witness = check.witness.map(Witness::Path);
        }
        Ok(AdjustmentVerdict {
            amenable,
            forbidden_ok,
            blocking_ok,
            overall: amenable && forbidden_ok && blocking_ok,
            zero_effect: self.zero_effect,
            witness,
        })
    }

    /// Whether `zs` satisfies the criterion, without witness extraction.
    pub fn is_valid(&mut self, zs: &NodeSet) -> Result<bool> {
        if !self.amenability.amenable || !zs.is_disjoint(&self.forbidden()?.nodes) {
            return Ok(false);
        }
        self.blocked_unchecked(zs)
    }

    /// The canonical candidate: b-possible ancestors of treatments and
    /// outcomes, minus those sets and the forbidden set.
    pub fn canonical_set(&mut self) -> Result<NodeSet> {
        let both: NodeSet = self.xs.union(&self.ys).copied().collect();
        let an = b_poss_de(&reverse_directed(self.g), &both);
        let forb = &self.forbidden()?.nodes;
        Ok(an.into_iter().filter(|v| !both.contains(v) && !forb.contains(v)).collect())
    }

    /// The canonical candidate if it passes the criterion. When it does not,
    /// no set does.
    pub fn adjust_set(&mut self) -> Result<Option<NodeSet>> {
        if !self.amenability.amenable {
            return Ok(None);
        }
        let z = self.canonical_set()?;
        Ok(self.is_valid(&z)?.then_some(z))
    }

    /// Every passing subset of the nodes outside treatments, outcomes and the
    /// forbidden set, ordered by size then lexicographically.
    pub fn list(&mut self, opts: &ListOptions) -> Result<Vec<NodeSet>> {
        if !self.amenability.amenable {
            return Ok(Vec::new());
        }
        let forb = self.forbidden()?.nodes.clone();
        let universe: Vec<NodeId> =
            (0..self.g.n()).filter(|v| !self.xs.contains(v) && !self.ys.contains(v) && !forb.contains(v)).collect();
        if universe.len() > opts.universe_cap {
            return Err(Error::UniverseCap { size: universe.len(), cap: opts.universe_cap });
        }
        let max = opts.max_size.unwrap_or(universe.len()).min(universe.len());
        let mut found: Vec<NodeSet> = Vec::new();
        for size in 0..=max {
            for combo in combinations(universe.len(), size) {
                let z: NodeSet = combo.iter().map(|&i| universe[i]).collect();
                if opts.minimal_only && found.iter().any(|f| f.is_subset(&z)) {
                    continue;
                }
                if self.blocked_unchecked(&z)? {
                    found.push(z);
                }
            }
        }
        Ok(found)
    }
}

const WITNESS_SEARCH_LIMIT: usize = 14;

/// First `(x, c)` with `x - c` starting a proper b-possibly causal path to
/// `ys`. Such a path cannot use a parent of `x` or another treatment, so it
/// suffices to search from `c` in the graph without those nodes.
fn undirected_start(g: &PdagGraph, xs: &NodeSet, ys: &NodeSet) -> Option<(NodeId, NodeId)> {
    for &x in xs {
        let mut keep: NodeSet = (0..g.n()).filter(|v| !xs.contains(v)).collect();
        for p in g.parents(x) {
            keep.remove(&p);
        }
        let (sub, map) = g.induced(&keep);
        for c in g.siblings(x).filter(|c| keep.contains(c)).collect::<Vec<_>>() {
            let start = map.binary_search(&c).expect("kept node");
            if b_poss_de(&sub, &[start].into()).iter().any(|&w| ys.contains(&map[w])) {
                return Some((x, c));
            }
        }
    }
    None
}

/// Nodes outside `xs` reachable from `xs` along directed edges without
/// revisiting `xs`, from which some outcome is reachable by a b-possibly
/// causal path avoiding `xs`. In an amenable graph these lie on proper
/// b-possibly causal paths, and their b-possible descendants are exactly the
/// forbidden set.
fn directed_on_path(g: &PdagGraph, xs: &NodeSet, ys: &NodeSet) -> NodeSet {
    let keep: NodeSet = (0..g.n()).filter(|v| !xs.contains(v)).collect();
    let (sub, map) = g.induced(&keep);
    let local = |set: &NodeSet| -> NodeSet { set.iter().filter_map(|v| map.binary_search(v).ok()).collect() };
    let children: NodeSet = xs.iter().flat_map(|&x| g.children(x).collect::<Vec<_>>()).collect();
    let reached = sub.descendants(&local(&children));
    let to_y = b_poss_de(&reverse_directed(&sub), &local(ys));
    reached.intersection(&to_y).map(|&v| map[v]).collect()
}

fn non_amenable_witness(g: &PdagGraph, xs: &NodeSet, ys: &NodeSet, x: NodeId, c: NodeId) -> Option<NodePath> {
    if let Some(p) = shortest_walk_witness(g, xs, ys, x, c) {
        return Some(p);
    }
    reference::is_amenable_bounded(g, xs, ys, WITNESS_SEARCH_LIMIT).ok().and_then(|a| a.witness)
}

/// Breadth-first search over `(previous, current)` states from `x - c`,
/// accepted only if the resulting walk is a genuine proper b-possibly causal
/// path.
fn shortest_walk_witness(g: &PdagGraph, xs: &NodeSet, ys: &NodeSet, x: NodeId, c: NodeId) -> Option<NodePath> {
    use crate::graph::Mark;
    use std::collections::{HashMap, VecDeque};
    let banned: NodeSet = xs.iter().copied().chain(g.parents(x)).collect();
    let mut back: HashMap<(NodeId, NodeId), (NodeId, NodeId)> = HashMap::new();
    let mut queue = VecDeque::from([(x, c)]);
    let mut end = None;
    back.insert((x, c), (x, x));
    while let Some((prev, cur)) = queue.pop_front() {
        if ys.contains(&cur) {
            end = Some((prev, cur));
            break;
        }
        for w in g.adjacents(cur).collect::<Vec<_>>() {
            if banned.contains(&w) || w == prev {
                continue;
            }
            if !matches!(g.mark(cur, w), Mark::Out | Mark::Undirected) {
                continue;
            }
            if prev != x && g.adjacent(prev, w) {
                continue;
            }
            if let std::collections::hash_map::Entry::Vacant(e) = back.entry((cur, w)) {
                e.insert((prev, cur));
                queue.push_back((cur, w));
            }
        }
    }
    let mut state = end?;
    let mut nodes = vec![state.1];
    while state.0 != state.1 {
        nodes.push(state.0);
        state = back[&state];
        if state.0 == state.1 {
            break;
        }
    }
    nodes.reverse();
    let path = NodePath::new(g, nodes).ok()?;
    classify_path(g, &path).is_b_possibly_causal().then_some(path)
}

/// Removes `x -> w` for every treatment `x` and every `w` on a proper causal
/// path from the treatments to the outcomes in the DAG `d`.
pub fn proper_backdoor_graph(d: &PdagGraph, xs: &NodeSet, ys: &NodeSet) -> PdagGraph {
    let keep: NodeSet = (0..d.n()).filter(|v| !xs.contains(v)).collect();
    let (sub, map) = d.induced(&keep);
    let to_sub = |set: &NodeSet| -> NodeSet { set.iter().filter_map(|v| map.binary_search(v).ok()).collect() };
    let starts: NodeSet =
        xs.iter().flat_map(|&x| d.children(x).collect::<Vec<_>>()).filter(|c| !xs.contains(c)).collect();
    let de = sub.descendants(&to_sub(&starts));
    let an = sub.ancestors(&to_sub(ys));
    let causal: BTreeSet<NodeId> = de.intersection(&an).map(|&v| map[v]).collect();
    let mut out = d.clone();
    for &x in xs {
        for w in d.children(x).collect::<Vec<_>>() {
            if causal.contains(&w) {
                out.remove_edge(x, w);
            }
        }
    }
    out
}

/// d-separation of `xs` and `ys` given `zs` in a DAG.
pub fn d_separated(d: &PdagGraph, xs: &NodeSet, ys: &NodeSet, zs: &NodeSet) -> Result<bool> {
    if !d.is_dag() {
        return Err(Error::NotDag("d-separation needs a DAG".into()));
    }
    check_disjoint(d, &[("x", xs), ("y", ys), ("z", zs)])?;
    Ok(d_separated_unchecked(d, xs, ys, zs))
}

/// Reachability over `(node, arrived-from-child)` states: a trail passes a
/// non-collider outside `zs`, and a collider only if it is an ancestor of `zs`.
pub(crate) fn d_separated_unchecked(d: &PdagGraph, xs: &NodeSet, ys: &NodeSet, zs: &NodeSet) -> bool {
    let n = d.n();
    let anc_z = d.ancestors(zs);
    // [v * 2 + 0]: arrived from a child (moving up); [v * 2 + 1]: from a parent
    let mut seen = vec![false; 2 * n];
    let mut stack: Vec<(NodeId, bool)> = Vec::new();
    for &x in xs {
        seen[2 * x] = true;
        stack.push((x, true));
    }
    while let Some((v, up)) = stack.pop() {
        if ys.contains(&v) {
            return false;
        }
        let in_z = zs.contains(&v);
        let mut visit = |w: NodeId, w_up: bool, stack: &mut Vec<(NodeId, bool)>| {
            let slot = 2 * w + usize::from(!w_up);
            if !seen[slot] {
                seen[slot] = true;
                stack.push((w, w_up));
            }
        };
        if up {
            if !in_z {
                for p in d.parents(v) {
                    visit(p, true, &mut stack);
                }
                for c in d.children(v) {
                    visit(c, false, &mut stack);
                }
            }
        } else {
            if !in_z {
                for c in d.children(v) {
                    visit(c, false, &mut stack);
                }
            }
            if anc_z.contains(&v) {
                for p in d.parents(v) {
                    visit(p, true, &mut stack);
                }
            }
        }
    }
    true
}

pub fn forbidden_set(g: &PdagGraph, xs: &NodeSet, ys: &NodeSet) -> Result<ForbiddenSet> {
    AdjustmentQuery::new(g, xs, ys)?.forbidden().cloned()
}

pub fn is_amenable(g: &PdagGraph, xs: &NodeSet, ys: &NodeSet) -> Result<Amenability> {
    Ok(AdjustmentQuery::new(g, xs, ys)?.amenability)
}

pub fn check_b_blocking(g: &PdagGraph, xs: &NodeSet, ys: &NodeSet, zs: &NodeSet) -> Result<BlockingCheck> {
    AdjustmentQuery::new(g, xs, ys)?.blocking(zs)
}

pub fn satisfies_b_adjustment(g: &PdagGraph, xs: &NodeSet, ys: &NodeSet, zs: &NodeSet) -> Result<AdjustmentVerdict> {
    AdjustmentQuery::new(g, xs, ys)?.verdict(zs)
}

pub fn adjust_set(g: &PdagGraph, xs: &NodeSet, ys: &NodeSet) -> Result<Option<NodeSet>> {
    AdjustmentQuery::new(g, xs, ys)?.adjust_set()
}

pub fn list_adjustment_sets(g: &PdagGraph, xs: &NodeSet, ys: &NodeSet, opts: &ListOptions) -> Result<Vec<NodeSet>> {
    AdjustmentQuery::new(g, xs, ys)?.list(opts)
}

/// Index combinations of `k` out of `n`, lexicographic.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Path-enumeration semantics of amenability, the forbidden set and blocking,
/// guarded by a node-count limit.
pub mod reference {
    use super::*;
    use crate::graph::{classify_definite_status, NodeStatus};
    use crate::paths::{oracle_reach_with_limit, Direction};

    fn guard(g: &PdagGraph, limit: usize) -> Result<()> {
        if g.n() > limit {
            Err(Error::SizeGuard { nodes: g.n(), limit })
        } else {
            Ok(())
        }
    }

    /// Calls `visit` on every proper b-possibly causal path from `xs` to `ys`.
    /// Returning `false` from `visit` stops the search.
    pub fn for_each_proper_b_possibly_causal_path(
        g: &PdagGraph,
        xs: &NodeSet,
        ys: &NodeSet,
        visit: &mut dyn FnMut(&[NodeId]) -> bool,
    ) {
        fn rec(
            g: &PdagGraph,
            xs: &NodeSet,
            ys: &NodeSet,
            path: &mut Vec<NodeId>,
            visit: &mut dyn FnMut(&[NodeId]) -> bool,
        ) -> bool {
            let cur = *path.last().unwrap();
            for w in g.adjacents(cur).collect::<Vec<_>>() {
                if xs.contains(&w) || path.contains(&w) || path.iter().any(|&v| g.directed(w, v)) {
                    continue;
                }
                path.push(w);
                let proceed = (!ys.contains(&w) || visit(path)) && rec(g, xs, ys, path, visit);
                path.pop();
                if !proceed {
                    return false;
                }
            }
            true
        }
        for &x in xs {
            let mut path = vec![x];
            if !rec(g, xs, ys, &mut path, visit) {
                return;
            }
        }
    }

    pub fn is_amenable(g: &PdagGraph, xs: &NodeSet, ys: &NodeSet) -> Result<Amenability> {
        is_amenable_bounded(g, xs, ys, DEFAULT_ORACLE_LIMIT)
    }

    pub(crate) fn is_amenable_bounded(g: &PdagGraph, xs: &NodeSet, ys: &NodeSet, limit: usize) -> Result<Amenability> {
        guard(g, limit)?;
        let mut witness = None;
        for_each_proper_b_possibly_causal_path(g, xs, ys, &mut |p| {
            if g.undirected(p[0], p[1]) {
                witness = Some(NodePath::new_unchecked(p.to_vec()));
                false
            } else {
                true
            }
        });
        Ok(Amenability { amenable: witness.is_none(), witness })
    }

    pub fn forbidden_set(g: &PdagGraph, xs: &NodeSet, ys: &NodeSet) -> Result<ForbiddenSet> {
        guard(g, DEFAULT_ORACLE_LIMIT)?;
        let mut on_path = NodeSet::new();
        for_each_proper_b_possibly_causal_path(g, xs, ys, &mut |p| {
            on_path.extend(p[1..].iter().copied());
            true
        });
        let nodes = oracle_reach_with_limit(g, &on_path, Direction::Descendants, DEFAULT_ORACLE_LIMIT)?.nodes;
        Ok(ForbiddenSet { nodes, on_path, exact: true })
    }

    /// A proper b-non-causal definite status path from `xs` to `ys` that `zs`
    /// does not block, searched exhaustively.
    pub fn open_non_causal_path(
        g: &PdagGraph,
        xs: &NodeSet,
        ys: &NodeSet,
        zs: &NodeSet,
        limit: usize,
    ) -> Option<NodePath> {
        if g.n() > limit {
            return None;
        }
        let de_of: Vec<NodeSet> = (0..g.n()).map(|v| g.descendants(&[v].into())).collect();
        let mut found = None;
        let mut path = Vec::new();
        for &x in xs {
            path.clear();
            path.push(x);
            if search_open(g, xs, ys, zs, &de_of, &mut path, &mut found) {
                break;
            }
        }
        found
    }

    fn search_open(
        g: &PdagGraph,
        xs: &NodeSet,
        ys: &NodeSet,
        zs: &NodeSet,
        de_of: &[NodeSet],
        path: &mut Vec<NodeId>,
        found: &mut Option<NodePath>,
    ) -> bool {
        let cur = *path.last().unwrap();
        for w in g.adjacents(cur).collect::<Vec<_>>() {
            if xs.contains(&w) || path.contains(&w) {
                continue;
            }
            path.push(w);
            let k = path.len();
            // status of the previous node is fixed once its successor is known
            let open_so_far = k < 3 || {
                let status = crate::graph::triple_status(g, path[k - 3], path[k - 2], path[k - 1]);
                match status {
                    NodeStatus::NotDefinite => false,
                    NodeStatus::Collider => !de_of[path[k - 2]].is_disjoint(zs),
                    NodeStatus::DefiniteNonCollider => !zs.contains(&path[k - 2]),
                    NodeStatus::Endpoint => true,
                }
            };
            if open_so_far {
                if ys.contains(&w) {
                    let p = NodePath::new_unchecked(path.clone());
                    if !classify_path(g, &p).is_b_possibly_causal() {
                        *found = Some(p);
                        path.pop();
                        return true;
                    }
                }
                if search_open(g, xs, ys, zs, de_of, path, found) {
                    path.pop();
                    return true;
                }
            }
            path.pop();
        }
        false
    }

    /// Every proper b-non-causal definite status path from `xs` to `ys` is
    /// blocked by `zs`.
    pub fn b_blocking(g: &PdagGraph, xs: &NodeSet, ys: &NodeSet, zs: &NodeSet) -> Result<BlockingCheck> {
        guard(g, DEFAULT_ORACLE_LIMIT)?;
        let witness = open_non_causal_path(g, xs, ys, zs, DEFAULT_ORACLE_LIMIT);
        Ok(BlockingCheck { blocked: witness.is_none(), witness })
    }

    /// Full criterion evaluated by path enumeration.
    pub fn satisfies_b_adjustment(g: &PdagGraph, xs: &NodeSet, ys: &NodeSet, zs: &NodeSet) -> Result<bool> {
        check_disjoint(g, &[("x", xs), ("y", ys), ("z", zs)])?;
        if !is_amenable(g, xs, ys)?.amenable {
            return Ok(false);
        }
        if !zs.is_disjoint(&forbidden_set(g, xs, ys)?.nodes) {
            return Ok(false);
        }
        Ok(b_blocking(g, xs, ys, zs)?.blocked)
    }

    /// Labels of a path, exposed for tests that reason about definite status.
    pub fn statuses(g: &PdagGraph, p: &NodePath) -> Vec<NodeStatus> {
        classify_definite_status(g, p)
    }
}
