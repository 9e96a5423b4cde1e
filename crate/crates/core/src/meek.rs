// SPDX-License-Identifier: MIT
//! Orientation rules R1-R4, their closure, incorporation of background
//! knowledge into a maximal PDAG, and CPDAG construction.

use crate::error::{Error, Result};
use crate::extension::consistent_extension;
use crate::graph::{parse_line, Mark, NodeId, PdagGraph, Statement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeekRule {
    R1,
    R2,
    R3,
    R4,
}

impl MeekRule {
    pub const ALL: [MeekRule; 4] = [MeekRule::R1, MeekRule::R2, MeekRule::R3, MeekRule::R4];

    /// Whether the rule orients the undirected edge `i - j` as `i -> j`.
    pub fn orients(self, g: &PdagGraph, i: NodeId, j: NodeId) -> bool {
        debug_assert!(g.undirected(i, j));
        match self {
            // a -> i - j, a and j non-adjacent
            MeekRule::R1 => g.parents(i).any(|a| a != j && !g.adjacent(a, j)),
            // i -> k -> j, i - j
            MeekRule::R2 => g.children(i).any(|k| g.directed(k, j)),
            // i - k -> j, i - l -> j, k and l non-adjacent
            MeekRule::R3 => {
                let ks: Vec<NodeId> = g.siblings(i).filter(|&k| g.directed(k, j)).collect();
                ks.iter().enumerate().any(|(a, &k)| ks[a + 1..].iter().any(|&l| !g.adjacent(k, l)))
            }
            // i - k, i - l, k -> l -> j, k and j non-adjacent
            MeekRule::R4 => {
                let sib: Vec<NodeId> = g.siblings(i).filter(|&v| v != j).collect();
                sib.iter()
                    .any(|&l| g.directed(l, j) && sib.iter().any(|&k| k != l && g.directed(k, l) && !g.adjacent(k, j)))
            }
        }
    }
}

/// Order in which the closure scans rules and undirected edges. The default is
/// R1..R4 over edges in canonical pair order.
#[derive(Debug, Clone)]
pub struct ClosureOrder {
    pub rules: Vec<MeekRule>,
    /// Pairs `(lo, hi)` to scan, in order. `None` means canonical order.
    pub pair_order: Option<Vec<(NodeId, NodeId)>>,
}

impl Default for ClosureOrder {
    fn default() -> Self {
        ClosureOrder { rules: MeekRule::ALL.to_vec(), pair_order: None }
    }
}

/// Applies the rules in passes until a full pass orients nothing. Returns the
/// number of edges oriented.
pub(crate) fn close_in_place(g: &mut PdagGraph, order: &ClosureOrder) -> usize {
    let canonical;
    let pairs: &[(NodeId, NodeId)] = match &order.pair_order {
        Some(p) => p,
        None => {
            canonical = g.undirected_edges();
            &canonical
        }
    };
    let mut oriented = 0;
    loop {
        let mut changed = false;
        for &rule in &order.rules {
            for &(u, v) in pairs {
                if !g.undirected(u, v) {
                    continue;
                }
                if rule.orients(g, u, v) {
                    g.set_directed(u, v);
                    changed = true;
                    oriented += 1;
                } else if rule.orients(g, v, u) {
                    g.set_directed(v, u);
                    changed = true;
                    oriented += 1;
                }
            }
        }
        if !changed {
            return oriented;
        }
    }
}

/// True iff no rule applies to any undirected edge.
pub fn is_closed(g: &PdagGraph) -> bool {
    g.undirected_edges()
        .into_iter()
        .all(|(u, v)| MeekRule::ALL.iter().all(|r| !r.orients(g, u, v) && !r.orients(g, v, u)))
}

/// Closes the orientations of `g` under R1-R4.
pub fn close_orientations(g: &PdagGraph) -> Result<PdagGraph> {
    close_orientations_with(g, &ClosureOrder::default())
}

pub fn close_orientations_with(g: &PdagGraph, order: &ClosureOrder) -> Result<PdagGraph> {
    if g.has_directed_cycle() {
        return Err(Error::DirectedCycle);
    }
    let mut out = g.clone();
    close_in_place(&mut out, order);
    Ok(out)
}

/// Required directed edges, processed in order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BackgroundKnowledge {
    edges: Vec<(NodeId, NodeId)>,
}

impl BackgroundKnowledge {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges(edges: Vec<(NodeId, NodeId)>) -> Result<Self> {
        if let Some(&(a, _)) = edges.iter().find(|(a, b)| a == b) {
            return Err(Error::Parameter(format!("background edge on node index {a} is a self-loop")));
        }
        Ok(BackgroundKnowledge { edges })
    }

    pub fn push(&mut self, from: NodeId, to: NodeId) {
        assert_ne!(from, to, "background edge endpoints must differ");
        self.edges.push((from, to));
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Parses `A -> B` lines (comments and blank lines allowed), resolving names
    /// against `g`.
    pub fn parse(text: &str, g: &PdagGraph) -> Result<Self> {
        let mut bk = BackgroundKnowledge::new();
        for (k, line) in text.lines().enumerate() {
            let line_no = k + 1;
            match parse_line(line_no, line)? {
                None => {}
                Some(Statement::Edge { from, to, directed: true, weight: None }) => {
                    bk.push(g.require_node(&from)?, g.require_node(&to)?);
                }
                Some(_) => {
                    return Err(Error::Syntax {
                        line: line_no,
                        reason: "background knowledge allows only 'A -> B' lines".into(),
                    })
                }
            }
        }
        Ok(bk)
    }

    pub fn to_text(&self, g: &PdagGraph) -> String {
        self.edges.iter().map(|&(a, b)| format!("{} -> {}\n", g.name(a), g.name(b))).collect()
    }
}

/// Result of incorporating background knowledge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrientationOutcome {
    Success(PdagGraph),
    /// `graph` is the untouched input; `violating` is the first requirement
    /// that could not be honored.
    Failure {
        graph: PdagGraph,
        violating: (NodeId, NodeId),
    },
}

impl OrientationOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, OrientationOutcome::Success(_))
    }

    pub fn graph(&self) -> Option<&PdagGraph> {
        match self {
            OrientationOutcome::Success(g) => Some(g),
            OrientationOutcome::Failure { .. } => None,
        }
    }

    pub fn into_graph(self) -> Option<PdagGraph> {
        match self {
            OrientationOutcome::Success(g) => Some(g),
            OrientationOutcome::Failure { .. } => None,
        }
    }
}

/// Orients each required edge in turn and re-closes, failing on the first
/// requirement whose pair is absent or already oriented the other way.
pub fn construct_max_pdag(g: &PdagGraph, r: &BackgroundKnowledge) -> Result<OrientationOutcome> {
    if g.has_directed_cycle() {
        return Err(Error::Precondition("input has a directed cycle".into()));
    }
    if !is_closed(g) {
        return Err(Error::Precondition("input is not closed under the orientation rules".into()));
    }
    Ok(construct_max_pdag_unchecked(g, r, &ClosureOrder::default()))
}

/// [`construct_max_pdag`] with an explicit closure order and no precondition
/// checks.
pub fn construct_max_pdag_with(g: &PdagGraph, r: &BackgroundKnowledge, order: &ClosureOrder) -> OrientationOutcome {
    construct_max_pdag_unchecked(g, r, order)
}

pub(crate) fn construct_max_pdag_unchecked(
    g: &PdagGraph,
    r: &BackgroundKnowledge,
    order: &ClosureOrder,
) -> OrientationOutcome {
    let mut out = g.clone();
    for &(x, y) in r.edges() {
        match out.mark(x, y) {
            Mark::Out => {}
            Mark::Undirected => {
                out.set_directed(x, y);
                close_in_place(&mut out, order);
                if out.has_directed_cycle() {
                    return OrientationOutcome::Failure { graph: g.clone(), violating: (x, y) };
                }
            }
            Mark::In | Mark::None => {
                return OrientationOutcome::Failure { graph: g.clone(), violating: (x, y) };
            }
        }
    }
    OrientationOutcome::Success(out)
}

/// The CPDAG of a DAG: its skeleton with only the unshielded colliders
/// oriented, then closed.
pub fn cpdag_of(d: &PdagGraph) -> Result<PdagGraph> {
    if !d.is_fully_directed() {
        return Err(Error::NotDag("input has undirected edges".into()));
    }
    if d.has_directed_cycle() {
        return Err(Error::NotDag("input has a directed cycle".into()));
    }
    let mut out = d.clone();
    for (i, j) in d.directed_edges() {
        out.set_undirected(i, j);
    }
    for (a, b, c) in d.unshielded_colliders() {
        out.set_directed(a, b);
        out.set_directed(c, b);
    }
    close_in_place(&mut out, &ClosureOrder::default());
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidityReport {
    pub acyclic: bool,
    pub closed: bool,
    pub extendable: bool,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.acyclic && self.closed && self.extendable
    }
}

pub fn validate_maximal_pdag(g: &PdagGraph) -> ValidityReport {
    let acyclic = !g.has_directed_cycle();
    ValidityReport { acyclic, closed: is_closed(g), extendable: acyclic && consistent_extension(g).is_some() }
}
