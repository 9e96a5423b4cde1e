// SPDX-License-Identifier: MIT
//! Partially directed graph value type, the text edge-list format, and the
//! path predicates (definite status, directed cycles) everything else builds on.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Node handle: the position of the node in declaration order.
pub type NodeId = usize;

/// Ordered node set. Iteration follows declaration order.
pub type NodeSet = BTreeSet<NodeId>;

/// State of an unordered node pair `{lo, hi}` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EdgeState {
    #[default]
    Absent,
    Undirected,
    /// `lo -> hi`
    DirectedLR,
    /// `hi -> lo`
    DirectedRL,
}

/// An edge as seen from one endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mark {
    None,
    Undirected,
    /// `u -> v`
    Out,
    /// `u <- v`
    In,
}

/// A graph with at most one edge per node pair, each edge either undirected or
/// directed. Used for CPDAGs, maximal PDAGs and DAGs alike.
#[derive(Clone, PartialEq, Eq)]
pub struct PdagGraph {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
    // upper triangle, row-major over pairs (i, j) with i < j
    pairs: Vec<EdgeState>,
}

fn pair_slot(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

pub(crate) fn is_valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PdagGraph {
    /// Edgeless graph over the given names.
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut index = HashMap::with_capacity(names.len());
        let mut owned = Vec::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            let name = name.as_ref();
            if !is_valid_name(name) {
                return Err(Error::Parameter(format!("invalid node name '{name}'")));
            }
            if index.insert(name.to_string(), i).is_some() {
                return Err(Error::Parameter(format!("duplicate node name '{name}'")));
            }
            owned.push(name.to_string());
        }
        let n = owned.len();
        Ok(PdagGraph { names: owned, index, pairs: vec![EdgeState::Absent; n * n.saturating_sub(1) / 2] })
    }

    /// Edgeless graph with nodes `V1..Vp`.
    pub fn with_numbered_nodes(p: usize) -> Self {
        let names: Vec<String> = (1..=p).map(|i| format!("V{i}")).collect();
        PdagGraph::new(&names).expect("generated names are valid")
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: NodeId) -> &str {
        &self.names[v]
    }

    pub fn node(&self, name: &str) -> Option<NodeId> {
        self.index.get(name).copied()
    }

    pub fn require_node(&self, name: &str) -> Result<NodeId> {
        self.node(name).ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    /// Resolves a list of names into a node set.
    pub fn node_set<S: AsRef<str>>(&self, names: &[S]) -> Result<NodeSet> {
        names.iter().map(|s| self.require_node(s.as_ref())).collect()
    }

    pub fn format_set(&self, set: &NodeSet) -> String {
        let inner: Vec<&str> = set.iter().map(|&v| self.name(v)).collect();
        format!("{{{}}}", inner.join(","))
    }

    pub fn state(&self, i: NodeId, j: NodeId) -> EdgeState {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.pairs[pair_slot(self.n(), i, j)],
            std::cmp::Ordering::Greater => self.pairs[pair_slot(self.n(), j, i)],
            std::cmp::Ordering::Equal => EdgeState::Absent,
        }
    }

    /// The edge between `u` and `v` from `u`'s side.
    pub fn mark(&self, u: NodeId, v: NodeId) -> Mark {
        let st = self.state(u, v);
        let forward = u < v;
        match st {
            EdgeState::Absent => Mark::None,
            EdgeState::Undirected => Mark::Undirected,
            EdgeState::DirectedLR if forward => Mark::Out,
            EdgeState::DirectedLR => Mark::In,
            EdgeState::DirectedRL if forward => Mark::In,
            EdgeState::DirectedRL => Mark::Out,
        }
    }

    pub fn adjacent(&self, u: NodeId, v: NodeId) -> bool {
        self.state(u, v) != EdgeState::Absent
    }

    /// `u -> v` is in the graph.
    pub fn directed(&self, u: NodeId, v: NodeId) -> bool {
        self.mark(u, v) == Mark::Out
    }

    /// `u - v` is in the graph.
    pub fn undirected(&self, u: NodeId, v: NodeId) -> bool {
        self.state(u, v) == EdgeState::Undirected
    }

    fn set_state(&mut self, i: NodeId, j: NodeId, st: EdgeState) {
        assert!(i != j, "self-loop");
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        let n = self.n();
        self.pairs[pair_slot(n, lo, hi)] = st;
    }

    /// Sets `u -> v`, replacing whatever edge the pair carried.
    pub fn set_directed(&mut self, u: NodeId, v: NodeId) {
        let st = if u < v { EdgeState::DirectedLR } else { EdgeState::DirectedRL };
        self.set_state(u, v, st);
    }

    pub fn set_undirected(&mut self, u: NodeId, v: NodeId) {
        self.set_state(u, v, EdgeState::Undirected);
    }

    pub fn remove_edge(&mut self, u: NodeId, v: NodeId) {
        self.set_state(u, v, EdgeState::Absent);
    }

    fn neighbors_with(&self, v: NodeId, want: Mark) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.n()).filter(move |&u| u != v && self.mark(v, u) == want)
    }

    pub fn parents(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.neighbors_with(v, Mark::In)
    }

    pub fn children(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.neighbors_with(v, Mark::Out)
    }

    pub fn siblings(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.neighbors_with(v, Mark::Undirected)
    }

    pub fn adjacents(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.n()).filter(move |&u| u != v && self.adjacent(v, u))
    }

    pub fn neighborhood(&self, v: NodeId) -> Neighborhood {
        Neighborhood {
            parents: self.parents(v).collect(),
            children: self.children(v).collect(),
            siblings: self.siblings(v).collect(),
        }
    }

    /// Every adjacent pair `(lo, hi)` with its state, in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, EdgeState)> + '_ {
        let n = self.n();
        (0..n).flat_map(move |i| {
            ((i + 1)..n).filter_map(move |j| match self.state(i, j) {
                EdgeState::Absent => None,
                st => Some((i, j, st)),
            })
        })
    }

    pub fn undirected_edges(&self) -> Vec<(NodeId, NodeId)> {
        self.edges().filter(|e| e.2 == EdgeState::Undirected).map(|(i, j, _)| (i, j)).collect()
    }

    /// Directed edges as `(from, to)`, ordered by canonical pair.
    pub fn directed_edges(&self) -> Vec<(NodeId, NodeId)> {
        self.edges()
            .filter_map(|(i, j, st)| match st {
                EdgeState::DirectedLR => Some((i, j)),
                EdgeState::DirectedRL => Some((j, i)),
                _ => None,
            })
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn is_fully_directed(&self) -> bool {
        self.edges().all(|e| e.2 != EdgeState::Undirected)
    }

    /// Same node names and same edges, ignoring declaration order.
    pub fn same_edges_by_name(&self, other: &PdagGraph) -> bool {
        if self.n() != other.n() {
            return false;
        }
        let map: Option<Vec<NodeId>> = self.names.iter().map(|s| other.node(s)).collect();
        let Some(map) = map else { return false };
        (0..self.n()).all(|u| ((u + 1)..self.n()).all(|v| self.mark(u, v) == other.mark(map[u], map[v])))
    }

    pub fn same_skeleton(&self, other: &PdagGraph) -> bool {
        self.names == other.names
            && self.pairs.iter().zip(&other.pairs).all(|(a, b)| (*a == EdgeState::Absent) == (*b == EdgeState::Absent))
    }

    /// True iff the directed part of the graph contains a cycle.
    pub fn has_directed_cycle(&self) -> bool {
        self.topological_order().is_none()
    }

    /// Topological order of the directed part (undirected edges ignored), or
    /// `None` when it has a cycle. Ties are broken by lowest index.
    pub fn topological_order(&self) -> Option<Vec<NodeId>> {
        let n = self.n();
        let mut indeg = vec![0usize; n];
        for (_, to) in self.directed_edges() {
            indeg[to] += 1;
        }
        let mut ready: BTreeSet<NodeId> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for c in self.children(v) {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    ready.insert(c);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_dag(&self) -> bool {
        self.is_fully_directed() && !self.has_directed_cycle()
    }

    /// Nodes reachable from `from` along directed edges, including `from`.
    pub fn descendants(&self, from: &NodeSet) -> NodeSet {
        self.directed_closure(from, true)
    }

    /// Nodes with a directed path into `to`, including `to`.
    pub fn ancestors(&self, to: &NodeSet) -> NodeSet {
        self.directed_closure(to, false)
    }

    fn directed_closure(&self, start: &NodeSet, forward: bool) -> NodeSet {
        let mut seen = start.clone();
        let mut stack: Vec<NodeId> = start.iter().copied().collect();
        while let Some(v) = stack.pop() {
            let next: Vec<NodeId> = if forward { self.children(v).collect() } else { self.parents(v).collect() };
            for w in next {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Unshielded colliders `(a, b, c)` with `a -> b <- c`, `a < c`, `a` and `c`
    /// non-adjacent.
    pub fn unshielded_colliders(&self) -> BTreeSet<(NodeId, NodeId, NodeId)> {
        let mut out = BTreeSet::new();
        for b in 0..self.n() {
            let pa: Vec<NodeId> = self.parents(b).collect();
            for (i, &a) in pa.iter().enumerate() {
                for &c in &pa[i + 1..] {
                    if !self.adjacent(a, c) {
                        out.insert((a, b, c));
                    }
                }
            }
        }
        out
    }

    /// Induced subgraph on `keep`, preserving relative node order.
    pub fn induced(&self, keep: &NodeSet) -> (PdagGraph, Vec<NodeId>) {
        let map: Vec<NodeId> = keep.iter().copied().collect();
        let names: Vec<&str> = map.iter().map(|&v| self.name(v)).collect();
        let mut sub = PdagGraph::new(&names).expect("names already valid");
        for (a, &u) in map.iter().enumerate() {
            for (b, &v) in map.iter().enumerate().skip(a + 1) {
                match self.mark(u, v) {
                    Mark::None => {}
                    Mark::Undirected => sub.set_undirected(a, b),
                    Mark::Out => sub.set_directed(a, b),
                    Mark::In => sub.set_directed(b, a),
                }
            }
        }
        (sub, map)
    }

    /// Canonical text form: every node declared in order, then the edges sorted
    /// by `(min endpoint, max endpoint)`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for name in &self.names {
            out.push_str("node ");
            out.push_str(name);
            out.push('\n');
        }
        for (i, j, st) in self.edges() {
            let line = match st {
                EdgeState::Undirected => format!("{} -- {}", self.names[i], self.names[j]),
                EdgeState::DirectedLR => format!("{} -> {}", self.names[i], self.names[j]),
                EdgeState::DirectedRL => format!("{} -> {}", self.names[j], self.names[i]),
                EdgeState::Absent => unreachable!(),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<PdagGraph> {
        parse_document(text).map(|d| d.graph)
    }
}

impl fmt::Debug for PdagGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges()
            .map(|(i, j, st)| match st {
                EdgeState::Undirected => format!("{}--{}", self.names[i], self.names[j]),
                EdgeState::DirectedLR => format!("{}->{}", self.names[i], self.names[j]),
                EdgeState::DirectedRL => format!("{}->{}", self.names[j], self.names[i]),
                EdgeState::Absent => unreachable!(),
            })
            .collect();
        write!(f, "PdagGraph[{}]", edges.join(", "))
    }
}

impl fmt::Display for PdagGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Parents, children and siblings of a node.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Neighborhood {
    pub parents: NodeSet,
    pub children: NodeSet,
    pub siblings: NodeSet,
}

/// A parsed graph file: the graph plus any weights attached to directed edges,
/// keyed by `(from, to)`.
#[derive(Debug, Clone)]
pub struct GraphDocument {
    pub graph: PdagGraph,
    pub weights: BTreeMap<(NodeId, NodeId), f64>,
}

pub(crate) enum Statement {
    Node(String),
    Edge { from: String, to: String, directed: bool, weight: Option<f64> },
}

pub(crate) fn parse_line(line_no: usize, line: &str) -> Result<Option<Statement>> {
    let content = match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    };
    let tokens: Vec<&str> = content.split_whitespace().collect();
    if tokens.is_empty() {
        return Ok(None);
    }
    let syntax = |reason: String| Error::Syntax { line: line_no, reason };
    let check_name = |s: &str| {
        if is_valid_name(s) {
            Ok(s.to_string())
        } else {
            Err(syntax(format!("invalid node name '{s}'")))
        }
    };
    if tokens.len() >= 2 && (tokens[1] == "--" || tokens[1] == "->") {
        let directed = tokens[1] == "->";
        if tokens.len() < 3 {
            return Err(syntax("edge is missing its second endpoint".into()));
        }
        let from = check_name(tokens[0])?;
        let to = check_name(tokens[2])?;
        let weight = match tokens.get(3) {
            None => None,
            Some(_) if !directed => return Err(syntax("weights are only allowed on directed edges".into())),
            Some(w) => Some(
                w.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| syntax(format!("invalid weight '{w}'")))?,
            ),
        };
        if tokens.len() > 4 {
            return Err(syntax(format!("unexpected token '{}'", tokens[4])));
        }
        if from == to {
            return Err(Error::SelfLoop { line: line_no, node: from });
        }
        return Ok(Some(Statement::Edge { from, to, directed, weight }));
    }
    if tokens[0] == "node" {
        if tokens.len() != 2 {
            return Err(syntax("expected 'node NAME'".into()));
        }
        return Ok(Some(Statement::Node(check_name(tokens[1])?)));
    }
    if tokens.len() >= 2 && is_valid_name(tokens[0]) && is_valid_name(tokens[1]) {
        return Err(Error::UnknownDirective { line: line_no, directive: tokens[0].to_string() });
    }
    Err(syntax(format!("cannot parse '{}'", content.trim())))
}

/// Parses the edge-list format, keeping directed-edge weights.
pub fn parse_document(text: &str) -> Result<GraphDocument> {
    let mut order: Vec<String> = Vec::new();
    let mut seen: HashMap<String, NodeId> = HashMap::new();
    let mut edges: Vec<(NodeId, NodeId, bool, Option<f64>)> = Vec::new();
    let mut pairs: HashMap<(NodeId, NodeId), usize> = HashMap::new();

    let mut intern = |name: String, order: &mut Vec<String>| -> NodeId {
        *seen.entry(name.clone()).or_insert_with(|| {
            order.push(name);
            order.len() - 1
        })
    };

    for (k, line) in text.lines().enumerate() {
        let line_no = k + 1;
        match parse_line(line_no, line)? {
            None => {}
            Some(Statement::Node(name)) => {
                intern(name, &mut order);
            }
            Some(Statement::Edge { from, to, directed, weight }) => {
                let (fname, tname) = (from.clone(), to.clone());
                let u = intern(from, &mut order);
                let v = intern(to, &mut order);
                let key = (u.min(v), u.max(v));
                if pairs.insert(key, line_no).is_some() {
                    return Err(Error::DuplicateEdge { line: line_no, a: fname, b: tname });
                }
                edges.push((u, v, directed, weight));
            }
        }
    }

    let mut graph = PdagGraph::new(&order)?;
    let mut weights = BTreeMap::new();
    for (u, v, directed, weight) in edges {
        if directed {
            graph.set_directed(u, v);
            if let Some(w) = weight {
                weights.insert((u, v), w);
            }
        } else {
            graph.set_undirected(u, v);
        }
    }
    Ok(GraphDocument { graph, weights })
}

/// Parses the edge-list format.
pub fn parse_graph(text: &str) -> Result<PdagGraph> {
    PdagGraph::parse(text)
}

/// A simple path in a specific graph: at least two distinct nodes, each
/// consecutive pair adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodePath(Vec<NodeId>);

impl NodePath {
    pub fn new(g: &PdagGraph, nodes: Vec<NodeId>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidPath("a path needs at least two nodes".into()));
        }
        let mut seen = NodeSet::new();
        for &v in &nodes {
            if v >= g.n() {
                return Err(Error::InvalidPath(format!("node index {v} out of range")));
            }
            if !seen.insert(v) {
                return Err(Error::InvalidPath(format!("node {} repeats", g.name(v))));
            }
        }
        for w in nodes.windows(2) {
            if !g.adjacent(w[0], w[1]) {
                return Err(Error::InvalidPath(format!("{} and {} are not adjacent", g.name(w[0]), g.name(w[1]))));
            }
        }
        Ok(NodePath(nodes))
    }

    pub fn from_names<S: AsRef<str>>(g: &PdagGraph, names: &[S]) -> Result<Self> {
        let nodes = names.iter().map(|s| g.require_node(s.as_ref())).collect::<Result<Vec<_>>>()?;
        NodePath::new(g, nodes)
    }

    /// Skips validation; callers guarantee distinct, consecutively adjacent nodes.
    pub(crate) fn new_unchecked(nodes: Vec<NodeId>) -> Self {
        NodePath(nodes)
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> NodeId {
        self.0[0]
    }

    pub fn last(&self) -> NodeId {
        self.0[self.0.len() - 1]
    }

    pub fn reversed(&self) -> NodePath {
        NodePath(self.0.iter().rev().copied().collect())
    }

    pub fn subpath(&self, from: usize, to: usize) -> NodePath {
        NodePath(self.0[from..=to].to_vec())
    }

    pub fn display(&self, g: &PdagGraph) -> String {
        let mut out = g.name(self.0[0]).to_string();
        for w in self.0.windows(2) {
            let op = match g.mark(w[0], w[1]) {
                Mark::Out => " -> ",
                Mark::In => " <- ",
                Mark::Undirected => " -- ",
                Mark::None => " ?? ",
            };
            out.push_str(op);
            out.push_str(g.name(w[1]));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeStatus {
    Endpoint,
    Collider,
    DefiniteNonCollider,
    NotDefinite,
}

/// Status of the interior node `b` in the consecutive triple `a, b, c`.
pub fn triple_status(g: &PdagGraph, a: NodeId, b: NodeId, c: NodeId) -> NodeStatus {
    let left = g.mark(b, a);
    let right = g.mark(b, c);
    if left == Mark::In && right == Mark::In {
        NodeStatus::Collider
    } else if left == Mark::Out
        || right == Mark::Out
        || (left == Mark::Undirected && right == Mark::Undirected && !g.adjacent(a, c))
    {
        NodeStatus::DefiniteNonCollider
    } else {
        NodeStatus::NotDefinite
    }
}

/// Labels every node of `p`.
pub fn classify_definite_status(g: &PdagGraph, p: &NodePath) -> Vec<NodeStatus> {
    let nodes = p.nodes();
    let k = nodes.len();
    (0..k)
        .map(|i| {
            if i == 0 || i + 1 == k {
                NodeStatus::Endpoint
            } else {
                triple_status(g, nodes[i - 1], nodes[i], nodes[i + 1])
            }
        })
        .collect()
}

pub fn is_definite_status(g: &PdagGraph, p: &NodePath) -> bool {
    classify_definite_status(g, p).iter().all(|s| *s != NodeStatus::NotDefinite)
}
