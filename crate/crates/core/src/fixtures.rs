// SPDX-License-Identifier: MIT
//! Small worked graphs used across the test suites, the CLI tests and the docs.

use crate::graph::PdagGraph;

/// Two triangles `A,B,D` and `B,C,D` sharing `B - D`, all undirected.
pub const FIG1_CPDAG: &str = "node A\nnode B\nnode C\nnode D\nA -- B\nA -- D\nB -- C\nB -- D\nC -- D\n";

/// [`FIG1_CPDAG`] after adding `D -> B`.
pub const FIG1_MPDAG: &str = "node A\nnode B\nnode C\nnode D\nA -- B\nA -- D\nB -- C\nD -> B\nC -- D\n";

/// The ten DAGs of the Markov equivalence class of [`FIG1_CPDAG`]; the first
/// five are exactly those containing `D -> B`.
pub const FIG1_DAGS: [&str; 10] = [
    "A -> B\nB -> C\nD -> C\nD -> A\nD -> B",
    "B -> A\nB -> C\nD -> C\nD -> A\nD -> B",
    "A -> B\nB -> C\nD -> C\nA -> D\nD -> B",
    "B -> A\nC -> B\nD -> C\nD -> A\nD -> B",
    "B -> A\nC -> B\nC -> D\nD -> A\nD -> B",
    "B -> A\nC -> B\nC -> D\nD -> A\nB -> D",
    "B -> A\nB -> C\nC -> D\nD -> A\nB -> D",
    "B -> A\nB -> C\nD -> C\nA -> D\nB -> D",
    "B -> A\nB -> C\nD -> C\nD -> A\nB -> D",
    "A -> B\nB -> C\nD -> C\nA -> D\nB -> D",
];

/// `V1 - X - Y`, with `V2` adjacent to both `X` and `Y`; everything undirected.
pub const FIG3_CPDAG: &str = "node X\nnode V1\nnode V2\nnode Y\nV1 -- X\nV2 -- X\nX -- Y\nV2 -- Y\n";

/// [`FIG3_CPDAG`] with `V1 -> X` added and closed.
pub const FIG3_G1: &str = "node X\nnode V1\nnode V2\nnode Y\nV1 -> X\nX -> V2\nX -> Y\nV2 -- Y\n";

/// [`FIG3_CPDAG`] with `Y -> X` added and closed.
pub const FIG3_G2: &str = "node X\nnode V1\nnode V2\nnode Y\nX -> V1\nX -- V2\nY -> X\nV2 -- Y\n";

const FIG1_NODES: &str = "node A\nnode B\nnode C\nnode D\n";

pub fn graph(text: &str) -> PdagGraph {
    PdagGraph::parse(text).expect("fixture parses")
}

/// One of [`FIG1_DAGS`], with the node order of [`FIG1_CPDAG`].
pub fn fig1_dag(i: usize) -> PdagGraph {
    graph(&format!("{FIG1_NODES}{}", FIG1_DAGS[i]))
}
