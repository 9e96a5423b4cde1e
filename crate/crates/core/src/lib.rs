// SPDX-License-Identifier: MIT
//! Causal reasoning on maximally oriented partially directed acyclic graphs:
//! orientation closure under background knowledge, b-possible ancestral
//! relations, covariate adjustment, semi-local IDA and linear-SEM simulation.

pub mod adjustment;
pub mod error;
pub mod extension;
pub mod fixtures;
pub mod graph;
pub mod ida;
pub mod meek;
pub mod par;
pub mod paths;
pub mod regression;
pub mod sem;

pub use error::{Error, Result};
pub use graph::{parse_graph, NodeId, NodePath, NodeSet, PdagGraph};
pub use par::Execution;
