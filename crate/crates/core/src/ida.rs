// SPDX-License-Identifier: MIT
//! Semi-local enumeration of possible (joint) parent sets and the resulting
//! multisets of possible total effects.
//!
//! Every subset combination of the intervention nodes' siblings is tried as
//! local background knowledge (chosen siblings point in, the rest point out);
//! a combination is kept when orienting the graph with it does not fail.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::extension::consistent_extension;
use crate::graph::{NodeId, NodeSet, PdagGraph};
use crate::meek::{construct_max_pdag_unchecked, validate_maximal_pdag, BackgroundKnowledge, ClosureOrder};
use crate::par::{map_ordered, Execution};
use crate::regression::{ols, Dataset};

pub const DEDUP_TOLERANCE: f64 = 1e-8;
pub const MAX_SIBLING_BITS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParentTuple {
    /// Parent set of each intervention node, in intervention order.
    pub parents: Vec<NodeSet>,
    pub local_bg: BackgroundKnowledge,
    /// The input graph oriented by `local_bg`.
    pub oriented: PdagGraph,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParentSetFamily {
    pub xs: Vec<NodeId>,
    pub tuples: Vec<ParentTuple>,
}

impl ParentSetFamily {
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn parent_sets(&self) -> Vec<Vec<NodeSet>> {
        self.tuples.iter().map(|t| t.parents.clone()).collect()
    }
}

pub fn possible_parent_sets(g: &PdagGraph, xs: &[NodeId]) -> Result<ParentSetFamily> {
    possible_parent_sets_with(g, xs, Execution::default())
}

/// Combinations are visited as a binary counter whose bit `k` selects the
/// `k`-th sibling in the concatenated sibling lists, so the output order does
/// not depend on `exec`.
pub fn possible_parent_sets_with(g: &PdagGraph, xs: &[NodeId], exec: Execution) -> Result<ParentSetFamily> {
    check_interventions(g, xs)?;
    if !validate_maximal_pdag(g).is_valid() {
        return Err(Error::Precondition("input is not a valid maximal PDAG".into()));
    }
    let sibs: Vec<Vec<NodeId>> =
        xs.iter().enumerate().map(|(i, &x)| g.siblings(x).filter(|s| !xs[..i].contains(s)).collect()).collect();
    let bits: usize = sibs.iter().map(Vec::len).sum();
    if bits > MAX_SIBLING_BITS {
        return Err(Error::Parameter(format!(
            "{bits} sibling edges to enumerate exceeds the limit of {MAX_SIBLING_BITS}"
        )));
    }
    let masks: Vec<u64> = (0..1u64 << bits).collect();
    let order = ClosureOrder::default();
    let found = map_ordered(masks, exec, |mask| {
        let mut bg = BackgroundKnowledge::new();
        let mut bit = 0;
        for (i, &x) in xs.iter().enumerate() {
            for &s in &sibs[i] {
                if mask >> bit & 1 == 1 {
                    bg.push(s, x);
                } else {
                    bg.push(x, s);
                }
                bit += 1;
            }
        }
        let oriented = construct_max_pdag_unchecked(g, &bg, &order).into_graph()?;
        let parents = xs.iter().map(|&x| oriented.parents(x).collect()).collect();
        Some(ParentTuple { parents, local_bg: bg, oriented })
    });
    Ok(ParentSetFamily { xs: xs.to_vec(), tuples: found.into_iter().flatten().collect() })
}

fn check_interventions(g: &PdagGraph, xs: &[NodeId]) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::Precondition("no intervention nodes".into()));
    }
    for (i, &x) in xs.iter().enumerate() {
        if x >= g.n() {
            return Err(Error::UnknownNode(format!("#{x}")));
        }
        if xs[..i].contains(&x) {
            return Err(Error::Precondition(format!("{} listed twice", g.name(x))));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EffectEntry {
    pub parents: Vec<NodeSet>,
    /// One value per intervention node.
    pub effect: Result<Vec<f64>>,
}

/// Possible effects, one entry per accepted parent tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectMultiset {
    pub xs: Vec<NodeId>,
    pub y: NodeId,
    pub entries: Vec<EffectEntry>,
}

impl EffectMultiset {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Successfully estimated effect vectors, in tuple order.
    pub fn values(&self) -> Vec<Vec<f64>> {
        self.entries.iter().filter_map(|e| e.effect.as_ref().ok().cloned()).collect()
    }

    /// Distinct effect vectors: sorted lexicographically, then each vector is
    /// merged into the first kept one within `tol` in every coordinate.
    pub fn unique(&self, tol: f64) -> Vec<Vec<f64>> {
        let mut vals = self.values();
        vals.sort_by(|a, b| {
            a.iter().zip(b).map(|(u, v)| u.total_cmp(v)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut kept: Vec<Vec<f64>> = Vec::new();
        for v in vals {
            let dup = kept.iter().any(|k| k.iter().zip(&v).all(|(a, b)| (a - b).abs() <= tol));
            if !dup {
                kept.push(v);
            }
        }
        kept
    }

    pub fn n_unique(&self, tol: f64) -> usize {
        self.unique(tol).len()
    }
}

/// Effect of `x` on `y` for every possible parent set `P` of `x`: zero when
/// `y` is in `P`, otherwise the coefficient of `x` when regressing `y` on `x`
/// and `P`.
pub fn ida_effects(g: &PdagGraph, x: NodeId, y: NodeId, data: &Dataset) -> Result<EffectMultiset> {
    ida_effects_with(g, x, y, data, Execution::default())
}

pub fn ida_effects_with(
    g: &PdagGraph,
    x: NodeId,
    y: NodeId,
    data: &Dataset,
    exec: Execution,
) -> Result<EffectMultiset> {
    check_outcome(g, &[x], y)?;
    let data = data.aligned_to(g)?;
    let family = possible_parent_sets_with(g, &[x], exec)?;
    let entries = map_ordered(family.tuples, exec, |t| {
        let pa = &t.parents[0];
        let effect = if pa.contains(&y) {
            Ok(vec![0.0])
        } else {
            let regressors: Vec<NodeId> = std::iter::once(x).chain(pa.iter().copied()).collect();
            ols(data.values(), y, &regressors)
                .map(|fit| vec![fit.coefficients[0]])
                .ok_or_else(|| singular(g, y, &regressors))
        };
        EffectEntry { parents: t.parents, effect }
    });
    Ok(EffectMultiset { xs: vec![x], y, entries })
}

/// Joint effects of `xs` on `y`: for each tuple, one DAG consistent with the
/// tuple-oriented graph is fitted node by node and the total effects are read
/// off `(I - B)^-1`.
pub fn joint_ida_effects(g: &PdagGraph, xs: &[NodeId], y: NodeId, data: &Dataset) -> Result<EffectMultiset> {
    joint_ida_effects_with(g, xs, y, data, Execution::default())
}

pub fn joint_ida_effects_with(
    g: &PdagGraph,
    xs: &[NodeId],
    y: NodeId,
    data: &Dataset,
    exec: Execution,
) -> Result<EffectMultiset> {
    check_outcome(g, xs, y)?;
    let data = data.aligned_to(g)?;
    let family = possible_parent_sets_with(g, xs, exec)?;
    let entries = map_ordered(family.tuples, exec, |t| {
        let d = consistent_extension(&t.oriented).expect("accepted tuples are extendable");
        let effect = fitted_total_effects(&d, &data, xs, y);
        EffectEntry { parents: t.parents, effect }
    });
    Ok(EffectMultiset { xs: xs.to_vec(), y, entries })
}

fn fitted_total_effects(d: &PdagGraph, data: &Dataset, xs: &[NodeId], y: NodeId) -> Result<Vec<f64>> {
    let n = d.n();
    let mut b = DMatrix::<f64>::zeros(n, n);
    // only ancestors of y contribute to its total effects
    let relevant = d.ancestors(&[y].into());
    for &v in &relevant {
        let pa: Vec<NodeId> = d.parents(v).collect();
        if pa.is_empty() {
            continue;
        }
        let fit = ols(data.values(), v, &pa).ok_or_else(|| singular(d, v, &pa))?;
        for (k, &u) in pa.iter().enumerate() {
            b[(v, u)] = fit.coefficients[k];
        }
    }
    Ok(total_effects(&b, xs, y))
}

/// Entries `[(I - B)^-1]_{y, x}` for a coefficient matrix with `B[(child,
/// parent)]` and acyclic support.
pub(crate) fn total_effects(b: &DMatrix<f64>, xs: &[NodeId], y: NodeId) -> Vec<f64> {
    let n = b.nrows();
    let m = DMatrix::<f64>::identity(n, n) - b;
    let inv = m.try_inverse().expect("I - B is unit triangular up to permutation");
    xs.iter().map(|&x| inv[(y, x)]).collect()
}

fn singular(g: &PdagGraph, response: NodeId, regressors: &[NodeId]) -> Error {
    Error::SingularDesign {
        response: g.name(response).to_string(),
        regressors: regressors.iter().map(|&v| g.name(v)).collect::<Vec<_>>().join(","),
    }
}

fn check_outcome(g: &PdagGraph, xs: &[NodeId], y: NodeId) -> Result<()> {
    if y >= g.n() {
        return Err(Error::UnknownNode(format!("#{y}")));
    }
    if xs.contains(&y) {
        return Err(Error::Precondition(format!("{} is both intervention and outcome", g.name(y))));
    }
    Ok(())
}
