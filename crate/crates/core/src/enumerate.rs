//! All slope assignments with a prescribed multidegree.
//!
//! A PL function orients the graph by its direction of increase, and that
//! orientation is acyclic. Fixing an acyclic orientation, some vertex has only
//! outgoing edges; its degree leaves finitely many choices for the outgoing
//! slopes. Deleting it and pushing those slopes onto the neighbours'
//! requirements gives a smaller instance of the same problem.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::divisor::{Diagnostics, DivisorError, Multidegree, PLDivisor};
use crate::graph::{Orientation, TropicalGraph};

/// Largest edge count accepted by [`enumerate_slopes`].
pub const MAX_EDGES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("graph has {0} edges; enumeration is limited to {MAX_EDGES}")]
    TooManyEdges(usize),
    #[error("degree sum mismatch: expected {expected}, got {got}")]
    WeightSumMismatch { expected: i64, got: i64 },
    #[error("search bound {bound} is below the certified bound {required}")]
    BoundTooSmall { bound: i64, required: i64 },
    #[error(transparent)]
    Divisor(DivisorError),
}

impl From<DivisorError> for EnumerateError {
    fn from(e: DivisorError) -> Self {
        match e {
            DivisorError::WeightSumMismatch { expected, got } => EnumerateError::WeightSumMismatch { expected, got },
            other => EnumerateError::Divisor(other),
        }
    }
}

/// One slope vector (edge order, reference orientation) with its diagnostics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeAssignment {
    pub slopes: Vec<i64>,
    pub diagnostics: Diagnostics,
}

impl SlopeAssignment {
    pub fn is_nondegenerate(&self) -> bool {
        self.diagnostics.degenerate_edges.is_empty()
    }
}

/// Every slope produced by peeling is at most the total positive requirement
/// `Σ_{r(w) > 0} r(w)` in absolute value: the slopes form a nonnegative
/// acyclic flow whose sources supply exactly that much.
pub fn certified_bound(graph: &TropicalGraph, target: &Multidegree) -> i64 {
    target.residuals(graph).iter().filter(|&&r| r > 0).sum()
}

pub fn enumerate_slopes(graph: &TropicalGraph, target: &Multidegree) -> Result<Vec<SlopeAssignment>, EnumerateError> {
    if graph.num_edges() > MAX_EDGES {
        return Err(EnumerateError::TooManyEdges(graph.num_edges()));
    }
    target.check_sum(graph)?;
    let residual = target.residuals(graph);
    let mut found = BTreeSet::new();
    for orientation in graph.acyclic_orientations() {
        let mut peel = Peel {
            graph,
            orientation: &orientation,
            alive: vec![true; graph.num_vertices()],
            residual: residual.clone(),
            slopes: vec![0; graph.num_edges()],
            found: &mut found,
        };
        peel.run();
    }
    with_diagnostics(graph, found)
}

struct Peel<'a> {
    graph: &'a TropicalGraph,
    orientation: &'a Orientation,
    alive: Vec<bool>,
    residual: Vec<i64>,
    slopes: Vec<i64>,
    found: &'a mut BTreeSet<Vec<i64>>,
}

impl Peel<'_> {
    fn run(&mut self) {
        let source = (0..self.graph.num_vertices()).find(|&v| {
            self.alive[v]
                && self.graph.edges().iter().enumerate().all(|(e, _)| {
                    !matches!(self.orientation.direction(e), Some((t, h)) if h == v && self.alive[t])
                })
        });
        let Some(v) = source else {
            self.found.insert(self.slopes.clone());
            return;
        };
        let out: Vec<(usize, usize)> = (0..self.graph.num_edges())
            .filter_map(|e| match self.orientation.direction(e) {
                Some((t, h)) if t == v && self.alive[h] => Some((e, h)),
                _ => None,
            })
            .collect();
        let need = self.residual[v];
        if need < 0 || (out.is_empty() && need != 0) {
            return;
        }
        self.alive[v] = false;
        self.compose(&out, 0, need);
        self.alive[v] = true;
    }

    /// Splits `left` over the outgoing edges `out[i..]` as nonnegative parts.
    fn compose(&mut self, out: &[(usize, usize)], i: usize, left: i64) {
        let Some(&(e, head)) = out.get(i) else {
            if left == 0 {
                self.run();
            }
            return;
        };
        let range = if i + 1 == out.len() { left..=left } else { 0..=left };
        let reversed = self.orientation.is_reversed(self.graph, e);
        for part in range {
            self.slopes[e] = if reversed { -part } else { part };
            self.residual[head] += part;
            self.compose(out, i + 1, left - part);
            self.residual[head] -= part;
        }
        self.slopes[e] = 0;
    }
}

fn with_diagnostics(graph: &TropicalGraph, found: BTreeSet<Vec<i64>>) -> Result<Vec<SlopeAssignment>, EnumerateError> {
    found
        .into_iter()
        .map(|slopes| {
            let d = PLDivisor::from_slopes(graph, slopes.clone())?;
            Ok(SlopeAssignment {
                slopes,
                diagnostics: d.diagnostics(),
            })
        })
        .collect()
}

/// Exhaustive oracle over `[-bound, bound]^E`: keeps slope vectors with the
/// target multidegree, zero slope on loops, and no directed cycle of strictly
/// increasing edges. The search backtracks as soon as a vertex whose edges
/// are all assigned has the wrong degree, which discards no solution.
pub fn brute_force_slopes(
    graph: &TropicalGraph,
    target: &Multidegree,
    bound: i64,
) -> Result<Vec<SlopeAssignment>, EnumerateError> {
    target.check_sum(graph)?;
    let required = certified_bound(graph, target);
    if bound < required {
        return Err(EnumerateError::BoundTooSmall { bound, required });
    }
    // Loops are pinned to 0; the other edges are filled in order, and a
    // vertex is checked as soon as its last incident edge is set.
    let free: Vec<usize> = (0..graph.num_edges()).filter(|&e| !graph.edges()[e].is_loop()).collect();
    let mut closes: Vec<Vec<usize>> = vec![Vec::new(); free.len() + 1];
    for v in 0..graph.num_vertices() {
        let last = free
            .iter()
            .rposition(|&e| graph.edges()[e].tail == v || graph.edges()[e].head == v)
            .map_or(0, |i| i + 1);
        closes[last].push(v);
    }
    let mut search = BruteSearch {
        graph,
        target: target.degrees(),
        bound,
        free,
        closes,
        slopes: vec![0; graph.num_edges()],
        degree: (0..graph.num_vertices()).map(|v| graph.leg_weight_at(v)).collect(),
        found: BTreeSet::new(),
    };
    if search.closes[0].iter().all(|&v| search.degree[v] == search.target[v]) {
        search.descend(0);
    }
    with_diagnostics(graph, search.found)
}

struct BruteSearch<'a> {
    graph: &'a TropicalGraph,
    target: &'a [i64],
    bound: i64,
    free: Vec<usize>,
    closes: Vec<Vec<usize>>,
    slopes: Vec<i64>,
    degree: Vec<i64>,
    found: BTreeSet<Vec<i64>>,
}

impl BruteSearch<'_> {
    fn descend(&mut self, i: usize) {
        if i == self.free.len() {
            debug_assert_eq!(degrees_of(self.graph, &self.slopes), self.target);
            if increase_is_acyclic(self.graph, &self.slopes) {
                self.found.insert(self.slopes.clone());
            }
            return;
        }
        let e = self.free[i];
        let (t, h) = (self.graph.edges()[e].tail, self.graph.edges()[e].head);
        for x in -self.bound..=self.bound {
            self.slopes[e] = x;
            self.degree[t] += x;
            self.degree[h] -= x;
            if self.closes[i + 1].iter().all(|&v| self.degree[v] == self.target[v]) {
                self.descend(i + 1);
            }
            self.degree[t] -= x;
            self.degree[h] += x;
        }
        self.slopes[e] = 0;
    }
}

fn degrees_of(graph: &TropicalGraph, slopes: &[i64]) -> Vec<i64> {
    let mut d: Vec<i64> = (0..graph.num_vertices()).map(|v| graph.leg_weight_at(v)).collect();
    for (e, &s) in graph.edges().iter().zip(slopes) {
        if !e.is_loop() {
            d[e.tail] += s;
            d[e.head] -= s;
        }
    }
    d
}

/// Kahn's algorithm on the digraph of strictly increasing edges.
fn increase_is_acyclic(graph: &TropicalGraph, slopes: &[i64]) -> bool {
    let nv = graph.num_vertices();
    let arcs: Vec<(usize, usize)> = graph
        .edges()
        .iter()
        .zip(slopes)
        .filter(|(e, _)| !e.is_loop())
        .filter_map(|(e, &s)| match s.signum() {
            1 => Some((e.tail, e.head)),
            -1 => Some((e.head, e.tail)),
            _ => None,
        })
        .collect();
    let mut indeg = vec![0; nv];
    for &(_, h) in &arcs {
        indeg[h] += 1;
    }
    let mut queue: Vec<usize> = (0..nv).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = queue.pop() {
        seen += 1;
        for &(t, h) in &arcs {
            if t == v {
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    queue.push(h);
                }
            }
        }
    }
    seen == nv
}
