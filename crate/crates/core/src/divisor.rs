//! Piecewise-linear divisors on tropical graphs.
//!
//! A [`PLDivisor`] is an integer slope on every edge (measured along the
//! edge's reference orientation). Its minimal base is the quotient of the
//! free group on edge lengths `ℓ_e` by the loop relations `Σ_{e∈γ} ±s_e ℓ_e`,
//! and its vertex values live in that quotient.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{RawGraph, TropicalGraph};
use crate::lattice::{GroupElem, LatticeError, LatticeQuotient, QuotientSummary};
use crate::polyhedral::{self, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisorError {
    #[error("self-loop `{0}` must have slope 0")]
    LoopSlopeNonzero(String),
    #[error("no slope given for edge `{0}`")]
    MissingSlope(String),
    #[error("slope given for unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("target mentions unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("degree sum mismatch: expected {expected}, got {got}")]
    WeightSumMismatch { expected: i64, got: i64 },
    #[error("graph is not a tree")]
    NotATree,
    #[error("edge `{0}` has non-positive length")]
    NonPositiveLength(String),
    #[error("no harmonic solution: degree sums disagree")]
    Infeasible,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Integer degree per vertex, in graph vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multidegree {
    degrees: Vec<i64>,
}

impl Multidegree {
    pub fn new(degrees: Vec<i64>) -> Self {
        Multidegree { degrees }
    }

    pub fn zero(graph: &TropicalGraph) -> Self {
        Multidegree {
            degrees: vec![0; graph.num_vertices()],
        }
    }

    /// Reads `{vertex-id: degree}`; vertices left out get degree 0.
    pub fn from_map(graph: &TropicalGraph, map: &BTreeMap<String, i64>) -> Result<Self, DivisorError> {
        let mut degrees = vec![0; graph.num_vertices()];
        for (id, &d) in map {
            let v = graph
                .vertex_index(id)
                .ok_or_else(|| DivisorError::UnknownVertex(id.clone()))?;
            degrees[v] = d;
        }
        Ok(Multidegree { degrees })
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn get(&self, v: usize) -> i64 {
        self.degrees[v]
    }

    pub fn total(&self) -> i64 {
        self.degrees.iter().sum()
    }

    /// Edge-slope requirement `r(v) = D(v) - Σ_{legs at v} a_i`.
    pub fn residuals(&self, graph: &TropicalGraph) -> Vec<i64> {
        (0..graph.num_vertices())
            .map(|v| self.degrees[v] - graph.leg_weight_at(v))
            .collect()
    }

    pub fn to_map(&self, graph: &TropicalGraph) -> BTreeMap<String, i64> {
        graph
            .vertices()
            .iter()
            .zip(&self.degrees)
            .map(|(v, &d)| (v.id.clone(), d))
            .collect()
    }

    /// Errors unless the degree sum equals the total leg weight.
    pub fn check_sum(&self, graph: &TropicalGraph) -> Result<(), DivisorError> {
        let expected = graph.leg_weight_sum();
        if self.total() != expected {
            return Err(DivisorError::WeightSumMismatch {
                expected,
                got: self.total(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    Zero,
    Canonical,
}

/// Multidegree targets. `Zero` requires `Σ a_i = 0`. `Canonical` requires
/// `Σ a_i = 2g - 2` and asks for degree `2 genus(v) - 2 + #(edge-ends at v)`
/// on each vertex; the leg weights then account for the markings.
pub fn target_multidegree(graph: &TropicalGraph, kind: TargetKind) -> Result<Multidegree, DivisorError> {
    let (expected, degrees) = match kind {
        TargetKind::Zero => (0, vec![0; graph.num_vertices()]),
        TargetKind::Canonical => (
            2 * graph.genus() as i64 - 2,
            (0..graph.num_vertices())
                .map(|v| 2 * graph.vertices()[v].genus as i64 - 2 + graph.edge_ends_at(v) as i64)
                .collect(),
        ),
    };
    let got = graph.leg_weight_sum();
    if got != expected {
        return Err(DivisorError::WeightSumMismatch { expected, got });
    }
    Ok(Multidegree { degrees })
}

/// A PL function on the tropicalization, determined by its edge slopes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLDivisor {
    graph: TropicalGraph,
    slopes: Vec<i64>,
    base: LatticeQuotient,
    /// `α(v)` as an integer combination of the `ℓ_e`, after normalization.
    lifts: Vec<Vec<i64>>,
    values: Vec<GroupElem>,
    /// Each loop relation evaluated at unit edge lengths.
    loop_sums: Vec<i64>,
}

impl PLDivisor {
    /// Builds the divisor and its minimal base from slopes keyed by edge id.
    pub fn new(graph: &TropicalGraph, slopes: &BTreeMap<String, i64>) -> Result<Self, DivisorError> {
        if let Some(id) = slopes.keys().find(|id| graph.edge_index(id).is_none()) {
            return Err(DivisorError::UnknownEdge(id.clone()));
        }
        let vec = graph
            .edges()
            .iter()
            .map(|e| {
                slopes
                    .get(&e.id)
                    .copied()
                    .ok_or_else(|| DivisorError::MissingSlope(e.id.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_slopes(graph, vec)
    }

    /// Builds the divisor from slopes in edge order.
    pub fn from_slopes(graph: &TropicalGraph, slopes: Vec<i64>) -> Result<Self, DivisorError> {
        assert_eq!(slopes.len(), graph.num_edges(), "one slope per edge");
        let n = graph.num_edges();
        for (e, &s) in graph.edges().iter().zip(&slopes) {
            if e.is_loop() && s != 0 {
                return Err(DivisorError::LoopSlopeNonzero(e.id.clone()));
            }
        }

        let root = graph.basepoint();
        let (parent, order) = graph.spanning_tree(root);
        let mut potential = vec![vec![0i64; n]; graph.num_vertices()];
        for &v in order.iter().skip(1) {
            let ei = parent[v].expect("non-root vertices have a tree edge");
            let e = &graph.edges()[ei];
            let from = e.other(v);
            let mut p = potential[from].clone();
            // α(head) - α(tail) = s_e ℓ_e
            p[ei] += if e.head == v { slopes[ei] } else { -slopes[ei] };
            potential[v] = p;
        }

        let mut relations = Vec::new();
        let mut loop_sums = Vec::new();
        for (ei, e) in graph.edges().iter().enumerate() {
            if e.is_loop() || parent.contains(&Some(ei)) {
                continue;
            }
            let mut r: Vec<i64> = potential[e.tail].iter().zip(&potential[e.head]).map(|(a, b)| a - b).collect();
            r[ei] += slopes[ei];
            loop_sums.push(r.iter().sum());
            relations.push(r);
        }
        let base = LatticeQuotient::new(n, &relations)?;

        let raw: Vec<GroupElem> = potential.iter().map(|p| base.reduce(p)).collect();
        let shift = minimum_vertex(&base, &raw).unwrap_or(root);
        let lifts: Vec<Vec<i64>> = potential
            .iter()
            .map(|p| p.iter().zip(&potential[shift]).map(|(a, b)| a - b).collect())
            .collect();
        let values = lifts.iter().map(|p| base.reduce(p)).collect();

        Ok(PLDivisor {
            graph: graph.clone(),
            slopes,
            base,
            lifts,
            values,
            loop_sums,
        })
    }

    pub fn graph(&self) -> &TropicalGraph {
        &self.graph
    }

    pub fn slopes(&self) -> &[i64] {
        &self.slopes
    }

    pub fn slope_map(&self) -> BTreeMap<String, i64> {
        self.graph
            .edges()
            .iter()
            .zip(&self.slopes)
            .map(|(e, &s)| (e.id.clone(), s))
            .collect()
    }

    /// The minimal base: `Z^E` modulo the loop relations.
    pub fn base(&self) -> &LatticeQuotient {
        &self.base
    }

    pub fn values(&self) -> &[GroupElem] {
        &self.values
    }

    pub fn value(&self, v: usize) -> &GroupElem {
        &self.values[v]
    }

    /// `α(v)` as a linear form in the edge lengths.
    pub fn value_form(&self, v: usize) -> &[i64] {
        &self.lifts[v]
    }

    /// Edges whose length becomes 0 after sharpening the base.
    pub fn degenerate_edges(&self) -> Vec<usize> {
        self.base.degenerate_generators()
    }

    pub fn is_degenerate(&self) -> bool {
        !self.base.is_sharp() || !self.degenerate_edges().is_empty()
    }

    /// True when every loop relation vanishes at unit edge lengths, i.e. the
    /// slopes come from an integer function on vertices (a twist by
    /// components in a one-parameter family).
    pub fn is_relationless(&self) -> bool {
        self.loop_sums.iter().all(|&s| s == 0)
    }

    pub fn multidegree(&self) -> Multidegree {
        let g = &self.graph;
        let mut degrees: Vec<i64> = (0..g.num_vertices()).map(|v| g.leg_weight_at(v)).collect();
        for (e, &s) in g.edges().iter().zip(&self.slopes) {
            if e.is_loop() {
                continue;
            }
            degrees[e.tail] += s;
            degrees[e.head] -= s;
        }
        Multidegree { degrees }
    }

    pub fn diagnostics(&self) -> Diagnostics {
        Diagnostics {
            sharp: self.base.is_sharp(),
            degenerate_edges: self
                .degenerate_edges()
                .into_iter()
                .map(|e| self.graph.edges()[e].id.clone())
                .collect(),
            relationless: self.is_relationless(),
        }
    }

    pub fn to_record(&self) -> DivisorRecord {
        let d = self.diagnostics();
        DivisorRecord {
            graph: self.graph.to_raw(),
            slopes: self.slope_map(),
            derived: DerivedBlock {
                base: self.base.summary(),
                values: self
                    .graph
                    .vertices()
                    .iter()
                    .zip(&self.values)
                    .map(|(v, x)| (v.id.clone(), x.clone()))
                    .collect(),
                degenerate_edges: d.degenerate_edges,
                sharp: d.sharp,
                relationless: d.relationless,
            },
        }
    }
}

/// A vertex whose value is below every other value, if one exists.
fn minimum_vertex(base: &LatticeQuotient, values: &[GroupElem]) -> Option<usize> {
    (0..values.len()).find(|&v| values.iter().all(|w| base.leq(&values[v], w).unwrap_or(false)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub sharp: bool,
    pub degenerate_edges: Vec<String>,
    pub relationless: bool,
}

/// JSON form of a divisor: the graph, its slopes, and everything derived.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorRecord {
    pub graph: RawGraph,
    pub slopes: BTreeMap<String, i64>,
    pub derived: DerivedBlock,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedBlock {
    pub base: QuotientSummary,
    pub values: BTreeMap<String, GroupElem>,
    pub degenerate_edges: Vec<String>,
    pub sharp: bool,
    pub relationless: bool,
}

/// The unique slope assignment on a tree with the given multidegree: the
/// slope leaving a side `S` of an edge is `Σ_{v∈S} r(v)`.
pub fn tree_twist(graph: &TropicalGraph, target: &Multidegree) -> Result<PLDivisor, DivisorError> {
    if !graph.is_tree() {
        return Err(DivisorError::NotATree);
    }
    target.check_sum(graph)?;
    let r = target.residuals(graph);
    let root = graph.basepoint();
    let (parent, order) = graph.spanning_tree(root);
    let mut subtree = r.clone();
    for &v in order.iter().rev() {
        if let Some(ei) = parent[v] {
            let up = graph.edges()[ei].other(v);
            subtree[up] += subtree[v];
        }
    }
    let slopes = graph
        .edges()
        .iter()
        .enumerate()
        .map(|(ei, e)| {
            if parent[e.tail] == Some(ei) {
                subtree[e.tail]
            } else {
                -subtree[e.head]
            }
        })
        .collect();
    PLDivisor::from_slopes(graph, slopes)
}

/// Affine solution set of the real relaxation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicSolution {
    /// A solution with value 0 at the basepoint.
    pub particular: Vec<Rational>,
    /// Dimension of the solution set.
    pub dimension: usize,
}

/// Solves `Σ_{e at v} (x(other) - x(v)) / len(e) + Σ_{legs at v} a_i = target(v)`
/// over the rationals.
pub fn harmonic_solve(
    graph: &TropicalGraph,
    lengths: &[Rational],
    target: &Multidegree,
) -> Result<HarmonicSolution, DivisorError> {
    assert_eq!(lengths.len(), graph.num_edges(), "one length per edge");
    for (e, l) in graph.edges().iter().zip(lengths) {
        if !l.is_positive() {
            return Err(DivisorError::NonPositiveLength(e.id.clone()));
        }
    }
    if target.check_sum(graph).is_err() {
        return Err(DivisorError::Infeasible);
    }
    let nv = graph.num_vertices();
    let r = target.residuals(graph);
    // Augmented rows [L | r].
    let mut rows = vec![vec![Rational::zero(); nv + 1]; nv];
    for (e, l) in graph.edges().iter().zip(lengths) {
        if e.is_loop() {
            continue;
        }
        let w = l.recip();
        for (v, o) in [(e.tail, e.head), (e.head, e.tail)] {
            rows[v][o] += &w;
            rows[v][v] -= &w;
        }
    }
    for v in 0..nv {
        rows[v][nv] = rat(r[v]);
    }
    let laplacian: Vec<Vec<Rational>> = rows.iter().map(|row| row[..nv].to_vec()).collect();
    let rank = polyhedral::rank(&laplacian);
    let pivots = polyhedral::rref(&mut rows);
    if pivots.contains(&nv) {
        return Err(DivisorError::Infeasible);
    }
    let mut x = vec![Rational::zero(); nv];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = rows[i][nv].clone();
    }
    let base = x[graph.basepoint()].clone();
    for xi in x.iter_mut() {
        *xi -= &base;
    }
    Ok(HarmonicSolution {
        particular: x,
        dimension: nv - rank,
    })
}
