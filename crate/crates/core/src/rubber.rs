//! Alignment and the rubber package.
//!
//! Points of the base cone are edge-length vectors `λ >= 0` satisfying the
//! loop relations. Vertex values become linear forms in `λ`, and the cone is
//! cut along the hyperplanes `α(v) = α(w)` into cells, one per total preorder
//! of the values that is realized in the interior. Inside a cell the values
//! are totally ordered, which yields a chain of levels, the chain curve, and
//! a subdivision of the source graph mapping onto that chain.

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::divisor::PLDivisor;
use crate::graph::{GraphError, RawEdge, RawGraph, RawLeg, RawVertex, TropicalGraph};
use crate::lattice::{hermite_rows, GroupElem, LatticeError};
use crate::polyhedral::{self, rat, rat_frac, LinearConstraint, Rational, Relation};

/// Largest vertex count accepted by [`rub_subdivision`].
pub const MAX_FAN_VERTICES: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RubberError {
    #[error("divisor is degenerate: some edge length vanishes in the sharpened base")]
    DegenerateDivisor,
    #[error("vertex values are not totally ordered by this cell")]
    NotTotallyOrdered,
    #[error("graph has {0} vertices; the subdivision is limited to {MAX_FAN_VERTICES}")]
    TooManyVertices(usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Whether every pair of vertex values is comparable in the base monoid.
pub fn is_aligned(d: &PLDivisor) -> Result<bool, RubberError> {
    let base = d.base();
    let n = d.graph().num_vertices();
    for v in 0..n {
        for w in v + 1..n {
            let (x, y) = (d.value(v), d.value(w));
            if !base.leq(x, y)? && !base.leq(y, x)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn eval_form(form: &[i64], point: &[Rational]) -> Rational {
    form.iter().zip(point).map(|(&c, x)| rat(c) * x).sum()
}

fn diff(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// One cone of the subdivision: vertices grouped into levels, lowest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    levels: Vec<Vec<usize>>,
    /// Linear forms in the edge lengths: `(form, Equal)` for ties inside a
    /// level, `(form, AtLeast)` meaning `form >= 0` between adjacent levels.
    inequalities: Vec<(Vec<i64>, Relation)>,
    witness: Vec<Rational>,
    dimension: usize,
    maximal: bool,
}

impl Cell {
    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    pub fn level_of(&self, v: usize) -> usize {
        self.levels
            .iter()
            .position(|l| l.contains(&v))
            .expect("every vertex sits on a level")
    }

    pub fn inequalities(&self) -> &[(Vec<i64>, Relation)] {
        &self.inequalities
    }

    /// A point in the relative interior, with every edge length positive.
    pub fn witness(&self) -> &[Rational] {
        &self.witness
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_maximal(&self) -> bool {
        self.maximal
    }

    /// Sign of `α(v_i) - α(v_j)` over pairs `i < j`.
    pub fn sign_vector(&self, num_vertices: usize) -> Vec<i8> {
        let mut out = Vec::new();
        for i in 0..num_vertices {
            for j in i + 1..num_vertices {
                out.push(match self.level_of(i).cmp(&self.level_of(j)) {
                    std::cmp::Ordering::Less => -1,
                    std::cmp::Ordering::Equal => 0,
                    std::cmp::Ordering::Greater => 1,
                });
            }
        }
        out
    }

    /// The closed cell's inequalities hold at `point` (assumed in the base cone).
    pub fn contains_closed(&self, point: &[Rational]) -> bool {
        self.inequalities.iter().all(|(f, rel)| {
            let x = eval_form(f, point);
            match rel {
                Relation::Equal => x.is_zero(),
                Relation::AtLeast => !x.is_negative(),
            }
        })
    }

    /// `point` lies in the relative interior: ties hold, strict gaps are positive.
    pub fn contains_open(&self, point: &[Rational]) -> bool {
        self.inequalities.iter().all(|(f, rel)| {
            let x = eval_form(f, point);
            match rel {
                Relation::Equal => x.is_zero(),
                Relation::AtLeast => x.is_positive(),
            }
        })
    }
}

/// Builds the cell for a given ordered grouping of the vertices, if its
/// relative interior meets the interior of the base cone.
pub fn cell_for_levels(d: &PLDivisor, levels: Vec<Vec<usize>>) -> Option<Cell> {
    let ne = d.graph().num_edges();
    let rels = d.base().relations();
    let mut inequalities = Vec::new();
    for level in &levels {
        for pair in level.windows(2) {
            inequalities.push((diff(d.value_form(pair[1]), d.value_form(pair[0])), Relation::Equal));
        }
    }
    for pair in levels.windows(2) {
        inequalities.push((
            diff(d.value_form(pair[1][0]), d.value_form(pair[0][0])),
            Relation::AtLeast,
        ));
    }

    let to_rat = |f: &[i64]| f.iter().map(|&x| rat(x)).collect::<Vec<_>>();
    let mut system: Vec<LinearConstraint> = rels
        .iter()
        .map(|r| LinearConstraint::equal(to_rat(r), rat(0)))
        .collect();
    for e in 0..ne {
        let mut unit = vec![rat(0); ne];
        unit[e] = rat(1);
        system.push(LinearConstraint::at_least(unit, rat(1)));
    }
    // Homogeneous strict inequalities `f > 0` are feasible iff `f >= 1` is.
    for (f, rel) in &inequalities {
        system.push(match rel {
            Relation::Equal => LinearConstraint::equal(to_rat(f), rat(0)),
            Relation::AtLeast => LinearConstraint::at_least(to_rat(f), rat(1)),
        });
    }
    let witness = polyhedral::feasible_point(ne, &system)?;

    let mut span: Vec<Vec<Rational>> = rels.iter().map(|r| to_rat(r)).collect();
    let cone_dim = ne - polyhedral::rank(&span);
    span.extend(
        inequalities
            .iter()
            .filter(|(_, rel)| *rel == Relation::Equal)
            .map(|(f, _)| to_rat(f)),
    );
    let dimension = ne - polyhedral::rank(&span);
    Some(Cell {
        levels,
        inequalities,
        witness,
        dimension,
        maximal: dimension == cone_dim,
    })
}

/// The cell of an aligned divisor: its values in their own order.
pub fn aligned_cell(d: &PLDivisor) -> Result<Cell, RubberError> {
    if d.is_degenerate() {
        return Err(RubberError::DegenerateDivisor);
    }
    if !is_aligned(d)? {
        return Err(RubberError::NotTotallyOrdered);
    }
    let base = d.base();
    let mut order: Vec<usize> = (0..d.graph().num_vertices()).collect();
    // Comparable values: count how many values lie strictly below.
    let below = |v: usize| -> Result<usize, RubberError> {
        let mut k = 0;
        for w in 0..d.graph().num_vertices() {
            if d.value(w) != d.value(v) && base.leq(d.value(w), d.value(v))? {
                k += 1;
            }
        }
        Ok(k)
    };
    let ranks = order.iter().map(|&v| below(v)).collect::<Result<Vec<_>, _>>()?;
    order.sort_by_key(|&v| (ranks[v], v));
    let mut levels: Vec<Vec<usize>> = Vec::new();
    for v in order {
        match levels.last_mut() {
            Some(l) if d.value(l[0]) == d.value(v) => l.push(v),
            _ => levels.push(vec![v]),
        }
    }
    cell_for_levels(d, levels).ok_or(RubberError::NotTotallyOrdered)
}

/// The cone complex subdividing the base cone along `α(v) = α(w)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubdivisionFan {
    /// Extreme rays of `{λ >= 0 : Kλ = 0}`, as primitive integer vectors.
    pub base_rays: Vec<Vec<i64>>,
    pub base_dimension: usize,
    /// Cells in lexicographic order of their sign vectors.
    pub cells: Vec<Cell>,
}

impl SubdivisionFan {
    pub fn maximal_cells(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.maximal)
    }
}

pub fn rub_subdivision(d: &PLDivisor) -> Result<SubdivisionFan, RubberError> {
    let nv = d.graph().num_vertices();
    if nv > MAX_FAN_VERTICES {
        return Err(RubberError::TooManyVertices(nv));
    }
    if d.is_degenerate() {
        return Err(RubberError::DegenerateDivisor);
    }
    let mut cells: Vec<Cell> = ordered_partitions(nv)
        .into_iter()
        .filter_map(|levels| cell_for_levels(d, levels))
        .collect();
    cells.sort_by_key(|c| c.sign_vector(nv));
    let base_rays = base_rays(d);
    let rels: Vec<Vec<Rational>> = d
        .base()
        .relations()
        .iter()
        .map(|r| r.iter().map(|&x| rat(x)).collect())
        .collect();
    Ok(SubdivisionFan {
        base_rays,
        base_dimension: d.graph().num_edges() - polyhedral::rank(&rels),
        cells,
    })
}

impl SubdivisionFan {
    /// A random point in the relative interior of the base cone: a positive
    /// rational combination of all base rays.
    pub fn sample_base_point<R: rand::Rng>(&self, rng: &mut R) -> Vec<Rational> {
        let ne = self.base_rays.first().map_or(0, |r| r.len());
        let mut point = vec![rat(0); ne];
        for ray in &self.base_rays {
            let c = rat_frac(rng.gen_range(1..=1000), rng.gen_range(1..=1000));
            for (x, &r) in point.iter_mut().zip(ray) {
                *x += &c * rat(r);
            }
        }
        point
    }

    /// Counts, for `point`, the closed cells and the open cells containing it.
    pub fn membership_counts(&self, point: &[Rational]) -> (usize, usize) {
        let closed = self.cells.iter().filter(|c| c.contains_closed(point)).count();
        let open = self.cells.iter().filter(|c| c.contains_open(point)).count();
        (closed, open)
    }
}

/// Every ordered set partition of `0..n`, each block sorted.
pub fn ordered_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(items: &[usize], out: &mut Vec<Vec<Vec<usize>>>, prefix: &mut Vec<Vec<usize>>) {
        if items.is_empty() {
            out.push(prefix.clone());
            return;
        }
        let k = items.len();
        for mask in 1u32..(1 << k) {
            let (block, rest): (Vec<usize>, Vec<usize>) = (0..k).partition(|&i| mask & (1 << i) != 0);
            prefix.push(block.iter().map(|&i| items[i]).collect());
            let rest: Vec<usize> = rest.iter().map(|&i| items[i]).collect();
            go(&rest, out, prefix);
            prefix.pop();
        }
    }
    let items: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    go(&items, &mut out, &mut Vec::new());
    out
}

/// Extreme rays of `{λ >= 0 : Kλ = 0}`: nonnegative kernel vectors with
/// minimal support.
fn base_rays(d: &PLDivisor) -> Vec<Vec<i64>> {
    let ne = d.graph().num_edges();
    let rels = d.base().relations();
    let mut rays = Vec::new();
    for support in 1u32..(1 << ne) {
        let cols: Vec<usize> = (0..ne).filter(|&e| support & (1 << e) != 0).collect();
        let rows: Vec<Vec<Rational>> = rels
            .iter()
            .map(|r| cols.iter().map(|&c| rat(r[c])).collect())
            .collect();
        let ker = polyhedral::kernel(&rows, cols.len());
        let [v] = ker.as_slice() else {
            continue;
        };
        let ints = polyhedral::primitive_integer(v);
        let sign = ints.iter().find(|x| !x.is_zero()).map(|x| x.signum());
        let Some(sign) = sign else {
            continue;
        };
        if ints.iter().all(|x| x.signum() == sign) {
            let mut ray = vec![0i64; ne];
            for (&c, x) in cols.iter().zip(&ints) {
                ray[c] = (x * &sign).to_i64().expect("ray entries fit in i64");
            }
            rays.push(ray);
        }
    }
    rays.sort();
    rays
}

/// Sorted distinct values normalized to start at 0, and their gaps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Division {
    /// `γ_0 = 0 < γ_1 < … < γ_m` in the base group.
    pub levels: Vec<GroupElem>,
    /// The same levels as linear forms in the edge lengths.
    pub level_forms: Vec<Vec<i64>>,
    /// `δ_i = γ_{i+1} - γ_i`.
    pub gaps: Vec<GroupElem>,
    pub vertex_level: Vec<usize>,
}

fn check_cell(d: &PLDivisor, cell: &Cell) -> Result<(), RubberError> {
    let nv = d.graph().num_vertices();
    let mut seen = vec![false; nv];
    for &v in cell.levels.iter().flatten() {
        if v >= nv || std::mem::replace(&mut seen[v], true) {
            return Err(RubberError::NotTotallyOrdered);
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(RubberError::NotTotallyOrdered);
    }
    // The witness must realize this divisor's order, not just the cell's forms.
    let w = &cell.witness;
    if w.len() != d.graph().num_edges() || w.iter().any(|x| !x.is_positive()) {
        return Err(RubberError::NotTotallyOrdered);
    }
    for r in d.base().relations() {
        if !eval_form(r, w).is_zero() {
            return Err(RubberError::NotTotallyOrdered);
        }
    }
    let at = |v: usize| eval_form(d.value_form(v), w);
    for level in &cell.levels {
        if level.iter().any(|&v| at(v) != at(level[0])) {
            return Err(RubberError::NotTotallyOrdered);
        }
    }
    for pair in cell.levels.windows(2) {
        if at(pair[1][0]) <= at(pair[0][0]) {
            return Err(RubberError::NotTotallyOrdered);
        }
    }
    Ok(())
}

pub fn division_of(d: &PLDivisor, cell: &Cell) -> Result<Division, RubberError> {
    check_cell(d, cell)?;
    let base = d.base();
    let first = cell.levels[0][0];
    let level_forms: Vec<Vec<i64>> = cell
        .levels
        .iter()
        .map(|l| diff(d.value_form(l[0]), d.value_form(first)))
        .collect();
    let levels: Vec<GroupElem> = level_forms.iter().map(|f| base.reduce(f)).collect();
    let gaps = levels.windows(2).map(|p| p[1].sub(&p[0])).collect();
    let vertex_level = (0..d.graph().num_vertices()).map(|v| cell.level_of(v)).collect();
    Ok(Division {
        levels,
        level_forms,
        gaps,
        vertex_level,
    })
}

/// Node `i` joins components `i - 1` and `i` and carries smoothing parameter
/// `δ_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainNode {
    pub joins: (usize, usize),
    pub parameter: GroupElem,
}

/// A 2-marked genus-0 chain: components `U_0 … U_m`, marking `0` on `U_0`
/// and marking `∞` on `U_m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCurve {
    pub components: usize,
    pub nodes: Vec<ChainNode>,
    pub zero_marking: usize,
    pub infinity_marking: usize,
}

pub fn chain_curve(division: &Division) -> ChainCurve {
    let m = division.gaps.len();
    ChainCurve {
        components: m + 1,
        nodes: division
            .gaps
            .iter()
            .enumerate()
            .map(|(i, g)| ChainNode {
                joins: (i, i + 1),
                parameter: g.clone(),
            })
            .collect(),
        zero_marking: 0,
        infinity_marking: m,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum VertexOrigin {
    Original { vertex: String },
    Inserted { edge: String },
}

/// Source-curve side of the rubber package.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RubberData {
    pub subdivided: TropicalGraph,
    pub vertex_origin: Vec<VertexOrigin>,
    /// Original edge index behind each edge of the subdivision.
    pub edge_origin: Vec<usize>,
    /// Slope of each subdivided edge along its reference orientation.
    pub slopes: Vec<i64>,
    /// Length of each subdivided edge, in free coordinates of the base
    /// (rational once the lattice has been refined).
    pub lengths: Vec<Vec<Rational>>,
    pub level_map: Vec<usize>,
    /// Level values in free coordinates.
    pub level_values: Vec<Vec<Rational>>,
    /// `|slope|` of each non-vertical edge, `None` for vertical ones.
    pub expansion_factors: Vec<Option<u64>>,
    pub lattice_extension_index: u64,
    pub no_vertex_on_node: bool,
    pub every_level_covered_by_stable: bool,
    pub chain: ChainCurve,
}

impl RubberData {
    /// Edges of the subdivision mapping onto nodes of the chain.
    pub fn crossing_edges(&self) -> usize {
        self.expansion_factors.iter().filter(|f| f.is_some()).count()
    }
}

pub fn subdivide_curve(d: &PLDivisor, cell: &Cell) -> Result<RubberData, RubberError> {
    if d.is_degenerate() {
        return Err(RubberError::DegenerateDivisor);
    }
    let division = division_of(d, cell)?;
    let graph = d.graph();
    let base = d.base();
    let r = base.free_rank();
    let free = |g: &GroupElem| g.free.iter().map(|&x| rat(x)).collect::<Vec<Rational>>();
    let level_values: Vec<Vec<Rational>> = division.levels.iter().map(free).collect();
    let gap_values: Vec<Vec<Rational>> = division.gaps.iter().map(free).collect();

    let mut raw = RawGraph {
        vertices: graph
            .vertices()
            .iter()
            .map(|v| RawVertex {
                id: v.id.clone(),
                genus: v.genus as i64,
            })
            .collect(),
        edges: Vec::new(),
        legs: graph
            .legs()
            .iter()
            .map(|l| RawLeg {
                id: l.id.clone(),
                vertex: graph.vertices()[l.vertex].id.clone(),
                weight: l.weight,
            })
            .collect(),
    };
    let mut vertex_origin: Vec<VertexOrigin> = graph
        .vertices()
        .iter()
        .map(|v| VertexOrigin::Original { vertex: v.id.clone() })
        .collect();
    let mut level_map = division.vertex_level.clone();
    let mut edge_origin = Vec::new();
    let mut slopes = Vec::new();
    let mut lengths = Vec::new();
    let mut expansion_factors = Vec::new();
    let mut fractional: Vec<Vec<Rational>> = Vec::new();
    let fresh = |raw: &RawGraph, want: String| -> String {
        let mut id = want;
        while raw.vertices.iter().any(|v| v.id == id) || raw.edges.iter().any(|e| e.id == id) {
            id.push('\'');
        }
        id
    };

    for (ei, e) in graph.edges().iter().enumerate() {
        let s = d.slopes()[ei];
        let (lt, lh) = (level_map[e.tail], level_map[e.head]);
        let whole = free(base.generator(ei));
        if s == 0 || e.is_loop() {
            debug_assert_eq!(lt, lh, "flat edges stay on one level");
            raw.edges.push(RawEdge {
                id: e.id.clone(),
                ends: [graph.vertices()[e.tail].id.clone(), graph.vertices()[e.head].id.clone()],
            });
            edge_origin.push(ei);
            slopes.push(0);
            lengths.push(whole);
            expansion_factors.push(None);
            continue;
        }
        let step: isize = if lh > lt { 1 } else { -1 };
        let factor = s.unsigned_abs();
        let mut prev = graph.vertices()[e.tail].id.clone();
        let mut level = lt;
        let mut piece = 0;
        while level != lh {
            let next_level = (level as isize + step) as usize;
            let gap = &gap_values[level.min(next_level)];
            let len: Vec<Rational> = gap.iter().map(|x| x / rat(factor as i64)).collect();
            if len.iter().any(|x| !x.is_integer()) {
                fractional.push(len.clone());
            }
            let next = if next_level == lh {
                graph.vertices()[e.head].id.clone()
            } else {
                let id = fresh(&raw, format!("{}@{}", e.id, next_level));
                raw.vertices.push(RawVertex {
                    id: id.clone(),
                    genus: 0,
                });
                vertex_origin.push(VertexOrigin::Inserted { edge: e.id.clone() });
                level_map.push(next_level);
                id
            };
            let id = if lt.abs_diff(lh) == 1 {
                e.id.clone()
            } else {
                fresh(&raw, format!("{}.{}", e.id, piece))
            };
            raw.edges.push(RawEdge {
                id,
                ends: [prev, next.clone()],
            });
            edge_origin.push(ei);
            slopes.push(s);
            lengths.push(len);
            expansion_factors.push(Some(factor));
            prev = next;
            level = next_level;
            piece += 1;
        }
        debug_assert_eq!(
            (0..r)
                .map(|k| lengths[lengths.len() - piece..].iter().map(|l| l[k].clone()).sum::<Rational>())
                .collect::<Vec<_>>(),
            whole
        );
    }

    let subdivided = TropicalGraph::validate(&raw)?;
    let lattice_extension_index = extension_index(r, &fractional);
    let no_vertex_on_node = level_map.iter().all(|&l| l < division.levels.len())
        && subdivided.edges().iter().zip(&expansion_factors).all(|(e, f)| {
            let span = level_map[e.tail].abs_diff(level_map[e.head]);
            if f.is_some() {
                span == 1
            } else {
                span == 0
            }
        });
    let every_level_covered_by_stable = (0..division.levels.len())
        .all(|l| (0..graph.num_vertices()).any(|v| level_map[v] == l && graph.is_stable_vertex(v)));

    Ok(RubberData {
        subdivided,
        vertex_origin,
        edge_origin,
        slopes,
        lengths,
        level_map,
        level_values,
        expansion_factors,
        lattice_extension_index,
        no_vertex_on_node,
        every_level_covered_by_stable,
        chain: chain_curve(&division),
    })
}

/// `[Λ' : Z^r]` where `Λ'` is generated by `Z^r` and the given rational vectors.
fn extension_index(r: usize, extra: &[Vec<Rational>]) -> u64 {
    if extra.is_empty() {
        return 1;
    }
    let denom = extra
        .iter()
        .flatten()
        .fold(num_bigint::BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
    let d = denom.to_i64().expect("denominators fit in i64");
    let mut rows: Vec<Vec<i64>> = (0..r)
        .map(|i| {
            let mut row = vec![0; r];
            row[i] = d;
            row
        })
        .collect();
    for v in extra {
        rows.push(
            v.iter()
                .map(|x| (x * rat(d)).to_integer().to_i64().expect("fits in i64"))
                .collect(),
        );
    }
    let hnf = hermite_rows(r, &rows);
    let det: i64 = (0..r).map(|i| hnf[i].iter().find(|&&x| x != 0).copied().unwrap_or(0)).product();
    (d.pow(r as u32) / det) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionRanks {
    pub vdim: i64,
    pub h1_rank: i64,
    pub primary_obstruction_rank: i64,
    pub euler_fdagger: i64,
}

/// Virtual dimension `2g - 3 + n`, `h^1(O_C) = g`, one primary obstruction
/// per node of the source mapping to a node of the chain, and the Euler
/// characteristic `(1 - g) + primary` from additivity.
pub fn obstruction_ranks(rd: &RubberData, g: i64, n: i64) -> ObstructionRanks {
    let primary = rd.crossing_edges() as i64;
    ObstructionRanks {
        vdim: 2 * g - 3 + n,
        h1_rank: g,
        primary_obstruction_rank: primary,
        euler_fdagger: (1 - g) + primary,
    }
}

/// Rationals are written as `"p"` or `"p/q"` in JSON.
pub fn rational_string(x: &Rational) -> String {
    x.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityRecord {
    pub form: Vec<i64>,
    pub relation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRecord {
    pub levels: Vec<Vec<String>>,
    pub sign_vector: Vec<i8>,
    pub inequalities: Vec<InequalityRecord>,
    pub witness: Vec<String>,
    pub dimension: usize,
    pub maximal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanRecord {
    pub base_rays: Vec<Vec<i64>>,
    pub base_dimension: usize,
    pub maximal_cells: usize,
    pub cells: Vec<CellRecord>,
}

impl SubdivisionFan {
    pub fn to_record(&self, graph: &TropicalGraph) -> FanRecord {
        FanRecord {
            base_rays: self.base_rays.clone(),
            base_dimension: self.base_dimension,
            maximal_cells: self.maximal_cells().count(),
            cells: self.cells.iter().map(|c| c.to_record(graph)).collect(),
        }
    }
}

impl Cell {
    pub fn to_record(&self, graph: &TropicalGraph) -> CellRecord {
        CellRecord {
            levels: self
                .levels
                .iter()
                .map(|l| l.iter().map(|&v| graph.vertices()[v].id.clone()).collect())
                .collect(),
            sign_vector: self.sign_vector(graph.num_vertices()),
            inequalities: self
                .inequalities
                .iter()
                .map(|(f, rel)| InequalityRecord {
                    form: f.clone(),
                    relation: match rel {
                        Relation::Equal => "= 0",
                        Relation::AtLeast => ">= 0",
                    }
                    .to_string(),
                })
                .collect(),
            witness: self.witness.iter().map(rational_string).collect(),
            dimension: self.dimension,
            maximal: self.maximal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RubberRecord {
    pub subdivided_graph: RawGraph,
    pub vertex_origin: BTreeMap<String, VertexOrigin>,
    pub edge_origin: BTreeMap<String, String>,
    pub level_map: BTreeMap<String, usize>,
    pub levels: Vec<Vec<String>>,
    pub expansion_factors: BTreeMap<String, u64>,
    pub edge_lengths: BTreeMap<String, Vec<String>>,
    pub lattice_extension_index: u64,
    pub no_vertex_on_node: bool,
    pub every_level_covered_by_stable: bool,
    pub chain: ChainCurve,
}

impl RubberData {
    pub fn to_record(&self, original: &TropicalGraph) -> RubberRecord {
        let g = &self.subdivided;
        let vid = |v: usize| g.vertices()[v].id.clone();
        let eid = |e: usize| g.edges()[e].id.clone();
        RubberRecord {
            subdivided_graph: g.to_raw(),
            vertex_origin: (0..g.num_vertices()).map(|v| (vid(v), self.vertex_origin[v].clone())).collect(),
            edge_origin: (0..g.num_edges())
                .map(|e| (eid(e), original.edges()[self.edge_origin[e]].id.clone()))
                .collect(),
            level_map: (0..g.num_vertices()).map(|v| (vid(v), self.level_map[v])).collect(),
            levels: self
                .level_values
                .iter()
                .map(|l| l.iter().map(rational_string).collect())
                .collect(),
            expansion_factors: (0..g.num_edges())
                .filter_map(|e| self.expansion_factors[e].map(|f| (eid(e), f)))
                .collect(),
            edge_lengths: (0..g.num_edges())
                .map(|e| (eid(e), self.lengths[e].iter().map(rational_string).collect()))
                .collect(),
            lattice_extension_index: self.lattice_extension_index,
            no_vertex_on_node: self.no_vertex_on_node,
            every_level_covered_by_stable: self.every_level_covered_by_stable,
            chain: self.chain.clone(),
        }
    }
}
