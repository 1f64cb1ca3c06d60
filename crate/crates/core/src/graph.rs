//! Dual graphs of marked nodal curves.
//!
//! A [`TropicalGraph`] has genus-weighted vertices, edges (multi-edges and
//! self-loops allowed) and labeled legs carrying integer weights. Each edge
//! has a reference orientation `ends[0] -> ends[1]` used for slope bookkeeping.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("malformed graph description: {0}")]
    Parse(String),
    #[error("graph is not connected")]
    DisconnectedGraph,
    #[error("{kind} `{id}` refers to unknown vertex `{vertex}`")]
    DanglingReference {
        kind: &'static str,
        id: String,
        vertex: String,
    },
    #[error("vertex `{0}` has negative genus {1}")]
    NegativeGenus(String, i64),
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("(g, n) = ({g}, {n}) is outside the supported range (2g-2+n > 0, g <= 3, n <= 6)")]
    OutOfSupportedRange { g: i64, n: i64 },
    #[error("expected {expected} leg weights, got {got}")]
    LegCount { expected: usize, got: usize },
}

/// The JSON exchange format, before validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawGraph {
    pub vertices: Vec<RawVertex>,
    #[serde(default)]
    pub edges: Vec<RawEdge>,
    #[serde(default)]
    pub legs: Vec<RawLeg>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawVertex {
    pub id: String,
    pub genus: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawEdge {
    pub id: String,
    pub ends: [String; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawLeg {
    pub id: String,
    pub vertex: String,
    pub weight: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub genus: u32,
}

/// An edge with reference orientation `tail -> head`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    /// The endpoint opposite to `v`. For a loop this is `v` itself.
    pub fn other(&self, v: usize) -> usize {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leg {
    pub id: String,
    pub vertex: usize,
    pub weight: i64,
}

/// A validated, connected dual graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    legs: Vec<Leg>,
    first_betti: usize,
    genus: u32,
}

impl TropicalGraph {
    pub fn validate(raw: &RawGraph) -> Result<Self, GraphError> {
        let mut index = HashMap::new();
        let mut vertices = Vec::with_capacity(raw.vertices.len());
        for (i, v) in raw.vertices.iter().enumerate() {
            if v.genus < 0 {
                return Err(GraphError::NegativeGenus(v.id.clone(), v.genus));
            }
            if index.insert(v.id.as_str(), i).is_some() {
                return Err(GraphError::DuplicateId {
                    kind: "vertex",
                    id: v.id.clone(),
                });
            }
            vertices.push(Vertex {
                id: v.id.clone(),
                genus: v.genus as u32,
            });
        }

        let lookup = |kind: &'static str, id: &str, vertex: &str| {
            index
                .get(vertex)
                .copied()
                .ok_or_else(|| GraphError::DanglingReference {
                    kind,
                    id: id.to_string(),
                    vertex: vertex.to_string(),
                })
        };

        let mut seen = BTreeSet::new();
        let mut edges = Vec::with_capacity(raw.edges.len());
        for e in &raw.edges {
            if !seen.insert(e.id.as_str()) {
                return Err(GraphError::DuplicateId {
                    kind: "edge",
                    id: e.id.clone(),
                });
            }
            edges.push(Edge {
                id: e.id.clone(),
                tail: lookup("edge", &e.id, &e.ends[0])?,
                head: lookup("edge", &e.id, &e.ends[1])?,
            });
        }

        let mut seen = BTreeSet::new();
        let mut legs = Vec::with_capacity(raw.legs.len());
        for l in &raw.legs {
            if !seen.insert(l.id.as_str()) {
                return Err(GraphError::DuplicateId {
                    kind: "leg",
                    id: l.id.clone(),
                });
            }
            legs.push(Leg {
                id: l.id.clone(),
                vertex: lookup("leg", &l.id, &l.vertex)?,
                weight: l.weight,
            });
        }

        Self::from_parts(vertices, edges, legs)
    }

    fn from_parts(vertices: Vec<Vertex>, edges: Vec<Edge>, legs: Vec<Leg>) -> Result<Self, GraphError> {
        if vertices.is_empty() || !is_connected(vertices.len(), &edges) {
            return Err(GraphError::DisconnectedGraph);
        }
        let first_betti = edges.len() + 1 - vertices.len();
        let genus = vertices.iter().map(|v| v.genus).sum::<u32>() + first_betti as u32;
        Ok(TropicalGraph {
            vertices,
            edges,
            legs,
            first_betti,
            genus,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let raw: RawGraph = serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
        Self::validate(&raw)
    }

    pub fn to_raw(&self) -> RawGraph {
        RawGraph {
            vertices: self
                .vertices
                .iter()
                .map(|v| RawVertex {
                    id: v.id.clone(),
                    genus: v.genus as i64,
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| RawEdge {
                    id: e.id.clone(),
                    ends: [self.vertices[e.tail].id.clone(), self.vertices[e.head].id.clone()],
                })
                .collect(),
            legs: self
                .legs
                .iter()
                .map(|l| RawLeg {
                    id: l.id.clone(),
                    vertex: self.vertices[l.vertex].id.clone(),
                    weight: l.weight,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("graph serializes")
    }

    /// Graphviz rendering; legs are drawn as half-edges ending in point nodes.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph tropical {\n");
        for v in &self.vertices {
            let _ = writeln!(out, "  \"{}\" [label=\"{}:g={}\"];", v.id, v.id, v.genus);
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  \"{}\" -- \"{}\" [label=\"{}\"];",
                self.vertices[e.tail].id, self.vertices[e.head].id, e.id
            );
        }
        for l in &self.legs {
            let _ = writeln!(out, "  \"leg:{}\" [shape=point, label=\"\"];", l.id);
            let _ = writeln!(
                out,
                "  \"{}\" -- \"leg:{}\" [label=\"{} ({})\"];",
                self.vertices[l.vertex].id, l.id, l.id, l.weight
            );
        }
        out.push_str("}\n");
        out
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// First Betti number `#E - #V + 1`.
    pub fn first_betti(&self) -> usize {
        self.first_betti
    }

    /// Total genus: vertex genera plus the first Betti number.
    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn is_tree(&self) -> bool {
        self.first_betti == 0
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// Edge-ends plus legs at `v`; a self-loop counts twice.
    pub fn valence(&self, v: usize) -> usize {
        self.edge_ends_at(v) + self.legs.iter().filter(|l| l.vertex == v).count()
    }

    pub fn edge_ends_at(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.tail == v) as usize + (e.head == v) as usize)
            .sum()
    }

    pub fn leg_weight_at(&self, v: usize) -> i64 {
        self.legs.iter().filter(|l| l.vertex == v).map(|l| l.weight).sum()
    }

    pub fn leg_weight_sum(&self) -> i64 {
        self.legs.iter().map(|l| l.weight).sum()
    }

    /// `2 genus(v) - 2 + valence(v) > 0`.
    pub fn is_stable_vertex(&self, v: usize) -> bool {
        2 * self.vertices[v].genus as i64 - 2 + self.valence(v) as i64 > 0
    }

    pub fn is_stable(&self) -> bool {
        (0..self.num_vertices()).all(|v| self.is_stable_vertex(v))
    }

    /// Index of the lexicographically smallest vertex id.
    pub fn basepoint(&self) -> usize {
        (0..self.vertices.len())
            .min_by(|&a, &b| self.vertices[a].id.cmp(&self.vertices[b].id))
            .expect("validated graphs are nonempty")
    }

    /// A copy of this graph with leg weights replaced, in leg order.
    pub fn with_leg_weights(&self, weights: &[i64]) -> Result<Self, GraphError> {
        if weights.len() != self.legs.len() {
            return Err(GraphError::LegCount {
                expected: self.legs.len(),
                got: weights.len(),
            });
        }
        let mut g = self.clone();
        for (l, &w) in g.legs.iter_mut().zip(weights) {
            l.weight = w;
        }
        Ok(g)
    }

    /// Spanning tree found by breadth-first search from `root`, with edges
    /// taken in index order. Returns for each vertex the edge used to reach
    /// it (`None` at the root) and the visiting order.
    pub fn spanning_tree(&self, root: usize) -> (Vec<Option<usize>>, Vec<usize>) {
        let mut parent = vec![None; self.vertices.len()];
        let mut seen = vec![false; self.vertices.len()];
        let mut order = vec![root];
        seen[root] = true;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for (ei, e) in self.edges.iter().enumerate() {
                if e.is_loop() || (e.tail != v && e.head != v) {
                    continue;
                }
                let w = e.other(v);
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(ei);
                    order.push(w);
                }
            }
        }
        (parent, order)
    }

    pub fn acyclic_orientations(&self) -> AcyclicOrientations<'_> {
        AcyclicOrientations::new(self)
    }
}

fn is_connected(n: usize, edges: &[Edge]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut components = n;
    for e in edges {
        let (a, b) = (find(&mut parent, e.tail), find(&mut parent, e.head));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    components == 1
}

/// A direction for every non-loop edge. Loops have no direction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Orientation {
    directions: Vec<Option<(usize, usize)>>,
}

impl Orientation {
    /// `(tail, head)` of edge `e`, or `None` for a loop.
    pub fn direction(&self, e: usize) -> Option<(usize, usize)> {
        self.directions[e]
    }

    pub fn directions(&self) -> &[Option<(usize, usize)>] {
        &self.directions
    }

    /// Whether `e` points against its reference orientation.
    pub fn is_reversed(&self, graph: &TropicalGraph, e: usize) -> bool {
        matches!(self.directions[e], Some((t, _)) if t != graph.edges()[e].tail)
    }
}

/// Every acyclic orientation of the non-loop edges, in lexicographic order
/// of the direction bits (0 = reference direction) taken in edge order.
pub struct AcyclicOrientations<'a> {
    graph: &'a TropicalGraph,
    edges: Vec<usize>,
    choice: Vec<u8>,
    started: bool,
    done: bool,
}

impl<'a> AcyclicOrientations<'a> {
    fn new(graph: &'a TropicalGraph) -> Self {
        let edges = (0..graph.num_edges())
            .filter(|&e| !graph.edges()[e].is_loop())
            .collect();
        AcyclicOrientations {
            graph,
            edges,
            choice: Vec::new(),
            started: false,
            done: false,
        }
    }

    fn directed(&self, pos: usize, bit: u8) -> (usize, usize) {
        let e = &self.graph.edges()[self.edges[pos]];
        if bit == 0 {
            (e.tail, e.head)
        } else {
            (e.head, e.tail)
        }
    }

    /// Whether extending the current prefix with `bit` keeps it acyclic.
    fn acyclic_with(&self, bit: u8) -> bool {
        let (tail, head) = self.directed(self.choice.len(), bit);
        // A cycle appears iff `head` already reaches `tail`.
        let mut stack = vec![head];
        let mut seen = vec![false; self.graph.num_vertices()];
        seen[head] = true;
        while let Some(v) = stack.pop() {
            if v == tail {
                return false;
            }
            for (pos, &b) in self.choice.iter().enumerate() {
                let (t, h) = self.directed(pos, b);
                if t == v && !seen[h] {
                    seen[h] = true;
                    stack.push(h);
                }
            }
        }
        true
    }

    fn current(&self) -> Orientation {
        let mut directions = vec![None; self.graph.num_edges()];
        for (pos, &b) in self.choice.iter().enumerate() {
            directions[self.edges[pos]] = Some(self.directed(pos, b));
        }
        Orientation { directions }
    }
}

impl Iterator for AcyclicOrientations<'_> {
    type Item = Orientation;

    fn next(&mut self) -> Option<Orientation> {
        if self.done {
            return None;
        }
        let mut backtracking = self.started;
        self.started = true;
        loop {
            if backtracking {
                loop {
                    match self.choice.pop() {
                        None => {
                            self.done = true;
                            return None;
                        }
                        Some(0) if self.acyclic_with(1) => {
                            self.choice.push(1);
                            break;
                        }
                        Some(_) => {}
                    }
                }
                backtracking = false;
            }
            if self.choice.len() == self.edges.len() {
                return Some(self.current());
            }
            if self.acyclic_with(0) {
                self.choice.push(0);
            } else if self.acyclic_with(1) {
                self.choice.push(1);
            } else {
                backtracking = true;
            }
        }
    }
}

/// Skeleton used while enumerating stable graphs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Shape {
    genus: Vec<u32>,
    /// Unordered vertex pairs, stored with `a <= b`.
    edges: Vec<(usize, usize)>,
    /// Leg `i` sits on vertex `legs[i]`.
    legs: Vec<usize>,
}

/// Canonical encoding: genus and legs per vertex slot, then sorted edges.
type Encoding = (Vec<(u32, Vec<usize>)>, Vec<(usize, usize)>);

impl Shape {
    fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum::<usize>()
            + self.legs.iter().filter(|&&x| x == v).count()
    }

    fn stable(&self) -> bool {
        (0..self.genus.len()).all(|v| 2 * self.genus[v] as i64 - 2 + self.valence(v) as i64 > 0)
    }

    fn encode(&self, perm: &[usize]) -> Encoding {
        // perm[old] = new
        let n = self.genus.len();
        let mut slots = vec![(0u32, Vec::new()); n];
        for v in 0..n {
            slots[perm[v]].0 = self.genus[v];
        }
        for (i, &v) in self.legs.iter().enumerate() {
            slots[perm[v]].1.push(i);
        }
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (perm[a], perm[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        (slots, edges)
    }

    /// Vertex colors from iterated refinement of (genus, legs, loops, degree).
    fn refined_colors(&self) -> Vec<usize> {
        let n = self.genus.len();
        let initial: Vec<(u32, Vec<usize>, usize, usize)> = (0..n)
            .map(|v| {
                let legs: Vec<usize> = (0..self.legs.len()).filter(|&i| self.legs[i] == v).collect();
                let loops = self.edges.iter().filter(|&&(a, b)| a == v && b == v).count();
                (self.genus[v], legs, loops, self.valence(v))
            })
            .collect();
        let mut colors = rank_keys(&initial);
        loop {
            let keys: Vec<(usize, Vec<usize>)> = (0..n)
                .map(|v| {
                    let mut nbrs: Vec<usize> = self
                        .edges
                        .iter()
                        .filter(|&&(a, b)| a != b && (a == v || b == v))
                        .map(|&(a, b)| colors[if a == v { b } else { a }])
                        .collect();
                    nbrs.sort_unstable();
                    (colors[v], nbrs)
                })
                .collect();
            let next = rank_keys(&keys);
            let classes = |c: &[usize]| c.iter().collect::<BTreeSet<_>>().len();
            if classes(&next) == classes(&colors) {
                return next;
            }
            colors = next;
        }
    }

    /// Lexicographically least encoding over all color-preserving relabelings.
    fn canonical(&self) -> Encoding {
        let colors = self.refined_colors();
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, &c) in colors.iter().enumerate() {
            classes.entry(c).or_default().push(v);
        }
        let classes: Vec<Vec<usize>> = classes.into_values().collect();
        let mut best: Option<Encoding> = None;
        let mut perm = vec![0; self.genus.len()];
        permute_classes(&classes, 0, 0, &mut perm, &mut |p| {
            let enc = self.encode(p);
            if best.as_ref().is_none_or(|b| enc < *b) {
                best = Some(enc);
            }
        });
        best.expect("at least one relabeling")
    }

    fn degenerations(&self) -> Vec<Shape> {
        let mut out = Vec::new();
        for v in 0..self.genus.len() {
            if self.genus[v] > 0 {
                let mut s = self.clone();
                s.genus[v] -= 1;
                s.edges.push((v, v));
                out.push(s);
            }
            // Half-edges at v: (edge index, end) or leg index.
            let mut halves: Vec<Half> = Vec::new();
            for (i, &(a, b)) in self.edges.iter().enumerate() {
                if a == v {
                    halves.push(Half::End(i, 0));
                }
                if b == v {
                    halves.push(Half::End(i, 1));
                }
            }
            for (i, &x) in self.legs.iter().enumerate() {
                if x == v {
                    halves.push(Half::Leg(i));
                }
            }
            let w = self.genus.len();
            let h = self.genus[v];
            for moved in 0u32..(1 << halves.len()) {
                let k = moved.count_ones() as i64;
                let rest = halves.len() as i64 - k;
                for h_new in 0..=h {
                    let h_old = h - h_new;
                    if 2 * h_new as i64 - 1 + k <= 0 || 2 * h_old as i64 - 1 + rest <= 0 {
                        continue;
                    }
                    let mut s = self.clone();
                    s.genus[v] = h_old;
                    s.genus.push(h_new);
                    let mut ends: Vec<[usize; 2]> = s.edges.iter().map(|&(a, b)| [a, b]).collect();
                    for (j, half) in halves.iter().enumerate() {
                        if moved & (1 << j) == 0 {
                            continue;
                        }
                        match *half {
                            Half::End(e, side) => ends[e][side] = w,
                            Half::Leg(l) => s.legs[l] = w,
                        }
                    }
                    s.edges = ends.iter().map(|&[a, b]| (a.min(b), a.max(b))).collect();
                    s.edges.push((v, w));
                    out.push(s);
                }
            }
        }
        out
    }

    fn from_encoding(enc: &Encoding) -> Shape {
        let (slots, edges) = enc;
        let mut legs = vec![0; slots.iter().map(|s| s.1.len()).sum()];
        for (v, (_, ls)) in slots.iter().enumerate() {
            for &l in ls {
                legs[l] = v;
            }
        }
        Shape {
            genus: slots.iter().map(|s| s.0).collect(),
            edges: edges.clone(),
            legs,
        }
    }

    fn into_graph(self) -> TropicalGraph {
        let vertices = self
            .genus
            .iter()
            .enumerate()
            .map(|(i, &g)| Vertex {
                id: format!("v{i}"),
                genus: g,
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| Edge {
                id: format!("e{i}"),
                tail: a,
                head: b,
            })
            .collect();
        let legs = self
            .legs
            .iter()
            .enumerate()
            .map(|(i, &v)| Leg {
                id: format!("x{}", i + 1),
                vertex: v,
                weight: 0,
            })
            .collect();
        TropicalGraph::from_parts(vertices, edges, legs).expect("degenerations stay connected")
    }
}

#[derive(Clone, Copy)]
enum Half {
    End(usize, usize),
    Leg(usize),
}

fn rank_keys<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let sorted: BTreeSet<K> = keys.iter().cloned().collect();
    let sorted: Vec<K> = sorted.into_iter().collect();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("key present"))
        .collect()
}

/// Calls `f` with every permutation that maps class `i` onto the consecutive
/// slot block reserved for it.
fn permute_classes(
    classes: &[Vec<usize>],
    class: usize,
    offset: usize,
    perm: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]),
) {
    if class == classes.len() {
        f(perm);
        return;
    }
    let members = &classes[class];
    let mut order: Vec<usize> = (0..members.len()).collect();
    loop {
        for (slot, &m) in order.iter().enumerate() {
            perm[members[m]] = offset + slot;
        }
        permute_classes(classes, class + 1, offset + members.len(), perm, f);
        if !next_permutation(&mut order) {
            break;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All stable graphs of genus `g` with `n` labeled legs, up to isomorphism
/// fixing the legs. Legs are named `x1..xn` and carry weight 0; vertices and
/// edges are named in canonical order. Output is sorted by edge count, then
/// by canonical encoding.
pub fn enumerate_stable_graphs(g: i64, n: i64) -> Result<Vec<TropicalGraph>, GraphError> {
    if g < 0 || n < 0 || g > 3 || n > 6 || 2 * g - 2 + n <= 0 {
        return Err(GraphError::OutOfSupportedRange { g, n });
    }
    let smooth = Shape {
        genus: vec![g as u32],
        edges: Vec::new(),
        legs: vec![0; n as usize],
    };
    let mut all: Vec<Encoding> = vec![smooth.canonical()];
    let mut layer = all.clone();
    while !layer.is_empty() {
        let mut next = BTreeSet::new();
        for enc in &layer {
            for s in Shape::from_encoding(enc).degenerations() {
                debug_assert!(s.stable());
                next.insert(s.canonical());
            }
        }
        layer = next.into_iter().collect();
        all.extend(layer.iter().cloned());
    }
    Ok(all
        .iter()
        .map(|enc| Shape::from_encoding(enc).into_graph())
        .collect())
}
