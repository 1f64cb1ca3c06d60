#![allow(dead_code)]

use num_rational::BigRational;
use rand::Rng;
use tropjac::graph::{RawEdge, RawGraph, RawLeg, RawVertex, TropicalGraph};

pub fn raw(vertices: &[(&str, i64)], edges: &[(&str, &str, &str)], legs: &[(&str, &str, i64)]) -> RawGraph {
    RawGraph {
        vertices: vertices
            .iter()
            .map(|&(id, genus)| RawVertex {
                id: id.into(),
                genus,
            })
            .collect(),
        edges: edges
            .iter()
            .map(|&(id, a, b)| RawEdge {
                id: id.into(),
                ends: [a.into(), b.into()],
            })
            .collect(),
        legs: legs
            .iter()
            .map(|&(id, v, weight)| RawLeg {
                id: id.into(),
                vertex: v.into(),
                weight,
            })
            .collect(),
    }
}

pub fn build(vertices: &[(&str, i64)], edges: &[(&str, &str, &str)], legs: &[(&str, &str, i64)]) -> TropicalGraph {
    TropicalGraph::validate(&raw(vertices, edges, legs)).unwrap()
}

/// Two genus-0 vertices joined by two edges, legs of weight `k` and `-k`.
pub fn theta(k: i64) -> TropicalGraph {
    build(
        &[("v", 0), ("w", 0)],
        &[("e1", "v", "w"), ("e2", "v", "w")],
        &[("p", "v", k), ("q", "w", -k)],
    )
}

/// Center `u` with `arms` genus-1 leaves; slopes +1 outward give pairwise
/// incomparable leaf values.
pub fn star(arms: usize) -> TropicalGraph {
    let names: Vec<String> = (0..arms).map(|i| format!("v{i}")).collect();
    let edge_ids: Vec<String> = (0..arms).map(|i| format!("a{i}")).collect();
    let mut vertices = vec![("u", 0)];
    vertices.extend(names.iter().map(|n| (n.as_str(), 1)));
    let edges: Vec<(&str, &str, &str)> = (0..arms).map(|i| (edge_ids[i].as_str(), "u", names[i].as_str())).collect();
    build(&vertices, &edges, &[("x", "u", 0)])
}

/// Path `u - v` and a second edge `u - w`, used with slopes (1, 2).
pub fn slope_two() -> TropicalGraph {
    build(
        &[("u", 1), ("v", 1), ("w", 1)],
        &[("b", "u", "v"), ("a", "u", "w")],
        &[],
    )
}

/// Random tree: vertex `i > 0` hangs off a random earlier vertex, with a
/// random edge direction. Leg weights sum to zero.
pub fn random_tree<R: Rng>(rng: &mut R, max_vertices: usize, max_weight: i64) -> TropicalGraph {
    let n = rng.gen_range(1..=max_vertices);
    let names: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
    let mut edges = Vec::new();
    for i in 1..n {
        let p = rng.gen_range(0..i);
        let (a, b) = if rng.gen_bool(0.5) { (p, i) } else { (i, p) };
        edges.push((format!("f{i}"), names[a].clone(), names[b].clone()));
    }
    random_graph_from(rng, &names, &edges, max_weight)
}

/// Random connected multigraph with loops: a random tree plus extra edges.
pub fn random_connected<R: Rng>(rng: &mut R, max_vertices: usize, max_extra: usize, max_weight: i64) -> TropicalGraph {
    let n = rng.gen_range(1..=max_vertices);
    let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    let mut edges = Vec::new();
    for i in 1..n {
        let p = rng.gen_range(0..i);
        edges.push((format!("g{i}"), names[p].clone(), names[i].clone()));
    }
    for k in 0..rng.gen_range(0..=max_extra) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        edges.push((format!("h{k}"), names[a].clone(), names[b].clone()));
    }
    random_graph_from(rng, &names, &edges, max_weight)
}

fn random_graph_from<R: Rng>(
    rng: &mut R,
    names: &[String],
    edges: &[(String, String, String)],
    max_weight: i64,
) -> TropicalGraph {
    let n = names.len();
    let mut weights: Vec<i64> = (0..n).map(|_| rng.gen_range(-max_weight..=max_weight)).collect();
    let excess: i64 = weights.iter().sum();
    weights[n - 1] -= excess;
    let raw = RawGraph {
        vertices: names
            .iter()
            .map(|id| RawVertex {
                id: id.clone(),
                genus: rng.gen_range(0..=1),
            })
            .collect(),
        edges: edges
            .iter()
            .map(|(id, a, b)| RawEdge {
                id: id.clone(),
                ends: [a.clone(), b.clone()],
            })
            .collect(),
        legs: weights
            .iter()
            .enumerate()
            .map(|(i, &w)| RawLeg {
                id: format!("x{i}"),
                vertex: names[i].clone(),
                weight: w,
            })
            .collect(),
    };
    TropicalGraph::validate(&raw).unwrap()
}

/// `D(v)` computed directly: legs plus slopes, `+s` at the tail and `-s` at
/// the head of each non-loop edge.
pub fn degrees(graph: &TropicalGraph, slopes: &[i64]) -> Vec<i64> {
    let mut d: Vec<i64> = graph
        .vertices()
        .iter()
        .enumerate()
        .map(|(v, _)| graph.legs().iter().filter(|l| l.vertex == v).map(|l| l.weight).sum())
        .collect();
    for (e, &s) in graph.edges().iter().zip(slopes) {
        if e.tail != e.head {
            d[e.tail] += s;
            d[e.head] -= s;
        }
    }
    d
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn qi(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}
