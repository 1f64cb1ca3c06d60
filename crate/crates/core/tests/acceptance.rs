//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tropjac::divisor::{self, Multidegree, PLDivisor, TargetKind};
use tropjac::enumerate;
use tropjac::graph::{self, TropicalGraph};
use tropjac::lattice::{IntMatrix, MonoidHom};
use tropjac::rubber::{self, RubberData, SubdivisionFan, VertexOrigin};

use common::*;

const SEED: u64 = 0x7e0_1a6;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn zero_target(g: &TropicalGraph) -> Multidegree {
    divisor::target_multidegree(g, TargetKind::Zero).unwrap()
}

fn relationless_slopes(k: i64) -> Vec<Vec<i64>> {
    let g = theta(k);
    enumerate::enumerate_slopes(&g, &zero_target(&g))
        .unwrap()
        .into_iter()
        .filter(|a| a.diagnostics.relationless)
        .map(|a| a.slopes)
        .collect()
}

fn criterion_1() -> Outcome {
    for k in 1..=8 {
        let found = relationless_slopes(k);
        // Independent check: at unit lengths the single loop relation is
        // s1 - s2, so relationless means equal slopes with s1 + s2 = -k.
        let g = theta(k);
        let bound = enumerate::certified_bound(&g, &zero_target(&g));
        let expected: Vec<Vec<i64>> = (-bound..=bound)
            .filter(|s| 2 * s == -k)
            .map(|s| vec![s, s])
            .collect();
        ensure(found == expected, || format!("k = {k}: got {found:?}, expected {expected:?}"))?;
        ensure(found.is_empty() == (k % 2 == 1), || format!("k = {k}: parity violated"))?;
    }
    ensure(relationless_slopes(1).is_empty(), || "k = 1 not empty".into())?;
    ensure(relationless_slopes(2) == vec![vec![-1, -1]], || "k = 2 is not [(-1,-1)]".into())?;
    Ok("k = 1..8; k = 2 gives (-1,-1)".into())
}

fn criterion_2() -> Outcome {
    let mut counts = Vec::new();
    for (k, want) in [(1, 0), (2, 1), (3, 2)] {
        let g = theta(k);
        let t = zero_target(&g);
        let fast = enumerate::enumerate_slopes(&g, &t).unwrap();
        let brute = enumerate::brute_force_slopes(&g, &t, enumerate::certified_bound(&g, &t) + 2).unwrap();
        ensure(fast == brute, || format!("k = {k}: enumeration differs from brute force"))?;
        // Degeneracy recomputed from the quotient of each assignment.
        let nondeg = brute
            .iter()
            .filter(|a| {
                let d = PLDivisor::from_slopes(&g, a.slopes.clone()).unwrap();
                (0..g.num_edges()).all(|e| !d.base().sharpened().generator(e).is_zero())
            })
            .count();
        let reported = fast.iter().filter(|a| a.is_nondegenerate()).count();
        ensure(nondeg == want && reported == want, || {
            format!("k = {k}: {reported} reported, {nondeg} recomputed, want {want}")
        })?;
        counts.push(nondeg);
    }
    Ok(format!("nondegenerate counts {counts:?}"))
}

fn catalog_cases() -> Vec<(TropicalGraph, Multidegree, &'static str)> {
    let mut cases = Vec::new();
    for genus in 0..=2i64 {
        for legs in 0..=4i64 {
            if 2 * genus - 2 + legs <= 0 {
                continue;
            }
            for g in graph::enumerate_stable_graphs(genus, legs).unwrap() {
                if g.num_edges() > 6 {
                    continue;
                }
                let n = legs as usize;
                let mut weightings = vec![vec![0; n]];
                if n >= 2 {
                    let mut w = vec![0; n];
                    w[0] = 2;
                    w[1] = -2;
                    weightings.push(w);
                }
                for w in weightings {
                    let h = g.with_leg_weights(&w).unwrap();
                    let t = zero_target(&h);
                    cases.push((h, t, "zero"));
                }
                if n >= 1 {
                    let mut w = vec![0; n];
                    w[0] = 2 * genus - 2;
                    let h = g.with_leg_weights(&w).unwrap();
                    let t = divisor::target_multidegree(&h, TargetKind::Canonical).unwrap();
                    cases.push((h, t, "canonical"));
                }
            }
        }
    }
    cases
}

fn criterion_3() -> Outcome {
    let cases = catalog_cases();
    let mut total = 0;
    let mut by_target = BTreeMap::new();
    for (g, t, kind) in &cases {
        let fast = enumerate::enumerate_slopes(g, t).map_err(|e| format!("{e} on {}", g.to_json()))?;
        let bound = enumerate::certified_bound(g, t);
        let brute = enumerate::brute_force_slopes(g, t, bound).unwrap();
        ensure(&fast == &brute, || format!("{kind} target differs on {}", g.to_json()))?;
        total += fast.len();
        *by_target.entry(*kind).or_insert(0) += 1;
    }
    Ok(format!("{} cases {by_target:?}, {total} assignments", cases.len()))
}

/// Exhaustive search over `[-bound, bound]^E` for a tree whose edge `i`
/// joins vertex `i + 1` to an earlier vertex: edges are assigned from the
/// last one down, and a vertex is checked once all of its edges are set.
fn tree_solutions(g: &TropicalGraph, target: &[i64], bound: i64) -> Vec<Vec<i64>> {
    let ne = g.num_edges();
    let mut complete_after: Vec<Vec<usize>> = vec![Vec::new(); ne + 1];
    for v in 0..g.num_vertices() {
        let last = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.tail == v || e.head == v)
            .map(|(i, _)| i)
            .min();
        // Edges are assigned in decreasing order, so the smallest index is set last.
        match last {
            Some(i) => complete_after[i].push(v),
            None => complete_after[ne].push(v),
        }
    }
    let mut out = Vec::new();
    let mut s = vec![0i64; ne];
    fn go(
        i: usize,
        g: &TropicalGraph,
        target: &[i64],
        bound: i64,
        complete_after: &[Vec<usize>],
        s: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        if i == 0 {
            let d = degrees(g, s);
            if complete_after[g.num_edges()].iter().all(|&v| d[v] == target[v]) && d == target {
                out.push(s.clone());
            }
            return;
        }
        let e = i - 1;
        for x in -bound..=bound {
            s[e] = x;
            let d = degrees_partial(g, s, e);
            if complete_after[e].iter().all(|&v| d[v] == target[v]) {
                go(e, g, target, bound, complete_after, s, out);
            }
        }
        s[e] = 0;
    }
    go(ne, g, target, bound, &complete_after, &mut s, &mut out);
    out
}

fn degrees_partial(g: &TropicalGraph, s: &[i64], from: usize) -> Vec<i64> {
    let mut masked = s.to_vec();
    for x in masked.iter_mut().take(from) {
        *x = 0;
    }
    degrees(g, &masked)
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for case in 0..200 {
        let g = random_tree(&mut rng, 8, 3);
        let t = zero_target(&g);
        let d = divisor::tree_twist(&g, &t).map_err(|e| format!("case {case}: {e}"))?;
        ensure(degrees(&g, d.slopes()) == t.degrees(), || format!("case {case}: wrong multidegree"))?;
        let bound = enumerate::certified_bound(&g, &t);
        let all = tree_solutions(&g, t.degrees(), bound);
        ensure(all == vec![d.slopes().to_vec()], || {
            format!("case {case}: brute force found {all:?}, twist {:?}", d.slopes())
        })?;
    }
    Ok("200 trees, unique solution each".into())
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    for case in 0..200 {
        let g = random_connected(&mut rng, 6, 5, 3);
        let lengths: Vec<BigRational> = (0..g.num_edges())
            .map(|_| q(rng.gen_range(1..=9), rng.gen_range(1..=9)))
            .collect();
        let t = zero_target(&g);
        let sol = divisor::harmonic_solve(&g, &lengths, &t).map_err(|e| format!("case {case}: {e}"))?;
        ensure(sol.dimension == 1, || format!("case {case}: dimension {}", sol.dimension))?;
        // Balance at every vertex, evaluated directly.
        let x = &sol.particular;
        for v in 0..g.num_vertices() {
            let mut flow: BigRational = g
                .legs()
                .iter()
                .filter(|l| l.vertex == v)
                .map(|l| qi(l.weight))
                .sum();
            for (e, len) in g.edges().iter().zip(&lengths) {
                if e.tail == e.head {
                    continue;
                }
                if e.tail == v {
                    flow += (&x[e.head] - &x[v]) / len;
                }
                if e.head == v {
                    flow += (&x[e.tail] - &x[v]) / len;
                }
            }
            ensure(flow == qi(t.get(v)), || format!("case {case}: unbalanced at vertex {v}"))?;
        }
    }
    Ok("200 graphs, dimension 1".into())
}

fn eval(form: &[i64], point: &[BigRational]) -> BigRational {
    form.iter().zip(point).map(|(&c, x)| qi(c) * x).sum()
}

fn random_interior_point(fan: &SubdivisionFan, rng: &mut ChaCha8Rng) -> Vec<BigRational> {
    let ne = fan.base_rays[0].len();
    let mut p = vec![qi(0); ne];
    for ray in &fan.base_rays {
        let c = q(rng.gen_range(1..=997), rng.gen_range(1..=997));
        for (x, &r) in p.iter_mut().zip(ray) {
            *x += &c * qi(r);
        }
    }
    p
}

/// Sign vectors of vertex-value differences seen at random points.
fn observed_chambers(d: &PLDivisor, fan: &SubdivisionFan, rng: &mut ChaCha8Rng, samples: usize) -> usize {
    let nv = d.graph().num_vertices();
    let mut seen = BTreeSet::new();
    for _ in 0..samples {
        let p = random_interior_point(fan, rng);
        let vals: Vec<BigRational> = (0..nv).map(|v| eval(d.value_form(v), &p)).collect();
        let mut signs = Vec::new();
        for i in 0..nv {
            for j in i + 1..nv {
                signs.push((&vals[i] - &vals[j]).signum());
            }
        }
        // Random points are generic: a zero here is a tie on the whole cone.
        seen.insert(signs);
    }
    seen.len()
}

fn fan_corpus() -> Vec<(String, PLDivisor, usize)> {
    let y = PLDivisor::from_slopes(&star(2), vec![1, 1]).unwrap();
    let s3 = PLDivisor::from_slopes(&star(3), vec![1, 1, 1]).unwrap();
    let mut corpus = vec![("Y-graph".to_string(), y, 2), ("3-star".to_string(), s3, 6)];
    let aligned = [
        ("theta k=3 (-1,-2)", theta(3), vec![-1, -2]),
        ("theta k=3 (-2,-1)", theta(3), vec![-2, -1]),
        ("theta k=2 (-1,-1)", theta(2), vec![-1, -1]),
        ("path", build(&[("a", 0), ("b", 0), ("c", 0)], &[("e", "a", "b"), ("f", "b", "c")], &[]), vec![1, 1]),
        ("Y with ordered arms", star(2), vec![1, 0]),
    ];
    for (name, g, s) in aligned {
        corpus.push((name.to_string(), PLDivisor::from_slopes(&g, s).unwrap(), 1));
    }
    corpus
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let mut summary = Vec::new();
    for (name, d, want) in fan_corpus() {
        let fan = rubber::rub_subdivision(&d).map_err(|e| format!("{name}: {e}"))?;
        let maximal = fan.maximal_cells().count();
        ensure(maximal == want, || format!("{name}: {maximal} maximal cells, want {want}"))?;
        let aligned = rubber::is_aligned(&d).unwrap();
        ensure(aligned == (want == 1), || format!("{name}: alignment flag {aligned}"))?;
        let observed = observed_chambers(&d, &fan, &mut rng, 400);
        ensure(observed == maximal, || format!("{name}: sign-vector oracle saw {observed} chambers"))?;
        summary.push(format!("{name}={maximal}"));
    }
    Ok(summary.join(", "))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let mut checked = 0;
    for (name, d, _) in fan_corpus() {
        let fan = rubber::rub_subdivision(&d).unwrap();
        for i in 0..1000 {
            let p = random_interior_point(&fan, &mut rng);
            let in_cone = p.iter().all(|x| x.is_positive())
                && d.base().relations().iter().all(|r| eval(r, &p).is_zero());
            ensure(in_cone, || format!("{name}: sample {i} left the base cone"))?;
            let closed = fan.cells.iter().filter(|c| c.contains_closed(&p)).count();
            let open = fan.cells.iter().filter(|c| c.contains_open(&p)).count();
            ensure(closed >= 1 && open == 1, || {
                format!("{name}: point {i} in {closed} closed and {open} open cells")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} points"))
}

fn rubber_corpus() -> Vec<(String, PLDivisor, RubberData)> {
    let mut divisors: Vec<(String, PLDivisor)> = fan_corpus().into_iter().map(|(n, d, _)| (n, d)).collect();
    divisors.push((
        "slope two".into(),
        PLDivisor::from_slopes(&slope_two(), vec![1, 2]).unwrap(),
    ));
    for legs in 1..=3i64 {
        for genus in 0..=1i64 {
            if 2 * genus - 2 + legs <= 0 {
                continue;
            }
            for (i, g) in graph::enumerate_stable_graphs(genus, legs).unwrap().into_iter().enumerate() {
                let mut w = vec![0; legs as usize];
                w[0] = 3;
                if legs > 1 {
                    w[1] = -3;
                } else {
                    continue;
                }
                let g = g.with_leg_weights(&w).unwrap();
                let t = zero_target(&g);
                for a in enumerate::enumerate_slopes(&g, &t).unwrap() {
                    if a.is_nondegenerate() {
                        let d = PLDivisor::from_slopes(&g, a.slopes.clone()).unwrap();
                        divisors.push((format!("({genus},{legs})#{i} {:?}", a.slopes), d));
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for (name, d) in divisors {
        let fan = rubber::rub_subdivision(&d).unwrap();
        for c in fan.maximal_cells() {
            let rd = rubber::subdivide_curve(&d, c).unwrap();
            out.push((name.clone(), d.clone(), rd));
        }
    }
    out
}

fn check_conservation(d: &PLDivisor, rd: &RubberData) -> Result<(), String> {
    let c = d.graph();
    let ct = &rd.subdivided;
    ensure(ct.genus() == c.genus(), || "genus changed".into())?;
    let legs = |g: &TropicalGraph| -> Vec<(String, String, i64)> {
        g.legs()
            .iter()
            .map(|l| (l.id.clone(), g.vertices()[l.vertex].id.clone(), l.weight))
            .collect()
    };
    ensure(legs(c) == legs(ct), || "legs changed".into())?;
    for v in c.vertices() {
        let w = ct.vertex_index(&v.id).ok_or("original vertex missing")?;
        ensure(ct.vertices()[w].genus == v.genus, || format!("genus of {} changed", v.id))?;
    }
    let base = d.base();
    for (ei, e) in c.edges().iter().enumerate() {
        let pieces: Vec<usize> = (0..ct.num_edges()).filter(|&p| rd.edge_origin[p] == ei).collect();
        ensure(!pieces.is_empty(), || format!("edge {} lost", e.id))?;
        let inserted: BTreeSet<usize> = (0..ct.num_vertices())
            .filter(|&v| matches!(&rd.vertex_origin[v], VertexOrigin::Inserted { edge } if edge == &e.id))
            .collect();
        ensure(inserted.len() == pieces.len() - 1, || format!("edge {}: vertex count", e.id))?;
        // Walk from the tail through inserted vertices to the head.
        let mut at = ct.vertex_index(&c.vertices()[e.tail].id).unwrap();
        let mut unused: BTreeSet<usize> = pieces.iter().copied().collect();
        while let Some(&p) = unused.iter().find(|&&p| ct.edges()[p].tail == at) {
            unused.remove(&p);
            at = ct.edges()[p].head;
            if unused.is_empty() {
                break;
            }
            ensure(inserted.contains(&at) && ct.valence(at) == 2, || format!("edge {}: broken path", e.id))?;
        }
        ensure(unused.is_empty(), || format!("edge {}: pieces not a path", e.id))?;
        ensure(ct.vertices()[at].id == c.vertices()[e.head].id, || format!("edge {}: wrong end", e.id))?;
        let total: Vec<BigRational> = (0..base.free_rank())
            .map(|k| pieces.iter().map(|&p| rd.lengths[p][k].clone()).sum())
            .collect();
        let whole: Vec<BigRational> = base.generator(ei).free.iter().map(|&x| qi(x)).collect();
        ensure(total == whole, || format!("edge {}: lengths do not add up", e.id))?;
    }
    // Values propagated along the subdivision, starting at level 0.
    let root = (0..ct.num_vertices()).find(|&v| rd.level_map[v] == 0).ok_or("no level 0")?;
    let mut value: Vec<Option<Vec<BigRational>>> = vec![None; ct.num_vertices()];
    value[root] = Some(rd.level_values[0].clone());
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for (p, e) in ct.edges().iter().enumerate() {
            if e.tail != v && e.head != v {
                continue;
            }
            let step: Vec<BigRational> = rd.lengths[p].iter().map(|x| x * qi(rd.slopes[p])).collect();
            let here = value[v].clone().unwrap();
            let (other, there): (usize, Vec<BigRational>) = if e.tail == v {
                (e.head, here.iter().zip(&step).map(|(a, b)| a + b).collect())
            } else {
                (e.tail, here.iter().zip(&step).map(|(a, b)| a - b).collect())
            };
            match &value[other] {
                Some(existing) => ensure(existing == &there, || "values disagree around a cycle".into())?,
                None => {
                    value[other] = Some(there);
                    queue.push_back(other);
                }
            }
        }
    }
    for v in 0..ct.num_vertices() {
        let got = value[v].as_ref().ok_or("disconnected subdivision")?;
        ensure(got == &rd.level_values[rd.level_map[v]], || {
            format!("vertex {} off its level", ct.vertices()[v].id)
        })?;
    }
    ensure(rd.no_vertex_on_node, || "a vertex sits inside a chain node".into())?;
    Ok(())
}

fn criterion_8(corpus: &[(String, PLDivisor, RubberData)]) -> Outcome {
    let mut refined = 0;
    for (name, d, rd) in corpus {
        check_conservation(d, rd).map_err(|e| format!("{name}: {e}"))?;
        refined += usize::from(rd.lattice_extension_index > 1);
    }
    Ok(format!("{} rubber packages, {refined} with lattice refinement", corpus.len()))
}

fn criterion_9(corpus: &[(String, PLDivisor, RubberData)]) -> Outcome {
    for (name, d, rd) in corpus {
        let g = d.graph().genus() as i64;
        let n = d.graph().legs().len() as i64;
        let r = rubber::obstruction_ranks(rd, g, n);
        ensure(r.h1_rank == g, || format!("{name}: h1 {}", r.h1_rank))?;
        ensure(r.vdim == 2 * g - 3 + n, || format!("{name}: vdim {}", r.vdim))?;
        ensure(r.euler_fdagger - r.primary_obstruction_rank == 1 - g, || format!("{name}: euler"))?;
        let crossing = (0..rd.subdivided.num_edges())
            .filter(|&p| rd.level_map[rd.subdivided.edges()[p].tail] != rd.level_map[rd.subdivided.edges()[p].head])
            .count() as i64;
        ensure(r.primary_obstruction_rank == crossing, || format!("{name}: primary rank"))?;
    }
    Ok(format!("{} rubber packages", corpus.len()))
}

/// Integral definition over a box: every kernel vector is `>= 0` or `<= 0`.
fn valuative_by_search(m: &IntMatrix, radius: i64) -> bool {
    let s = m.cols();
    let mut x = vec![-radius; s];
    loop {
        let killed = (0..m.rows()).all(|i| (0..s).map(|j| m.get(i, j) * x[j]).sum::<i64>() == 0);
        if killed && !(x.iter().all(|&v| v >= 0) || x.iter().all(|&v| v <= 0)) {
            return false;
        }
        let mut i = s;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if x[i] < radius {
                x[i] += 1;
                break;
            }
            x[i] = -radius;
        }
    }
}

fn criterion_10() -> Outcome {
    let examples = [
        IntMatrix::new(2, vec![vec![1, 0]]).unwrap(),
        IntMatrix::new(2, vec![vec![1, 1]]).unwrap(),
        IntMatrix::identity(3),
    ];
    let got: Vec<bool> = examples
        .iter()
        .map(|m| MonoidHom::new(m.clone()).unwrap().is_relatively_valuative())
        .collect();
    let oracle: Vec<bool> = examples.iter().map(|m| valuative_by_search(m, 4)).collect();
    ensure(got == vec![true, false, true], || format!("got {got:?}"))?;
    ensure(oracle == got, || format!("box search gave {oracle:?}"))?;
    Ok(format!("{got:?}"))
}

fn criterion_11() -> Outcome {
    let mut counts = Vec::new();
    for (g, n, want) in [(1, 1, 2), (0, 3, 1), (0, 4, 4)] {
        let got = graph::enumerate_stable_graphs(g, n).unwrap().len();
        ensure(got == want, || format!("({g},{n}): {got}, want {want}"))?;
        counts.push(format!("({g},{n})={got}"));
    }
    Ok(counts.join(", "))
}

fn main() {
    let mut failures = 0;
    let mut report = |id: u32, title: &str, limit: Duration, run: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the {:?} limit", limit)),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("criterion {id:>2} {status} [{title}] {:.2?}: {detail}", elapsed);
    };
    let secs = Duration::from_secs;
    report(1, "theta parity", secs(1), &criterion_1);
    report(2, "nondegenerate stratum counts", secs(1), &criterion_2);
    report(3, "enumeration completeness", secs(120), &criterion_3);
    report(4, "tree twist uniqueness", secs(60), &criterion_4);
    report(5, "harmonic uniqueness", secs(60), &criterion_5);
    report(6, "subdivision cell counts", secs(10), &criterion_6);
    report(7, "fan partition", secs(30), &criterion_7);
    let start = Instant::now();
    let corpus = rubber_corpus();
    let build_time = start.elapsed();
    report(8, "subdivision conservation", secs(30).saturating_sub(build_time), &|| criterion_8(&corpus));
    report(9, "rank identities", secs(5), &|| criterion_9(&corpus));
    report(10, "relative valuativity", secs(1), &criterion_10);
    report(11, "catalog counts", secs(10), &criterion_11);
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
