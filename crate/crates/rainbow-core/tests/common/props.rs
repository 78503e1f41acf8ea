//! The invariant suite. Each property runs a seeded proptest runner for a
//! given number of cases and reports the first counterexample.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use proptest::prelude::*;
use proptest::test_runner::{Config as RunnerConfig, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rainbow_core::biclique::{
    ceil_log2, cover_complement_colored, cover_complete_graph, jukna_cover_greedy, jukna_cover_random,
    BipartiteGraph, CoverMode, CoverOptions,
};
use rainbow_core::dsu::DisjointSets;
use rainbow_core::exact::{
    brute_force_solve, count_satisfying_2colorings, extract_2coloring, find_coloring, propagation_search,
    solve_subset_rainbow,
};
use rainbow_core::format::{parse_coloring, parse_cover, parse_instance, write_coloring, write_cover, write_instance};
use rainbow_core::gen;
use rainbow_core::graph::{bfs_distances, feasible_pairs, greedy_proper_coloring};
use rainbow_core::maxrb::{derandomized_approx_traced, kernel_bound, kernelize, solve_max_rainbow, KernelVerdict};
use rainbow_core::reduction::cnf::brute_force_model;
use rainbow_core::reduction::conflict::precoloring_conflict_graph;
use rainbow_core::reduction::pipeline::{compile, CompileOptions, Target};
use rainbow_core::reduction::sat_ext::{sat_to_sr2c_ext, scale, Origin, VertexName};
use rainbow_core::reduction::trace::{parse_trace, write_trace};
use rainbow_core::verify::{find_guided_walk, is_rainbow_connected, verify_requests};
use rainbow_core::{Config, Graph, Instance, Pair, PartialColoring, Requests};

use super::*;

pub type PropFn = fn(u32) -> Result<u32, String>;

/// `(module, name, run, cases in the full suite)`.
pub const SUITE: &[(&str, &str, PropFn, u32)] = &[
    ("graph-core", "canonical edges and adjacency round trip", graph_canonical, 1000),
    ("graph-core", "bfs distances match Floyd-Warshall", bfs_matches_floyd, 500),
    ("graph-core", "feasible pairs grow with k", feasible_monotone, 500),
    ("graph-core", "greedy coloring proper with at most max degree + 1 colors", greedy_coloring, 500),
    ("graph-core", "disjoint sets match BFS components", dsu_components, 500),
    ("rainbow-verify", "guided walk soundness", walk_soundness, 1000),
    ("rainbow-verify", "guided walk agrees with walk enumeration", walk_completeness, 1000),
    ("rainbow-verify", "satisfied set grows with k", verify_monotone, 500),
    ("rainbow-verify", "satisfied set invariant under color permutation", verify_permutation, 500),
    ("exact-solvers", "decision agrees with the enumeration oracle", decision_oracle, 500),
    ("exact-solvers", "2-coloring count agrees with enumeration", count_oracle, 500),
    ("exact-solvers", "every solver output satisfies its requests", solver_soundness, 400),
    ("exact-solvers", "counts shrink when a request is added", count_antitone, 300),
    ("exact-solvers", "count with no requests is 2^m and counts stay in [0, 2^m]", count_range, 300),
    ("exact-solvers", "branching keeps guide sets within k", guide_discipline, 300),
    ("max-rainbow", "approximation meets k!/k^k of the plan", approx_guarantee, 500),
    ("max-rainbow", "conditional expectation never decreases", expectation_monotone, 500),
    ("max-rainbow", "kernel preserves the verdict", kernel_equivalence, 200),
    ("max-rainbow", "reduced kernel within 3q k^k / k! vertices", kernel_size, 300),
    ("max-rainbow", "maximum solver agrees with the brute-force maximizer", max_oracle, 200),
    ("biclique-cover", "colored complement cover valid, complete, sharing at most one vertex per edge", colored_cover, 300),
    ("biclique-cover", "bipartite complement covers valid and complete", bipartite_covers, 300),
    ("biclique-cover", "complete graph cover has ceil(log2 n) bicliques", complete_cover, 64),
    ("biclique-cover", "greedy cover within 10 D log2(n + 1)", greedy_bound, 150),
    ("reduction-pipeline", "compression passes its structural audit and degree bounds", sat_audit, 200),
    ("reduction-pipeline", "emitted colorings are proper", palettes_proper, 100),
    ("reduction-pipeline", "small formulas: satisfiable iff each stage is YES", chain_equivalence, 20),
    ("reduction-pipeline", "lifted witnesses pass every stage verifier", witness_round_trip, 20),
    ("cli", "instance text round trip", instance_round_trip, 500),
    ("cli", "coloring text round trip", coloring_round_trip, 500),
    ("cli", "cover text round trip", cover_round_trip, 300),
    ("cli", "trace text round trip", trace_round_trip, 40),
];

fn runner(cases: u32) -> TestRunner {
    let cfg = RunnerConfig { cases, failure_persistence: None, max_shrink_iters: 256, ..RunnerConfig::default() };
    TestRunner::new_with_rng(cfg, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn check<S: Strategy>(
    cases: u32,
    strat: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<u32, String> {
    runner(cases).run(&strat, test).map(|_| cases).map_err(|e| e.to_string())
}

fn cfg() -> Config {
    Config::default()
}

fn fail(msg: impl Into<String>) -> TestCaseError {
    TestCaseError::fail(msg.into())
}

fn lib<T>(r: rainbow_core::Result<T>) -> Result<T, TestCaseError> {
    r.map_err(|e| fail(format!("library error: {e}")))
}

/// Random subset of the feasible anti-edges, chosen by `mask`.
fn pick(f: &[Pair], mask: u64, cap: usize) -> Vec<Pair> {
    f.iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, &p)| p).take(cap).collect()
}

fn graph_k_mask(max_n: usize, max_m: usize) -> impl Strategy<Value = (Graph, usize, u64)> {
    (arb_sparse_graph(2, max_n, max_m), 2usize..=3, any::<u64>())
}

// graph-core

fn graph_canonical(cases: u32) -> Result<u32, String> {
    let s = (1usize..12).prop_flat_map(|n| (Just(n), proptest::collection::vec((0..n, 0..n), 0..30)));
    check(cases, s, |(n, raw)| {
        let raw: Vec<Pair> = raw.into_iter().filter(|(u, v)| u != v).collect();
        let g = lib(Graph::new(n, raw.iter().copied()))?;
        let want: BTreeSet<Pair> = raw.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        let got: Vec<Pair> = g.edges().collect();
        prop_assert!(got.iter().all(|&(u, v)| u < v));
        prop_assert_eq!(got.iter().copied().collect::<BTreeSet<_>>(), want.clone());
        prop_assert_eq!(got.len(), want.len());
        let mut back = BTreeSet::new();
        for v in 0..n {
            for (w, e) in g.adj(v) {
                let (a, b) = g.edge(e);
                prop_assert!((a, b) == (v.min(w), v.max(w)));
                prop_assert!(g.adj(w).any(|(x, f)| x == v && f == e), "adjacency not symmetric");
                back.insert((a, b));
            }
        }
        prop_assert_eq!(back, want);
        prop_assert!(Graph::new(n, [(0, 0)]).is_err());
        Ok(())
    })
}

fn bfs_matches_floyd(cases: u32) -> Result<u32, String> {
    check(cases, arb_graph(9), |g| {
        let d = distances(&g);
        for s in 0..g.n() {
            let b = bfs_distances(&g, s);
            for v in 0..g.n() {
                let want = if d[s][v] == INF { None } else { Some(d[s][v] as u32) };
                prop_assert_eq!(b[v].finite(), want);
            }
        }
        Ok(())
    })
}

fn feasible_monotone(cases: u32) -> Result<u32, String> {
    check(cases, (arb_graph(9), 1usize..6), |(g, k)| {
        let a = feasible_pairs(&g, k);
        let b = feasible_pairs(&g, k + 1);
        prop_assert_eq!(&a, &feasible(&g, k));
        let bs: BTreeSet<Pair> = b.into_iter().collect();
        prop_assert!(a.iter().all(|p| bs.contains(p)));
        Ok(())
    })
}

fn greedy_coloring(cases: u32) -> Result<u32, String> {
    check(cases, arb_graph(12), |g| {
        let c = greedy_proper_coloring(&g);
        let delta = (0..g.n()).map(|v| g.degree(v)).max().unwrap_or(0);
        prop_assert!(g.edges().all(|(u, v)| c[u] != c[v]));
        prop_assert!(c.iter().all(|&x| x >= 1 && x <= delta + 1));
        Ok(())
    })
}

fn dsu_components(cases: u32) -> Result<u32, String> {
    let s = (1usize..40).prop_flat_map(|n| (Just(n), proptest::collection::vec((0..n, 0..n), 0..60)));
    check(cases, s, |(n, unions)| {
        let mut d = DisjointSets::new(n);
        for &(a, b) in &unions {
            d.union(a, b);
        }
        let comp = components(n, &unions);
        for a in 0..n {
            for b in 0..n {
                prop_assert_eq!(d.same(a, b), comp[a] == comp[b]);
            }
        }
        let classes: BTreeSet<usize> = comp.iter().copied().collect();
        prop_assert_eq!(d.class_count(), classes.len());
        Ok(())
    })
}

// rainbow-verify

/// Graph, partial coloring, pair, guide and `k`.
fn walk_case(max_n: usize, total: bool) -> impl Strategy<Value = (Graph, PartialColoring, Pair, Vec<usize>, usize)> {
    (arb_sparse_graph(2, max_n, 10), 1usize..=4).prop_flat_map(move |(g, k)| {
        let m = g.m();
        let n = g.n();
        let colors = proptest::collection::vec(if total { 1..=k as u8 } else { 0..=k as u8 }, m);
        (Just(g), colors, 0..n, 1..n, any::<u64>(), Just(k))
            .prop_map(|(g, colors, u, d, gm, k)| {
                let v = (u + d) % g.n();
                let mut c0 = PartialColoring::empty(g.m(), k);
                for (e, &x) in colors.iter().enumerate() {
                    if x > 0 {
                        c0.set(e, x);
                    }
                }
                let guide: Vec<usize> =
                    (0..g.m()).filter(|&e| c0.get(e).is_some() && gm >> (e % 64) & 1 == 1).take(k).collect();
                (g, c0, (u, v), guide, k)
            })
    })
}

fn walk_soundness(cases: u32) -> Result<u32, String> {
    check(cases, walk_case(7, false), |(g, c0, (u, v), guide, k)| {
        let Some(w) = lib(find_guided_walk(&g, &c0, (u, v), &guide, k))? else {
            return Ok(());
        };
        prop_assert_eq!(w.vertices.first().copied(), Some(u));
        prop_assert_eq!(w.vertices.last().copied(), Some(v));
        prop_assert!(w.len() <= k);
        prop_assert_eq!(w.vertices.len(), w.edges.len() + 1);
        for (i, &e) in w.edges.iter().enumerate() {
            let (a, b) = g.edge(e);
            let (x, y) = (w.vertices[i], w.vertices[i + 1]);
            prop_assert!((a, b) == (x.min(y), x.max(y)), "edge {e} does not join {x} and {y}");
        }
        prop_assert!(guide.iter().all(|e| w.edges.contains(e)), "guide edge missing");
        let mut seen = 0u64;
        let mut free = BTreeSet::new();
        for &e in &w.edges {
            match c0.get(e) {
                Some(c) => {
                    prop_assert!(seen & (1 << c) == 0, "color {c} repeated");
                    seen |= 1 << c;
                }
                None => prop_assert!(free.insert(e), "uncolored edge {e} repeated"),
            }
        }
        Ok(())
    })
}

fn walk_completeness(cases: u32) -> Result<u32, String> {
    let s = prop_oneof![walk_case(5, true), walk_case(5, false)];
    check(cases, s, |(g, c0, pair, guide, k)| {
        let got = lib(find_guided_walk(&g, &c0, pair, &guide, k))?.is_some();
        prop_assert_eq!(got, oracle_walk(&g, &c0, pair, &guide, k));
        Ok(())
    })
}

fn colored_graph(max_n: usize, max_m: usize, kmax: usize) -> impl Strategy<Value = (Graph, Vec<u8>, usize)> {
    (arb_sparse_graph(2, max_n, max_m), 1..=kmax).prop_flat_map(|(g, k)| {
        let m = g.m();
        (Just(g), proptest::collection::vec(1..=k as u8, m), Just(k))
    })
}

fn verify_monotone(cases: u32) -> Result<u32, String> {
    check(cases, colored_graph(8, 14, 4), |(g, c, k)| {
        let s = anti_edges(&g);
        let a = verify_requests(&g, &c, &s, k);
        let b: BTreeSet<Pair> = verify_requests(&g, &c, &s, k + 1).into_iter().collect();
        prop_assert!(a.iter().all(|p| b.contains(p)));
        prop_assert_eq!(a.into_iter().collect::<BTreeSet<_>>(), satisfied(&g, &c, &s, k));
        Ok(())
    })
}

fn verify_permutation(cases: u32) -> Result<u32, String> {
    let s = colored_graph(8, 14, 4).prop_flat_map(|(g, c, k)| {
        let perm = Just((1..=k as u8).collect::<Vec<u8>>()).prop_shuffle();
        (Just(g), Just(c), Just(k), perm)
    });
    check(cases, s, |(g, c, k, perm)| {
        let s = anti_edges(&g);
        let pc: Vec<u8> = c.iter().map(|&x| perm[x as usize - 1]).collect();
        prop_assert_eq!(verify_requests(&g, &c, &s, k), verify_requests(&g, &pc, &s, k));
        Ok(())
    })
}

// exact-solvers

fn decision_oracle(cases: u32) -> Result<u32, String> {
    check(cases, graph_k_mask(5, 10), |(g, k, mask)| {
        let s = pick(&feasible(&g, k), mask, 10);
        let inst = lib(Instance::subset(g.clone(), k, s.clone()))?;
        let got = lib(solve_subset_rainbow(&inst, &cfg()))?;
        let want = oracle_decide(&g, k, &s, &vec![0; g.m()]);
        prop_assert_eq!(got.is_some(), want);
        prop_assert_eq!(lib(brute_force_solve(&inst, &cfg()))?.is_some(), want);
        Ok(())
    })
}

fn count_oracle(cases: u32) -> Result<u32, String> {
    check(cases, (arb_sparse_graph(2, 8, 12), any::<u64>()), |(g, mask)| {
        let s = pick(&anti_edges(&g), mask, 6);
        let got = lib(count_satisfying_2colorings(&g, &s, &cfg()))?;
        prop_assert_eq!(got, BigUint::from(oracle_count(&g, 2, &s)));
        Ok(())
    })
}

fn solver_soundness(cases: u32) -> Result<u32, String> {
    let s = (graph_k_mask(7, 12), any::<u64>(), any::<u64>());
    check(cases, s, |((g, k, mask), pmask, pcol)| {
        let s = pick(&feasible(&g, k), mask, 12);
        let mut c0 = PartialColoring::empty(g.m(), k);
        for e in 0..g.m() {
            if pmask >> (e % 64) & 3 == 0 {
                c0.set(e, (pcol >> (2 * (e % 32)) & 3) as u8 % k as u8 + 1);
            }
        }
        let inst = lib(Instance::subset(g.clone(), k, s.clone()))?;
        let pre = lib(inst.clone().with_precoloring(c0.clone()))?;
        let sound = |c: &[u8], c0: &PartialColoring| -> Result<(), TestCaseError> {
            prop_assert_eq!(c.len(), g.m());
            prop_assert!(c.iter().all(|&x| x >= 1 && x as usize <= k));
            prop_assert!(c0.is_extended_by(c), "precoloring not kept");
            prop_assert_eq!(satisfied(&g, c, &s, k).len(), s.len(), "request left unsatisfied");
            Ok(())
        };
        let empty = PartialColoring::empty(g.m(), k);
        let mut small = cfg();
        small.budgets.search_nodes = 200_000;
        let outs = [
            (lib(solve_subset_rainbow(&inst, &cfg()))?, &empty),
            (lib(solve_subset_rainbow(&pre, &cfg()))?, &c0),
            (lib(propagation_search(&g, k, &s, &c0, &cfg()))?.0, &c0),
            (
                match find_coloring(&g, k, &s, &vec![true; s.len()], &c0, &vec![Vec::new(); s.len()], &small) {
                    Ok((c, _)) => c,
                    Err(rainbow_core::Error::Resource(_)) => None,
                    Err(e) => return Err(fail(e.to_string())),
                },
                &c0,
            ),
        ];
        for (c, c0) in &outs {
            if let Some(c) = c {
                sound(c, c0)?;
            }
        }
        if k == 2 && s.len() <= 12 {
            if let Some(c) = lib(extract_2coloring(&g, &s, Some(&c0), &cfg()))? {
                sound(&c, &c0)?;
            }
        }
        Ok(())
    })
}

fn count_antitone(cases: u32) -> Result<u32, String> {
    check(cases, (arb_sparse_graph(3, 9, 14), any::<u64>(), any::<prop::sample::Index>()), |(g, mask, idx)| {
        let a = anti_edges(&g);
        prop_assume!(!a.is_empty());
        let s = pick(&a, mask, 8);
        let mut t = s.clone();
        let r = a[idx.index(a.len())];
        if !t.contains(&r) {
            t.push(r);
        }
        let cs = lib(count_satisfying_2colorings(&g, &s, &cfg()))?;
        let ct = lib(count_satisfying_2colorings(&g, &t, &cfg()))?;
        prop_assert!(ct <= cs);
        Ok(())
    })
}

fn count_range(cases: u32) -> Result<u32, String> {
    check(cases, (arb_sparse_graph(2, 10, 20), any::<u64>()), |(g, mask)| {
        let all = BigUint::from(1u32) << g.m();
        prop_assert_eq!(lib(count_satisfying_2colorings(&g, &[], &cfg()))?, all.clone());
        let s = pick(&anti_edges(&g), mask, 10);
        let c = lib(count_satisfying_2colorings(&g, &s, &cfg()))?;
        prop_assert!(c <= all);
        Ok(())
    })
}

fn guide_discipline(cases: u32) -> Result<u32, String> {
    check(cases, graph_k_mask(6, 10), |(g, k, mask)| {
        let s = pick(&feasible(&g, k), mask, 8);
        let c0 = PartialColoring::empty(g.m(), k);
        let mut small = cfg();
        small.budgets.search_nodes = 200_000;
        match find_coloring(&g, k, &s, &vec![true; s.len()], &c0, &vec![Vec::new(); s.len()], &small) {
            Ok((_, stats)) => {
                prop_assert!(stats.max_guide <= k, "guide of size {} above k = {k}", stats.max_guide);
                prop_assert!(stats.max_depth <= (k + 1) * s.len() + 1);
            }
            Err(rainbow_core::Error::Resource(_)) => {}
            Err(e) => return Err(fail(e.to_string())),
        }
        Ok(())
    })
}

// max-rainbow

fn falling(k: usize) -> (u128, u128) {
    let f: u128 = (1..=k as u128).product();
    (f, (k as u128).pow(k as u32))
}

fn approx_guarantee(cases: u32) -> Result<u32, String> {
    check(cases, (arb_sparse_graph(3, 12, 30), 2usize..=3, any::<u64>()), |(g, k, mask)| {
        let s = pick(&feasible(&g, k), mask, 40);
        let a = lib(derandomized_approx_traced(&g, &s, k))?;
        prop_assert_eq!(a.plan.edges.len(), s.len());
        let rainbow = a.plan.edges.iter().filter(|p| is_rainbow(p, &a.coloring)).count();
        let (num, den) = falling(k);
        let need = (num * s.len() as u128).div_ceil(den) as usize;
        prop_assert!(rainbow >= need, "{rainbow} rainbow plan paths, need {need}");
        for (p, &(u, v)) in a.plan.edges.iter().zip(&s) {
            prop_assert!(p.len() <= k);
            let mut ends = BTreeSet::new();
            for &e in p {
                let (x, y) = g.edge(e);
                for w in [x, y] {
                    if !ends.remove(&w) {
                        ends.insert(w);
                    }
                }
            }
            prop_assert_eq!(ends, BTreeSet::from([u, v]), "plan path does not join its pair");
        }
        Ok(())
    })
}

fn expectation_monotone(cases: u32) -> Result<u32, String> {
    check(cases, (arb_sparse_graph(3, 12, 30), 2usize..=3, any::<u64>()), |(g, k, mask)| {
        let s = pick(&feasible(&g, k), mask, 40);
        let a = lib(derandomized_approx_traced(&g, &s, k))?;
        prop_assert_eq!(a.expectations.len(), g.m() + 1);
        prop_assert!(a.expectations.windows(2).all(|w| w[1] >= w[0]), "{:?}", a.expectations);
        let (_, den) = falling(k);
        let last = *a.expectations.last().unwrap();
        prop_assert_eq!(last, den * a.plan.rainbow_count(&a.coloring) as u128);
        Ok(())
    })
}

fn kernel_equivalence(cases: u32) -> Result<u32, String> {
    check(cases, (arb_sparse_graph(2, 8, 10), 2usize..=3, 0usize..12), |(g, k, q)| {
        let r = lib(kernelize(&g, k, q))?;
        let direct = lib(solve_max_rainbow(&g, k, q, &cfg()))?.yes;
        let kernel = match r.verdict {
            KernelVerdict::Yes => true,
            KernelVerdict::Reduced => lib(solve_max_rainbow(&r.graph, k, r.q, &cfg()))?.yes,
        };
        prop_assert_eq!(direct, kernel);
        Ok(())
    })
}

fn kernel_size(cases: u32) -> Result<u32, String> {
    check(cases, (arb_sparse_graph(2, 14, 30), 2usize..=4, 0usize..20), |(g, k, q)| {
        let r = lib(kernelize(&g, k, q))?;
        if r.verdict == KernelVerdict::Reduced {
            let (num, den) = falling(k);
            // 3 q k^k / k!, rounded down
            let bound = (3 * q as u128 * den / num) as usize;
            prop_assert_eq!(kernel_bound(q, k), bound);
            prop_assert!(r.graph.n() <= bound, "{} vertices above {bound}", r.graph.n());
            prop_assert!(r.q <= q);
        }
        Ok(())
    })
}

fn max_oracle(cases: u32) -> Result<u32, String> {
    let s = (2usize..=3).prop_flat_map(|k| (arb_sparse_graph(2, 7, if k == 2 { 12 } else { 8 }), Just(k), 0usize..10));
    check(cases, s, |(g, k, q)| {
        let r = lib(solve_max_rainbow(&g, k, q, &cfg()))?;
        prop_assert_eq!(r.yes, oracle_max(&g, k) >= q);
        if let Some(c) = &r.coloring {
            prop_assert!(satisfied(&g, c, &feasible(&g, k), k).len() >= q);
        }
        Ok(())
    })
}

// biclique-cover

fn colored_cover(cases: u32) -> Result<u32, String> {
    let mode = prop_oneof![Just(CoverMode::Greedy), Just(CoverMode::Random), Just(CoverMode::Auto)];
    check(cases, (arb_sparse_graph(1, 16, 30), mode, any::<u64>()), |(g, mode, seed)| {
        let vc = greedy_proper_coloring(&g);
        let opts = CoverOptions { mode, seed, ..CoverOptions::default() };
        let c = lib(cover_complement_colored(&g, &vc, &opts))?;
        let target: BTreeSet<Pair> = anti_edges(&g).into_iter().collect();
        let edges: Vec<Pair> = g.edges().collect();
        check_cover(&c.bicliques, &target, &edges).map_err(fail)?;
        Ok(())
    })
}

fn bipartite(max_side: usize) -> impl Strategy<Value = BipartiteGraph> {
    (1..=max_side, 1..=max_side, 1usize..=4, any::<u64>())
        .prop_map(|(l, r, d, seed)| gen::random_bipartite(l, r, d, &mut gen::rng(seed)).unwrap())
}

fn bip_target(b: &BipartiteGraph) -> BTreeSet<Pair> {
    let edges: BTreeSet<(usize, usize)> = b.edges().collect();
    let mut t = BTreeSet::new();
    for (i, &x) in b.left.iter().enumerate() {
        for (j, &y) in b.right.iter().enumerate() {
            if !edges.contains(&(i, j)) {
                t.insert((x.min(y), x.max(y)));
            }
        }
    }
    t
}

fn bipartite_covers(cases: u32) -> Result<u32, String> {
    check(cases, (bipartite(12), any::<u64>()), |(b, seed)| {
        let t = bip_target(&b);
        let g = lib(jukna_cover_greedy(&b, 20, 1))?;
        check_cover(&g.bicliques, &t, &[]).map_err(fail)?;
        let r = lib(jukna_cover_random(&b, seed))?;
        check_cover(&r.bicliques, &t, &[]).map_err(fail)?;
        Ok(())
    })
}

fn complete_cover(cases: u32) -> Result<u32, String> {
    check(cases, 1usize..=64, |n| {
        let c = cover_complete_graph(n);
        let want = (0..).find(|&b| 1usize << b >= n).unwrap();
        prop_assert_eq!(c.len(), want);
        prop_assert_eq!(ceil_log2(n), want);
        let t: BTreeSet<Pair> = pairs(n).into_iter().collect();
        check_cover(&c.bicliques, &t, &[]).map_err(fail)?;
        Ok(())
    })
}

fn greedy_bound(cases: u32) -> Result<u32, String> {
    // the bound is stated for graphs with at least one edge
    check(cases, bipartite(16).prop_filter("needs an edge", |b| b.max_degree() > 0), |b| {
        let c = lib(jukna_cover_greedy(&b, 20, 1))?;
        let n = (b.left.len() + b.right.len()) as f64;
        let bound = 10.0 * b.max_degree() as f64 * (n + 1.0).log2();
        prop_assert!(c.len() as f64 <= bound, "{} bicliques above {bound}", c.len());
        Ok(())
    })
}

// reduction-pipeline

fn tovey(max_vars: usize) -> impl Strategy<Value = rainbow_core::reduction::cnf::Cnf> {
    (3..=max_vars, any::<u64>()).prop_flat_map(|(n, seed)| {
        (1..=4 * n / 3).prop_map(move |c| gen::tovey_formula(n, c, &mut gen::rng(seed)).unwrap())
    })
}

fn sat_audit(cases: u32) -> Result<u32, String> {
    check(cases, tovey(30), |f| {
        let (inst, t) = lib(sat_to_sr2c_ext(&f))?;
        lib(t.audit(&inst))?;
        let (a, b) = scale(f.nvars);
        prop_assert_eq!((t.a, t.b), (a, b));
        let lo = t.layout();
        let w = a + 3;
        prop_assert_eq!(inst.graph.n(), lo.n);
        let clustered: usize = t.cluster_sizes.iter().sum();
        prop_assert_eq!(inst.graph.m(), 2 * f.nvars + 3 * clustered + 6 * f.clauses.len());
        let mut deg_s = vec![0usize; inst.graph.n()];
        for &(u, v) in inst.request_pairs().iter() {
            deg_s[u] += 1;
            deg_s[v] += 1;
        }
        for v in 0..inst.graph.n() {
            let (d, ds) = (inst.graph.degree(v), deg_s[v]);
            match lo.name(v) {
                VertexName::M(_) => prop_assert!(d <= 6 * a && ds <= 4 * a, "middle vertex {v}"),
                VertexName::C(..) => prop_assert!(d == 3 && ds <= a, "clause vertex {v}"),
                VertexName::B(..) => prop_assert!(d <= 2 * a + 1 && ds <= a, "literal vertex {v}"),
                VertexName::U(..) | VertexName::L(..) => prop_assert!(d <= w && ds <= 5 * w, "layer vertex {v}"),
                VertexName::A(i, _) => {
                    let ni = t.cluster_sizes[i - 1];
                    prop_assert!(d <= 3 * ni && ds <= 4 * ni, "anchor vertex {v}")
                }
            }
        }
        // variable requests have a single 2-path, clause requests exactly three
        for ((u, v), origin) in t.requests_with_origin() {
            let common = (0..inst.graph.n()).filter(|&x| inst.graph.has_edge(u, x) && inst.graph.has_edge(x, v)).count();
            match origin {
                Origin::Var(_) => prop_assert_eq!(common, 1),
                Origin::Clause(_) => prop_assert_eq!(common, 3),
                _ => {}
            }
        }
        Ok(())
    })
}

fn palettes_proper(cases: u32) -> Result<u32, String> {
    check(cases, tovey(12), |f| {
        let (inst, t) = lib(sat_to_sr2c_ext(&f))?;
        let c4 = t.color4();
        prop_assert!(c4.iter().all(|&c| (1..=4).contains(&c)));
        for (u, v) in inst.graph.edges().chain(inst.request_pairs().iter().copied()) {
            prop_assert!(c4[u] != c4[v], "4-coloring clash on {:?}", (u, v));
        }
        let (cg, _) = precoloring_conflict_graph(&inst);
        let cc = t.cg_coloring();
        prop_assert!(cg.edges().all(|(a, b)| cc[a] != cc[b]));
        Ok(())
    })
}

fn chain_equivalence(cases: u32) -> Result<u32, String> {
    let s = (3usize..=6, 1usize..=3, any::<u64>())
        .prop_map(|(n, c, seed)| gen::tovey_formula(n, c, &mut gen::rng(seed)).unwrap());
    check(cases, s, |f| {
        let sat = lib(brute_force_model(&f))?.is_some();
        let opts = CompileOptions { k: 3, target: Target::Srkc, cover: CoverOptions::default() };
        let c = lib(compile(&f, &opts))?;
        let two = lib(solve_subset_rainbow(&c.instances[0], &cfg()))?.is_some();
        let many = lib(solve_subset_rainbow(c.instance(), &cfg()))?.is_some();
        prop_assert_eq!(sat, two);
        prop_assert_eq!(sat, many);
        Ok(())
    })
}

fn witness_round_trip(cases: u32) -> Result<u32, String> {
    let s = (3usize..=15, any::<u64>()).prop_flat_map(|(n, seed)| {
        (1..=(4 * n / 3).min(20)).prop_map(move |c| gen::planted_tovey(n, c, &mut gen::rng(seed)).unwrap())
    });
    check(cases, s, |(f, model)| {
        let opts = CompileOptions { k: 3, target: Target::Rkc, cover: CoverOptions::default() };
        let c = lib(compile(&f, &opts))?;
        let cols = lib(c.lift_all(&model, &cfg()))?;
        prop_assert_eq!(cols.len(), c.instances.len());
        for (inst, col) in c.instances.iter().zip(&cols) {
            prop_assert!(inst.precoloring.is_extended_by(col));
            if matches!(inst.requests, Requests::Pairs(_)) {
                let req = inst.request_pairs();
                prop_assert_eq!(verify_requests(&inst.graph, col, &req, inst.k).len(), req.len());
            }
        }
        let last = c.instance();
        prop_assert!(is_rainbow_connected(&last.graph, cols.last().unwrap(), last.k));
        let back = lib(c.extract(cols.last().unwrap()))?;
        prop_assert!(f.satisfied_by(&back));
        Ok(())
    })
}

// cli formats

fn arb_instance() -> impl Strategy<Value = Instance> {
    (arb_sparse_graph(1, 9, 20), 1usize..=5, any::<u64>(), any::<u64>(), 0u8..3).prop_map(|(g, k, rmask, pmask, kind)| {
        let req = match kind {
            0 => Requests::All,
            1 => Requests::Pairs(Vec::new()),
            _ => Requests::Pairs(pick(&anti_edges(&g), rmask, 64)),
        };
        let mut pc = PartialColoring::empty(g.m(), k);
        for e in 0..g.m() {
            if pmask >> (e % 64) & 1 == 1 {
                pc.set(e, (e % k) as u8 + 1);
            }
        }
        Instance::new(g, k, req, Some(pc)).unwrap()
    })
}

fn instance_round_trip(cases: u32) -> Result<u32, String> {
    check(cases, arb_instance(), |inst| {
        let text = write_instance(&inst);
        let back = lib(parse_instance(&text))?;
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(write_instance(&back), text);
        Ok(())
    })
}

fn coloring_round_trip(cases: u32) -> Result<u32, String> {
    check(cases, (colored_graph(9, 20, 6), any::<bool>()), |((g, c, k), null)| {
        let c = (!null).then_some(c);
        let text = write_coloring(&g, c.as_deref());
        prop_assert_eq!(lib(parse_coloring(&text, &g, k))?, c);
        Ok(())
    })
}

fn cover_round_trip(cases: u32) -> Result<u32, String> {
    check(cases, (arb_sparse_graph(1, 12, 20), any::<u64>()), |(g, seed)| {
        let opts = CoverOptions { seed, ..CoverOptions::default() };
        let c = lib(cover_complement_colored(&g, &greedy_proper_coloring(&g), &opts))?;
        let text = write_cover(&c.bicliques);
        prop_assert_eq!(lib(parse_cover(&text))?, c.bicliques);
        Ok(())
    })
}

fn trace_round_trip(cases: u32) -> Result<u32, String> {
    let target = prop_oneof![Just(Target::Sr2cExt), Just(Target::SrkcExt), Just(Target::Srkc), Just(Target::Rkc)];
    let s = (3usize..=8, 1usize..=6, any::<u64>(), target);
    check(cases, s, |(n, c, seed, target)| {
        let f = gen::random_3cnf(n, c, &mut gen::rng(seed)).unwrap();
        let k = if target == Target::Sr2cExt { 2 } else { 3 };
        let comp = lib(compile(&f, &CompileOptions { k, target, cover: CoverOptions::default() }))?;
        let text = write_trace(&comp.trace);
        let back = lib(parse_trace(&text))?;
        prop_assert_eq!(&back, &comp.trace);
        prop_assert_eq!(write_trace(&back), text);
        Ok(())
    })
}
