//! Maximum (subset) rainbow coloring: approximation, kernel and exact driver.

use std::collections::VecDeque;

use crate::config::Config;
use crate::error::{ensure, Error, Result};
use crate::exact::{extract_2coloring, solve_subset_rainbow};
use crate::graph::{feasible_pairs, EdgeId, Graph, Pair, Vertex};
use crate::instance::{Coloring, Instance};
use crate::verify::verify_requests;

/// Largest `k` accepted by the threshold arithmetic.
pub const MAX_K: usize = 8;

/// One fixed path per request.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathPlan {
    pub pairs: Vec<Pair>,
    pub vertices: Vec<Vec<Vertex>>,
    pub edges: Vec<Vec<EdgeId>>,
}

impl PathPlan {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Plan paths whose edges carry pairwise distinct colors under `c`.
    pub fn rainbow_count(&self, c: &[u8]) -> usize {
        self.edges
            .iter()
            .filter(|p| {
                let mut seen = 0u64;
                p.iter().all(|&e| {
                    let bit = 1u64 << (c[e] - 1);
                    let fresh = seen & bit == 0;
                    seen |= bit;
                    fresh
                })
            })
            .count()
    }
}

fn check_k(k: usize) -> Result<()> {
    ensure!((2..=MAX_K).contains(&k), Error::usage(format!("k must lie in 2..={MAX_K}, got {k}")));
    Ok(())
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

fn power(base: usize, exp: usize) -> u128 {
    (base as u128).pow(exp as u32)
}

/// `q <= (k!/k^k) * total`, compared exactly.
pub fn within_guarantee(q: usize, total: usize, k: usize) -> bool {
    q as u128 * power(k, k) <= factorial(k) * total as u128
}

/// `⌈(k!/k^k) * total⌉`.
pub fn guaranteed_count(total: usize, k: usize) -> usize {
    let num = factorial(k) * total as u128;
    let den = power(k, k);
    num.div_ceil(den) as usize
}

/// The kernel's vertex bound `⌊3 q k^k / k!⌋`.
pub fn kernel_bound(q: usize, k: usize) -> usize {
    (3 * q as u128 * power(k, k) / factorial(k)) as usize
}

/// A shortest path from `u` to `v`, lexicographically smallest among shortest.
fn shortest_path(g: &Graph, u: Vertex, v: Vertex, k: usize) -> Option<Vec<Vertex>> {
    let mut dist = vec![u32::MAX; g.n()];
    dist[v] = 0;
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        if x == u || dist[x] as usize >= k {
            continue;
        }
        for &(y, _) in g.adj_raw(x) {
            if dist[y as usize] == u32::MAX {
                dist[y as usize] = dist[x] + 1;
                queue.push_back(y as usize);
            }
        }
    }
    if dist[u] == u32::MAX {
        return None;
    }
    let mut path = vec![u];
    let mut x = u;
    while x != v {
        // adjacency is sorted, so the first step down is the smallest one
        let next = g.adj_raw(x).iter().map(|&(y, _)| y as usize).find(|&y| dist[y] != u32::MAX && dist[y] + 1 == dist[x]);
        x = next?;
        path.push(x);
    }
    Some(path)
}

/// Picks one path of length at most `k` per pair.
pub fn choose_paths(g: &Graph, s: &[Pair], k: usize) -> Result<PathPlan> {
    let mut plan = PathPlan { pairs: Vec::new(), vertices: Vec::new(), edges: Vec::new() };
    for &(u, v) in s {
        ensure!(u < g.n() && v < g.n() && u != v, Error::usage(format!("bad pair ({u}, {v})")));
        let path = shortest_path(g, u, v, k)
            .ok_or_else(|| Error::usage(format!("pair ({u}, {v}) is not within distance {k}")))?;
        let edges = path.windows(2).map(|w| g.edge_id(w[0], w[1]).expect("path edge")).collect();
        plan.pairs.push((u, v));
        plan.vertices.push(path);
        plan.edges.push(edges);
    }
    Ok(plan)
}

/// Output of the derandomized approximation together with its run trace.
#[derive(Clone, Debug)]
pub struct Approximation {
    pub coloring: Coloring,
    pub plan: PathPlan,
    /// Expected number of rainbow plan paths, scaled by `k^k`, before the
    /// first edge is fixed and after each fixing step.
    pub expectations: Vec<u128>,
}

/// Expected rainbow indicator of one path, scaled by `k^k`.
fn path_weight(path: &[EdgeId], c: &[u8], k: usize) -> u128 {
    let mut used = 0u64;
    let mut fixed = 0;
    for &e in path {
        if c[e] != 0 {
            let bit = 1u64 << (c[e] - 1);
            if used & bit != 0 {
                return 0;
            }
            used |= bit;
            fixed += 1;
        }
    }
    let free = path.len() - fixed;
    let falling: u128 = (0..free).map(|i| (k - fixed - i) as u128).product();
    falling * power(k, k - free)
}

/// Colors every edge by the method of conditional expectations over the
/// paths of [`choose_paths`].
pub fn derandomized_approx_traced(g: &Graph, s: &[Pair], k: usize) -> Result<Approximation> {
    check_k(k)?;
    let plan = choose_paths(g, s, k)?;
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); g.m()];
    for (i, p) in plan.edges.iter().enumerate() {
        for &e in p {
            through[e].push(i);
        }
    }
    let mut c = vec![0u8; g.m()];
    let mut weights: Vec<u128> = plan.edges.iter().map(|p| path_weight(p, &c, k)).collect();
    let mut total: u128 = weights.iter().sum();
    let mut expectations = vec![total];
    for e in 0..g.m() {
        let before: u128 = through[e].iter().map(|&i| weights[i]).sum();
        let mut best = (0u128, 1u8);
        for col in 1..=k as u8 {
            c[e] = col;
            let w: u128 = through[e].iter().map(|&i| path_weight(&plan.edges[i], &c, k)).sum();
            if col == 1 || w > best.0 {
                best = (w, col);
            }
        }
        c[e] = best.1;
        for &i in &through[e] {
            weights[i] = path_weight(&plan.edges[i], &c, k);
        }
        total = total - before + best.0;
        expectations.push(total);
    }
    Ok(Approximation { coloring: c, plan, expectations })
}

/// A coloring whose plan paths include at least `(k!/k^k)|S|` rainbow ones.
pub fn derandomized_approx(g: &Graph, s: &[Pair], k: usize) -> Result<Coloring> {
    Ok(derandomized_approx_traced(g, s, k)?.coloring)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelVerdict {
    /// The instance is a YES instance without further work.
    Yes,
    /// `graph` with target `q` is equivalent to the input.
    Reduced,
}

#[derive(Clone, Debug)]
pub struct KernelResult {
    pub verdict: KernelVerdict,
    pub graph: Graph,
    pub q: usize,
    /// Input vertex index of every kept vertex.
    pub kept: Vec<Vertex>,
}

/// Reduces `(g, k, q)` to an equivalent instance with at most
/// `3 q k^k / k!` vertices, or answers YES outright.
pub fn kernelize(g: &Graph, k: usize, q: usize) -> Result<KernelResult> {
    check_k(k)?;
    let mut graph = g.clone();
    let mut kept: Vec<Vertex> = (0..g.n()).collect();
    let mut q = q;
    loop {
        let yes = |graph: Graph, kept: Vec<Vertex>, q| KernelResult { verdict: KernelVerdict::Yes, graph, q, kept };
        if q == 0 {
            return Ok(yes(graph, kept, q));
        }
        let feasible = feasible_pairs(&graph, k);
        if within_guarantee(q, feasible.len(), k) {
            return Ok(yes(graph, kept, q));
        }
        let n = graph.n();
        let mut in_v1 = vec![false; n];
        for &(u, v) in &feasible {
            in_v1[u] = true;
            in_v1[v] = true;
        }
        let comp = graph.components();
        let count = comp.iter().copied().max().map_or(0, |c| c + 1);
        let mut h2 = vec![0usize; count];
        let mut inside = vec![0usize; count];
        let mut smallest = vec![usize::MAX; count];
        for v in 0..n {
            if !in_v1[v] {
                h2[comp[v]] += 1;
            }
            smallest[comp[v]] = smallest[comp[v]].min(v);
        }
        for &(u, _) in &feasible {
            inside[comp[u]] += 1;
        }
        let hit = (0..count).filter(|&h| h2[h] >= inside[h]).min_by_key(|&h| smallest[h]);
        let Some(h) = hit else {
            ensure!(
                n <= kernel_bound(q, k),
                Error::internal(format!("kernel has {n} vertices, above the bound {}", kernel_bound(q, k)))
            );
            return Ok(KernelResult { verdict: KernelVerdict::Reduced, graph, q, kept });
        };
        q -= q.min(inside[h]);
        let keep: Vec<bool> = comp.iter().map(|&c| c != h).collect();
        let (next, old) = graph.induced(&keep);
        kept = old.iter().map(|&v| kept[v]).collect();
        graph = next;
    }
}

/// Verdict of the exact maximum solver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxOutcome {
    pub yes: bool,
    pub coloring: Option<Coloring>,
    /// Number of feasible anti-edges the witness satisfies.
    pub satisfied: usize,
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let q = idx.len();
    let mut i = q;
    while i > 0 {
        i -= 1;
        if idx[i] < n - q + i {
            idx[i] += 1;
            for j in i + 1..q {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn binomial_capped(n: usize, r: usize, cap: u128) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..r.min(n - r) {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > cap {
            return cap + 1;
        }
    }
    acc
}

fn solve_one(g: &Graph, k: usize, s: Vec<Pair>, cfg: &Config) -> Result<Option<Coloring>> {
    let single = Config { workers: 1, ..cfg.clone() };
    if k == 2 {
        extract_2coloring(g, &s, None, &single)
    } else {
        let inst = Instance::subset(g.clone(), k, s)?;
        solve_subset_rainbow(&inst, &single)
    }
}

/// Decides whether some `k`-coloring satisfies at least `q` anti-edges.
pub fn solve_max_rainbow(g: &Graph, k: usize, q: usize, cfg: &Config) -> Result<MaxOutcome> {
    check_k(k)?;
    let feasible = feasible_pairs(g, k);
    let satisfied = |c: &Coloring| verify_requests(g, c, &feasible, k).len();
    if q == 0 || within_guarantee(q, feasible.len(), k) {
        let c = derandomized_approx(g, &feasible, k)?;
        let got = satisfied(&c);
        ensure!(got >= q, Error::internal("approximation fell below its guarantee"));
        return Ok(MaxOutcome { yes: true, coloring: Some(c), satisfied: got });
    }
    if q > feasible.len() {
        return Ok(MaxOutcome { yes: false, coloring: None, satisfied: 0 });
    }
    let cap = cfg.budgets.max_subsets as u128;
    let subsets = binomial_capped(feasible.len(), q, cap);
    ensure!(
        subsets <= cap,
        Error::resource(format!("more than {cap} request subsets of size {q} to try"))
    );
    let workers = cfg.workers.max(1);
    let mut idx: Vec<usize> = (0..q).collect();
    let mut more = true;
    while more {
        let mut batch = Vec::new();
        while more && batch.len() < workers * 16 {
            batch.push(idx.iter().map(|&i| feasible[i]).collect::<Vec<Pair>>());
            more = next_combination(&mut idx, feasible.len());
        }
        let found = if workers == 1 {
            let mut found = None;
            for s in batch {
                if let Some(c) = solve_one(g, k, s, cfg)? {
                    found = Some(c);
                    break;
                }
            }
            found
        } else {
            let results: Vec<Result<Option<(usize, Coloring)>>> = std::thread::scope(|scope| {
                let handles: Vec<_> = (0..workers)
                    .map(|w| {
                        let batch = &batch;
                        scope.spawn(move || {
                            for (i, s) in batch.iter().enumerate().skip(w).step_by(workers) {
                                if let Some(c) = solve_one(g, k, s.clone(), cfg)? {
                                    return Ok(Some((i, c)));
                                }
                            }
                            Ok(None)
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
            });
            let mut found: Option<(usize, Coloring)> = None;
            for r in results {
                if let Some((i, c)) = r? {
                    if found.as_ref().is_none_or(|(j, _)| i < *j) {
                        found = Some((i, c));
                    }
                }
            }
            found.map(|(_, c)| c)
        };
        if let Some(c) = found {
            let got = satisfied(&c);
            ensure!(got >= q, Error::internal("subset solution satisfies fewer than q anti-edges"));
            return Ok(MaxOutcome { yes: true, coloring: Some(c), satisfied: got });
        }
    }
    Ok(MaxOutcome { yes: false, coloring: None, satisfied: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn best_by_enumeration(g: &Graph, k: usize) -> usize {
        let feasible = feasible_pairs(g, k);
        let mut c = vec![1u8; g.m()];
        let mut best = 0;
        loop {
            best = best.max(verify_requests(g, &c, &feasible, k).len());
            let mut i = 0;
            while i < c.len() && c[i] as usize == k {
                c[i] = 1;
                i += 1;
            }
            if i == c.len() {
                return best;
            }
            c[i] += 1;
        }
    }

    fn star3() -> Graph {
        Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    #[test]
    fn path_choice_examples() {
        let p3 = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(choose_paths(&p3, &[(0, 2)], 2).unwrap().vertices, vec![vec![0, 1, 2]]);
        let c4 = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(choose_paths(&c4, &[(0, 2)], 2).unwrap().vertices, vec![vec![0, 1, 2]]);
        let p4 = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(choose_paths(&p4, &[(0, 3)], 3).unwrap().vertices, vec![vec![0, 1, 2, 3]]);
        assert!(matches!(choose_paths(&p4, &[(0, 3)], 2), Err(Error::Usage(_))));
    }

    #[test]
    fn approximation_examples() {
        let g = star3();
        let s = [(1, 2), (1, 3), (2, 3)];
        let a = derandomized_approx_traced(&g, &s, 2).unwrap();
        assert_eq!(a.plan.rainbow_count(&a.coloring), 2);
        assert!(a.expectations.windows(2).all(|w| w[1] >= w[0]));
        let c4 = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let s = [(0, 2), (1, 3), (0, 2), (1, 3)];
        let a = derandomized_approx_traced(&c4, &s, 2).unwrap();
        assert!(a.plan.rainbow_count(&a.coloring) >= 2);
        let a = derandomized_approx_traced(&c4, &[], 3).unwrap();
        assert_eq!(a.coloring.len(), 4);
        assert_eq!(guaranteed_count(3, 2), 2);
        assert_eq!(guaranteed_count(9, 3), 2);
    }

    #[test]
    fn kernel_examples() {
        // ten disjoint P3 components, one feasible anti-edge each
        let mut edges = Vec::new();
        for i in 0..10 {
            edges.push((3 * i, 3 * i + 1));
            edges.push((3 * i + 1, 3 * i + 2));
        }
        let g = Graph::new(30, edges).unwrap();
        assert_eq!(kernelize(&g, 2, 5).unwrap().verdict, KernelVerdict::Yes);

        let p3 = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        // the middle vertex of P3 lies in no feasible anti-edge, so the
        // component rule removes P3 and q drops to zero
        let r = kernelize(&p3, 2, 1).unwrap();
        assert_eq!(r.verdict, KernelVerdict::Yes);
        assert_eq!(r.q, 0);
        assert_eq!(kernel_bound(1, 2), 6);
        let p4 = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let r = kernelize(&p4, 2, 2).unwrap();
        assert_eq!(r.verdict, KernelVerdict::Reduced);
        assert_eq!(r.graph.n(), 4);
        assert!(r.graph.n() <= kernel_bound(2, 2));

        // K4 minus a perfect matching plus two universal vertices: two feasible
        // anti-edges, two vertices outside V1
        let mut edges = vec![(0, 1), (1, 2), (2, 3), (3, 0)];
        for u in 4..6 {
            for v in 0..u {
                edges.push((v, u));
            }
        }
        let mut all = edges.clone();
        // plus a P4 elsewhere so that the rule has something to keep
        all.extend([(6, 7), (7, 8), (8, 9)]);
        let g = Graph::new(10, all).unwrap();
        let q = 7;
        let r = kernelize(&g, 2, q).unwrap();
        assert_eq!(r.verdict, KernelVerdict::Reduced);
        assert_eq!(r.kept, vec![6, 7, 8, 9]);
        assert_eq!(r.q, q - 2);
        let cfg = Config::default();
        for q in 1..=6 {
            let r = kernelize(&g, 2, q).unwrap();
            let full = solve_max_rainbow(&g, 2, q, &cfg).unwrap().yes;
            let reduced = match r.verdict {
                KernelVerdict::Yes => true,
                KernelVerdict::Reduced => solve_max_rainbow(&r.graph, 2, r.q, &cfg).unwrap().yes,
            };
            assert_eq!(full, reduced, "q = {q}");
        }
    }

    #[test]
    fn max_solver_examples() {
        let cfg = Config::default();
        let p3 = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let out = solve_max_rainbow(&p3, 2, 1, &cfg).unwrap();
        assert!(out.yes);
        let c = out.coloring.unwrap();
        assert_ne!(c[0], c[1]);
        assert!(!solve_max_rainbow(&star3(), 2, 3, &cfg).unwrap().yes);
        assert!(solve_max_rainbow(&star3(), 2, 2, &cfg).unwrap().yes);
        assert!(solve_max_rainbow(&star3(), 3, 3, &cfg).unwrap().yes);
        let empty = Graph::empty(3);
        assert!(solve_max_rainbow(&empty, 2, 0, &cfg).unwrap().yes);
        assert!(!solve_max_rainbow(&empty, 2, 1, &cfg).unwrap().yes);
    }

    #[test]
    fn max_solver_matches_enumeration() {
        let cfg = Config::default();
        let graphs = [
            Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap(),
            Graph::new(5, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2)]).unwrap(),
            Graph::new(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)]).unwrap(),
        ];
        for g in &graphs {
            for k in 2..=3 {
                let best = best_by_enumeration(g, k);
                for q in 0..=best + 1 {
                    let out = solve_max_rainbow(g, k, q, &cfg).unwrap();
                    assert_eq!(out.yes, q <= best, "k = {k}, q = {q}");
                    if out.yes {
                        assert!(out.satisfied >= q);
                    }
                }
            }
        }
    }

    #[test]
    fn workers_give_the_same_witness() {
        let g = Graph::new(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let one = solve_max_rainbow(&g, 3, 7, &Config::default()).unwrap();
        let four = solve_max_rainbow(&g, 3, 7, &Config { workers: 4, ..Config::default() }).unwrap();
        assert_eq!(one, four);
    }
}
