//! Oracles and generators shared by the integration tests. Oracles here are
//! written from the definitions and do not call the solvers under test.
#![allow(dead_code)]

pub mod props;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rainbow_core::{Graph, Pair, PartialColoring};

pub const INF: usize = usize::MAX;

/// All pairs of `0..n` in lexicographic order.
pub fn pairs(n: usize) -> Vec<Pair> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

pub fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let e: Vec<Pair> = pairs(n).into_iter().zip(bits).filter(|(_, &b)| b).map(|(p, _)| p).collect();
    Graph::new(n, e).unwrap()
}

/// Graph on `1..=max_n` vertices, each pair an edge with probability 1/2.
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |b| graph_from_bits(n, &b))
    })
}

/// Graph on `min_n..=max_n` vertices with at most `max_m` edges.
pub fn arb_sparse_graph(min_n: usize, max_n: usize, max_m: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n).prop_flat_map(move |n| {
        let all = pairs(n);
        let cap = max_m.min(all.len());
        proptest::sample::subsequence(all, 0..=cap).prop_map(move |e| Graph::new(n, e).unwrap())
    })
}

/// Adjacency lists `(neighbor, edge)` built from the edge list alone.
pub fn adjacency(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); g.n()];
    for (e, (u, v)) in g.edges().enumerate() {
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    adj
}

/// All-pairs distances by Floyd-Warshall.
pub fn distances(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut d = vec![vec![INF; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for (u, v) in g.edges() {
        d[u][v] = 1;
        d[v][u] = 1;
    }
    for w in 0..n {
        for u in 0..n {
            for v in 0..n {
                if d[u][w] != INF && d[w][v] != INF && d[u][w] + d[w][v] < d[u][v] {
                    d[u][v] = d[u][w] + d[w][v];
                }
            }
        }
    }
    d
}

/// Anti-edges at distance at most `k`.
pub fn feasible(g: &Graph, k: usize) -> Vec<Pair> {
    let d = distances(g);
    pairs(g.n()).into_iter().filter(|&(u, v)| d[u][v] >= 2 && d[u][v] <= k).collect()
}

pub fn anti_edges(g: &Graph) -> Vec<Pair> {
    pairs(g.n()).into_iter().filter(|&(u, v)| !g.has_edge(u, v)).collect()
}

/// Every simple path between `u` and `v` with at most `k` edges, as edge lists.
pub fn simple_paths(adj: &[Vec<(usize, usize)>], u: usize, v: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(adj: &[Vec<(usize, usize)>], x: usize, v: usize, k: usize, seen: &mut Vec<bool>, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if x == v {
            out.push(path.clone());
            return;
        }
        if path.len() == k {
            return;
        }
        for &(y, e) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                path.push(e);
                go(adj, y, v, k, seen, path, out);
                path.pop();
                seen[y] = false;
            }
        }
    }
    let mut seen = vec![false; adj.len()];
    seen[u] = true;
    let mut out = Vec::new();
    go(adj, u, v, k, &mut seen, &mut Vec::new(), &mut out);
    out
}

pub fn is_rainbow(path: &[usize], c: &[u8]) -> bool {
    let mut used = 0u64;
    for &e in path {
        let b = 1u64 << c[e];
        if used & b != 0 {
            return false;
        }
        used |= b;
    }
    true
}

/// Pairs of `requests` joined by a rainbow path under `c`.
pub fn satisfied(g: &Graph, c: &[u8], requests: &[Pair], k: usize) -> BTreeSet<Pair> {
    let adj = adjacency(g);
    requests
        .iter()
        .copied()
        .filter(|&(u, v)| simple_paths(&adj, u, v, k).iter().any(|p| is_rainbow(p, c)))
        .collect()
}

/// Candidate paths per request, for repeated evaluation over many colorings.
pub struct PathTable {
    pub paths: Vec<Vec<Vec<usize>>>,
}

impl PathTable {
    pub fn new(g: &Graph, requests: &[Pair], k: usize) -> Self {
        let adj = adjacency(g);
        PathTable { paths: requests.iter().map(|&(u, v)| simple_paths(&adj, u, v, k)).collect() }
    }

    pub fn count(&self, c: &[u8]) -> usize {
        self.paths.iter().filter(|ps| ps.iter().any(|p| is_rainbow(p, c))).count()
    }

    pub fn all(&self, c: &[u8]) -> bool {
        self.paths.iter().all(|ps| ps.iter().any(|p| is_rainbow(p, c)))
    }
}

/// Calls `f` on every coloring with colors `1..=k` that agrees with the
/// fixed entries of `fixed` (0 = free). Stops when `f` returns true.
pub fn each_coloring(fixed: &[u8], k: usize, mut f: impl FnMut(&[u8]) -> bool) -> bool {
    let free: Vec<usize> = (0..fixed.len()).filter(|&e| fixed[e] == 0).collect();
    let mut c: Vec<u8> = fixed.iter().map(|&x| if x == 0 { 1 } else { x }).collect();
    loop {
        if f(&c) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == free.len() {
                return false;
            }
            let e = free[i];
            if (c[e] as usize) < k {
                c[e] += 1;
                break;
            }
            c[e] = 1;
            i += 1;
        }
    }
}

pub fn oracle_decide(g: &Graph, k: usize, requests: &[Pair], fixed: &[u8]) -> bool {
    let t = PathTable::new(g, requests, k);
    each_coloring(fixed, k, |c| t.all(c))
}

pub fn oracle_count(g: &Graph, k: usize, requests: &[Pair]) -> u64 {
    let t = PathTable::new(g, requests, k);
    let mut n = 0u64;
    each_coloring(&vec![0; g.m()], k, |c| {
        n += u64::from(t.all(c));
        false
    });
    n
}

/// Most feasible anti-edges any `k`-coloring satisfies.
pub fn oracle_max(g: &Graph, k: usize) -> usize {
    let f = feasible(g, k);
    let t = PathTable::new(g, &f, k);
    let mut best = 0;
    each_coloring(&vec![0; g.m()], k, |c| {
        best = best.max(t.count(c));
        best == f.len()
    });
    best
}

/// Whether some walk of length at most `k` from `u` to `v` contains every
/// guide edge, repeats no precolored color and repeats no uncolored edge.
pub fn oracle_walk(g: &Graph, c0: &PartialColoring, (u, v): Pair, guide: &[usize], k: usize) -> bool {
    fn go(
        adj: &[Vec<(usize, usize)>],
        c0: &PartialColoring,
        x: usize,
        v: usize,
        guide: &[usize],
        left: usize,
        colors: u64,
        edges: &mut Vec<usize>,
    ) -> bool {
        if x == v && guide.iter().all(|e| edges.contains(e)) {
            return true;
        }
        if left == 0 {
            return false;
        }
        for &(y, e) in &adj[x] {
            let ok = match c0.get(e) {
                Some(c) => colors & (1 << c) == 0,
                None => !edges.contains(&e),
            };
            if !ok {
                continue;
            }
            let nc = c0.get(e).map_or(colors, |c| colors | 1 << c);
            edges.push(e);
            let hit = go(adj, c0, y, v, guide, left - 1, nc, edges);
            edges.pop();
            if hit {
                return true;
            }
        }
        false
    }
    go(&adjacency(g), c0, u, v, guide, k, 0, &mut Vec::new())
}

/// Connected components of the union graph by BFS; `comp[x]` is the
/// smallest element of its component.
pub fn components(n: usize, unions: &[(usize, usize)]) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in unions {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut comp = vec![INF; n];
    for s in 0..n {
        if comp[s] != INF {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([s]);
        comp[s] = s;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if comp[y] == INF {
                    comp[y] = s;
                    queue.push_back(y);
                }
            }
        }
    }
    comp
}

/// Checks a cover of `target` pairs; `forbidden` pairs must not be covered.
/// Returns the first problem found.
pub fn check_cover(
    cover: &[rainbow_core::biclique::Biclique],
    target: &BTreeSet<Pair>,
    forbidden_inside: &[Pair],
) -> Result<(), String> {
    let mut covered = BTreeSet::new();
    for (i, b) in cover.iter().enumerate() {
        for &x in &b.left {
            for &y in &b.right {
                let p = (x.min(y), x.max(y));
                if !target.contains(&p) {
                    return Err(format!("biclique {i} holds {p:?}, which is not a target pair"));
                }
                covered.insert(p);
            }
        }
        for &(u, v) in forbidden_inside {
            let inside = |w| b.left.contains(&w) || b.right.contains(&w);
            if inside(u) && inside(v) {
                return Err(format!("biclique {i} holds both ends of edge {:?}", (u, v)));
            }
        }
    }
    match target.iter().find(|p| !covered.contains(p)) {
        Some(p) => Err(format!("target pair {p:?} uncovered")),
        None => Ok(()),
    }
}
