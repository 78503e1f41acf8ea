//! Biclique covers of complete graphs, bipartite complements and graph
//! complements.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{ensure, Error, Result};
use crate::graph::{is_proper_coloring, Graph, Vertex};

/// Restarts allowed in the randomized cover before giving up.
pub const RESTART_CAP: usize = 50;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Biclique {
    pub left: Vec<Vertex>,
    pub right: Vec<Vertex>,
}

impl Biclique {
    pub fn new(left: Vec<Vertex>, right: Vec<Vertex>) -> Self {
        Biclique { left, right }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.left.contains(&v) || self.right.contains(&v)
    }
}

/// Which edge set a cover is meant to cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    /// All pairs of `0..n`.
    Complete { n: usize },
    /// Non-edges between the two sides of a bipartite graph.
    BipartiteComplement { left: usize, right: usize },
    /// Anti-edges of a graph on `n` vertices.
    Complement { n: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BicliqueCover {
    pub bicliques: Vec<Biclique>,
    pub target: Target,
}

impl BicliqueCover {
    pub fn len(&self) -> usize {
        self.bicliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bicliques.is_empty()
    }
}

pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// One biclique per bit position, splitting vertices by that bit.
pub fn cover_complete_graph(n: usize) -> BicliqueCover {
    let bicliques = (0..ceil_log2(n))
        .map(|i| {
            let (zero, one): (Vec<usize>, Vec<usize>) = (0..n).partition(|v| v >> i & 1 == 0);
            Biclique::new(zero, one)
        })
        .collect();
    BicliqueCover { bicliques, target: Target::Complete { n } }
}

/// Bipartite graph between two labeled sides. Edges are stored as local
/// indices; the cover targets are the non-edges.
#[derive(Clone, Debug)]
pub struct BipartiteGraph {
    pub left: Vec<Vertex>,
    pub right: Vec<Vertex>,
    adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    /// `edges` are `(left index, right index)` pairs.
    pub fn new(left: Vec<Vertex>, right: Vec<Vertex>, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); left.len()];
        for &(a, b) in edges {
            ensure!(
                a < left.len() && b < right.len(),
                Error::usage("bipartite edge out of range")
            );
            adj[a].push(b);
        }
        for row in &mut adj {
            row.sort_unstable();
            row.dedup();
        }
        Ok(BipartiteGraph { left, right, adj })
    }

    /// Sides with local labels `0..left` and `left..left + right`.
    pub fn unlabeled(left: usize, right: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new((0..left).collect(), (left..left + right).collect(), edges)
    }

    /// Bipartite graph of `g` between two disjoint vertex sets.
    pub fn between(g: &Graph, left: &[Vertex], right: &[Vertex]) -> Self {
        let mut pos = std::collections::HashMap::new();
        for (i, &v) in right.iter().enumerate() {
            pos.insert(v, i);
        }
        let adj = left
            .iter()
            .map(|&u| {
                let mut row: Vec<usize> =
                    g.adj(u).filter_map(|(w, _)| pos.get(&w).copied()).collect();
                row.sort_unstable();
                row
            })
            .collect();
        BipartiteGraph { left: left.to_vec(), right: right.to_vec(), adj }
    }

    /// Edges as `(left index, right index)` pairs.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(a, row)| row.iter().map(move |&b| (a, b)))
    }

    pub fn max_degree(&self) -> usize {
        let mut right_deg = vec![0usize; self.right.len()];
        let mut best = 0;
        for row in &self.adj {
            best = best.max(row.len());
            for &b in row {
                right_deg[b] += 1;
            }
        }
        best.max(right_deg.into_iter().max().unwrap_or(0))
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn complement_size(&self) -> usize {
        self.left.len() * self.right.len() - self.adj.iter().map(Vec::len).sum::<usize>()
    }

    fn words(&self) -> usize {
        self.right.len().div_ceil(64).max(1)
    }

    /// Non-neighbors of each left vertex as bit rows over the right side.
    fn complement_rows(&self) -> Vec<Vec<u64>> {
        let w = self.words();
        self.adj
            .iter()
            .map(|row| {
                let mut bits = vec![0u64; w];
                for b in 0..self.right.len() {
                    bits[b / 64] |= 1 << (b % 64);
                }
                for &b in row {
                    bits[b / 64] &= !(1 << (b % 64));
                }
                bits
            })
            .collect()
    }

    fn label(&self, a: &[usize], bits: &[u64]) -> Biclique {
        let left = a.iter().map(|&i| self.left[i]).collect();
        let right = (0..self.right.len())
            .filter(|&b| bits[b / 64] >> (b % 64) & 1 == 1)
            .map(|b| self.right[b])
            .collect();
        Biclique::new(left, right)
    }
}

/// `(A, B)` where `B` holds the right vertices adjacent to no vertex of `A`.
pub fn closed_biclique(gb: &BipartiteGraph, a: &[usize]) -> Biclique {
    let rows = gb.complement_rows();
    let mut bits = vec![u64::MAX; gb.words()];
    for &i in a {
        and_into(&mut bits, &rows[i]);
    }
    clear_tail(&mut bits, gb.right.len());
    gb.label(a, &bits)
}

fn and_into(acc: &mut [u64], row: &[u64]) {
    for (x, &y) in acc.iter_mut().zip(row) {
        *x &= y;
    }
}

fn clear_tail(bits: &mut [u64], len: usize) {
    for (w, x) in bits.iter_mut().enumerate() {
        let lo = w * 64;
        if lo >= len {
            *x = 0;
        } else if len - lo < 64 {
            *x &= (1u64 << (len - lo)) - 1;
        }
    }
}

fn popcount_and(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

/// Uncovered-edge bookkeeping shared by both Jukna constructions.
struct Coverage {
    uncovered: Vec<Vec<u64>>,
    remaining: usize,
}

impl Coverage {
    fn new(gb: &BipartiteGraph) -> Self {
        let uncovered = gb.complement_rows();
        let remaining = uncovered.iter().flatten().map(|x| x.count_ones() as usize).sum();
        Coverage { uncovered, remaining }
    }

    fn gain(&self, a: &[usize], bits: &[u64]) -> usize {
        a.iter().map(|&i| popcount_and(&self.uncovered[i], bits)).sum()
    }

    fn take(&mut self, a: &[usize], bits: &[u64]) {
        for &i in a {
            for (x, &y) in self.uncovered[i].iter_mut().zip(bits) {
                self.remaining -= (*x & y).count_ones() as usize;
                *x &= !y;
            }
        }
    }
}

/// Randomized cover: repeatedly sample `A` with each left vertex kept with
/// probability `1/(Δ+1)`, and keep `(A, B_A)` when it covers something new.
/// After `(Δ+1)e(2 ln n + 1)` samples without full coverage everything
/// restarts.
///
/// A complement edge `uv` is covered by a sample with probability
/// `p(1-p)^deg(v)`, which is at least `1/((Δ+1)e)` for `p = 1/(Δ+1)`.
pub fn jukna_cover_random_with(gb: &BipartiteGraph, rng: &mut Xoshiro256PlusPlus) -> Result<BicliqueCover> {
    let target = Target::BipartiteComplement { left: gb.left.len(), right: gb.right.len() };
    if gb.complement_size() == 0 {
        return Ok(BicliqueCover { bicliques: Vec::new(), target });
    }
    let delta = gb.max_degree();
    if delta == 0 {
        let all: Vec<usize> = (0..gb.left.len()).collect();
        return Ok(BicliqueCover { bicliques: vec![closed_biclique(gb, &all)], target });
    }
    let n = (gb.left.len() + gb.right.len()) as f64;
    let inv_p = delta as u128 + 1;
    let rounds = (inv_p as f64 * std::f64::consts::E * (2.0 * n.ln() + 1.0)).ceil() as usize;
    let rows = gb.complement_rows();
    for _ in 0..RESTART_CAP {
        let mut cov = Coverage::new(gb);
        let mut out = Vec::new();
        for _ in 0..rounds {
            let a: Vec<usize> = (0..gb.left.len())
                .filter(|_| (rng.gen::<u64>() as u128) * inv_p < 1u128 << 64)
                .collect();
            if a.is_empty() {
                continue;
            }
            let mut bits = vec![u64::MAX; gb.words()];
            for &i in &a {
                and_into(&mut bits, &rows[i]);
            }
            clear_tail(&mut bits, gb.right.len());
            if cov.gain(&a, &bits) > 0 {
                cov.take(&a, &bits);
                out.push(gb.label(&a, &bits));
                if cov.remaining == 0 {
                    return Ok(BicliqueCover { bicliques: out, target });
                }
            }
        }
    }
    Err(Error::resource(format!("randomized cover failed after {RESTART_CAP} restarts")))
}

pub fn jukna_cover_random(gb: &BipartiteGraph, seed: u64) -> Result<BicliqueCover> {
    jukna_cover_random_with(gb, &mut Xoshiro256PlusPlus::seed_from_u64(seed))
}

/// Best subset search state for the greedy scan.
struct Scan<'a> {
    rows: &'a [Vec<u64>],
    cov: &'a Coverage,
    len: usize,
    best_gain: usize,
    best_mask: u32,
}

impl Scan<'_> {
    /// Decides elements from `i - 1` down to 0; excluding before including
    /// visits masks in increasing numeric order, so the first maximum found
    /// is the smallest mask among ties.
    fn run(&mut self, i: usize, mask: u32, members: &mut Vec<usize>, bits: &[u64]) {
        let cur: Vec<usize> = members
            .iter()
            .map(|&a| popcount_and(&self.cov.uncovered[a], bits))
            .collect();
        let have: usize = cur.iter().sum();
        if i == 0 {
            if mask != 0 && have > self.best_gain {
                self.best_gain = have;
                self.best_mask = mask;
            }
            return;
        }
        let rest: usize = (0..i).map(|j| popcount_and(&self.cov.uncovered[j], bits)).sum();
        if have + rest <= self.best_gain {
            return;
        }
        let j = i - 1;
        self.run(j, mask, members, bits);
        let mut next = bits.to_vec();
        and_into(&mut next, &self.rows[j]);
        if next.iter().all(|&x| x == 0) {
            return;
        }
        members.push(j);
        self.run(j, mask | 1 << j, members, &next);
        members.pop();
    }
}

fn best_subset(rows: &[Vec<u64>], cov: &Coverage, right: usize, workers: usize) -> (usize, u32) {
    let len = rows.len();
    let mut full = vec![u64::MAX; rows.first().map_or(1, Vec::len)];
    clear_tail(&mut full, right);
    // Fix the top `split` elements per task so tasks cover disjoint mask ranges.
    let split = if workers > 1 { (usize::BITS - workers.leading_zeros()) as usize } else { 0 }.min(len);
    let tasks: Vec<u32> = (0..1u32 << split).collect();
    let solve = |top: u32| {
        let mut members = Vec::new();
        let mut bits = full.clone();
        let mut mask = 0u32;
        for t in 0..split {
            if top >> t & 1 == 1 {
                let j = len - split + t;
                members.push(j);
                mask |= 1 << j;
                and_into(&mut bits, &rows[j]);
            }
        }
        let mut scan = Scan { rows, cov, len, best_gain: 0, best_mask: 0 };
        scan.run(len - split, mask, &mut members, &bits);
        let _ = scan.len;
        (scan.best_gain, scan.best_mask)
    };
    let results: Vec<(usize, u32)> = if split == 0 {
        vec![solve(0)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = tasks.iter().map(|&t| s.spawn(move || solve(t))).collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        })
    };
    results
        .into_iter()
        .filter(|&(gain, _)| gain > 0)
        .min_by_key(|&(gain, mask)| (std::cmp::Reverse(gain), mask))
        .unwrap_or((0, 0))
}

/// Greedy cover: repeatedly take the closed biclique over all `A ⊆ V1`
/// that covers the most uncovered edges.
pub fn jukna_cover_greedy(gb: &BipartiteGraph, cap: usize, workers: usize) -> Result<BicliqueCover> {
    ensure!(
        gb.left.len() <= cap.min(31),
        Error::resource(format!(
            "greedy cover needs |V1| <= {}, got {}",
            cap.min(31),
            gb.left.len()
        ))
    );
    let target = Target::BipartiteComplement { left: gb.left.len(), right: gb.right.len() };
    let rows = gb.complement_rows();
    let mut cov = Coverage::new(gb);
    let mut out = Vec::new();
    while cov.remaining > 0 {
        let (gain, mask) = best_subset(&rows, &cov, gb.right.len(), workers);
        ensure!(gain > 0, Error::internal("greedy cover stalled"));
        let a: Vec<usize> = (0..gb.left.len()).filter(|&i| mask >> i & 1 == 1).collect();
        let mut bits = vec![u64::MAX; gb.words()];
        for &i in &a {
            and_into(&mut bits, &rows[i]);
        }
        clear_tail(&mut bits, gb.right.len());
        cov.take(&a, &bits);
        out.push(gb.label(&a, &bits));
    }
    Ok(BicliqueCover { bicliques: out, target })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverMode {
    Greedy,
    Random,
    /// Greedy when the smaller side fits the cap, random otherwise.
    Auto,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverOptions {
    pub mode: CoverMode,
    pub seed: u64,
    pub greedy_cap: usize,
    pub workers: usize,
}

impl Default for CoverOptions {
    fn default() -> Self {
        CoverOptions { mode: CoverMode::Auto, seed: 0, greedy_cap: 20, workers: 1 }
    }
}

/// Covers the anti-edges of `g` so that no biclique holds both ends of an
/// edge of `g`. `vcolor` is a proper coloring with colors from 1.
pub fn cover_complement_colored(g: &Graph, vcolor: &[usize], opts: &CoverOptions) -> Result<BicliqueCover> {
    ensure!(
        is_proper_coloring(g, vcolor),
        Error::usage("vertex coloring is not proper")
    );
    let p = vcolor.iter().copied().max().unwrap_or(0);
    let mut classes: Vec<Vec<Vertex>> = vec![Vec::new(); p + 1];
    for (v, &c) in vcolor.iter().enumerate() {
        classes[c].push(v);
    }
    let classes: Vec<Vec<Vertex>> = classes.into_iter().filter(|c| !c.is_empty()).collect();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(opts.seed);
    let mut out = Vec::new();
    for class in &classes {
        for b in cover_complete_graph(class.len()).bicliques {
            out.push(Biclique::new(
                b.left.iter().map(|&i| class[i]).collect(),
                b.right.iter().map(|&i| class[i]).collect(),
            ));
        }
    }
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            let (small, large) = if classes[j].len() < classes[i].len() {
                (&classes[j], &classes[i])
            } else {
                (&classes[i], &classes[j])
            };
            let gb = BipartiteGraph::between(g, small, large);
            let greedy = match opts.mode {
                CoverMode::Greedy => true,
                CoverMode::Random => false,
                CoverMode::Auto => small.len() <= opts.greedy_cap,
            };
            let part = if greedy {
                jukna_cover_greedy(&gb, opts.greedy_cap, opts.workers)?
            } else {
                jukna_cover_random_with(&gb, &mut rng)?
            };
            out.extend(part.bicliques);
        }
    }
    let cover = BicliqueCover { bicliques: out, target: Target::Complement { n: g.n() } };
    check_complement_cover(g, &cover.bicliques)?;
    Ok(cover)
}

/// Checks that every biclique consists of anti-edges, that all anti-edges are
/// covered, and that no biclique holds both ends of an edge.
pub fn check_complement_cover(g: &Graph, cover: &[Biclique]) -> Result<()> {
    let n = g.n();
    let words = n.div_ceil(64).max(1);
    let mut covered = vec![0u64; n * words];
    let mut mark = vec![usize::MAX; n];
    for (i, b) in cover.iter().enumerate() {
        for &v in b.left.iter().chain(&b.right) {
            ensure!(v < n, Error::internal("biclique vertex out of range"));
            ensure!(mark[v] != i, Error::internal("biclique sides overlap"));
            mark[v] = i;
        }
        for &v in b.left.iter().chain(&b.right) {
            for (w, _) in g.adj(v) {
                ensure!(
                    mark[w] != i,
                    Error::internal(format!("biclique {i} holds both ends of edge ({v}, {w})"))
                );
            }
        }
        for &l in &b.left {
            for &r in &b.right {
                covered[l * words + r / 64] |= 1 << (r % 64);
                covered[r * words + l / 64] |= 1 << (l % 64);
            }
        }
    }
    for u in 0..n {
        let row = &covered[u * words..(u + 1) * words];
        let mut nb = g.adj(u).map(|(w, _)| w).peekable();
        for v in 0..n {
            while nb.peek().is_some_and(|&w| w < v) {
                nb.next();
            }
            if v == u || nb.peek() == Some(&v) {
                continue;
            }
            ensure!(
                row[v / 64] >> (v % 64) & 1 == 1,
                Error::internal(format!("anti-edge ({u}, {v}) not covered"))
            );
        }
    }
    Ok(())
}

/// Checks a bipartite-complement cover: valid bicliques and full coverage.
pub fn check_bipartite_cover(gb: &BipartiteGraph, cover: &[Biclique]) -> Result<()> {
    let li: std::collections::HashMap<Vertex, usize> =
        gb.left.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let ri: std::collections::HashMap<Vertex, usize> =
        gb.right.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut covered = vec![vec![false; gb.right.len()]; gb.left.len()];
    for b in cover {
        for &l in &b.left {
            let a = *li.get(&l).ok_or_else(|| Error::internal("left vertex not in V1"))?;
            for &r in &b.right {
                let c = *ri.get(&r).ok_or_else(|| Error::internal("right vertex not in V2"))?;
                ensure!(!gb.has_edge(a, c), Error::internal("biclique contains an edge of G"));
                covered[a][c] = true;
            }
        }
    }
    for (a, row) in covered.iter().enumerate() {
        for (c, &x) in row.iter().enumerate() {
            ensure!(
                x || gb.has_edge(a, c),
                Error::internal("bipartite complement edge not covered")
            );
        }
    }
    Ok(())
}
