use std::collections::VecDeque;

use crate::error::{ensure, Error, Result};

pub type Vertex = usize;
pub type EdgeId = usize;
/// Unordered vertex pair stored as `(min, max)`.
pub type Pair = (Vertex, Vertex);

pub fn pair(u: Vertex, v: Vertex) -> Pair {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Shortest-path distance with an explicit unreachable value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dist {
    Finite(u32),
    Infinite,
}

impl Dist {
    pub fn finite(self) -> Option<u32> {
        match self {
            Dist::Finite(d) => Some(d),
            Dist::Infinite => None,
        }
    }

    pub fn within(self, k: usize) -> bool {
        matches!(self, Dist::Finite(d) if (d as usize) <= k)
    }
}

/// Simple undirected graph, immutable once built.
///
/// Adjacency is stored in CSR form with each vertex's neighbors sorted, so
/// edge lookup is a binary search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
    offsets: Vec<usize>,
    adj: Vec<(u32, u32)>,
}

impl Graph {
    /// Canonicalizes and deduplicates `edges`, keeping first occurrences in order.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Graph> {
        ensure!(n <= u32::MAX as usize, Error::usage("too many vertices"));
        let mut list: Vec<(u32, u32)> = Vec::new();
        for (u, v) in edges {
            ensure!(
                u < n && v < n,
                Error::usage(format!("edge ({u}, {v}) out of range for n = {n}"))
            );
            ensure!(u != v, Error::usage(format!("self-loop at vertex {u}")));
            let (a, b) = pair(u, v);
            list.push((a as u32, b as u32));
        }
        let mut order: Vec<usize> = (0..list.len()).collect();
        order.sort_by_key(|&i| (list[i], i));
        let mut keep = vec![true; list.len()];
        for w in order.windows(2) {
            if list[w[0]] == list[w[1]] {
                keep[w[1]] = false;
            }
        }
        let edges: Vec<(u32, u32)> = list
            .into_iter()
            .zip(keep)
            .filter_map(|(e, k)| k.then_some(e))
            .collect();
        Ok(Self::from_canonical(n, edges))
    }

    /// Builds from edges already known to be canonical and distinct.
    fn from_canonical(n: usize, edges: Vec<(u32, u32)>) -> Graph {
        let mut deg = vec![0usize; n + 1];
        for &(u, v) in &edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + deg[v];
        }
        let mut fill = offsets.clone();
        let mut adj = vec![(0u32, 0u32); offsets[n]];
        for (e, &(u, v)) in edges.iter().enumerate() {
            adj[fill[u as usize]] = (v, e as u32);
            fill[u as usize] += 1;
            adj[fill[v as usize]] = (u, e as u32);
            fill[v as usize] += 1;
        }
        for v in 0..n {
            adj[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph { n, edges, offsets, adj }
    }

    pub fn empty(n: usize) -> Graph {
        Self::from_canonical(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: EdgeId) -> Pair {
        let (u, v) = self.edges[e];
        (u as usize, v as usize)
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = Pair> + '_ {
        self.edges.iter().map(|&(u, v)| (u as usize, v as usize))
    }

    /// `(neighbor, edge)` pairs of `v`, ascending by neighbor.
    pub fn adj(&self, v: Vertex) -> impl ExactSizeIterator<Item = (Vertex, EdgeId)> + '_ {
        self.adj_raw(v)
            .iter()
            .map(|&(w, e)| (w as usize, e as usize))
    }

    pub fn adj_raw(&self, v: Vertex) -> &[(u32, u32)] {
        &self.adj[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn edge_id(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        if u >= self.n || v >= self.n {
            return None;
        }
        let row = self.adj_raw(u);
        row.binary_search_by_key(&(v as u32), |&(w, _)| w)
            .ok()
            .map(|i| row[i].1 as usize)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edge_id(u, v).is_some()
    }

    /// Sorted common neighbors of `u` and `v`.
    pub fn common_neighbors(&self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        let (a, b) = (self.adj_raw(u), self.adj_raw(v));
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i].0 as usize);
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    /// Component label per vertex, numbered by smallest member.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            queue.push_back(s);
            while let Some(x) = queue.pop_front() {
                for (y, _) in self.adj(x) {
                    if comp[y] == usize::MAX {
                        comp[y] = next;
                        queue.push_back(y);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// Subgraph induced by `keep`, vertices renumbered in ascending order.
    /// Returns the graph and the old index of every new vertex.
    pub fn induced(&self, keep: &[bool]) -> (Graph, Vec<Vertex>) {
        let old: Vec<Vertex> = (0..self.n).filter(|&v| keep[v]).collect();
        let mut new_of = vec![usize::MAX; self.n];
        for (i, &v) in old.iter().enumerate() {
            new_of[v] = i;
        }
        let edges = self
            .edges()
            .filter(|&(u, v)| keep[u] && keep[v])
            .map(|(u, v)| (new_of[u] as u32, new_of[v] as u32))
            .collect();
        (Self::from_canonical(old.len(), edges), old)
    }
}

/// Incremental edge list for constructions that allocate vertices as they go.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder { n, edges: Vec::new() }
    }

    pub fn from_graph(g: &Graph) -> Self {
        GraphBuilder { n: g.n(), edges: g.edges().collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.n += 1;
        self.n - 1
    }

    pub fn add_vertices(&mut self, count: usize) -> std::ops::Range<Vertex> {
        let start = self.n;
        self.n += count;
        start..self.n
    }

    /// Appends an edge and returns its position in the list. Positions equal
    /// final edge ids as long as no duplicates are added.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> usize {
        self.edges.push((u, v));
        self.edges.len() - 1
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Builds the graph and fails if any edge was added twice.
    pub fn build_exact(self) -> Result<Graph> {
        let count = self.edges.len();
        let g = Graph::new(self.n, self.edges)?;
        ensure!(
            g.m() == count,
            Error::internal(format!("{} duplicate edges in construction", count - g.m()))
        );
        Ok(g)
    }

    pub fn build(self) -> Result<Graph> {
        Graph::new(self.n, self.edges)
    }
}

/// Distances from `source` by breadth-first search.
pub fn bfs_distances(g: &Graph, source: Vertex) -> Vec<Dist> {
    bfs_bounded(g, source, usize::MAX)
        .into_iter()
        .map(|d| if d == u32::MAX { Dist::Infinite } else { Dist::Finite(d) })
        .collect()
}

/// BFS truncated at depth `limit`; unreached vertices hold `u32::MAX`.
pub(crate) fn bfs_bounded(g: &Graph, source: Vertex, limit: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.n()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(x) = queue.pop_front() {
        let d = dist[x];
        if d as usize >= limit {
            continue;
        }
        for &(y, _) in g.adj_raw(x) {
            if dist[y as usize] == u32::MAX {
                dist[y as usize] = d + 1;
                queue.push_back(y as usize);
            }
        }
    }
    dist
}

/// All non-adjacent pairs at distance at most `k`, sorted.
pub fn feasible_pairs(g: &Graph, k: usize) -> Vec<Pair> {
    let mut out = Vec::new();
    for u in 0..g.n() {
        let dist = bfs_bounded(g, u, k);
        for (v, &d) in dist.iter().enumerate().skip(u + 1) {
            if d >= 2 && d != u32::MAX {
                out.push((u, v));
            }
        }
    }
    out
}

/// All anti-edges (non-adjacent distinct pairs), sorted.
pub fn anti_edges(g: &Graph) -> Vec<Pair> {
    let mut out = Vec::new();
    for u in 0..g.n() {
        let mut nb = g.adj_raw(u).iter().map(|&(w, _)| w as usize).peekable();
        for v in u + 1..g.n() {
            while nb.peek().is_some_and(|&w| w < v) {
                nb.next();
            }
            if nb.peek() != Some(&v) {
                out.push((u, v));
            }
        }
    }
    out
}

/// First-fit coloring in vertex order. Colors start at 1.
pub fn greedy_proper_coloring(g: &Graph) -> Vec<usize> {
    let mut color = vec![0usize; g.n()];
    let mut seen = vec![usize::MAX; g.max_degree() + 2];
    for v in 0..g.n() {
        for (w, _) in g.adj(v) {
            let c = color[w];
            if c != 0 && c < seen.len() {
                seen[c] = v;
            }
        }
        color[v] = (1..).find(|&c| seen[c] != v).unwrap();
    }
    color
}

pub fn is_proper_coloring(g: &Graph, color: &[usize]) -> bool {
    color.len() == g.n() && g.edges().all(|(u, v)| color[u] != color[v])
}

/// Proper vertex coloring check against an explicit pair list.
pub fn is_proper_for_pairs(n: usize, pairs: &[Pair], color: &[usize]) -> bool {
    color.len() == n && pairs.iter().all(|&(u, v)| color[u] != color[v])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn build_canonicalizes_and_dedups() {
        let g = Graph::new(3, [(1, 0), (0, 1), (1, 2)]).unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(g, path(3));
        assert!(Graph::new(2, [(0, 0)]).is_err());
        assert!(Graph::new(2, [(0, 2)]).is_err());
    }

    #[test]
    fn adjacency_lookup() {
        let g = cycle(4);
        assert_eq!(g.edge_id(3, 0), Some(3));
        assert_eq!(g.edge_id(0, 2), None);
        assert_eq!(g.common_neighbors(0, 2), vec![1, 3]);
        assert_eq!(g.adj(0).collect::<Vec<_>>(), vec![(1, 0), (3, 3)]);
    }

    #[test]
    fn distances() {
        use Dist::*;
        assert_eq!(bfs_distances(&path(3), 0), vec![Finite(0), Finite(1), Finite(2)]);
        assert_eq!(bfs_distances(&Graph::empty(2), 0), vec![Finite(0), Infinite]);
        assert_eq!(
            bfs_distances(&cycle(4), 0),
            vec![Finite(0), Finite(1), Finite(2), Finite(1)]
        );
        assert!(Finite(7) < Infinite);
    }

    #[test]
    fn feasible() {
        assert_eq!(feasible_pairs(&path(3), 2), vec![(0, 2)]);
        assert_eq!(feasible_pairs(&path(4), 2), vec![(0, 2), (1, 3)]);
        assert_eq!(feasible_pairs(&path(4), 3), vec![(0, 2), (0, 3), (1, 3)]);
        assert_eq!(anti_edges(&path(4)), vec![(0, 2), (0, 3), (1, 3)]);
    }

    #[test]
    fn greedy_coloring() {
        let e = Graph::empty(5);
        assert_eq!(greedy_proper_coloring(&e), vec![1; 5]);
        let k4 = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let c = greedy_proper_coloring(&k4);
        assert_eq!(c, vec![1, 2, 3, 4]);
        let c5 = cycle(5);
        let c = greedy_proper_coloring(&c5);
        assert!(is_proper_coloring(&c5, &c));
        assert!(c.iter().max().copied().unwrap() <= 3);
    }

    #[test]
    fn induced_renumbers() {
        let g = cycle(5);
        let (h, old) = g.induced(&[true, false, true, true, true]);
        assert_eq!(old, vec![0, 2, 3, 4]);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(1, 2), (2, 3), (0, 3)]);
    }
}
