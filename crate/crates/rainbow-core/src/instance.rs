use std::borrow::Cow;

use crate::error::{ensure, Error, Result};
use crate::graph::{anti_edges, feasible_pairs, pair, EdgeId, Graph, Pair};

pub type Color = u8;
/// Total edge coloring indexed by edge id, colors `1..=k`.
pub type Coloring = Vec<Color>;

/// Edge coloring where `0` marks an unset edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialColoring {
    k: usize,
    colors: Vec<Color>,
}

impl PartialColoring {
    pub fn empty(m: usize, k: usize) -> Self {
        PartialColoring { k, colors: vec![0; m] }
    }

    pub fn from_values(k: usize, colors: Vec<Color>) -> Result<Self> {
        ensure!(
            colors.iter().all(|&c| (c as usize) <= k),
            Error::usage(format!("precolor out of range 1..={k}"))
        );
        Ok(PartialColoring { k, colors })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn get(&self, e: EdgeId) -> Option<Color> {
        match self.colors[e] {
            0 => None,
            c => Some(c),
        }
    }

    pub fn set(&mut self, e: EdgeId, c: Color) {
        debug_assert!(c >= 1 && c as usize <= self.k);
        self.colors[e] = c;
    }

    pub fn clear(&mut self, e: EdgeId) {
        self.colors[e] = 0;
    }

    pub fn values(&self) -> &[Color] {
        &self.colors
    }

    pub fn domain(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.colors.iter().enumerate().filter(|(_, &c)| c != 0).map(|(e, _)| e)
    }

    pub fn dom_size(&self) -> usize {
        self.colors.iter().filter(|&&c| c != 0).count()
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(|&c| c != 0)
    }

    /// Total coloring with `fill` on every unset edge.
    pub fn complete(&self, fill: Color) -> Coloring {
        self.colors.iter().map(|&c| if c == 0 { fill } else { c }).collect()
    }

    pub fn is_extended_by(&self, c: &[Color]) -> bool {
        c.len() == self.colors.len()
            && self.colors.iter().zip(c).all(|(&p, &x)| p == 0 || p == x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Requests {
    /// Every anti-edge must be joined by a rainbow path.
    All,
    /// Explicit sorted set of anti-edges.
    Pairs(Vec<Pair>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub k: usize,
    pub requests: Requests,
    pub precoloring: PartialColoring,
}

/// Canonicalizes, sorts and deduplicates `pairs`, dropping pairs that are edges.
pub fn normalize_pairs(g: &Graph, pairs: impl IntoIterator<Item = Pair>) -> Result<Vec<Pair>> {
    let mut out = Vec::new();
    for (u, v) in pairs {
        ensure!(
            u < g.n() && v < g.n(),
            Error::usage(format!("request ({u}, {v}) out of range"))
        );
        ensure!(u != v, Error::usage(format!("request ({u}, {v}) is not a pair")));
        if !g.has_edge(u, v) {
            out.push(pair(u, v));
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

impl Instance {
    pub fn new(
        graph: Graph,
        k: usize,
        requests: Requests,
        precoloring: Option<PartialColoring>,
    ) -> Result<Instance> {
        ensure!(k >= 1 && k <= 64, Error::usage(format!("color count {k} outside 1..=64")));
        let requests = match requests {
            Requests::All => Requests::All,
            Requests::Pairs(p) => Requests::Pairs(normalize_pairs(&graph, p)?),
        };
        let precoloring = match precoloring {
            Some(p) => {
                ensure!(
                    p.len() == graph.m(),
                    Error::usage("precoloring length differs from edge count")
                );
                ensure!(p.k() == k, Error::usage("precoloring color count differs from k"));
                p
            }
            None => PartialColoring::empty(graph.m(), k),
        };
        Ok(Instance { graph, k, requests, precoloring })
    }

    pub fn subset(graph: Graph, k: usize, pairs: Vec<Pair>) -> Result<Instance> {
        Self::new(graph, k, Requests::Pairs(pairs), None)
    }

    pub fn rainbow(graph: Graph, k: usize) -> Result<Instance> {
        Self::new(graph, k, Requests::All, None)
    }

    /// The explicit request list; `All` expands to every anti-edge.
    pub fn request_pairs(&self) -> Cow<'_, [Pair]> {
        match &self.requests {
            Requests::All => Cow::Owned(anti_edges(&self.graph)),
            Requests::Pairs(p) => Cow::Borrowed(p),
        }
    }

    /// Size of the request set without expanding `All`.
    pub fn request_count(&self) -> usize {
        match &self.requests {
            Requests::All => {
                let n = self.graph.n();
                n * n.saturating_sub(1) / 2 - self.graph.m()
            }
            Requests::Pairs(p) => p.len(),
        }
    }

    /// Requests at distance at most `k`; the others can never be satisfied.
    pub fn feasible_requests(&self) -> Vec<Pair> {
        let feasible = feasible_pairs(&self.graph, self.k);
        match &self.requests {
            Requests::All => feasible,
            Requests::Pairs(p) => p.iter().copied().filter(|q| feasible.binary_search(q).is_ok()).collect(),
        }
    }

    pub fn has_precoloring(&self) -> bool {
        self.precoloring.dom_size() > 0
    }

    pub fn with_precoloring(mut self, precoloring: PartialColoring) -> Result<Instance> {
        ensure!(
            precoloring.len() == self.graph.m() && precoloring.k() == self.k,
            Error::usage("precoloring does not fit the instance")
        );
        self.precoloring = precoloring;
        Ok(self)
    }
}
