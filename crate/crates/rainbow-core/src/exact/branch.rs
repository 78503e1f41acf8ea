//! Branching search over guided walks.
//!
//! Each node picks the smallest open request, finds a guided walk for it,
//! colors the walk's uncolored edges and recurses without that request. When
//! that fails, some uncolored walk edge `e` must get a different color `a`
//! and must lie on the walk of some other open request `r`; every such
//! `(e, a, r)` is tried with `e` added to the guide set of `r`.

use std::collections::HashSet;

use crate::config::Config;
use crate::error::{ensure, Error, Result};
use crate::graph::{EdgeId, Graph, Pair};
use crate::instance::{Coloring, PartialColoring};
use crate::verify::find_guided_walk;

/// Entries kept in the failed-state memo before it stops growing.
const MEMO_CAP: usize = 1 << 20;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub max_depth: usize,
    /// Largest guide set of an open request at a node that got past the
    /// repeated-color check.
    pub max_guide: usize,
    /// Nodes cut because an open guide set repeated a color.
    pub guide_cuts: u64,
}

struct Search<'a> {
    g: &'a Graph,
    k: usize,
    requests: &'a [Pair],
    node_budget: u64,
    depth_cap: usize,
    failed: HashSet<Vec<u8>>,
    stats: SearchStats,
}

/// Guide sets indexed like the request list.
pub type Guide = Vec<Vec<EdgeId>>;

fn state_key(open: &[bool], c0: &PartialColoring, f: &Guide) -> Vec<u8> {
    let mut key = Vec::with_capacity(open.len() + c0.len() + 8);
    key.extend(open.iter().map(|&b| b as u8));
    key.extend_from_slice(c0.values());
    for (i, set) in f.iter().enumerate() {
        if open[i] && !set.is_empty() {
            key.extend_from_slice(&(i as u32).to_le_bytes());
            for &e in set {
                key.extend_from_slice(&(e as u32).to_le_bytes());
            }
            key.push(0xff);
        }
    }
    key
}

impl Search<'_> {
    fn run(
        &mut self,
        open: &mut Vec<bool>,
        c0: &PartialColoring,
        f: &Guide,
        depth: usize,
    ) -> Result<Option<Coloring>> {
        self.stats.nodes += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        ensure!(
            self.stats.nodes <= self.node_budget,
            Error::resource(format!("branching search exceeded {} nodes", self.node_budget))
        );
        ensure!(
            depth <= self.depth_cap,
            Error::internal(format!("recursion depth {depth} above cap {}", self.depth_cap))
        );
        let Some(first) = open.iter().position(|&b| b) else {
            return Ok(Some(c0.complete(1)));
        };
        for (i, set) in f.iter().enumerate() {
            if !open[i] {
                continue;
            }
            let mut seen = 0u64;
            for &e in set {
                let b = 1u64 << (c0.get(e).expect("guide edge uncolored") - 1);
                if seen & b != 0 {
                    self.stats.guide_cuts += 1;
                    return Ok(None);
                }
                seen |= b;
            }
        }
        for (i, set) in f.iter().enumerate() {
            if open[i] {
                self.stats.max_guide = self.stats.max_guide.max(set.len());
            }
        }
        let key = state_key(open, c0, f);
        if self.failed.contains(&key) {
            return Ok(None);
        }

        let Some(walk) = find_guided_walk(self.g, c0, self.requests[first], &f[first], self.k)? else {
            self.remember(key);
            return Ok(None);
        };
        let mut used = 0u64;
        for &e in &walk.edges {
            if let Some(c) = c0.get(e) {
                used |= 1 << (c - 1);
            }
        }
        let mut c1 = c0.clone();
        let mut uncolored: Vec<EdgeId> = Vec::new();
        for &e in &walk.edges {
            if c0.get(e).is_none() && !uncolored.contains(&e) {
                let a = (0..self.k).find(|&a| used & (1 << a) == 0).ok_or_else(|| {
                    Error::internal("guided walk has more edges than colors")
                })?;
                used |= 1 << a;
                c1.set(e, a as u8 + 1);
                uncolored.push(e);
            }
        }

        open[first] = false;
        let found = self.run(open, &c1, f, depth + 1)?;
        open[first] = true;
        if found.is_some() {
            return Ok(found);
        }

        let others: Vec<usize> = (0..open.len()).filter(|&i| open[i] && i != first).collect();
        for &e in &uncolored {
            for a in 1..=self.k as u8 {
                for &r in &others {
                    let mut ce = c0.clone();
                    ce.set(e, a);
                    let mut fe = f.clone();
                    fe[r].push(e);
                    fe[r].sort_unstable();
                    if let Some(c) = self.run(open, &ce, &fe, depth + 1)? {
                        return Ok(Some(c));
                    }
                }
            }
        }
        self.remember(key);
        Ok(None)
    }

    fn remember(&mut self, key: Vec<u8>) {
        if self.failed.len() < MEMO_CAP {
            self.failed.insert(key);
        }
    }
}

/// Searches for a total coloring extending `c0` in which every request in
/// `open` has a rainbow walk through its guide set.
pub fn find_coloring(
    g: &Graph,
    k: usize,
    requests: &[Pair],
    open: &[bool],
    c0: &PartialColoring,
    f: &Guide,
    cfg: &Config,
) -> Result<(Option<Coloring>, SearchStats)> {
    ensure!(
        open.len() == requests.len() && f.len() == requests.len(),
        Error::usage("request flags and guide sets must match the request list")
    );
    ensure!(c0.len() == g.m() && c0.k() == k, Error::usage("precoloring does not fit"));
    for set in f {
        ensure!(set.len() <= k, Error::usage("guide set larger than k"));
        for &e in set {
            ensure!(
                e < g.m() && c0.get(e).is_some(),
                Error::usage("guide edge outside the precolored domain")
            );
        }
    }
    // Every node either closes a request or grows one guide set; a guide set
    // reaching k + 1 edges is rejected one level later.
    let depth_cap = (k + 1) * requests.len() + 1;
    let mut search = Search {
        g,
        k,
        requests,
        node_budget: cfg.budgets.search_nodes,
        depth_cap,
        failed: HashSet::new(),
        stats: SearchStats::default(),
    };
    let mut open = open.to_vec();
    let result = search.run(&mut open, c0, f, 0)?;
    Ok((result, search.stats))
}
