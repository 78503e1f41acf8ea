//! Depth-first labeling with constraint propagation over candidate paths.
//!
//! Every request keeps the simple paths of length at most `k` between its
//! endpoints. Each edge carries a set of allowed colors. A candidate dies when
//! its edges can no longer receive pairwise distinct allowed colors; an edge
//! lying on every live candidate of a request keeps only the colors that some
//! rainbow completion of some live candidate gives it. Labeling picks the
//! most constrained open edge.

use crate::config::Config;
use crate::error::{ensure, Error, Result};
use crate::graph::{EdgeId, Graph, Pair};
use crate::instance::{Coloring, PartialColoring};

use super::brute::simple_paths;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PropStats {
    pub nodes: u64,
    pub candidates: usize,
}

struct Model {
    k: usize,
    paths: Vec<Vec<EdgeId>>,
    /// Candidate range of each request.
    owner: Vec<std::ops::Range<usize>>,
    /// Requests whose candidates use each edge.
    touching: Vec<Vec<u32>>,
}

#[derive(Clone)]
struct State {
    dom: Vec<u64>,
    alive: Vec<bool>,
}

fn popcount(x: u64) -> u32 {
    x.count_ones()
}

/// Colors each edge of `path` can take in some rainbow assignment within
/// `dom`; `None` when there is no such assignment.
fn supports(path: &[EdgeId], dom: &[u64], k: usize) -> Option<Vec<u64>> {
    let len = path.len();
    let masks = 1usize << k;
    // forward[i][m]: the first i edges can take exactly the color set m
    let mut forward = vec![vec![false; masks]; len + 1];
    forward[0][0] = true;
    for i in 0..len {
        let d = dom[path[i]];
        for m in 0..masks {
            if !forward[i][m] {
                continue;
            }
            let mut free = d & !(m as u64);
            while free != 0 {
                let b = free & free.wrapping_neg();
                free ^= b;
                forward[i + 1][m | b as usize] = true;
            }
        }
    }
    if !forward[len].iter().any(|&x| x) {
        return None;
    }
    // backward[i][m]: with color set m used so far, edges i.. can finish
    let mut backward = vec![vec![false; masks]; len + 1];
    backward[len].iter_mut().for_each(|x| *x = true);
    for i in (0..len).rev() {
        let d = dom[path[i]];
        for m in 0..masks {
            let mut free = d & !(m as u64);
            while free != 0 {
                let b = free & free.wrapping_neg();
                free ^= b;
                if backward[i + 1][m | b as usize] {
                    backward[i][m] = true;
                    break;
                }
            }
        }
    }
    let mut sup = vec![0u64; len];
    for i in 0..len {
        let d = dom[path[i]];
        for m in 0..masks {
            if !forward[i][m] {
                continue;
            }
            let mut free = d & !(m as u64);
            while free != 0 {
                let b = free & free.wrapping_neg();
                free ^= b;
                if backward[i + 1][m | b as usize] {
                    sup[i] |= b;
                }
            }
        }
    }
    Some(sup)
}

impl Model {
    fn build(g: &Graph, k: usize, requests: &[Pair], cap: usize) -> Result<Model> {
        let mut paths = Vec::new();
        let mut owner = Vec::with_capacity(requests.len());
        let mut touching: Vec<Vec<u32>> = vec![Vec::new(); g.m()];
        for (r, &req) in requests.iter().enumerate() {
            let left = cap.saturating_sub(paths.len());
            let found = simple_paths(g, req, k, left)?;
            let start = paths.len();
            let mut edges: Vec<EdgeId> = Vec::new();
            for p in found {
                edges.extend_from_slice(&p);
                paths.push(p);
            }
            edges.sort_unstable();
            edges.dedup();
            for e in edges {
                touching[e].push(r as u32);
            }
            owner.push(start..paths.len());
        }
        Ok(Model { k, paths, owner, touching })
    }

    /// Runs requests in `queue` to a fixpoint. False on a wipe-out.
    fn propagate(&self, st: &mut State, queue: &mut Vec<u32>, queued: &mut [bool]) -> bool {
        while let Some(r) = queue.pop() {
            let r = r as usize;
            queued[r] = false;
            let mut live = 0usize;
            // edge -> (live candidates containing it, supported colors)
            let mut acc: Vec<(EdgeId, usize, u64)> = Vec::new();
            for p in self.owner[r].clone() {
                if !st.alive[p] {
                    continue;
                }
                match supports(&self.paths[p], &st.dom, self.k) {
                    None => st.alive[p] = false,
                    Some(sup) => {
                        live += 1;
                        for (i, &e) in self.paths[p].iter().enumerate() {
                            match acc.iter_mut().find(|x| x.0 == e) {
                                Some(x) => {
                                    x.1 += 1;
                                    x.2 |= sup[i];
                                }
                                None => acc.push((e, 1, sup[i])),
                            }
                        }
                    }
                }
            }
            if live == 0 {
                queue.clear();
                return false;
            }
            for (e, count, sup) in acc {
                if count != live {
                    continue;
                }
                let narrowed = st.dom[e] & sup;
                if narrowed != st.dom[e] {
                    st.dom[e] = narrowed;
                    for &t in &self.touching[e] {
                        if !queued[t as usize] {
                            queued[t as usize] = true;
                            queue.push(t);
                        }
                    }
                }
            }
        }
        true
    }

    /// A request is settled when some live candidate has all its colors fixed.
    fn settled(&self, st: &State, r: usize) -> bool {
        self.owner[r]
            .clone()
            .any(|p| st.alive[p] && self.paths[p].iter().all(|&e| popcount(st.dom[e]) == 1))
    }

    /// An open edge of the unsettled request with the fewest live candidates,
    /// smallest domain first.
    fn pick_edge(&self, st: &State) -> Option<EdgeId> {
        let mut best: Option<(usize, u32, std::cmp::Reverse<usize>, EdgeId)> = None;
        for r in 0..self.owner.len() {
            let live = self.owner[r].clone().filter(|&p| st.alive[p]).count();
            if best.is_some_and(|b| live > b.0) || self.settled(st, r) {
                continue;
            }
            for p in self.owner[r].clone() {
                if !st.alive[p] {
                    continue;
                }
                for &e in &self.paths[p] {
                    let size = popcount(st.dom[e]);
                    if size > 1 {
                        let key = (live, size, std::cmp::Reverse(self.touching[e].len()), e);
                        if best.map_or(true, |b| key < b) {
                            best = Some(key);
                        }
                    }
                }
            }
        }
        best.map(|b| b.3)
    }
}

struct Search<'a> {
    model: &'a Model,
    budget: u64,
    stats: PropStats,
}

impl Search<'_> {
    fn run(&mut self, st: State, depth: usize) -> Result<Option<State>> {
        self.stats.nodes += 1;
        ensure!(
            self.stats.nodes <= self.budget,
            Error::resource(format!("propagation search exceeded {} nodes", self.budget))
        );
        let Some(e) = self.model.pick_edge(&st) else {
            return Ok(Some(st));
        };
        let n_req = self.model.owner.len();
        let mut colors = st.dom[e];
        while colors != 0 {
            let b = colors & colors.wrapping_neg();
            colors ^= b;
            let mut next = st.clone();
            next.dom[e] = b;
            let mut queued = vec![false; n_req];
            let mut queue: Vec<u32> = self.model.touching[e].clone();
            for &t in &queue {
                queued[t as usize] = true;
            }
            if !self.model.propagate(&mut next, &mut queue, &mut queued) {
                continue;
            }
            if let Some(done) = self.run(next, depth + 1)? {
                return Ok(Some(done));
            }
        }
        Ok(None)
    }
}

/// Finds a coloring extending `c0` that satisfies every request, or proves
/// that none exists.
pub fn propagation_search(
    g: &Graph,
    k: usize,
    requests: &[Pair],
    c0: &PartialColoring,
    cfg: &Config,
) -> Result<(Option<Coloring>, PropStats)> {
    ensure!(c0.len() == g.m() && c0.k() == k, Error::usage("precoloring does not fit"));
    ensure!((1..=16).contains(&k), Error::usage("propagation search supports 1 <= k <= 16"));
    let model = Model::build(g, k, requests, cfg.budgets.max_paths)?;
    let full = (1u64 << k) - 1;
    let dom: Vec<u64> = (0..g.m())
        .map(|e| c0.get(e).map_or(full, |c| 1u64 << (c - 1)))
        .collect();
    let mut st = State { dom, alive: vec![true; model.paths.len()] };
    let mut search =
        Search { model: &model, budget: cfg.budgets.search_nodes, stats: PropStats::default() };
    search.stats.candidates = model.paths.len();
    let mut queue: Vec<u32> = (0..requests.len() as u32).rev().collect();
    let mut queued = vec![true; requests.len()];
    if !model.propagate(&mut st, &mut queue, &mut queued) {
        return Ok((None, search.stats));
    }
    let found = search.run(st, 0)?;
    let coloring = found.map(|st| {
        st.dom.iter().map(|&d| d.trailing_zeros() as u8 + 1).collect::<Coloring>()
    });
    Ok((coloring, search.stats))
}
