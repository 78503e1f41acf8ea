//! Exhaustive search over all extensions of the precoloring.
//!
//! Colorings are visited in lexicographic order of the color vector indexed
//! by edge id. A request is checked as soon as every edge of every candidate
//! path for it is colored, and failing prefixes are cut, which keeps the order
//! (and so the first solution found) identical to plain enumeration.

use num_bigint::BigUint;

use crate::config::Config;
use crate::error::{ensure, Error, Result};
use crate::graph::{EdgeId, Graph, Pair};
use crate::instance::{Coloring, Instance, PartialColoring};

struct Prepared<'a> {
    g: &'a Graph,
    k: usize,
    /// Candidate paths (edge lists) per request.
    paths: Vec<Vec<Vec<EdgeId>>>,
    /// Requests to check once edge `e` is colored.
    check_at: Vec<Vec<usize>>,
    last_check: Option<EdgeId>,
    /// Some request has no path of length at most k.
    hopeless: bool,
}

/// All simple `u`-`v` paths with at most `k` edges, as edge lists.
pub fn simple_paths(g: &Graph, (u, v): Pair, k: usize, cap: usize) -> Result<Vec<Vec<EdgeId>>> {
    fn dfs(
        g: &Graph,
        x: usize,
        target: usize,
        k: usize,
        on_path: &mut [bool],
        edges: &mut Vec<EdgeId>,
        out: &mut Vec<Vec<EdgeId>>,
        cap: usize,
    ) -> bool {
        if x == target {
            out.push(edges.clone());
            return out.len() <= cap;
        }
        if edges.len() == k {
            return true;
        }
        for (y, e) in g.adj(x) {
            if on_path[y] {
                continue;
            }
            on_path[y] = true;
            edges.push(e);
            let ok = dfs(g, y, target, k, on_path, edges, out, cap);
            edges.pop();
            on_path[y] = false;
            if !ok {
                return false;
            }
        }
        true
    }
    let mut on_path = vec![false; g.n()];
    on_path[u] = true;
    let mut out = Vec::new();
    ensure!(
        dfs(g, u, v, k, &mut on_path, &mut Vec::new(), &mut out, cap),
        Error::resource("too many candidate paths for exhaustive search")
    );
    Ok(out)
}

fn check_budget(inst: &Instance, cfg: &Config) -> Result<()> {
    let free = inst.graph.m() - inst.precoloring.dom_size();
    let bits = cfg.budgets.brute_force_log2.min(120);
    let fits = (inst.k as u128)
        .checked_pow(free as u32)
        .is_some_and(|x| x <= 1u128 << bits);
    ensure!(
        fits,
        Error::resource(format!(
            "brute force over {}^{} colorings exceeds 2^{}",
            inst.k, free, bits
        ))
    );
    Ok(())
}

fn prepare<'a>(inst: &'a Instance, cfg: &Config) -> Result<Prepared<'a>> {
    check_budget(inst, cfg)?;
    let g = &inst.graph;
    let requests = inst.request_pairs();
    let mut paths = Vec::with_capacity(requests.len());
    let mut check_at = vec![Vec::new(); g.m()];
    let mut hopeless = false;
    let mut total = 0usize;
    let mut last_check = None;
    for (i, &r) in requests.iter().enumerate() {
        let p = simple_paths(g, r, inst.k, cfg.budgets.max_paths)?;
        total += p.len();
        ensure!(
            total <= cfg.budgets.max_paths,
            Error::resource("too many candidate paths for exhaustive search")
        );
        match p.iter().flatten().max() {
            None => hopeless = true,
            Some(&e) => {
                check_at[e].push(i);
                last_check = last_check.max(Some(e));
            }
        }
        paths.push(p);
    }
    Ok(Prepared { g, k: inst.k, paths, check_at, last_check, hopeless })
}

impl Prepared<'_> {
    fn satisfied(&self, r: usize, colors: &[u8]) -> bool {
        self.paths[r].iter().any(|p| {
            let mut used = 0u64;
            p.iter().all(|&e| {
                let b = 1u64 << (colors[e] - 1);
                let fresh = used & b == 0;
                used |= b;
                fresh
            })
        })
    }

    fn checks_pass(&self, e: EdgeId, colors: &[u8]) -> bool {
        self.check_at[e].iter().all(|&r| self.satisfied(r, colors))
    }

    fn first(&self, fixed: &PartialColoring) -> Option<Coloring> {
        if self.hopeless {
            return None;
        }
        let mut colors = vec![0u8; self.g.m()];
        self.first_from(0, fixed, &mut colors).then_some(colors)
    }

    fn first_from(&self, e: EdgeId, fixed: &PartialColoring, colors: &mut [u8]) -> bool {
        if e == colors.len() {
            return true;
        }
        let options = match fixed.get(e) {
            Some(c) => c..=c,
            None => 1..=self.k as u8,
        };
        for a in options {
            colors[e] = a;
            if self.checks_pass(e, colors) && self.first_from(e + 1, fixed, colors) {
                return true;
            }
        }
        colors[e] = 0;
        false
    }

    fn count(&self, fixed: &PartialColoring) -> u128 {
        if self.hopeless {
            return 0;
        }
        let mut colors = vec![0u8; self.g.m()];
        self.count_from(0, fixed, &mut colors)
    }

    fn count_from(&self, e: EdgeId, fixed: &PartialColoring, colors: &mut [u8]) -> u128 {
        if self.last_check.is_none_or(|l| e > l) {
            let free = (e..colors.len()).filter(|&x| fixed.get(x).is_none()).count();
            return (self.k as u128).pow(free as u32);
        }
        let options = match fixed.get(e) {
            Some(c) => c..=c,
            None => 1..=self.k as u8,
        };
        let mut total = 0;
        for a in options {
            colors[e] = a;
            if self.checks_pass(e, colors) {
                total += self.count_from(e + 1, fixed, colors);
            }
        }
        colors[e] = 0;
        total
    }

    /// Precolorings fixing the first `depth` free edges, in lexicographic order.
    fn prefixes(&self, base: &PartialColoring, workers: usize) -> Vec<PartialColoring> {
        let free: Vec<EdgeId> = (0..self.g.m()).filter(|&e| base.get(e).is_none()).collect();
        let mut depth = 0;
        let mut count = 1usize;
        while depth < free.len() && count < 4 * workers {
            depth += 1;
            count *= self.k;
        }
        let mut out = vec![base.clone()];
        for &e in &free[..depth] {
            let mut next = Vec::with_capacity(out.len() * self.k);
            for p in &out {
                for a in 1..=self.k as u8 {
                    let mut q = p.clone();
                    q.set(e, a);
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }
}

/// First satisfying extension of the precoloring in lexicographic order.
pub fn brute_force_solve(inst: &Instance, cfg: &Config) -> Result<Option<Coloring>> {
    let prep = prepare(inst, cfg)?;
    if cfg.workers <= 1 {
        return Ok(prep.first(&inst.precoloring));
    }
    let tasks = prep.prefixes(&inst.precoloring, cfg.workers);
    for batch in tasks.chunks(cfg.workers) {
        let results: Vec<Option<Coloring>> = std::thread::scope(|s| {
            let handles: Vec<_> = batch
                .iter()
                .map(|fixed| s.spawn(|| prep.first(fixed)))
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        if let Some(c) = results.into_iter().flatten().next() {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Number of extensions of the precoloring satisfying every request.
pub fn brute_force_count(inst: &Instance, cfg: &Config) -> Result<BigUint> {
    let prep = prepare(inst, cfg)?;
    if cfg.workers <= 1 {
        return Ok(BigUint::from(prep.count(&inst.precoloring)));
    }
    let tasks = prep.prefixes(&inst.precoloring, cfg.workers);
    let mut total = 0u128;
    for batch in tasks.chunks(cfg.workers) {
        total += std::thread::scope(|s| {
            let handles: Vec<_> = batch
                .iter()
                .map(|fixed| s.spawn(|| prep.count(fixed)))
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).sum::<u128>()
        });
    }
    Ok(BigUint::from(total))
}
