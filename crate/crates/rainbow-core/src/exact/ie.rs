//! Counting satisfying 2-colorings by inclusion-exclusion over request subsets.
//!
//! For a subset X of requests, the colorings leaving every pair of X
//! unsatisfied are those constant on each class of the relation linking the
//! two edges of every 2-path between a pair of X. Their number is
//! `2^(classes)`, and the signed sum over X counts colorings satisfying all
//! requests.

use num_bigint::{BigInt, BigUint, Sign};

use crate::config::Config;
use crate::dsu::DisjointSets;
use crate::error::{ensure, Error, Result};
use crate::graph::{EdgeId, Graph, Pair};
use crate::instance::{Coloring, PartialColoring};

#[derive(Clone, Debug)]
pub struct QuotientStructure {
    pub sets: DisjointSets,
    pub classes: usize,
}

/// Edge pairs `(ux, xv)` of every 2-path between `u` and `v`.
pub fn two_paths(g: &Graph, (u, v): Pair) -> Vec<(EdgeId, EdgeId)> {
    g.common_neighbors(u, v)
        .into_iter()
        .map(|x| (g.edge_id(u, x).unwrap(), g.edge_id(x, v).unwrap()))
        .collect()
}

pub fn quotient_classes(g: &Graph, x: &[Pair]) -> QuotientStructure {
    let mut sets = DisjointSets::new(g.m());
    for &p in x {
        for (a, b) in two_paths(g, p) {
            sets.union(a, b);
        }
    }
    let classes = sets.class_count();
    QuotientStructure { sets, classes }
}

/// Request 2-paths over a compact index space of the edges they touch.
struct Lattice {
    paths: Vec<Vec<(u32, u32)>>,
    /// Precolor of each touched edge (0 = unset).
    touched_color: Vec<u8>,
    /// Unset edges not on any request 2-path.
    free_untouched: usize,
}

fn lattice(g: &Graph, s: &[Pair], c0: Option<&PartialColoring>) -> Option<Lattice> {
    let mut local = vec![u32::MAX; g.m()];
    let mut touched_color = Vec::new();
    let mut paths = Vec::with_capacity(s.len());
    for &p in s {
        let tp = two_paths(g, p);
        if tp.is_empty() {
            return None;
        }
        let mut row = Vec::with_capacity(tp.len());
        for (a, b) in tp {
            for e in [a, b] {
                if local[e] == u32::MAX {
                    local[e] = touched_color.len() as u32;
                    touched_color.push(c0.and_then(|c| c.get(e)).unwrap_or(0));
                }
            }
            row.push((local[a], local[b]));
        }
        paths.push(row);
    }
    let free_untouched = (0..g.m())
        .filter(|&e| local[e] == u32::MAX && c0.and_then(|c| c.get(e)).is_none())
        .count();
    Some(Lattice { paths, touched_color, free_untouched })
}

impl Lattice {
    /// Number of free classes when exactly the requests in `mask` are linked,
    /// or `None` when some class holds both precolors.
    fn free_classes(&self, mask: u64, sets: &mut DisjointSets, class_color: &mut [u8]) -> Option<usize> {
        sets.reset();
        let mut bits = mask;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            for &(a, b) in &self.paths[j] {
                sets.union(a as usize, b as usize);
            }
        }
        class_color.fill(0);
        let mut colored_classes = 0;
        for (e, &c) in self.touched_color.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let r = sets.find(e);
            match class_color[r] {
                0 => {
                    class_color[r] = c;
                    colored_classes += 1;
                }
                x if x != c => return None,
                _ => {}
            }
        }
        Some(self.free_untouched + sets.class_count() - colored_classes)
    }

    /// Signed tallies per free-class count over subsets `lo..hi` in Gray order.
    fn tally(&self, lo: u64, hi: u64) -> Vec<i64> {
        let t = self.touched_color.len();
        let mut sets = DisjointSets::new(t);
        let mut class_color = vec![0u8; t];
        let mut counts = vec![0i64; self.free_untouched + t + 1];
        for i in lo..hi {
            let x = i ^ (i >> 1);
            if let Some(f) = self.free_classes(x, &mut sets, &mut class_color) {
                if x.count_ones() % 2 == 0 {
                    counts[f] += 1;
                } else {
                    counts[f] -= 1;
                }
            }
        }
        counts
    }
}

fn sum_powers(counts: &[i64]) -> BigUint {
    let mut total = BigInt::from(0);
    for (f, &c) in counts.iter().enumerate() {
        if c != 0 {
            total += BigInt::from(c) << f;
        }
    }
    let (sign, mag) = total.into_parts();
    assert!(sign != Sign::Minus, "inclusion-exclusion produced a negative count");
    mag
}

/// Number of 2-colorings extending `c0` (if given) under which every pair of
/// `s` has a 2-path with two different colors.
pub fn count_extensions(
    g: &Graph,
    s: &[Pair],
    c0: Option<&PartialColoring>,
    cfg: &Config,
) -> Result<BigUint> {
    let mut s = s.to_vec();
    s.sort_unstable();
    s.dedup();
    ensure!(
        s.iter().all(|&(u, v)| u < g.n() && v < g.n() && !g.has_edge(u, v) && u != v),
        Error::usage("requests must be anti-edges")
    );
    ensure!(
        s.len() <= cfg.budgets.ie_requests && s.len() < 63,
        Error::resource(format!(
            "{} requests exceed the inclusion-exclusion budget of {}",
            s.len(),
            cfg.budgets.ie_requests
        ))
    );
    if let Some(c) = c0 {
        ensure!(c.k() == 2 && c.len() == g.m(), Error::usage("precoloring must be a 2-coloring of the edges"));
    }
    let Some(lat) = lattice(g, &s, c0) else {
        return Ok(BigUint::from(0u32));
    };
    let total = 1u64 << s.len();
    let workers = cfg.workers.max(1) as u64;
    let counts = if workers == 1 || total < 1024 {
        lat.tally(0, total)
    } else {
        let chunk = total.div_ceil(workers);
        std::thread::scope(|sc| {
            let lat = &lat;
            let handles: Vec<_> = (0..workers)
                .map(|w| sc.spawn(move || lat.tally(w * chunk, ((w + 1) * chunk).min(total))))
                .collect();
            let mut acc: Vec<i64> = Vec::new();
            for h in handles {
                let part = h.join().unwrap();
                if acc.is_empty() {
                    acc = part;
                } else {
                    for (a, p) in acc.iter_mut().zip(part) {
                        *a += p;
                    }
                }
            }
            acc
        })
    };
    Ok(sum_powers(&counts))
}

pub fn count_satisfying_2colorings(g: &Graph, s: &[Pair], cfg: &Config) -> Result<BigUint> {
    count_extensions(g, s, None, cfg)
}

/// A satisfying 2-coloring built edge by edge, preferring color 1 whenever it
/// still admits a satisfying extension.
pub fn extract_2coloring(
    g: &Graph,
    s: &[Pair],
    c0: Option<&PartialColoring>,
    cfg: &Config,
) -> Result<Option<Coloring>> {
    let mut partial = c0.cloned().unwrap_or_else(|| PartialColoring::empty(g.m(), 2));
    let zero = BigUint::from(0u32);
    if count_extensions(g, s, Some(&partial), cfg)? == zero {
        return Ok(None);
    }
    for e in 0..g.m() {
        if partial.get(e).is_some() {
            continue;
        }
        partial.set(e, 1);
        if count_extensions(g, s, Some(&partial), cfg)? == zero {
            partial.set(e, 2);
        }
    }
    Ok(Some(partial.complete(1)))
}
