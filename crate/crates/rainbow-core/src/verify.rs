use crate::error::{ensure, Error, Result};
use crate::graph::{EdgeId, Graph, Pair, Vertex};
use crate::instance::{Color, PartialColoring};

/// Upper bound on DP table entries before a search is refused.
const MAX_TABLE: usize = 1 << 30;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<EdgeId>,
}

impl Walk {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

fn bit(c: Color) -> u64 {
    1u64 << (c - 1)
}

/// Finds a walk from `pair.0` to `pair.1` of length at most `k` that contains
/// every guide edge, never repeats a precolored color, and never repeats an
/// uncolored edge, so its uncolored edges can be given fresh distinct colors.
///
/// Edges sharing a color with a guide edge are pruned first (guide edges
/// themselves stay), which makes each guide color appear only on its guide
/// edge. A walk whose color set contains all guide colors therefore uses all
/// guide edges.
pub fn find_guided_walk(
    g: &Graph,
    c0: &PartialColoring,
    (u, v): Pair,
    guide: &[EdgeId],
    k: usize,
) -> Result<Option<Walk>> {
    ensure!(u < g.n() && v < g.n(), Error::usage("walk endpoint out of range"));
    ensure!(guide.len() <= k, Error::usage("guide set larger than k"));
    ensure!(k <= 32, Error::usage("guided search supports k <= 32"));
    let mut guide_mask = 0u64;
    for &e in guide {
        ensure!(e < g.m(), Error::usage("guide edge out of range"));
        let c = c0
            .get(e)
            .ok_or_else(|| Error::usage(format!("guide edge {e} is not precolored")))?;
        if guide_mask & bit(c) != 0 {
            return Ok(None);
        }
        guide_mask |= bit(c);
    }
    let masks = 1usize << k;
    let table = (k + 1)
        .checked_mul(masks)
        .and_then(|x| x.checked_mul(g.n()))
        .filter(|&x| x <= MAX_TABLE)
        .ok_or_else(|| Error::resource("guided walk table too large"))?;
    let allowed = |e: usize| match c0.get(e) {
        None => true,
        Some(c) => guide_mask & bit(c) == 0 || guide.contains(&e),
    };

    let idx = |l: usize, mask: u64, x: usize| (l * masks + mask as usize) * g.n() + x;
    let mut reach = vec![false; table];
    let mut layer: Vec<(u64, u32)> = vec![(0, u as u32)];
    reach[idx(0, 0, u)] = true;
    for l in 0..k {
        let mut next = Vec::new();
        for &(mask, x) in &layer {
            for &(y, e) in g.adj_raw(x as usize) {
                let e = e as usize;
                if !allowed(e) {
                    continue;
                }
                let nm = match c0.get(e) {
                    Some(c) if mask & bit(c) != 0 => continue,
                    Some(c) => mask | bit(c),
                    None => mask,
                };
                let slot = idx(l + 1, nm, y as usize);
                if !reach[slot] {
                    reach[slot] = true;
                    next.push((nm, y));
                }
            }
        }
        next.sort_unstable();
        layer = next;
    }

    for l in 1..=k {
        for mask in 0..masks as u64 {
            if mask & guide_mask != guide_mask || !reach[idx(l, mask, v)] {
                continue;
            }
            let mut rev_vertices = vec![v];
            let mut rev_edges = Vec::new();
            if backtrack(g, c0, &allowed, &reach, &idx, u, l, mask, v, &mut rev_vertices, &mut rev_edges) {
                rev_vertices.reverse();
                rev_edges.reverse();
                return Ok(Some(Walk { vertices: rev_vertices, edges: rev_edges }));
            }
        }
    }
    Ok(None)
}

/// Depth-first reconstruction through true DP states, lowest predecessor
/// vertex first, rejecting a second use of any uncolored edge.
#[allow(clippy::too_many_arguments)]
fn backtrack(
    g: &Graph,
    c0: &PartialColoring,
    allowed: &dyn Fn(usize) -> bool,
    reach: &[bool],
    idx: &dyn Fn(usize, u64, usize) -> usize,
    source: Vertex,
    l: usize,
    mask: u64,
    x: Vertex,
    rev_vertices: &mut Vec<Vertex>,
    rev_edges: &mut Vec<EdgeId>,
) -> bool {
    if l == 0 {
        return x == source && mask == 0;
    }
    for (w, e) in g.adj(x) {
        if !allowed(e) {
            continue;
        }
        let pm = match c0.get(e) {
            Some(c) if mask & bit(c) == 0 => continue,
            Some(c) => mask & !bit(c),
            None => {
                if rev_edges.contains(&e) {
                    continue;
                }
                mask
            }
        };
        if !reach[idx(l - 1, pm, w)] {
            continue;
        }
        rev_vertices.push(w);
        rev_edges.push(e);
        if backtrack(g, c0, allowed, reach, idx, source, l - 1, pm, w, rev_vertices, rev_edges) {
            return true;
        }
        rev_vertices.pop();
        rev_edges.pop();
    }
    false
}

/// Vertices reachable from `source` by a rainbow walk under the total coloring
/// `c`. Stops early once every vertex flagged in `targets` is reached.
pub fn rainbow_reachable(
    g: &Graph,
    c: &[Color],
    k: usize,
    source: Vertex,
    targets: Option<&[bool]>,
) -> Vec<bool> {
    let masks = 1usize << k;
    let n = g.n();
    let mut found = vec![false; n];
    found[source] = true;
    let mut remaining = match targets {
        Some(t) => t.iter().enumerate().filter(|&(v, &b)| b && v != source).count(),
        None => n - 1,
    };
    if remaining == 0 {
        return found;
    }
    let mut lists: Vec<Vec<u32>> = vec![Vec::new(); masks];
    let mut seen = vec![false; masks * n];
    lists[0].push(source as u32);
    seen[source] = true;
    let full = masks - 1;
    for mask in 0..masks {
        let list = std::mem::take(&mut lists[mask]);
        for &x in &list {
            for &(y, e) in g.adj_raw(x as usize) {
                let b = bit(c[e as usize]) as usize;
                if mask & b != 0 {
                    continue;
                }
                let nm = mask | b;
                let y = y as usize;
                if !found[y] {
                    found[y] = true;
                    if targets.is_none_or(|t| t[y]) {
                        remaining -= 1;
                        if remaining == 0 {
                            return found;
                        }
                    }
                }
                if nm != full && !seen[nm * n + y] {
                    seen[nm * n + y] = true;
                    lists[nm].push(y as u32);
                }
            }
        }
    }
    found
}

/// The requests joined by a rainbow path under the total coloring `c`.
pub fn verify_requests(g: &Graph, c: &[Color], requests: &[Pair], k: usize) -> Vec<Pair> {
    assert_eq!(c.len(), g.m(), "coloring length differs from edge count");
    assert!(c.iter().all(|&x| x >= 1 && x as usize <= k), "coloring is not total in 1..=k");
    let mut sorted: Vec<Pair> = requests.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    let mut i = 0;
    let mut targets = vec![false; g.n()];
    while i < sorted.len() {
        let u = sorted[i].0;
        let mut j = i;
        while j < sorted.len() && sorted[j].0 == u {
            targets[sorted[j].1] = true;
            j += 1;
        }
        let found = rainbow_reachable(g, c, k, u, Some(&targets));
        for &(a, b) in &sorted[i..j] {
            targets[b] = false;
            if found[b] {
                out.push((a, b));
            }
        }
        i = j;
    }
    out.dedup();
    out
}

pub fn all_requests_satisfied(g: &Graph, c: &[Color], requests: &[Pair], k: usize) -> bool {
    let mut unique = requests.to_vec();
    unique.sort_unstable();
    unique.dedup();
    verify_requests(g, c, &unique, k).len() == unique.len()
}

/// The smallest anti-edge not joined by a rainbow path, if any.
pub fn first_unsatisfied_pair(g: &Graph, c: &[Color], k: usize) -> Option<Pair> {
    assert_eq!(c.len(), g.m(), "coloring length differs from edge count");
    for u in 0..g.n() {
        let mut targets = vec![false; g.n()];
        let mut any = false;
        for t in targets.iter_mut().skip(u + 1) {
            *t = true;
            any = true;
        }
        if !any {
            break;
        }
        let found = rainbow_reachable(g, c, k, u, Some(&targets));
        if let Some(v) = (u + 1..g.n()).find(|&v| !found[v]) {
            return Some((u, v));
        }
    }
    None
}

pub fn is_rainbow_connected(g: &Graph, c: &[Color], k: usize) -> bool {
    if c.iter().any(|&x| x == 0 || x as usize > k) {
        return false;
    }
    if k == 3 && g.n() > 256 {
        return crate::verify_fast::rainbow_connected_k3(g, c);
    }
    first_unsatisfied_pair(g, c, k).is_none()
}

/// True when the walk is a rainbow walk between its end vertices.
pub fn is_rainbow_walk(g: &Graph, c: &[Color], walk: &Walk) -> bool {
    if walk.vertices.len() != walk.edges.len() + 1 {
        return false;
    }
    let mut used = 0u64;
    for (i, &e) in walk.edges.iter().enumerate() {
        let (a, b) = g.edge(e);
        let (x, y) = (walk.vertices[i], walk.vertices[i + 1]);
        if (a, b) != crate::graph::pair(x, y) || used & bit(c[e]) != 0 {
            return false;
        }
        used |= bit(c[e]);
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn guided_walk_examples() {
        let g = path(3);
        let c0 = PartialColoring::empty(2, 2);
        let w = find_guided_walk(&g, &c0, (0, 2), &[], 2).unwrap().unwrap();
        assert_eq!(w.vertices, vec![0, 1, 2]);
        assert_eq!(w.edges, vec![0, 1]);
        assert!(find_guided_walk(&g, &PartialColoring::empty(2, 1), (0, 2), &[], 1)
            .unwrap()
            .is_none());

        let c4 = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let mut c0 = PartialColoring::empty(4, 2);
        c0.set(0, 1);
        c0.set(1, 1);
        assert!(find_guided_walk(&c4, &c0, (0, 2), &[0], 2).unwrap().is_none());
        assert!(find_guided_walk(&c4, &c0, (0, 2), &[3], 2).is_err());
    }

    #[test]
    fn guided_walk_rejects_repeated_uncolored_edge() {
        // 0-1 uncolored, 1-2 colored 1: the only 0..0 closed walk would reuse 0-1.
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let mut c0 = PartialColoring::empty(2, 3);
        c0.set(1, 1);
        let w = find_guided_walk(&g, &c0, (0, 2), &[1], 3).unwrap().unwrap();
        assert_eq!(w.vertices, vec![0, 1, 2]);
        // Reaching 2 and coming back to 1 needs edge 1-2 twice: impossible.
        let g = Graph::new(4, [(0, 1), (1, 2), (1, 3)]).unwrap();
        let mut c0 = PartialColoring::empty(3, 3);
        c0.set(1, 1);
        assert!(find_guided_walk(&g, &c0, (0, 3), &[1], 3).unwrap().is_none());
    }

    #[test]
    fn verify_examples() {
        let g = path(3);
        assert_eq!(verify_requests(&g, &[1, 2], &[(0, 2)], 2), vec![(0, 2)]);
        assert!(verify_requests(&g, &[1, 1], &[(0, 2)], 2).is_empty());
        let star = Graph::new(4, [(3, 0), (3, 1), (3, 2)]).unwrap();
        assert_eq!(
            verify_requests(&star, &[1, 2, 1], &[(0, 1), (0, 2), (1, 2)], 2),
            vec![(0, 1), (1, 2)]
        );
    }

    #[test]
    fn connectivity_examples() {
        let k4 = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(is_rainbow_connected(&k4, &[1; 6], 2));
        assert!(is_rainbow_connected(&path(3), &[1, 2], 2));
        let c4 = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(!is_rainbow_connected(&c4, &[1; 4], 2));
        assert_eq!(first_unsatisfied_pair(&c4, &[1; 4], 2), Some((0, 2)));
        assert!(!is_rainbow_connected(&Graph::empty(2), &[], 2));
    }
}
