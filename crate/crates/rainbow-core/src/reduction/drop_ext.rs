//! Removes a precoloring for `k >= 3` with one long path `v1 .. vL`,
//! `L = 3k^2 l'`. Requests `{vi, v(i+k)}` force the path colors to repeat a
//! permutation of `1..=k`; a precolored edge `uv` (`u < v`) of conflict class
//! `f` and color `c` hangs off the path at `prj = (f-1)3k^2 + (c-1)3k + c`
//! through the edge `v(prj+k-1) - u` and the requests `{v(prj), u}` and
//! `{v(prj+1), v}`.

use super::conflict::precoloring_conflict_graph;
use super::{mod1, Check, EmbedTrace, Palette};
use crate::error::{ensure, Error, Result};
use crate::graph::{EdgeId, GraphBuilder, Pair};
use crate::instance::{Color, Instance, Requests};

#[derive(Clone, Debug)]
pub struct DropExtOutput {
    pub instance: Instance,
    /// `(p + 2)`-coloring of `(V', S')`.
    pub vcolor_s: Palette,
    /// Number of rebalanced conflict classes.
    pub classes: usize,
    pub trace: EmbedTrace,
    pub checks: Vec<Check>,
}

/// Relabels the used colors to `1..=l` in increasing order, then cuts every
/// class into runs of at most `ceil(|Dom| / l)` members. Returns the new
/// labels, `l` and the number of new classes.
pub fn rebalance(colors: &[usize]) -> (Vec<usize>, usize, usize) {
    let d = colors.len();
    let mut used: Vec<usize> = colors.to_vec();
    used.sort_unstable();
    used.dedup();
    let l = used.len();
    if d == 0 {
        return (Vec::new(), 0, 0);
    }
    let cap = d.div_ceil(l);
    let mut out = vec![0; d];
    let mut next = 0;
    for &c in &used {
        let members: Vec<usize> = (0..d).filter(|&i| colors[i] == c).collect();
        for run in members.chunks(cap) {
            next += 1;
            for &i in run {
                out[i] = next;
            }
        }
    }
    (out, l, next)
}

pub fn drop_extension(inst: &Instance, cg: &Palette, vcolor_s: &Palette) -> Result<DropExtOutput> {
    let k = inst.k;
    ensure!(
        k >= 3,
        Error::Capability(format!(
            "removing a precoloring needs at least 3 colors (instance has k = {k})"
        ))
    );
    let g = &inst.graph;
    let (n, m) = (g.n(), g.m());
    let s = inst.request_pairs();
    vcolor_s.check(n, &s, "request-graph coloring")?;
    let (cgraph, dom) = precoloring_conflict_graph(inst);
    let cg_pairs: Vec<Pair> = cgraph.edges().collect();
    cg.check(dom.len(), &cg_pairs, "conflict-graph coloring")?;

    let (f, l, classes) = rebalance(&cg.colors);
    ensure!(classes <= 2 * l, Error::internal("rebalancing more than doubled the classes"));
    let block = 3 * k * k;
    let len = block * classes;
    let path = |i: usize| n + i - 1;

    let mut gb = GraphBuilder::from_graph(g);
    gb.add_vertices(len);
    let mut added: Vec<Color> = Vec::new();
    for i in 1..len {
        gb.add_edge(path(i), path(i + 1));
        added.push(mod1(i, k) as Color);
    }
    let mut requests: Vec<Pair> = s.to_vec();
    for i in 1..=len.saturating_sub(k) {
        requests.push((path(i), path(i + k)));
    }
    for (j, &e) in dom.iter().enumerate() {
        let (u, v) = g.edge(e);
        let c = inst.precoloring.get(e).expect("domain edge is colored") as usize;
        let prj = (f[j] - 1) * block + (c - 1) * 3 * k + c;
        gb.add_edge(path(prj + k - 1), u);
        added.push(mod1(c - 1, k) as Color);
        requests.push((path(prj), u));
        requests.push((path(prj + 1), v));
    }
    let graph = gb.build_exact()?;
    let out = Instance::new(graph, k, Requests::Pairs(requests), None)?;

    let p = vcolor_s.count;
    let mut vs = vcolor_s.colors.clone();
    for i in 1..=len {
        vs.push(if ((i - 1) / k) % 2 == 0 { p + 1 } else { p + 2 });
    }
    let vcolor_s2 = Palette::new(vs, p + 2);
    vcolor_s2
        .check(out.graph.n(), &out.request_pairs(), "path request-graph coloring")
        .map_err(|e| Error::internal(e.to_string()))?;

    let d = dom.len();
    let mut checks = vec![Check::new("drop-ext |V'| - |V| = 3k^2 l'", block * classes, out.graph.n() - n)];
    if len > 0 {
        checks.push(Check::new("drop-ext |E'| = |E| + |Dom| + L - 1", m + d + len - 1, out.graph.m()));
        checks.push(Check::new(
            "drop-ext |S'| = |S| + 2|Dom| + L - k",
            s.len() + 2 * d + len - k,
            out.request_pairs().len(),
        ));
    } else {
        checks.push(Check::new("drop-ext |E'| = |E|", m, out.graph.m()));
        checks.push(Check::new("drop-ext |S'| = |S|", s.len(), out.request_pairs().len()));
    }
    checks.push(Check::new("drop-ext l' <= 2l", 1, usize::from(classes <= 2 * l)));

    let perm: Vec<EdgeId> = if len > 0 { (m..m + k).collect() } else { Vec::new() };
    let trace = EmbedTrace { inner_n: n, inner_m: m, added, perm };
    Ok(DropExtOutput { instance: out, vcolor_s: vcolor_s2, classes, trace, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::exact::{brute_force_solve, check_solution, solve_subset_rainbow};
    use crate::graph::{greedy_proper_coloring, Graph};
    use crate::instance::PartialColoring;

    fn palettes(inst: &Instance) -> (Palette, Palette) {
        let n = inst.graph.n();
        let s = Graph::new(n, inst.request_pairs().iter().copied()).unwrap();
        let (cg, _) = precoloring_conflict_graph(inst);
        (Palette::tight(greedy_proper_coloring(&cg)), Palette::tight(greedy_proper_coloring(&s)))
    }

    #[test]
    fn rebalance_examples() {
        assert_eq!(rebalance(&[]), (vec![], 0, 0));
        // 6 items, 2 colors: cap 3, the class of size 5 splits
        let (f, l, c) = rebalance(&[4, 4, 4, 4, 4, 9]);
        assert_eq!((l, c), (2, 3));
        assert_eq!(f, vec![1, 1, 1, 2, 2, 3]);
    }

    #[test]
    fn empty_domain_leaves_the_graph() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let inst = Instance::subset(g, 3, vec![(0, 2)]).unwrap();
        let (cg, vs) = palettes(&inst);
        let out = drop_extension(&inst, &cg, &vs).unwrap();
        assert_eq!(out.instance.graph, inst.graph);
        assert_eq!(out.classes, 0);
        assert!(out.checks.iter().all(|c| c.passed()));
    }

    #[test]
    fn k2_is_a_capability_error() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let inst = Instance::subset(g, 2, vec![]).unwrap();
        let r = drop_extension(&inst, &Palette::tight(vec![]), &Palette::tight(vec![1, 1]));
        assert!(matches!(r, Err(Error::Capability(_))));
    }

    #[test]
    fn precolored_triangle_plus_tail() {
        let cfg = Config::default();
        let g = Graph::new(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        for (colors, req) in [([1, 2], vec![(0, 3)]), ([2, 2], vec![(1, 3)]), ([3, 1], vec![(0, 3), (1, 3)])] {
            let mut pc = PartialColoring::empty(4, 3);
            pc.set(0, colors[0]);
            pc.set(3, colors[1]);
            let inst = Instance::subset(g.clone(), 3, req).unwrap().with_precoloring(pc).unwrap();
            let (cg, vs) = palettes(&inst);
            let out = drop_extension(&inst, &cg, &vs).unwrap();
            assert!(out.checks.iter().all(|c| c.passed()), "{:?}", out.checks);
            let big = &out.instance;
            assert!(!big.has_precoloring());
            let expect = brute_force_solve(&inst, &cfg).unwrap();
            let got = solve_subset_rainbow(big, &cfg).unwrap();
            assert_eq!(got.is_some(), expect.is_some());
            if let Some(sol) = expect {
                let lifted = out.trace.lift(&sol).unwrap();
                check_solution(big, &big.request_pairs(), &lifted).unwrap();
            }
            if let Some(sol) = got {
                let inner = out.trace.restrict(&sol).unwrap();
                check_solution(&inst, &inst.request_pairs(), &inner).unwrap();
            }
        }
    }
}
