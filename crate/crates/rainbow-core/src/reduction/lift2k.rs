//! From two precolored colors to `k >= 3`: every vertex `v` gets a pendant
//! gadget `v - v1a, v - v1b, v1a - v2, v1b - v2, v2 - v3 - ... - v(k-1)`
//! precolored `1, 2, 3, 3, 4, ..., k`, and every edge `uv` with `u < v` adds
//! the request `{u(k-1), v}`.

use super::conflict::precoloring_conflict_graph;
use super::{Check, EmbedTrace, Palette};
use crate::error::{ensure, Error, Result};
use crate::graph::{GraphBuilder, Pair, Vertex};
use crate::instance::{Color, Instance, PartialColoring, Requests};

/// Gadget vertex numbering: `v1a`, `v1b`, then `v2 .. v(k-1)`.
#[derive(Clone, Copy, Debug)]
pub struct Gadget {
    pub n: usize,
    pub k: usize,
}

impl Gadget {
    pub fn v1a(&self, v: Vertex) -> Vertex {
        self.n + v * self.k
    }
    pub fn v1b(&self, v: Vertex) -> Vertex {
        self.n + v * self.k + 1
    }
    /// `v_i` for `2 <= i <= k - 1`.
    pub fn vi(&self, v: Vertex, i: usize) -> Vertex {
        self.n + v * self.k + i
    }
}

#[derive(Clone, Debug)]
pub struct LiftOutput {
    pub instance: Instance,
    /// `(p + 1)`-coloring of `(V', S')`.
    pub vcolor_s: Palette,
    /// `(l + 2q + 5)`-coloring of the precoloring conflict graph.
    pub cg: Palette,
    pub trace: EmbedTrace,
    pub checks: Vec<Check>,
}

fn all_pairs(inst: &Instance) -> Vec<Pair> {
    let mut p: Vec<Pair> = inst.graph.edges().collect();
    p.extend(inst.request_pairs().iter().copied());
    p
}

pub fn lift_2_to_k(
    inst: &Instance,
    k: usize,
    vcolor_s: &Palette,
    vcolor_es: &Palette,
    cg: &Palette,
) -> Result<LiftOutput> {
    ensure!(k >= 3, Error::usage(format!("target color count {k} must be at least 3")));
    ensure!(inst.k == 2, Error::usage("source instance must use two colors"));
    let g = &inst.graph;
    let (n, m) = (g.n(), g.m());
    let s = inst.request_pairs();
    vcolor_s.check(n, &s, "request-graph coloring")?;
    vcolor_es.check(n, &all_pairs(inst), "edge-and-request coloring")?;
    let (cgraph, dom) = precoloring_conflict_graph(inst);
    let cg_pairs: Vec<Pair> = cgraph.edges().collect();
    cg.check(dom.len(), &cg_pairs, "conflict-graph coloring")?;

    let gad = Gadget { n, k };
    let mut gb = GraphBuilder::from_graph(g);
    gb.add_vertices(k * n);
    let mut added: Vec<Color> = Vec::with_capacity((k + 1) * n);
    let (l, q) = (cg.count, vcolor_es.count);
    let mut cg_added = Vec::with_capacity((k + 1) * n);
    for v in 0..n {
        let h = vcolor_es.colors[v];
        let (a, b, v2) = (gad.v1a(v), gad.v1b(v), gad.vi(v, 2));
        gb.add_edge(v, a);
        gb.add_edge(v, b);
        gb.add_edge(a, v2);
        gb.add_edge(b, v2);
        added.extend_from_slice(&[1, 2, 3, 3]);
        cg_added.extend_from_slice(&[l + 2 * h - 1, l + 2 * h, l + 2 * q + 1, l + 2 * q + 2]);
        for i in 2..k - 1 {
            gb.add_edge(gad.vi(v, i), gad.vi(v, i + 1));
            added.push((i + 2) as Color);
            cg_added.push(l + 2 * q + 3 + (i - 2) % 3);
        }
    }
    let graph = gb.build_exact()?;

    let mut requests: Vec<Pair> = s.to_vec();
    for (u, v) in g.edges() {
        requests.push((gad.vi(u, k - 1), v));
    }
    let mut pc = PartialColoring::empty(graph.m(), k);
    for e in inst.precoloring.domain() {
        pc.set(e, inst.precoloring.get(e).expect("domain edge is colored"));
    }
    for (i, &c) in added.iter().enumerate() {
        pc.set(m + i, c);
    }
    let out = Instance::new(graph, k, Requests::Pairs(requests), Some(pc))?;

    let mut vs = vcolor_s.colors.clone();
    vs.resize(out.graph.n(), vcolor_s.count + 1);
    let vcolor_s2 = Palette::new(vs, vcolor_s.count + 1);
    vcolor_s2.check(out.graph.n(), &out.request_pairs(), "lifted request-graph coloring")
        .map_err(|e| Error::internal(e.to_string()))?;
    // precolored edges keep ascending order: old domain first, then gadgets
    let mut cg_colors = cg.colors.clone();
    cg_colors.extend(cg_added);
    let cg2 = Palette::new(cg_colors, l + 2 * q + 5);
    let (cgraph2, dom2) = precoloring_conflict_graph(&out);
    let cg2_pairs: Vec<Pair> = cgraph2.edges().collect();
    cg2.check(dom2.len(), &cg2_pairs, "lifted conflict-graph coloring")
        .map_err(|e| Error::internal(e.to_string()))?;

    let checks = vec![
        Check::new("lift-k |V'| = (k+1)|V|", (k + 1) * n, out.graph.n()),
        Check::new("lift-k |E'| = |E| + (k+1)|V|", m + (k + 1) * n, out.graph.m()),
        Check::new("lift-k |S'| = |S| + |E|", s.len() + m, out.request_pairs().len()),
        Check::new(
            "lift-k |Dom'| = |Dom| + (k+1)|V|",
            inst.precoloring.dom_size() + (k + 1) * n,
            out.precoloring.dom_size(),
        ),
    ];
    let trace = EmbedTrace { inner_n: n, inner_m: m, added, perm: Vec::new() };
    Ok(LiftOutput { instance: out, vcolor_s: vcolor_s2, cg: cg2, trace, checks })
}
