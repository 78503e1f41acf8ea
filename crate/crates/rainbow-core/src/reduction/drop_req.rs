//! Removes the request set: pairs outside `S` are covered by bicliques of the
//! complement of `(V, S)`, and each biclique gets a gadget that joins its two
//! sides by a rainbow path.

use crate::biclique::{ceil_log2, cover_complement_colored, Biclique, CoverOptions};
use crate::config::Config;
use crate::error::{ensure, Error, Result};
use crate::exact::propagation_search;
use crate::graph::{Graph, GraphBuilder, Vertex};
use crate::instance::{Color, Coloring, Instance, PartialColoring};
use crate::verify::is_rainbow_connected;

use super::{Check, EmbedTrace, Palette};

#[derive(Clone, Debug)]
pub struct DropReqOutput {
    pub instance: Instance,
    pub cover: Vec<Biclique>,
    pub trace: EmbedTrace,
    pub checks: Vec<Check>,
}

fn request_graph(inst: &Instance, extra: usize) -> Result<Graph> {
    Graph::new(inst.graph.n() + extra, inst.request_pairs().iter().copied())
}

fn check_source(inst: &Instance, vcolor_s: &Palette) -> Result<()> {
    ensure!(!inst.has_precoloring(), Error::usage("instance still has a precoloring"));
    vcolor_s.check(inst.graph.n(), &inst.request_pairs(), "request-graph coloring")
}

/// Two colors: one vertex `w_i` per biclique, joined to both sides, plus the
/// triangle `t1 t2 t3`.
pub fn drop_requests_2(inst: &Instance, vcolor_s: &Palette, opts: &CoverOptions) -> Result<DropReqOutput> {
    ensure!(inst.k == 2, Error::usage("this construction is for two colors"));
    check_source(inst, vcolor_s)?;
    let g = &inst.graph;
    let (n, m) = (g.n(), g.m());
    let cover = cover_complement_colored(&request_graph(inst, 0)?, &vcolor_s.colors, opts)?.bicliques;
    let q = cover.len();
    let w = |i: usize| n + i;
    let t = |i: usize| n + q + i - 1;

    let mut gb = GraphBuilder::from_graph(g);
    gb.add_vertices(q + 3);
    let mut added: Vec<Color> = Vec::new();
    let mut edge = |gb: &mut GraphBuilder, a: Vertex, b: Vertex, c: Color| {
        gb.add_edge(a, b);
        added.push(c);
    };
    for i in 0..q {
        for j in i + 1..q {
            edge(&mut gb, w(i), w(j), 1);
        }
    }
    edge(&mut gb, t(1), t(2), 1);
    edge(&mut gb, t(1), t(3), 1);
    edge(&mut gb, t(2), t(3), 1);
    for i in 0..q {
        edge(&mut gb, t(2), w(i), 2);
    }
    for v in 0..n {
        edge(&mut gb, t(3), v, 2);
    }
    for i in 0..q {
        edge(&mut gb, t(3), w(i), 1);
    }
    for (i, b) in cover.iter().enumerate() {
        for &u in &b.left {
            edge(&mut gb, w(i), u, 1);
        }
        for &v in &b.right {
            edge(&mut gb, w(i), v, 2);
        }
    }
    let out = Instance::rainbow(gb.build_exact()?, 2)?;
    let checks = vec![Check::new("drop-req-2 |V'| = |V| + q + 3", n + q + 3, out.graph.n())];
    let trace = EmbedTrace { inner_n: n, inner_m: m, added, perm: Vec::new() };
    Ok(DropReqOutput { instance: out, cover, trace, checks })
}

impl DropReqOutput {
    pub fn lift_witness(&self, inner: &[Color], cfg: &Config) -> Result<Coloring> {
        complete_witness(&self.instance, &self.trace, inner, cfg)
    }
}

/// Extends a source solution by the gadget coloring. When that coloring
/// leaves a pair unconnected (it does for some even `k`), the gadget edges
/// are recolored by search with the source edges held fixed.
pub fn complete_witness(out: &Instance, trace: &EmbedTrace, inner: &[Color], cfg: &Config) -> Result<Coloring> {
    let lifted = trace.lift(inner)?;
    let (g, k) = (&out.graph, out.k);
    if is_rainbow_connected(g, &lifted, k) {
        return Ok(lifted);
    }
    let mut c0 = PartialColoring::empty(g.m(), k);
    for (e, &c) in inner.iter().enumerate() {
        c0.set(e, c);
    }
    match propagation_search(g, k, &out.request_pairs(), &c0, cfg)?.0 {
        Some(c) => Ok(c),
        None => Err(Error::internal("source solution does not extend over the request gadget")),
    }
}

/// Vertex numbering of the `k >= 3` gadget.
#[derive(Clone, Copy, Debug)]
pub struct CycleLayout {
    pub n: usize,
    pub k: usize,
    pub q: usize,
}

impl CycleLayout {
    fn cycle_len(&self) -> usize {
        2 * (self.k - 2)
    }
    /// `v_{i,j}` for `0 <= j <= k-2`; `i` is 1-based.
    pub fn v(&self, i: usize, j: usize) -> Vertex {
        self.n + (i - 1) * self.cycle_len() + j
    }
    /// `w_{i,j}`, equal to `v_{i,j}` at both ends of the cycle.
    pub fn w(&self, i: usize, j: usize) -> Vertex {
        if j == 0 || j == self.k - 2 {
            self.v(i, j)
        } else {
            self.n + (i - 1) * self.cycle_len() + (self.k - 1) + (j - 1)
        }
    }
    pub fn hubs(&self) -> usize {
        ceil_log2(self.q)
    }
    pub fn a(&self, t: usize) -> Vertex {
        self.n + self.q * self.cycle_len() + (t - 1)
    }
    pub fn b(&self, t: usize) -> Vertex {
        self.n + self.q * self.cycle_len() + self.hubs() + (t - 1)
    }
    pub fn total(&self) -> usize {
        self.n + self.q * self.cycle_len() + 2 * self.hubs()
    }
}

/// Bit `t` (1-based) of the 0-based biclique number.
pub fn theta(t: usize, i: usize) -> usize {
    ((i - 1) >> (t - 1)) & 1
}

/// Portals of cycle `i` wired to the hubs of bit `t`.
fn portals(lay: &CycleLayout, i: usize, bit: usize) -> Vec<Vertex> {
    let k = lay.k;
    let idx: Vec<usize> = if k % 2 == 1 {
        vec![(k - 3) / 2, (k - 1) / 2]
    } else if bit == 1 {
        vec![(k - 2) / 2]
    } else {
        vec![(k - 4) / 2, k / 2]
    };
    let mut out: Vec<Vertex> = idx.iter().flat_map(|&j| [lay.v(i, j), lay.w(i, j)]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `k >= 3`: one cycle per biclique with the two sides attached to opposite
/// ends, and `2 ceil(log q)` hub vertices wired to the cycles by the bits of
/// the biclique number.
pub fn drop_requests_k(inst: &Instance, vcolor_s: &Palette, opts: &CoverOptions) -> Result<DropReqOutput> {
    let k = inst.k;
    ensure!(k >= 3, Error::usage("this construction needs at least 3 colors"));
    check_source(inst, vcolor_s)?;
    let g = &inst.graph;
    let (n0, m) = (g.n(), g.m());
    let s = inst.request_pairs();
    let mut touched = vec![false; n0];
    for &(u, v) in s.iter() {
        touched[u] = true;
        touched[v] = true;
    }
    let has_star = (0..n0).any(|v| g.degree(v) == 0 && !touched[v]);
    let extra = usize::from(!has_star);
    let n = n0 + extra;
    let mut vcolor = vcolor_s.colors.clone();
    vcolor.resize(n, 1);
    let cover = cover_complement_colored(&request_graph(inst, extra)?, &vcolor, opts)?.bicliques;
    let q = cover.len();
    let lay = CycleLayout { n, k, q };
    let big = k.div_ceil(2) as Color;

    let mut gb = GraphBuilder::from_graph(g);
    gb.add_vertices(lay.total() - n0);
    let mut added: Vec<Color> = Vec::new();
    let mut edge = |gb: &mut GraphBuilder, a: Vertex, b: Vertex, c: Color| {
        gb.add_edge(a, b);
        added.push(c);
    };
    for (i0, bq) in cover.iter().enumerate() {
        let i = i0 + 1;
        for j in 0..k - 2 {
            edge(&mut gb, lay.v(i, j), lay.v(i, j + 1), (j + 2) as Color);
        }
        if k > 3 {
            for j in 0..k - 2 {
                edge(&mut gb, lay.w(i, j + 1), lay.w(i, j), (k - 1 - j) as Color);
            }
        }
        for &u in &bq.left {
            edge(&mut gb, u, lay.v(i, 0), 1);
        }
        for &v in &bq.right {
            edge(&mut gb, v, lay.v(i, k - 2), k as Color);
        }
    }
    let hubs = lay.hubs();
    for t in 1..=hubs {
        for i in 1..=q {
            let bit = theta(t, i);
            let (ca, cb) = if bit == 0 { (big, big) } else { (1, k as Color) };
            for x in portals(&lay, i, bit) {
                edge(&mut gb, lay.a(t), x, ca);
                edge(&mut gb, lay.b(t), x, cb);
            }
        }
    }
    let hub_vertices: Vec<Vertex> = (1..=hubs).map(|t| lay.a(t)).chain((1..=hubs).map(|t| lay.b(t))).collect();
    for (x, &h1) in hub_vertices.iter().enumerate() {
        for &h2 in &hub_vertices[x + 1..] {
            edge(&mut gb, h1, h2, k as Color);
        }
    }
    let out = Instance::rainbow(gb.build_exact()?, k)?;

    let added_vertices = out.graph.n() - n;
    let checks = vec![
        Check::new("drop-req-k added = 2(k-1)q + 2ceil(log q)", 2 * (k - 1) * q + 2 * hubs, added_vertices),
        Check::new("drop-req-k cycle vertices = 2(k-2)q", 2 * (k - 2) * q, q * lay.cycle_len()),
        Check::new("drop-req-k hub vertices = 2ceil(log q)", 2 * hubs, out.graph.n() - n - q * lay.cycle_len()),
    ];
    let trace = EmbedTrace { inner_n: n0, inner_m: m, added, perm: Vec::new() };
    Ok(DropReqOutput { instance: out, cover, trace, checks })
}
