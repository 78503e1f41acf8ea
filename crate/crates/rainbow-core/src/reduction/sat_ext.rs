//! Compression of a normalized 3-CNF formula into a precolored subset
//! instance with two colors on `O(n^{2/3})` vertices.
//!
//! The graph has a variable part (middle set `M` plus layers of upper and
//! lower vertices, one 2-path `u - m - l` per variable) and a clause part
//! (clusters with vertex sets `A`, `B`, `C`). Color `T = 1` and `F = 2`.

use std::collections::HashMap;
use std::fmt;

use super::cnf::{lit_value, var, Cnf};
use super::conflict::precoloring_conflict_graph;
use crate::error::{ensure, Error, Result};
use crate::graph::{greedy_proper_coloring, EdgeId, Graph, GraphBuilder, Pair, Vertex};
use crate::instance::{Color, Coloring, Instance, PartialColoring, Requests};

pub const T: Color = 1;
pub const F: Color = 2;

fn color_of(b: bool) -> Color {
    if b {
        T
    } else {
        F
    }
}

/// Smallest `r` with `r^3 >= x`.
pub fn ceil_cbrt(x: u128) -> u128 {
    let mut r = (x as f64).cbrt() as u128;
    while r * r * r < x {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) * (r - 1) >= x {
        r -= 1;
    }
    r
}

/// `(ceil(n^{1/3}), ceil(n^{2/3}))` in exact integer arithmetic.
pub fn scale(n: usize) -> (usize, usize) {
    let n = n as u128;
    (ceil_cbrt(n) as usize, ceil_cbrt(n * n) as usize)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexName {
    M(usize),
    U(usize, usize),
    L(usize, usize),
    A(usize, usize),
    B(usize, usize, usize),
    C(usize, usize),
}

impl fmt::Display for VertexName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VertexName::M(j) => write!(f, "m{j}"),
            VertexName::U(i, j) => write!(f, "u{i}.{j}"),
            VertexName::L(i, j) => write!(f, "l{i}.{j}"),
            VertexName::A(i, j) => write!(f, "a{i}.{j}"),
            VertexName::B(i, j, k) => write!(f, "b{i}.{j}.{k}"),
            VertexName::C(i, j) => write!(f, "c{i}.{j}"),
        }
    }
}

/// Why a pair was requested.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    /// `{u, l}` closing the 2-path of a variable.
    Var(usize),
    /// `{a, c}` of a clause.
    Clause(usize),
    /// `{mid(x), a}` for literal `k` of a clause.
    MidA(usize, usize),
    /// `{b^k, u}` or `{b^k, l}` for literal `k` of a clause.
    Literal(usize, usize),
}

/// Bookkeeping of one compression. All indices in `mid` are 0-based
/// positions in `M`; `lay`, `up`, `low`, `cluster`, `gamma`, `g` are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatTrace {
    pub formula: Cnf,
    pub a: usize,
    pub b: usize,
    pub alpha: Vec<usize>,
    pub mid: Vec<usize>,
    pub lay: Vec<usize>,
    pub up: Vec<usize>,
    pub low: Vec<usize>,
    /// Upper edge `u - mid` and lower edge `mid - l` per variable.
    pub var_edges: Vec<(EdgeId, EdgeId)>,
    pub cluster: Vec<usize>,
    pub gamma: Vec<usize>,
    pub g: Vec<usize>,
    /// Per clause literal: edge `a - b^k` and edge `b^k - mid(x)`.
    pub lit_edges: Vec<[(EdgeId, EdgeId); 3]>,
    /// `n_i`, the number of in-cluster colors of each cluster.
    pub cluster_sizes: Vec<usize>,
    /// Edge count of the built graph.
    pub edges: usize,
}

/// Vertex numbering derived from the trace dimensions.
#[derive(Clone, Debug)]
pub struct Layout {
    pub a: usize,
    pub w: usize,
    pub mids: usize,
    cluster_base: Vec<usize>,
    cluster_sizes: Vec<usize>,
    pub n: usize,
}

impl Layout {
    fn new(a: usize, b: usize, cluster_sizes: &[usize]) -> Layout {
        let w = a + 3;
        let mids = b + 9;
        let mut base = mids + 2 * a * w;
        let mut cluster_base = Vec::with_capacity(cluster_sizes.len());
        for &ni in cluster_sizes {
            cluster_base.push(base);
            base += a + 4 * ni;
        }
        Layout { a, w, mids, cluster_base, cluster_sizes: cluster_sizes.to_vec(), n: base }
    }

    pub fn m(&self, j: usize) -> Vertex {
        j
    }
    pub fn u(&self, i: usize, j: usize) -> Vertex {
        self.mids + (i - 1) * 2 * self.w + (j - 1)
    }
    pub fn l(&self, i: usize, j: usize) -> Vertex {
        self.mids + (i - 1) * 2 * self.w + self.w + (j - 1)
    }
    pub fn a_vertex(&self, i: usize, j: usize) -> Vertex {
        self.cluster_base[i - 1] + (j - 1)
    }
    pub fn b_vertex(&self, i: usize, j: usize, k: usize) -> Vertex {
        self.cluster_base[i - 1] + self.a + (j - 1) * 3 + (k - 1)
    }
    pub fn c_vertex(&self, i: usize, j: usize) -> Vertex {
        self.cluster_base[i - 1] + self.a + 3 * self.cluster_sizes[i - 1] + (j - 1)
    }

    pub fn name(&self, v: Vertex) -> VertexName {
        if v < self.mids {
            return VertexName::M(v + 1);
        }
        let layers_end = self.mids + 2 * self.a * self.w;
        if v < layers_end {
            let off = v - self.mids;
            let (i, r) = (off / (2 * self.w) + 1, off % (2 * self.w));
            return if r < self.w {
                VertexName::U(i, r + 1)
            } else {
                VertexName::L(i, r - self.w + 1)
            };
        }
        let i = self.cluster_base.partition_point(|&b| b <= v);
        let off = v - self.cluster_base[i - 1];
        let ni = self.cluster_sizes[i - 1];
        if off < self.a {
            VertexName::A(i, off + 1)
        } else if off < self.a + 3 * ni {
            let r = off - self.a;
            VertexName::B(i, r / 3 + 1, r % 3 + 1)
        } else {
            VertexName::C(i, off - self.a - 3 * ni + 1)
        }
    }
}

/// Splits each color class (ascending color, ascending member) into chunks of
/// at most `cap`. Returns the chunk number and the 1-based position inside it.
fn split_classes(color: &[usize], cap: usize) -> (Vec<usize>, Vec<usize>, usize) {
    let p = color.iter().copied().max().unwrap_or(0);
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); p + 1];
    for (v, &c) in color.iter().enumerate() {
        classes[c].push(v);
    }
    let mut chunk = vec![0; color.len()];
    let mut pos = vec![0; color.len()];
    let mut count = 0;
    for class in classes.iter().filter(|c| !c.is_empty()) {
        for part in class.chunks(cap.max(1)) {
            count += 1;
            for (t, &v) in part.iter().enumerate() {
                chunk[v] = count;
                pos[v] = t + 1;
            }
        }
    }
    (chunk, pos, count)
}

fn clause_vars(c: &[i32]) -> [usize; 3] {
    [var(c[0]), var(c[1]), var(c[2])]
}

/// Builds the two-color extension instance of a normalized formula.
pub fn sat_to_sr2c_ext(phi: &Cnf) -> Result<(Instance, SatTrace)> {
    if let Some(why) = phi.tovey_violation() {
        return Err(Error::usage(format!("formula is not normalized: {why}")));
    }
    let n = phi.nvars;
    let (a, b) = scale(n);
    let clauses: Vec<[usize; 3]> = phi.clauses.iter().map(|c| clause_vars(c)).collect();

    // variable part
    let mut gv_pairs = Vec::new();
    for c in &clauses {
        for i in 0..3 {
            for j in i + 1..3 {
                gv_pairs.push((c[i], c[j]));
            }
        }
    }
    let gv = Graph::new(n, gv_pairs)?;
    ensure!(gv.max_degree() <= 8, Error::internal("variable conflict degree above 8"));
    let alpha = greedy_proper_coloring(&gv);
    let (group, lay, groups) = split_classes(&alpha, a);
    ensure!(groups <= b + 9, Error::internal("more groups than middle vertices"));
    let mid: Vec<usize> = group.iter().map(|&g| g - 1).collect();
    let w = a + 3;
    let mut up = vec![0; n];
    let mut low = vec![0; n];
    for i in 1..=a {
        let mut members: Vec<usize> = (0..n).filter(|&x| lay[x] == i).collect();
        members.sort_by_key(|&x| mid[x]);
        ensure!(members.len() <= w * w, Error::internal("layer too large for its grid"));
        for (t, &x) in members.iter().enumerate() {
            up[x] = t / w + 1;
            low[x] = t % w + 1;
        }
    }

    // clause part: clusters
    let m = clauses.len();
    let mut by_mid: Vec<Vec<usize>> = vec![Vec::new(); b + 9];
    for (j, c) in clauses.iter().enumerate() {
        for &x in c {
            by_mid[mid[x]].push(j);
        }
    }
    let mut gc_pairs = Vec::new();
    for list in &by_mid {
        for (s, &c1) in list.iter().enumerate() {
            for &c2 in &list[s + 1..] {
                if c1 != c2 {
                    gc_pairs.push((c1, c2));
                }
            }
        }
    }
    let gc = Graph::new(m, gc_pairs)?;
    ensure!(gc.max_degree() <= 12 * a, Error::internal("clause conflict degree above 12a"));
    let beta = greedy_proper_coloring(&gc);
    let (cluster, _, s) = split_classes(&beta, b);

    // in-cluster conflict graphs
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); s + 1];
    for j in 0..m {
        members[cluster[j]].push(j);
    }
    let mut by_up: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    let mut by_low: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for x in 0..n {
        by_up.entry((lay[x], up[x])).or_default().push(x);
        by_low.entry((lay[x], low[x])).or_default().push(x);
    }
    let mut gamma = vec![0; m];
    let mut gpos = vec![0; m];
    let mut cluster_sizes = vec![0; s];
    for i in 1..=s {
        let list = &members[i];
        let local: HashMap<usize, usize> = list.iter().enumerate().map(|(t, &j)| (j, t)).collect();
        let mut cl_by_mid: HashMap<usize, Vec<usize>> = HashMap::new();
        for &j in list {
            for &x in &clauses[j] {
                cl_by_mid.entry(mid[x]).or_default().push(j);
            }
        }
        let mut pairs = Vec::new();
        for &c1 in list {
            for &x1 in &clauses[c1] {
                for table in [&by_up, &by_low] {
                    let key = if std::ptr::eq(table, &by_up) {
                        (lay[x1], up[x1])
                    } else {
                        (lay[x1], low[x1])
                    };
                    for &x3 in &table[&key] {
                        for &c2 in cl_by_mid.get(&mid[x3]).map(|v| v.as_slice()).unwrap_or(&[]) {
                            if c2 != c1 {
                                pairs.push((local[&c1], local[&c2]));
                            }
                        }
                    }
                }
            }
        }
        let gi = Graph::new(list.len(), pairs)?;
        let col = greedy_proper_coloring(&gi);
        let (chunk, pos, count) = split_classes(&col, a);
        for (t, &j) in list.iter().enumerate() {
            gamma[j] = chunk[t];
            gpos[j] = pos[t];
        }
        cluster_sizes[i - 1] = count;
    }

    let layout = Layout::new(a, b, &cluster_sizes);
    let mut gb = GraphBuilder::new(layout.n);
    let mut var_edges = Vec::with_capacity(n);
    for x in 0..n {
        let eu = gb.add_edge(layout.u(lay[x], up[x]), layout.m(mid[x]));
        let el = gb.add_edge(layout.m(mid[x]), layout.l(lay[x], low[x]));
        var_edges.push((eu, el));
    }
    let mut precolored = Vec::new();
    for (i0, &ni) in cluster_sizes.iter().enumerate() {
        for j in 1..=ni {
            for k in 1..=3 {
                precolored
                    .push(gb.add_edge(layout.c_vertex(i0 + 1, j), layout.b_vertex(i0 + 1, j, k)));
            }
        }
    }
    let mut lit_edges = vec![[(0, 0); 3]; m];
    for j in 0..m {
        for k in 1..=3 {
            lit_edges[j][k - 1].0 = gb.add_edge(
                layout.a_vertex(cluster[j], gpos[j]),
                layout.b_vertex(cluster[j], gamma[j], k),
            );
        }
    }
    for (j, c) in clauses.iter().enumerate() {
        for (k0, &x) in c.iter().enumerate() {
            lit_edges[j][k0].1 =
                gb.add_edge(layout.b_vertex(cluster[j], gamma[j], k0 + 1), layout.m(mid[x]));
        }
    }
    let graph = gb.build_exact()?;

    let trace = SatTrace {
        formula: phi.clone(),
        a,
        b,
        alpha,
        mid,
        lay,
        up,
        low,
        var_edges,
        cluster,
        gamma,
        g: gpos,
        lit_edges,
        cluster_sizes,
        edges: graph.m(),
    };
    let requests: Vec<Pair> = trace.requests_with_origin().into_iter().map(|(p, _)| p).collect();
    let mut pc = PartialColoring::empty(graph.m(), 2);
    for e in precolored {
        pc.set(e, F);
    }
    let inst = Instance::new(graph, 2, Requests::Pairs(requests), Some(pc))?;
    trace.audit(&inst)?;
    Ok((inst, trace))
}

impl SatTrace {
    pub fn layout(&self) -> Layout {
        Layout::new(self.a, self.b, &self.cluster_sizes)
    }

    pub fn nvars(&self) -> usize {
        self.mid.len()
    }

    pub fn vertex_name(&self, v: Vertex) -> VertexName {
        self.layout().name(v)
    }

    fn clause(&self, j: usize) -> &[i32] {
        &self.formula.clauses[j]
    }

    /// Every request in construction order with its origin.
    pub fn requests_with_origin(&self) -> Vec<(Pair, Origin)> {
        let lo = self.layout();
        let mut out = Vec::new();
        let p = |u: Vertex, v: Vertex| crate::graph::pair(u, v);
        for x in 0..self.nvars() {
            out.push((
                p(lo.u(self.lay[x], self.up[x]), lo.l(self.lay[x], self.low[x])),
                Origin::Var(x),
            ));
        }
        for j in 0..self.cluster.len() {
            let (i, gm, g) = (self.cluster[j], self.gamma[j], self.g[j]);
            let aj = lo.a_vertex(i, g);
            out.push((p(aj, lo.c_vertex(i, gm)), Origin::Clause(j)));
            for (k0, &l) in self.clause(j).iter().enumerate() {
                let x = var(l);
                out.push((p(lo.m(self.mid[x]), aj), Origin::MidA(j, k0 + 1)));
                let bk = lo.b_vertex(i, gm, k0 + 1);
                let end = if l > 0 {
                    lo.u(self.lay[x], self.up[x])
                } else {
                    lo.l(self.lay[x], self.low[x])
                };
                out.push((p(bk, end), Origin::Literal(j, k0 + 1)));
            }
        }
        out
    }

    /// The vertex 4-coloring of `(V, E ∪ S)`: `U ∪ A`, `M`, `B`, `L ∪ C`.
    pub fn color4(&self) -> Vec<usize> {
        let lo = self.layout();
        (0..lo.n)
            .map(|v| match lo.name(v) {
                VertexName::U(..) | VertexName::A(..) => 1,
                VertexName::M(_) => 2,
                VertexName::B(..) => 3,
                VertexName::L(..) | VertexName::C(..) => 4,
            })
            .collect()
    }

    /// Coloring of the precolored edges (ascending edge order): distinct
    /// colors `1..=3 n_i` inside each cluster.
    pub fn cg_coloring(&self) -> Vec<usize> {
        self.cluster_sizes.iter().flat_map(|&ni| 1..=3 * ni).collect()
    }

    /// The coloring that encodes a satisfying assignment.
    pub fn lift(&self, xi: &[bool]) -> Result<Coloring> {
        ensure!(xi.len() == self.nvars(), Error::usage("assignment length mismatch"));
        let mut c = vec![F; self.edges];
        for (x, &(eu, el)) in self.var_edges.iter().enumerate() {
            c[eu] = color_of(xi[x]);
            c[el] = color_of(!xi[x]);
        }
        for (j, edges) in self.lit_edges.iter().enumerate() {
            for (k0, &(eab, ebm)) in edges.iter().enumerate() {
                let v = lit_value(self.clause(j)[k0], xi);
                c[eab] = color_of(v);
                c[ebm] = color_of(!v);
            }
        }
        Ok(c)
    }

    /// Reads the assignment off the upper variable edges.
    pub fn extract(&self, c: &[Color]) -> Result<Vec<bool>> {
        ensure!(
            self.var_edges.iter().all(|&(eu, _)| eu < c.len()),
            Error::usage("coloring too short for this trace")
        );
        Ok(self.var_edges.iter().map(|&(eu, _)| c[eu] == T).collect())
    }

    /// Asserts the structural properties of the construction on `inst`.
    pub fn audit(&self, inst: &Instance) -> Result<()> {
        let g = &inst.graph;
        let lo = self.layout();
        let n = self.nvars();
        let a = self.a;
        let w = lo.w;
        let bad = |what: &str| Error::internal(format!("compression audit: {what}"));
        ensure!(g.n() == lo.n, bad("vertex count"));

        // P1
        for j in 0..self.cluster.len() {
            let mut mids: Vec<usize> =
                self.clause(j).iter().map(|&l| self.mid[var(l)]).collect();
            mids.sort_unstable();
            mids.dedup();
            ensure!(mids.len() == 3, bad("P1: clause variables share a middle vertex"));
        }
        // P2 and injectivity of the layer grids
        let mut seen_mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut seen_cell: HashMap<(usize, usize, usize), usize> = HashMap::new();
        for x in 0..n {
            ensure!(self.lay[x] >= 1 && self.lay[x] <= a, bad("layer out of range"));
            ensure!(self.up[x] <= w && self.low[x] <= w, bad("grid cell out of range"));
            ensure!(
                seen_mid.insert((self.lay[x], self.mid[x]), x).is_none(),
                bad("P2: layer variables share a middle vertex")
            );
            ensure!(
                seen_cell.insert((self.lay[x], self.up[x], self.low[x]), x).is_none(),
                bad("layer grid map is not injective")
            );
        }
        // P3 and P4
        let mut var_edge_ids: Vec<EdgeId> =
            self.var_edges.iter().flat_map(|&(u, l)| [u, l]).collect();
        var_edge_ids.sort_unstable();
        var_edge_ids.dedup();
        ensure!(var_edge_ids.len() == 2 * n, bad("P4: variable paths share an edge"));
        for x in 0..n {
            let u = lo.u(self.lay[x], self.up[x]);
            let l = lo.l(self.lay[x], self.low[x]);
            let common = g.common_neighbors(u, l);
            ensure!(common == vec![lo.m(self.mid[x])], bad("P3: variable pair has another 2-path"));
        }
        // P5
        for j in 0..self.cluster.len() {
            let (i, gm) = (self.cluster[j], self.gamma[j]);
            let common = g.common_neighbors(lo.a_vertex(i, self.g[j]), lo.c_vertex(i, gm));
            let want: Vec<Vertex> = (1..=3).map(|k| lo.b_vertex(i, gm, k)).collect();
            ensure!(common == want, bad("P5: clause pair does not have exactly three 2-paths"));
        }
        // P6: every edge between the parts comes from exactly one literal
        let mut cross = 0;
        for (u, v) in g.edges() {
            let vu = matches!(lo.name(u), VertexName::M(_));
            let vv = matches!(lo.name(v), VertexName::B(..));
            if vu && vv {
                cross += 1;
            }
        }
        ensure!(cross == 3 * self.cluster.len(), bad("P6: cross edge count"));

        // counts
        ensure!(lo.mids == self.b + 9, bad("middle set size"));
        ensure!(g.m() == 2 * n + 3 * self.cluster_sizes.iter().sum::<usize>() + 6 * self.cluster.len(),
            bad("edge count"));
        ensure!(
            inst.precoloring.dom_size() == 3 * self.cluster_sizes.iter().sum::<usize>(),
            bad("precolored edge count")
        );

        // degrees
        let s_pairs = inst.request_pairs();
        let mut deg_s = vec![0usize; g.n()];
        for &(u, v) in s_pairs.iter() {
            deg_s[u] += 1;
            deg_s[v] += 1;
        }
        for v in 0..g.n() {
            let (dg, ds) = (g.degree(v), deg_s[v]);
            let ok = match lo.name(v) {
                VertexName::U(..) | VertexName::L(..) => dg <= w && ds <= 5 * w,
                VertexName::M(_) => dg <= 6 * a && ds <= 4 * a,
                VertexName::A(i, _) => {
                    let ni = self.cluster_sizes[i - 1];
                    dg <= 3 * ni && ds <= 4 * ni
                }
                VertexName::B(..) => dg <= 2 * a + 1 && ds <= a,
                VertexName::C(..) => dg == 3 && ds <= a,
            };
            ensure!(ok, bad(&format!("degree bound at {}", lo.name(v))));
        }

        // colorings
        let c4 = self.color4();
        let mut all: Vec<Pair> = g.edges().collect();
        all.extend(s_pairs.iter().copied());
        ensure!(
            crate::graph::is_proper_for_pairs(g.n(), &all, &c4),
            bad("4-coloring of (V, E + S) is not proper")
        );
        let (cg, _) = precoloring_conflict_graph(inst);
        ensure!(
            crate::graph::is_proper_coloring(&cg, &self.cg_coloring()),
            bad("conflict graph coloring is not proper")
        );
        Ok(())
    }
}
