//! Line-oriented text formats. Vertices are 1-based on the wire.

use std::collections::HashSet;
use std::fmt::Write;

use crate::biclique::Biclique;
use crate::error::{ensure, Error, Result};
use crate::graph::{pair, Graph, Pair};
use crate::instance::{Coloring, Instance, PartialColoring, Requests};

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines().enumerate() }
    }
}

impl<'a> Iterator for Lines<'a> {
    type Item = (usize, Vec<&'a str>);

    /// Skips blank lines; yields 1-based line numbers with tokens.
    fn next(&mut self) -> Option<Self::Item> {
        for (i, line) in self.inner.by_ref() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if !toks.is_empty() {
                return Some((i + 1, toks));
            }
        }
        None
    }
}

fn num(line: usize, tok: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| Error::parse(line, format!("expected a non-negative integer, got {tok:?}")))
}

fn vertex(line: usize, tok: &str, n: usize) -> Result<usize> {
    let v = num(line, tok)?;
    ensure!(
        v >= 1 && v <= n,
        Error::parse(line, format!("vertex {v} outside 1..={n}"))
    );
    Ok(v - 1)
}

fn arity(line: usize, toks: &[&str], want: usize) -> Result<()> {
    ensure!(
        toks.len() == want,
        Error::parse(line, format!("expected {} fields, got {}", want, toks.len()))
    );
    Ok(())
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges: Vec<Pair> = Vec::new();
    let mut seen_edges: HashSet<Pair> = HashSet::new();
    let mut requests: Vec<Pair> = Vec::new();
    let mut explicit_empty = false;
    let mut precolor: Vec<(usize, Pair, usize)> = Vec::new();
    for (line, toks) in Lines::new(text) {
        let tag = toks[0];
        if tag == "c" {
            continue;
        }
        if tag == "p" {
            ensure!(header.is_none(), Error::parse(line, "second p-line"));
            arity(line, &toks, 5)?;
            ensure!(toks[1] == "rbw", Error::parse(line, "expected `p rbw n m k`"));
            let (n, m, k) = (num(line, toks[2])?, num(line, toks[3])?, num(line, toks[4])?);
            ensure!(k >= 1 && k <= 64, Error::parse(line, format!("k = {k} outside 1..=64")));
            header = Some((n, m, k));
            continue;
        }
        let Some((n, _, k)) = header else {
            return Err(Error::parse(line, format!("`{tag}` line before the p-line")));
        };
        match tag {
            "e" => {
                arity(line, &toks, 3)?;
                let (u, v) = (vertex(line, toks[1], n)?, vertex(line, toks[2], n)?);
                ensure!(u != v, Error::parse(line, "self-loop"));
                ensure!(
                    seen_edges.insert(pair(u, v)),
                    Error::parse(line, format!("duplicate edge {} {}", u + 1, v + 1))
                );
                edges.push((u, v));
            }
            "r" => {
                arity(line, &toks, 3)?;
                let (u, v) = (vertex(line, toks[1], n)?, vertex(line, toks[2], n)?);
                ensure!(u != v, Error::parse(line, "request joins a vertex to itself"));
                requests.push((u, v));
            }
            "s" => {
                ensure!(
                    toks.len() == 2 && toks[1] == "none",
                    Error::parse(line, "expected `s none`")
                );
                explicit_empty = true;
            }
            "f" => {
                arity(line, &toks, 4)?;
                let (u, v) = (vertex(line, toks[1], n)?, vertex(line, toks[2], n)?);
                let c = num(line, toks[3])?;
                ensure!(
                    c >= 1 && c <= k,
                    Error::parse(line, format!("color {c} outside 1..={k}"))
                );
                precolor.push((line, pair(u, v), c));
            }
            _ => return Err(Error::parse(line, format!("unknown line type `{tag}`"))),
        }
    }
    let (n, m, k) = header.ok_or_else(|| Error::parse(0, "missing p-line"))?;
    ensure!(
        edges.len() == m,
        Error::parse(0, format!("p-line declares {m} edges, found {}", edges.len()))
    );
    ensure!(
        !(explicit_empty && !requests.is_empty()),
        Error::parse(0, "`s none` together with r-lines")
    );
    let graph = Graph::new(n, edges)?;
    let mut pc = PartialColoring::empty(graph.m(), k);
    for (line, (u, v), c) in precolor {
        let e = graph.edge_id(u, v).ok_or_else(|| {
            Error::parse(line, format!("precolored pair {} {} is not an edge", u + 1, v + 1))
        })?;
        ensure!(pc.get(e).is_none(), Error::parse(line, "edge precolored twice"));
        pc.set(e, c as u8);
    }
    let requests = if requests.is_empty() && !explicit_empty {
        Requests::All
    } else {
        Requests::Pairs(requests)
    };
    Instance::new(graph, k, requests, Some(pc))
}

pub fn write_instance(inst: &Instance) -> String {
    let g = &inst.graph;
    let mut out = String::new();
    writeln!(out, "p rbw {} {} {}", g.n(), g.m(), inst.k).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    match &inst.requests {
        Requests::All => {}
        Requests::Pairs(p) if p.is_empty() => out.push_str("s none\n"),
        Requests::Pairs(p) => {
            for &(u, v) in p {
                writeln!(out, "r {} {}", u + 1, v + 1).unwrap();
            }
        }
    }
    for e in inst.precoloring.domain() {
        let (u, v) = g.edge(e);
        writeln!(out, "f {} {} {}", u + 1, v + 1, inst.precoloring.get(e).unwrap()).unwrap();
    }
    out
}

/// Parses a coloring of `g`; `NULL` yields `None`. Every edge must be listed once.
pub fn parse_coloring(text: &str, g: &Graph, k: usize) -> Result<Option<Coloring>> {
    let mut colors: Coloring = vec![0; g.m()];
    let mut count = 0;
    for (line, toks) in Lines::new(text) {
        if toks[0] == "c" {
            continue;
        }
        if toks.len() == 1 && toks[0] == "NULL" {
            ensure!(count == 0, Error::parse(line, "NULL after colored edges"));
            return Ok(None);
        }
        arity(line, &toks, 3)?;
        let (u, v) = (vertex(line, toks[0], g.n())?, vertex(line, toks[1], g.n())?);
        let c = num(line, toks[2])?;
        ensure!(c >= 1 && c <= k, Error::parse(line, format!("color {c} outside 1..={k}")));
        let e = g
            .edge_id(u, v)
            .ok_or_else(|| Error::parse(line, format!("{} {} is not an edge", u + 1, v + 1)))?;
        ensure!(colors[e] == 0, Error::parse(line, "edge colored twice"));
        colors[e] = c as u8;
        count += 1;
    }
    ensure!(
        count == g.m(),
        Error::parse(0, format!("coloring lists {count} of {} edges", g.m()))
    );
    Ok(Some(colors))
}

pub fn write_coloring(g: &Graph, c: Option<&[u8]>) -> String {
    let Some(c) = c else {
        return "NULL\n".to_string();
    };
    let mut out = String::new();
    for (e, (u, v)) in g.edges().enumerate() {
        writeln!(out, "{} {} {}", u + 1, v + 1, c[e]).unwrap();
    }
    out
}

pub fn parse_cover(text: &str) -> Result<Vec<Biclique>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        let rest = t
            .strip_prefix("L:")
            .ok_or_else(|| Error::parse(line_no, "expected `L: ... R: ...`"))?;
        let (l, r) = rest
            .split_once("R:")
            .ok_or_else(|| Error::parse(line_no, "missing `R:`"))?;
        let side = |s: &str| -> Result<Vec<usize>> {
            s.split_whitespace()
                .map(|tok| {
                    let v = num(line_no, tok)?;
                    ensure!(v >= 1, Error::parse(line_no, "vertices are 1-based"));
                    Ok(v - 1)
                })
                .collect()
        };
        out.push(Biclique::new(side(l)?, side(r)?));
    }
    Ok(out)
}

pub fn write_cover(cover: &[Biclique]) -> String {
    let mut out = String::new();
    for b in cover {
        out.push_str("L:");
        for &v in &b.left {
            write!(out, " {}", v + 1).unwrap();
        }
        out.push_str("  R:");
        for &v in &b.right {
            write!(out, " {}", v + 1).unwrap();
        }
        out.push('\n');
    }
    out
}
