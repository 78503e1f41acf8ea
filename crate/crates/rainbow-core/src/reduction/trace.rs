//! Text form of stage traces: a `stage <name>` line opens each stage and
//! `map <kind> ...` records follow. Variables, clauses, vertices and edges
//! are 1-based on the wire. Grammar in `docs/formats.md`.

use std::fmt::Write as _;

use super::cnf::{Cnf, Lit};
use super::drop_req::complete_witness;
use super::sat_ext::SatTrace;
use super::tovey::{Source, ToveyTrace};
use super::EmbedTrace;
use crate::config::Config;
use crate::error::{ensure, Error, Result};
use crate::instance::{Color, Coloring, Instance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StageTrace {
    Tovey(ToveyTrace),
    SatExt(SatTrace),
    LiftK(EmbedTrace),
    DropExt(EmbedTrace),
    DropReq(EmbedTrace),
}

impl StageTrace {
    pub fn name(&self) -> &'static str {
        match self {
            StageTrace::Tovey(_) => "tovey",
            StageTrace::SatExt(_) => "sat-ext",
            StageTrace::LiftK(_) => "lift-k",
            StageTrace::DropExt(_) => "drop-ext",
            StageTrace::DropReq(_) => "drop-req",
        }
    }

    pub fn embed(&self) -> Option<&EmbedTrace> {
        match self {
            StageTrace::LiftK(t) | StageTrace::DropExt(t) | StageTrace::DropReq(t) => Some(t),
            _ => None,
        }
    }
}

/// The stages of one compilation, innermost first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub stages: Vec<StageTrace>,
}

impl Trace {
    pub fn sat(&self) -> Option<&SatTrace> {
        self.stages.iter().find_map(|s| match s {
            StageTrace::SatExt(t) => Some(t),
            _ => None,
        })
    }

    pub fn tovey(&self) -> Option<&ToveyTrace> {
        self.stages.iter().find_map(|s| match s {
            StageTrace::Tovey(t) => Some(t),
            _ => None,
        })
    }

    pub fn embeds(&self) -> impl DoubleEndedIterator<Item = &EmbedTrace> {
        self.stages.iter().filter_map(StageTrace::embed)
    }

    /// Maps a model of the source formula to a coloring of the final stage.
    pub fn lift(&self, xi: &[bool]) -> Result<Coloring> {
        let sat = self.sat().ok_or_else(|| Error::usage("trace has no compression stage"))?;
        let xi = match self.tovey() {
            Some(t) => t.lift(xi)?,
            None => xi.to_vec(),
        };
        let mut c = sat.lift(&xi)?;
        for e in self.embeds() {
            c = e.lift(&c)?;
        }
        Ok(c)
    }

    /// Like [`Trace::lift`], checked against the final instance `outer`. A
    /// request-removal stage at the end gets its witness completed by search
    /// when the direct lift misses a pair.
    pub fn lift_into(&self, xi: &[bool], outer: &Instance, cfg: &Config) -> Result<Coloring> {
        let Some(StageTrace::DropReq(last)) = self.stages.last() else {
            let c = self.lift(xi)?;
            ensure!(
                c.len() == outer.graph.m(),
                Error::usage("trace does not end at the given instance")
            );
            return Ok(c);
        };
        let inner = Trace { stages: self.stages[..self.stages.len() - 1].to_vec() }.lift(xi)?;
        ensure!(
            last.outer_m() == outer.graph.m() && last.inner_m == inner.len(),
            Error::usage("trace does not end at the given instance")
        );
        complete_witness(outer, last, &inner, cfg)
    }

    /// Restricts a coloring of the final stage to the compression stage.
    pub fn restrict(&self, c: &[Color]) -> Result<Coloring> {
        let mut c = c.to_vec();
        for e in self.embeds().rev() {
            c = e.restrict(&c)?;
        }
        Ok(c)
    }

    /// Reads a source assignment off a coloring of the final stage.
    pub fn extract(&self, c: &[Color]) -> Result<Vec<bool>> {
        let sat = self.sat().ok_or_else(|| Error::usage("trace has no compression stage"))?;
        let xi = sat.extract(&self.restrict(c)?)?;
        match self.tovey() {
            Some(t) => t.extract(&xi),
            None => Ok(xi),
        }
    }
}

fn write_embed(out: &mut String, t: &EmbedTrace) {
    writeln!(out, "map base {} {}", t.inner_n, t.inner_m).unwrap();
    for (i, &c) in t.added.iter().enumerate() {
        writeln!(out, "map added {} {c}", t.inner_m + i + 1).unwrap();
    }
    for (i, &e) in t.perm.iter().enumerate() {
        writeln!(out, "map perm {} {}", i + 1, e + 1).unwrap();
    }
}

fn write_tovey(out: &mut String, t: &ToveyTrace) {
    writeln!(out, "map nvars {} {}", t.rep.len(), t.source.len()).unwrap();
    for (x, &y) in t.rep.iter().enumerate() {
        writeln!(out, "map rep {} {}", x + 1, y + 1).unwrap();
    }
    for (y, s) in t.source.iter().enumerate() {
        match *s {
            Source::Copy(x) => writeln!(out, "map copy {} {}", y + 1, x + 1).unwrap(),
            Source::Fixed(b) => writeln!(out, "map fixed {} {}", y + 1, u8::from(b)).unwrap(),
        }
    }
}

fn write_sat(out: &mut String, t: &SatTrace) {
    let f = &t.formula;
    writeln!(out, "map dims {} {} {} {} {}", t.a, t.b, f.nvars, f.clauses.len(), t.edges).unwrap();
    for (i, &ni) in t.cluster_sizes.iter().enumerate() {
        writeln!(out, "map cluster {} {ni}", i + 1).unwrap();
    }
    for x in 0..t.nvars() {
        writeln!(
            out,
            "map var {} {} {} {} {} {}",
            x + 1,
            t.alpha[x],
            t.lay[x],
            t.up[x],
            t.mid[x] + 1,
            t.low[x]
        )
        .unwrap();
        let (eu, el) = t.var_edges[x];
        writeln!(out, "map var-edges {} {} {}", x + 1, eu + 1, el + 1).unwrap();
    }
    for (j, c) in f.clauses.iter().enumerate() {
        write!(out, "map clause {} {} {} {}", j + 1, t.cluster[j], t.gamma[j], t.g[j]).unwrap();
        for l in c {
            write!(out, " {l}").unwrap();
        }
        out.push('\n');
        for (k0, &(eab, ebm)) in t.lit_edges[j].iter().enumerate() {
            writeln!(out, "map lit {} {} {} {}", j + 1, k0 + 1, eab + 1, ebm + 1).unwrap();
        }
    }
}

pub fn write_trace(t: &Trace) -> String {
    let mut out = String::new();
    for s in &t.stages {
        writeln!(out, "stage {}", s.name()).unwrap();
        match s {
            StageTrace::Tovey(t) => write_tovey(&mut out, t),
            StageTrace::SatExt(t) => write_sat(&mut out, t),
            StageTrace::LiftK(t) | StageTrace::DropExt(t) | StageTrace::DropReq(t) => {
                write_embed(&mut out, t)
            }
        }
    }
    out
}

struct Rec<'a> {
    line: usize,
    kind: &'a str,
    args: Vec<&'a str>,
}

impl Rec<'_> {
    fn want(&self, n: usize) -> Result<()> {
        ensure!(
            self.args.len() == n,
            Error::parse(self.line, format!("map {} takes {n} fields, got {}", self.kind, self.args.len()))
        );
        Ok(())
    }

    fn num(&self, i: usize) -> Result<usize> {
        let tok = self.args[i];
        tok.parse::<usize>()
            .map_err(|_| Error::parse(self.line, format!("expected a non-negative integer, got {tok:?}")))
    }

    /// A 1-based index below or equal to `n`, returned 0-based.
    fn index(&self, i: usize, n: usize) -> Result<usize> {
        let v = self.num(i)?;
        ensure!(
            v >= 1 && v <= n,
            Error::parse(self.line, format!("index {v} outside 1..={n}"))
        );
        Ok(v - 1)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, msg)
    }
}

fn parse_embed(recs: &[Rec]) -> Result<EmbedTrace> {
    let first = recs.first().ok_or_else(|| Error::parse(0, "stage without records"))?;
    ensure!(first.kind == "base", first.err("stage must start with `map base`"));
    first.want(2)?;
    let (inner_n, inner_m) = (first.num(0)?, first.num(1)?);
    let mut t = EmbedTrace { inner_n, inner_m, added: Vec::new(), perm: Vec::new() };
    for r in &recs[1..] {
        match r.kind {
            "added" => {
                r.want(2)?;
                ensure!(r.num(0)? == inner_m + t.added.len() + 1, r.err("added edges out of order"));
                let c = r.num(1)?;
                ensure!((1..=255).contains(&c), r.err(format!("color {c} out of range")));
                t.added.push(c as Color);
            }
            "perm" => {
                r.want(2)?;
                ensure!(r.num(0)? == t.perm.len() + 1, r.err("perm entries out of order"));
                let e = r.index(1, usize::MAX)?;
                t.perm.push(e);
            }
            k => return Err(r.err(format!("unknown record `{k}` in an embedding stage"))),
        }
    }
    ensure!(
        t.perm.iter().all(|&e| e < t.outer_m()),
        Error::parse(0, "perm edge outside the stage")
    );
    Ok(t)
}

fn parse_tovey(recs: &[Rec]) -> Result<ToveyTrace> {
    let first = recs.first().ok_or_else(|| Error::parse(0, "stage without records"))?;
    ensure!(first.kind == "nvars", first.err("stage must start with `map nvars`"));
    first.want(2)?;
    let (ns, nt) = (first.num(0)?, first.num(1)?);
    let mut rep = vec![None; ns];
    let mut source = vec![None; nt];
    for r in &recs[1..] {
        r.want(2)?;
        match r.kind {
            "rep" => {
                let (x, y) = (r.index(0, ns)?, r.index(1, nt)?);
                ensure!(rep[x].replace(y).is_none(), r.err("variable listed twice"));
            }
            "copy" | "fixed" => {
                let y = r.index(0, nt)?;
                let s = if r.kind == "copy" {
                    Source::Copy(r.index(1, ns)?)
                } else {
                    match r.num(1)? {
                        0 => Source::Fixed(false),
                        1 => Source::Fixed(true),
                        v => return Err(r.err(format!("fixed value {v} is not 0 or 1"))),
                    }
                };
                ensure!(source[y].replace(s).is_none(), r.err("variable listed twice"));
            }
            k => return Err(r.err(format!("unknown record `{k}` in stage tovey"))),
        }
    }
    let rep: Option<Vec<usize>> = rep.into_iter().collect();
    let source: Option<Vec<Source>> = source.into_iter().collect();
    match (rep, source) {
        (Some(rep), Some(source)) => Ok(ToveyTrace { rep, source }),
        _ => Err(Error::parse(0, "tovey stage leaves a variable unmapped")),
    }
}

fn parse_sat(recs: &[Rec]) -> Result<SatTrace> {
    let first = recs.first().ok_or_else(|| Error::parse(0, "stage without records"))?;
    ensure!(first.kind == "dims", first.err("stage must start with `map dims`"));
    first.want(5)?;
    let (a, b, n, nc) = (first.num(0)?, first.num(1)?, first.num(2)?, first.num(3)?);
    let edges = first.num(4)?;
    let mut t = SatTrace {
        formula: Cnf { nvars: n, clauses: vec![Vec::new(); nc] },
        a,
        b,
        alpha: vec![0; n],
        mid: vec![0; n],
        lay: vec![0; n],
        up: vec![0; n],
        low: vec![0; n],
        var_edges: vec![(0, 0); n],
        cluster: vec![0; nc],
        gamma: vec![0; nc],
        g: vec![0; nc],
        lit_edges: vec![[(0, 0); 3]; nc],
        cluster_sizes: Vec::new(),
        edges,
    };
    let mut seen_var = vec![[false; 2]; n];
    let mut seen_lit = vec![[false; 3]; nc];
    for r in &recs[1..] {
        match r.kind {
            "cluster" => {
                r.want(2)?;
                ensure!(r.num(0)? == t.cluster_sizes.len() + 1, r.err("clusters out of order"));
                t.cluster_sizes.push(r.num(1)?);
            }
            "var" => {
                r.want(6)?;
                let x = r.index(0, n)?;
                ensure!(!seen_var[x][0], r.err("variable listed twice"));
                seen_var[x][0] = true;
                t.alpha[x] = r.num(1)?;
                t.lay[x] = r.num(2)?;
                t.up[x] = r.num(3)?;
                t.mid[x] = r.index(4, usize::MAX)?;
                t.low[x] = r.num(5)?;
            }
            "var-edges" => {
                r.want(3)?;
                let x = r.index(0, n)?;
                ensure!(!seen_var[x][1], r.err("variable listed twice"));
                seen_var[x][1] = true;
                t.var_edges[x] = (r.index(1, usize::MAX)?, r.index(2, usize::MAX)?);
            }
            "clause" => {
                ensure!(r.args.len() >= 5, r.err("clause record needs at least one literal"));
                let j = r.index(0, nc)?;
                ensure!(t.formula.clauses[j].is_empty(), r.err("clause listed twice"));
                t.cluster[j] = r.num(1)?;
                t.gamma[j] = r.num(2)?;
                t.g[j] = r.num(3)?;
                let mut lits: Vec<Lit> = Vec::new();
                for tok in &r.args[4..] {
                    let l: Lit = tok.parse().map_err(|_| r.err(format!("bad literal {tok:?}")))?;
                    ensure!(
                        l != 0 && l.unsigned_abs() as usize <= n,
                        r.err(format!("literal {l} outside the formula"))
                    );
                    lits.push(l);
                }
                t.formula.clauses[j] = lits;
            }
            "lit" => {
                r.want(4)?;
                let j = r.index(0, nc)?;
                let k0 = r.index(1, 3)?;
                ensure!(!seen_lit[j][k0], r.err("literal listed twice"));
                seen_lit[j][k0] = true;
                t.lit_edges[j][k0] = (r.index(2, usize::MAX)?, r.index(3, usize::MAX)?);
            }
            k => return Err(r.err(format!("unknown record `{k}` in stage sat-ext"))),
        }
    }
    ensure!(
        seen_var.iter().all(|s| s[0] && s[1]),
        Error::parse(0, "sat-ext stage leaves a variable unmapped")
    );
    ensure!(
        t.formula.clauses.iter().all(|c| c.len() == 3) && seen_lit.iter().all(|s| s.iter().all(|&b| b)),
        Error::parse(0, "sat-ext stage leaves a clause incomplete")
    );
    Ok(t)
}

pub fn parse_trace(text: &str) -> Result<Trace> {
    let mut groups: Vec<(usize, &str, Vec<Rec>)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let line = i + 1;
        match toks.first() {
            None | Some(&"c") => {}
            Some(&"stage") => {
                ensure!(toks.len() == 2, Error::parse(line, "expected `stage <name>`"));
                groups.push((line, toks[1], Vec::new()));
            }
            Some(&"map") => {
                ensure!(toks.len() >= 2, Error::parse(line, "expected `map <kind> ...`"));
                let g = groups
                    .last_mut()
                    .ok_or_else(|| Error::parse(line, "record before the first stage"))?;
                g.2.push(Rec { line, kind: toks[1], args: toks[2..].to_vec() });
            }
            Some(t) => return Err(Error::parse(line, format!("unknown line tag {t:?}"))),
        }
    }
    let mut stages = Vec::with_capacity(groups.len());
    for (line, name, recs) in groups {
        let with_line = |e: Error| match e {
            Error::Parse { line: 0, msg } => Error::parse(line, msg),
            e => e,
        };
        let s = match name {
            "tovey" => StageTrace::Tovey(parse_tovey(&recs).map_err(with_line)?),
            "sat-ext" => StageTrace::SatExt(parse_sat(&recs).map_err(with_line)?),
            "lift-k" => StageTrace::LiftK(parse_embed(&recs).map_err(with_line)?),
            "drop-ext" => StageTrace::DropExt(parse_embed(&recs).map_err(with_line)?),
            "drop-req" => StageTrace::DropReq(parse_embed(&recs).map_err(with_line)?),
            other => return Err(Error::parse(line, format!("unknown stage {other:?}"))),
        };
        stages.push(s);
    }
    Ok(Trace { stages })
}
