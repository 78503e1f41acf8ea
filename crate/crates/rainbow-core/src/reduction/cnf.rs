//! CNF formulas, DIMACS input/output and assignments.

use std::fmt::Write as _;

use crate::error::{ensure, Error, Result};

/// Signed 1-based literal as in DIMACS: `3` is `x3`, `-3` its negation.
pub type Lit = i32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub nvars: usize,
    pub clauses: Vec<Vec<Lit>>,
}

/// 0-based variable of a literal.
pub fn var(l: Lit) -> usize {
    l.unsigned_abs() as usize - 1
}

pub fn lit(var: usize, positive: bool) -> Lit {
    let l = var as Lit + 1;
    if positive {
        l
    } else {
        -l
    }
}

/// Value of `l` under `xi` (indexed by 0-based variable).
pub fn lit_value(l: Lit, xi: &[bool]) -> bool {
    xi[var(l)] == (l > 0)
}

impl Cnf {
    pub fn new(nvars: usize, clauses: Vec<Vec<Lit>>) -> Result<Cnf> {
        for (i, c) in clauses.iter().enumerate() {
            ensure!(!c.is_empty(), Error::usage(format!("clause {} is empty", i + 1)));
            for &l in c {
                ensure!(
                    l != 0 && (l.unsigned_abs() as usize) <= nvars,
                    Error::usage(format!("literal {l} in clause {} out of range", i + 1))
                );
            }
        }
        Ok(Cnf { nvars, clauses })
    }

    pub fn satisfied_by(&self, xi: &[bool]) -> bool {
        xi.len() == self.nvars
            && self.clauses.iter().all(|c| c.iter().any(|&l| lit_value(l, xi)))
    }

    /// Number of clauses each variable occurs in.
    pub fn occurrences(&self) -> Vec<usize> {
        let mut occ = vec![0; self.nvars];
        for c in &self.clauses {
            let mut vars: Vec<usize> = c.iter().map(|&l| var(l)).collect();
            vars.sort_unstable();
            vars.dedup();
            for x in vars {
                occ[x] += 1;
            }
        }
        occ
    }

    /// Every clause has exactly three distinct variables and every variable
    /// occurs in at most four clauses.
    pub fn is_tovey(&self) -> bool {
        self.tovey_violation().is_none()
    }

    pub fn tovey_violation(&self) -> Option<String> {
        for (i, c) in self.clauses.iter().enumerate() {
            let mut vars: Vec<usize> = c.iter().map(|&l| var(l)).collect();
            vars.sort_unstable();
            vars.dedup();
            if c.len() != 3 || vars.len() != 3 {
                return Some(format!("clause {} does not have three distinct variables", i + 1));
            }
        }
        let occ = self.occurrences();
        if let Some(x) = occ.iter().position(|&o| o > 4) {
            return Some(format!("variable {} occurs in {} clauses", x + 1, occ[x]));
        }
        None
    }
}

/// Parses DIMACS cnf. Comment lines start with `c`; clauses may span lines.
pub fn parse_dimacs(text: &str) -> Result<Cnf> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut cur: Vec<Lit> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = no + 1;
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            ensure!(header.is_none(), Error::parse(lineno, "second p-line"));
            let t: Vec<&str> = line.split_whitespace().collect();
            ensure!(
                t.len() == 4 && t[1] == "cnf",
                Error::parse(lineno, "expected `p cnf <vars> <clauses>`")
            );
            let nv = t[2].parse().map_err(|_| Error::parse(lineno, "bad variable count"))?;
            let nc = t[3].parse().map_err(|_| Error::parse(lineno, "bad clause count"))?;
            header = Some((nv, nc));
            continue;
        }
        let (nv, _) = header.ok_or_else(|| Error::parse(lineno, "clause before p-line"))?;
        for tok in line.split_whitespace() {
            let l: Lit = tok
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad literal `{tok}`")))?;
            if l == 0 {
                ensure!(!cur.is_empty(), Error::parse(lineno, "empty clause"));
                clauses.push(std::mem::take(&mut cur));
            } else {
                ensure!(
                    l.unsigned_abs() as usize <= nv,
                    Error::parse(lineno, format!("literal {l} exceeds variable count {nv}"))
                );
                cur.push(l);
            }
        }
    }
    let (nv, nc) = header.ok_or_else(|| Error::parse(0, "missing p-line"))?;
    if !cur.is_empty() {
        clauses.push(cur);
    }
    ensure!(
        clauses.len() == nc,
        Error::parse(0, format!("header declares {nc} clauses, found {}", clauses.len()))
    );
    Cnf::new(nv, clauses)
}

pub fn write_dimacs(f: &Cnf) -> String {
    let mut s = format!("p cnf {} {}\n", f.nvars, f.clauses.len());
    for c in &f.clauses {
        for l in c {
            let _ = write!(s, "{l} ");
        }
        s.push_str("0\n");
    }
    s
}

/// Parses an assignment: signed literals, optionally on `v`-prefixed lines,
/// terminated by `0`. Unmentioned variables are false.
pub fn parse_assignment(text: &str, nvars: usize) -> Result<Vec<bool>> {
    let mut xi = vec![false; nvars];
    let mut seen = vec![false; nvars];
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('s') {
            continue;
        }
        let body = line.strip_prefix('v').unwrap_or(line);
        for tok in body.split_whitespace() {
            let l: Lit = tok
                .parse()
                .map_err(|_| Error::parse(no + 1, format!("bad literal `{tok}`")))?;
            if l == 0 {
                return Ok(xi);
            }
            let x = l.unsigned_abs() as usize;
            ensure!(
                x <= nvars,
                Error::parse(no + 1, format!("variable {x} exceeds {nvars}"))
            );
            ensure!(!seen[x - 1], Error::parse(no + 1, format!("variable {x} assigned twice")));
            seen[x - 1] = true;
            xi[x - 1] = l > 0;
        }
    }
    Ok(xi)
}

pub fn write_assignment(xi: &[bool]) -> String {
    let mut s = String::from("v");
    for (x, &b) in xi.iter().enumerate() {
        let _ = write!(s, " {}", lit(x, b));
    }
    s.push_str(" 0\n");
    s
}

/// Largest variable count [`brute_force_model`] accepts.
pub const BRUTE_FORCE_VARS: usize = 26;

/// First model in binary counting order (variable 1 is the low bit).
pub fn brute_force_model(f: &Cnf) -> Result<Option<Vec<bool>>> {
    ensure!(
        f.nvars <= BRUTE_FORCE_VARS,
        Error::resource(format!("{} variables exceed the brute-force limit", f.nvars))
    );
    let masks: Vec<(u32, u32)> = f
        .clauses
        .iter()
        .map(|c| {
            let (mut pos, mut neg) = (0u32, 0u32);
            for &l in c {
                if l > 0 {
                    pos |= 1 << var(l);
                } else {
                    neg |= 1 << var(l);
                }
            }
            (pos, neg)
        })
        .collect();
    let full = (1u32 << f.nvars) - 1;
    for bits in 0..=full {
        if masks.iter().all(|&(p, n)| bits & p != 0 || !bits & n != 0) {
            return Ok(Some((0..f.nvars).map(|x| bits >> x & 1 == 1).collect()));
        }
    }
    Ok(None)
}
