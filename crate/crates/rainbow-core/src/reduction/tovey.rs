//! Normalization to formulas whose clauses have exactly three distinct
//! variables and whose variables occur in at most four clauses.
//!
//! Variables with more than four occurrences are replaced by one copy per
//! occurrence, tied together by the implication cycle
//! `(!x1 | x2), (!x2 | x3), ..., (!xt | x1)`. Clauses that end up with fewer
//! than three variables are padded with the positive literal of a fresh
//! variable forced false by its own copy of [`GADGET`].

use std::sync::OnceLock;

use super::cnf::{lit, lit_value, var, Cnf, Lit};
use crate::error::{ensure, Error, Result};

/// Clauses over gadget-local variables `0..7` (1-based literals). Every
/// model has variable `0` false; variable `0` occurs three times, the others
/// four times.
pub const GADGET: [[Lit; 3]; 9] = [
    [-1, -2, 3],
    [-1, 4, 5],
    [-1, -5, -6],
    [-2, -3, -7],
    [2, 3, 6],
    [2, -4, 5],
    [-3, -4, 7],
    [4, 6, 7],
    [-5, 6, -7],
];
pub const GADGET_VARS: usize = 7;

/// The first gadget model in binary counting order.
pub fn gadget_model() -> &'static [bool; GADGET_VARS] {
    static MODEL: OnceLock<[bool; GADGET_VARS]> = OnceLock::new();
    MODEL.get_or_init(|| {
        (0u32..1 << GADGET_VARS)
            .map(|bits| std::array::from_fn(|x| bits >> x & 1 == 1))
            .find(|xi: &[bool; GADGET_VARS]| {
                GADGET.iter().all(|c| c.iter().any(|&l| lit_value(l, xi)))
            })
            .expect("gadget is satisfiable")
    })
}

/// Where a variable of the normalized formula comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    /// Copy of a source variable; takes its value.
    Copy(usize),
    /// Gadget variable with a fixed value in the lifted model.
    Fixed(bool),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToveyTrace {
    /// Representative normalized variable of each source variable.
    pub rep: Vec<usize>,
    /// Origin of each normalized variable.
    pub source: Vec<Source>,
}

impl ToveyTrace {
    pub fn identity(nvars: usize) -> ToveyTrace {
        ToveyTrace { rep: (0..nvars).collect(), source: (0..nvars).map(Source::Copy).collect() }
    }

    pub fn source_vars(&self) -> usize {
        self.rep.len()
    }

    /// Maps a model of the source formula to a model of the normalized one.
    pub fn lift(&self, xi: &[bool]) -> Result<Vec<bool>> {
        ensure!(xi.len() == self.rep.len(), Error::usage("assignment length mismatch"));
        Ok(self
            .source
            .iter()
            .map(|s| match *s {
                Source::Copy(x) => xi[x],
                Source::Fixed(b) => b,
            })
            .collect())
    }

    /// Reads a source assignment off a normalized one.
    pub fn extract(&self, xi: &[bool]) -> Result<Vec<bool>> {
        ensure!(xi.len() == self.source.len(), Error::usage("assignment length mismatch"));
        Ok(self.rep.iter().map(|&y| xi[y]).collect())
    }
}

/// Drops repeated literals and tautological clauses.
fn clean(f: &Cnf) -> Result<(Vec<Vec<Lit>>, bool)> {
    let mut changed = false;
    let mut out = Vec::with_capacity(f.clauses.len());
    for (i, c) in f.clauses.iter().enumerate() {
        ensure!(!c.is_empty(), Error::usage(format!("clause {} is empty", i + 1)));
        let mut d = c.clone();
        d.sort_unstable_by_key(|&l| (var(l), l));
        d.dedup();
        if d.len() != c.len() {
            changed = true;
        }
        if d.windows(2).any(|w| var(w[0]) == var(w[1])) {
            changed = true;
            continue;
        }
        ensure!(
            d.len() <= 3,
            Error::usage(format!("clause {} has more than three literals", i + 1))
        );
        // keep the original literal order
        let mut kept: Vec<Lit> = Vec::with_capacity(d.len());
        for &l in c {
            if !kept.contains(&l) {
                kept.push(l);
            }
        }
        out.push(kept);
    }
    Ok((out, changed))
}

struct Builder {
    nvars: usize,
    source: Vec<Source>,
    gadget_clauses: Vec<Vec<Lit>>,
}

impl Builder {
    /// Instantiates a gadget and returns its forced-false variable.
    fn forced_false(&mut self) -> usize {
        let base = self.nvars;
        self.nvars += GADGET_VARS;
        self.source.extend(gadget_model().iter().map(|&b| Source::Fixed(b)));
        for c in GADGET {
            self.gadget_clauses
                .push(c.iter().map(|&l| lit(base + var(l), l > 0)).collect());
        }
        base
    }

    fn pad(&mut self, mut c: Vec<Lit>) -> Vec<Lit> {
        while c.len() < 3 {
            let z = self.forced_false();
            c.push(lit(z, true));
        }
        c
    }
}

/// Returns an equisatisfiable formula meeting the three-variable and
/// four-occurrence conditions, plus the variable correspondence.
pub fn tovey_normalize(f: &Cnf) -> Result<(Cnf, ToveyTrace)> {
    let (clauses, changed) = clean(f)?;
    if !changed && f.is_tovey() {
        return Ok((f.clone(), ToveyTrace::identity(f.nvars)));
    }
    let cleaned = Cnf { nvars: f.nvars, clauses };
    let occ = cleaned.occurrences();

    let mut b = Builder { nvars: 0, source: Vec::new(), gadget_clauses: Vec::new() };
    let mut rep = vec![0; f.nvars];
    // first copy of each variable; split variables get `occ` consecutive copies
    for x in 0..f.nvars {
        rep[x] = b.nvars;
        let copies = if occ[x] > 4 { occ[x] } else { 1 };
        b.nvars += copies;
        b.source.extend(std::iter::repeat(Source::Copy(x)).take(copies));
    }

    let mut used = vec![0usize; f.nvars];
    let mut out = Vec::new();
    for c in &cleaned.clauses {
        let mapped: Vec<Lit> = c
            .iter()
            .map(|&l| {
                let x = var(l);
                let y = if occ[x] > 4 { rep[x] + used[x] } else { rep[x] };
                used[x] += 1;
                lit(y, l > 0)
            })
            .collect();
        out.push(mapped);
    }
    for x in 0..f.nvars {
        if occ[x] > 4 {
            let t = occ[x];
            for i in 0..t {
                out.push(vec![lit(rep[x] + i, false), lit(rep[x] + (i + 1) % t, true)]);
            }
        }
    }
    let padded: Vec<Vec<Lit>> = out.into_iter().map(|c| b.pad(c)).collect();
    let mut all = padded;
    all.append(&mut b.gadget_clauses);
    let g = Cnf::new(b.nvars, all)?;
    if let Some(why) = g.tovey_violation() {
        return Err(Error::internal(format!("normalization output: {why}")));
    }
    Ok((g, ToveyTrace { rep, source: b.source }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::cnf::brute_force_model;

    fn all_models(f: &Cnf) -> Vec<Vec<bool>> {
        (0u32..1 << f.nvars)
            .map(|bits| (0..f.nvars).map(|x| bits >> x & 1 == 1).collect::<Vec<_>>())
            .filter(|xi| f.satisfied_by(xi))
            .collect()
    }

    #[test]
    fn gadget_forces_its_first_variable_false() {
        let g = Cnf::new(GADGET_VARS, GADGET.iter().map(|c| c.to_vec()).collect()).unwrap();
        let models = all_models(&g);
        assert!(!models.is_empty());
        assert!(models.iter().all(|m| !m[0]));
        assert!(g.satisfied_by(gadget_model()));
        let occ = g.occurrences();
        assert_eq!(occ[0], 3);
        assert!(occ[1..].iter().all(|&o| o == 4));
    }

    #[test]
    fn compliant_formula_is_unchanged() {
        let f = Cnf::new(4, vec![vec![1, 2, -3], vec![-1, 3, 4]]).unwrap();
        let (g, t) = tovey_normalize(&f).unwrap();
        assert_eq!(g, f);
        assert_eq!(t, ToveyTrace::identity(4));
    }

    #[test]
    fn repeated_literal_is_padded() {
        let f = Cnf::new(2, vec![vec![1, 1, 2]]).unwrap();
        let (g, t) = tovey_normalize(&f).unwrap();
        assert!(g.is_tovey());
        assert_eq!(g.nvars, 2 + GADGET_VARS);
        for bits in 0..4u32 {
            let xi: Vec<bool> = (0..2).map(|x| bits >> x & 1 == 1).collect();
            if f.satisfied_by(&xi) {
                assert!(g.satisfied_by(&t.lift(&xi).unwrap()));
            }
        }
        let m = brute_force_model(&g).unwrap().unwrap();
        assert!(f.satisfied_by(&t.extract(&m).unwrap()));
    }

    #[test]
    fn heavy_variable_is_split() {
        // x1 occurs in six clauses; satisfiable only with x1 true and x2 false
        let f = Cnf::new(
            2,
            vec![vec![1, 2], vec![1, -2], vec![-2, 1], vec![1], vec![-1, -2], vec![1, -2]],
        )
        .unwrap();
        let (g, t) = tovey_normalize(&f).unwrap();
        assert!(g.is_tovey());
        assert!(g.occurrences().iter().all(|&o| o <= 4));
        let xi = vec![true, false];
        assert!(f.satisfied_by(&xi));
        let lifted = t.lift(&xi).unwrap();
        assert!(g.satisfied_by(&lifted));
        assert_eq!(t.extract(&lifted).unwrap(), xi);
    }

    #[test]
    fn unsatisfiable_stays_unsatisfiable() {
        let f = Cnf::new(1, vec![vec![1], vec![-1]]).unwrap();
        let (g, t) = tovey_normalize(&f).unwrap();
        assert!(g.is_tovey());
        assert_eq!(g.nvars, 1 + 4 * GADGET_VARS);
        // each padded clause keeps its literal and adds gadget heads, which
        // every model sets false
        let heads: Vec<usize> = (0..4).map(|i| 1 + i * GADGET_VARS).collect();
        assert_eq!(g.clauses[0], vec![1, heads[0] as Lit + 1, heads[1] as Lit + 1]);
        assert_eq!(g.clauses[1], vec![-1, heads[2] as Lit + 1, heads[3] as Lit + 1]);
        for &h in &heads {
            assert_eq!(t.source[h], Source::Fixed(false));
        }
        assert_eq!(g.clauses.len(), 2 + 4 * GADGET.len());
    }

    #[test]
    fn tautologies_dropped_and_long_clauses_rejected() {
        let f = Cnf::new(3, vec![vec![1, -1, 2], vec![1, 2, 3]]).unwrap();
        let (g, _) = tovey_normalize(&f).unwrap();
        assert_eq!(g.clauses.len(), 1);
        let long = Cnf::new(4, vec![vec![1, 2, 3, 4]]).unwrap();
        assert!(matches!(tovey_normalize(&long), Err(Error::Usage(_))));
    }
}
