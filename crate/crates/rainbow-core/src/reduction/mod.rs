//! Compilers from 3-CNF formulas to rainbow-coloring instances, and the
//! instance-to-instance transformations they are built from.
//!
//! Every instance-to-instance stage keeps the source graph as a prefix of the
//! target: vertex `v` and edge `e` of the source keep their indices.

pub mod cnf;
pub mod conflict;
pub mod drop_ext;
pub mod drop_req;
pub mod lift2k;
pub mod pipeline;
pub mod sat_ext;
pub mod tovey;
pub mod trace;

use std::fmt;

use crate::error::{ensure, Error, Result};
use crate::graph::{is_proper_for_pairs, EdgeId, Pair};
use crate::instance::{Color, Coloring};

/// A proper coloring with a declared number of colors `1..=count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Palette {
    pub colors: Vec<usize>,
    pub count: usize,
}

impl Palette {
    pub fn new(colors: Vec<usize>, count: usize) -> Palette {
        Palette { colors, count }
    }

    /// Uses the largest color as the declared count.
    pub fn tight(colors: Vec<usize>) -> Palette {
        let count = colors.iter().copied().max().unwrap_or(0);
        Palette { colors, count }
    }

    /// Number of distinct colors actually used.
    pub fn used(&self) -> usize {
        let mut c = self.colors.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    }

    /// Checks length, range and properness for the pairs on `n` items.
    pub fn check(&self, n: usize, pairs: &[Pair], what: &str) -> Result<()> {
        ensure!(
            self.colors.len() == n,
            Error::usage(format!("{what}: {} colors for {n} items", self.colors.len()))
        );
        ensure!(
            self.colors.iter().all(|&c| c >= 1 && c <= self.count),
            Error::usage(format!("{what}: color outside 1..={}", self.count))
        );
        ensure!(is_proper_for_pairs(n, pairs, &self.colors), Error::usage(format!("{what}: not proper")));
        Ok(())
    }
}

/// One expected-versus-actual count in a size report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub expected: u64,
    pub actual: u64,
}

impl Check {
    pub fn new(name: impl Into<String>, expected: usize, actual: usize) -> Check {
        Check { name: name.into(), expected: expected as u64, actual: actual as u64 }
    }

    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "ok" } else { "MISMATCH" };
        write!(f, "{} expected={} actual={} {verdict}", self.name, self.expected, self.actual)
    }
}

/// Correspondence of a stage whose source graph is a prefix of its target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbedTrace {
    pub inner_n: usize,
    pub inner_m: usize,
    /// Witness colors of the target edges past the prefix, in edge order.
    pub added: Vec<Color>,
    /// Target edges whose colors must read `1, 2, ...` before restricting.
    pub perm: Vec<EdgeId>,
}

impl EmbedTrace {
    pub fn outer_m(&self) -> usize {
        self.inner_m + self.added.len()
    }

    /// Extends a source solution by the stage's fixed gadget colors.
    pub fn lift(&self, inner: &[Color]) -> Result<Coloring> {
        ensure!(
            inner.len() == self.inner_m,
            Error::usage(format!("coloring has {} edges, stage source has {}", inner.len(), self.inner_m))
        );
        let mut c = inner.to_vec();
        c.extend_from_slice(&self.added);
        Ok(c)
    }

    /// Restricts a target solution to the source edges, first renaming colors
    /// so that the `perm` edges read `1, 2, ...`.
    pub fn restrict(&self, outer: &[Color]) -> Result<Coloring> {
        ensure!(
            outer.len() == self.outer_m(),
            Error::usage(format!("coloring has {} edges, stage target has {}", outer.len(), self.outer_m()))
        );
        let mut rename = [0u8; 256];
        for (i, &e) in self.perm.iter().enumerate() {
            let c = outer[e] as usize;
            ensure!(
                rename[c] == 0,
                Error::usage("reference edges repeat a color; not a solution of the target")
            );
            rename[c] = i as u8 + 1;
        }
        if self.perm.is_empty() {
            return Ok(outer[..self.inner_m].to_vec());
        }
        outer[..self.inner_m]
            .iter()
            .map(|&c| match rename[c as usize] {
                0 => Err(Error::usage(format!("color {c} missing from the reference edges"))),
                r => Ok(r),
            })
            .collect()
    }
}

/// `1 + (x - 1) mod y` for `x >= 1`, and `y` for `x = 0`.
pub fn mod1(x: usize, y: usize) -> usize {
    (x + y - 1) % y + 1
}
