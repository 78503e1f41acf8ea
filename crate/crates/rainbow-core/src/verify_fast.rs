//! All-pairs rainbow connectivity for three colors using bitset rows.
//!
//! A rainbow path of length three from `u` starts with an edge `ux` of some
//! color and continues with a two-edge path from `x` using exactly the other
//! two colors. Those two-edge reach sets are tabulated once per
//! `(vertex, excluded color)`, which makes each source a union of a few rows
//! per incident edge.

use crate::graph::Graph;
use crate::instance::Color;

struct Rows {
    words: usize,
    data: Vec<u64>,
}

impl Rows {
    fn new(count: usize, bits: usize) -> Rows {
        let words = bits.div_ceil(64);
        Rows { words, data: vec![0; count * words] }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    fn set(&mut self, i: usize, bit: usize) {
        self.data[i * self.words + bit / 64] |= 1 << (bit % 64);
    }

    fn or_into(&self, i: usize, acc: &mut [u64]) {
        for (a, &b) in acc.iter_mut().zip(self.row(i)) {
            *a |= b;
        }
    }
}

/// Same answer as [`crate::verify::is_rainbow_connected`] for `k = 3`.
pub fn rainbow_connected_k3(g: &Graph, c: &[Color]) -> bool {
    let n = g.n();
    if n <= 1 {
        return true;
    }
    // nbr[3x + (c-1)]: neighbors of x along color c.
    let mut nbr = Rows::new(3 * n, n);
    for x in 0..n {
        for &(y, e) in g.adj_raw(x) {
            nbr.set(3 * x + c[e as usize] as usize - 1, y as usize);
        }
    }
    // two[3x + (c-1)]: ends of two-edge rainbow paths from x avoiding color c.
    let words = nbr.words;
    let mut two = Rows::new(3 * n, n);
    for x in 0..n {
        for &(y, e) in g.adj_raw(x) {
            let c1 = c[e as usize] as usize;
            for excl in 1..=3 {
                if excl == c1 {
                    continue;
                }
                let third = 6 - excl - c1;
                let dst = 3 * x + excl - 1;
                let src = 3 * y as usize + third - 1;
                let (lo, hi) = (dst * words, src * words);
                for w in 0..words {
                    two.data[lo + w] |= nbr.data[hi + w];
                }
            }
        }
    }
    let mut acc = vec![0u64; words];
    let tail = n % 64;
    for u in 0..n {
        acc.fill(0);
        acc[u / 64] |= 1 << (u % 64);
        for &(x, e) in g.adj_raw(u) {
            let x = x as usize;
            let c1 = c[e as usize] as usize;
            acc[x / 64] |= 1 << (x % 64);
            for other in 1..=3 {
                if other != c1 {
                    nbr.or_into(3 * x + other - 1, &mut acc);
                }
            }
            two.or_into(3 * x + c1 - 1, &mut acc);
        }
        let full = acc.iter().enumerate().all(|(w, &a)| {
            if w + 1 == words && tail != 0 {
                a == (1u64 << tail) - 1
            } else {
                a == u64::MAX
            }
        });
        if !full {
            return false;
        }
    }
    true
}
