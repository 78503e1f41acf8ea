//! Seeded generators for graphs, instances and formulas.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::biclique::BipartiteGraph;
use crate::error::{ensure, Error, Result};
use crate::graph::{feasible_pairs, Graph, Pair};
use crate::instance::Instance;
use crate::reduction::cnf::{lit, Cnf, Lit};

pub type Rng64 = Xoshiro256PlusPlus;

pub fn rng(seed: u64) -> Rng64 {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

fn all_pairs(n: usize) -> Vec<Pair> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

/// Uniform graph with exactly `m` edges.
pub fn gnm(n: usize, m: usize, rng: &mut Rng64) -> Result<Graph> {
    let mut pairs = all_pairs(n);
    ensure!(m <= pairs.len(), Error::usage(format!("{m} edges do not fit on {n} vertices")));
    pairs.shuffle(rng);
    pairs.truncate(m);
    pairs.sort_unstable();
    Graph::new(n, pairs)
}

/// Every pair independently with probability `p`.
pub fn gnp(n: usize, p: f64, rng: &mut Rng64) -> Result<Graph> {
    ensure!((0.0..=1.0).contains(&p), Error::usage("edge probability outside [0, 1]"));
    Graph::new(n, all_pairs(n).into_iter().filter(|_| rng.gen_bool(p)))
}

/// Graph on `n` vertices from the bits of `mask` over the pairs in
/// lexicographic order.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let pairs: Vec<Pair> =
        all_pairs(n).into_iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p).collect();
    Graph::new(n, pairs).expect("pairs are valid")
}

/// Uniform subset of the feasible anti-edges of size `min(s, available)`.
pub fn random_requests(g: &Graph, k: usize, s: usize, rng: &mut Rng64) -> Vec<Pair> {
    let mut cand = feasible_pairs(g, k);
    cand.shuffle(rng);
    cand.truncate(s);
    cand.sort_unstable();
    cand
}

/// `G(n, m)` with up to `s` feasible requests.
pub fn random_instance(n: usize, m: usize, k: usize, s: usize, rng: &mut Rng64) -> Result<Instance> {
    let g = gnm(n, m, rng)?;
    let req = random_requests(&g, k, s, rng);
    Instance::subset(g, k, req)
}

/// Bipartite graph with `left` and `right` vertices; every left vertex draws
/// up to `max_deg` distinct right neighbors, and right degrees are capped too.
pub fn random_bipartite(left: usize, right: usize, max_deg: usize, rng: &mut Rng64) -> Result<BipartiteGraph> {
    let mut deg_r = vec![0usize; right];
    let mut edges = Vec::new();
    for a in 0..left {
        let want = rng.gen_range(0..=max_deg.min(right));
        let mut cand: Vec<usize> = (0..right).filter(|&b| deg_r[b] < max_deg).collect();
        cand.shuffle(rng);
        for &b in cand.iter().take(want) {
            deg_r[b] += 1;
            edges.push((a, b));
        }
    }
    edges.sort_unstable();
    BipartiteGraph::unlabeled(left, right, &edges)
}

fn random_clause(vars: &[usize], rng: &mut Rng64) -> Vec<Lit> {
    let mut pick: Vec<usize> = vars.choose_multiple(rng, 3).copied().collect();
    pick.shuffle(rng);
    pick.into_iter().map(|x| lit(x, rng.gen_bool(0.5))).collect()
}

/// Clauses of three distinct variables, each variable in at most four
/// clauses. Needs `3 * nclauses <= 4 * nvars`.
pub fn tovey_formula(nvars: usize, nclauses: usize, rng: &mut Rng64) -> Result<Cnf> {
    tovey_with(nvars, nclauses, rng, |c, _| c)
}

/// Like [`tovey_formula`], with every clause made true under a planted
/// model. Returns the formula and the model.
pub fn planted_tovey(nvars: usize, nclauses: usize, rng: &mut Rng64) -> Result<(Cnf, Vec<bool>)> {
    let model: Vec<bool> = (0..nvars).map(|_| rng.gen_bool(0.5)).collect();
    let m2 = model.clone();
    let f = tovey_with(nvars, nclauses, rng, move |mut c: Vec<Lit>, rng: &mut Rng64| {
        if !c.iter().any(|&l| m2[l.unsigned_abs() as usize - 1] == (l > 0)) {
            let i = rng.gen_range(0..c.len());
            c[i] = -c[i];
        }
        c
    })?;
    Ok((f, model))
}

fn tovey_with(
    nvars: usize,
    nclauses: usize,
    rng: &mut Rng64,
    mut fix: impl FnMut(Vec<Lit>, &mut Rng64) -> Vec<Lit>,
) -> Result<Cnf> {
    ensure!(nvars >= 3 || nclauses == 0, Error::usage("need at least 3 variables"));
    ensure!(3 * nclauses <= 4 * nvars, Error::usage("too many clauses for four occurrences per variable"));
    // retry a few times; a greedy draw can paint itself into a corner
    'attempt: for _ in 0..64 {
        let mut occ = vec![0usize; nvars];
        let mut clauses = Vec::with_capacity(nclauses);
        for _ in 0..nclauses {
            let free: Vec<usize> = (0..nvars).filter(|&x| occ[x] < 4).collect();
            if free.len() < 3 {
                continue 'attempt;
            }
            // prefer the least used variables so that the draw rarely fails
            let low = free.iter().map(|&x| occ[x]).min().unwrap_or(0);
            let mut pool: Vec<usize> = free.iter().copied().filter(|&x| occ[x] <= low + 1).collect();
            if pool.len() < 3 {
                pool = free;
            }
            let c = fix(random_clause(&pool, rng), rng);
            for &l in &c {
                occ[l.unsigned_abs() as usize - 1] += 1;
            }
            clauses.push(c);
        }
        return Cnf::new(nvars, clauses);
    }
    Err(Error::internal("could not draw a formula within the occurrence limit"))
}

/// Clauses of three distinct variables with no occurrence limit.
pub fn random_3cnf(nvars: usize, nclauses: usize, rng: &mut Rng64) -> Result<Cnf> {
    ensure!(nvars >= 3, Error::usage("need at least 3 variables"));
    let vars: Vec<usize> = (0..nvars).collect();
    let clauses = (0..nclauses).map(|_| random_clause(&vars, rng)).collect();
    Cnf::new(nvars, clauses)
}
