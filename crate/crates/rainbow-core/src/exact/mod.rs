pub mod branch;
pub mod brute;
pub mod ie;
pub mod propagate;

pub use branch::{find_coloring, Guide, SearchStats};
pub use brute::{brute_force_count, brute_force_solve, simple_paths};
pub use ie::{
    count_extensions, count_satisfying_2colorings, extract_2coloring, quotient_classes,
    two_paths, QuotientStructure,
};
pub use propagate::{propagation_search, PropStats};

use crate::config::Config;
use crate::error::{ensure, Error, Result};
use crate::graph::{bfs_bounded, Pair};
use crate::instance::{Coloring, Instance};
use crate::verify::all_requests_satisfied;

/// True when every request lies within distance `k`.
pub fn requests_feasible(inst: &Instance, requests: &[Pair]) -> bool {
    let mut i = 0;
    while i < requests.len() {
        let u = requests[i].0;
        let dist = bfs_bounded(&inst.graph, u, inst.k);
        while i < requests.len() && requests[i].0 == u {
            if dist[requests[i].1] == u32::MAX {
                return false;
            }
            i += 1;
        }
    }
    true
}

/// Decides a (subset, possibly precolored) rainbow instance exactly.
pub fn solve_subset_rainbow(inst: &Instance, cfg: &Config) -> Result<Option<Coloring>> {
    let requests = inst.request_pairs();
    if !requests_feasible(inst, &requests) {
        return Ok(None);
    }
    let found = if inst.k == 2 && !inst.has_precoloring() && requests.len() <= cfg.budgets.ie_requests {
        extract_2coloring(&inst.graph, &requests, None, cfg)?
    } else if requests.len() > cfg.budgets.branch_requests {
        propagation_search(&inst.graph, inst.k, &requests, &inst.precoloring, cfg)?.0
    } else {
        let open = vec![true; requests.len()];
        let guide = vec![Vec::new(); requests.len()];
        let mut short = cfg.clone();
        short.budgets.search_nodes = cfg.budgets.search_nodes.min(cfg.budgets.branch_nodes);
        match find_coloring(&inst.graph, inst.k, &requests, &open, &inst.precoloring, &guide, &short) {
            Ok((c, _)) => c,
            Err(Error::Resource(_)) => {
                propagation_search(&inst.graph, inst.k, &requests, &inst.precoloring, cfg)?.0
            }
            Err(e) => return Err(e),
        }
    };
    if let Some(c) = &found {
        check_solution(inst, &requests, c)?;
    }
    Ok(found)
}

/// Confirms that `c` extends the precoloring and satisfies `requests`.
pub fn check_solution(inst: &Instance, requests: &[Pair], c: &Coloring) -> Result<()> {
    ensure!(
        inst.precoloring.is_extended_by(c),
        Error::internal("solver output does not extend the precoloring")
    );
    ensure!(
        c.iter().all(|&x| x >= 1 && x as usize <= inst.k),
        Error::internal("solver output uses a color outside 1..=k")
    );
    ensure!(
        all_requests_satisfied(&inst.graph, c, requests, inst.k),
        Error::internal("solver output leaves a request unsatisfied")
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn subset_examples() {
        let cfg = Config::default();
        let p3 = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let inst = Instance::subset(p3, 2, vec![(0, 2)]).unwrap();
        assert!(solve_subset_rainbow(&inst, &cfg).unwrap().is_some());

        let p4 = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let inst = Instance::subset(p4, 2, vec![(0, 3)]).unwrap();
        assert_eq!(solve_subset_rainbow(&inst, &cfg).unwrap(), None);

        let c4 = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let inst = Instance::subset(c4, 2, vec![(0, 2), (1, 3)]).unwrap();
        let brute = brute_force_solve(&inst, &cfg).unwrap();
        assert_eq!(solve_subset_rainbow(&inst, &cfg).unwrap().is_some(), brute.is_some());
        assert!(brute.is_some());
    }

    #[test]
    fn precolored_route_uses_branching() {
        let cfg = Config::default();
        let c4 = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let inst = Instance::subset(c4, 2, vec![(0, 2), (1, 3)]).unwrap();
        let mut pc = crate::instance::PartialColoring::empty(4, 2);
        pc.set(0, 1);
        pc.set(1, 1);
        let inst = inst.with_precoloring(pc).unwrap();
        let c = solve_subset_rainbow(&inst, &cfg).unwrap().unwrap();
        assert_eq!(&c[..2], &[1, 1]);
    }
}
