//! The precoloring conflict graph of an extension instance.

use crate::graph::{EdgeId, Graph, Vertex};
use crate::instance::Instance;

/// Graph on the precolored edges (vertex `i` is the `i`-th precolored edge in
/// ascending edge order). Two precolored edges are adjacent when they share
/// an endpoint or some endpoint pair is an edge or a request.
pub fn precoloring_conflict_graph(inst: &Instance) -> (Graph, Vec<EdgeId>) {
    let g = &inst.graph;
    let dom: Vec<EdgeId> = inst.precoloring.domain().collect();
    let mut index = vec![usize::MAX; g.m()];
    for (i, &e) in dom.iter().enumerate() {
        index[e] = i;
    }
    let mut at: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (i, &e) in dom.iter().enumerate() {
        let (u, v) = g.edge(e);
        at[u].push(i);
        at[v].push(i);
    }
    let mut req: Vec<Vec<Vertex>> = vec![Vec::new(); g.n()];
    for &(u, v) in inst.request_pairs().iter() {
        req[u].push(v);
        req[v].push(u);
    }
    let mut pairs = Vec::new();
    for (i, &e) in dom.iter().enumerate() {
        let (u, v) = g.edge(e);
        for x in [u, v] {
            let near = std::iter::once(x)
                .chain(g.adj(x).map(|(y, _)| y))
                .chain(req[x].iter().copied());
            for y in near {
                for &j in &at[y] {
                    if j > i {
                        pairs.push((i, j));
                    }
                }
            }
        }
    }
    let cg = Graph::new(dom.len(), pairs).expect("conflict pairs are in range and loop-free");
    (cg, dom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::PartialColoring;

    fn inst(n: usize, edges: &[(usize, usize)], req: Vec<(usize, usize)>, dom: &[usize]) -> Instance {
        let g = Graph::new(n, edges.iter().copied()).unwrap();
        let mut pc = PartialColoring::empty(g.m(), 2);
        for &e in dom {
            pc.set(e, 1);
        }
        Instance::subset(g, 2, req).unwrap().with_precoloring(pc).unwrap()
    }

    #[test]
    fn examples() {
        let (cg, _) = precoloring_conflict_graph(&inst(3, &[(0, 1), (1, 2)], vec![], &[0, 1]));
        assert_eq!(cg.m(), 1);
        let (cg, _) = precoloring_conflict_graph(&inst(4, &[(0, 1), (2, 3)], vec![], &[0, 1]));
        assert_eq!(cg.m(), 0);
        let (cg, dom) =
            precoloring_conflict_graph(&inst(4, &[(0, 1), (2, 3)], vec![(1, 2)], &[0, 1]));
        assert_eq!(cg.m(), 1);
        assert_eq!(dom, vec![0, 1]);
    }
}
