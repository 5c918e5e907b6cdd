//! Connected dominating set as a general cover problem.
//!
//! With `p(C)` the number of components of the induced subgraph `G[C]` and
//! `q(C)` the number of components of `G⟨C⟩` (all vertices, only the edges
//! incident to `C`), the potential is
//!
//! ```text
//! g(C) = n − p(C) − q(C)
//! ```
//!
//! so `g(∅) = 0` and `g(V) = n − 2`. A set reaches `n − 2` exactly when
//! `p(C) = q(C) = 1`, i.e. when it is a connected dominating set. The
//! potential is monotone but not submodular; it satisfies the prefix
//! condition with slack `p = 1` along any connected ordering of an optimum.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::problem::{CoverProblem, DeltaSource, Utility};
use crate::subset::Subset;
use crate::zoo::dsu::Dsu;
use crate::zoo::graph::GraphInstance;

/// Components of `G[C]`; 0 for the empty set.
pub fn count_induced_components(graph: &GraphInstance, set: &Subset) -> usize {
    induced_dsu(graph, set).1
}

/// Components of the spanning subgraph whose edges are those incident to `C`.
pub fn count_incident_components(graph: &GraphInstance, set: &Subset) -> usize {
    incident_dsu(graph, set).sets()
}

fn induced_dsu(graph: &GraphInstance, set: &Subset) -> (Dsu, usize) {
    let mut d = Dsu::new(graph.n());
    let mut comps = set.count();
    for &(u, v) in graph.edges() {
        if set.contains(u) && set.contains(v) && d.union(u, v) {
            comps -= 1;
        }
    }
    (d, comps)
}

fn incident_dsu(graph: &GraphInstance, set: &Subset) -> Dsu {
    let mut d = Dsu::new(graph.n());
    for &(u, v) in graph.edges() {
        if set.contains(u) || set.contains(v) {
            d.union(u, v);
        }
    }
    d
}

pub struct CdsPotential {
    graph: GraphInstance,
}

impl CdsPotential {
    pub fn graph(&self) -> &GraphInstance {
        &self.graph
    }
}

impl Utility for CdsPotential {
    fn ground_size(&self) -> usize {
        self.graph.n()
    }

    fn value(&self, set: &Subset) -> f64 {
        let n = self.graph.n();
        (n as f64) - count_induced_components(&self.graph, set) as f64 - count_incident_components(&self.graph, set) as f64
    }

    /// Builds both union-find structures for `C` once, then scores each
    /// single-vertex extension from its neighborhood alone.
    fn gains(&self, set: &Subset) -> Vec<f64> {
        let g = &self.graph;
        let (mut induced, _) = induced_dsu(g, set);
        let mut incident = incident_dsu(g, set);
        let mut roots = Vec::new();
        (0..g.n())
            .map(|v| {
                if set.contains(v) {
                    return 0.0;
                }
                // p(C ∪ {v}) = p(C) + 1 − (#components of G[C] adjacent to v)
                roots.clear();
                roots.extend(g.neighbors(v).iter().filter(|&&u| set.contains(u)).map(|&u| induced.find(u)));
                roots.sort_unstable();
                roots.dedup();
                let p_drop = roots.len() as f64 - 1.0;
                // q(C ∪ {v}) = q(C) − (#distinct G⟨C⟩ components among v and its neighbors − 1)
                roots.clear();
                roots.push(incident.find(v));
                roots.extend(g.neighbors(v).iter().map(|&u| incident.find(u)));
                roots.sort_unstable();
                roots.dedup();
                let q_drop = roots.len() as f64 - 1.0;
                p_drop + q_drop
            })
            .collect()
    }
}

/// Unit-weight CDS instance with `δ = 1` and `p = 1`. Needs a connected
/// graph on at least 3 vertices.
pub fn cds_problem(graph: &GraphInstance) -> Result<CoverProblem> {
    if graph.n() < 3 {
        return Err(Error::InvalidInstance(format!("CDS needs at least 3 vertices, got {}", graph.n())));
    }
    if !graph.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    CoverProblem::new(
        graph.name.clone(),
        vec![1.0; graph.n()],
        Arc::new(CdsPotential { graph: graph.clone() }),
        1.0,
        DeltaSource::Integral,
        1.0,
    )
}

/// Orders `C*` so that every prefix induces a connected subgraph: BFS inside
/// `G[C*]` from its smallest vertex, visiting neighbors in index order.
pub fn connected_ordering(graph: &GraphInstance, set: &Subset) -> Result<Vec<usize>> {
    let Some(start) = set.iter().next() else {
        return Ok(Vec::new());
    };
    let mut seen = Subset::empty(graph.n());
    let mut order = Vec::with_capacity(set.count());
    let mut queue = VecDeque::from([start]);
    seen.insert(start);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &w in graph.neighbors(u) {
            if set.contains(w) && !seen.contains(w) {
                seen.insert(w);
                queue.push_back(w);
            }
        }
    }
    if order.len() == set.count() {
        Ok(order)
    } else {
        Err(Error::NotConnected)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subset::all_subsets;
    use crate::zoo::graph::all_connected_graphs;

    fn p4() -> GraphInstance {
        GraphInstance::new("p4", 4, vec![(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    fn s(n: usize, v: &[usize]) -> Subset {
        Subset::from_indices(n, v.iter().copied())
    }

    #[test]
    fn path_component_counts() {
        let g = p4();
        assert_eq!(count_induced_components(&g, &s(4, &[1])), 1);
        assert_eq!(count_incident_components(&g, &s(4, &[1])), 2);
        assert_eq!(count_induced_components(&g, &s(4, &[])), 0);
        assert_eq!(count_incident_components(&g, &s(4, &[])), 4);
        assert_eq!(count_induced_components(&g, &s(4, &[0, 2])), 2);
        assert_eq!(count_incident_components(&g, &Subset::full(4)), 1);
        let tri = GraphInstance::new("tri", 3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(count_induced_components(&tri, &Subset::full(3)), 1);
    }

    #[test]
    fn path_potential_values() {
        let p = cds_problem(&p4()).unwrap();
        assert_eq!(p.g(&s(4, &[])), 0.0);
        assert_eq!(p.g(&s(4, &[1])), 1.0);
        assert_eq!(p.g(&s(4, &[1, 2])), 2.0);
        assert_eq!(p.g_total(), 2.0);
        assert_eq!(p.beta(), 2);
        assert!(p.is_feasible(&s(4, &[1, 2])));
        assert_eq!(p.marginal_gain(1, &s(4, &[])).unwrap(), 1.0);
    }

    #[test]
    fn path_optimum_by_enumeration() {
        let g = p4();
        let p = cds_problem(&g).unwrap();
        let feasible: Vec<Subset> = all_subsets(4).filter(|c| p.is_feasible(c)).collect();
        let best = feasible.iter().map(|c| c.count()).min().unwrap();
        assert_eq!(best, 2);
        let optima: Vec<Vec<usize>> = feasible.iter().filter(|c| c.count() == 2).map(|c| c.to_vec()).collect();
        assert_eq!(optima, vec![vec![1, 2]]);
    }

    #[test]
    fn feasible_iff_connected_dominating() {
        for g in all_connected_graphs(5) {
            let p = cds_problem(&g).unwrap();
            for c in all_subsets(5) {
                let dominating = (0..5).all(|v| c.contains(v) || g.neighbors(v).iter().any(|&u| c.contains(u)));
                let connected = count_induced_components(&g, &c) == 1;
                assert_eq!(p.is_feasible(&c), dominating && connected, "{:?} on {:?}", c, g.edges());
            }
        }
    }

    #[test]
    fn incremental_gains_match_recomputation() {
        for g in all_connected_graphs(5).step_by(7) {
            let u = CdsPotential { graph: g.clone() };
            for c in all_subsets(5) {
                let gains = u.gains(&c);
                let base = u.value(&c);
                for v in (0..5).filter(|&v| !c.contains(v)) {
                    assert_eq!(gains[v], u.value(&c.with(v)) - base);
                }
            }
        }
    }

    #[test]
    fn rejects_disconnected_and_tiny() {
        let g = GraphInstance::new("split", 4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(cds_problem(&g).unwrap_err(), Error::DisconnectedGraph);
        let tiny = GraphInstance::new("edge", 2, vec![(0, 1)]).unwrap();
        assert!(cds_problem(&tiny).is_err());
    }

    #[test]
    fn orderings() {
        let g = p4();
        assert_eq!(connected_ordering(&g, &s(4, &[1, 2])).unwrap(), vec![1, 2]);
        assert_eq!(connected_ordering(&g, &s(4, &[3])).unwrap(), vec![3]);
        assert_eq!(connected_ordering(&g, &s(4, &[0, 2])).unwrap_err(), Error::NotConnected);
        // star with center 2: center reachable first from the smallest leaf
        let star = GraphInstance::new("star", 5, vec![(2, 0), (2, 1), (2, 3), (2, 4)]).unwrap();
        let order = connected_ordering(&star, &s(5, &[2, 3, 4])).unwrap();
        assert_eq!(order[0], 2);
        for k in 1..=order.len() {
            let prefix = Subset::from_indices(5, order[..k].iter().copied());
            assert_eq!(count_induced_components(&star, &prefix), 1);
        }
    }
}
