use crate::error::{Error, Result};
use crate::zoo::dsu::Dsu;

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphInstance {
    pub name: String,
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl GraphInstance {
    /// Rejects loops, repeated edges and out-of-range endpoints. Edges are
    /// stored as given; adjacency lists are sorted.
    pub fn new(name: impl Into<String>, n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInstance(format!("edge ({u}, {v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(Error::InvalidInstance(format!("self-loop at vertex {u}")));
            }
            if adj[u].contains(&v) {
                return Err(Error::InvalidInstance(format!("repeated edge ({u}, {v})")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(GraphInstance {
            name: name.into(),
            n,
            edges,
            adj,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        let mut d = Dsu::new(self.n);
        for &(u, v) in &self.edges {
            d.union(u, v);
        }
        d.sets() <= 1
    }
}

/// Enumerates every labeled connected simple graph on `n` vertices.
pub fn all_connected_graphs(n: usize) -> impl Iterator<Item = GraphInstance> {
    assert!(n <= 7, "labeled graph enumeration capped at 7 vertices");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let m = pairs.len();
    (0u64..1 << m).filter_map(move |mask| {
        let edges: Vec<(usize, usize)> = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
        let g = GraphInstance::new(format!("K{n}-mask{mask}"), n, edges).ok()?;
        g.is_connected().then_some(g)
    })
}
