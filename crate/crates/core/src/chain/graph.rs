use nalgebra::DMatrix;
use std::collections::{BTreeSet, VecDeque};

use super::{Distribution, MarkovChain, VertexWindow};
use crate::error::{Error, Result};

/// A finite undirected simple graph on vertices `0..vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    degrees: Vec<usize>,
}

impl Graph {
    /// Rejects self-loops, repeated edges and out-of-range endpoints.
    /// Connectivity is checked by [`simple_random_walk`].
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut degrees = vec![0; vertex_count];
        let mut list = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::domain(format!("edge ({u}, {v}) outside {vertex_count} vertices")));
            }
            if u == v {
                return Err(Error::domain(format!("self-loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::domain(format!("repeated edge ({u}, {v})")));
            }
            degrees[u] += 1;
            degrees[v] += 1;
            list.push((u, v));
        }
        Ok(Self { vertex_count, edges: list, degrees })
    }

    /// Vertex count inferred from the largest endpoint.
    pub fn from_edges(edges: &[(usize, usize)]) -> Result<Self> {
        let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Self::new(n, edges)
    }

    pub fn path(n: usize) -> Self {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(n, &e).expect("path graph")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a simple cycle needs at least 3 vertices");
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::new(n, &e).expect("cycle graph")
    }

    /// Centre 0 with `leaves` pendant vertices.
    pub fn star(leaves: usize) -> Self {
        let e: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Self::new(leaves + 1, &e).expect("star graph")
    }

    pub fn complete(n: usize) -> Self {
        let e: Vec<_> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
        Self::new(n, &e).expect("complete graph")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, x: usize) -> usize {
        self.degrees[x]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; self.vertex_count];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.vertex_count
    }
}

/// `K(x, y) = 1/d(y)` on edges, `pi(x) = d(x) / 2m`.
pub fn simple_random_walk(g: &Graph) -> Result<MarkovChain> {
    let n = g.vertex_count();
    if g.edge_count() == 0 {
        return Err(Error::domain("graph has no edges"));
    }
    if let Some(x) = (0..n).find(|&x| g.degree(x) == 0) {
        return Err(Error::domain(format!("vertex {x} is isolated")));
    }
    if !g.is_connected() {
        return Err(Error::domain("graph is not connected"));
    }
    let mut k = DMatrix::zeros(n, n);
    for &(u, v) in g.edges() {
        k[(u, v)] = 1.0 / g.degree(v) as f64;
        k[(v, u)] = 1.0 / g.degree(u) as f64;
    }
    let two_m = 2.0 * g.edge_count() as f64;
    let pi = (0..n).map(|x| g.degree(x) as f64 / two_m).collect();
    MarkovChain::new(VertexWindow::finite(n - 1), k, Distribution::new(pi)?)
}
