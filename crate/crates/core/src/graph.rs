//! Simple undirected graphs with append-only node indices.
//!
//! Neighbor lists are kept sorted, so edge queries are a binary search and
//! neighbor iteration is a slice walk. New nodes always receive the next
//! index, which makes growth traces replayable.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Index of a node in its owning [`Graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    /// Raw index.
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for NodeId {
    fn from(v: usize) -> Self {
        NodeId(v)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Undirected simple graph on nodes `0..node_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph with `n` nodes and the given edges.
    ///
    /// Edges are unordered pairs; `(u, v)` and `(v, u)` collapse to one edge.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::NodeOutOfRange { node: w, node_count: n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &set {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { adj, edge_count: set.len() })
    }

    /// The trivial graph: one node, no edges.
    pub fn single_node() -> Self {
        Graph { adj: vec![Vec::new()], edge_count: 0 }
    }

    /// Star with one center (node 0) and `leaves` leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Graph::new(leaves + 1, &edges).expect("star edges are valid")
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::new(n, &edges)
    }

    /// Cycle on `n >= 3` nodes.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(alloc::format!(
                "a cycle needs at least 3 nodes, got {n}"
            )));
        }
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((n - 1, 0));
        Graph::new(n, &edges)
    }

    /// Complete graph on `n` nodes.
    pub fn complete(n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges)
    }

    /// Number of nodes.
    #[inline]
    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges.
    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted neighbors of `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Degree of `v`.
    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Largest degree, 0 for the single node.
    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Whether `u` and `v` are adjacent.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Checks that `v` is a valid node.
    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if v.0 < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { node: v.0, node_count: self.node_count() })
        }
    }

    /// Appends a node connected to every distinct target; returns its id.
    ///
    /// Duplicate targets produce a single edge, so two walkers collapsing on
    /// the same node give the new node degree one.
    pub fn attach_node(&mut self, targets: &[NodeId]) -> Result<NodeId> {
        if targets.is_empty() {
            return Err(Error::EmptyTargets);
        }
        for &t in targets {
            self.check_node(t)?;
        }
        let new = self.node_count();
        let mut list: Vec<usize> = targets.iter().map(|t| t.0).collect();
        list.sort_unstable();
        list.dedup();
        for &t in &list {
            // `new` exceeds every existing index, so the list stays sorted.
            self.adj[t].push(new);
        }
        self.edge_count += list.len();
        self.adj.push(list);
        Ok(NodeId(new))
    }

    /// Dense row-major adjacency matrix with entries 0.0 / 1.0.
    pub fn dense_adjacency(&self) -> Vec<f64> {
        let n = self.node_count();
        let mut a = vec![0.0; n * n];
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                a[u * n + v] = 1.0;
            }
        }
        a
    }

    /// BFS hop distances from `src`; `usize::MAX` marks unreachable nodes.
    pub fn bfs_distances(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.node_count()];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Whether every node is reachable from node 0.
    pub fn is_connected(&self) -> bool {
        self.bfs_distances(0).iter().all(|&d| d != usize::MAX)
    }

    /// Connected with `edge_count == node_count - 1`.
    pub fn is_tree(&self) -> bool {
        self.edge_count + 1 == self.node_count() && self.is_connected()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star4() -> Graph {
        Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    #[test]
    fn trivial_graph() {
        let g = Graph::new(1, &[]).unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g, Graph::single_node());
    }

    #[test]
    fn four_node_star_matrix() {
        let a = star4().dense_adjacency();
        #[rustfmt::skip]
        let expected = [
            0.0, 1.0, 1.0, 1.0,
            1.0, 0.0, 0.0, 0.0,
            1.0, 0.0, 0.0, 0.0,
            1.0, 0.0, 0.0, 0.0,
        ];
        assert_eq!(a, expected);
    }

    #[test]
    fn duplicate_pairs_collapse() {
        let g = Graph::new(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edges().collect::<Vec<_>>(), [(0, 1)]);
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(
            Graph::new(3, &[(0, 5)]),
            Err(Error::NodeOutOfRange { node: 5, node_count: 3 })
        );
        assert_eq!(Graph::new(3, &[(1, 1)]), Err(Error::SelfLoop(1)));
        assert_eq!(Graph::new(0, &[]), Err(Error::EmptyGraph));
    }

    #[test]
    fn attach_reproduces_grown_example() {
        let mut g = star4();
        let v = g.attach_node(&[NodeId(1)]).unwrap();
        assert_eq!(v, NodeId(4));
        let expected = Graph::new(5, &[(0, 1), (0, 2), (0, 3), (1, 4)]).unwrap();
        assert_eq!(g, expected);
    }

    #[test]
    fn attach_to_single_node_gives_path() {
        let mut g = Graph::single_node();
        g.attach_node(&[NodeId(0)]).unwrap();
        assert_eq!(g, Graph::path(2).unwrap());
    }

    #[test]
    fn coincident_targets_give_one_edge() {
        let mut g = star4();
        let v = g.attach_node(&[NodeId(2), NodeId(2)]).unwrap();
        assert_eq!(g.degree(v.0), 1);
        assert_eq!(g.edge_count(), 4);
    }

    #[test]
    fn attach_errors() {
        let mut g = star4();
        assert_eq!(g.attach_node(&[]), Err(Error::EmptyTargets));
        assert!(g.attach_node(&[NodeId(9)]).is_err());
        assert_eq!(g, star4());
    }

    #[test]
    fn edges_are_sorted() {
        let g = Graph::new(4, &[(3, 2), (1, 0), (2, 0), (3, 1)]).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), [(0, 1), (0, 2), (1, 3), (2, 3)]);
    }
}
