//! Simple undirected graphs on dense vertex ids and the set-level primitives
//! used throughout the crate.

use std::fmt;

use crate::error::{domain, Result};

/// A vertex id. Graphs on `n` vertices use exactly the ids `0..n`.
pub type Vertex = usize;

/// Simple undirected graph with sorted adjacency lists.
///
/// Invariants: no self-loops, no parallel edges, symmetric adjacency.
/// Immutable once built.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    m: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges().collect::<Vec<_>>())
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], m: 0 }
    }

    /// Builds a graph, rejecting self-loops, duplicate edges and ids `>= n`.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return domain(format!("edge ({u},{v}) has an id >= n={n}"));
            }
            if u == v {
                return domain(format!("self-loop at {u}"));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut m = 0;
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            if list.len() != before {
                return domain(format!("duplicate edge at vertex {u}"));
            }
            m += list.len();
        }
        Ok(Graph { adj, m: m / 2 })
    }

    /// Builds from pre-validated, symmetric, sorted adjacency lists.
    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<Vertex>>) -> Self {
        let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
        debug_assert!(adj.iter().enumerate().all(|(u, l)| {
            l.windows(2).all(|w| w[0] < w[1]) && l.iter().all(|&v| v != u && adj[v].binary_search(&u).is_ok())
        }));
        Graph { adj, m }
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let adj = (0..n).map(|u| (0..n).filter(|&v| v != u).collect()).collect();
        Graph::from_sorted_adjacency(adj)
    }

    /// Cycle `0–1–…–(n-1)–0`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    /// Path `0–1–…–(n-1)`.
    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() { (u, v) } else { (v, u) };
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        d.sort_unstable();
        d
    }

    /// Relabels vertex `v` as `perm[v]`. `perm` must be a permutation of `0..n`.
    pub fn permute(&self, perm: &[Vertex]) -> Graph {
        assert_eq!(perm.len(), self.n());
        let mut adj = vec![Vec::new(); self.n()];
        for (u, list) in self.adj.iter().enumerate() {
            let nu = perm[u];
            adj[nu] = list.iter().map(|&v| perm[v]).collect();
            adj[nu].sort_unstable();
        }
        Graph::from_sorted_adjacency(adj)
    }

    /// Is `perm` an automorphism of this graph?
    pub fn is_automorphism(&self, perm: &[Vertex]) -> bool {
        perm.len() == self.n() && self.edges().all(|(u, v)| self.has_edge(perm[u], perm[v]))
    }

    fn check(&self, set: &VertexSet) -> Result<()> {
        match set.as_slice().last() {
            Some(&v) if v >= self.n() => domain(format!("vertex {v} out of range (n={})", self.n())),
            _ => Ok(()),
        }
    }

    pub(crate) fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v >= self.n() {
            return domain(format!("vertex {v} out of range (n={})", self.n()));
        }
        Ok(())
    }

    /// `N(U)`: all neighbors of members of `U`, minus `U` itself.
    pub fn set_neighborhood(&self, set: &VertexSet) -> Result<VertexSet> {
        self.check(set)?;
        let mut out = Vec::new();
        for &u in set.iter() {
            out.extend(self.adj[u].iter().copied().filter(|v| !set.contains(*v)));
        }
        Ok(VertexSet::from_unsorted(out))
    }

    /// Union of the closed neighborhoods `{u} ∪ N(u)` over `u ∈ U`.
    pub fn closed_neighborhood(&self, set: &VertexSet) -> Result<VertexSet> {
        self.check(set)?;
        let mut out: Vec<Vertex> = set.iter().copied().collect();
        for &u in set.iter() {
            out.extend_from_slice(&self.adj[u]);
        }
        Ok(VertexSet::from_unsorted(out))
    }

    /// Number of distinct edges with one endpoint in `a` and the other in `b`.
    /// An edge with both endpoints in `a ∩ b` is counted once.
    pub fn cross_edge_count(&self, a: &VertexSet, b: &VertexSet) -> Result<usize> {
        self.check(a)?;
        self.check(b)?;
        let mut count = 0;
        for &x in a.iter() {
            for &y in &self.adj[x] {
                if !b.contains(y) {
                    continue;
                }
                // the reverse orientation also qualifies: count the edge once
                if a.contains(y) && b.contains(x) && y < x {
                    continue;
                }
                count += 1;
            }
        }
        Ok(count)
    }

    /// `σ(U)`: vertices outside `U` with exactly one neighbor in `U`.
    pub fn sigma(&self, set: &VertexSet) -> Result<VertexSet> {
        let boundary = self.set_neighborhood(set)?;
        Ok(VertexSet::from_sorted(
            boundary
                .iter()
                .copied()
                .filter(|&v| self.adj[v].iter().filter(|&&w| set.contains(w)).count() == 1)
                .collect(),
        ))
    }

    /// Induced subgraph on `set`. Vertex `set[i]` becomes `i`; the returned
    /// vector lists the old ids in new-id order.
    pub fn induced_subgraph(&self, set: &VertexSet) -> Result<(Graph, Vec<Vertex>)> {
        self.check(set)?;
        Ok(self.induced_unchecked(set.as_slice()))
    }

    /// Induced subgraph on a sorted, duplicate-free list of in-range ids.
    pub(crate) fn induced_unchecked(&self, keep: &[Vertex]) -> (Graph, Vec<Vertex>) {
        let mut new_id = vec![usize::MAX; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v] = i;
        }
        let adj = keep
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter_map(|&w| (new_id[w] != usize::MAX).then_some(new_id[w]))
                    .collect()
            })
            .collect();
        (Graph::from_sorted_adjacency(adj), keep.to_vec())
    }

    /// The graph with the listed vertices deleted (remaining ids compacted in order).
    pub fn remove_vertices(&self, removed: &[Vertex]) -> Graph {
        let keep: Vec<Vertex> = (0..self.n()).filter(|v| !removed.contains(v)).collect();
        self.induced_unchecked(&keep).0
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Sorted, duplicate-free set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn from_unsorted(mut v: Vec<Vertex>) -> Self {
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    /// Caller guarantees `v` is strictly increasing.
    pub fn from_sorted(v: Vec<Vertex>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        VertexSet(v)
    }

    pub fn full(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Vertex> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|&v| !other.contains(v)).collect())
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<T: IntoIterator<Item = Vertex>>(iter: T) -> Self {
        VertexSet::from_unsorted(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a Vertex;
    type IntoIter = std::slice::Iter<'a, Vertex>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(v: &[Vertex]) -> VertexSet {
        VertexSet::from_unsorted(v.to_vec())
    }

    #[test]
    fn set_neighborhood_examples() {
        let p3 = Graph::path(3);
        assert_eq!(p3.set_neighborhood(&vs(&[1])).unwrap(), vs(&[0, 2]));
        assert!(p3.set_neighborhood(&vs(&[0, 1, 2])).unwrap().is_empty());
        let c5 = Graph::cycle(5);
        assert_eq!(c5.set_neighborhood(&vs(&[0, 1])).unwrap(), vs(&[2, 4]));
        assert!(c5.set_neighborhood(&vs(&[7])).is_err());
    }

    #[test]
    fn closed_neighborhood_examples() {
        let k3 = Graph::complete(3);
        assert_eq!(k3.closed_neighborhood(&vs(&[0])).unwrap(), vs(&[0, 1, 2]));
        assert_eq!(Graph::empty(4).closed_neighborhood(&vs(&[2])).unwrap(), vs(&[2]));
        assert_eq!(Graph::cycle(5).closed_neighborhood(&vs(&[0])).unwrap(), vs(&[0, 1, 4]));
    }

    #[test]
    fn cross_edge_count_examples() {
        let k3 = Graph::complete(3);
        let all = vs(&[0, 1, 2]);
        assert_eq!(k3.cross_edge_count(&all, &all).unwrap(), 3);
        assert_eq!(k3.cross_edge_count(&vs(&[0]), &vs(&[1, 2])).unwrap(), 2);
        let c4 = Graph::cycle(4);
        assert_eq!(c4.cross_edge_count(&vs(&[0, 1]), &vs(&[1, 2])).unwrap(), 2);
    }

    #[test]
    fn sigma_examples() {
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(star.sigma(&vs(&[0])).unwrap(), vs(&[1, 2, 3]));
        assert!(Graph::complete(4).sigma(&vs(&[0, 1])).unwrap().is_empty());
        assert_eq!(Graph::cycle(5).sigma(&vs(&[0, 1])).unwrap(), vs(&[2, 4]));
    }

    #[test]
    fn induced_subgraph_examples() {
        let k4 = Graph::complete(4);
        let (k3, map) = k4.induced_subgraph(&vs(&[0, 2, 3])).unwrap();
        assert_eq!(k3, Graph::complete(3));
        assert_eq!(map, vec![0, 2, 3]);
        let c5 = Graph::cycle(5);
        let (h, _) = c5.induced_subgraph(&vs(&[0, 1, 3])).unwrap();
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        let (same, _) = c5.induced_subgraph(&VertexSet::full(5)).unwrap();
        assert_eq!(same, c5);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::from_edges(3, [(0, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
    }

    #[test]
    fn permute_preserves_structure() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let h = g.permute(&[3, 2, 1, 0]);
        assert_eq!(h.m(), 3);
        assert!(h.has_edge(3, 2) && h.has_edge(1, 0));
        assert!(g.is_automorphism(&[3, 2, 1, 0]));
        assert!(!g.is_automorphism(&[1, 0, 2, 3]));
    }
}
