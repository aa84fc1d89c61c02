//! 2-core extraction and the decomposition of everything outside it.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::graph::{Graph, Vertex, VertexSet};

/// Membership mask of the 2-core, ignoring vertices flagged in `removed`.
pub(crate) fn core_mask(g: &Graph, removed: &[bool]) -> Vec<bool> {
    let n = g.n();
    let mut alive: Vec<bool> = (0..n).map(|v| !removed.get(v).copied().unwrap_or(false)).collect();
    let mut deg: Vec<usize> =
        (0..n).map(|v| if alive[v] { g.neighbors(v).iter().filter(|&&w| alive[w]).count() } else { 0 }).collect();
    let mut queue: VecDeque<Vertex> = (0..n).filter(|&v| alive[v] && deg[v] <= 1).collect();
    while let Some(v) = queue.pop_front() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &w in g.neighbors(v) {
            if alive[w] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    queue.push_back(w);
                }
            }
        }
    }
    alive
}

/// `R(G)`: vertex set of the 2-core (empty when the graph is a forest).
pub fn two_core(g: &Graph) -> VertexSet {
    let mask = core_mask(g, &[]);
    VertexSet::from_sorted((0..g.n()).filter(|&v| mask[v]).collect())
}

/// Size of the 2-core of `g` with `removed` deleted.
pub(crate) fn core_size_without(g: &Graph, removed: &[Vertex]) -> usize {
    let mut mask = vec![false; g.n()];
    for &v in removed {
        mask[v] = true;
    }
    core_mask(g, &mask).into_iter().filter(|&b| b).count()
}

/// A tree hanging off the core through a single edge `attachment–root`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PendantTree {
    /// Core endpoint of the attaching edge.
    pub attachment: Vertex,
    /// Tree endpoint of the attaching edge.
    pub root: Vertex,
    /// All tree vertices, sorted.
    pub vertices: Vec<Vertex>,
}

/// Partition of `V` into the 2-core, pendant trees and acyclic components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorePartition {
    pub core: VertexSet,
    pub pendant_trees: Vec<PendantTree>,
    pub acyclic_components: Vec<Vec<Vertex>>,
}

impl CorePartition {
    /// Components of the graph induced by `V \ R(G)`, in both flavors.
    pub fn outside_components(&self) -> impl Iterator<Item = &[Vertex]> {
        self.pendant_trees
            .iter()
            .map(|t| t.vertices.as_slice())
            .chain(self.acyclic_components.iter().map(Vec::as_slice))
    }
}

pub fn core_partition(g: &Graph) -> CorePartition {
    let n = g.n();
    let in_core = core_mask(g, &[]);
    let mut seen = in_core.clone();
    let mut pendant_trees = Vec::new();
    let mut acyclic_components = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut attach: Option<(Vertex, Vertex)> = None;
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            i += 1;
            for &w in g.neighbors(u) {
                if in_core[w] {
                    // a peeled piece meets the core through at most one edge
                    assert!(attach.is_none(), "peeled component with two core edges");
                    attach = Some((w, u));
                } else if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        comp.sort_unstable();
        match attach {
            Some((attachment, root)) => pendant_trees.push(PendantTree { attachment, root, vertices: comp }),
            None => acyclic_components.push(comp),
        }
    }
    CorePartition {
        core: VertexSet::from_sorted((0..n).filter(|&v| in_core[v]).collect()),
        pendant_trees,
        acyclic_components,
    }
}

/// BFS distances from a set of sources; `u32::MAX` marks unreachable.
pub(crate) fn multi_source_bfs(g: &Graph, sources: impl IntoIterator<Item = Vertex>, max_depth: u32) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.n()];
    let mut queue = VecDeque::new();
    for s in sources {
        if dist[s] == u32::MAX {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        if dist[u] >= max_depth {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w] == u32::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Members of `t` (a subset of the core) within distance 2 of `V \ R(G)`.
pub fn peripheral_vertices(g: &Graph, t: &VertexSet) -> Result<VertexSet> {
    let in_core = core_mask(g, &[]);
    if let Some(&v) = t.iter().find(|&&v| v >= g.n() || !in_core[v]) {
        return domain(format!("vertex {v} is not in the 2-core"));
    }
    let dist = multi_source_bfs(g, (0..g.n()).filter(|&v| !in_core[v]), 2);
    Ok(VertexSet::from_sorted(t.iter().copied().filter(|&v| dist[v] <= 2).collect()))
}

/// Does deleting `u` and `v` commute with taking the 2-core?
pub fn is_interior_pair(g: &Graph, u: Vertex, v: Vertex) -> Result<bool> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return domain("interior pair needs two distinct vertices");
    }
    let in_core = core_mask(g, &[]);
    if !in_core[u] || !in_core[v] {
        return domain(format!("pair ({u},{v}) not inside the 2-core"));
    }
    let core_size = in_core.iter().filter(|&&b| b).count();
    // R(G - {u,v}) is always a subset of R(G) \ {u,v}; compare sizes
    Ok(core_size_without(g, &[u, v]) == core_size - 2)
}

/// Eccentricity of `s`, or `None` if some vertex is unreachable from it.
fn eccentricity(g: &Graph, s: Vertex, dist: &mut [u32], queue: &mut VecDeque<Vertex>) -> Option<u32> {
    dist.fill(u32::MAX);
    dist[s] = 0;
    queue.clear();
    queue.push_back(s);
    let mut reached = 1;
    let mut ecc = 0;
    while let Some(u) = queue.pop_front() {
        ecc = dist[u];
        for &w in g.neighbors(u) {
            if dist[w] == u32::MAX {
                dist[w] = dist[u] + 1;
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    (reached == g.n()).then_some(ecc)
}

/// Graph diameter; `None` means infinite (disconnected).
pub fn diameter(g: &Graph) -> Option<usize> {
    let mut dist = vec![0u32; g.n()];
    let mut queue = VecDeque::new();
    let mut best = 0;
    for s in 0..g.n() {
        best = best.max(eccentricity(g, s, &mut dist, &mut queue)? as usize);
    }
    Some(best)
}

/// `diam(G) < bound`, stopping at the first eccentricity that reaches it.
pub fn diameter_below(g: &Graph, bound: f64) -> bool {
    let mut dist = vec![0u32; g.n()];
    let mut queue = VecDeque::new();
    (0..g.n()).all(|s| matches!(eccentricity(g, s, &mut dist, &mut queue), Some(e) if (e as f64) < bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles_joined_by_path() -> Graph {
        // triangles {0,1,2} and {3,4,5}; path 2–6–7–3 of length 3
        Graph::from_edges(8, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 6), (6, 7), (7, 3)]).unwrap()
    }

    #[test]
    fn two_core_examples() {
        assert!(two_core(&Graph::path(6)).is_empty());
        let mut edges: Vec<_> = Graph::cycle(5).edges().collect();
        edges.push((0, 5));
        let g = Graph::from_edges(6, edges).unwrap();
        assert_eq!(two_core(&g), VertexSet::full(5));
        assert_eq!(two_core(&two_triangles_joined_by_path()), VertexSet::full(8));
    }

    #[test]
    fn partition_examples() {
        let forest = Graph::from_edges(5, [(0, 1), (2, 3)]).unwrap();
        let p = core_partition(&forest);
        assert!(p.core.is_empty() && p.pendant_trees.is_empty());
        assert_eq!(p.acyclic_components, vec![vec![0, 1], vec![2, 3], vec![4]]);

        // triangle 0,1,2 with path 0–3–4
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4)]).unwrap();
        let p = core_partition(&g);
        assert_eq!(p.core, VertexSet::full(3));
        assert_eq!(p.pendant_trees, vec![PendantTree { attachment: 0, root: 3, vertices: vec![3, 4] }]);

        let p = core_partition(&Graph::complete(4));
        assert_eq!(p.core.len(), 4);
        assert!(p.pendant_trees.is_empty() && p.acyclic_components.is_empty());
    }

    #[test]
    fn peripheral_examples() {
        let c6 = Graph::cycle(6);
        assert!(peripheral_vertices(&c6, &VertexSet::full(6)).unwrap().is_empty());

        let g = Graph::from_edges(4, [(0, 1), (1, 2), (0, 2), (0, 3)]).unwrap();
        assert_eq!(peripheral_vertices(&g, &VertexSet::full(3)).unwrap(), VertexSet::full(3));
        assert!(peripheral_vertices(&g, &VertexSet::from_sorted(vec![3])).is_err());

        let mut edges: Vec<_> = Graph::cycle(8).edges().collect();
        edges.push((0, 8));
        let g = Graph::from_edges(9, edges).unwrap();
        assert!(peripheral_vertices(&g, &VertexSet::from_sorted(vec![4])).unwrap().is_empty());
    }

    #[test]
    fn interior_pair_examples() {
        let mut edges: Vec<_> = Graph::complete(4).edges().collect();
        edges.extend(Graph::complete(4).edges().map(|(a, b)| (a + 4, b + 4)));
        let g = Graph::from_edges(8, edges).unwrap();
        assert!(is_interior_pair(&g, 0, 5).unwrap());
        let c5 = Graph::cycle(5);
        for u in 0..5 {
            for v in 0..5 {
                if u != v {
                    assert!(!is_interior_pair(&c5, u, v).unwrap());
                }
            }
        }
        assert!(is_interior_pair(&c5, 1, 1).is_err());
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(diameter(&Graph::complete(4)), Some(1));
        assert_eq!(diameter(&Graph::path(5)), Some(4));
        assert_eq!(diameter(&Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap()), None);
        assert!(diameter_below(&Graph::path(5), 4.5));
        assert!(!diameter_below(&Graph::path(5), 4.0));
    }

    #[test]
    fn peeled_vertices_had_low_degree() {
        let g = crate::sample::gnp_sample(400, 2.5 / 400.0, 8).unwrap();
        let core = two_core(&g);
        let (h, _) = g.induced_subgraph(&core).unwrap();
        assert!((0..h.n()).all(|v| h.degree(v) >= 2));
        assert_eq!(two_core(&h).len(), h.n());
        let p = core_partition(&g);
        let total = p.core.len() + p.outside_components().map(|c| c.len()).sum::<usize>();
        assert_eq!(total, g.n());
    }
}
