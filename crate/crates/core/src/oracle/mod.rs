//! Exact automorphism groups, pinned isomorphisms and canonical forms by
//! color refinement plus backtracking.
//!
//! These are the reference answers the heuristic canonical labeling is
//! checked against. They never guess: if a search exceeds its node budget
//! the result is [`Error::Undecided`](crate::error::Error::Undecided).

mod iso;
mod refine;
mod search;

use num_bigint::BigUint;

use crate::error::Result;
use crate::graph::{Graph, Vertex};
use crate::structure::two_core;

pub use refine::refined_colors;

/// Limit on search-tree nodes for a single oracle call.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: 2_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutGroup {
    /// Each generator maps vertex `v` to `gen[v]`.
    pub generators: Vec<Vec<Vertex>>,
    pub order: BigUint,
}

impl AutGroup {
    pub fn is_trivial(&self) -> bool {
        self.order == BigUint::from(1u32)
    }

    /// Smallest member of each vertex's orbit, for a graph on `n` vertices.
    pub fn orbits(&self, n: usize) -> Vec<Vertex> {
        let mut o = search::Orbits::new(n);
        for g in &self.generators {
            o.absorb(g);
        }
        (0..n).map(|v| o.find(v)).collect()
    }
}

pub fn automorphism_group(g: &Graph) -> Result<AutGroup> {
    automorphism_group_with(g, Budget::default())
}

pub fn automorphism_group_with(g: &Graph, budget: Budget) -> Result<AutGroup> {
    let r = search::group(g, refine::initial_colors(g), budget)?;
    debug_assert!(r.generators.iter().all(|p| g.is_automorphism(p)));
    Ok(AutGroup { generators: r.generators, order: r.order })
}

pub fn is_rigid(g: &Graph) -> Result<bool> {
    Ok(automorphism_group(g)?.is_trivial())
}

/// The subgraph induced by the 2-core, with its vertices renumbered in
/// increasing order.
pub fn core_graph(g: &Graph) -> Graph {
    g.induced_unchecked(two_core(g).as_slice()).0
}

/// Is the automorphism group of the 2-core trivial? An empty core counts
/// as trivial.
pub fn core_aut_trivial(g: &Graph) -> Result<bool> {
    is_rigid(&core_graph(g))
}

/// An isomorphism `G → H` (`map[g] = h`) honoring every `(g, h)` pin.
pub fn constrained_isomorphism(g: &Graph, h: &Graph, pins: &[(Vertex, Vertex)]) -> Result<Option<Vec<Vertex>>> {
    constrained_isomorphism_with(g, h, pins, Budget::default())
}

pub fn constrained_isomorphism_with(
    g: &Graph,
    h: &Graph,
    pins: &[(Vertex, Vertex)],
    budget: Budget,
) -> Result<Option<Vec<Vertex>>> {
    iso::constrained(g, h, pins, budget)
}

/// Canonical form computed by exhaustive search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleCanon {
    /// `labeling[v]` is the canonical id of `v`.
    pub labeling: Vec<usize>,
    /// Relabeled edges `(a, b)`, `a < b`, sorted.
    pub form: Vec<(usize, usize)>,
}

pub fn oracle_canonical_form(g: &Graph) -> Result<OracleCanon> {
    oracle_canonical_form_with(g, Budget::default())
}

pub fn oracle_canonical_form_with(g: &Graph, budget: Budget) -> Result<OracleCanon> {
    let r = search::canonical(g, refine::initial_colors(g), budget)?;
    Ok(OracleCanon { labeling: r.labeling, form: r.edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{gnp_sample, random_permutation, rng_from_seed};

    fn order(g: &Graph) -> u64 {
        automorphism_group(g).unwrap().order.try_into().unwrap()
    }

    #[test]
    fn small_orders() {
        assert_eq!(order(&Graph::complete(3)), 6);
        assert_eq!(order(&Graph::path(3)), 2);
        assert_eq!(order(&Graph::cycle(5)), 10);
        assert_eq!(order(&Graph::complete(5)), 120);
        assert_eq!(order(&Graph::empty(4)), 24);
        assert_eq!(order(&Graph::empty(0)), 1);
        // Petersen graph
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((i + 5, (i + 2) % 5 + 5));
        }
        assert_eq!(order(&Graph::from_edges(10, e).unwrap()), 120);
    }

    #[test]
    fn smallest_rigid_graph() {
        // triangle 2,3,5 with tails 2–1–0 and 3–4
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (3, 5)]).unwrap();
        let a = automorphism_group(&g).unwrap();
        assert!(a.is_trivial() && a.generators.is_empty());
        assert!(is_rigid(&Graph::empty(1)).unwrap());
        assert!(!is_rigid(&Graph::from_edges(4, [(0, 1)]).unwrap()).unwrap());
    }

    #[test]
    fn core_examples() {
        assert!(core_aut_trivial(&Graph::path(7)).unwrap());
        let mut e: Vec<_> = Graph::cycle(5).edges().collect();
        e.extend([(0, 5), (2, 6)]);
        assert!(!core_aut_trivial(&Graph::from_edges(7, e).unwrap()).unwrap());
        let bowtie = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)]).unwrap();
        assert_eq!(order(&core_graph(&bowtie)), 8);
    }

    #[test]
    fn constrained_examples() {
        let g = gnp_sample(12, 0.3, 1).unwrap();
        assert!(constrained_isomorphism(&g, &g, &[]).unwrap().is_some());
        let c4 = Graph::cycle(4);
        let map = constrained_isomorphism(&c4, &c4, &[(0, 1)]).unwrap().unwrap();
        assert_eq!(map[0], 1);
        assert!(c4.is_automorphism(&map));
        assert!(constrained_isomorphism(&Graph::path(3), &Graph::complete(3), &[(0, 0)]).unwrap().is_none());
        // pins that no isomorphism honors
        assert!(constrained_isomorphism(&Graph::path(3), &Graph::path(3), &[(0, 1)]).unwrap().is_none());
        assert!(constrained_isomorphism(&c4, &c4, &[(0, 0), (1, 2)]).unwrap().is_none());
    }

    #[test]
    fn relabeled_graphs_are_found_isomorphic() {
        let mut rng = rng_from_seed(5);
        for seed in 0..20 {
            let g = gnp_sample(40, 0.1, seed).unwrap();
            let perm = random_permutation(40, &mut rng);
            let h = g.permute(&perm);
            let map = constrained_isomorphism(&g, &h, &[]).unwrap().expect("isomorphic");
            assert!(g.edges().all(|(a, b)| h.has_edge(map[a], map[b])));
            assert_eq!(oracle_canonical_form(&g).unwrap().form, oracle_canonical_form(&h).unwrap().form);
        }
    }

    #[test]
    fn canonical_form_of_symmetric_graphs() {
        let c = Graph::cycle(8);
        let f = oracle_canonical_form(&c).unwrap();
        let h = c.permute(&[3, 5, 7, 1, 0, 2, 4, 6]);
        assert_eq!(f.form, oracle_canonical_form(&h).unwrap().form);
        assert_eq!(c.permute(&f.labeling).edges().collect::<Vec<_>>(), f.form);
        assert_ne!(f.form, oracle_canonical_form(&Graph::from_edges(8, Graph::cycle(4).edges().chain([(4, 5), (5, 6), (6, 7), (4, 7)])).unwrap()).unwrap().form);
    }

    #[test]
    fn budget_exhaustion_is_undecided() {
        let err = automorphism_group_with(&Graph::empty(30), Budget { max_nodes: 5 }).unwrap_err();
        assert!(matches!(err, crate::error::Error::Undecided(_)));
    }
}
