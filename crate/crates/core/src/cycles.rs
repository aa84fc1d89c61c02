//! Rooted oriented cycles, their signature order, and the minimal cycle at a vertex.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::graph::{Graph, Vertex};
use crate::signature::nabla_ranks;

const FAR: u32 = u32::MAX;

/// A rooted, oriented simple cycle `(x₁, …, x_k)`: `x₁` is the root and the
/// direction of traversal matters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RootedCycle(pub Vec<Vertex>);

impl RootedCycle {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn root(&self) -> Vertex {
        self.0[0]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    /// Checks length ≥ 3, distinct vertices and closing adjacency.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let k = self.0.len();
        if k < 3 || self.0.iter().any(|&v| v >= g.n()) {
            return false;
        }
        let mut seen = self.0.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == k && (0..k).all(|i| g.has_edge(self.0[i], self.0[(i + 1) % k]))
    }
}

/// Outcome of comparing two rooted cycles under `≺`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CycleOrder {
    Less,
    Greater,
    /// Equal length and equal signatures at every position.
    Tie,
}

/// Largest cycle length considered at `n` vertices: `max(3, ⌈ln n⌉)`.
pub fn max_cycle_len(n: usize) -> usize {
    let ln = if n > 1 { (n as f64).ln().ceil() as usize } else { 0 };
    ln.max(3)
}

/// Scratch buffers for per-root breadth-first searches.
pub(crate) struct CycleScratch {
    dist: Vec<u32>,
    branch: Vec<u32>,
    on_path: Vec<bool>,
    touched: Vec<Vertex>,
}

impl CycleScratch {
    pub(crate) fn new(n: usize) -> Self {
        CycleScratch { dist: vec![FAR; n], branch: vec![FAR; n], on_path: vec![false; n], touched: Vec::new() }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.dist[v] = FAR;
            self.branch[v] = FAR;
        }
        self.touched.clear();
    }

    fn visit(&mut self, v: Vertex, d: u32, b: u32) {
        self.dist[v] = d;
        self.branch[v] = b;
        self.touched.push(v);
    }

    /// Length of the shortest cycle through `v`. Leaves exact distances from
    /// `v` for every vertex within half that length.
    pub(crate) fn shortest_cycle(&mut self, g: &Graph, v: Vertex) -> Option<usize> {
        self.reset();
        self.visit(v, 0, FAR);
        for &a in g.neighbors(v) {
            self.visit(a, 1, a as u32);
        }
        let mut best = usize::MAX;
        let mut head = 1;
        while head < self.touched.len() {
            let u = self.touched[head];
            head += 1;
            let du = self.dist[u] as usize;
            if 2 * du + 1 >= best {
                break;
            }
            for &w in g.neighbors(u) {
                if w == v {
                    continue;
                }
                if self.dist[w] == FAR {
                    let b = self.branch[u];
                    self.visit(w, du as u32 + 1, b);
                } else if self.branch[w] != self.branch[u] {
                    best = best.min(du + self.dist[w] as usize + 1);
                }
            }
        }
        (best != usize::MAX).then_some(best)
    }

    /// Full BFS distances from `v`.
    fn full_bfs(&mut self, g: &Graph, v: Vertex) {
        self.reset();
        self.visit(v, 0, FAR);
        let mut head = 0;
        while head < self.touched.len() {
            let u = self.touched[head];
            head += 1;
            for &w in g.neighbors(u) {
                if self.dist[w] == FAR {
                    let d = self.dist[u] + 1;
                    self.visit(w, d, FAR);
                }
            }
        }
    }
}

pub fn shortest_cycle_length_through(g: &Graph, v: Vertex) -> Result<Option<usize>> {
    g.check_vertex(v)?;
    Ok(CycleScratch::new(g.n()).shortest_cycle(g, v))
}

/// All rooted oriented cycles of exactly `len` vertices starting at `v`.
pub fn enumerate_rooted_cycles(g: &Graph, v: Vertex, len: usize) -> Result<Vec<RootedCycle>> {
    g.check_vertex(v)?;
    let max = max_cycle_len(g.n());
    if !(3..=max).contains(&len) {
        return domain(format!("cycle length {len} outside [3, {max}]"));
    }
    let mut scratch = CycleScratch::new(g.n());
    let out = rooted_cycles_of_len(g, v, len, &mut scratch);
    debug_assert!(out.len() as u128 <= (g.n() as u128).pow(3) || Some(len) != scratch.shortest_cycle(g, v));
    Ok(out)
}

/// Rooted cycles of exactly `len` vertices at `v`, without the length cap.
pub(crate) fn rooted_cycles_of_len(g: &Graph, v: Vertex, len: usize, scratch: &mut CycleScratch) -> Vec<RootedCycle> {
    scratch.full_bfs(g, v);
    let mut out = Vec::new();
    let mut path = vec![v];
    scratch.on_path[v] = true;
    enumerate_from(g, len, scratch, &mut path, &mut out);
    scratch.on_path[v] = false;
    out
}

fn enumerate_from(g: &Graph, k: usize, s: &mut CycleScratch, path: &mut Vec<Vertex>, out: &mut Vec<RootedCycle>) {
    let cur = *path.last().expect("non-empty path");
    let root = path[0];
    if path.len() == k {
        if g.has_edge(cur, root) {
            out.push(RootedCycle(path.clone()));
        }
        return;
    }
    let remaining = (k - path.len()) as u32;
    for &w in g.neighbors(cur) {
        if s.on_path[w] || s.dist[w] > remaining {
            continue;
        }
        s.on_path[w] = true;
        path.push(w);
        enumerate_from(g, k, s, path, out);
        path.pop();
        s.on_path[w] = false;
    }
}

/// Compares two cycles of `g` under `≺`: shorter first, then the first
/// position where the signatures differ decides.
pub fn cycle_compare(g: &Graph, x: &RootedCycle, y: &RootedCycle) -> CycleOrder {
    let ranks = nabla_ranks(g);
    cycle_compare_ranked(&ranks, x, y)
}

/// [`cycle_compare`] against precomputed signature ranks.
pub fn cycle_compare_ranked(ranks: &[u32], x: &RootedCycle, y: &RootedCycle) -> CycleOrder {
    match x.len().cmp(&y.len()) {
        Ordering::Less => return CycleOrder::Less,
        Ordering::Greater => return CycleOrder::Greater,
        Ordering::Equal => {}
    }
    for (&a, &b) in x.0.iter().zip(&y.0) {
        match ranks[a].cmp(&ranks[b]) {
            Ordering::Less => return CycleOrder::Less,
            Ordering::Greater => return CycleOrder::Greater,
            Ordering::Equal => {}
        }
    }
    CycleOrder::Tie
}

/// The `≺`-minimal cycle among the shortest cycles rooted at a vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinCycle {
    pub cycle: RootedCycle,
    /// Signature ranks along `cycle`.
    pub ranks: Vec<u32>,
    /// A second, distinct cycle that ties with `cycle`, if any.
    pub tie_with: Option<RootedCycle>,
}

impl MinCycle {
    pub fn tie(&self) -> bool {
        self.tie_with.is_some()
    }
}

pub fn min_cycle_label(g: &Graph, v: Vertex) -> Result<Option<MinCycle>> {
    g.check_vertex(v)?;
    let ranks = nabla_ranks(g);
    Ok(min_cycle_ranked(g, &ranks, v, &mut CycleScratch::new(g.n())))
}

/// Branch-and-bound search for the minimal rooted cycle at `v`.
pub(crate) fn min_cycle_ranked(g: &Graph, ranks: &[u32], v: Vertex, s: &mut CycleScratch) -> Option<MinCycle> {
    let k = s.shortest_cycle(g, v)?;
    let mut search = MinSearch { g, ranks, k, best: None, best_ranks: Vec::new(), tie_with: None };
    let mut path = vec![v];
    let mut path_ranks = vec![ranks[v]];
    s.on_path[v] = true;
    search.descend(s, &mut path, &mut path_ranks);
    s.on_path[v] = false;
    let cycle = search.best.expect("a cycle of the shortest length exists");
    Some(MinCycle { cycle: RootedCycle(cycle), ranks: search.best_ranks, tie_with: search.tie_with.map(RootedCycle) })
}

struct MinSearch<'a> {
    g: &'a Graph,
    ranks: &'a [u32],
    k: usize,
    best: Option<Vec<Vertex>>,
    best_ranks: Vec<u32>,
    tie_with: Option<Vec<Vertex>>,
}

impl MinSearch<'_> {
    fn prefix_cmp(&self, path_ranks: &[u32]) -> Ordering {
        if self.best.is_none() {
            return Ordering::Less;
        }
        path_ranks.cmp(&self.best_ranks[..path_ranks.len()])
    }

    fn descend(&mut self, s: &mut CycleScratch, path: &mut Vec<Vertex>, path_ranks: &mut Vec<u32>) {
        let cur = *path.last().expect("non-empty");
        let root = path[0];
        if path.len() == self.k {
            if !self.g.has_edge(cur, root) {
                return;
            }
            match self.prefix_cmp(path_ranks) {
                Ordering::Less => {
                    self.best = Some(path.clone());
                    self.best_ranks = path_ranks.clone();
                    self.tie_with = None;
                }
                Ordering::Equal => {
                    if self.tie_with.is_none() {
                        self.tie_with = Some(path.clone());
                    }
                }
                Ordering::Greater => {}
            }
            return;
        }
        let remaining = (self.k - path.len()) as u32;
        for &w in self.g.neighbors(cur) {
            if s.on_path[w] || s.dist[w] > remaining {
                continue;
            }
            path_ranks.push(self.ranks[w]);
            if self.prefix_cmp(path_ranks) == Ordering::Greater {
                path_ranks.pop();
                continue;
            }
            s.on_path[w] = true;
            path.push(w);
            self.descend(s, path, path_ranks);
            path.pop();
            s.on_path[w] = false;
            path_ranks.pop();
        }
    }
}
