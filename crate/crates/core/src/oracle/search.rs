//! Individualization-refinement search trees.

use num_bigint::BigUint;

use super::refine::{individualize, refine, target_cell, Trace};
use super::Budget;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Union-find over vertices, used for orbits of the generators found so far.
pub(crate) struct Orbits {
    parent: Vec<usize>,
}

impl Orbits {
    pub(crate) fn new(n: usize) -> Self {
        Orbits { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    pub(crate) fn absorb(&mut self, gen: &[Vertex]) {
        for (v, &w) in gen.iter().enumerate() {
            self.union(v, w);
        }
    }
}

struct Counter {
    nodes: u64,
    limit: u64,
}

impl Counter {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::Undecided(format!("search exceeded {} nodes", self.limit)));
        }
        Ok(())
    }
}

/// Leaf coloring → permutation: `lab[v]` is the position of `v`.
fn as_positions(colors: &[u32]) -> Vec<usize> {
    colors.iter().map(|&c| c as usize).collect()
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

/// `γ = λ⁻¹ ∘ ζ`: maps each vertex to the vertex holding its position in `λ`.
fn leaf_map(zeta: &[usize], lambda_inv: &[usize]) -> Vec<Vertex> {
    zeta.iter().map(|&pos| lambda_inv[pos]).collect()
}

pub(crate) struct GroupResult {
    pub generators: Vec<Vec<Vertex>>,
    pub order: BigUint,
}

/// Generators and exact order of the automorphisms of `g` preserving `start`.
pub(crate) fn group(g: &Graph, start: Vec<u32>, budget: Budget) -> Result<GroupResult> {
    let n = g.n();
    let mut counter = Counter { nodes: 0, limit: budget.max_nodes };
    let mut colors = start;
    let mut traces = vec![refine(g, &mut colors)];
    // the first path: node colorings and the vertex chosen at each level
    let mut path: Vec<(Vec<u32>, Vec<Vertex>, Vertex)> = Vec::new();
    while let Some(cell) = target_cell(&colors) {
        counter.tick()?;
        let v = cell[0];
        let mut child = individualize(&colors, v);
        traces.push(refine(g, &mut child));
        path.push((colors, cell, v));
        colors = child;
    }
    let zeta = as_positions(&colors);
    let mut generators: Vec<Vec<Vertex>> = Vec::new();
    let mut orbits = Orbits::new(n);
    let mut order = BigUint::from(1u32);
    for level in (0..path.len()).rev() {
        let (node, cell, v) = &path[level];
        for &w in cell.iter().skip(1) {
            if orbits.find(w) == orbits.find(*v) {
                continue;
            }
            let mut child = individualize(node, w);
            let t = refine(g, &mut child);
            if t != traces[level + 1] {
                continue;
            }
            if let Some(gamma) = find_equivalent(g, child, level + 1, &traces, &zeta, &mut counter)? {
                orbits.absorb(&gamma);
                generators.push(gamma);
            }
        }
        let root = orbits.find(*v);
        let size = cell.iter().filter(|&&x| orbits.find(x) == root).count();
        order *= BigUint::from(size);
    }
    Ok(GroupResult { generators, order })
}

/// Depth-first search below `colors` for a leaf equivalent to `zeta`.
fn find_equivalent(
    g: &Graph,
    colors: Vec<u32>,
    depth: usize,
    traces: &[Trace],
    zeta: &[usize],
    counter: &mut Counter,
) -> Result<Option<Vec<Vertex>>> {
    counter.tick()?;
    let Some(cell) = target_cell(&colors) else {
        let gamma = leaf_map(zeta, &invert(&as_positions(&colors)));
        return Ok(g.is_automorphism(&gamma).then_some(gamma));
    };
    for &x in &cell {
        let mut child = individualize(&colors, x);
        let t = refine(g, &mut child);
        if traces.get(depth + 1) != Some(&t) {
            continue;
        }
        if let Some(gamma) = find_equivalent(g, child, depth + 1, traces, zeta, counter)? {
            return Ok(Some(gamma));
        }
    }
    Ok(None)
}

/// Result of the canonical search: `labeling[v]` is the new id of `v`.
pub(crate) struct CanonResult {
    pub labeling: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

/// Best leaf so far: traces along its path, certificate, positions.
type Leaf = (Vec<Trace>, Vec<(usize, usize)>, Vec<usize>);

struct CanonSearch<'a> {
    g: &'a Graph,
    counter: Counter,
    best: Option<Leaf>,
    generators: Vec<Vec<Vertex>>,
}

fn certificate(g: &Graph, lab: &[usize]) -> Vec<(usize, usize)> {
    let mut e: Vec<(usize, usize)> = g
        .edges()
        .map(|(u, v)| {
            let (a, b) = (lab[u], lab[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    e.sort_unstable();
    e
}

impl CanonSearch<'_> {
    fn visit(&mut self, colors: Vec<u32>, prefix: &mut Vec<Vertex>, traces: &mut Vec<Trace>) -> Result<()> {
        self.counter.tick()?;
        if let Some((best_traces, _, _)) = &self.best {
            let k = traces.len().min(best_traces.len());
            if traces[..k] > best_traces[..k] {
                return Ok(());
            }
        }
        let Some(cell) = target_cell(&colors) else {
            let lab = as_positions(&colors);
            let cert = certificate(self.g, &lab);
            match &self.best {
                Some((bt, bc, blab)) => match (&traces[..], &cert[..]).cmp(&(&bt[..], &bc[..])) {
                    std::cmp::Ordering::Less => self.best = Some((traces.clone(), cert, lab)),
                    std::cmp::Ordering::Equal => {
                        let gamma = leaf_map(blab, &invert(&lab));
                        debug_assert!(self.g.is_automorphism(&gamma));
                        self.generators.push(gamma);
                    }
                    std::cmp::Ordering::Greater => {}
                },
                None => self.best = Some((traces.clone(), cert, lab)),
            }
            return Ok(());
        };
        let mut explored: Vec<Vertex> = Vec::new();
        for &x in &cell {
            if !explored.is_empty() && self.equivalent_to_explored(prefix, &explored, x) {
                continue;
            }
            let mut child = individualize(&colors, x);
            traces.push(refine(self.g, &mut child));
            prefix.push(x);
            self.visit(child, prefix, traces)?;
            prefix.pop();
            traces.pop();
            explored.push(x);
        }
        Ok(())
    }

    /// Is `x` in the orbit of an explored sibling under the known
    /// automorphisms that fix the current prefix pointwise?
    fn equivalent_to_explored(&self, prefix: &[Vertex], explored: &[Vertex], x: Vertex) -> bool {
        let mut orbits = Orbits::new(self.g.n());
        let mut any = false;
        for gen in &self.generators {
            if prefix.iter().all(|&p| gen[p] == p) {
                orbits.absorb(gen);
                any = true;
            }
        }
        if !any {
            return false;
        }
        let rx = orbits.find(x);
        explored.iter().any(|&y| orbits.find(y) == rx)
    }
}

pub(crate) fn canonical(g: &Graph, start: Vec<u32>, budget: Budget) -> Result<CanonResult> {
    let mut search = CanonSearch {
        g,
        counter: Counter { nodes: 0, limit: budget.max_nodes },
        best: None,
        generators: Vec::new(),
    };
    let mut colors = start;
    let mut traces = vec![refine(g, &mut colors)];
    search.visit(colors, &mut Vec::new(), &mut traces)?;
    let (_, edges, labeling) = search.best.expect("search reaches at least one leaf");
    Ok(CanonResult { labeling, edges })
}
