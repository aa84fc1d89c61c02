//! Isomorphism search on the disjoint union of the two graphs.

use super::refine::{cells, individualize_pair, initial_colors, refine};
use super::Budget;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

fn disjoint_union(g: &Graph, h: &Graph) -> Graph {
    let off = g.n();
    let mut adj: Vec<Vec<Vertex>> = (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect();
    adj.extend((0..h.n()).map(|v| h.neighbors(v).iter().map(|&w| w + off).collect()));
    Graph::from_sorted_adjacency(adj)
}

struct Search<'a> {
    u: &'a Graph,
    split: usize,
    nodes: u64,
    limit: u64,
}

impl Search<'_> {
    /// Every cell holds as many `G` vertices as `H` vertices.
    fn balanced(&self, colors: &[u32]) -> bool {
        let mut diff = vec![0i64; super::refine::color_count(colors)];
        for (v, &c) in colors.iter().enumerate() {
            diff[c as usize] += if v < self.split { 1 } else { -1 };
        }
        diff.iter().all(|&d| d == 0)
    }

    fn visit(&mut self, mut colors: Vec<u32>) -> Result<Option<Vec<Vertex>>> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::Undecided(format!("isomorphism search exceeded {} nodes", self.limit)));
        }
        refine(self.u, &mut colors);
        if !self.balanced(&colors) {
            return Ok(None);
        }
        let all = cells(&colors);
        let Some(cell) = all.iter().filter(|c| c.len() > 2).min_by_key(|c| c.len()) else {
            // every cell is one G vertex and one H vertex
            let mut map = vec![0; self.split];
            for c in &all {
                map[c[0]] = c[1] - self.split;
            }
            return Ok(self.is_isomorphism(&map).then_some(map));
        };
        let x = cell[0];
        let split = self.split;
        for &y in cell.iter().filter(|&&y| y >= split) {
            let child = individualize_pair(&colors, x, y).expect("same cell");
            if let Some(map) = self.visit(child)? {
                return Ok(Some(map));
            }
        }
        Ok(None)
    }

    fn is_isomorphism(&self, map: &[Vertex]) -> bool {
        (0..self.split).all(|v| {
            let mut img: Vec<Vertex> = self.u.neighbors(v).iter().map(|&w| map[w] + self.split).collect();
            img.sort_unstable();
            img == self.u.neighbors(map[v] + self.split)
        })
    }
}

/// An isomorphism `G → H` (as `map[g] = h`) sending every pinned `g` to its
/// `h`, or `None`.
pub(crate) fn constrained(g: &Graph, h: &Graph, pins: &[(Vertex, Vertex)], budget: Budget) -> Result<Option<Vec<Vertex>>> {
    for &(a, b) in pins {
        g.check_vertex(a)?;
        h.check_vertex(b)?;
    }
    if g.n() != h.n() || g.m() != h.m() {
        return Ok(None);
    }
    if g.n() == 0 {
        return Ok(Some(Vec::new()));
    }
    let split = g.n();
    let u = disjoint_union(g, h);
    let mut colors = initial_colors(&u);
    for &(a, b) in pins {
        match individualize_pair(&colors, a, b + split) {
            Some(c) => colors = c,
            None => return Ok(None),
        }
    }
    let mut search = Search { u: &u, split, nodes: 0, limit: budget.max_nodes };
    search.visit(colors)
}
