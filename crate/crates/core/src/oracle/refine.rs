//! Ordered color refinement.
//!
//! A coloring is a vector of dense color ranks; cells are ordered by rank.
//! Every step ranks vertices by a label-independent signature, so the
//! resulting ordered partition commutes with relabeling.

use crate::graph::{Graph, Vertex};
use crate::signature::{nabla_all, rank_values};

/// Label-independent summary of a refined partition, used to prune search
/// branches that cannot be equivalent.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Trace {
    cell_sizes: Vec<u32>,
    digest: u64,
}

fn fnv(mut h: u64, x: u32) -> u64 {
    for b in x.to_le_bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

/// Initial coloring: rank of `(degree, ∇)`.
pub(crate) fn initial_colors(g: &Graph) -> Vec<u32> {
    let nab = nabla_all(g);
    let keys: Vec<(usize, &[u32])> = (0..g.n()).map(|v| (g.degree(v), nab[v].as_slice())).collect();
    rank_values(&keys)
}

pub(crate) fn color_count(colors: &[u32]) -> usize {
    colors.iter().copied().max().map_or(0, |c| c as usize + 1)
}

/// Refines `colors` to the coarsest equitable ordered partition below it.
pub(crate) fn refine(g: &Graph, colors: &mut Vec<u32>) -> Trace {
    let n = g.n();
    let mut count = color_count(colors);
    let mut sigs: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut order: Vec<Vertex> = (0..n).collect();
    let mut digest;
    loop {
        for v in 0..n {
            let s = &mut sigs[v];
            s.clear();
            s.push(colors[v]);
            s.extend(g.neighbors(v).iter().map(|&w| colors[w]));
            s[1..].sort_unstable();
        }
        order.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
        let mut next = vec![0u32; n];
        let mut rank = 0u32;
        digest = 0xcbf2_9ce4_8422_2325u64;
        for i in 0..n {
            if i > 0 && sigs[order[i]] != sigs[order[i - 1]] {
                rank += 1;
            }
            if i == 0 || sigs[order[i]] != sigs[order[i - 1]] {
                for &x in &sigs[order[i]] {
                    digest = fnv(digest, x);
                }
                digest = fnv(digest, u32::MAX);
            }
            next[order[i]] = rank;
        }
        let new_count = if n == 0 { 0 } else { rank as usize + 1 };
        *colors = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    let mut cell_sizes = vec![0u32; count];
    for &c in colors.iter() {
        cell_sizes[c as usize] += 1;
    }
    Trace { cell_sizes, digest }
}

/// Splits `v` off into its own cell, placed just before the rest of its cell.
pub(crate) fn individualize(colors: &[u32], v: Vertex) -> Vec<u32> {
    let keys: Vec<u64> = colors.iter().enumerate().map(|(x, &c)| 2 * u64::from(c) + u64::from(x != v)).collect();
    rank_values(&keys)
}

/// Gives `a` and `b` (which must share a color) a new common cell.
pub(crate) fn individualize_pair(colors: &[u32], a: Vertex, b: Vertex) -> Option<Vec<u32>> {
    if colors[a] != colors[b] {
        return None;
    }
    let keys: Vec<u64> =
        colors.iter().enumerate().map(|(x, &c)| 2 * u64::from(c) + u64::from(x != a && x != b)).collect();
    Some(rank_values(&keys))
}

/// Members of each cell, in cell order.
pub(crate) fn cells(colors: &[u32]) -> Vec<Vec<Vertex>> {
    let mut out = vec![Vec::new(); color_count(colors)];
    for (v, &c) in colors.iter().enumerate() {
        out[c as usize].push(v);
    }
    out
}

/// First smallest non-singleton cell.
pub(crate) fn target_cell(colors: &[u32]) -> Option<Vec<Vertex>> {
    cells(colors).into_iter().filter(|c| c.len() > 1).min_by_key(|c| c.len())
}

/// Refined coloring of `g` starting from degree and `∇`.
pub fn refined_colors(g: &Graph) -> Vec<u32> {
    let mut colors = initial_colors(g);
    refine(g, &mut colors);
    colors
}
