//! Canonical codes for rooted and free trees (AHU parenthesis encoding).
//!
//! `code(v) = "(" + sorted(code(child) for child in children(v)) + ")"`.
//! Two rooted trees get the same code iff they are isomorphic. Along with the
//! code each vertex receives a *position*: its index in the preorder walk that
//! visits children in code order. Siblings with equal codes are ordered by id,
//! which is arbitrary but harmless: swapping them is an automorphism, so the
//! parent-of-position structure depends on the code alone.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::graph::{Graph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeCode {
    pub code: String,
    pub root: Vertex,
    /// `position[v]` for every vertex of the tree; the root has position 0.
    pub position: Vec<usize>,
}

fn check_tree(t: &Graph) -> Result<()> {
    if t.n() == 0 {
        return domain("empty graph is not a tree");
    }
    if t.m() + 1 != t.n() || t.components().len() != 1 {
        return domain("input is not a tree");
    }
    Ok(())
}

pub fn rooted_tree_code(t: &Graph, root: Vertex) -> Result<TreeCode> {
    check_tree(t)?;
    t.check_vertex(root)?;
    Ok(encode(t, root))
}

/// Code of a free tree: the smaller of the rooted codes at its center(s).
pub fn free_tree_code(t: &Graph) -> Result<TreeCode> {
    check_tree(t)?;
    let centers = tree_centers(t);
    let best = centers
        .into_iter()
        .map(|c| encode(t, c))
        .min_by(|a, b| a.code.cmp(&b.code))
        .expect("a tree has one or two centers");
    Ok(best)
}

/// One or two centers, found by repeatedly stripping leaves.
pub fn tree_centers(t: &Graph) -> Vec<Vertex> {
    let n = t.n();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut deg: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
    let mut layer: Vec<Vertex> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            deg[v] = 0;
            for &w in t.neighbors(v) {
                if deg[w] > 0 {
                    deg[w] -= 1;
                    if deg[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    let mut c = layer;
    c.sort_unstable();
    c
}

fn encode(t: &Graph, root: Vertex) -> TreeCode {
    let n = t.n();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    order.push(root);
    parent[root] = root;
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for &w in t.neighbors(u) {
            if parent[w] == usize::MAX {
                parent[w] = u;
                order.push(w);
            }
        }
    }
    let mut codes: Vec<String> = vec![String::new(); n];
    let mut children: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    for &u in order.iter().rev() {
        let mut kids: Vec<Vertex> = t.neighbors(u).iter().copied().filter(|&w| w != root && parent[w] == u).collect();
        kids.sort_by(|&a, &b| codes[a].cmp(&codes[b]).then(a.cmp(&b)));
        let mut s = String::with_capacity(2 + kids.iter().map(|&k| codes[k].len()).sum::<usize>());
        s.push('(');
        for &k in &kids {
            s.push_str(&codes[k]);
        }
        s.push(')');
        codes[u] = s;
        children[u] = kids;
    }
    let mut position = vec![0; n];
    let mut stack = vec![root];
    let mut next = 0;
    while let Some(u) = stack.pop() {
        position[u] = next;
        next += 1;
        stack.extend(children[u].iter().rev());
    }
    TreeCode { code: std::mem::take(&mut codes[root]), root, position }
}
