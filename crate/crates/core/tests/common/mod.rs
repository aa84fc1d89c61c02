//! Independent brute-force oracles shared by the integration tests and the
//! acceptance suite. None of them calls into the code under test beyond
//! the plain `Graph` container.
#![allow(dead_code)]

use std::collections::HashSet;

use rigidity_core::Graph;

/// All isomorphisms `g → h` mapping `pins[i].0 ↦ pins[i].1`, by
/// backtracking over vertex images with degree pruning. Stops after
/// `limit` isomorphisms.
pub fn brute_isomorphisms(g: &Graph, h: &Graph, pins: &[(usize, usize)], limit: usize) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut out = Vec::new();
    if n != h.n() || g.m() != h.m() {
        return out;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for &(a, b) in pins {
        if map[a] != usize::MAX && map[a] != b || used[b] && map[a] != b {
            return out;
        }
        map[a] = b;
        used[b] = true;
    }
    let order: Vec<usize> = (0..n).filter(|&v| map[v] == usize::MAX).collect();
    // pins must already be consistent among themselves
    for &(a, _) in pins {
        for &(c, _) in pins {
            if g.has_edge(a, c) != h.has_edge(map[a], map[c]) {
                return out;
            }
        }
        if g.degree(a) != h.degree(map[a]) {
            return out;
        }
    }
    #[allow(clippy::too_many_arguments)]
    fn go(
        g: &Graph,
        h: &Graph,
        order: &[usize],
        i: usize,
        map: &mut [usize],
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if i == order.len() {
            out.push(map.to_vec());
            return;
        }
        let v = order[i];
        for w in 0..h.n() {
            if used[w] || g.degree(v) != h.degree(w) {
                continue;
            }
            let ok = (0..g.n()).all(|x| map[x] == usize::MAX || g.has_edge(v, x) == h.has_edge(w, map[x]));
            if !ok {
                continue;
            }
            map[v] = w;
            used[w] = true;
            go(g, h, order, i + 1, map, used, out, limit);
            map[v] = usize::MAX;
            used[w] = false;
        }
    }
    go(g, h, &order, 0, &mut map, &mut used, &mut out, limit);
    out
}

pub fn brute_isomorphic(g: &Graph, h: &Graph) -> bool {
    !brute_isomorphisms(g, h, &[], 1).is_empty()
}

pub fn brute_aut_order(g: &Graph) -> usize {
    brute_isomorphisms(g, g, &[], usize::MAX).len()
}

/// Tree from a Prüfer sequence over `0..n`.
pub fn prufer_tree(n: usize, seq: &[usize]) -> Graph {
    assert_eq!(seq.len() + 2, n.max(2));
    if n == 1 {
        return Graph::empty(1);
    }
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::from_edges(n, edges).unwrap()
}

/// Every labeled tree on `n ≥ 1` vertices (`n^(n−2)` of them).
pub fn all_labeled_trees(n: usize) -> Vec<Graph> {
    if n <= 2 {
        return vec![if n == 2 { Graph::path(2) } else { Graph::empty(n) }];
    }
    let len = n - 2;
    let mut seq = vec![0; len];
    let mut out = Vec::new();
    loop {
        out.push(prufer_tree(n, &seq));
        let mut i = 0;
        while i < len && seq[i] == n - 1 {
            seq[i] = 0;
            i += 1;
        }
        if i == len {
            return out;
        }
        seq[i] += 1;
    }
}

/// Every multiset reachable from `a` by deleting at most two elements and
/// lowering the rest by 0, 1 or 2 each, total at most 4, values ≥ 0.
pub fn reach_set(a: &[u32]) -> HashSet<Vec<u32>> {
    let n = a.len();
    let mut out = HashSet::new();
    let mut kept_sets: Vec<Vec<u32>> = vec![a.to_vec()];
    for i in 0..n {
        kept_sets.push(a.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &x)| x).collect());
        for j in i + 1..n {
            kept_sets.push(a.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &x)| x).collect());
        }
    }
    fn lower(items: &[u32], i: usize, left: u32, cur: &mut Vec<u32>, out: &mut HashSet<Vec<u32>>) {
        if i == items.len() {
            let mut s = cur.clone();
            s.sort_unstable();
            out.insert(s);
            return;
        }
        for d in 0..=2u32.min(left).min(items[i]) {
            cur.push(items[i] - d);
            lower(items, i + 1, left - d, cur, out);
            cur.pop();
        }
    }
    for k in kept_sets {
        lower(&k, 0, 4, &mut Vec::new(), &mut out);
    }
    out
}

pub fn reach_equal(a: &[u32], b: &[u32]) -> bool {
    let ra = reach_set(a);
    reach_set(b).iter().any(|x| ra.contains(x))
}

/// Does `g` contain `K_{3,2}` as a (not necessarily induced) subgraph?
/// Checks every 5-subset and every split into 3 + 2.
pub fn naive_has_k32(g: &Graph) -> bool {
    let n = g.n();
    let verts: Vec<usize> = (0..n).collect();
    let mut found = false;
    for_each_subset(&verts, 5, &mut |s| {
        if found {
            return;
        }
        for a in 0..5 {
            for b in a + 1..5 {
                let others: Vec<usize> = (0..5).filter(|&x| x != a && x != b).map(|x| s[x]).collect();
                if others.iter().all(|&o| g.has_edge(o, s[a]) && g.has_edge(o, s[b])) {
                    found = true;
                }
            }
        }
    });
    found
}

fn for_each_subset(items: &[usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    go(items, k, 0, &mut Vec::new(), f);
}
