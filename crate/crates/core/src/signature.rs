//! Degree-multiset vertex signatures and the relations on them.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::graph::{Graph, Vertex};
use crate::structure::core_mask;

/// Multiset of non-negative integers, stored ascending.
///
/// The derived `Ord` is the lexicographic order of the ascending sequences
/// (a proper prefix sorts first), which is the order used to compare cycles.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IntMultiset(Vec<u32>);

impl IntMultiset {
    pub fn new(mut items: Vec<u32>) -> Self {
        items.sort_unstable();
        IntMultiset(items)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<u32>> for IntMultiset {
    fn from(v: Vec<u32>) -> Self {
        IntMultiset::new(v)
    }
}

/// `∇(u)`: for every neighbor `v` of `u`, the number of `v`'s neighbors
/// outside `{u} ∪ N(u)`.
pub fn nabla(g: &Graph, u: Vertex) -> Result<IntMultiset> {
    g.check_vertex(u)?;
    let mut mark = vec![false; g.n()];
    Ok(nabla_with(g, u, &mut mark))
}

fn nabla_with(g: &Graph, u: Vertex, mark: &mut [bool]) -> IntMultiset {
    let nu = g.neighbors(u);
    for &v in nu {
        mark[v] = true;
    }
    let items = nu
        .iter()
        .map(|&v| {
            let shared = g.neighbors(v).iter().filter(|&&w| mark[w]).count();
            // minus u itself and the common neighbors
            (g.degree(v) - 1 - shared) as u32
        })
        .collect();
    for &v in nu {
        mark[v] = false;
    }
    IntMultiset::new(items)
}

/// `∇` for every vertex.
pub fn nabla_all(g: &Graph) -> Vec<IntMultiset> {
    let mut mark = vec![false; g.n()];
    (0..g.n()).map(|u| nabla_with(g, u, &mut mark)).collect()
}

/// Ranks of each vertex's `∇` among the distinct values present, in
/// multiset order. Equal ranks iff equal signatures.
pub fn nabla_ranks(g: &Graph) -> Vec<u32> {
    rank_values(&nabla_all(g))
}

pub(crate) fn rank_values<T: Ord + Clone>(values: &[T]) -> Vec<u32> {
    let mut distinct: Vec<&T> = values.iter().collect();
    distinct.sort();
    distinct.dedup();
    values.iter().map(|v| distinct.binary_search(&v).expect("present") as u32).collect()
}

/// `Z(u)`: `∇(u)` evaluated inside the subgraph induced by the 2-core.
pub fn nabla_core(g: &Graph, u: Vertex) -> Result<IntMultiset> {
    g.check_vertex(u)?;
    let in_core = core_mask(g, &[]);
    if !in_core[u] {
        return domain(format!("vertex {u} is not in the 2-core"));
    }
    let keep: Vec<Vertex> = (0..g.n()).filter(|&v| in_core[v]).collect();
    let (h, _) = g.induced_unchecked(&keep);
    let local = keep.binary_search(&u).expect("core member");
    nabla(&h, local)
}

/// Lexicographic comparison of the ascending element sequences.
pub fn multiset_lex_compare(a: &IntMultiset, b: &IntMultiset) -> Ordering {
    a.0.cmp(&b.0)
}

/// Per-side budgets of the approximate-equality relation.
pub const MAX_DELETIONS: usize = 2;
pub const MAX_DECREMENT_PER_ELEMENT: u32 = 2;
pub const MAX_TOTAL_DECREMENT: u32 = 4;

/// `A ≈ B`: each side may independently delete at most two elements and
/// decrease elements by 1 or 2 with total decrease at most 4, after which the
/// two multisets must coincide. Values never go below zero.
pub fn approx_equal(a: &IntMultiset, b: &IntMultiset) -> bool {
    let (la, lb) = (a.len(), b.len());
    if la.abs_diff(lb) > MAX_DELETIONS {
        return false;
    }
    let dels_a = deletion_options(&a.0);
    let dels_b = deletion_options(&b.0);
    for ra in &dels_a {
        for rb in dels_b.iter().filter(|rb| rb.len() == ra.len()) {
            if sorted_match_within_budget(ra, rb) {
                return true;
            }
        }
    }
    false
}

/// All results of deleting 0, 1 or 2 elements, deduplicated by value.
fn deletion_options(items: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![items.to_vec()];
    let n = items.len();
    for i in 0..n {
        if i > 0 && items[i] == items[i - 1] {
            continue;
        }
        let mut one = items.to_vec();
        one.remove(i);
        out.push(one);
        for j in i + 1..n {
            if j > i + 1 && items[j] == items[j - 1] {
                continue;
            }
            let mut two = items.to_vec();
            two.remove(j);
            two.remove(i);
            out.push(two);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Sorted matching minimizes the total absolute difference and the largest
/// pairwise gap at once; since (sum of A's excesses) − (sum of B's excesses)
/// is the same for every matching, it minimizes both per-side totals too.
fn sorted_match_within_budget(a: &[u32], b: &[u32]) -> bool {
    let mut over_a = 0u32;
    let mut over_b = 0u32;
    for (&x, &y) in a.iter().zip(b) {
        let gap = x.abs_diff(y);
        if gap > MAX_DECREMENT_PER_ELEMENT {
            return false;
        }
        if x > y {
            over_a += gap;
        } else {
            over_b += gap;
        }
        if over_a > MAX_TOTAL_DECREMENT || over_b > MAX_TOTAL_DECREMENT {
            return false;
        }
    }
    true
}
