//! Configurations `(φ, ψ)`: pairs of index-aligned walks that could be
//! images of each other under an automorphism, and a census of those that
//! actually are.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::cycles::{rooted_cycles_of_len, CycleScratch};
use crate::error::{domain, Error, Result};
use crate::graph::{Graph, Vertex};
use crate::oracle::{automorphism_group, constrained_isomorphism, AutGroup};
use crate::par;
use crate::sample::{derive_seed, rng_from_seed, Seed};
use crate::structure::two_core;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ConfigKind {
    TypeI,
    TypeII,
    Invalid,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Configuration {
    pub phi: Vec<Vertex>,
    pub psi: Vec<Vertex>,
}

impl Configuration {
    pub fn k(&self) -> usize {
        self.phi.len()
    }
}

fn distinct(s: &[Vertex]) -> bool {
    let mut v = s.to_vec();
    v.sort_unstable();
    v.windows(2).all(|w| w[0] != w[1])
}

fn is_simple_path(g: &Graph, s: &[Vertex]) -> bool {
    distinct(s) && s.windows(2).all(|w| g.has_edge(w[0], w[1]))
}

fn is_simple_cycle(g: &Graph, s: &[Vertex]) -> bool {
    s.len() >= 3 && is_simple_path(g, s) && g.has_edge(s[s.len() - 1], s[0])
}

/// `s[0] = s[k-1]` and `s[..k-1]` is a simple cycle.
fn is_closed_cycle(g: &Graph, s: &[Vertex]) -> bool {
    let k = s.len();
    k >= 4 && s[0] == s[k - 1] && is_simple_cycle(g, &s[..k - 1])
}

/// Type I: no index is a confluence (`φ(i) = ψ(i)`) and both sequences are
/// simple cycles. Type II: the confluences are exactly the first and last
/// index, and each sequence is a simple path or a cycle closed at its ends.
pub fn classify_configuration(g: &Graph, phi: &[Vertex], psi: &[Vertex]) -> Result<ConfigKind> {
    let k = phi.len();
    if k != psi.len() {
        return domain(format!("φ has {k} entries, ψ has {}", psi.len()));
    }
    if k < 3 {
        return domain(format!("configurations need k ≥ 3, got {k}"));
    }
    if let Some(&v) = phi.iter().chain(psi).find(|&&v| v >= g.n()) {
        return domain(format!("vertex {v} out of range for n = {}", g.n()));
    }
    let confluent: Vec<bool> = phi.iter().zip(psi).map(|(a, b)| a == b).collect();
    if confluent.iter().all(|&c| !c) && is_simple_cycle(g, phi) && is_simple_cycle(g, psi) {
        return Ok(ConfigKind::TypeI);
    }
    let ends_only = confluent.iter().enumerate().all(|(i, &c)| c == (i == 0 || i == k - 1));
    let shape_ok = |s: &[Vertex]| is_simple_path(g, s) || is_closed_cycle(g, s);
    if ends_only && shape_ok(phi) && shape_ok(psi) {
        return Ok(ConfigKind::TypeII);
    }
    Ok(ConfigKind::Invalid)
}

/// Core graph plus the map from original ids to core ids.
struct CoreView {
    graph: Graph,
    old: Vec<Vertex>,
    local: Vec<Option<Vertex>>,
}

impl CoreView {
    fn new(g: &Graph) -> Self {
        let core = two_core(g);
        let (graph, old) = g.induced_unchecked(core.as_slice());
        let mut local = vec![None; g.n()];
        for (i, &v) in old.iter().enumerate() {
            local[v] = Some(i);
        }
        CoreView { graph, old, local }
    }

    fn localize(&self, s: &[Vertex]) -> Result<Vec<Vertex>> {
        s.iter()
            .map(|&v| match self.local.get(v).copied().flatten() {
                Some(l) => Ok(l),
                None => domain(format!("vertex {v} is not in the 2-core")),
            })
            .collect()
    }
}

/// Is there an automorphism of the 2-core sending `φ(i)` to `ψ(i)` for all `i`?
pub fn is_compatible(g: &Graph, phi: &[Vertex], psi: &[Vertex]) -> Result<bool> {
    if phi.len() != psi.len() {
        return domain("φ and ψ differ in length");
    }
    let view = CoreView::new(g);
    let (a, b) = (view.localize(phi)?, view.localize(psi)?);
    let pins: Vec<(Vertex, Vertex)> = a.into_iter().zip(b).collect();
    Ok(constrained_isomorphism(&view.graph, &view.graph, &pins)?.is_some())
}

/// Are there `(n−2)`-subsets `U ⊇ im φ`, `W ⊇ im ψ` and an isomorphism
/// `G[U] → G[W]` sending `φ(i)` to `ψ(i)`? Exhaustive over all pairs of
/// deleted pairs; meant for small graphs.
pub fn is_acceptable(g: &Graph, phi: &[Vertex], psi: &[Vertex]) -> Result<bool> {
    if classify_configuration(g, phi, psi)? == ConfigKind::Invalid {
        return domain("configuration is neither type I nor type II");
    }
    let n = g.n();
    let removable = |img: &[Vertex]| -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if !img.contains(&a) && !img.contains(&b) {
                    out.push((a, b));
                }
            }
        }
        out
    };
    let side = |(a, b): (Vertex, Vertex), img: &[Vertex]| {
        let keep: Vec<Vertex> = (0..n).filter(|&v| v != a && v != b).collect();
        let (h, _) = g.induced_unchecked(&keep);
        let mapped: Vec<Vertex> = img.iter().map(|v| keep.binary_search(v).expect("kept")).collect();
        let mut degs = h.degree_sequence();
        degs.sort_unstable();
        (h, mapped, degs)
    };
    let rights: Vec<_> = removable(psi).into_iter().map(|p| side(p, psi)).collect();
    for p in removable(phi) {
        let (gu, a, du) = side(p, phi);
        for (gw, b, dw) in &rights {
            if gu.m() != gw.m() || du != *dw {
                continue;
            }
            let pins: Vec<(Vertex, Vertex)> = a.iter().copied().zip(b.iter().copied()).collect();
            if constrained_isomorphism(&gu, gw, &pins)?.is_some() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Cores with at most this many vertices are enumerated exhaustively.
pub const EXHAUSTIVE_MAX_CORE: usize = 12;
const CHUNK: u64 = 4096;
const POOL_PER_VERTEX: usize = 16;
const MAX_WITNESSES: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CensusMode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub mode: CensusMode,
    pub max_k: usize,
    /// Configurations examined (exhaustive) or drawn (sampled).
    pub pairs: u64,
    pub type_i: u64,
    pub type_ii: u64,
    pub invalid: u64,
    pub compatible: u64,
    pub undecided: u64,
    /// Exhaustive enumeration stopped at the budget.
    pub truncated: bool,
    /// Order of the automorphism group of the 2-core, in decimal.
    pub core_aut_order: String,
    /// A few compatible configurations, in original vertex ids.
    pub witnesses: Vec<Configuration>,
}

#[derive(Default)]
struct Tally {
    pairs: u64,
    type_i: u64,
    type_ii: u64,
    invalid: u64,
    compatible: u64,
    undecided: u64,
    witnesses: Vec<Configuration>,
}

impl Tally {
    fn merge(&mut self, o: Tally) {
        self.pairs += o.pairs;
        self.type_i += o.type_i;
        self.type_ii += o.type_ii;
        self.invalid += o.invalid;
        self.compatible += o.compatible;
        self.undecided += o.undecided;
        for w in o.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
    }
}

struct Checker<'a> {
    view: &'a CoreView,
    /// `None` when the group could not be computed within budget.
    orbits: Option<Vec<Vertex>>,
}

impl Checker<'_> {
    /// Classifies a configuration given in core ids and records it.
    fn record(&self, phi: Vec<Vertex>, psi: Vec<Vertex>, t: &mut Tally) {
        t.pairs += 1;
        let kind = classify_configuration(&self.view.graph, &phi, &psi).expect("core ids in range");
        match kind {
            ConfigKind::Invalid => {
                t.invalid += 1;
                return;
            }
            ConfigKind::TypeI => t.type_i += 1,
            ConfigKind::TypeII => t.type_ii += 1,
        }
        if let Some(orb) = &self.orbits {
            if phi.iter().zip(&psi).any(|(&a, &b)| orb[a] != orb[b]) {
                return;
            }
        }
        let pins: Vec<(Vertex, Vertex)> = phi.iter().copied().zip(psi.iter().copied()).collect();
        match constrained_isomorphism(&self.view.graph, &self.view.graph, &pins) {
            Ok(Some(_)) => {
                t.compatible += 1;
                if t.witnesses.len() < MAX_WITNESSES {
                    let old = |s: &[Vertex]| s.iter().map(|&v| self.view.old[v]).collect();
                    t.witnesses.push(Configuration { phi: old(&phi), psi: old(&psi) });
                }
            }
            Ok(None) => {}
            Err(Error::Undecided(_)) => t.undecided += 1,
            Err(e) => panic!("pinned search on valid core ids failed: {e}"),
        }
    }
}

/// Counts type I / type II configurations with `k ≤ max_k` on the 2-core and
/// how many of them are realized by a core automorphism. Small cores are
/// enumerated (up to `budget` configurations); larger ones are sampled
/// `budget` times from shortest cycles through each core vertex; a type I
/// `ψ` is a random rotation and orientation of a cycle of `φ`'s length.
pub fn census_compatible(g: &Graph, max_k: usize, budget: u64, seed: Seed) -> Result<CensusReport> {
    let view = CoreView::new(g);
    let group: Option<AutGroup> = match automorphism_group(&view.graph) {
        Ok(a) => Some(a),
        Err(Error::Undecided(_)) => None,
        Err(e) => return Err(e),
    };
    let checker = Checker { view: &view, orbits: group.as_ref().map(|a| a.orbits(view.graph.n())) };
    let core_aut_order = group.as_ref().map_or_else(|| "undecided".to_string(), |a| a.order.to_string());
    let (mode, tally, truncated) = if view.graph.n() <= EXHAUSTIVE_MAX_CORE {
        let (t, truncated) = exhaustive(&checker, max_k, budget);
        (CensusMode::Exhaustive, t, truncated)
    } else {
        (CensusMode::Sampled, sampled(&checker, max_k, budget, seed), false)
    };
    Ok(CensusReport {
        mode,
        max_k,
        pairs: tally.pairs,
        type_i: tally.type_i,
        type_ii: tally.type_ii,
        invalid: tally.invalid,
        compatible: tally.compatible,
        undecided: tally.undecided,
        truncated,
        core_aut_order,
        witnesses: tally.witnesses,
    })
}

/// Simple paths on exactly `k` vertices starting at `v`.
fn paths_from(g: &Graph, v: Vertex, k: usize, path: &mut Vec<Vertex>, on: &mut [bool], out: &mut Vec<Vec<Vertex>>) {
    if path.len() == k {
        out.push(path.clone());
        return;
    }
    let cur = *path.last().unwrap_or(&v);
    for &w in g.neighbors(cur) {
        if !on[w] {
            on[w] = true;
            path.push(w);
            paths_from(g, v, k, path, on, out);
            path.pop();
            on[w] = false;
        }
    }
}

fn exhaustive(c: &Checker, max_k: usize, budget: u64) -> (Tally, bool) {
    let h = &c.view.graph;
    let n = h.n();
    let mut t = Tally::default();
    let mut scratch = CycleScratch::new(n);
    for k in 3..=max_k {
        // type I candidates: ordered pairs of rooted cycles on k vertices
        let cycles: Vec<Vec<Vertex>> =
            (0..n).flat_map(|v| rooted_cycles_of_len(h, v, k, &mut scratch)).map(|c| c.0).collect();
        for x in &cycles {
            for y in &cycles {
                if x.iter().zip(y).all(|(a, b)| a != b) {
                    if t.pairs >= budget {
                        return (t, true);
                    }
                    c.record(x.clone(), y.clone(), &mut t);
                }
            }
        }
        // type II candidates: paths or closed cycles on k entries sharing both ends
        let mut walks: BTreeMap<(Vertex, Vertex), Vec<Vec<Vertex>>> = BTreeMap::new();
        let mut on = vec![false; n];
        for v in 0..n {
            let mut out = Vec::new();
            on[v] = true;
            paths_from(h, v, k, &mut vec![v], &mut on, &mut out);
            on[v] = false;
            if k >= 4 {
                out.extend(rooted_cycles_of_len(h, v, k - 1, &mut scratch).into_iter().map(|c| {
                    let mut s = c.0;
                    s.push(v);
                    s
                }));
            }
            for s in out {
                walks.entry((s[0], s[k - 1])).or_default().push(s);
            }
        }
        for group in walks.values() {
            for x in group {
                for y in group {
                    if x[1..k - 1].iter().zip(&y[1..k - 1]).all(|(a, b)| a != b) {
                        if t.pairs >= budget {
                            return (t, true);
                        }
                        c.record(x.clone(), y.clone(), &mut t);
                    }
                }
            }
        }
    }
    (t, false)
}

struct Pool {
    cycles: Vec<Vec<Vertex>>,
    /// Indices of cycles usable as type I images, keyed by length.
    by_len: BTreeMap<usize, Vec<usize>>,
    type_i: Vec<usize>,
    /// Even cycles split into two paths between antipodal vertices.
    split: Vec<usize>,
    /// Cycles short enough to be closed at both ends.
    closed: Vec<usize>,
    /// Indices of cycles keyed by `(length, root)`.
    by_root: BTreeMap<(usize, Vertex), Vec<usize>>,
}

fn build_pool(h: &Graph, max_k: usize) -> Pool {
    let n = h.n();
    let per_vertex: Vec<Vec<Vec<Vertex>>> = par::map_range_init(
        n,
        || CycleScratch::new(n),
        |s, v| {
            let Some(len) = s.shortest_cycle(h, v) else { return Vec::new() };
            if len > max_k && len > 2 * max_k.saturating_sub(1) {
                return Vec::new();
            }
            let mut cs: Vec<Vec<Vertex>> = rooted_cycles_of_len(h, v, len, s).into_iter().map(|c| c.0).collect();
            cs.truncate(POOL_PER_VERTEX);
            cs
        },
    );
    let mut pool = Pool {
        cycles: Vec::new(),
        by_len: BTreeMap::new(),
        type_i: Vec::new(),
        split: Vec::new(),
        closed: Vec::new(),
        by_root: BTreeMap::new(),
    };
    for c in per_vertex.into_iter().flatten() {
        let i = pool.cycles.len();
        let len = c.len();
        if len <= max_k {
            pool.type_i.push(i);
            pool.by_len.entry(len).or_default().push(i);
        }
        if len % 2 == 0 && len / 2 < max_k {
            pool.split.push(i);
        }
        if len < max_k {
            pool.closed.push(i);
        }
        pool.by_root.entry((len, c[0])).or_default().push(i);
        pool.cycles.push(c);
    }
    pool
}

fn sampled(c: &Checker, max_k: usize, budget: u64, seed: Seed) -> Tally {
    let h = &c.view.graph;
    let pool = build_pool(h, max_k);
    let kinds: Vec<u8> = [(0u8, &pool.type_i), (1, &pool.split), (2, &pool.closed)]
        .into_iter()
        .filter(|(_, v)| !v.is_empty())
        .map(|(k, _)| k)
        .collect();
    if kinds.is_empty() || budget == 0 {
        return Tally::default();
    }
    let chunks = budget.div_ceil(CHUNK);
    let parts = par::map_range(chunks as usize, |ci| {
        let mut rng = rng_from_seed(derive_seed(seed, ci as u64));
        let count = CHUNK.min(budget - ci as u64 * CHUNK);
        let mut t = Tally::default();
        for _ in 0..count {
            let (phi, psi) = match kinds[rng.gen_range(0..kinds.len())] {
                0 => {
                    let x = &pool.cycles[pool.type_i[rng.gen_range(0..pool.type_i.len())]];
                    let bucket = &pool.by_len[&x.len()];
                    let mut y = pool.cycles[bucket[rng.gen_range(0..bucket.len())]].clone();
                    let shift = rng.gen_range(0..y.len());
                    y.rotate_left(shift);
                    if rng.gen::<bool>() {
                        y.reverse();
                    }
                    (x.clone(), y)
                }
                1 => {
                    let x = &pool.cycles[pool.split[rng.gen_range(0..pool.split.len())]];
                    let half = x.len() / 2;
                    let phi = x[..=half].to_vec();
                    let psi: Vec<Vertex> = std::iter::once(x[0]).chain(x[half..].iter().rev().copied()).collect();
                    (phi, psi)
                }
                _ => {
                    let x = &pool.cycles[pool.closed[rng.gen_range(0..pool.closed.len())]];
                    let bucket = &pool.by_root[&(x.len(), x[0])];
                    let y = &pool.cycles[bucket[rng.gen_range(0..bucket.len())]];
                    let close = |s: &Vec<Vertex>| s.iter().copied().chain(std::iter::once(s[0])).collect::<Vec<_>>();
                    (close(x), close(y))
                }
            };
            c.record(phi, psi, &mut t);
        }
        t
    });
    let mut total = Tally::default();
    for p in parts {
        total.merge(p);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::gnp_sample;

    fn two_triangles() -> Graph {
        Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    fn theta() -> Graph {
        // u=0, w=1; paths 0–2–3–1 and 0–4–5–1
        Graph::from_edges(6, [(0, 2), (2, 3), (3, 1), (0, 4), (4, 5), (5, 1)]).unwrap()
    }

    #[test]
    fn classify_examples() {
        let g = two_triangles();
        assert_eq!(classify_configuration(&g, &[0, 1, 2], &[3, 4, 5]).unwrap(), ConfigKind::TypeI);
        let p = Graph::path(4);
        assert_eq!(classify_configuration(&p, &[0, 1, 2, 3], &[0, 1, 2, 3]).unwrap(), ConfigKind::Invalid);
        assert_eq!(classify_configuration(&theta(), &[0, 2, 3, 1], &[0, 4, 5, 1]).unwrap(), ConfigKind::TypeII);
        assert!(classify_configuration(&g, &[0, 1, 9], &[3, 4, 5]).is_err());
        assert!(classify_configuration(&g, &[0, 1], &[3, 4]).is_err());
        // a cycle closed at its ends, against its reversal
        let c5 = Graph::cycle(5);
        assert_eq!(classify_configuration(&c5, &[0, 1, 2, 3, 4, 0], &[0, 4, 3, 2, 1, 0]).unwrap(), ConfigKind::TypeII);
    }

    #[test]
    fn classification_survives_relabeling() {
        let g = theta();
        let perm = [5, 3, 1, 0, 2, 4];
        let h = g.permute(&perm);
        let map = |s: &[Vertex]| s.iter().map(|&v| perm[v]).collect::<Vec<_>>();
        for (phi, psi) in [(vec![0, 2, 3, 1], vec![0, 4, 5, 1]), (vec![0, 2, 3], vec![0, 4, 5])] {
            assert_eq!(
                classify_configuration(&g, &phi, &psi).unwrap(),
                classify_configuration(&h, &map(&phi), &map(&psi)).unwrap()
            );
        }
    }

    #[test]
    fn compatibility_examples() {
        let g = two_triangles();
        assert!(is_compatible(&g, &[0, 1, 2], &[0, 1, 2]).unwrap());
        assert!(is_compatible(&g, &[0, 1, 2], &[3, 4, 5]).unwrap());
        // triangle plus a disjoint C4: rotating the triangle is an automorphism
        let g = Graph::from_edges(7, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (5, 6), (3, 6)]).unwrap();
        assert!(is_compatible(&g, &[0, 1, 2], &[1, 2, 0]).unwrap());
        assert!(!is_compatible(&g, &[0, 1, 2], &[3, 4, 5]).unwrap());
        let mut e: Vec<_> = Graph::cycle(4).edges().collect();
        e.push((0, 4));
        assert!(is_compatible(&Graph::from_edges(5, e).unwrap(), &[4], &[4]).is_err());
    }

    #[test]
    fn acceptability_examples() {
        let k5 = Graph::complete(5);
        assert!(is_acceptable(&k5, &[0, 1, 2], &[1, 2, 3]).unwrap());
        assert!(is_acceptable(&k5, &[0, 1, 2], &[3, 4, 0]).unwrap());
        // compatible on a graph whose core is everything
        let c6 = Graph::cycle(6);
        assert!(is_acceptable(&c6, &[0, 1, 2, 3], &[0, 5, 4, 3]).unwrap());
        assert!(is_acceptable(&Graph::path(4), &[0, 1, 2], &[0, 1, 2]).is_err());
    }

    #[test]
    fn census_examples() {
        let forest = Graph::from_edges(6, [(0, 1), (1, 2), (3, 4)]).unwrap();
        let r = census_compatible(&forest, 5, 1000, 1).unwrap();
        assert_eq!((r.type_i, r.type_ii, r.compatible), (0, 0, 0));

        let r = census_compatible(&Graph::cycle(6), 6, 100_000, 1).unwrap();
        assert_eq!(r.mode, CensusMode::Exhaustive);
        assert!(r.compatible > 0 && r.type_i > 0);
        for w in &r.witnesses {
            assert!(is_compatible(&Graph::cycle(6), &w.phi, &w.psi).unwrap());
        }
    }

    #[test]
    fn sampled_census_is_deterministic() {
        let g = gnp_sample(200, 8.0 / 200.0, 4).unwrap();
        let a = census_compatible(&g, 6, 20_000, 9).unwrap();
        let b = crate::par::with_workers(1, || census_compatible(&g, 6, 20_000, 9).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.mode, CensusMode::Sampled);
        assert_eq!(a.pairs, 20_000);
        assert!(a.type_i + a.type_ii > a.invalid);
    }
}
