//! Canonical labeling of sparse graphs from cycle signatures.
//!
//! Labels are built in four phases:
//! (a) core vertices on a cycle take the signature sequence of their
//!     `≺`-minimal rooted cycle;
//! (b) the remaining core vertices take their distances to the cycle
//!     vertices they reach without crossing another cycle vertex;
//! (c) vertices of pendant trees take the code of the tree hanging at their
//!     core vertex, their position in it, and that core vertex's label;
//! (d) vertices of acyclic components take the component's free-tree code,
//!     an ordinal among equal components and their position.
//!
//! Sorting the labels gives the canonical order. Any tie among cycle
//! signatures, or any repeated label, makes the labeling fail.

use serde::Serialize;

use crate::cycles::{min_cycle_ranked, max_cycle_len, enumerate_rooted_cycles, CycleScratch, MinCycle, RootedCycle};
use crate::graph::{Graph, Vertex};
use crate::par;
use crate::signature::{nabla_ranks, rank_values};
use crate::structure::{core_partition, diameter, diameter_below};
use crate::trees::{free_tree_code, rooted_tree_code};

/// Vertex label; the derived order compares the variant first, then fields.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Label {
    Cycle { length: usize, signature: Vec<u32> },
    /// Sorted `(anchor, distance)` pairs; `anchor` is the rank of a cycle
    /// vertex's label.
    Path { anchors: Vec<(u32, u32)> },
    /// `root` is the rank of the attachment vertex's label among core labels.
    Tree { code: String, position: usize, root: u32 },
    Component { code: String, ordinal: usize, position: usize },
}

/// Which structural property failed, with a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PropertyViolation {
    /// (1): a component outside the 2-core has more than `ln n` vertices.
    LargeOutsideComponent { size: usize, vertex: Vertex },
    /// (2): the diameter is not below `ln n / 2` (`None`: disconnected).
    Diameter { diameter: Option<usize> },
    /// (3): two distinct rooted cycles at `vertex` compare equal.
    CycleTie { vertex: Vertex, first: RootedCycle, second: RootedCycle },
    /// (3): two vertices ended up with the same label.
    DuplicateLabel { first: Vertex, second: Vertex },
}

impl PropertyViolation {
    /// Number of the violated property: 1, 2 or 3.
    pub fn property(&self) -> u8 {
        match self {
            PropertyViolation::LargeOutsideComponent { .. } => 1,
            PropertyViolation::Diameter { .. } => 2,
            PropertyViolation::CycleTie { .. } | PropertyViolation::DuplicateLabel { .. } => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Canonical {
    /// `labeling[v]` is the canonical id (0-based) of `v`.
    pub labeling: Vec<usize>,
    /// Relabeled edges `(a, b)` with `a < b`, sorted.
    pub form: Vec<(usize, usize)>,
    pub labels: Vec<Label>,
    /// Violations of (1) or (2) that did not stop the labeling.
    pub warnings: Vec<PropertyViolation>,
}

impl Canonical {
    /// The canonical form as a graph on ids `0..n`.
    pub fn form_graph(&self) -> Graph {
        Graph::from_edges(self.labeling.len(), self.form.iter().copied()).expect("valid relabeled edges")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CanonicalResult {
    Success(Canonical),
    Failure(PropertyViolation),
}

impl CanonicalResult {
    pub fn success(&self) -> Option<&Canonical> {
        match self {
            CanonicalResult::Success(c) => Some(c),
            CanonicalResult::Failure(_) => None,
        }
    }

    /// `0` on success, otherwise the violated property.
    pub fn kind(&self) -> u8 {
        match self {
            CanonicalResult::Success(_) => 0,
            CanonicalResult::Failure(v) => v.property(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CanonOptions {
    /// Treat violations of (1) and (2) as failures instead of warnings.
    pub strict: bool,
}

fn ln_n(n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        (n as f64).ln()
    }
}

fn size_violation(g: &Graph) -> Option<PropertyViolation> {
    let bound = ln_n(g.n());
    let part = core_partition(g);
    part.outside_components()
        .filter(|c| c.len() as f64 > bound)
        .max_by_key(|c| c.len())
        .map(|c| PropertyViolation::LargeOutsideComponent { size: c.len(), vertex: c[0] })
}

fn diameter_violation(g: &Graph) -> Option<PropertyViolation> {
    if diameter_below(g, ln_n(g.n()) / 2.0) {
        None
    } else {
        Some(PropertyViolation::Diameter { diameter: diameter(g) })
    }
}

/// All violated properties. Property (3) is checked only when `eager`, by
/// comparing every pair of rooted cycles of length at most `max(3, ⌈ln n⌉)`;
/// that costs a full cycle enumeration and is meant for small graphs.
pub fn check_structural_properties(g: &Graph, eager: bool) -> Vec<PropertyViolation> {
    let mut out: Vec<PropertyViolation> = size_violation(g).into_iter().chain(diameter_violation(g)).collect();
    if eager {
        if let Some(v) = eager_cycle_tie(g) {
            out.push(v);
        }
    }
    out
}

fn eager_cycle_tie(g: &Graph) -> Option<PropertyViolation> {
    let ranks = nabla_ranks(g);
    let mut seen: Vec<(Vec<u32>, RootedCycle)> = Vec::new();
    for len in 3..=max_cycle_len(g.n()) {
        for v in 0..g.n() {
            let cycles = enumerate_rooted_cycles(g, v, len).expect("length in range");
            seen.extend(cycles.into_iter().map(|c| (c.vertices().iter().map(|&x| ranks[x]).collect(), c)));
        }
    }
    seen.sort();
    seen.windows(2).find(|w| w[0].0 == w[1].0).map(|w| PropertyViolation::CycleTie {
        vertex: w[0].1.root(),
        first: w[0].1.clone(),
        second: w[1].1.clone(),
    })
}

pub fn canonical_label(g: &Graph) -> CanonicalResult {
    canonical_label_with(g, CanonOptions::default())
}

pub fn canonical_label_with(g: &Graph, opts: CanonOptions) -> CanonicalResult {
    let mut warnings = Vec::new();
    for v in size_violation(g).into_iter().chain(diameter_violation(g)) {
        if opts.strict {
            return CanonicalResult::Failure(v);
        }
        warnings.push(v);
    }
    match labels(g) {
        Ok(labels) => finish(g, labels, warnings),
        Err(v) => CanonicalResult::Failure(v),
    }
}

fn duplicate(vertices: &[Vertex], labels: &[Option<Label>]) -> Option<PropertyViolation> {
    let mut order = vertices.to_vec();
    order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
    order.windows(2).find(|w| labels[w[0]] == labels[w[1]]).map(|w| PropertyViolation::DuplicateLabel {
        first: w[0].min(w[1]),
        second: w[0].max(w[1]),
    })
}

fn labels(g: &Graph) -> Result<Vec<Label>, PropertyViolation> {
    let n = g.n();
    let part = core_partition(g);
    let core = part.core.as_slice();
    let mut labels: Vec<Option<Label>> = vec![None; n];

    // (a)
    let ranks = nabla_ranks(g);
    let mins: Vec<Option<MinCycle>> =
        par::map_range_init(core.len(), || CycleScratch::new(n), |s, i| min_cycle_ranked(g, &ranks, core[i], s));
    let mut on_cycle = vec![false; n];
    let mut cycle_vertices = Vec::new();
    for (&v, mc) in core.iter().zip(mins) {
        let Some(mc) = mc else { continue };
        if let Some(second) = mc.tie_with {
            return Err(PropertyViolation::CycleTie { vertex: v, first: mc.cycle, second });
        }
        on_cycle[v] = true;
        cycle_vertices.push(v);
        labels[v] = Some(Label::Cycle { length: mc.cycle.len(), signature: mc.ranks });
    }
    if let Some(v) = duplicate(&cycle_vertices, &labels) {
        return Err(v);
    }
    let anchor_rank = {
        let ls: Vec<&Label> = cycle_vertices.iter().map(|&v| labels[v].as_ref().expect("set")).collect();
        let r = rank_values(&ls);
        let mut out = vec![0u32; n];
        for (&v, &rv) in cycle_vertices.iter().zip(&r) {
            out[v] = rv;
        }
        out
    };

    // (b)
    let mut in_core = vec![false; n];
    for &v in core {
        in_core[v] = true;
    }
    let mut dist = vec![u32::MAX; n];
    let mut queue = Vec::new();
    for &x in core.iter().filter(|&&x| !on_cycle[x]) {
        let mut anchors = Vec::new();
        queue.clear();
        queue.push(x);
        dist[x] = 0;
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            if on_cycle[u] {
                continue;
            }
            for &w in g.neighbors(u) {
                if !in_core[w] || dist[w] != u32::MAX {
                    continue;
                }
                dist[w] = dist[u] + 1;
                if on_cycle[w] {
                    anchors.push((anchor_rank[w], dist[w]));
                }
                queue.push(w);
            }
        }
        for &u in &queue {
            dist[u] = u32::MAX;
        }
        assert!(anchors.len() >= 2, "core vertex {x} off every cycle must reach two cycle vertices");
        anchors.sort_unstable();
        labels[x] = Some(Label::Path { anchors });
    }
    if let Some(v) = duplicate(core, &labels) {
        return Err(v);
    }

    // (c)
    let core_rank = {
        let ls: Vec<&Label> = core.iter().map(|&v| labels[v].as_ref().expect("set")).collect();
        let r = rank_values(&ls);
        let mut out = vec![0u32; n];
        for (&v, &rv) in core.iter().zip(&r) {
            out[v] = rv;
        }
        out
    };
    let mut hanging: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    for t in &part.pendant_trees {
        hanging[t.attachment].extend(&t.vertices);
    }
    for &u in core {
        if hanging[u].is_empty() {
            continue;
        }
        let mut verts = std::mem::take(&mut hanging[u]);
        verts.push(u);
        verts.sort_unstable();
        let (t, old) = g.induced_unchecked(&verts);
        let root = verts.binary_search(&u).expect("member");
        let code = rooted_tree_code(&t, root).expect("pendant trees with their core vertex form a tree");
        for (local, &x) in old.iter().enumerate() {
            if x != u {
                labels[x] =
                    Some(Label::Tree { code: code.code.clone(), position: code.position[local], root: core_rank[u] });
            }
        }
    }

    // (d)
    let mut seen_codes: Vec<(String, usize)> = Vec::new();
    for comp in &part.acyclic_components {
        let (t, old) = g.induced_unchecked(comp);
        let code = free_tree_code(&t).expect("acyclic components are trees");
        let ordinal = match seen_codes.iter_mut().find(|(c, _)| *c == code.code) {
            Some((_, count)) => {
                *count += 1;
                *count - 1
            }
            None => {
                seen_codes.push((code.code.clone(), 1));
                0
            }
        };
        for (local, &x) in old.iter().enumerate() {
            labels[x] = Some(Label::Component { code: code.code.clone(), ordinal, position: code.position[local] });
        }
    }

    let all: Vec<Vertex> = (0..n).collect();
    if let Some(v) = duplicate(&all, &labels) {
        return Err(v);
    }
    Ok(labels.into_iter().map(|l| l.expect("every vertex labeled")).collect())
}

fn finish(g: &Graph, labels: Vec<Label>, warnings: Vec<PropertyViolation>) -> CanonicalResult {
    let n = g.n();
    let mut order: Vec<Vertex> = (0..n).collect();
    order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
    let mut labeling = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        labeling[v] = i;
    }
    let mut form: Vec<(usize, usize)> = g
        .edges()
        .map(|(u, v)| {
            let (a, b) = (labeling[u], labeling[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    form.sort_unstable();
    CanonicalResult::Success(Canonical { labeling, form, labels, warnings })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IsoOutcome {
    Isomorphic,
    NonIsomorphic,
    /// At least one canonical labeling failed.
    Undecided,
}

pub fn iso_test(g: &Graph, h: &Graph) -> IsoOutcome {
    let (CanonicalResult::Success(a), CanonicalResult::Success(b)) = (canonical_label(g), canonical_label(h)) else {
        return IsoOutcome::Undecided;
    };
    if a.labeling.len() == b.labeling.len() && a.form == b.form {
        IsoOutcome::Isomorphic
    } else {
        IsoOutcome::NonIsomorphic
    }
}
