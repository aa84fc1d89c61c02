//! Decks of vertex-deleted subgraphs and reconstruction from them.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::canon::{canonical_label, CanonicalResult};
use crate::error::{domain, Error, Result};
use crate::graph::{Graph, Vertex};
use crate::oracle::oracle_canonical_form;
use crate::par;
use crate::structure::two_core;

/// Which canonicalizer produced a card. Isomorphic graphs always take the
/// same path, since the heuristic's success is isomorphism-invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CardSource {
    Canonical,
    Oracle,
}

/// A graph in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Card {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub source: CardSource,
}

impl Card {
    pub fn graph(&self) -> Graph {
        Graph::from_edges(self.n, self.edges.iter().copied()).expect("card edges are valid")
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }
}

/// Canonical form of `g` plus `labeling[v]` = canonical id of `v`: the
/// heuristic labeling when it succeeds, the exact search otherwise.
pub fn canonical_card(g: &Graph) -> Result<(Card, Vec<usize>)> {
    if let CanonicalResult::Success(c) = canonical_label(g) {
        return Ok((Card { n: g.n(), edges: c.form, source: CardSource::Canonical }, c.labeling));
    }
    let o = oracle_canonical_form(g)?;
    Ok((Card { n: g.n(), edges: o.form, source: CardSource::Oracle }, o.labeling))
}

/// The multiset of cards, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Deck {
    pub n: usize,
    pub cards: Vec<Card>,
}

impl Deck {
    /// Sorts the cards so equal multisets compare equal.
    pub fn new(n: usize, mut cards: Vec<Card>) -> Result<Self> {
        if cards.len() != n {
            return domain(format!("deck of a {n}-vertex graph needs {n} cards, got {}", cards.len()));
        }
        if let Some(c) = cards.iter().find(|c| c.n + 1 != n) {
            return domain(format!("card has {} vertices, expected {}", c.n, n.saturating_sub(1)));
        }
        cards.sort();
        Ok(Deck { n, cards })
    }
}

pub fn deck(g: &Graph) -> Result<Deck> {
    let n = g.n();
    if n < 2 {
        return domain("a deck needs at least 2 vertices");
    }
    let cards = par::map_range(n, |u| {
        let keep: Vec<Vertex> = (0..n).filter(|&v| v != u).collect();
        canonical_card(&g.induced_unchecked(&keep).0).map(|(c, _)| c)
    });
    Deck::new(n, cards.into_iter().collect::<Result<Vec<_>>>()?)
}

/// No two vertices share three or more neighbors.
pub fn is_k32_free(g: &Graph) -> bool {
    let n = g.n();
    let mut count = vec![0u32; n];
    let mut touched = Vec::new();
    for u in 0..n {
        for &v in g.neighbors(u) {
            for &w in g.neighbors(v) {
                if w > u {
                    if count[w] == 0 {
                        touched.push(w);
                    }
                    count[w] += 1;
                    if count[w] >= 3 {
                        return false;
                    }
                }
            }
        }
        for &w in &touched {
            count[w] = 0;
        }
        touched.clear();
    }
    true
}

/// Edge count and the degree of each card's deleted vertex.
fn edges_and_degrees(d: &Deck) -> Result<(usize, Vec<usize>)> {
    let n = d.n;
    if n < 3 {
        return domain("edge count is not determined by a deck with fewer than 3 cards");
    }
    let total: usize = d.cards.iter().map(Card::m).sum();
    if !total.is_multiple_of(n - 2) {
        return Err(Error::InconsistentDeck(format!("card edge total {total} is not divisible by n − 2 = {}", n - 2)));
    }
    let m = total / (n - 2);
    let mut degs = Vec::with_capacity(n);
    for c in &d.cards {
        if c.m() > m || m - c.m() > n - 1 {
            return Err(Error::InconsistentDeck(format!("card with {} edges against |E| = {m}", c.m())));
        }
        degs.push(m - c.m());
    }
    if degs.iter().sum::<usize>() != 2 * m {
        return Err(Error::InconsistentDeck("deleted-vertex degrees do not sum to 2|E|".into()));
    }
    Ok((m, degs))
}

/// Sorted degree sequence recovered from the cards' edge counts.
pub fn degree_sequence_from_deck(d: &Deck) -> Result<Vec<usize>> {
    let (_, mut degs) = edges_and_degrees(d)?;
    degs.sort_unstable();
    Ok(degs)
}

/// Stages of [`reconstruct_from_deck`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReconStep {
    /// (i) edge count and degree sequence.
    Degrees,
    /// (ii) size of the 2-core and which cards delete a core vertex.
    CoreSize,
    /// (iii) cards deleting a vertex whose neighbors all have core degree ≥ 4.
    InteriorVertices,
    /// (iv) overlaying two cards through their common doubly-deleted graph.
    Overlay,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReconFailure {
    pub step: ReconStep,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ReconOutcome {
    Success {
        #[serde(skip)]
        graph: Graph,
        /// Card indices whose overlay gave the graph.
        pair: (usize, usize),
        pairs_tried: usize,
    },
    Failure(ReconFailure),
}

impl ReconOutcome {
    pub fn graph(&self) -> Option<&Graph> {
        match self {
            ReconOutcome::Success { graph, .. } => Some(graph),
            ReconOutcome::Failure(_) => None,
        }
    }
}

/// Candidate pairs examined in step (iv) before giving up.
pub const MAX_PAIRS: usize = 64;
/// Matched doubly-deleted graphs per pair before calling it ambiguous.
pub const MAX_MATCHES: usize = 512;

fn fail(step: ReconStep, detail: impl Into<String>) -> ReconOutcome {
    ReconOutcome::Failure(ReconFailure { step, detail: detail.into() })
}

fn core_degrees(g: &Graph) -> Vec<usize> {
    let core = two_core(g);
    let (h, _) = g.induced_unchecked(core.as_slice());
    let mut d = h.degree_sequence();
    d.sort_unstable();
    d
}

struct CardInfo {
    graph: Graph,
    core_size: usize,
    core_degrees: Vec<usize>,
}

/// Rebuilds the graph from its deck by locating two interior vertices `u`,
/// `v`, matching `card(u) − v` with `card(v) − u`, and overlaying the two
/// cards. The result always has exactly the given deck; if two
/// non-isomorphic overlays both do, or none does, the step is reported.
pub fn reconstruct_from_deck(d: &Deck) -> ReconOutcome {
    let n = d.n;
    // (i)
    let (m, degs) = match edges_and_degrees(d) {
        Ok(x) => x,
        Err(e) => return fail(ReconStep::Degrees, e.to_string()),
    };
    let info: Vec<CardInfo> = par::map_range(n, |i| {
        let graph = d.cards[i].graph();
        let core_degrees = core_degrees(&graph);
        CardInfo { core_size: core_degrees.len(), core_degrees, graph }
    });

    // (ii)
    let min_deg = degs.iter().copied().min().unwrap_or(0);
    let (core_size, core_degs): (usize, Vec<usize>) = if min_deg >= 2 {
        let mut all = degs.clone();
        all.sort_unstable();
        (n, all)
    } else {
        let low: Vec<usize> = (0..n).filter(|&i| degs[i] <= 1).collect();
        let first = &info[low[0]];
        if low.iter().any(|&i| info[i].core_size != first.core_size) {
            return fail(ReconStep::CoreSize, "cards deleting a vertex of degree ≤ 1 disagree on the core size");
        }
        (first.core_size, first.core_degrees.clone())
    };
    let in_core: Vec<bool> = info.iter().map(|c| c.core_size < core_size).collect();

    // (iii)
    let twos = core_degs.iter().filter(|&&x| x == 2).count();
    let core_sum: usize = core_degs.iter().sum();
    let in_a: Vec<bool> = (0..n)
        .map(|i| {
            let c = &info[i];
            if c.core_size + 1 != core_size {
                return false;
            }
            let card_sum: usize = c.core_degrees.iter().sum();
            if card_sum > core_sum || !(core_sum - card_sum).is_multiple_of(2) {
                return false;
            }
            let d_core = (core_sum - card_sum) / 2;
            let card_twos = c.core_degrees.iter().filter(|&&x| x == 2).count();
            d_core == degs[i] && card_twos + usize::from(d_core == 2) == twos
        })
        .collect();
    let a: Vec<usize> = (0..n).filter(|&i| in_a[i]).collect();
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    for (x, &i) in a.iter().enumerate() {
        for &j in &a[x + 1..] {
            pairs.push((degs[i] + degs[j], i, j));
        }
    }
    pairs.sort_unstable();
    let mut others: Vec<(usize, usize, usize)> = Vec::new();
    let core_cards: Vec<usize> = (0..n).filter(|&i| in_core[i]).collect();
    for (x, &i) in core_cards.iter().enumerate() {
        for &j in &core_cards[x + 1..] {
            if !(in_a[i] && in_a[j]) {
                others.push((degs[i] + degs[j], i, j));
            }
        }
    }
    others.sort_unstable();
    pairs.extend(others);
    if pairs.is_empty() {
        return fail(ReconStep::InteriorVertices, "fewer than two cards delete a core vertex");
    }

    // (iv) and (v)
    for (tried, &(_, i, j)) in pairs.iter().take(MAX_PAIRS).enumerate() {
        match overlay_pair(d, &info, core_size, m, i, j) {
            Ok(Some(graph)) => return ReconOutcome::Success { graph, pair: (i, j), pairs_tried: tried + 1 },
            Ok(None) => continue,
            Err(f) => return ReconOutcome::Failure(f),
        }
    }
    fail(ReconStep::Overlay, format!("no consistent overlay among {} candidate pairs", pairs.len().min(MAX_PAIRS)))
}

/// Canonical forms of `card − x` for every `x` whose removal shrinks the
/// card's core by exactly one.
fn doubly_deleted(card: &CardInfo, core_size: usize) -> Result<Vec<(Vertex, Card, Vec<usize>)>> {
    let g = &card.graph;
    let cands: Vec<Vertex> = (0..g.n()).collect();
    let out = par::map_range(cands.len(), |x| -> Result<Option<(Vertex, Card, Vec<usize>)>> {
        let keep: Vec<Vertex> = (0..g.n()).filter(|&v| v != x).collect();
        let (h, _) = g.induced_unchecked(&keep);
        if core_size < 2 || two_core(&h).len() != core_size - 2 {
            return Ok(None);
        }
        let (c, lab) = canonical_card(&h)?;
        Ok(Some((x, c, lab)))
    });
    Ok(out.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect())
}

fn overlay_pair(
    d: &Deck,
    info: &[CardInfo],
    core_size: usize,
    m: usize,
    i: usize,
    j: usize,
) -> std::result::Result<Option<Graph>, ReconFailure> {
    let undecided = |e: Error| ReconFailure { step: ReconStep::Overlay, detail: e.to_string() };
    let left = doubly_deleted(&info[i], core_size).map_err(undecided)?;
    let right = doubly_deleted(&info[j], core_size).map_err(undecided)?;
    let mut by_form: BTreeMap<&Card, Vec<usize>> = BTreeMap::new();
    for (r, (_, c, _)) in right.iter().enumerate() {
        by_form.entry(c).or_default().push(r);
    }
    let gi = &info[i].graph;
    let gj = &info[j].graph;
    let n = d.n;
    let mut overlays: Vec<Graph> = Vec::new();
    let mut matches = 0;
    for (v_prime, c, lab_i) in &left {
        let Some(rs) = by_form.get(c) else { continue };
        for &r in rs {
            matches += 1;
            if matches > MAX_MATCHES {
                return Err(ReconFailure { step: ReconStep::Overlay, detail: format!("more than {MAX_MATCHES} matches for cards {i}, {j}") });
            }
            let (u_prime, _, lab_j) = &right[r];
            // canonical id → vertex of card i (skipping v′)
            let mut from_canon = vec![0; n - 2];
            for (local, &cid) in lab_i.iter().enumerate() {
                from_canon[cid] = if local < *v_prime { local } else { local + 1 };
            }
            let to_local_j = |w: Vertex| if w < *u_prime { w } else { w - 1 };
            let new = n - 1;
            let mut edges: Vec<(Vertex, Vertex)> = gi.edges().collect();
            for &w in gj.neighbors(*u_prime) {
                edges.push((from_canon[lab_j[to_local_j(w)]], new));
            }
            let base = edges.len();
            match m.checked_sub(base) {
                Some(0) => {}
                Some(1) => edges.push((*v_prime, new)),
                _ => continue,
            }
            if let Ok(g) = Graph::from_edges(n, edges) {
                overlays.push(g);
            }
        }
    }
    let mut classes: BTreeMap<Card, Graph> = BTreeMap::new();
    for g in overlays {
        let (c, _) = canonical_card(&g).map_err(undecided)?;
        classes.entry(c).or_insert(g);
    }
    let mut consistent = Vec::new();
    for (_, g) in classes {
        match deck(&g) {
            Ok(dg) if dg == *d => consistent.push(g),
            Ok(_) => {}
            Err(e) => return Err(undecided(e)),
        }
    }
    match consistent.len() {
        0 => Ok(None),
        1 => Ok(consistent.pop()),
        k => Err(ReconFailure {
            step: ReconStep::Overlay,
            detail: format!("{k} non-isomorphic overlays of cards {i}, {j} share the deck"),
        }),
    }
}

/// Largest `n` handled by the exhaustive enumeration of graph classes.
pub const SMALL_N: usize = 8;

static CLASSES: [OnceLock<Vec<Graph>>; SMALL_N + 1] = [const { OnceLock::new() }; SMALL_N + 1];
static CLASS_DECKS: [OnceLock<Vec<Deck>>; SMALL_N + 1] = [const { OnceLock::new() }; SMALL_N + 1];

/// One representative of every isomorphism class of graphs on `n ≤ 8`
/// vertices, built by adding a vertex to each class on `n − 1` vertices in
/// every possible way.
pub fn graph_classes(n: usize) -> Result<&'static [Graph]> {
    if n > SMALL_N {
        return Err(Error::Undecided(format!("class enumeration is limited to n ≤ {SMALL_N}")));
    }
    if let Some(v) = CLASSES[n].get() {
        return Ok(v);
    }
    let built = if n == 0 {
        vec![Graph::empty(0)]
    } else {
        let prev = graph_classes(n - 1)?;
        let candidates: Vec<Graph> = prev
            .iter()
            .flat_map(|g| {
                (0u32..1 << (n - 1)).map(move |mask| {
                    let mut e: Vec<(Vertex, Vertex)> = g.edges().collect();
                    e.extend((0..n - 1).filter(|&b| mask >> b & 1 == 1).map(|b| (b, n - 1)));
                    Graph::from_edges(n, e).expect("valid extension")
                })
            })
            .collect();
        let forms = par::map_range(candidates.len(), |i| oracle_canonical_form(&candidates[i]).map(|o| o.form));
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for f in forms {
            let f = f?;
            if seen.insert(f.clone()) {
                out.push(Graph::from_edges(n, f).expect("canonical form"));
            }
        }
        out
    };
    Ok(CLASSES[n].get_or_init(|| built))
}

fn class_decks(n: usize) -> Result<&'static [Deck]> {
    if let Some(v) = CLASS_DECKS[n].get() {
        return Ok(v);
    }
    let classes = graph_classes(n)?;
    let decks = par::map_range(classes.len(), |i| deck(&classes[i]));
    let decks = decks.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(CLASS_DECKS[n].get_or_init(|| decks))
}

/// Is `G` the only graph (up to isomorphism) with its deck? Exhaustive,
/// for `2 ≤ n ≤ 8`.
pub fn deck_determines(g: &Graph) -> Result<bool> {
    let target = deck(g)?;
    if g.n() > SMALL_N {
        return Err(Error::Undecided(format!("exhaustive deck check is limited to n ≤ {SMALL_N}")));
    }
    Ok(class_decks(g.n())?.iter().filter(|d| **d == target).count() == 1)
}

/// The unique graph class with deck `d`, found by exhaustive enumeration.
pub fn reconstruct_small(d: &Deck) -> Result<Graph> {
    if d.n > SMALL_N || d.n < 2 {
        return Err(Error::Undecided(format!("exhaustive reconstruction needs 2 ≤ n ≤ {SMALL_N}")));
    }
    let classes = graph_classes(d.n)?;
    let hits: Vec<usize> = class_decks(d.n)?.iter().enumerate().filter(|(_, x)| *x == d).map(|(i, _)| i).collect();
    match hits.as_slice() {
        [i] => Ok(classes[*i].clone()),
        [] => Err(Error::InconsistentDeck("no graph has this deck".into())),
        _ => Err(Error::InconsistentDeck(format!("{} non-isomorphic graphs share this deck", hits.len()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::constrained_isomorphism;
    use crate::sample::{gnp_sample, random_permutation, rng_from_seed};

    fn card(g: &Graph) -> Card {
        canonical_card(g).unwrap().0
    }

    #[test]
    fn deck_examples() {
        let d = deck(&Graph::complete(3)).unwrap();
        assert!(d.cards.iter().all(|c| *c == card(&Graph::complete(2))));
        let d = deck(&Graph::path(3)).unwrap();
        let edge = card(&Graph::complete(2));
        let split = card(&Graph::empty(2));
        assert_eq!(d.cards.iter().filter(|c| **c == edge).count(), 2);
        assert_eq!(d.cards.iter().filter(|c| **c == split).count(), 1);
        assert!(deck(&Graph::empty(1)).is_err());
    }

    #[test]
    fn deck_is_relabeling_invariant() {
        let mut rng = rng_from_seed(2);
        for seed in 0..5 {
            let g = gnp_sample(30, 0.15, seed).unwrap();
            let h = g.permute(&random_permutation(30, &mut rng));
            assert_eq!(deck(&g).unwrap(), deck(&h).unwrap());
        }
    }

    #[test]
    fn k32_examples() {
        assert!(is_k32_free(&Graph::path(6)));
        let k32 = Graph::from_edges(5, [(0, 3), (1, 3), (2, 3), (0, 4), (1, 4), (2, 4)]).unwrap();
        assert!(!is_k32_free(&k32));
        assert!(is_k32_free(&Graph::complete(4)));
        assert!(!is_k32_free(&Graph::complete(5)));
    }

    #[test]
    fn degree_sequences() {
        assert_eq!(degree_sequence_from_deck(&deck(&Graph::complete(3)).unwrap()).unwrap(), vec![2, 2, 2]);
        assert_eq!(degree_sequence_from_deck(&deck(&Graph::path(3)).unwrap()).unwrap(), vec![1, 1, 2]);
        assert_eq!(degree_sequence_from_deck(&deck(&Graph::empty(5)).unwrap()).unwrap(), vec![0; 5]);
        let g = gnp_sample(40, 0.1, 7).unwrap();
        let mut expect = g.degree_sequence();
        expect.sort_unstable();
        assert_eq!(degree_sequence_from_deck(&deck(&g).unwrap()).unwrap(), expect);
    }

    #[test]
    fn c5_fails_at_overlay_but_small_path_succeeds() {
        let d = deck(&Graph::cycle(5)).unwrap();
        match reconstruct_from_deck(&d) {
            ReconOutcome::Failure(f) => assert_eq!(f.step, ReconStep::Overlay),
            ReconOutcome::Success { .. } => panic!("C5 has no interior pair"),
        }
        let g = reconstruct_small(&d).unwrap();
        assert!(constrained_isomorphism(&g, &Graph::cycle(5), &[]).unwrap().is_some());
    }

    #[test]
    fn class_counts() {
        let counts: Vec<usize> = (0..=6).map(|n| graph_classes(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn deck_determines_examples() {
        for g in graph_classes(3).unwrap() {
            assert!(deck_determines(g).unwrap());
        }
        assert!(!deck_determines(&Graph::complete(2)).unwrap());
        assert!(!deck_determines(&Graph::empty(2)).unwrap());
    }

    #[test]
    fn reconstructs_random_graph() {
        let n = 60;
        let p = 1.8 * (n as f64).ln() / n as f64;
        let mut ok = 0;
        for seed in 0..4 {
            let g = gnp_sample(n, p, seed).unwrap();
            let d = deck(&g).unwrap();
            if let ReconOutcome::Success { graph, .. } = reconstruct_from_deck(&d) {
                assert_eq!(deck(&graph).unwrap(), d);
                assert!(constrained_isomorphism(&graph, &g, &[]).unwrap().is_some());
                ok += 1;
            }
        }
        assert!(ok >= 3, "only {ok} of 4 reconstructed");
    }

    #[test]
    fn tampered_deck_is_rejected() {
        let g = gnp_sample(40, 0.12, 1).unwrap();
        let mut d = deck(&g).unwrap();
        let other = gnp_sample(39, 0.12, 99).unwrap();
        d.cards[0] = card(&other);
        d.cards.sort();
        match reconstruct_from_deck(&d) {
            ReconOutcome::Failure(f) => assert!(matches!(f.step, ReconStep::Degrees | ReconStep::Overlay), "{f:?}"),
            ReconOutcome::Success { .. } => panic!("tampered deck accepted"),
        }
    }
}
