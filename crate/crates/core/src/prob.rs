//! Multinomial point probabilities and their maximum.
//!
//! `Π(m, p)` is the largest point probability of a multinomial with `m`
//! trials and category probabilities `p`. Its maximizers `a` satisfy
//! `a_t ≥ ⌊m·p_t⌋`, which is both checked exhaustively here and used to prune
//! the mode search.

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::par;

pub const SUM_TOLERANCE: f64 = 1e-12;
/// Compositions the mode search may visit before giving up.
pub const MODE_BUDGET: u64 = 20_000_000;

/// Category probabilities; optionally exact as integer numerators over a
/// common denominator, in which case comparisons are exact.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbVector {
    probs: Vec<f64>,
    exact: Option<(Vec<u64>, u64)>,
}

impl ProbVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return domain("probability vector is empty");
        }
        if probs.iter().any(|&x| x < 0.0 || !x.is_finite()) {
            return domain("probabilities must be finite and non-negative");
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return domain(format!("probabilities sum to {sum}, not 1"));
        }
        Ok(ProbVector { probs, exact: None })
    }

    /// `p_i = nums[i] / den`.
    pub fn exact(nums: Vec<u64>, den: u64) -> Result<Self> {
        if nums.is_empty() || den == 0 {
            return domain("exact probability vector needs entries and a positive denominator");
        }
        if nums.iter().sum::<u64>() != den {
            return domain("numerators do not sum to the denominator");
        }
        let probs = nums.iter().map(|&x| x as f64 / den as f64).collect();
        Ok(ProbVector { probs, exact: Some((nums, den)) })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// `⌊m·p_t⌋`; a hair below the true floor in the inexact case, so it
    /// never excludes a maximizer.
    fn floors(&self, m: u32) -> Vec<u32> {
        match &self.exact {
            Some((nums, den)) => nums.iter().map(|&x| (u64::from(m) * x / den) as u32).collect(),
            None => self.probs.iter().map(|&x| (f64::from(m) * x - 1e-9).floor().max(0.0) as u32).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultinomialMode {
    pub counts: Vec<u32>,
    pub pmax: f64,
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|i| f64::from(i).ln()).sum()
}

fn ln_pmf(m: u32, p: &[f64], a: &[u32]) -> f64 {
    let mut s = ln_factorial(m);
    for (&x, &pi) in a.iter().zip(p) {
        if x == 0 {
            continue;
        }
        if pi == 0.0 {
            return f64::NEG_INFINITY;
        }
        s += f64::from(x) * pi.ln() - ln_factorial(x);
    }
    s
}

/// `m!/∏a_i! · ∏ nums_i^{a_i}`: the pmf times `den^m`.
fn scaled_pmf(m: u32, nums: &[u64], a: &[u32]) -> BigUint {
    let mut num = BigUint::from(1u32);
    for i in 2..=m {
        num *= i;
    }
    let mut den = BigUint::from(1u32);
    for (&x, &p) in a.iter().zip(nums) {
        num *= BigUint::from(p).pow(x);
        for i in 2..=x {
            den *= i;
        }
    }
    num / den
}

fn check_counts(m: u32, p: &ProbVector, a: &[u32]) -> Result<()> {
    if a.len() != p.len() {
        return domain(format!("{} counts for {} categories", a.len(), p.len()));
    }
    if a.iter().map(|&x| u64::from(x)).sum::<u64>() != u64::from(m) {
        return domain(format!("counts do not sum to m = {m}"));
    }
    Ok(())
}

/// `m!/∏a_i! · ∏p_i^{a_i}`, evaluated in log space.
pub fn multinomial_pmf(m: u32, p: &ProbVector, a: &[u32]) -> Result<f64> {
    check_counts(m, p, a)?;
    Ok(ln_pmf(m, &p.probs, a).exp())
}

/// Exact pmf as a fraction `(numerator, denominator)`; needs an exact vector.
pub fn multinomial_pmf_exact(m: u32, p: &ProbVector, a: &[u32]) -> Result<(BigUint, BigUint)> {
    check_counts(m, p, a)?;
    let Some((nums, den)) = &p.exact else {
        return domain("exact pmf needs an exact probability vector");
    };
    Ok((scaled_pmf(m, nums, a), BigUint::from(*den).pow(m)))
}

/// Calls `f` on every composition of `m` into `lower.len()` parts with
/// `a_t ≥ lower[t]`.
fn for_each_composition(m: u32, lower: &[u32], f: &mut impl FnMut(&[u32])) {
    let k = lower.len();
    let base: u32 = lower.iter().sum();
    if base > m {
        return;
    }
    let mut a = lower.to_vec();
    fn rec(i: usize, left: u32, a: &mut Vec<u32>, lower: &[u32], f: &mut impl FnMut(&[u32])) {
        if i + 1 == a.len() {
            a[i] = lower[i] + left;
            f(a);
            return;
        }
        for extra in 0..=left {
            a[i] = lower[i] + extra;
            rec(i + 1, left - extra, a, lower, f);
        }
    }
    rec(0, m - base, &mut a, lower, f);
    debug_assert_eq!(a.len(), k);
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Comparable score of a composition: exact when possible.
#[derive(PartialEq, PartialOrd)]
enum Score {
    Exact(BigUint),
    Approx(f64),
}

fn score(m: u32, p: &ProbVector, a: &[u32]) -> Score {
    match &p.exact {
        Some((nums, _)) => Score::Exact(scaled_pmf(m, nums, a)),
        None => Score::Approx(ln_pmf(m, &p.probs, a)),
    }
}

/// A maximizer of the pmf, searched among compositions with
/// `a_t ≥ ⌊m·p_t⌋` (every maximizer satisfies this).
pub fn multinomial_mode(m: u32, p: &ProbVector) -> Result<MultinomialMode> {
    let lower = p.floors(m);
    let slack = u64::from(m - lower.iter().sum::<u32>().min(m));
    let k = p.len() as u64;
    if binomial(slack + k - 1, k - 1) > MODE_BUDGET as f64 {
        return Err(Error::Undecided(format!("mode search over m = {m}, k = {k} exceeds budget")));
    }
    let mut best: Option<(Score, Vec<u32>)> = None;
    for_each_composition(m, &lower, &mut |a| {
        let s = score(m, p, a);
        if best.as_ref().is_none_or(|(b, _)| s > *b) {
            best = Some((s, a.to_vec()));
        }
    });
    let (_, counts) = best.expect("the floors leave a feasible composition");
    let pmax = multinomial_pmf(m, p, &counts)?;
    Ok(MultinomialMode { counts, pmax })
}

/// Every global maximizer satisfies `a_t ≥ ⌊m·p_t⌋`. Exhaustive over all
/// compositions, without pruning. Exact for exact vectors; otherwise
/// maximizers are those within `1e-12` (relative) of the maximum.
pub fn verify_lemma1(m: u32, p: &ProbVector) -> bool {
    let zeros = vec![0; p.len()];
    let mut all: Vec<(Score, Vec<u32>)> = Vec::new();
    for_each_composition(m, &zeros, &mut |a| all.push((score(m, p, a), a.to_vec())));
    let floors = match &p.exact {
        Some((nums, den)) => nums.iter().map(|&x| (u64::from(m) * x / den) as u32).collect(),
        None => p.probs.iter().map(|&x| (f64::from(m) * x).floor() as u32).collect::<Vec<_>>(),
    };
    let max = all.iter().map(|(s, _)| s).fold(None::<&Score>, |acc, s| match acc {
        Some(b) if *b >= *s => Some(b),
        _ => Some(s),
    });
    let Some(max) = max else { return true };
    let is_max = |s: &Score| match (s, max) {
        (Score::Exact(x), Score::Exact(y)) => x == y,
        (Score::Approx(x), Score::Approx(y)) => *x >= *y - 1e-12,
        _ => unreachable!("one scoring mode per vector"),
    };
    all.iter().filter(|(s, _)| is_max(s)).all(|(_, a)| a.iter().zip(&floors).all(|(x, f)| x >= f))
}

/// Outcome of checking every exact grid vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma1Grid {
    pub max_m: u32,
    pub max_k: usize,
    pub denominator: u64,
    pub cells: u64,
    /// `(m, numerators)` of every failing cell.
    pub failures: Vec<(u32, Vec<u64>)>,
}

/// [`verify_lemma1`] for every `m ≤ max_m`, every `1 ≤ k ≤ max_k` and every
/// vector whose entries are multiples of `1/den`.
pub fn verify_lemma1_grid(max_m: u32, max_k: usize, den: u64) -> Result<Lemma1Grid> {
    if den == 0 || max_k == 0 {
        return domain("grid needs a positive denominator and k ≥ 1");
    }
    let mut vectors: Vec<Vec<u64>> = Vec::new();
    for k in 1..=max_k {
        let zeros = vec![0u32; k];
        for_each_composition(den as u32, &zeros, &mut |a| vectors.push(a.iter().map(|&x| u64::from(x)).collect()));
    }
    let cells: Vec<(u32, usize)> = (0..=max_m).flat_map(|m| (0..vectors.len()).map(move |i| (m, i))).collect();
    let ok = par::map_range(cells.len(), |c| {
        let (m, i) = cells[c];
        let p = ProbVector::exact(vectors[i].clone(), den).expect("grid vector sums to den");
        verify_lemma1(m, &p)
    });
    let failures =
        cells.iter().zip(&ok).filter(|(_, &ok)| !ok).map(|(&(m, i), _)| (m, vectors[i].clone())).collect();
    Ok(Lemma1Grid { max_m, max_k, denominator: den, cells: cells.len() as u64, failures })
}

/// `p_i = C(k, i) p^i (1−p)^{k−i}` for `i = 0..=k`.
pub fn binomial_prob_vector(k: u32, p: f64) -> Result<ProbVector> {
    if !(p > 0.0 && p <= 0.5) {
        return domain(format!("binomial probability vector needs 0 < p ≤ 1/2, got {p}"));
    }
    let q = 1.0 - p;
    let ln_k = ln_factorial(k);
    let probs: Vec<f64> = (0..=k)
        .map(|i| (ln_k - ln_factorial(i) - ln_factorial(k - i) + f64::from(i) * p.ln() + f64::from(k - i) * q.ln()).exp())
        .collect();
    // renormalize away rounding so the vector passes the sum check
    let sum: f64 = probs.iter().sum();
    ProbVector::new(probs.into_iter().map(|x| x / sum).collect())
}

/// Categories kept when profiling; the rest of the mass is folded in.
pub const MAX_CATEGORIES: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PiRow {
    pub m: u32,
    pub categories: usize,
    /// Probability mass moved from truncated tails into the end categories.
    pub folded_mass: f64,
    /// `None` when the mode search was over budget.
    pub pi: Option<f64>,
    /// `ln Π / (√m · ln m)` for `m ≥ 2`.
    pub normalized: Option<f64>,
}

/// Keeps the heaviest window of at most [`MAX_CATEGORIES`] consecutive
/// categories and folds each tail into the nearest kept category.
fn truncate(p: &[f64]) -> (Vec<f64>, f64) {
    if p.len() <= MAX_CATEGORIES {
        return (p.to_vec(), 0.0);
    }
    let w = MAX_CATEGORIES;
    let start = (0..=p.len() - w)
        .max_by(|&a, &b| {
            let sa: f64 = p[a..a + w].iter().sum();
            let sb: f64 = p[b..b + w].iter().sum();
            sa.total_cmp(&sb).then(b.cmp(&a))
        })
        .expect("non-empty range");
    let left: f64 = p[..start].iter().sum();
    let right: f64 = p[start + w..].iter().sum();
    let mut kept = p[start..start + w].to_vec();
    kept[0] += left;
    kept[w - 1] += right;
    (kept, left + right)
}

/// `Π(m, binomial_prob_vector(k, p))` for each `m`.
pub fn pi_decay_profile(k: u32, p: f64, m_values: &[u32]) -> Result<Vec<PiRow>> {
    let base = binomial_prob_vector(k, p)?;
    let (probs, folded_mass) = truncate(base.probs());
    let sum: f64 = probs.iter().sum();
    let pv = ProbVector::new(probs.into_iter().map(|x| x / sum).collect())?;
    Ok(m_values
        .iter()
        .map(|&m| {
            let pi = multinomial_mode(m, &pv).ok().map(|mode| mode.pmax);
            let normalized = match pi {
                Some(x) if m >= 2 => Some(x.ln() / (f64::from(m).sqrt() * f64::from(m).ln())),
                _ => None,
            };
            PiRow { m, categories: pv.len(), folded_mass, pi, normalized }
        })
        .collect())
}
