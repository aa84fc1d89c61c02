//! Seeded Monte Carlo experiments with JSON and CSV reports.
//!
//! Trial `i` of a run with master seed `s` uses `derive_seed(s, i)` and
//! nothing else, so the report is identical for any worker count. Wall
//! time is kept on the report but never serialized.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::canon::canonical_label;
use crate::config::census_compatible;
use crate::cycles::max_cycle_len;
use crate::error::{domain, Error, Result};
use crate::oracle::{automorphism_group_with, core_graph, Budget};
use crate::par;
use crate::recon::{canonical_card, deck, reconstruct_from_deck, ReconOutcome};
use crate::sample::{derive_seed, gnp_sample, random_permutation, Prng, Seed};
use crate::structure::two_core;

/// How the edge probability is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum PSpec {
    Explicit(f64),
    /// `p = c / n`
    COverN(f64),
    /// `p = c ln n / n`
    CLognOverN(f64),
}

impl PSpec {
    pub fn resolve(self, n: usize) -> Result<f64> {
        let nf = n as f64;
        let p = match self {
            PSpec::Explicit(p) => p,
            PSpec::COverN(c) => c / nf,
            PSpec::CLognOverN(c) => c * nf.ln() / nf,
        };
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return domain(format!("derived edge probability {p} outside [0,1]"));
        }
        Ok(p)
    }
}

impl FromStr for PSpec {
    type Err = Error;

    /// `0.01`, `c/n:8` or `clogn/n:1.8`.
    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| Error::Domain(format!("bad number {t:?}")));
        if let Some(c) = s.strip_prefix("c/n:") {
            Ok(PSpec::COverN(num(c)?))
        } else if let Some(c) = s.strip_prefix("clogn/n:") {
            Ok(PSpec::CLognOverN(num(c)?))
        } else {
            Ok(PSpec::Explicit(num(s)?))
        }
    }
}

impl fmt::Display for PSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PSpec::Explicit(p) => write!(f, "{p}"),
            PSpec::COverN(c) => write!(f, "c/n:{c}"),
            PSpec::CLognOverN(c) => write!(f, "clogn/n:{c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub p: PSpec,
    pub trials: usize,
    pub seed: Seed,
    /// Worker threads; 0 uses the default pool. Never affects results.
    pub workers: usize,
    /// Node budget for each oracle search.
    pub budget: u64,
    /// Configurations drawn per trial by the census experiment.
    pub census_pairs: u64,
    /// Longest configuration for the census; defaults to `max(3, ⌈ln n⌉)`.
    pub max_k: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(n: usize, p: PSpec, trials: usize, seed: Seed) -> Self {
        ExperimentConfig {
            n,
            p,
            trials,
            seed,
            workers: 0,
            budget: Budget::default().max_nodes,
            census_pairs: 1_000_000,
            max_k: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub index: usize,
    pub seed: Seed,
    pub outcome: Outcome,
    pub detail: Value,
}

/// The configuration as echoed into the report. Worker count is left out
/// so reports from different pool sizes are byte-identical.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub n: usize,
    pub p_spec: PSpec,
    pub p: f64,
    pub np: f64,
    pub trials: usize,
    pub seed: Seed,
    pub budget: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub undecided: usize,
    /// `pass / trials`; undecided trials count against it.
    pub rate: f64,
    /// Wilson score interval for `rate` at 95%.
    pub ci_low: f64,
    pub ci_high: f64,
    /// Experiment-specific aggregates.
    pub stats: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub config: ConfigEcho,
    /// Whether `(n, p)` lies in the range the underlying theorem speaks
    /// about. Outside it the rates are reported without a verdict.
    pub in_range: bool,
    pub summary: Summary,
    pub trials: Vec<TrialRecord>,
    #[serde(skip)]
    pub elapsed: Duration,
}

const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `k` successes out of `n`.
pub fn wilson_interval(k: usize, n: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (k, n) = (k as f64, n as f64);
    let phat = k / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = Z95 * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Header and one row with the aggregate fields of the JSON report.
    pub fn to_csv(&self) -> String {
        let mut head: Vec<String> =
            ["experiment", "n", "p", "np", "trials", "seed", "in_range", "pass", "fail", "undecided", "rate", "ci_low", "ci_high"]
                .iter()
                .map(|s| s.to_string())
                .collect();
        let c = &self.config;
        let s = &self.summary;
        let mut row = vec![
            self.experiment.clone(),
            c.n.to_string(),
            c.p.to_string(),
            c.np.to_string(),
            c.trials.to_string(),
            c.seed.to_string(),
            self.in_range.to_string(),
            s.pass.to_string(),
            s.fail.to_string(),
            s.undecided.to_string(),
            s.rate.to_string(),
            s.ci_low.to_string(),
            s.ci_high.to_string(),
        ];
        for (k, v) in &s.stats {
            head.push(k.clone());
            row.push(v.to_string());
        }
        format!("{}\n{}\n", head.join(","), row.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Rigidity,
    CanonInvariance,
    CoreSize,
    Recon,
    Census,
}

impl Experiment {
    pub const ALL: [Experiment; 5] =
        [Experiment::Rigidity, Experiment::CanonInvariance, Experiment::CoreSize, Experiment::Recon, Experiment::Census];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Rigidity => "rigidity",
            Experiment::CanonInvariance => "canon-invariance",
            Experiment::CoreSize => "core-size",
            Experiment::Recon => "recon",
            Experiment::Census => "census",
        }
    }

    pub fn run(self, cfg: &ExperimentConfig) -> Result<ExperimentReport> {
        match self {
            Experiment::Rigidity => run_rigidity(cfg),
            Experiment::CanonInvariance => run_canon_invariance(cfg),
            Experiment::CoreSize => run_core_size(cfg),
            Experiment::Recon => run_recon(cfg),
            Experiment::Census => run_census(cfg),
        }
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown experiment {s:?}")))
    }
}

/// Runs `trial(graph, seed)` for every trial on a pool of `cfg.workers`.
fn run_trials<F>(name: &str, cfg: &ExperimentConfig, in_range: bool, trial: F) -> Result<ExperimentReport>
where
    F: Fn(&crate::Graph, Seed) -> Result<(Outcome, Value)> + Sync,
{
    if cfg.trials == 0 {
        return domain("an experiment needs at least one trial");
    }
    let p = cfg.p.resolve(cfg.n)?;
    let start = Instant::now();
    let run = || {
        par::map_range(cfg.trials, |i| -> Result<TrialRecord> {
            let seed = derive_seed(cfg.seed, i as u64);
            let g = gnp_sample(cfg.n, p, seed)?;
            let (outcome, detail) = match trial(&g, seed) {
                Err(Error::Undecided(msg)) => (Outcome::Undecided, json!({ "undecided": msg })),
                other => other?,
            };
            Ok(TrialRecord { index: i, seed, outcome, detail })
        })
    };
    let records = if cfg.workers == 0 { run() } else { par::with_workers(cfg.workers, run) };
    let trials = records.into_iter().collect::<Result<Vec<_>>>()?;
    let count = |o: Outcome| trials.iter().filter(|t| t.outcome == o).count();
    let pass = count(Outcome::Pass);
    let (ci_low, ci_high) = wilson_interval(pass, trials.len());
    Ok(ExperimentReport {
        experiment: name.to_string(),
        config: ConfigEcho {
            n: cfg.n,
            p_spec: cfg.p,
            p,
            np: cfg.n as f64 * p,
            trials: cfg.trials,
            seed: cfg.seed,
            budget: cfg.budget,
        },
        in_range,
        summary: Summary {
            pass,
            fail: count(Outcome::Fail),
            undecided: count(Outcome::Undecided),
            rate: pass as f64 / trials.len() as f64,
            ci_low,
            ci_high,
            stats: BTreeMap::new(),
        },
        trials,
        elapsed: start.elapsed(),
    })
}

fn np_of(cfg: &ExperimentConfig) -> Result<(f64, f64)> {
    let p = cfg.p.resolve(cfg.n)?;
    Ok((p, cfg.n as f64 * p))
}

/// Smallest `np` treated as inside the sparse "np → ∞" regimes.
pub const MIN_IN_RANGE_NP: f64 = 3.0;

fn field(t: &TrialRecord, key: &str) -> Option<f64> {
    t.detail.get(key).and_then(Value::as_f64)
}

fn count_where(r: &ExperimentReport, f: impl Fn(&TrialRecord) -> bool) -> f64 {
    r.trials.iter().filter(|t| f(t)).count() as f64
}

/// Per trial: is the automorphism group of the 2-core trivial? A trial
/// whose core the heuristic labels successfully (which forces a trivial
/// group) while the exact search finds symmetry counts as a contradiction.
pub fn run_rigidity(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let (p, np) = np_of(cfg)?;
    let budget = Budget { max_nodes: cfg.budget };
    let mut r = run_trials("rigidity", cfg, np >= MIN_IN_RANGE_NP && p <= 0.5, |g, _| {
        let core = core_graph(g);
        let group = automorphism_group_with(&core, budget)?;
        let trivial = group.is_trivial();
        let canon_success = canonical_label(&core).success().is_some();
        let contradiction = canon_success && !trivial;
        let outcome = if trivial { Outcome::Pass } else { Outcome::Fail };
        Ok((
            outcome,
            json!({
                "core_size": core.n(),
                "aut_order": group.order.to_string(),
                "canon_success": canon_success,
                "contradiction": contradiction,
            }),
        ))
    })?;
    let contradictions = count_where(&r, |t| t.detail.get("contradiction") == Some(&Value::Bool(true)));
    r.summary.stats.insert("contradictions".into(), contradictions);
    Ok(r)
}

/// Per trial: label `G` and a random relabeling of it; any difference in
/// outcome kind, or in form on success, is a failure.
pub fn run_canon_invariance(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let (p, np) = np_of(cfg)?;
    let mut r = run_trials("canon-invariance", cfg, np >= MIN_IN_RANGE_NP && p <= 0.5, |g, seed| {
        let mut rng = Prng::seed_from_u64(derive_seed(seed, 1));
        let h = g.permute(&random_permutation(g.n(), &mut rng));
        let (a, b) = (canonical_label(g), canonical_label(&h));
        let same = match (a.success(), b.success()) {
            (Some(x), Some(y)) => x.form == y.form,
            _ => a.kind() == b.kind(),
        };
        let outcome = if same { Outcome::Pass } else { Outcome::Fail };
        Ok((outcome, json!({ "kind": a.kind(), "kind_permuted": b.kind(), "success": a.kind() == 0 })))
    })?;
    let decided = r.trials.iter().filter(|t| t.outcome != Outcome::Undecided).count();
    let successes = count_where(&r, |t| t.detail.get("success") == Some(&Value::Bool(true)));
    let (lo, hi) = wilson_interval(successes as usize, decided);
    let s = &mut r.summary.stats;
    s.insert("mismatches".into(), r.summary.fail as f64);
    s.insert("success_rate".into(), if decided > 0 { successes / decided as f64 } else { 0.0 });
    s.insert("success_ci_low".into(), lo);
    s.insert("success_ci_high".into(), hi);
    Ok(r)
}

/// Per trial: `|R̃| = n − |R(G)|`. A trial passes when `|R̃| < n/10`; tail
/// frequencies at `n/e^{np}`, `n/20` and `n/10` are reported.
pub fn run_core_size(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let (_, np) = np_of(cfg)?;
    let n = cfg.n as f64;
    let mut r = run_trials("core-size", cfg, np >= MIN_IN_RANGE_NP, |g, _| {
        let outside = g.n() - two_core(g).len();
        let outcome = if (outside as f64) < n / 10.0 { Outcome::Pass } else { Outcome::Fail };
        Ok((outcome, json!({ "outside": outside })))
    })?;
    let mut sizes: Vec<f64> = r.trials.iter().filter_map(|t| field(t, "outside")).collect();
    sizes.sort_by(f64::total_cmp);
    let total = r.trials.len() as f64;
    let freq = |x: f64| sizes.iter().filter(|&&s| s >= x).count() as f64 / total;
    let s = &mut r.summary.stats;
    s.insert("tail_n_over_exp_np".into(), freq(n / np.exp()));
    s.insert("tail_n_over_20".into(), freq(n / 20.0));
    s.insert("tail_n_over_10".into(), freq(n / 10.0));
    if !sizes.is_empty() {
        let k = sizes.len();
        let median = if k % 2 == 1 { sizes[k / 2] } else { (sizes[k / 2 - 1] + sizes[k / 2]) / 2.0 };
        s.insert("median".into(), median);
        s.insert("min".into(), sizes[0]);
        s.insert("max".into(), sizes[k - 1]);
    }
    Ok(r)
}

/// Reconstructs each sample from its deck. A trial passes when the result
/// is isomorphic to the sample and has exactly the input deck.
pub fn run_recon(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let (p, _) = np_of(cfg)?;
    let ln_n = (cfg.n.max(2) as f64).ln() / cfg.n.max(2) as f64;
    let in_range = p >= 0.9 * ln_n && p <= 2.6 * ln_n;
    let mut r = run_trials("recon", cfg, in_range, |g, _| {
        if g.n() < 3 {
            return Err(Error::Undecided("reconstruction needs n ≥ 3".into()));
        }
        let d = deck(g)?;
        match reconstruct_from_deck(&d) {
            ReconOutcome::Success { graph, pair, pairs_tried } => {
                let same_deck = deck(&graph)? == d;
                let iso = canonical_card(&graph)?.0 == canonical_card(g)?.0;
                let outcome = if same_deck && iso { Outcome::Pass } else { Outcome::Fail };
                Ok((
                    outcome,
                    json!({ "pair": [pair.0, pair.1], "pairs_tried": pairs_tried, "deck_equal": same_deck, "isomorphic": iso }),
                ))
            }
            ReconOutcome::Failure(f) => Ok((Outcome::Fail, json!({ "failed_step": f.step, "reason": f.detail }))),
        }
    })?;
    let bad_decks = count_where(&r, |t| t.detail.get("deck_equal") == Some(&Value::Bool(false)));
    r.summary.stats.insert("deck_mismatches".into(), bad_decks);
    Ok(r)
}

/// Samples type I/II configurations on each sample's 2-core; a trial
/// passes when none of them is realized by a core automorphism.
pub fn run_census(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let (p, np) = np_of(cfg)?;
    let ln_n = (cfg.n.max(2) as f64).ln();
    let max_k = cfg.max_k.unwrap_or_else(|| max_cycle_len(cfg.n));
    let in_range = np >= MIN_IN_RANGE_NP && p <= 3.0 * ln_n / cfg.n.max(1) as f64;
    let mut r = run_trials("census", cfg, in_range, |g, seed| {
        let c = census_compatible(g, max_k, cfg.census_pairs, derive_seed(seed, 2))?;
        let outcome = if c.compatible > 0 {
            Outcome::Fail
        } else if c.undecided > 0 {
            Outcome::Undecided
        } else {
            Outcome::Pass
        };
        Ok((outcome, serde_json::to_value(&c).expect("census serializes")))
    })?;
    let sum = |key: &str| r.trials.iter().filter_map(|t| field(t, key)).sum::<f64>();
    let totals = [("pairs", sum("pairs")), ("type_i", sum("type_i")), ("type_ii", sum("type_ii")), ("compatible", sum("compatible"))];
    for (k, v) in totals {
        r.summary.stats.insert(format!("total_{k}"), v);
    }
    Ok(r)
}

/// Pilot runs committed with the crate; their seeds and measured values
/// pin the acceptance thresholds.
pub mod baselines {
    pub const RIGIDITY: &str = include_str!("../baselines/rigidity.json");
    pub const CORE_SIZE: &str = include_str!("../baselines/core-size.json");
    pub const RECON: &str = include_str!("../baselines/recon.json");
    pub const CENSUS: &str = include_str!("../baselines/census.json");
    pub const CANON: &str = include_str!("../baselines/canon-invariance.json");
}
