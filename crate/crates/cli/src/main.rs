//! Command-line front end.
//!
//! Exit codes: 0 ok, 1 assertion failure, 2 undecided, 3 usage or input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use rigidity_core::canon::{canonical_label_with, iso_test, CanonOptions, IsoOutcome};
use rigidity_core::config::census_compatible;
use rigidity_core::cycles::max_cycle_len;
use rigidity_core::experiment::{Experiment, ExperimentConfig, ExperimentReport, PSpec};
use rigidity_core::io::{format_edge_list, read_edge_list};
use rigidity_core::oracle::{automorphism_group_with, core_graph, Budget};
use rigidity_core::prob::{binomial_prob_vector, pi_decay_profile, verify_lemma1_grid};
use rigidity_core::recon::{deck, reconstruct_from_deck, reconstruct_small, Card, CardSource, Deck, ReconOutcome, SMALL_N};
use rigidity_core::sample::gnp_sample;
use rigidity_core::structure::core_partition;
use rigidity_core::{par, Error, Graph};

#[derive(Parser)]
#[command(name = "rigidity", version, about = "2-cores, canonical labeling and reconstruction of sparse random graphs")]
struct Cli {
    /// Master seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 = one per core). Results never depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample G(n,p) and print it as an edge list.
    Gen {
        #[arg(long)]
        n: usize,
        /// `0.01`, `c/n:8` or `clogn/n:1.8`.
        #[arg(long)]
        p: String,
    },
    /// 2-core, pendant trees and acyclic components.
    Core {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Heuristic canonical labeling.
    Canon {
        #[arg(long = "in")]
        input: PathBuf,
        /// Treat violations of the diameter and tree-size properties as failures.
        #[arg(long)]
        strict: bool,
    },
    /// Isomorphism test by canonical forms: exit 0 isomorphic, 1 not, 2 undecided.
    Iso {
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        h: PathBuf,
    },
    /// Exact automorphism group.
    Aut {
        #[arg(long = "in")]
        input: PathBuf,
        /// Use the 2-core instead of the whole graph.
        #[arg(long)]
        core: bool,
        #[arg(long, default_value_t = Budget::default().max_nodes)]
        budget: u64,
    },
    /// Type I/II configurations on the 2-core and how many are compatible.
    Census {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        max_k: Option<usize>,
        #[arg(long, default_value_t = 1_000_000)]
        pairs: u64,
    },
    /// Write the deck as one edge-list file per card plus manifest.json.
    Deck {
        #[arg(long = "in")]
        input: PathBuf,
        /// Output directory.
        #[arg(long = "dir")]
        dir: PathBuf,
    },
    /// Rebuild a graph from a deck directory.
    Recon {
        #[arg(long)]
        deck: PathBuf,
        /// Fall back to exhaustive search when n ≤ 8.
        #[arg(long)]
        small: bool,
    },
    #[command(subcommand)]
    Prob(ProbCmd),
    /// Seeded Monte Carlo experiment.
    Experiment {
        #[arg(value_parser = parse_experiment)]
        name: Experiment,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = Budget::default().max_nodes)]
        budget: u64,
        /// Configurations per trial for `census`.
        #[arg(long, default_value_t = 1_000_000)]
        pairs: u64,
        #[arg(long)]
        max_k: Option<usize>,
        /// Exit 1 when the pass rate is below this and the run is in range.
        #[arg(long)]
        min_rate: Option<f64>,
    },
}

#[derive(Subcommand)]
enum ProbCmd {
    /// Check the multinomial mode bound on a probability grid.
    VerifyLemma1 {
        #[arg(long, default_value_t = 10)]
        max_m: u32,
        #[arg(long, default_value_t = 4)]
        max_k: usize,
        /// Grid step is 1/denominator.
        #[arg(long, default_value_t = 20)]
        denominator: u64,
    },
    /// Maximum point probability of Multinomial(m, Bin(k, p)) against m.
    PiProfile {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        p: f64,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16")]
        m: Vec<u32>,
    },
}

fn parse_experiment(s: &str) -> Result<Experiment, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Outcome of a command: the payload and its exit code.
struct Output {
    body: Body,
    code: u8,
}

enum Body {
    Json(Value),
    Text(String),
    Report(Box<ExperimentReport>),
}

fn ok(v: Value) -> Output {
    Output { body: Body::Json(v), code: 0 }
}

fn read(path: &Path) -> anyhow::Result<Graph> {
    read_edge_list(path).with_context(|| format!("reading {}", path.display()))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

#[derive(Serialize, Deserialize)]
struct ManifestCard {
    file: String,
    n: usize,
    m: usize,
    source: CardSource,
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    n: usize,
    cards: Vec<ManifestCard>,
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    Ok(match &cli.cmd {
        Cmd::Gen { n, p } => {
            let p = p.parse::<PSpec>()?.resolve(*n)?;
            Output { body: Body::Text(format_edge_list(&gnp_sample(*n, p, cli.seed)?)), code: 0 }
        }
        Cmd::Core { input } => {
            let g = read(input)?;
            let part = core_partition(&g);
            ok(json!({
                "n": g.n(),
                "core_size": part.core.len(),
                "outside_size": g.n() - part.core.len(),
                "partition": to_value(&part),
            }))
        }
        Cmd::Canon { input, strict } => {
            let g = read(input)?;
            ok(to_value(&canonical_label_with(&g, CanonOptions { strict: *strict })))
        }
        Cmd::Iso { g, h } => {
            let outcome = iso_test(&read(g)?, &read(h)?);
            let code = match outcome {
                IsoOutcome::Isomorphic => 0,
                IsoOutcome::NonIsomorphic => 1,
                IsoOutcome::Undecided => 2,
            };
            Output { body: Body::Json(json!({ "outcome": outcome })), code }
        }
        Cmd::Aut { input, core, budget } => {
            let g = read(input)?;
            let target = if *core { core_graph(&g) } else { g };
            let a = automorphism_group_with(&target, Budget { max_nodes: *budget })?;
            ok(json!({
                "n": target.n(),
                "order": a.order.to_string(),
                "trivial": a.is_trivial(),
                "generators": a.generators,
                "orbits": a.orbits(target.n()),
            }))
        }
        Cmd::Census { input, max_k, pairs } => {
            let g = read(input)?;
            let k = max_k.unwrap_or_else(|| max_cycle_len(g.n()));
            ok(to_value(&census_compatible(&g, k, *pairs, cli.seed)?))
        }
        Cmd::Deck { input, dir } => {
            let g = read(input)?;
            let d = deck(&g)?;
            fs::create_dir_all(dir)?;
            let width = d.n.to_string().len();
            let mut cards = Vec::new();
            for (i, c) in d.cards.iter().enumerate() {
                let file = format!("card_{i:0width$}.txt");
                fs::write(dir.join(&file), format_edge_list(&c.graph()))?;
                cards.push(ManifestCard { file, n: c.n, m: c.m(), source: c.source });
            }
            let manifest = Manifest { n: d.n, cards };
            fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
            ok(json!({ "n": d.n, "cards": d.cards.len(), "dir": dir.display().to_string() }))
        }
        Cmd::Recon { deck: dir, small } => {
            let text = fs::read_to_string(dir.join("manifest.json")).context("reading manifest.json")?;
            let manifest: Manifest = serde_json::from_str(&text).context("parsing manifest.json")?;
            let mut cards = Vec::new();
            for mc in &manifest.cards {
                let g = read(&dir.join(&mc.file))?;
                cards.push(Card { n: g.n(), edges: g.edges().collect(), source: mc.source });
            }
            let d = Deck::new(manifest.n, cards)?;
            match reconstruct_from_deck(&d) {
                ReconOutcome::Success { graph, pair, pairs_tried } => Output {
                    body: Body::Text(format_edge_list(&graph)),
                    code: 0,
                }
                .with_note(json!({ "outcome": "success", "pair": [pair.0, pair.1], "pairs_tried": pairs_tried })),
                ReconOutcome::Failure(f) if *small && d.n <= SMALL_N => match reconstruct_small(&d) {
                    Ok(g) => Output { body: Body::Text(format_edge_list(&g)), code: 0 }
                        .with_note(json!({ "outcome": "success", "fallback": "exhaustive", "failed_step": f.step })),
                    Err(e) => Output { body: Body::Json(json!({ "outcome": "failure", "step": f.step, "reason": e.to_string() })), code: 1 },
                },
                ReconOutcome::Failure(f) => {
                    Output { body: Body::Json(json!({ "outcome": "failure", "step": f.step, "reason": f.detail })), code: 1 }
                }
            }
        }
        Cmd::Prob(ProbCmd::VerifyLemma1 { max_m, max_k, denominator }) => {
            let grid = verify_lemma1_grid(*max_m, *max_k, *denominator)?;
            let code = u8::from(!grid.failures.is_empty());
            Output { body: Body::Json(to_value(&grid)), code }
        }
        Cmd::Prob(ProbCmd::PiProfile { k, p, m }) => {
            binomial_prob_vector(*k, *p)?;
            ok(json!({ "k": k, "p": p, "rows": pi_decay_profile(*k, *p, m)? }))
        }
        Cmd::Experiment { name, n, p, trials, budget, pairs, max_k, min_rate } => {
            let mut cfg = ExperimentConfig::new(*n, p.parse()?, *trials, cli.seed);
            cfg.budget = *budget;
            cfg.census_pairs = *pairs;
            cfg.max_k = *max_k;
            let report = name.run(&cfg)?;
            eprintln!("{}: {} trials in {:.2?}", report.experiment, report.config.trials, report.elapsed);
            let s = &report.summary;
            let hard_failure = ["mismatches", "contradictions", "deck_mismatches"]
                .iter()
                .any(|k| s.stats.get(*k).is_some_and(|&v| v > 0.0));
            let decided_rate = s.pass as f64 / (s.pass + s.fail).max(1) as f64;
            let code = match min_rate {
                _ if hard_failure => 1,
                Some(r) if report.in_range && s.rate < *r => {
                    if decided_rate < *r {
                        1
                    } else {
                        2
                    }
                }
                _ => 0,
            };
            Output { body: Body::Report(Box::new(report)), code }
        }
    })
}

impl Output {
    /// Prints `note` to stderr; used when stdout carries an edge list.
    fn with_note(self, note: Value) -> Self {
        eprintln!("{note}");
        self
    }
}

/// `path,value` rows for every scalar leaf of a JSON document.
fn json_to_csv(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&p, x, out);
                }
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    walk(&format!("{prefix}.{i}"), x, out);
                }
            }
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut rows = Vec::new();
    walk("", v, &mut rows);
    let mut s = String::from("field,value\n");
    for (k, x) in rows {
        s.push_str(&format!("{k},{x}\n"));
    }
    s
}

fn render(body: &Body, format: Format) -> String {
    match (body, format) {
        (Body::Text(t), _) => t.clone(),
        (Body::Json(v), Format::Json) => serde_json::to_string_pretty(v).expect("json") + "\n",
        (Body::Json(v), Format::Csv) => json_to_csv(v),
        (Body::Report(r), Format::Json) => r.to_json() + "\n",
        (Body::Report(r), Format::Csv) => r.to_csv(),
    }
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Undecided(_)) => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = par::with_workers(cli.workers, || run(&cli));
    match result {
        Ok(out) => {
            let text = render(&out.body, cli.format);
            let written = match &cli.out {
                Some(path) => fs::write(path, text).map_err(|e| anyhow!("writing {}: {e}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(3);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
