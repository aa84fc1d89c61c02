//! Seeded G(n,p) sampling and seed derivation.
//!
//! The generator is ChaCha8 (`rand_chacha`), seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`. Edges are drawn with the
//! Batagelj–Brandes geometric-skip scan over the pairs `(w, v)`, `w < v`,
//! in column order: each skip is `floor(ln(1-r) / ln(1-p))` with `r` a
//! uniform `f64` in `[0, 1)`. Expected running time is `O(n + m)`.
//! For a fixed `(n, p, seed)` the output graph is bit-for-bit reproducible.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Result};
use crate::graph::{Graph, Vertex};

/// Seed for all randomized operations.
pub type Seed = u64;

/// The crate's pseudorandom generator.
pub type Prng = ChaCha8Rng;

pub fn rng_from_seed(seed: Seed) -> Prng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the `index`-th sub-task of a run keyed by `master`.
///
/// `derive_seed(m, i) = splitmix64(splitmix64(m) ^ i)`. Depends only on
/// `(master, index)`, so worker count never changes per-trial streams.
pub fn derive_seed(master: Seed, index: u64) -> Seed {
    splitmix64(splitmix64(master) ^ index)
}

/// Samples G(n,p).
pub fn gnp_sample(n: usize, p: f64, seed: Seed) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("edge probability {p} outside [0,1]"));
    }
    if p == 0.0 || n < 2 {
        return Ok(Graph::empty(n));
    }
    if p == 1.0 {
        return Ok(Graph::complete(n));
    }
    let mut rng = rng_from_seed(seed);
    let log_q = (1.0 - p).ln();
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let r: f64 = rng.gen();
        let skip = ((1.0 - r).ln() / log_q).floor();
        // a skip this large always runs past the last pair
        if skip >= (n as f64) * (n as f64) {
            break;
        }
        w += 1 + skip as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            let u = w as usize;
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    // column order already yields sorted lists
    debug_assert!(adj.iter().all(|l| l.windows(2).all(|w| w[0] < w[1])));
    Ok(Graph::from_sorted_adjacency(adj))
}

/// Uniform random permutation of `0..n`.
pub fn random_permutation(n: usize, rng: &mut impl Rng) -> Vec<Vertex> {
    let mut perm: Vec<Vertex> = (0..n).collect();
    perm.shuffle(rng);
    perm
}
