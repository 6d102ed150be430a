//! Monte Carlo walks on `J(n, k)` and on the lumped distance chain.
//!
//! Every trajectory draws from its own ChaCha stream seeded by mixing the
//! batch seed with the trajectory index, and per-time statistics are merged
//! as integer sums, so a batch is bit-identical for any number of worker
//! threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::DistanceChain;
use crate::error::{domain, Result};
use crate::params::JohnsonParams;

const WORD: usize = 64;
const CHUNK: usize = 512;

/// A `k`-subset of `0..n` with O(1) uniform swap proposals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetState {
    n: usize,
    bits: Vec<u64>,
    members: Vec<u32>,
    nonmembers: Vec<u32>,
}

impl SubsetState {
    pub fn from_members(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut bits = vec![0u64; n.div_ceil(WORD)];
        for e in members {
            if e >= n {
                return domain(format!("element {e} outside 0..{n}"));
            }
            bits[e / WORD] |= 1 << (e % WORD);
        }
        let (members, nonmembers) = (0..n as u32).partition(|&e| bits[e as usize / WORD] >> (e as usize % WORD) & 1 == 1);
        let state = SubsetState { n, bits, members, nonmembers };
        if state.members.is_empty() || state.nonmembers.is_empty() {
            return domain("subset must be nonempty and proper");
        }
        Ok(state)
    }

    /// `{0, .., k-1}`, the conventional target.
    pub fn first_k(params: JohnsonParams) -> Self {
        Self::from_members(params.n(), 0..params.k()).expect("valid params")
    }

    /// The subset obtained from `target` by swapping its first `m` members
    /// (in ascending order) for its first `m` nonmembers.
    pub fn at_distance(target: &SubsetState, m: usize) -> Result<Self> {
        let d_max = target.k().min(target.n - target.k());
        if m > d_max {
            return domain(format!("distance {m} exceeds d_max = {d_max}"));
        }
        let mut members: Vec<u32> = target.members.clone();
        let mut nonmembers = target.nonmembers.clone();
        members.sort_unstable();
        nonmembers.sort_unstable();
        let moved = members[m..].iter().chain(&nonmembers[..m]).map(|&e| e as usize);
        Self::from_members(target.n, moved.collect::<Vec<_>>())
    }

    pub fn params(&self) -> JohnsonParams {
        JohnsonParams::new(self.n, self.k()).expect("proper nonempty subset")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, e: usize) -> bool {
        e < self.n && self.bits[e / WORD] >> (e % WORD) & 1 == 1
    }

    /// Members in ascending order.
    pub fn members(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.members.iter().map(|&e| e as usize).collect();
        v.sort_unstable();
        v
    }

    pub fn popcount(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Checks that the bit-set and both index lists agree.
    pub fn is_consistent(&self) -> bool {
        let mut seen = vec![false; self.n];
        for &e in self.members.iter().chain(&self.nonmembers) {
            if seen[e as usize] {
                return false;
            }
            seen[e as usize] = true;
        }
        seen.iter().all(|s| *s)
            && self.members.iter().all(|&e| self.contains(e as usize))
            && self.nonmembers.iter().all(|&e| !self.contains(e as usize))
            && self.popcount() == self.k()
    }

    /// Swaps `members[i]` out for `nonmembers[j]`, returning `(out, in)`.
    pub fn swap_at(&mut self, i: usize, j: usize) -> (usize, usize) {
        let out = self.members[i] as usize;
        let inn = self.nonmembers[j] as usize;
        self.bits[out / WORD] &= !(1 << (out % WORD));
        self.bits[inn / WORD] |= 1 << (inn % WORD);
        self.members[i] = inn as u32;
        self.nonmembers[j] = out as u32;
        (out, inn)
    }
}

/// Swap distance `|x \ target|`.
pub fn distance(x: &SubsetState, target: &SubsetState) -> Result<usize> {
    if x.n != target.n || x.k() != target.k() {
        return domain(format!(
            "mismatched subsets: J({},{}) vs J({},{})",
            x.n,
            x.k(),
            target.n,
            target.k()
        ));
    }
    Ok(x.bits
        .iter()
        .zip(&target.bits)
        .map(|(a, b)| (a & !b).count_ones() as usize)
        .sum())
}

/// Change in distance to `target` from swapping `out` for `inn`.
fn swap_delta(target: &SubsetState, out: usize, inn: usize) -> i8 {
    match (target.contains(out), target.contains(inn)) {
        (true, false) => 1,
        (false, true) => -1,
        _ => 0,
    }
}

/// One proposal of the swap walk with Metropolis acceptance against the
/// distance objective. Outward moves are kept with probability `e^-beta`;
/// all others always. Returns the applied change in distance.
pub fn step<R: Rng + ?Sized>(state: &mut SubsetState, beta: f64, target: &SubsetState, rng: &mut R) -> i8 {
    let i = rng.random_range(0..state.members.len());
    let j = rng.random_range(0..state.nonmembers.len());
    let out = state.members[i] as usize;
    let inn = state.nonmembers[j] as usize;
    let delta = swap_delta(target, out, inn);
    if delta == 1 && beta > 0.0 && rng.random::<f64>() >= (-beta).exp() {
        return 0;
    }
    state.swap_at(i, j);
    delta
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkMode {
    FullState,
    Lumped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub params: JohnsonParams,
    pub beta: f64,
    pub steps: usize,
    pub trajectories: usize,
    pub base_seed: u64,
    pub start_distance: usize,
    pub mode: WalkMode,
    /// Freeze a trajectory once it reaches distance 0.
    pub absorbing: bool,
    /// Keep every path; when off only per-time statistics and hit times
    /// are retained.
    pub keep_paths: bool,
}

impl WalkConfig {
    pub fn new(params: JohnsonParams, beta: f64, start_distance: usize, trajectories: usize, steps: usize) -> Self {
        WalkConfig {
            params,
            beta,
            steps,
            trajectories,
            base_seed: 0,
            start_distance,
            mode: WalkMode::FullState,
            absorbing: false,
            keep_paths: true,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.base_seed = seed;
        self
    }

    pub fn mode(mut self, mode: WalkMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn absorbing(mut self, absorbing: bool) -> Self {
        self.absorbing = absorbing;
        self
    }

    pub fn keep_paths(mut self, keep: bool) -> Self {
        self.keep_paths = keep;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.start_distance > self.params.d_max() {
            return domain(format!(
                "start distance {} exceeds d_max = {}",
                self.start_distance,
                self.params.d_max()
            ));
        }
        if self.steps == 0 || self.trajectories == 0 {
            return domain("steps and trajectories must be at least 1");
        }
        if !self.beta.is_finite() || self.beta < 0.0 {
            return domain(format!("beta must be finite and >= 0, got {}", self.beta));
        }
        Ok(())
    }
}

/// SplitMix64 finalizer applied to the batch seed offset by the index.
pub fn substream_seed(base_seed: u64, index: u64) -> u64 {
    let mut z = base_seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn substream(base_seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(substream_seed(base_seed, index))
}

/// Sampled distance paths and their per-time statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryBatch {
    pub params: JohnsonParams,
    pub beta: f64,
    pub steps: usize,
    pub trajectories: usize,
    pub start_distance: usize,
    /// Row-major `trajectories x (steps + 1)`; empty when paths were not kept.
    pub distances: Vec<u32>,
    pub mean_path: Vec<f64>,
    /// Population standard deviation across trajectories at each time.
    pub std_path: Vec<f64>,
    /// First time at distance 0, if reached within `steps`.
    pub hit_times: Vec<Option<u64>>,
}

impl TrajectoryBatch {
    pub fn has_paths(&self) -> bool {
        !self.distances.is_empty()
    }

    pub fn row(&self, trajectory: usize) -> &[u32] {
        let w = self.steps + 1;
        &self.distances[trajectory * w..(trajectory + 1) * w]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.distances.chunks(self.steps + 1)
    }

    /// Whether every row moves by at most one per step.
    pub fn steps_are_local(&self) -> bool {
        self.rows()
            .all(|r| r.windows(2).all(|w| w[0].abs_diff(w[1]) <= 1))
    }

    /// Empirical distribution of the distance at time `t`.
    pub fn distribution_at(&self, t: usize) -> Result<Vec<f64>> {
        if !self.has_paths() || t > self.steps {
            return domain("distribution needs stored paths and t <= steps");
        }
        let mut counts = vec![0u64; self.params.d_max() + 1];
        for r in self.rows() {
            counts[r[t] as usize] += 1;
        }
        Ok(counts.iter().map(|&c| c as f64 / self.trajectories as f64).collect())
    }

    /// Observed `(down, stay, up)` move counts from each distance.
    pub fn transition_counts(&self) -> Result<Vec<[u64; 3]>> {
        if !self.has_paths() {
            return domain("transition counts need stored paths");
        }
        let mut counts = vec![[0u64; 3]; self.params.d_max() + 1];
        for r in self.rows() {
            for w in r.windows(2) {
                let slot = (w[1] as i64 - w[0] as i64 + 1) as usize;
                counts[w[0] as usize][slot] += 1;
            }
        }
        Ok(counts)
    }

    /// Observed hitting times; `None` when any trajectory missed the target.
    pub fn mean_hit_time(&self) -> Option<f64> {
        let mut total = 0u64;
        for h in &self.hit_times {
            total += (*h)?;
        }
        Some(total as f64 / self.hit_times.len() as f64)
    }
}

/// Conditional sample mean of the one-step change, grouped by distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftEstimate {
    pub d: usize,
    pub mean_delta: f64,
    pub count: u64,
    /// Standard error of `mean_delta`.
    pub std_err: f64,
}

pub fn empirical_drift(batch: &TrajectoryBatch) -> Result<Vec<DriftEstimate>> {
    let counts = batch.transition_counts()?;
    Ok(counts
        .iter()
        .enumerate()
        .filter(|(_, c)| c.iter().sum::<u64>() > 0)
        .map(|(d, &[down, _, up])| {
            let count: u64 = counts[d].iter().sum();
            let nf = count as f64;
            let mean = (up as f64 - down as f64) / nf;
            let second = (up + down) as f64 / nf;
            let var = (second - mean * mean).max(0.0);
            DriftEstimate { d, mean_delta: mean, count, std_err: (var / nf).sqrt() }
        })
        .collect())
}

struct Partial {
    sum: Vec<u64>,
    sum_sq: Vec<u64>,
    paths: Vec<u32>,
    hits: Vec<Option<u64>>,
}

impl Partial {
    fn new(width: usize) -> Self {
        Partial { sum: vec![0; width], sum_sq: vec![0; width], paths: Vec::new(), hits: Vec::new() }
    }
}

/// Runs `trajectories` independent paths; `walk` fills one path from its
/// own RNG and returns its first hitting time.
fn run_batch<F>(config: &WalkConfig, walk: F) -> TrajectoryBatch
where
    F: Fn(&mut ChaCha8Rng, &mut [u32]) -> Option<u64> + Sync,
{
    let width = config.steps + 1;
    let chunks: Vec<Partial> = (0..config.trajectories.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(config.trajectories);
            let mut part = Partial::new(width);
            let mut path = vec![0u32; width];
            for idx in lo..hi {
                let mut rng = substream(config.base_seed, idx as u64);
                let hit = walk(&mut rng, &mut path);
                for (t, &d) in path.iter().enumerate() {
                    part.sum[t] += d as u64;
                    part.sum_sq[t] += (d as u64) * (d as u64);
                }
                if config.keep_paths {
                    part.paths.extend_from_slice(&path);
                }
                part.hits.push(hit);
            }
            part
        })
        .collect();

    let mut total = Partial::new(width);
    for part in chunks {
        for t in 0..width {
            total.sum[t] += part.sum[t];
            total.sum_sq[t] += part.sum_sq[t];
        }
        total.paths.extend(part.paths);
        total.hits.extend(part.hits);
    }

    let count = config.trajectories as u128;
    let mean_path = total.sum.iter().map(|&s| s as f64 / count as f64).collect();
    let std_path = total
        .sum
        .iter()
        .zip(&total.sum_sq)
        .map(|(&s, &s2)| {
            let num = count * s2 as u128 - (s as u128) * (s as u128);
            (num as f64).sqrt() / count as f64
        })
        .collect();

    TrajectoryBatch {
        params: config.params,
        beta: config.beta,
        steps: config.steps,
        trajectories: config.trajectories,
        start_distance: config.start_distance,
        distances: total.paths,
        mean_path,
        std_path,
        hit_times: total.hits,
    }
}

/// Simulates the swap walk on the full graph, tracking distance to `target`.
pub fn simulate_batch(config: &WalkConfig, target: &SubsetState) -> Result<TrajectoryBatch> {
    config.validate()?;
    if target.params() != config.params {
        return domain(format!("target is in J({},{}), config is {}", target.n(), target.k(), config.params));
    }
    let start = SubsetState::at_distance(target, config.start_distance)?;
    Ok(run_batch(config, |rng, path| {
        let mut state = start.clone();
        let mut d = config.start_distance as i64;
        let mut hit = (d == 0).then_some(0);
        path[0] = d as u32;
        for (t, cell) in path.iter_mut().enumerate().skip(1) {
            if !(config.absorbing && hit.is_some()) {
                d += step(&mut state, config.beta, target, rng) as i64;
            }
            *cell = d as u32;
            if d == 0 && hit.is_none() {
                hit = Some(t as u64);
            }
        }
        hit
    }))
}

/// Simulates the birth-death chain directly from its `(p, q, r)` rows.
pub fn simulate_lumped(config: &WalkConfig, chain: &DistanceChain) -> Result<TrajectoryBatch> {
    config.validate()?;
    if chain.params != config.params || chain.beta != config.beta {
        return domain("chain parameters differ from the walk configuration");
    }
    Ok(run_batch(config, |rng, path| {
        let mut d = config.start_distance;
        let mut hit = (d == 0).then_some(0);
        path[0] = d as u32;
        for (t, cell) in path.iter_mut().enumerate().skip(1) {
            if !(config.absorbing && hit.is_some()) {
                let u: f64 = rng.random();
                if u < chain.q[d] {
                    d -= 1;
                } else if u < chain.q[d] + chain.p[d] {
                    d += 1;
                }
            }
            *cell = d as u32;
            if d == 0 && hit.is_none() {
                hit = Some(t as u64);
            }
        }
        hit
    }))
}

/// Dispatches on `config.mode` with the conventional target `{0, .., k-1}`.
pub fn simulate(config: &WalkConfig) -> Result<TrajectoryBatch> {
    match config.mode {
        WalkMode::FullState => simulate_batch(config, &SubsetState::first_k(config.params)),
        WalkMode::Lumped => simulate_lumped(config, &DistanceChain::new(config.params, config.beta)?),
    }
}

/// Fraction of time a single long full-state walk spends in each shell
/// after `burn_in` steps.
pub fn long_run_occupancy(params: JohnsonParams, beta: f64, burn_in: usize, steps: usize, seed: u64) -> Vec<f64> {
    let target = SubsetState::first_k(params);
    let mut state = target.clone();
    let mut rng = substream(seed, 0);
    let mut d = 0i64;
    for _ in 0..burn_in {
        d += step(&mut state, beta, &target, &mut rng) as i64;
    }
    let mut counts = vec![0u64; params.d_max() + 1];
    for _ in 0..steps {
        d += step(&mut state, beta, &target, &mut rng) as i64;
        counts[d as usize] += 1;
    }
    counts.iter().map(|&c| c as f64 / steps as f64).collect()
}

/// `(1/2) sum |a_i - b_i|`.
pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}
