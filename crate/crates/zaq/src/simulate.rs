//! Event-driven simulation of the queue and of the underlying random walk.
//!
//! The queue simulator runs competing exponential clocks: arrivals at rate
//! `lambda` (classes drawn from `nu`), services at rate `mu` while the buffer
//! is nonempty. An arrival finding the buffer empty is admitted with
//! probability `r(Right(b))` and discarded otherwise — the thinning
//! realization of the boundary condition, which reproduces the generator's
//! empty-state exit rate `lambda A(r)` exactly. Runs are bit-for-bit
//! deterministic given a seed: the generator family is ChaCha12, seeded from
//! the config and split into one stream per replication.

use crate::algebra::{BufferWord, GeneratorId, PairSpec};
use crate::oracle;
use crate::traffic::ClassDistribution;
use crate::twisted::StationaryLaw;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::collections::{HashMap, VecDeque};

/// Name of the RNG family recorded in reports.
pub const RNG_FAMILY: &str = "chacha12";

/// Cap on distinct tracked words before the histogram stops growing.
const HISTOGRAM_CAP: usize = 1_000_000;

/// Configuration of one simulation run.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub lambda: f64,
    pub mu: f64,
    /// Boundary vector used to thin arrivals at the empty buffer.
    pub r_boundary: Vec<f64>,
    /// Total number of exponential events (including discarded arrivals).
    pub horizon_events: u64,
    /// Events discarded from all statistics before collection starts.
    pub warmup_events: u64,
    pub seed: u64,
    /// RNG stream; replications get consecutive streams.
    pub stream: u64,
    /// Words up to this length enter the occupancy histogram.
    pub max_tracked_len: usize,
}

impl SimConfig {
    pub fn new(lambda: f64, mu: f64, r_boundary: Vec<f64>, horizon_events: u64) -> SimConfig {
        SimConfig {
            lambda,
            mu,
            r_boundary,
            horizon_events,
            warmup_events: horizon_events / 10,
            seed: 0x5eed,
            stream: 0,
            max_tracked_len: 6,
        }
    }

    fn validate(&self, pair: &PairSpec) -> Result<()> {
        if self.lambda <= 0.0 || !self.lambda.is_finite() {
            return Err(Error::NonPositiveRate(format!("lambda = {}", self.lambda)));
        }
        if self.mu <= 0.0 || !self.mu.is_finite() {
            return Err(Error::NonPositiveRate(format!("mu = {}", self.mu)));
        }
        if self.warmup_events >= self.horizon_events {
            return Err(Error::Parse(
                "warmup_events must be smaller than horizon_events".to_string(),
            ));
        }
        if self.r_boundary.len() != pair.len() {
            return Err(Error::BadDistribution(format!(
                "r_boundary has {} entries, expected {}",
                self.r_boundary.len(),
                pair.len()
            )));
        }
        let sum: f64 = self.r_boundary.iter().sum();
        if self.r_boundary.iter().any(|&v| v < 0.0) || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::BadDistribution(format!(
                "r_boundary sums to {sum}, not 1"
            )));
        }
        Ok(())
    }
}

/// Everything measured in one run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    /// Time fraction spent in each tracked word, sorted by (length, word).
    pub word_occupancy: Vec<(BufferWord, f64)>,
    /// Time fraction per word length (index = length).
    pub level_occupancy: Vec<f64>,
    /// Total fraction covered by `word_occupancy` (<= 1).
    pub tracked_mass: f64,
    /// Whether the word histogram hit its size cap.
    pub histogram_truncated: bool,
    pub departures: u64,
    /// Departures per unit time, post-warmup.
    pub departure_rate: f64,
    pub interdeparture_mean: Option<f64>,
    pub interdeparture_var: Option<f64>,
    pub interdeparture_cv: Option<f64>,
    /// Departure instants (relative to the end of warmup) and classes.
    pub departure_times: Vec<f64>,
    pub departure_classes: Vec<GeneratorId>,
    pub empty_fraction: f64,
    /// Completed regeneration cycles: transitions into the empty buffer.
    pub returned_to_empty: u64,
    /// Post-warmup simulated time.
    pub elapsed: f64,
    pub events: u64,
    pub final_word_len: usize,
    pub max_tracked_len: usize,
    pub rng_family: &'static str,
    pub seed: u64,
    pub stream: u64,
}

#[inline]
fn sample_exp(rng: &mut ChaCha12Rng, rate: f64) -> f64 {
    // Inverse CDF on (0,1]; 1-u avoids ln(0).
    -(1.0 - rng.random::<f64>()).ln() / rate
}

#[inline]
fn sample_class(rng: &mut ChaCha12Rng, cumulative: &[f64]) -> usize {
    let u: f64 = rng.random();
    cumulative.iter().position(|&c| u < c).unwrap_or(cumulative.len() - 1)
}

/// Runs the queue for `cfg.horizon_events` events.
pub fn simulate_queue(pair: &PairSpec, nu: &ClassDistribution, cfg: &SimConfig) -> Result<SimReport> {
    cfg.validate(pair)?;
    let n = pair.len();
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    rng.set_stream(cfg.stream);

    let mut cumulative = vec![0.0; n];
    let mut acc = 0.0;
    for (i, c) in cumulative.iter_mut().enumerate() {
        acc += nu.prob(GeneratorId(i as u32));
        *c = acc;
    }
    // Admission probability per class at the empty buffer: r(Right(b)).
    let admit: Vec<f64> = pair
        .generators()
        .map(|b| pair.right(b).iter().map(|&c| cfg.r_boundary[c.index()]).sum())
        .collect();

    // Packed key for tracked words: base n+1 digits, letter index + 1.
    let base = (n + 1) as u64;
    let mut cap_len = 0usize;
    let mut pow = 1u128;
    while pow * base as u128 <= u64::MAX as u128 && cap_len < cfg.max_tracked_len {
        pow *= base as u128;
        cap_len += 1;
    }
    let tracked_len = cap_len;

    let mut word: VecDeque<GeneratorId> = VecDeque::new();
    let mut histogram: HashMap<u64, f64> = HashMap::new();
    let mut histogram_truncated = false;
    let mut level_time: Vec<f64> = vec![0.0];
    let mut elapsed = 0.0f64;
    let mut departures = 0u64;
    let mut departure_times: Vec<f64> = Vec::new();
    let mut departure_classes: Vec<GeneratorId> = Vec::new();
    let mut returned_to_empty = 0u64;

    for event in 0..cfg.horizon_events {
        let collecting = event >= cfg.warmup_events;
        let is_arrival;
        let dt;
        if word.is_empty() {
            dt = sample_exp(&mut rng, cfg.lambda);
            is_arrival = true;
        } else {
            let total = cfg.lambda + cfg.mu;
            dt = sample_exp(&mut rng, total);
            is_arrival = rng.random::<f64>() < cfg.lambda / total;
        }
        if collecting {
            elapsed += dt;
            let len = word.len();
            if len >= level_time.len() {
                level_time.resize(len + 1, 0.0);
            }
            level_time[len] += dt;
            if len <= tracked_len {
                let mut key = 0u64;
                for &g in word.iter() {
                    key = key * base + (g.0 as u64 + 1);
                }
                if let Some(t) = histogram.get_mut(&key) {
                    *t += dt;
                } else if histogram.len() < HISTOGRAM_CAP {
                    histogram.insert(key, dt);
                } else {
                    histogram_truncated = true;
                }
            }
        }
        if is_arrival {
            let class = GeneratorId(sample_class(&mut rng, &cumulative) as u32);
            if word.is_empty() {
                // Thinning: admit with probability r(Right(class)).
                if rng.random::<f64>() < admit[class.index()] {
                    word.push_front(class);
                }
            } else {
                let s1 = *word.front().expect("nonempty");
                match pair.product(class, s1) {
                    crate::algebra::Reduction::Irreducible => word.push_front(class),
                    crate::algebra::Reduction::Letter(c) => *word.front_mut().unwrap() = c,
                    crate::algebra::Reduction::Identity => {
                        word.pop_front();
                        if word.is_empty() && collecting {
                            returned_to_empty += 1;
                        }
                    }
                }
            }
        } else {
            let class = word.pop_back().expect("service only when nonempty");
            if collecting {
                departures += 1;
                departure_times.push(elapsed);
                departure_classes.push(class);
            }
            if word.is_empty() && collecting {
                returned_to_empty += 1;
            }
        }
        #[cfg(debug_assertions)]
        {
            let letters: Vec<GeneratorId> = word.iter().copied().collect();
            debug_assert!(pair.is_normal(&letters).unwrap());
        }
    }

    let mut word_occupancy: Vec<(BufferWord, f64)> = histogram
        .into_iter()
        .map(|(key, t)| {
            let mut letters = Vec::new();
            let mut k = key;
            while k > 0 {
                letters.push(GeneratorId((k % base - 1) as u32));
                k /= base;
            }
            letters.reverse();
            (BufferWord(letters), t / elapsed)
        })
        .collect();
    word_occupancy.sort_by(|x, y| (x.0.len(), &x.0).cmp(&(y.0.len(), &y.0)));
    let tracked_mass: f64 = word_occupancy.iter().map(|(_, f)| f).sum();
    let level_occupancy: Vec<f64> = level_time.iter().map(|t| t / elapsed).collect();

    let (mut mean, mut var, mut cv) = (None, None, None);
    if departure_times.len() >= 2 {
        let gaps: Vec<f64> = departure_times.windows(2).map(|w| w[1] - w[0]).collect();
        let m = gaps.iter().sum::<f64>() / gaps.len() as f64;
        let v = gaps.iter().map(|g| (g - m) * (g - m)).sum::<f64>() / (gaps.len() - 1) as f64;
        mean = Some(m);
        var = Some(v);
        if m > 0.0 {
            cv = Some(v.sqrt() / m);
        }
    }

    Ok(SimReport {
        word_occupancy,
        level_occupancy,
        tracked_mass,
        histogram_truncated,
        departures,
        departure_rate: departures as f64 / elapsed,
        interdeparture_mean: mean,
        interdeparture_var: var,
        interdeparture_cv: cv,
        departure_times,
        departure_classes,
        empty_fraction: level_time[0] / elapsed,
        returned_to_empty,
        elapsed,
        events: cfg.horizon_events,
        final_word_len: word.len(),
        max_tracked_len: tracked_len,
        rng_family: RNG_FAMILY,
        seed: cfg.seed,
        stream: cfg.stream,
    })
}

/// Runs independent replications on consecutive RNG streams, concurrently up
/// to `threads` workers. Reports come back in replication order.
pub fn simulate_replications(
    pair: &PairSpec,
    nu: &ClassDistribution,
    cfg: &SimConfig,
    reps: usize,
    threads: usize,
) -> Result<Vec<SimReport>> {
    let mut cfgs = Vec::with_capacity(reps);
    for rep in 0..reps {
        let mut c = cfg.clone();
        c.stream = cfg.stream + rep as u64;
        cfgs.push(c);
    }
    let workers = threads.max(1).min(reps.max(1));
    if workers <= 1 || reps <= 1 {
        return cfgs.iter().map(|c| simulate_queue(pair, nu, c)).collect();
    }
    let mut results: Vec<Option<Result<SimReport>>> = (0..reps).map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunks = results.chunks_mut(reps.div_ceil(workers));
        for (chunk_ix, chunk) in chunks.enumerate() {
            let cfgs = &cfgs;
            let start = chunk_ix * reps.div_ceil(workers);
            scope.spawn(move || {
                for (off, slot) in chunk.iter_mut().enumerate() {
                    *slot = Some(simulate_queue(pair, nu, &cfgs[start + off]));
                }
            });
        }
    });
    results.into_iter().map(|r| r.expect("filled")).collect()
}

/// Mean and standard error across replications of the headline scalars.
#[derive(Debug, Clone, Copy)]
pub struct PooledStats {
    pub reps: usize,
    pub empty_fraction_mean: f64,
    pub empty_fraction_se: f64,
    pub departure_rate_mean: f64,
    pub departure_rate_se: f64,
}

pub fn pool_reports(reports: &[SimReport]) -> PooledStats {
    let k = reports.len().max(1) as f64;
    let mean = |f: &dyn Fn(&SimReport) -> f64| reports.iter().map(f).sum::<f64>() / k;
    let se = |f: &dyn Fn(&SimReport) -> f64, m: f64| {
        if reports.len() < 2 {
            return 0.0;
        }
        let v = reports.iter().map(|r| (f(r) - m).powi(2)).sum::<f64>() / (k - 1.0);
        (v / k).sqrt()
    };
    let ef = mean(&|r: &SimReport| r.empty_fraction);
    let dr = mean(&|r: &SimReport| r.departure_rate);
    PooledStats {
        reps: reports.len(),
        empty_fraction_mean: ef,
        empty_fraction_se: se(&|r: &SimReport| r.empty_fraction, ef),
        departure_rate_mean: dr,
        departure_rate_se: se(&|r: &SimReport| r.departure_rate, dr),
    }
}

/// Result of a random-walk run.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkReport {
    /// `|X_steps| / steps`.
    pub gamma_estimate: f64,
    /// Batch-means standard error of the drift estimate.
    pub gamma_se: f64,
    /// Empirical harmonic-measure marginals for stabilized prefixes up to
    /// length 3: `(prefix, frequency, standard error)`.
    pub prefix_marginals: Vec<(BufferWord, f64, f64)>,
    pub steps: u64,
    pub final_len: usize,
    pub replications: usize,
}

/// Simulates the right random walk of the pair.
///
/// One long trajectory estimates the drift with batch-means errors. Because
/// a single trajectory stabilizes on a single infinite word, prefix marginals
/// are estimated from short independent replications (streams `1..`), each
/// contributing the prefix its walk has stabilized on.
pub fn simulate_walk(
    pair: &PairSpec,
    nu: &ClassDistribution,
    steps: u64,
    seed: u64,
) -> WalkReport {
    let mut cumulative = vec![0.0; pair.len()];
    let mut acc = 0.0;
    for (i, c) in cumulative.iter_mut().enumerate() {
        acc += nu.prob(GeneratorId(i as u32));
        *c = acc;
    }

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(0);
    let batches = 100u64.min(steps.max(1));
    let batch_len = (steps / batches).max(1);
    let mut word: Vec<GeneratorId> = Vec::new();
    let mut batch_means = Vec::with_capacity(batches as usize);
    let mut start_len = 0usize;
    let mut done = 0u64;
    for b in 0..batches {
        let this = if b + 1 == batches { steps - done } else { batch_len };
        for _ in 0..this {
            let class = GeneratorId(sample_class(&mut rng, &cumulative) as u32);
            step_right(pair, &mut word, class);
        }
        done += this;
        if this > 0 {
            batch_means.push((word.len() as f64 - start_len as f64) / this as f64);
        }
        start_len = word.len();
    }
    let gamma_estimate = word.len() as f64 / steps.max(1) as f64;
    let gamma_se = if batch_means.len() >= 2 {
        let k = batch_means.len() as f64;
        let m = batch_means.iter().sum::<f64>() / k;
        let v = batch_means.iter().map(|g| (g - m) * (g - m)).sum::<f64>() / (k - 1.0);
        (v / k).sqrt()
    } else {
        0.0
    };

    // Prefix marginals from independent short walks.
    let reps = ((steps / 1000).clamp(200, 5000)) as usize;
    let rep_len = 500u64;
    let mut counts: HashMap<BufferWord, usize> = HashMap::new();
    for rep in 0..reps {
        let mut r = ChaCha12Rng::seed_from_u64(seed);
        r.set_stream(1 + rep as u64);
        let mut w: Vec<GeneratorId> = Vec::new();
        for _ in 0..rep_len {
            let class = GeneratorId(sample_class(&mut r, &cumulative) as u32);
            step_right(pair, &mut w, class);
        }
        for len in 1..=3usize.min(w.len()) {
            *counts.entry(BufferWord(w[..len].to_vec())).or_insert(0) += 1;
        }
    }
    let mut prefix_marginals: Vec<(BufferWord, f64, f64)> = counts
        .into_iter()
        .map(|(w, c)| {
            let f = c as f64 / reps as f64;
            (w, f, (f * (1.0 - f) / reps as f64).sqrt())
        })
        .collect();
    prefix_marginals.sort_by(|x, y| (x.0.len(), &x.0).cmp(&(y.0.len(), &y.0)));

    WalkReport {
        gamma_estimate,
        gamma_se,
        prefix_marginals,
        steps,
        final_len: word.len(),
        replications: reps,
    }
}

#[inline]
fn step_right(pair: &PairSpec, word: &mut Vec<GeneratorId>, class: GeneratorId) {
    match word.last() {
        None => word.push(class),
        Some(&last) => match pair.product(last, class) {
            crate::algebra::Reduction::Irreducible => word.push(class),
            crate::algebra::Reduction::Letter(c) => *word.last_mut().unwrap() = c,
            crate::algebra::Reduction::Identity => {
                word.pop();
            }
        },
    }
}

/// Total variation between the empirical word occupancy and a stationary
/// law, over words up to `max_len` plus the lumped tail.
pub fn empirical_vs_product_form(
    pair: &PairSpec,
    report: &SimReport,
    law: &StationaryLaw,
    max_len: usize,
) -> Result<f64> {
    if max_len > report.max_tracked_len {
        return Err(Error::CapExceeded {
            requested: max_len,
            cap: report.max_tracked_len,
        });
    }
    let empirical: HashMap<&BufferWord, f64> = report
        .word_occupancy
        .iter()
        .map(|(w, f)| (w, *f))
        .collect();
    let mut tv = 0.0;
    let mut emp_head = 0.0;
    let mut ana_head = 0.0;
    for w in oracle::enumerate_words(pair, max_len, max_len)? {
        let e = empirical.get(&w).copied().unwrap_or(0.0);
        let a = law.stationary_probability(pair, &w)?;
        tv += (e - a).abs();
        emp_head += e;
        ana_head += a;
    }
    // Lumped tail discrepancy.
    tv += ((1.0 - emp_head) - (1.0 - ana_head)).abs();
    Ok(0.5 * tv)
}

/// Departure-stream statistics.
#[derive(Debug, Clone, Copy)]
pub struct DepartureStats {
    pub rate: f64,
    /// Coefficient of variation of inter-departure times (1 for Poisson).
    pub cv: f64,
    /// Index of dispersion of counts over 100 equal windows (1 for Poisson).
    pub dispersion: f64,
    pub count: usize,
}

/// Statistics of the pooled departure stream.
pub fn departure_stats(report: &SimReport) -> Result<DepartureStats> {
    departure_stats_filtered(report, None)
}

/// Statistics of the departure stream of one class only. Per-class streams
/// are generally not Poisson even when the pooled stream is.
pub fn departure_stats_for_class(report: &SimReport, class: GeneratorId) -> Result<DepartureStats> {
    departure_stats_filtered(report, Some(class))
}

fn departure_stats_filtered(
    report: &SimReport,
    class: Option<GeneratorId>,
) -> Result<DepartureStats> {
    let times: Vec<f64> = report
        .departure_times
        .iter()
        .zip(&report.departure_classes)
        .filter(|&(_, c)| class.is_none_or(|want| *c == want))
        .map(|(t, _)| *t)
        .collect();
    if times.len() < 1000 {
        return Err(Error::TooFewDepartures {
            got: times.len(),
            need: 1000,
        });
    }
    let gaps: Vec<f64> = times.windows(2).map(|w| w[1] - w[0]).collect();
    let m = gaps.iter().sum::<f64>() / gaps.len() as f64;
    let v = gaps.iter().map(|g| (g - m) * (g - m)).sum::<f64>() / (gaps.len() - 1) as f64;
    let windows = 100usize;
    let width = report.elapsed / windows as f64;
    let mut counts = vec![0usize; windows];
    for &t in &times {
        let ix = ((t / width) as usize).min(windows - 1);
        counts[ix] += 1;
    }
    let cm = counts.iter().sum::<usize>() as f64 / windows as f64;
    let cvar = counts
        .iter()
        .map(|&c| (c as f64 - cm) * (c as f64 - cm))
        .sum::<f64>()
        / (windows - 1) as f64;
    Ok(DepartureStats {
        rate: times.len() as f64 / report.elapsed,
        cv: v.sqrt() / m,
        dispersion: cvar / cm,
        count: times.len(),
    })
}
