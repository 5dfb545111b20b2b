//! Brute-force ground truth from a truncated generator.
//!
//! Words up to a length cap are enumerated, the exact jump rates of the queue
//! are assembled into a dense generator (arrivals that would overflow the cap
//! are thinned away), and the stationary vector is solved directly. Comparing
//! it against an analytic product form over the lower levels — where the
//! truncation bias is negligible — validates every solver in the crate
//! without sharing any code path with them.

use crate::algebra::{BufferWord, PairSpec};
use crate::linalg::{left_null_normalized, Mat};
use crate::traffic::ClassDistribution;
use crate::twisted::{transition_row, StationaryLaw};
use crate::{Error, Result};
use std::collections::HashMap;

/// Default cap on the enumeration length.
pub const DEFAULT_LENGTH_CAP: usize = 10;

/// Guard on the dense state count.
const MAX_STATES: usize = 200_000;

/// All normal words of length at most `n`, by length then lexicographic in
/// letter indices. Words are grown by appending right-successors, which is
/// exactly the normal-form condition.
pub fn enumerate_words(pair: &PairSpec, n: usize, cap: usize) -> Result<Vec<BufferWord>> {
    if n > cap {
        return Err(Error::CapExceeded {
            requested: n,
            cap,
        });
    }
    let mut words = vec![BufferWord::empty()];
    let mut level: Vec<BufferWord> = vec![BufferWord::empty()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &level {
            match w.front_end() {
                None => {
                    for c in pair.generators() {
                        next.push(BufferWord(vec![c]));
                    }
                }
                Some(last) => {
                    for &c in pair.right(last) {
                        let mut v = w.0.clone();
                        v.push(c);
                        next.push(BufferWord(v));
                    }
                }
            }
            if words.len() + next.len() > MAX_STATES {
                return Err(Error::CapExceeded {
                    requested: n,
                    cap,
                });
            }
        }
        words.extend(next.iter().cloned());
        level = next;
    }
    Ok(words)
}

/// The queue generator restricted to words of length at most `truncation`.
#[derive(Debug, Clone)]
pub struct TruncatedChain {
    pub states: Vec<BufferWord>,
    pub index: HashMap<BufferWord, usize>,
    pub generator: Mat,
    pub truncation: usize,
}

/// Assembles the exact truncated generator.
///
/// Rows carry the queue's rates between enumerated states; arrivals that
/// would reach length `n + 1` are suppressed outright (their rate leaves the
/// diagonal too, as if thinned), so rows still sum to zero and the bias is
/// confined to the top levels.
pub fn truncated_generator(
    pair: &PairSpec,
    nu: &ClassDistribution,
    lambda: f64,
    mu: f64,
    r_boundary: &[f64],
    n: usize,
) -> Result<TruncatedChain> {
    let states = enumerate_words(pair, n, n.max(DEFAULT_LENGTH_CAP))?;
    let index: HashMap<BufferWord, usize> = states
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();
    let m = states.len();
    let mut q = Mat::zeros(m, m);
    for (i, w) in states.iter().enumerate() {
        for (target, rate) in transition_row(pair, nu, lambda, mu, r_boundary, w) {
            if let Some(&j) = index.get(&target) {
                q[(i, j)] += rate;
                q[(i, i)] -= rate;
            }
            // Overflow targets are dropped together with their rate.
        }
    }
    Ok(TruncatedChain {
        states,
        index,
        generator: q,
        truncation: n,
    })
}

/// Stationary distribution of a truncated chain.
#[derive(Debug, Clone)]
pub struct OracleStationary {
    /// Probabilities aligned with `chain.states`; unreachable states hold 0.
    pub probs: Vec<f64>,
    /// `max |pi Q|` reported back.
    pub residual: f64,
    /// Condition estimate from the dense solve.
    pub condition: f64,
}

/// Solves `pi Q = 0` on the class reachable from the empty word.
///
/// Boundary vectors with zero entries make part of the state space
/// unreachable; those states get probability zero rather than failing the
/// solve.
pub fn solve_stationary(chain: &TruncatedChain) -> Result<OracleStationary> {
    let m = chain.states.len();
    let q = &chain.generator;
    // Reachability from the empty word over positive rates.
    let mut reachable = vec![false; m];
    let start = chain.index[&BufferWord::empty()];
    let mut stack = vec![start];
    reachable[start] = true;
    while let Some(i) = stack.pop() {
        for j in 0..m {
            if j != i && q[(i, j)] > 0.0 && !reachable[j] {
                reachable[j] = true;
                stack.push(j);
            }
        }
    }
    let members: Vec<usize> = (0..m).filter(|&i| reachable[i]).collect();
    let mut sub = Mat::zeros(members.len(), members.len());
    for (si, &i) in members.iter().enumerate() {
        for (sj, &j) in members.iter().enumerate() {
            sub[(si, sj)] = q[(i, j)];
        }
    }
    let (pi_sub, condition) = left_null_normalized(&sub, None)?;
    let mut probs = vec![0.0; m];
    for (si, &i) in members.iter().enumerate() {
        probs[i] = pi_sub[si];
    }
    let residual = q
        .row_vec_mul(&probs)
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    Ok(OracleStationary {
        probs,
        residual,
        condition,
    })
}

/// Outcome of an oracle-versus-analytic comparison.
#[derive(Debug, Clone, Copy)]
pub struct CompareReport {
    /// Total variation over words of length at most `max_len`.
    pub tv: f64,
    /// Analytic mass beyond the compared levels, `rho^(N-1)`: the truncation
    /// bias the comparison deliberately leaves out.
    pub tail_bound: f64,
    /// `N - 2`: two levels below the truncation to dampen edge effects.
    pub max_len: usize,
}

/// Total variation between the oracle stationary vector and an analytic law,
/// restricted to words two levels below the truncation.
pub fn compare(
    chain: &TruncatedChain,
    oracle_pi: &OracleStationary,
    pair: &PairSpec,
    law: &StationaryLaw,
) -> Result<CompareReport> {
    let max_len = chain.truncation.saturating_sub(2);
    let mut tv = 0.0;
    for (i, w) in chain.states.iter().enumerate() {
        if w.len() > max_len {
            continue;
        }
        let analytic = law.stationary_probability(pair, w)?;
        tv += (oracle_pi.probs[i] - analytic).abs();
    }
    Ok(CompareReport {
        tv: 0.5 * tv,
        tail_bound: law.rho().powi(chain.truncation as i32 - 1),
        max_len,
    })
}

/// Per-word comparison rows for CSV dumps: `(word, oracle, analytic, diff)`.
pub fn comparison_rows(
    chain: &TruncatedChain,
    oracle_pi: &OracleStationary,
    pair: &PairSpec,
    law: &StationaryLaw,
) -> Result<Vec<(BufferWord, f64, f64, f64)>> {
    let mut rows = Vec::with_capacity(chain.states.len());
    for (i, w) in chain.states.iter().enumerate() {
        let analytic = law.stationary_probability(pair, w)?;
        rows.push((
            w.clone(),
            oracle_pi.probs[i],
            analytic,
            (oracle_pi.probs[i] - analytic).abs(),
        ));
    }
    Ok(rows)
}
