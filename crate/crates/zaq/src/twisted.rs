//! Twisted traffic equations, stability, and the product-form stationary law.
//!
//! The twisted traffic equations couple the boundary vector `r` of the queue
//! with its load `rho`. An admissible solution — one satisfying
//! `rho = lambda A(r) / (mu + lambda C(r))` — yields the stationary
//! distribution `(1-rho) rho^n q(s_1)...q(s_{k-1}) r(s_k)` over buffer words
//! and a Poisson departure stream of rate `rho mu`. Stable plain triples have
//! exactly one admissible solution; general pairs may have several, some
//! supported on a strict subset of the alphabet.

use crate::algebra::{BufferWord, GeneratorId, PairSpec};
use crate::traffic::{
    self, closed_supports, functionals, iterate_simplex_map, mass, starts_for_support,
    ClassDistribution, SolveOptions, MASS_FLOOR,
};
use crate::{Error, Result};

/// An admissible solution of the twisted traffic equations.
#[derive(Debug, Clone)]
pub struct TteSolution {
    /// The load: geometric decay rate of the level masses.
    pub rho: f64,
    /// Boundary vector, summing to one.
    pub r: Vec<f64>,
    /// `q(a) = r(a)/r(Right(a))`; `None` where the successor mass vanishes.
    pub q: Vec<Option<f64>>,
    /// Max-norm defect of the equations at `(rho, r)`.
    pub residual: f64,
    /// Letters with positive boundary mass.
    pub support: Vec<GeneratorId>,
}

impl TteSolution {
    pub fn r_of(&self, a: GeneratorId) -> f64 {
        self.r[a.index()]
    }

    /// Builds the solution record from a boundary vector, recomputing the
    /// load from the admissibility identity.
    pub fn from_boundary(
        pair: &PairSpec,
        nu: &ClassDistribution,
        lambda: f64,
        mu: f64,
        r: Vec<f64>,
    ) -> TteSolution {
        let f = functionals(pair, nu, &r);
        let rho = lambda * f.a / (mu + lambda * f.c);
        let residual = tte_residual(pair, nu, lambda, mu, rho, &r);
        let q = pair
            .generators()
            .map(|a| {
                let den = mass(&r, pair.right(a));
                (den >= MASS_FLOOR).then(|| r[a.index()] / den)
            })
            .collect();
        let support = pair
            .generators()
            .filter(|&a| r[a.index()] > 0.0)
            .collect();
        TteSolution {
            rho,
            r,
            q,
            residual,
            support,
        }
    }
}

/// Stability regime of the queue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityClass {
    Ergodic,
    NullRecurrent,
    Transient,
}

/// Stability classification with its margin `lambda * gamma - mu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityVerdict {
    pub class: StabilityClass,
    pub margin: f64,
}

/// Classifies stability from the drift: ergodic iff `lambda gamma < mu`,
/// with a relative dead band `eps` around equality (default `1e-9`).
pub fn classify(lambda: f64, mu: f64, gamma_hat: f64, eps: f64) -> StabilityVerdict {
    let lg = lambda * gamma_hat;
    let class = if lg < mu * (1.0 - eps) {
        StabilityClass::Ergodic
    } else if lg > mu * (1.0 + eps) {
        StabilityClass::Transient
    } else {
        StabilityClass::NullRecurrent
    };
    StabilityVerdict {
        class,
        margin: lg - mu,
    }
}

fn check_rates(lambda: f64, mu: f64) -> Result<()> {
    if lambda <= 0.0 || !lambda.is_finite() {
        return Err(Error::NonPositiveRate(format!("lambda = {lambda}")));
    }
    if mu <= 0.0 || !mu.is_finite() {
        return Err(Error::NonPositiveRate(format!("mu = {mu}")));
    }
    Ok(())
}

/// One application of the fixed-point map behind the twisted equations, with
/// the load eliminated through the admissibility identity. Preserves the
/// simplex; the output is renormalized to guard rounding.
pub fn psi_map(
    pair: &PairSpec,
    nu: &ClassDistribution,
    lambda: f64,
    mu: f64,
    x: &[f64],
) -> Result<Vec<f64>> {
    check_rates(lambda, mu)?;
    let mut out = vec![0.0; pair.len()];
    if !psi_rhs(pair, nu, lambda, mu, x, &mut out) {
        return Err(Error::BadDistribution(
            "zero right-set mass: A(x) vanishes".to_string(),
        ));
    }
    let total: f64 = out.iter().sum();
    if !total.is_finite() || total <= MASS_FLOOR {
        return Err(Error::BadDistribution("map collapsed to zero".to_string()));
    }
    for v in &mut out {
        *v /= total;
    }
    Ok(out)
}

/// Unnormalized Psi; returns false when `A(x)` vanishes.
fn psi_rhs(
    pair: &PairSpec,
    nu: &ClassDistribution,
    lambda: f64,
    mu: f64,
    x: &[f64],
    out: &mut [f64],
) -> bool {
    let f = functionals(pair, nu, x);
    if f.a < MASS_FLOOR {
        return false;
    }
    let eta = lambda * f.a / (mu + lambda * f.c);
    let n = pair.len();
    // Per-letter cancellation pressure: sum over b*d=1, d in Left(a) of
    // nu(b) x(d)/x(Right(d)). Accumulated through Right(d) = {a : d in Left(a)}.
    let mut cancel = vec![0.0; n];
    for &(b, d) in pair.identity_pairs() {
        let den = mass(x, pair.right(d));
        if den < MASS_FLOOR {
            continue;
        }
        let w = nu.prob(b) * x[d.index()] / den;
        if w == 0.0 {
            continue;
        }
        for &a in pair.right(d) {
            cancel[a.index()] += w;
        }
    }
    for i in 0..n {
        let a = GeneratorId(i as u32);
        out[i] = eta * (mu * x[i] + lambda * cancel[i] * x[i])
            + (mu + lambda * f.c) / f.a * nu.prob(a) * mass(x, pair.right(a));
    }
    for &(b, d, c) in pair.letter_products() {
        out[c.index()] += lambda * nu.prob(b) * x[d.index()];
    }
    for v in out.iter_mut() {
        *v /= lambda + mu;
    }
    true
}

/// Max-norm defect of the twisted traffic equations at `(rho, r)`.
pub fn tte_residual(
    pair: &PairSpec,
    nu: &ClassDistribution,
    lambda: f64,
    mu: f64,
    rho: f64,
    r: &[f64],
) -> f64 {
    let n = pair.len();
    let mut cancel = vec![0.0; n];
    for &(b, d) in pair.identity_pairs() {
        let den = mass(r, pair.right(d));
        if den < MASS_FLOOR {
            continue;
        }
        let w = nu.prob(b) * r[d.index()] / den;
        for &a in pair.right(d) {
            cancel[a.index()] += w;
        }
    }
    let mut merge = vec![0.0; n];
    for &(b, d, c) in pair.letter_products() {
        merge[c.index()] += nu.prob(b) * r[d.index()];
    }
    let mut worst = 0.0f64;
    for i in 0..n {
        let a = GeneratorId(i as u32);
        let lhs = rho * (lambda + mu) * r[i];
        let rhs = rho * rho * mu * r[i]
            + lambda * nu.prob(a) * mass(r, pair.right(a))
            + rho * lambda * merge[i]
            + rho * rho * lambda * cancel[i] * r[i];
        worst = worst.max((lhs - rhs).abs());
    }
    worst
}

/// Solves the twisted traffic equations.
///
/// Every returned solution satisfies the equations within
/// `opts.residual_tol` *and* the admissibility identity by construction (the
/// load is always recomputed from `A` and `C`, never carried as an iterate).
/// For general pairs the solver also runs on every support closed under
/// right-successors, which is how boundary solutions such as the two G-queue
/// regimes are found. A stable plain triple must end up with exactly one
/// solution; anything else reports a solver defect.
pub fn solve_tte(
    pair: &PairSpec,
    nu: &ClassDistribution,
    lambda: f64,
    mu: f64,
    opts: &SolveOptions,
) -> Result<Vec<TteSolution>> {
    check_rates(lambda, mu)?;
    let n = pair.len();
    let mut found: Vec<TteSolution> = Vec::new();
    for support in closed_supports(pair, opts) {
        for start in starts_for_support(n, &support, opts) {
            let converged = iterate_simplex_map(&support, &start, opts, |x, out| {
                psi_rhs(pair, nu, lambda, mu, x, out)
            });
            let Some(x) = converged else { continue };
            let sol = TteSolution::from_boundary(pair, nu, lambda, mu, x);
            if !sol.rho.is_finite() || sol.rho <= 0.0 || sol.residual > opts.residual_tol {
                continue;
            }
            // Product forms need the support closed under right-successors.
            let closure_ok = sol
                .support
                .iter()
                .all(|&a| mass(&sol.r, pair.right(a)) > 0.0);
            if !closure_ok {
                continue;
            }
            merge_tte(&mut found, sol, opts.dedup_radius);
        }
    }
    if found.is_empty() {
        return Err(Error::NoConvergence {
            max_iter: opts.max_iter,
            best_residual: f64::NAN,
        });
    }
    found.sort_by(|s, t| t.rho.partial_cmp(&s.rho).unwrap_or(std::cmp::Ordering::Equal));
    if pair.is_plain() {
        let te = traffic::solve_te(pair, nu, opts)?;
        let gamma = traffic::drift(pair, nu, &te[0])?;
        let verdict = classify(lambda, mu, gamma, 1e-9);
        if verdict.class == StabilityClass::Ergodic && found.len() > 1 {
            return Err(Error::PlainMultiplicity(found.len()));
        }
    }
    Ok(found)
}

fn merge_tte(found: &mut Vec<TteSolution>, sol: TteSolution, radius: f64) {
    for existing in found.iter_mut() {
        let dist = existing
            .r
            .iter()
            .zip(&sol.r)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if dist < radius {
            if sol.residual < existing.residual {
                *existing = sol;
            }
            return;
        }
    }
    found.push(sol);
}

/// The stationary law `(1-rho) rho^n q(...) r(...)` of an ergodic solution.
#[derive(Debug, Clone)]
pub struct StationaryLaw {
    pub solution: TteSolution,
    /// `1 - rho`, the mass of the empty buffer.
    pub normalizer: f64,
}

impl StationaryLaw {
    pub fn new(solution: TteSolution) -> Result<StationaryLaw> {
        if solution.rho >= 1.0 || solution.rho.is_nan() {
            return Err(Error::NotErgodic { rho: solution.rho });
        }
        let normalizer = 1.0 - solution.rho;
        Ok(StationaryLaw {
            solution,
            normalizer,
        })
    }

    pub fn rho(&self) -> f64 {
        self.solution.rho
    }

    /// Stationary probability of a buffer word.
    ///
    /// The word is read in multiplication order: the first letter is the
    /// back-end. Letters outside the solution's support contribute zero mass.
    pub fn stationary_probability(&self, pair: &PairSpec, w: &BufferWord) -> Result<f64> {
        if !pair.is_normal(&w.0)? {
            return Err(Error::NotNormal(pair.format_word(w)));
        }
        let rho = self.solution.rho;
        let mut p = self.normalizer * rho.powi(w.len() as i32);
        for (i, &letter) in w.0.iter().enumerate() {
            if i + 1 == w.len() {
                p *= self.solution.r[letter.index()];
            } else {
                match self.solution.q[letter.index()] {
                    Some(q) => p *= q,
                    None => return Ok(0.0),
                }
            }
        }
        Ok(p)
    }

    /// Total stationary mass of words of length `n`: `(1-rho) rho^n`.
    pub fn level_mass(&self, n: usize) -> f64 {
        self.normalizer * self.solution.rho.powi(n as i32)
    }

    /// Rate of the stationary departure process (`rho * mu`); the stream is
    /// Poisson and independent of the current buffer content.
    pub fn departure_rate(&self, mu: f64) -> f64 {
        self.solution.rho * mu
    }
}

/// Unnormalized product-form weight `rho^n q(...) r(...)`, defined for any
/// candidate `(rho, r)`, ergodic or not. The empty word has weight one.
pub fn product_form_weight(
    pair: &PairSpec,
    rho: f64,
    r: &[f64],
    w: &BufferWord,
) -> f64 {
    let mut p = rho.powi(w.len() as i32);
    for (i, &letter) in w.0.iter().enumerate() {
        if i + 1 == w.len() {
            p *= r[letter.index()];
        } else {
            let den = mass(r, pair.right(letter));
            if den < MASS_FLOOR {
                return 0.0;
            }
            p *= r[letter.index()] / den;
        }
    }
    p
}

/// Global-balance defect of a candidate `(rho, r)` over all states of length
/// `< n_max`, using exact product-form weights against the untruncated
/// generator rows and columns touching those states.
///
/// Admissible solutions annihilate the generator, so the defect is zero up to
/// rounding; perturbed candidates light up immediately.
pub fn balance_residual(
    pair: &PairSpec,
    nu: &ClassDistribution,
    lambda: f64,
    mu: f64,
    rho: f64,
    r: &[f64],
    n_max: usize,
) -> Result<f64> {
    check_rates(lambda, mu)?;
    // States of length <= n_max are enough to cover every neighbor of the
    // balance states (length <= n_max - 1).
    let words = crate::oracle::enumerate_words(pair, n_max, n_max)?;
    let index: std::collections::HashMap<&BufferWord, usize> =
        words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let weight: Vec<f64> = words
        .iter()
        .map(|w| product_form_weight(pair, rho, r, w))
        .collect();
    let mut inflow = vec![0.0; words.len()];
    let mut outflow = vec![0.0; words.len()];
    for (i, w) in words.iter().enumerate() {
        for (target, rate) in transition_row(pair, nu, lambda, mu, r, w) {
            let Some(&j) = index.get(&target) else {
                continue;
            };
            outflow[i] += weight[i] * rate;
            inflow[j] += weight[i] * rate;
        }
    }
    let mut worst = 0.0f64;
    for (i, w) in words.iter().enumerate() {
        if w.len() + 1 > n_max {
            continue;
        }
        worst = worst.max((outflow[i] - inflow[i]).abs());
    }
    Ok(worst)
}

/// Off-diagonal transition rates out of a state, per the queue generator:
/// arrivals stack/merge/cancel against the back-end letter (merges onto the
/// same letter are self-jumps and omitted), services remove the front-end
/// letter, and the empty state admits class `b` at rate
/// `lambda nu(b) r(Right(b))`.
pub(crate) fn transition_row(
    pair: &PairSpec,
    nu: &ClassDistribution,
    lambda: f64,
    mu: f64,
    r_boundary: &[f64],
    w: &BufferWord,
) -> Vec<(BufferWord, f64)> {
    use crate::algebra::Reduction;
    let mut out: Vec<(BufferWord, f64)> = Vec::new();
    let mut push = |target: BufferWord, rate: f64| {
        if rate == 0.0 {
            return;
        }
        for (t, v) in out.iter_mut() {
            if *t == target {
                *v += rate;
                return;
            }
        }
        out.push((target, rate));
    };
    match w.back_end() {
        None => {
            for b in pair.generators() {
                let rate = lambda * nu.prob(b) * mass(r_boundary, pair.right(b));
                push(BufferWord(vec![b]), rate);
            }
        }
        Some(s1) => {
            for b in pair.generators() {
                let rate = lambda * nu.prob(b);
                match pair.product(b, s1) {
                    Reduction::Irreducible => {
                        let mut v = Vec::with_capacity(w.len() + 1);
                        v.push(b);
                        v.extend_from_slice(&w.0);
                        push(BufferWord(v), rate);
                    }
                    Reduction::Letter(c) => {
                        if c != s1 {
                            let mut v = w.0.clone();
                            v[0] = c;
                            push(BufferWord(v), rate);
                        }
                    }
                    Reduction::Identity => {
                        push(BufferWord(w.0[1..].to_vec()), rate);
                    }
                }
            }
            push(BufferWord(w.0[..w.len() - 1].to_vec()), mu);
        }
    }
    out
}
