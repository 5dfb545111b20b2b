//! Traffic equations of the buffering random walk.
//!
//! The traffic equations are a nonlinear fixed-point system over the simplex
//! whose admissible solution `r_hat` encodes where the transient walk escapes
//! to infinity: the harmonic measure has multiplicative marginals built from
//! `r_hat`, and the drift (the linear growth rate of the buffer under a
//! blocked server) is a simple functional of it. Plain pairs have exactly one
//! admissible solution; general pairs may have several, including solutions
//! supported on a strict subset of the alphabet, so the solver sweeps
//! restricted supports as well as multiple interior starts.

use crate::algebra::{BufferWord, GeneratorId, PairSpec};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Denominators below this are treated as exactly zero mass, matching the
/// denominator-cleared reading of the equations on boundary supports.
pub(crate) const MASS_FLOOR: f64 = 1e-300;

/// A probability distribution over the class alphabet.
///
/// Entries are validated nonnegative and renormalized exactly when the raw
/// sum is within `1e-9` of one.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassDistribution {
    probs: Vec<f64>,
}

impl ClassDistribution {
    pub fn new(pair: &PairSpec, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != pair.len() {
            return Err(Error::BadDistribution(format!(
                "expected {} entries, got {}",
                pair.len(),
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::BadDistribution(format!("entry {p} out of range")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::BadDistribution(format!(
                "entries sum to {sum}, not 1"
            )));
        }
        let probs = probs.iter().map(|p| p / sum).collect();
        Ok(ClassDistribution { probs })
    }

    pub fn uniform(pair: &PairSpec) -> Self {
        let n = pair.len();
        ClassDistribution {
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn from_labels(pair: &PairSpec, entries: &[(&str, f64)]) -> Result<Self> {
        let mut probs = vec![0.0; pair.len()];
        for (label, p) in entries {
            let id = pair
                .by_label(label)
                .ok_or_else(|| Error::UnknownLetter((*label).to_string()))?;
            probs[id.index()] = *p;
        }
        ClassDistribution::new(pair, probs)
    }

    #[inline]
    pub fn prob(&self, a: GeneratorId) -> f64 {
        self.probs[a.index()]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    /// Whether every letter of the alphabet is a product of support letters.
    ///
    /// Computed as the closure of the support under merge products; letters
    /// outside the closure cannot appear in the walk, so the triple does not
    /// genuinely use the whole monoid and uniqueness claims may fail.
    pub fn support_generates(&self, pair: &PairSpec) -> bool {
        let mut in_set: Vec<bool> = self.probs.iter().map(|&p| p > 0.0).collect();
        loop {
            let mut grew = false;
            for &(b, d, c) in pair.letter_products() {
                if in_set[b.index()] && in_set[d.index()] && !in_set[c.index()] {
                    in_set[c.index()] = true;
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        in_set.iter().all(|&v| v)
    }
}

/// The three ways an arriving letter can interact with an independent letter
/// drawn from `x`: no interaction (`a`), merge (`b`), cancellation (`c`).
/// They always sum to one on the simplex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Functionals {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Functionals {
    pub fn sum(&self) -> f64 {
        self.a + self.b + self.c
    }
}

/// Mass of `x` on a letter set.
#[inline]
pub(crate) fn mass(x: &[f64], set: &[GeneratorId]) -> f64 {
    set.iter().map(|&g| x[g.index()]).sum()
}

/// Splits the arrival mass at `x`: `a` collects classes whose product with an
/// `x`-letter stays irreducible, `b` the merges, `c` the cancellations.
pub fn functionals(pair: &PairSpec, nu: &ClassDistribution, x: &[f64]) -> Functionals {
    let mut a = 0.0;
    for g in pair.generators() {
        a += nu.prob(g) * mass(x, pair.right(g));
    }
    let mut b = 0.0;
    for &(bb, d, _) in pair.letter_products() {
        b += nu.prob(bb) * x[d.index()];
    }
    let mut c = 0.0;
    for &(bb, d) in pair.identity_pairs() {
        c += nu.prob(bb) * x[d.index()];
    }
    Functionals { a, b, c }
}

/// A solution of the traffic equations.
#[derive(Debug, Clone)]
pub struct TeSolution {
    /// `r_hat`, summing to one; strictly positive for plain triples.
    pub r_hat: Vec<f64>,
    /// Max-norm defect of the equations at `r_hat`.
    pub residual: f64,
}

impl TeSolution {
    pub fn r(&self, a: GeneratorId) -> f64 {
        self.r_hat[a.index()]
    }
}

/// Tuning knobs for the fixed-point solvers.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Successive-iterate max-norm tolerance.
    pub tol: f64,
    pub max_iter: usize,
    /// Damping weight on the new iterate.
    pub theta: f64,
    /// Acceptance threshold on the equation residual.
    pub residual_tol: f64,
    /// Solutions closer than this in max norm are merged.
    pub dedup_radius: f64,
    /// Extra random interior starts per support (seeded, reproducible).
    pub random_starts: usize,
    pub seed: u64,
    /// Supports are enumerated exhaustively up to this alphabet size;
    /// beyond it only corner-biased starts probe the boundary.
    pub support_limit: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-12,
            max_iter: 100_000,
            theta: 0.5,
            residual_tol: 1e-9,
            dedup_radius: 1e-8,
            random_starts: 0,
            seed: 0x5eed_cafe,
            support_limit: 12,
        }
    }
}

/// Damped fixed-point iteration on the simplex, pinned to a support.
///
/// `map` writes the unnormalized right-hand side; entries off the support are
/// zeroed and the rest renormalized before damping. Returns the converged
/// point or `None`.
pub(crate) fn iterate_simplex_map(
    support: &[bool],
    start: &[f64],
    opts: &SolveOptions,
    mut map: impl FnMut(&[f64], &mut [f64]) -> bool,
) -> Option<Vec<f64>> {
    let n = start.len();
    let mut x = start.to_vec();
    let mut y = vec![0.0; n];
    for _ in 0..opts.max_iter {
        if !map(&x, &mut y) {
            return None;
        }
        for i in 0..n {
            if !support[i] {
                y[i] = 0.0;
            }
        }
        let total: f64 = y.iter().sum();
        if !total.is_finite() || total <= MASS_FLOOR {
            return None;
        }
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let xi = (1.0 - opts.theta) * x[i] + opts.theta * y[i] / total;
            delta = delta.max((xi - x[i]).abs());
            x[i] = xi;
        }
        if delta < opts.tol {
            return Some(x);
        }
    }
    None
}

/// Starting points for one support: uniform, per-letter corner-biased, and
/// optional random interior points.
pub(crate) fn starts_for_support(
    n: usize,
    support: &[bool],
    opts: &SolveOptions,
) -> Vec<Vec<f64>> {
    let members: Vec<usize> = (0..n).filter(|&i| support[i]).collect();
    let k = members.len();
    let mut starts = Vec::new();
    let mut uniform = vec![0.0; n];
    for &i in &members {
        uniform[i] = 1.0 / k as f64;
    }
    starts.push(uniform);
    if k > 1 {
        for &hot in &members {
            let mut s = vec![0.0; n];
            for &i in &members {
                s[i] = 0.1 / (k - 1) as f64;
            }
            s[hot] = 0.9;
            starts.push(s);
        }
        let mut rng = ChaCha12Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.random_starts {
            let mut s = vec![0.0; n];
            let mut total = 0.0;
            for &i in &members {
                let e: f64 = -(1.0 - rng.random::<f64>()).ln();
                s[i] = e;
                total += e;
            }
            for &i in &members {
                s[i] /= total;
            }
            starts.push(s);
        }
    }
    starts
}

/// All supports closed under "every member keeps some right-successor in the
/// support", the condition for a boundary solution to define a product form.
/// The full support comes first. Falls back to the full support alone when
/// the alphabet exceeds `opts.support_limit`.
pub(crate) fn closed_supports(pair: &PairSpec, opts: &SolveOptions) -> Vec<Vec<bool>> {
    let n = pair.len();
    let full = vec![true; n];
    if pair.is_plain() || n > opts.support_limit {
        return vec![full];
    }
    let mut out = vec![full];
    for bits in 1..(1u64 << n) - 1 {
        let support: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
        let closed = (0..n).all(|i| {
            !support[i]
                || pair
                    .right(GeneratorId(i as u32))
                    .iter()
                    .any(|g| support[g.index()])
        });
        if closed {
            out.push(support);
        }
    }
    out
}

/// Unnormalized right-hand side of the traffic equations at `x`.
pub(crate) fn te_rhs(pair: &PairSpec, nu: &ClassDistribution, x: &[f64], out: &mut [f64]) {
    for (i, o) in out.iter_mut().enumerate() {
        let a = GeneratorId(i as u32);
        *o = nu.prob(a) * mass(x, pair.right(a));
    }
    for &(b, d, c) in pair.letter_products() {
        out[c.index()] += nu.prob(b) * x[d.index()];
    }
    // Cancellation term: sum over b*d = 1 of nu(b) x(d)/x(Right(d)) x(a),
    // restricted to a with d in Left(a) — equivalently a in Right(d).
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
            out[a.index()] += w * x[a.index()];
        }
    }
}

/// Max-norm defect of the traffic equations at `x`.
pub fn te_residual(pair: &PairSpec, nu: &ClassDistribution, x: &[f64]) -> f64 {
    let mut rhs = vec![0.0; pair.len()];
    te_rhs(pair, nu, x, &mut rhs);
    x.iter()
        .zip(&rhs)
        .fold(0.0f64, |m, (xi, ri)| m.max((xi - ri).abs()))
}

/// Solves the traffic equations.
///
/// Plain pairs have a unique admissible solution, so every start must land on
/// the same point; distinct converged points raise
/// [`Error::PlainMultiplicity`]. For general pairs all deduplicated solutions
/// are returned, including boundary-support ones; the list makes no
/// completeness claim.
pub fn solve_te(
    pair: &PairSpec,
    nu: &ClassDistribution,
    opts: &SolveOptions,
) -> Result<Vec<TeSolution>> {
    let n = pair.len();
    let mut found: Vec<TeSolution> = Vec::new();
    let mut attempts = 0usize;
    for support in closed_supports(pair, opts) {
        for start in starts_for_support(n, &support, opts) {
            attempts += 1;
            let converged = iterate_simplex_map(&support, &start, opts, |x, out| {
                te_rhs(pair, nu, x, out);
                true
            });
            let Some(x) = converged else { continue };
            let residual = te_residual(pair, nu, &x);
            if residual > opts.residual_tol {
                continue;
            }
            merge_solution(&mut found, TeSolution { r_hat: x, residual }, opts.dedup_radius);
        }
    }
    if found.is_empty() {
        return Err(Error::NoConvergence {
            max_iter: opts.max_iter * attempts.max(1),
            best_residual: f64::NAN,
        });
    }
    if pair.is_plain() && found.len() > 1 {
        return Err(Error::PlainMultiplicity(found.len()));
    }
    found.sort_by(|s, t| {
        t.r_hat
            .iter()
            .partial_cmp(s.r_hat.iter())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(found)
}

fn merge_solution(found: &mut Vec<TeSolution>, sol: TeSolution, radius: f64) {
    for existing in found.iter_mut() {
        let dist = existing
            .r_hat
            .iter()
            .zip(&sol.r_hat)
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

/// Drift of the random walk at a traffic-equation solution: the almost-sure
/// growth rate of the word length per step.
///
/// Evaluated both directly and as `A(r) - C(r)`; the two routes must agree to
/// `1e-10`.
pub fn drift(pair: &PairSpec, nu: &ClassDistribution, te: &TeSolution) -> Result<f64> {
    let direct: f64 = pair
        .generators()
        .map(|a| {
            let cancel: f64 = pair
                .identity_pairs()
                .iter()
                .filter(|&&(b, _)| b == a)
                .map(|&(_, d)| te.r_hat[d.index()])
                .sum();
            nu.prob(a) * (mass(&te.r_hat, pair.right(a)) - cancel)
        })
        .sum();
    let f = functionals(pair, nu, &te.r_hat);
    let via_functionals = f.a - f.c;
    let delta = (direct - via_functionals).abs();
    if delta > 1e-10 {
        return Err(Error::Inconsistent {
            what: "drift formulas",
            delta,
        });
    }
    Ok(direct)
}

/// Harmonic-measure marginal of a prefix `u`: the probability that the
/// escaping walk stabilizes on `u`.
///
/// Only defined for plain triples, where the harmonic measure is the product
/// `q(u_1)...q(u_{k-1}) r(u_k)` with `q(a) = r(a)/r(Next(a))`.
pub fn harmonic_marginal(
    pair: &PairSpec,
    te: &TeSolution,
    u: &BufferWord,
) -> Result<f64> {
    if !pair.is_plain() {
        return Err(Error::NotPlain);
    }
    if !pair.is_normal(&u.0)? {
        return Err(Error::NotNormal(pair.format_word(u)));
    }
    if u.is_empty() {
        return Ok(1.0);
    }
    let mut p = 1.0;
    for (i, &letter) in u.0.iter().enumerate() {
        if i + 1 == u.len() {
            p *= te.r_hat[letter.index()];
        } else {
            let den = mass(&te.r_hat, pair.right(letter));
            if den < MASS_FLOOR {
                return Err(Error::BadDistribution(format!(
                    "zero successor mass at `{}`",
                    pair.label(letter)
                )));
            }
            p *= te.r_hat[letter.index()] / den;
        }
    }
    Ok(p)
}
