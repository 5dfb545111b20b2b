//! Lumped quasi-birth-and-death view of the queue.
//!
//! Tracking only the level (word length) and the phase (back-end letter)
//! under the product-form weights collapses the queue into a QBD generator
//! with level-independent blocks. Solving it by the matrix-geometric method
//! and checking that the result is level-geometric with ratio `rho` gives an
//! independent route to the same stationary law.

use crate::algebra::{GeneratorId, PairSpec, Reduction};
use crate::linalg::Mat;
use crate::traffic::{mass, ClassDistribution};
use crate::twisted::TteSolution;
use crate::{Error, Result};

/// Blocks of the lumped generator.
///
/// Levels `>= 2` repeat the `(A2, A1, A0)` row; the boundary row is
/// `(a, Avec)` and level one descends through `B`.
#[derive(Debug, Clone)]
pub struct QbdBlocks {
    /// 1x1 boundary rate (the negated total admission rate).
    pub a: f64,
    /// 1 x |Σ| boundary arrivals into level one.
    pub avec: Vec<f64>,
    /// |Σ| x 1 drops from level one to the boundary.
    pub b: Vec<f64>,
    /// Up transitions (arrival stacks a new back-end letter).
    pub a0: Mat,
    /// Within-level transitions (merges) and the diagonal.
    pub a1: Mat,
    /// Down transitions: services keep the phase, cancellations redraw it
    /// from the conditional law `r(.)/r(Next(phase))`.
    pub a2: Mat,
}

/// Assembles the lumped blocks for a plain pair and a strictly positive
/// boundary vector.
///
/// The cancellation rows need the conditional law of the next back-end
/// letter under the product form, which is `r(b)/r(Next(a))` on `Next(a)`;
/// that conditional is only well defined when `r` has full support, and the
/// lumping itself is only Markov-consistent at an admissible `(rho, r)`.
pub fn build_blocks(
    pair: &PairSpec,
    nu: &ClassDistribution,
    lambda: f64,
    mu: f64,
    r: &[f64],
) -> Result<QbdBlocks> {
    if !pair.is_plain() {
        return Err(Error::NotPlain);
    }
    if lambda <= 0.0 || !lambda.is_finite() {
        return Err(Error::NonPositiveRate(format!("lambda = {lambda}")));
    }
    if mu <= 0.0 || !mu.is_finite() {
        return Err(Error::NonPositiveRate(format!("mu = {mu}")));
    }
    let n = pair.len();
    if r.len() != n {
        return Err(Error::BadDistribution(format!(
            "boundary vector has {} entries, expected {n}",
            r.len()
        )));
    }
    for g in pair.generators() {
        if r[g.index()] <= 0.0 || r[g.index()].is_nan() {
            return Err(Error::ZeroBoundaryEntry(pair.label(g).to_string()));
        }
    }
    let mut a0 = Mat::zeros(n, n);
    let mut a1 = Mat::zeros(n, n);
    let mut a2 = Mat::zeros(n, n);
    let mut b = vec![0.0; n];
    let mut avec = vec![0.0; n];
    for phase in pair.generators() {
        let i = phase.index();
        // Total cancellation rate against this phase.
        let cancel: f64 = pair
            .identity_pairs()
            .iter()
            .filter(|&&(_, d)| d == phase)
            .map(|&(bb, _)| nu.prob(bb))
            .sum();
        let mut noact = 0.0;
        for arriving in pair.generators() {
            match pair.product(arriving, phase) {
                Reduction::Irreducible => {
                    a0[(i, arriving.index())] += lambda * nu.prob(arriving);
                }
                Reduction::Letter(c) => {
                    if c == phase {
                        noact += nu.prob(arriving);
                    } else {
                        a1[(i, c.index())] += lambda * nu.prob(arriving);
                    }
                }
                Reduction::Identity => {}
            }
        }
        let next_mass = mass(r, pair.right(phase));
        for &nb in pair.right(phase) {
            a2[(i, nb.index())] += lambda * cancel * r[nb.index()] / next_mass;
        }
        a2[(i, i)] += mu;
        a1[(i, i)] = -(lambda * (1.0 - noact) + mu);
        b[i] = mu + lambda * cancel;
        avec[i] = lambda * nu.prob(phase) * mass(r, pair.right(phase));
    }
    let a = -avec.iter().sum::<f64>();
    Ok(QbdBlocks {
        a,
        avec,
        b,
        a0,
        a1,
        a2,
    })
}

/// The minimal nonnegative solution of `A0 + R A1 + R^2 A2 = 0`.
#[derive(Debug, Clone)]
pub struct RMatrix {
    pub r: Mat,
    pub iterations: usize,
    /// `max |A0 + R A1 + R^2 A2|` at the returned iterate.
    pub defect: f64,
}

impl RMatrix {
    /// Perron-root estimate of `R`; equals the load at an admissible
    /// boundary vector.
    pub fn spectral_radius(&self) -> f64 {
        self.r.spectral_radius_nonneg(1e-14, 200_000)
    }
}

/// Solves for `R` by the plain fixed-point iteration
/// `R <- -(A0 + R^2 A2) A1^{-1}` from zero, which is entrywise monotone and
/// converges to the minimal nonnegative solution in the stable case.
pub fn solve_r(blocks: &QbdBlocks, tol: f64, max_iter: usize) -> Result<RMatrix> {
    let n = blocks.a0.rows;
    // -A1^{-1}, column by column.
    let mut neg_a1_inv = Mat::zeros(n, n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = -1.0;
        let (col, _) = blocks.a1.solve(&e)?;
        for i in 0..n {
            neg_a1_inv[(i, j)] = col[i];
        }
    }
    let mut r = Mat::zeros(n, n);
    for it in 1..=max_iter {
        let next = blocks.a0.add(&r.matmul(&r).matmul(&blocks.a2)).matmul(&neg_a1_inv);
        let delta = next.max_diff(&r);
        r = next;
        if r.max_norm() > 1e6 {
            return Err(Error::RIterationDiverged { iterations: it });
        }
        if delta < tol {
            let defect = blocks
                .a0
                .add(&r.matmul(&blocks.a1))
                .add(&r.matmul(&r).matmul(&blocks.a2))
                .max_norm();
            return Ok(RMatrix {
                r,
                iterations: it,
                defect,
            });
        }
    }
    Err(Error::RIterationDiverged {
        iterations: max_iter,
    })
}

/// Boundary solve: the unique positive `(y, x)` with
/// `a y + x B = 0`, `y Avec + x (A1 + R A2) = 0`, normalized by
/// `y + x (I - R)^{-1} 1 = 1`.
pub fn boundary_solve(blocks: &QbdBlocks, r: &RMatrix) -> Result<(f64, Vec<f64>)> {
    let n = blocks.a0.rows;
    // Left null vector of the bordered matrix [[a, Avec], [B, A1 + R A2]],
    // with the last equation replaced by the normalization.
    let inner = blocks.a1.add(&r.r.matmul(&blocks.a2));
    let mut system = Mat::zeros(n + 1, n + 1);
    system[(0, 0)] = blocks.a;
    for j in 0..n {
        system[(0, j + 1)] = blocks.avec[j];
        system[(j + 1, 0)] = blocks.b[j];
        for k in 0..n {
            system[(j + 1, k + 1)] = inner[(j, k)];
        }
    }
    // Transpose for a left null vector, then overwrite the last row with the
    // normalization coefficients (1, (I-R)^{-1} 1).
    let mut lhs = Mat::zeros(n + 1, n + 1);
    for i in 0..n + 1 {
        for j in 0..n + 1 {
            lhs[(j, i)] = system[(i, j)];
        }
    }
    let eye = Mat::identity(n);
    let mut i_minus_r = eye.clone();
    for i in 0..n {
        for j in 0..n {
            i_minus_r[(i, j)] -= r.r[(i, j)];
        }
    }
    // Solve (I - R)^T w^T = 1 column-wise: we need (I-R)^{-1} 1.
    let (w, cond) = {
        let (sol, cond) = i_minus_r.solve(&vec![1.0; n])?;
        (sol, cond)
    };
    if cond > 1e12 {
        eprintln!("warning: (I-R) solve condition estimate {cond:.3e}");
    }
    for j in 0..n + 1 {
        lhs[(n, j)] = if j == 0 { 1.0 } else { w[j - 1] };
    }
    let mut rhs = vec![0.0; n + 1];
    rhs[n] = 1.0;
    let (z, cond) = lhs.solve(&rhs)?;
    if cond > 1e12 {
        eprintln!("warning: boundary solve condition estimate {cond:.3e}");
    }
    let y = z[0];
    let x = z[1..].to_vec();
    if y <= 0.0 || x.iter().any(|&v| v <= 0.0) {
        return Err(Error::NonPositiveSolution);
    }
    Ok((y, x))
}

/// Lumped stationary probability: `y` at the boundary, `(x R^{n-1})(a)`
/// at level `n >= 1`.
pub fn qbd_stationary(y: f64, x: &[f64], r: &RMatrix, n: usize, a: GeneratorId) -> f64 {
    if n == 0 {
        return y;
    }
    let mut v = x.to_vec();
    for _ in 1..n {
        v = r.r.row_vec_mul(&v);
    }
    v[a.index()]
}

/// Deviations certifying the level-geometric (parameter 0) form.
#[derive(Debug, Clone, Copy)]
pub struct ProductFormDeviation {
    /// `max |x R - rho x|`.
    pub eigen: f64,
    /// `max |x - rho (1 - rho) r|`.
    pub x_vs_r: f64,
    /// `|y - (1 - rho)|`.
    pub boundary: f64,
}

impl ProductFormDeviation {
    pub fn max(&self) -> f64 {
        self.eigen.max(self.x_vs_r).max(self.boundary)
    }
}

/// Compares the matrix-geometric solution against the product form of an
/// admissible `(rho, r)`: all three deviations vanish exactly when the lumped
/// chain is level-geometric with ratio `rho`.
pub fn product_form_check(
    r_matrix: &RMatrix,
    y: f64,
    x: &[f64],
    tte: &TteSolution,
) -> ProductFormDeviation {
    let xr = r_matrix.r.row_vec_mul(x);
    let eigen = xr
        .iter()
        .zip(x)
        .fold(0.0f64, |m, (v, xi)| m.max((v - tte.rho * xi).abs()));
    let scale = tte.rho * (1.0 - tte.rho);
    let x_vs_r = x
        .iter()
        .zip(&tte.r)
        .fold(0.0f64, |m, (xi, ri)| m.max((xi - scale * ri).abs()));
    ProductFormDeviation {
        eigen,
        x_vs_r,
        boundary: (y - (1.0 - tte.rho)).abs(),
    }
}

/// Row-sum defect of the first `levels` block rows of the assembled
/// generator; zero for a well-formed QBD.
pub fn row_sum_defect(blocks: &QbdBlocks, levels: usize) -> f64 {
    let n = blocks.a0.rows;
    let mut worst = (blocks.a + blocks.avec.iter().sum::<f64>()).abs();
    for i in 0..n {
        // Level 1 row: B + A1 + A0.
        let s1: f64 = blocks.b[i]
            + (0..n).map(|j| blocks.a1[(i, j)] + blocks.a0[(i, j)]).sum::<f64>();
        worst = worst.max(s1.abs());
        // Levels >= 2: A2 + A1 + A0.
        if levels >= 2 {
            let s2: f64 = (0..n)
                .map(|j| blocks.a2[(i, j)] + blocks.a1[(i, j)] + blocks.a0[(i, j)])
                .sum::<f64>();
            worst = worst.max(s2.abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::pairs::*;
    use crate::traffic::SolveOptions;
    use crate::twisted::solve_tte;

    fn mm1_blocks() -> QbdBlocks {
        let pair = free_monoid("a");
        let nu = ClassDistribution::uniform(&pair);
        build_blocks(&pair, &nu, 1.0, 2.0, &[1.0]).unwrap()
    }

    #[test]
    fn mm1_blocks_are_birth_death() {
        let blocks = mm1_blocks();
        assert!((blocks.a - (-1.0)).abs() < 1e-15);
        assert!((blocks.avec[0] - 1.0).abs() < 1e-15);
        assert!((blocks.b[0] - 2.0).abs() < 1e-15);
        assert!((blocks.a0[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((blocks.a1[(0, 0)] + 3.0).abs() < 1e-15);
        assert!((blocks.a2[(0, 0)] - 2.0).abs() < 1e-15);
        assert!(row_sum_defect(&blocks, 3) < 1e-15);
    }

    #[test]
    fn z3z3_cancellation_entry_matches_formula() {
        let pair = z3_star_z3();
        let nu = ClassDistribution::uniform(&pair);
        let blocks = build_blocks(&pair, &nu, 1.0, 1.0, &[0.25; 4]).unwrap();
        // Down-move (n,a) -> (n-1,b): lambda nu(a2) r(b)/r(Next(a)) = 0.125.
        let a = pair.by_label("a").unwrap().index();
        let b = pair.by_label("b").unwrap().index();
        let b2 = pair.by_label("b2").unwrap().index();
        assert!((blocks.a2[(a, b)] - 0.125).abs() < 1e-15);
        assert!((blocks.a2[(a, b2)] - 0.125).abs() < 1e-15);
        // Same-letter merges are self-jumps: a1 off-diagonals only carry
        // genuine phase changes. a*a = a2 arrives at rate nu(a) = 1/4.
        let a2_ix = pair.by_label("a2").unwrap().index();
        assert!((blocks.a1[(a, a2_ix)] - 0.25).abs() < 1e-15);
        assert!(row_sum_defect(&blocks, 3) < 1e-14);
    }

    #[test]
    fn rejects_non_plain_and_zero_boundary() {
        let bic = bicyclic();
        let nu = ClassDistribution::from_labels(&bic, &[("a", 0.4), ("b", 0.6)]).unwrap();
        assert!(matches!(
            build_blocks(&bic, &nu, 1.0, 1.0, &[0.5, 0.5]),
            Err(Error::NotPlain)
        ));
        let pair = z3_star_z3();
        let nu = ClassDistribution::uniform(&pair);
        assert!(matches!(
            build_blocks(&pair, &nu, 1.0, 1.0, &[0.5, 0.5, 0.0, 0.0]),
            Err(Error::ZeroBoundaryEntry(_))
        ));
    }

    #[test]
    fn mm1_r_is_half() {
        let blocks = mm1_blocks();
        let r = solve_r(&blocks, 1e-12, 1_000_000).unwrap();
        assert!((r.r[(0, 0)] - 0.5).abs() < 1e-10);
        assert!(r.defect < 1e-10);
        let (y, x) = boundary_solve(&blocks, &r).unwrap();
        assert!((y - 0.5).abs() < 1e-10);
        assert!((x[0] - 0.25).abs() < 1e-10);
    }

    #[test]
    fn r_iteration_is_monotone() {
        let pair = z3_star_z3();
        let nu = ClassDistribution::uniform(&pair);
        let blocks = build_blocks(&pair, &nu, 1.0, 1.0, &[0.25; 4]).unwrap();
        // Re-run the iteration manually and check entrywise monotonicity.
        let n = 4;
        let mut neg_a1_inv = Mat::zeros(n, n);
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = -1.0;
            let (col, _) = blocks.a1.solve(&e).unwrap();
            for i in 0..n {
                neg_a1_inv[(i, j)] = col[i];
            }
        }
        let mut r = Mat::zeros(n, n);
        for _ in 0..200 {
            let next = blocks
                .a0
                .add(&r.matmul(&r).matmul(&blocks.a2))
                .matmul(&neg_a1_inv);
            for i in 0..n {
                for j in 0..n {
                    assert!(next[(i, j)] >= r[(i, j)] - 1e-15, "monotonicity at ({i},{j})");
                }
            }
            r = next;
        }
    }

    #[test]
    fn z3z3_qbd_reproduces_product_form() {
        let pair = z3_star_z3();
        let nu = ClassDistribution::uniform(&pair);
        let sols = solve_tte(&pair, &nu, 1.0, 1.0, &SolveOptions::default()).unwrap();
        let tte = &sols[0];
        let blocks = build_blocks(&pair, &nu, 1.0, 1.0, &tte.r).unwrap();
        let r = solve_r(&blocks, 1e-12, 1_000_000).unwrap();
        assert!((r.spectral_radius() - tte.rho).abs() < 1e-8);
        let (y, x) = boundary_solve(&blocks, &r).unwrap();
        assert!((y - 0.6).abs() < 1e-8);
        for &xi in &x {
            assert!((xi - 0.06).abs() < 1e-8);
        }
        let dev = product_form_check(&r, y, &x, tte);
        assert!(dev.max() < 1e-8, "{dev:?}");
        // Normalization: y + sum_n x R^(n-1) 1 = 1.
        let mut total = y;
        let mut v = x.clone();
        for _ in 0..2000 {
            total += v.iter().sum::<f64>();
            v = r.r.row_vec_mul(&v);
        }
        assert!((total - 1.0).abs() < 1e-10, "normalization defect {}", total - 1.0);
        // Marginal of level n sums to (1-rho) rho^n.
        for n in 1..=4usize {
            let level: f64 = pair
                .generators()
                .map(|g| qbd_stationary(y, &x, &r, n, g))
                .sum();
            assert!((level - 0.6 * 0.4f64.powi(n as i32)).abs() < 1e-8);
        }
        assert!((qbd_stationary(y, &x, &r, 0, GeneratorId(0)) - 0.6).abs() < 1e-10);
        let a = pair.by_label("a").unwrap();
        assert!((qbd_stationary(y, &x, &r, 2, a) - 0.024).abs() < 1e-8);
    }

    #[test]
    fn perturbed_boundary_fails_product_form() {
        let pair = z3_star_z3();
        let nu = ClassDistribution::uniform(&pair);
        let sols = solve_tte(&pair, &nu, 1.0, 1.0, &SolveOptions::default()).unwrap();
        let tte = &sols[0];
        // An asymmetric wrong boundary: perturbations preserving the factor
        // symmetry can remain level-geometric around a distorted x, so break
        // the symmetry to expose the eigen defect.
        let r_bad = vec![0.4, 0.2, 0.2, 0.2];
        let blocks = build_blocks(&pair, &nu, 1.0, 1.0, &r_bad).unwrap();
        let r = solve_r(&blocks, 1e-12, 1_000_000).unwrap();
        let (y, x) = boundary_solve(&blocks, &r).unwrap();
        let dev = product_form_check(&r, y, &x, tte);
        assert!(dev.eigen > 1e-3, "{dev:?}");
        assert!(dev.x_vs_r > 1e-3, "{dev:?}");
    }
}
