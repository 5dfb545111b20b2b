//! Matrix-geometric solve of the lumped level/phase process and the
//! level-geometric certificate.
//!
//! ```bash
//! cargo run --example qbd_matrix_geometric
//! ```

use zaq::algebra::pairs;
use zaq::qbd::{boundary_solve, build_blocks, product_form_check, qbd_stationary, row_sum_defect, solve_r};
use zaq::traffic::SolveOptions;
use zaq::twisted::solve_tte;
use zaq::ClassDistribution;

fn main() {
    let pair = pairs::z3_star_z3();
    let nu = ClassDistribution::uniform(&pair);
    let (lambda, mu) = (1.0, 1.0);

    let tte = solve_tte(&pair, &nu, lambda, mu, &SolveOptions::default())
        .expect("solves")
        .remove(0);
    println!("admissible solution: rho = {:.12}", tte.rho);

    let blocks = build_blocks(&pair, &nu, lambda, mu, &tte.r).expect("positive boundary");
    println!("block row-sum defect: {:.3e}", row_sum_defect(&blocks, 3));

    let r = solve_r(&blocks, 1e-12, 1_000_000).expect("stable");
    println!(
        "R solved in {} iterations, equation defect {:.3e}",
        r.iterations, r.defect
    );
    for i in 0..pair.len() {
        let row: Vec<String> = (0..pair.len()).map(|j| format!("{:.9}", r.r[(i, j)])).collect();
        println!("  R[{i}] = [{}]", row.join(", "));
    }
    println!("spectral radius(R) = {:.12} (= rho)", r.spectral_radius());

    let (y, x) = boundary_solve(&blocks, &r).expect("positive solve");
    println!("boundary: y = {y:.12} (= 1 - rho)");
    println!("level-1 vector x = {x:?} (= rho (1-rho) r)");

    let dev = product_form_check(&r, y, &x, &tte);
    println!(
        "certificate: |xR - rho x| = {:.2e}, |x - rho(1-rho)r| = {:.2e}, |y - (1-rho)| = {:.2e}",
        dev.eigen, dev.x_vs_r, dev.boundary
    );

    println!("\nlumped stationary probabilities:");
    let a = pair.by_label("a").unwrap();
    println!("  pi(0) = {:.12}  [1 - rho = {:.12}]", qbd_stationary(y, &x, &r, 0, a), 0.6);
    for n in 1..5usize {
        println!(
            "  pi({n}, a) = {:.12}  [(1-rho) rho^n r(a) = {:.12}]",
            qbd_stationary(y, &x, &r, n, a),
            0.6 * 0.4f64.powi(n as i32) * 0.25
        );
    }
}
