//! Emits the stability frontier and the load surface of the two-cyclic-group
//! family as CSV, for external plotting.
//!
//! The family is Z/3Z * Z/3Z with nu(a) = nu(b) = p and nu(a2) = nu(b2) =
//! 1/2 - p. The frontier is the curve lambda/mu = 1/gamma(p); the surface is
//! rho(p, lambda/mu) below it.
//!
//! ```bash
//! cargo run --example stability_grid [out_dir]
//! ```

use zaq::algebra::pairs;
use zaq::traffic::{drift, solve_te, SolveOptions};
use zaq::twisted::solve_tte;
use zaq::ClassDistribution;

fn family_nu(pair: &zaq::PairSpec, p: f64) -> ClassDistribution {
    let q = 0.5 - p;
    ClassDistribution::from_labels(pair, &[("a", p), ("b", p), ("a2", q), ("b2", q)])
        .expect("valid distribution")
}

fn main() {
    let out_dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| std::env::temp_dir().join("zaq-grids").display().to_string());
    std::fs::create_dir_all(&out_dir).expect("create output dir");
    let pair = pairs::z3_star_z3();
    let opts = SolveOptions::default();

    // Stability frontier: lambda/mu below 1/gamma(p) is ergodic.
    let mut frontier = String::from("p,gamma,critical_lambda_over_mu\n");
    let steps = 40;
    for i in 1..steps {
        let p = 0.5 * i as f64 / steps as f64;
        let nu = family_nu(&pair, p);
        let te = &solve_te(&pair, &nu, &opts).expect("plain")[0];
        let gamma = drift(&pair, &nu, te).expect("consistent");
        frontier.push_str(&format!("{p:.16e},{gamma:.16e},{:.16e}\n", 1.0 / gamma));
    }
    let frontier_path = format!("{out_dir}/stability_frontier.csv");
    std::fs::write(&frontier_path, frontier).expect("write frontier");

    // Load surface rho(p, t) for t = lambda/mu inside the stable region.
    let mut surface = String::from("p,lambda_over_mu,rho\n");
    for i in 1..steps {
        let p = 0.5 * i as f64 / steps as f64;
        let nu = family_nu(&pair, p);
        let te = &solve_te(&pair, &nu, &opts).expect("plain")[0];
        let gamma = drift(&pair, &nu, te).expect("consistent");
        let t_max = (1.0 / gamma).min(6.0);
        for j in 1..=20 {
            let t = t_max * j as f64 / 21.0;
            let sols = solve_tte(&pair, &nu, t, 1.0, &opts).expect("solves");
            surface.push_str(&format!("{p:.16e},{t:.16e},{:.16e}\n", sols[0].rho));
        }
    }
    let surface_path = format!("{out_dir}/load_surface.csv");
    std::fs::write(&surface_path, surface).expect("write surface");

    println!("wrote {frontier_path}");
    println!("wrote {surface_path}");

    // Spot checks at the closed-form point p = 1/4, lambda = mu = 1.
    let nu = family_nu(&pair, 0.25);
    let te = &solve_te(&pair, &nu, &opts).unwrap()[0];
    let gamma = drift(&pair, &nu, te).unwrap();
    let rho = solve_tte(&pair, &nu, 1.0, 1.0, &opts).unwrap()[0].rho;
    println!("spot check at p = 1/4: gamma = {gamma:.12} (exp. 0.25), critical ratio = {:.12} (exp. 4), rho = {rho:.12} (exp. 0.4)", 1.0 / gamma);
}
