//! Solving the traffic equations: escape vector, drift, and harmonic
//! marginals of the buffering random walk.
//!
//! ```bash
//! cargo run --example traffic_equations
//! ```

use zaq::algebra::pairs;
use zaq::traffic::{drift, functionals, harmonic_marginal, solve_te, SolveOptions};
use zaq::ClassDistribution;

fn main() {
    let opts = SolveOptions::default();

    println!("== Z/3Z * Z/3Z, nu uniform ==");
    let pair = pairs::z3_star_z3();
    let nu = ClassDistribution::uniform(&pair);
    let te = &solve_te(&pair, &nu, &opts).expect("plain triple solves")[0];
    for a in pair.generators() {
        print!("r_hat({}) = {:.12}  ", pair.label(a), te.r(a));
    }
    println!("\nresidual = {:.3e}", te.residual);
    let f = functionals(&pair, &nu, &te.r_hat);
    println!("A = {:.12}, B = {:.12}, C = {:.12} (sum {:.15})", f.a, f.b, f.c, f.sum());
    let gamma = drift(&pair, &nu, te).expect("consistent drift");
    println!("drift gamma = {:.12} (closed form 1/4 at this nu)", gamma);

    println!("\nharmonic marginals of escape prefixes:");
    for labels in [vec!["a"], vec!["a", "b"], vec!["a", "b", "a2"]] {
        let w = pair.word_from_labels(&labels).unwrap();
        println!(
            "  nu_inf({}) = {:.12}",
            pair.format_word(&w),
            harmonic_marginal(&pair, te, &w).unwrap()
        );
    }

    println!("\n== bicyclic * {{c}}^* (a general 0-automatic pair) ==");
    let pair = pairs::bicyclic_star_free();
    let nu = ClassDistribution::from_labels(&pair, &[("a", 0.4), ("b", 0.4), ("c", 0.2)])
        .unwrap();
    let sols = solve_te(&pair, &nu, &opts).expect("solves");
    println!("{} traffic solution(s) found:", sols.len());
    for (i, s) in sols.iter().enumerate() {
        let entries: Vec<String> = pair
            .generators()
            .map(|a| format!("{}={:.10}", pair.label(a), s.r(a)))
            .collect();
        let g = drift(&pair, &nu, s).unwrap();
        println!("  #{i}: [{}], drift {:.12}", entries.join(", "), g);
    }
    println!("closed forms: r(b) = (1-sqrt(1-4pq))/(2p) = 0.5, drift = sqrt(1-4pq) = 0.6");
}
