//! Monte-Carlo check of the drift and harmonic marginals of the buffering
//! random walk.
//!
//! ```bash
//! cargo run --example random_walk_drift
//! ```

use zaq::algebra::pairs;
use zaq::simulate::simulate_walk;
use zaq::traffic::{drift, harmonic_marginal, solve_te, SolveOptions};
use zaq::ClassDistribution;

fn main() {
    let pair = pairs::z3_star_z3();
    let nu = ClassDistribution::uniform(&pair);

    let te = &solve_te(&pair, &nu, &SolveOptions::default()).expect("solves")[0];
    let gamma = drift(&pair, &nu, te).expect("consistent");
    println!("analytic drift: {gamma:.12}");

    let walk = simulate_walk(&pair, &nu, 1_000_000, 7);
    println!(
        "simulated drift: {:.6} +- {:.6} (|estimate - analytic| = {:.2e})",
        walk.gamma_estimate,
        walk.gamma_se,
        (walk.gamma_estimate - gamma).abs()
    );
    println!("final word length after {} steps: {}", walk.steps, walk.final_len);

    println!(
        "\nstabilized prefix frequencies ({} replications) vs harmonic marginals:",
        walk.replications
    );
    for (prefix, freq, se) in walk.prefix_marginals.iter().filter(|(p, _, _)| p.len() <= 2) {
        let analytic = harmonic_marginal(&pair, te, prefix).unwrap();
        println!(
            "  {}: {:.4} +- {:.4} vs {:.4}",
            pair.format_word(prefix),
            freq,
            se,
            analytic
        );
    }

    println!("\ndeterministic counter-example: the free monoid walk grows one letter per step");
    let fm = pairs::free_monoid("a");
    let nu1 = ClassDistribution::uniform(&fm);
    let w = simulate_walk(&fm, &nu1, 100_000, 1);
    println!("  drift estimate = {} (exact 1)", w.gamma_estimate);
}
