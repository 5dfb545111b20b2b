//! The twisted traffic equations and the product-form stationary law,
//! including a general pair with two coexisting stationary regimes.
//!
//! ```bash
//! cargo run --example product_form
//! ```

use zaq::algebra::pairs;
use zaq::traffic::SolveOptions;
use zaq::twisted::{balance_residual, classify, solve_tte, StationaryLaw};
use zaq::ClassDistribution;

fn main() {
    let opts = SolveOptions::default();

    println!("== Z/3Z * Z/3Z, nu uniform, lambda = mu = 1 ==");
    let pair = pairs::z3_star_z3();
    let nu = ClassDistribution::uniform(&pair);
    let sols = solve_tte(&pair, &nu, 1.0, 1.0, &opts).expect("solves");
    let law = StationaryLaw::new(sols[0].clone()).expect("ergodic");
    println!("rho = {:.12}, P(empty) = {:.12}", law.rho(), law.normalizer);
    for labels in [vec![], vec!["b"], vec!["a", "b"], vec!["a", "b", "a2"]] {
        let w = pair.word_from_labels(&labels).unwrap();
        println!(
            "  pi({}) = {:.12}",
            pair.format_word(&w),
            law.stationary_probability(&pair, &w).unwrap()
        );
    }
    println!("level masses: {:?}", (0..5).map(|n| law.level_mass(n)).collect::<Vec<_>>());
    println!("departure rate rho*mu = {:.12} (Poisson in equilibrium)", law.departure_rate(1.0));
    let res = balance_residual(&pair, &nu, 1.0, 1.0, law.rho(), &law.solution.r, 6).unwrap();
    println!("global balance residual over words of length < 6: {res:.3e}");
    println!(
        "stability: {:?}",
        classify(1.0, 1.0, 0.25, 1e-9).class
    );

    println!("\n== bicyclic monoid, nu(a) = 0.75: two stationary regimes ==");
    let pair = pairs::bicyclic();
    let nu = ClassDistribution::from_labels(&pair, &[("a", 0.75), ("b", 0.25)]).unwrap();
    let sols = solve_tte(&pair, &nu, 1.0, 1.0, &opts).expect("solves");
    for (i, s) in sols.iter().enumerate() {
        let entries: Vec<String> = pair
            .generators()
            .map(|g| format!("{}={:.10}", pair.label(g), s.r_of(g)))
            .collect();
        println!("  regime #{i}: rho = {:.12}, r = [{}]", s.rho, entries.join(", "));
        let res = balance_residual(&pair, &nu, 1.0, 1.0, s.rho, &s.r, 7).unwrap();
        println!("            balance residual {res:.3e}");
    }
    println!("each admissible pair gives its own product-form stationary law;");
    println!("the boundary condition of the queue decides which one is realized.");
}
