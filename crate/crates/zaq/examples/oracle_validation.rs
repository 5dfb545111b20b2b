//! Brute-force validation: enumerate words, assemble the exact truncated
//! generator, solve the stationary system, and measure the distance to the
//! analytic product form.
//!
//! ```bash
//! cargo run --example oracle_validation
//! ```

use zaq::algebra::pairs;
use zaq::oracle::{compare, comparison_rows, enumerate_words, solve_stationary, truncated_generator};
use zaq::traffic::SolveOptions;
use zaq::twisted::{solve_tte, StationaryLaw};
use zaq::ClassDistribution;

fn main() {
    let pair = pairs::z3_star_z3();
    let nu = ClassDistribution::uniform(&pair);
    let (lambda, mu) = (1.0, 1.0);

    let words = enumerate_words(&pair, 3, 10).unwrap();
    println!("normal words up to length 3: {}", words.len());
    println!(
        "  {}",
        words.iter().take(12).map(|w| pair.format_word(w)).collect::<Vec<_>>().join(", ")
    );

    let law = StationaryLaw::new(
        solve_tte(&pair, &nu, lambda, mu, &SolveOptions::default())
            .expect("solves")
            .remove(0),
    )
    .expect("ergodic");

    for n in [4usize, 6, 8] {
        let chain = truncated_generator(&pair, &nu, lambda, mu, &law.solution.r, n).unwrap();
        let pi = solve_stationary(&chain).unwrap();
        let report = compare(&chain, &pi, &pair, &law).unwrap();
        println!(
            "truncation {n}: {} states, pi*Q residual {:.2e}, TV over len <= {} = {:.3e} (tail bound {:.3e})",
            chain.states.len(),
            pi.residual,
            report.max_len,
            report.tv,
            report.tail_bound
        );
    }

    println!("\nper-word comparison at truncation 6 (first rows):");
    let chain = truncated_generator(&pair, &nu, lambda, mu, &law.solution.r, 6).unwrap();
    let pi = solve_stationary(&chain).unwrap();
    println!("  {:10} {:>14} {:>14} {:>10}", "word", "oracle", "analytic", "diff");
    for (w, o, a, d) in comparison_rows(&chain, &pi, &pair, &law).unwrap().into_iter().take(8) {
        println!("  {:10} {o:>14.9} {a:>14.9} {d:>10.2e}", pair.format_word(&w));
    }
}
