//! The queue with positive and negative customers, built on the one-generator
//! free group: boundary solutions, the symmetric continuum, and the explicit
//! non-product law for interior boundary vectors.
//!
//! ```bash
//! cargo run --example g_queue
//! ```

use zaq::algebra::pairs;
use zaq::oracle::{solve_stationary, truncated_generator};
use zaq::traffic::SolveOptions;
use zaq::twisted::{balance_residual, solve_tte, tte_residual};
use zaq::{BufferWord, ClassDistribution};

fn main() {
    let pair = pairs::free_group_z();
    let (lambda, mu) = (1.0, 1.0);

    println!("== asymmetric case nu(a) = 0.6: two boundary regimes ==");
    let nu = ClassDistribution::from_labels(&pair, &[("a", 0.6), ("a^-1", 0.4)]).unwrap();
    for s in solve_tte(&pair, &nu, lambda, mu, &SolveOptions::default()).unwrap() {
        let entries: Vec<String> = pair
            .generators()
            .map(|g| format!("{}={:.9}", pair.label(g), s.r_of(g)))
            .collect();
        println!("  rho = {:.12}, r = [{}]", s.rho, entries.join(", "));
    }
    println!("closed forms: lambda nu(a)/(mu + lambda nu(a^-1)) = {:.12} and", 0.6 / 1.4);
    println!("              lambda nu(a^-1)/(mu + lambda nu(a)) = {:.12}", 0.4 / 1.6);

    println!("\n== symmetric case nu = 1/2: every boundary vector works ==");
    let nu_sym = ClassDistribution::from_labels(&pair, &[("a", 0.5), ("a^-1", 0.5)]).unwrap();
    let rho = lambda / (2.0 * mu + lambda);
    for u in [0.0, 0.25, 0.618, 1.0] {
        let r = vec![u, 1.0 - u];
        let tte = tte_residual(&pair, &nu_sym, lambda, mu, rho, &r);
        let bal = balance_residual(&pair, &nu_sym, lambda, mu, rho, &r, 8).unwrap();
        println!("  r = ({u:.3}, {:.3}): equation residual {tte:.2e}, balance residual {bal:.2e}", 1.0 - u);
    }
    println!("  (rho = lambda/(2 mu + lambda) = {rho:.12} for all of them)");

    println!("\n== interior boundary, asymmetric nu: explicit non-product law ==");
    // The queue is still ergodic, but its stationary law mixes the two
    // geometric rates; the oracle recovers it exactly.
    let r_interior = vec![0.5, 0.5];
    let chain = truncated_generator(&pair, &nu, lambda, mu, &r_interior, 25).unwrap();
    let pi = solve_stationary(&chain).unwrap();
    let (rho1, rho2): (f64, f64) = (0.6 / 1.4, 0.4 / 1.6);
    let p_empty = 1.0 / (1.0 + 0.5 * rho1 / (1.0 - rho1) + 0.5 * rho2 / (1.0 - rho2));
    let a = pair.by_label("a").unwrap();
    let ai = pair.by_label("a^-1").unwrap();
    println!("  word      oracle          explicit law");
    println!(
        "  {:8} {:.12}  {:.12}",
        "empty",
        pi.probs[chain.index[&BufferWord::empty()]],
        p_empty
    );
    for k in [1usize, 2, 3] {
        let wp = BufferWord(vec![a; k]);
        let wm = BufferWord(vec![ai; k]);
        println!(
            "  {:8} {:.12}  {:.12}",
            pair.format_word(&wp),
            pi.probs[chain.index[&wp]],
            p_empty * 0.5 * rho1.powi(k as i32)
        );
        println!(
            "  {:8} {:.12}  {:.12}",
            pair.format_word(&wm),
            pi.probs[chain.index[&wm]],
            p_empty * 0.5 * rho2.powi(k as i32)
        );
    }
    println!("  (non-product law: departures are not Poisson under this boundary)");
}
