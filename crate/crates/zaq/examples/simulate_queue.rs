//! Event-driven simulation against the analytic product form: occupancy,
//! level decay, departure statistics, and seeded reproducibility.
//!
//! ```bash
//! cargo run --example simulate_queue
//! ```

use zaq::algebra::pairs;
use zaq::simulate::{
    departure_stats, departure_stats_for_class, empirical_vs_product_form, simulate_queue,
    SimConfig,
};
use zaq::traffic::SolveOptions;
use zaq::twisted::{solve_tte, StationaryLaw};
use zaq::ClassDistribution;

fn main() {
    let pair = pairs::z3_star_z3();
    let nu = ClassDistribution::uniform(&pair);
    let (lambda, mu) = (1.0, 1.0);

    let law = StationaryLaw::new(
        solve_tte(&pair, &nu, lambda, mu, &SolveOptions::default())
            .expect("solves")
            .remove(0),
    )
    .expect("ergodic");

    let mut cfg = SimConfig::new(lambda, mu, law.solution.r.clone(), 1_000_000);
    cfg.seed = 2024;
    println!(
        "running {} events with {} (seed {}, stream {})...",
        cfg.horizon_events,
        zaq::simulate::RNG_FAMILY,
        cfg.seed,
        cfg.stream
    );
    let report = simulate_queue(&pair, &nu, &cfg).expect("valid config");

    println!(
        "empty fraction: {:.6} (analytic 1 - rho = {:.6})",
        report.empty_fraction, law.normalizer
    );
    println!(
        "departure rate: {:.6} (analytic rho mu = {:.6})",
        report.departure_rate,
        law.departure_rate(mu)
    );
    println!("regeneration cycles (returns to empty): {}", report.returned_to_empty);

    println!("\nlevel occupancy vs (1-rho) rho^n:");
    for n in 0..5 {
        println!(
            "  level {n}: {:.6} vs {:.6}",
            report.level_occupancy.get(n).copied().unwrap_or(0.0),
            law.level_mass(n)
        );
    }

    let tv = empirical_vs_product_form(&pair, &report, &law, 4).unwrap();
    println!("total variation over words of length <= 4: {tv:.6}");

    let stats = departure_stats(&report).expect("enough departures");
    println!(
        "\npooled departures: rate {:.4}, inter-departure CV {:.4}, dispersion {:.4}",
        stats.rate, stats.cv, stats.dispersion
    );
    let a = pair.by_label("a").unwrap();
    let per_class = departure_stats_for_class(&report, a).expect("enough departures");
    println!(
        "class-a departures: rate {:.4}, CV {:.4}, dispersion {:.4} (need not be Poisson)",
        per_class.rate, per_class.cv, per_class.dispersion
    );

    let again = simulate_queue(&pair, &nu, &cfg).expect("valid config");
    println!(
        "\nsame seed reproduces the report bit-for-bit: {}",
        again == report
    );
}
