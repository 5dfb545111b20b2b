//! Acceptance suite: every criterion runs at its stated tolerance and prints
//! one PASS line (run with `--nocapture` to see them).

use std::path::{Path, PathBuf};
use std::time::Instant;

use zaq::algebra::{pairs, BufferWord, GeneratorId};
use zaq::cli;
use zaq::model::ModelFile;
use zaq::oracle;
use zaq::qbd;
use zaq::simulate::{self, SimConfig};
use zaq::traffic::{self, SolveOptions};
use zaq::twisted::{self, StationaryLaw};
use zaq::ClassDistribution;

fn models_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("models")
}

fn z3z3_nu(pair: &zaq::PairSpec) -> ClassDistribution {
    ClassDistribution::uniform(pair)
}

#[test]
fn acceptance_1_mm1_reduction() {
    let pair = pairs::free_monoid("a");
    let nu = ClassDistribution::uniform(&pair);
    let (lambda, mu) = (1.0, 2.0);

    // Analytic: the load is exactly 1/2 and pi(n) = 0.5^(n+1).
    let sols = twisted::solve_tte(&pair, &nu, lambda, mu, &SolveOptions::default()).unwrap();
    assert_eq!(sols.len(), 1);
    let law = StationaryLaw::new(sols[0].clone()).unwrap();
    assert!((law.rho() - 0.5).abs() < 1e-15, "rho = {}", law.rho());
    let a = pair.by_label("a").unwrap();
    for n in 0..30usize {
        let w = BufferWord(vec![a; n]);
        let p = law.stationary_probability(&pair, &w).unwrap();
        assert!(
            (p - 0.5f64.powi(n as i32 + 1)).abs() <= f64::EPSILON,
            "pi({n}) = {p}"
        );
    }

    // Oracle at truncation 20.
    let chain = oracle::truncated_generator(&pair, &nu, lambda, mu, &law.solution.r, 20).unwrap();
    let pi = oracle::solve_stationary(&chain).unwrap();
    let report = oracle::compare(&chain, &pi, &pair, &law).unwrap();
    assert!(report.tv < 1e-5, "oracle TV = {}", report.tv);

    // Simulation: 1e6 events inside 10 seconds, empty fraction 0.5 +- 0.01.
    let start = Instant::now();
    let mut cfg = SimConfig::new(lambda, mu, law.solution.r.clone(), 1_000_000);
    cfg.seed = 42;
    let sim = simulate::simulate_queue(&pair, &nu, &cfg).unwrap();
    let elapsed = start.elapsed();
    assert!(
        (sim.empty_fraction - 0.5).abs() < 0.01,
        "empty fraction {}",
        sim.empty_fraction
    );
    assert!(elapsed.as_secs_f64() < 10.0, "simulation took {elapsed:?}");
    println!(
        "acceptance 1 PASS: M/M/1 reduction (rho exactly 1/2, oracle TV {:.2e}, \
         sim empty fraction {:.4} in {elapsed:?})",
        report.tv, sim.empty_fraction
    );
}

#[test]
fn acceptance_2_z3z3_closed_forms() {
    let pair = pairs::z3_star_z3();
    let nu = z3z3_nu(&pair);
    let (lambda, mu, p) = (1.0f64, 1.0f64, 0.25f64);

    // Closed forms evaluated at p = 1/4, lambda = mu = 1.
    let gamma_closed = -0.25 + (16.0 * p * p - 8.0 * p + 5.0).sqrt() / 4.0;
    let rho_closed = {
        let num = 2.0 * (4.0 * lambda * lambda * p * p - 2.0 * lambda * lambda * p
            + lambda * mu
            + lambda * lambda);
        let den = 4.0 * lambda * lambda * p * p - 2.0 * lambda * lambda * p
            + 4.0 * lambda * mu
            + lambda * lambda
            + 4.0 * mu * mu;
        num / den
    };
    let te = &traffic::solve_te(&pair, &nu, &SolveOptions::default()).unwrap()[0];
    let gamma = traffic::drift(&pair, &nu, te).unwrap();
    assert!((gamma - gamma_closed).abs() < 1e-10, "gamma = {gamma}");
    let sols = twisted::solve_tte(&pair, &nu, lambda, mu, &SolveOptions::default()).unwrap();
    assert_eq!(sols.len(), 1);
    let tte = &sols[0];
    assert!((tte.rho - rho_closed).abs() < 1e-10, "rho = {}", tte.rho);
    for &ri in &tte.r {
        assert!((ri - 0.25).abs() < 1e-10, "r entry {ri}");
    }

    // Global balance annihilates the product form.
    let balance =
        twisted::balance_residual(&pair, &nu, lambda, mu, tte.rho, &tte.r, 6).unwrap();
    assert!(balance < 1e-10, "balance residual {balance}");

    // Oracle at truncation 8: TV below rho^7 + 1e-6.
    let law = StationaryLaw::new(tte.clone()).unwrap();
    let chain = oracle::truncated_generator(&pair, &nu, lambda, mu, &tte.r, 8).unwrap();
    let pi = oracle::solve_stationary(&chain).unwrap();
    let report = oracle::compare(&chain, &pi, &pair, &law).unwrap();
    assert!(
        report.tv < rho_closed.powi(7) + 1e-6,
        "oracle TV {} vs bound {}",
        report.tv,
        rho_closed.powi(7) + 1e-6
    );

    // Simulation: 1e7 events inside 2 minutes.
    let start = Instant::now();
    let mut cfg = SimConfig::new(lambda, mu, tte.r.clone(), 10_000_000);
    cfg.seed = 42;
    let sim = simulate::simulate_queue(&pair, &nu, &cfg).unwrap();
    let elapsed = start.elapsed();
    assert!(
        (sim.departure_rate - 0.4).abs() < 0.01,
        "departure rate {}",
        sim.departure_rate
    );
    let cv = sim.interdeparture_cv.expect("enough departures");
    assert!((cv - 1.0).abs() < 0.02, "interdeparture CV {cv}");
    assert!(elapsed.as_secs_f64() < 120.0, "simulation took {elapsed:?}");
    // Level occupancy decays geometrically at ratio rho.
    for n in 0..=4usize {
        let ratio = sim.level_occupancy[n + 1] / sim.level_occupancy[n];
        assert!((ratio - 0.4).abs() < 0.02, "level {n} ratio {ratio}");
    }
    println!(
        "acceptance 2 PASS: Z/3Z*Z/3Z closed forms (gamma {gamma:.12}, rho {:.12}, \
         balance {balance:.2e}, oracle TV {:.2e}, sim rate {:.4}, CV {cv:.4} in {elapsed:?})",
        tte.rho, report.tv, sim.departure_rate
    );
}

#[test]
fn acceptance_3_g_queue() {
    let pair = pairs::free_group_z();
    let (lambda, mu) = (1.0, 1.0);
    let a = pair.by_label("a").unwrap();
    let ai = pair.by_label("a^-1").unwrap();

    // Exactly the two boundary solutions of the asymmetric case.
    let nu = ClassDistribution::from_labels(&pair, &[("a", 0.6), ("a^-1", 0.4)]).unwrap();
    let sols = twisted::solve_tte(&pair, &nu, lambda, mu, &SolveOptions::default()).unwrap();
    assert_eq!(sols.len(), 2, "expected exactly the two boundary solutions");
    let hi = &sols[0];
    let lo = &sols[1];
    assert!((hi.rho - 3.0 / 7.0).abs() < 1e-9);
    assert!((hi.r_of(a) - 1.0).abs() < 1e-9 && hi.r_of(ai).abs() < 1e-9);
    assert!((lo.rho - 0.25).abs() < 1e-9);
    assert!((lo.r_of(ai) - 1.0).abs() < 1e-9 && lo.r_of(a).abs() < 1e-9);

    // Interior boundary vector: the oracle reproduces the explicit
    // two-rate law within 1e-6 at truncation 25.
    let chain = oracle::truncated_generator(&pair, &nu, lambda, mu, &[0.5, 0.5], 25).unwrap();
    let pi = oracle::solve_stationary(&chain).unwrap();
    let (rho1, rho2): (f64, f64) = (3.0 / 7.0, 0.25);
    let p_empty = 1.0 / (1.0 + 0.5 * rho1 / (1.0 - rho1) + 0.5 * rho2 / (1.0 - rho2));
    let mut worst: f64 = 0.0;
    for (i, w) in chain.states.iter().enumerate() {
        if w.len() > 23 {
            continue;
        }
        let expect = if w.is_empty() {
            p_empty
        } else if w.0[0] == a {
            p_empty * 0.5 * rho1.powi(w.len() as i32)
        } else {
            p_empty * 0.5 * rho2.powi(w.len() as i32)
        };
        worst = worst.max((pi.probs[i] - expect).abs());
    }
    assert!(worst < 1e-6, "explicit-law deviation {worst}");

    // Symmetric case: rho = lambda/(2mu+lambda) balances for random
    // boundary vectors drawn from a fixed seed.
    let nu_sym = ClassDistribution::from_labels(&pair, &[("a", 0.5), ("a^-1", 0.5)]).unwrap();
    let rho_sym = lambda / (2.0 * mu + lambda);
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(12345);
    for trial in 0..5 {
        let u: f64 = rng.random();
        let r = vec![u, 1.0 - u];
        let res =
            twisted::balance_residual(&pair, &nu_sym, lambda, mu, rho_sym, &r, 8).unwrap();
        assert!(res < 1e-10, "trial {trial}: residual {res} at r(a) = {u}");
    }
    println!(
        "acceptance 3 PASS: G-queue (two boundary solutions, interior law deviation {worst:.2e}, \
         symmetric continuum balances)"
    );
}

#[test]
fn acceptance_4_bicyclic() {
    let pair = pairs::bicyclic();
    let (lambda, mu) = (1.0, 1.0);
    let a = pair.by_label("a").unwrap();
    let b = pair.by_label("b").unwrap();

    // p = 0.4: single solution (3/7, (0,1)).
    let nu = ClassDistribution::from_labels(&pair, &[("a", 0.4), ("b", 0.6)]).unwrap();
    let sols = twisted::solve_tte(&pair, &nu, lambda, mu, &SolveOptions::default()).unwrap();
    assert_eq!(sols.len(), 1);
    assert!((sols[0].rho - 3.0 / 7.0).abs() < 1e-9);
    assert!(sols[0].r_of(a).abs() < 1e-9 && (sols[0].r_of(b) - 1.0).abs() < 1e-9);
    let te = traffic::solve_te(&pair, &nu, &SolveOptions::default()).unwrap();
    let gamma: f64 = te
        .iter()
        .map(|s| traffic::drift(&pair, &nu, s).unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    assert!((gamma - 0.2).abs() < 1e-12, "gamma = {gamma} at p = 0.4");

    // p = 0.75: the boundary solution plus the interior one.
    let nu = ClassDistribution::from_labels(&pair, &[("a", 0.75), ("b", 0.25)]).unwrap();
    let sols = twisted::solve_tte(&pair, &nu, lambda, mu, &SolveOptions::default()).unwrap();
    assert_eq!(sols.len(), 2);
    assert!((sols[0].rho - 0.6).abs() < 1e-9);
    assert!((sols[0].r_of(a) - 2.0 / 3.0).abs() < 1e-9);
    assert!((sols[0].r_of(b) - 1.0 / 3.0).abs() < 1e-9);
    assert!((sols[1].rho - 1.0 / 7.0).abs() < 1e-9);
    assert!((sols[1].r_of(b) - 1.0).abs() < 1e-9);
    let te = traffic::solve_te(&pair, &nu, &SolveOptions::default()).unwrap();
    let gamma: f64 = te
        .iter()
        .map(|s| traffic::drift(&pair, &nu, s).unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    assert!((gamma - 0.5).abs() < 1e-9, "gamma = {gamma} at p = 0.75");
    println!(
        "acceptance 4 PASS: bicyclic branches (single solution at p = 0.4, both at p = 0.75, \
         drift |1-2p| up to roundoff)"
    );
}

#[test]
fn acceptance_5_bicyclic_star_free() {
    let pair = pairs::bicyclic_star_free();
    let (lambda, mu) = (1.0, 1.0);
    let idx = |l: &str| pair.by_label(l).unwrap();

    // Closed forms at p = q = 0.4, nu(c) = 0.2.
    let nu = ClassDistribution::from_labels(&pair, &[("a", 0.4), ("b", 0.4), ("c", 0.2)])
        .unwrap();
    let te_all = traffic::solve_te(&pair, &nu, &SolveOptions::default()).unwrap();
    let te = te_all
        .iter()
        .find(|s| s.r_hat.iter().all(|&r| r > 1e-6))
        .expect("interior traffic solution");
    assert!((te.r(idx("a")) - 0.25).abs() < 1e-9);
    assert!((te.r(idx("b")) - 0.5).abs() < 1e-9);
    assert!((te.r(idx("c")) - 0.25).abs() < 1e-9);
    let gamma = traffic::drift(&pair, &nu, te).unwrap();
    assert!((gamma - 0.6).abs() < 1e-9, "gamma = {gamma}");
    let sols = twisted::solve_tte(&pair, &nu, lambda, mu, &SolveOptions::default()).unwrap();
    let interior = sols
        .iter()
        .find(|s| s.r.iter().all(|&r| r > 1e-6))
        .expect("interior solution");
    assert!((interior.rho - 2.0 / 3.0).abs() < 1e-9, "rho = {}", interior.rho);

    // Vanishing free-letter mass with p > 1/2: the load approaches the
    // larger bicyclic branch monotonically (to 4 significant digits).
    let target = 0.75 / 1.25; // the larger branch at p = 0.75
    let mut rhos = Vec::new();
    for eps in [0.05, 0.02, 0.01, 0.005] {
        let p = 0.75 * (1.0 - eps);
        let q = 0.25 * (1.0 - eps);
        let nu = ClassDistribution::from_labels(&pair, &[("a", p), ("b", q), ("c", eps)])
            .unwrap();
        let sols =
            twisted::solve_tte(&pair, &nu, lambda, mu, &SolveOptions::default()).unwrap();
        let interior = sols
            .iter()
            .find(|s| s.r.iter().all(|&r| r > 1e-6))
            .expect("interior solution");
        rhos.push(interior.rho);
    }
    let round4 = |x: f64| {
        let mag = x.abs().log10().floor();
        let scale = 10f64.powf(3.0 - mag);
        (x * scale).round() / scale
    };
    for w in rhos.windows(2) {
        assert!(
            round4(w[0]) > round4(w[1]),
            "loads not monotone to 4 significant digits: {rhos:?}"
        );
        assert!(
            (w[1] - target).abs() < (w[0] - target).abs(),
            "distance to the selected branch not shrinking: {rhos:?}"
        );
    }
    assert!(rhos.last().unwrap() > &target, "approach from above expected");
    println!(
        "acceptance 5 PASS: bicyclic * free letter (closed forms met, \
         rho(eps) = {rhos:?} decreasing to {target})"
    );
}

#[test]
fn acceptance_6_qbd_consistency() {
    // Example 1: M/M/1.
    let pair = pairs::free_monoid("a");
    let nu = ClassDistribution::uniform(&pair);
    let sols = twisted::solve_tte(&pair, &nu, 1.0, 2.0, &SolveOptions::default()).unwrap();
    let tte = &sols[0];
    let blocks = qbd::build_blocks(&pair, &nu, 1.0, 2.0, &tte.r).unwrap();
    let r = qbd::solve_r(&blocks, 1e-12, 1_000_000).unwrap();
    assert!((r.spectral_radius() - tte.rho).abs() < 1e-8);
    let (y, x) = qbd::boundary_solve(&blocks, &r).unwrap();
    assert!((y - (1.0 - tte.rho)).abs() < 1e-8);
    assert!((x[0] - tte.rho * (1.0 - tte.rho) * tte.r[0]).abs() < 1e-8);

    // Example 2: Z/3Z * Z/3Z.
    let pair = pairs::z3_star_z3();
    let nu = z3z3_nu(&pair);
    let sols = twisted::solve_tte(&pair, &nu, 1.0, 1.0, &SolveOptions::default()).unwrap();
    let tte = &sols[0];
    let blocks = qbd::build_blocks(&pair, &nu, 1.0, 1.0, &tte.r).unwrap();
    let r = qbd::solve_r(&blocks, 1e-12, 1_000_000).unwrap();
    let sp = r.spectral_radius();
    assert!((sp - tte.rho).abs() < 1e-8, "spectral radius {sp} vs rho {}", tte.rho);
    let (y, x) = qbd::boundary_solve(&blocks, &r).unwrap();
    assert!((y - (1.0 - tte.rho)).abs() < 1e-8);
    for g in pair.generators() {
        let expect = tte.rho * (1.0 - tte.rho) * tte.r[g.index()];
        assert!((x[g.index()] - expect).abs() < 1e-8);
    }
    let dev = qbd::product_form_check(&r, y, &x, tte);
    assert!(dev.max() < 1e-8, "{dev:?}");
    println!(
        "acceptance 6 PASS: QBD consistency (spectral radius = rho, y = 1-rho, \
         x = rho(1-rho)r within 1e-8 on both examples)"
    );
}

#[test]
fn acceptance_7_property_suites() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(777);

    // Functional identity A + B + C = 1 on 1000 random simplex points per pair.
    let all_pairs = [
        pairs::z3_star_z3(),
        pairs::free_monoid("a"),
        pairs::free_group_z(),
        pairs::bicyclic(),
        pairs::bicyclic_star_free(),
        pairs::n_star_z_star_b(),
    ];
    for pair in &all_pairs {
        let n = pair.len();
        let nu_raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
        let total: f64 = nu_raw.iter().sum();
        let nu =
            ClassDistribution::new(pair, nu_raw.iter().map(|v| v / total).collect()).unwrap();
        for _ in 0..1000 {
            let raw: Vec<f64> = (0..n)
                .map(|_| -(1.0f64 - rng.random::<f64>()).ln())
                .collect();
            let total: f64 = raw.iter().sum();
            let x: Vec<f64> = raw.iter().map(|v| v / total).collect();
            let f = traffic::functionals(pair, &nu, &x);
            assert!(
                (f.sum() - 1.0).abs() < 1e-12,
                "functional identity defect {} on {} letters",
                (f.sum() - 1.0).abs(),
                n
            );
        }
    }

    // Plain-triple uniqueness across 100 random starts, for both systems.
    let opts = SolveOptions {
        random_starts: 100,
        ..SolveOptions::default()
    };
    let plain_cases: Vec<(zaq::PairSpec, ClassDistribution)> = vec![
        {
            let p = pairs::z3_star_z3();
            let nu = ClassDistribution::from_labels(
                &p,
                &[("a", 0.15), ("b", 0.15), ("a2", 0.35), ("b2", 0.35)],
            )
            .unwrap();
            (p, nu)
        },
        {
            let p = pairs::n_star_b();
            let nu = ClassDistribution::from_labels(&p, &[("a", 0.3), ("b", 0.7)]).unwrap();
            (p, nu)
        },
        {
            let p = pairs::n_star_z_star_b();
            let nu = ClassDistribution::from_labels(
                &p,
                &[("a", 0.3), ("b", 0.2), ("b^-1", 0.2), ("c", 0.3)],
            )
            .unwrap();
            (p, nu)
        },
    ];
    for (pair, nu) in &plain_cases {
        let te = traffic::solve_te(pair, nu, &opts).unwrap();
        assert_eq!(te.len(), 1, "traffic solutions on {} letters", pair.len());
        let gamma = traffic::drift(pair, nu, &te[0]).unwrap();
        // Pick a stable service rate and check twisted uniqueness too.
        let mu = 2.0 * gamma.max(0.1);
        let tte = twisted::solve_tte(pair, nu, 1.0, mu, &opts).unwrap();
        assert_eq!(tte.len(), 1, "twisted solutions on {} letters", pair.len());
    }

    // Arrival/service streams keep normal form over 1e5 events.
    let mut events_done = 0u64;
    for pair in &all_pairs {
        let n = pair.len() as u32;
        let mut w = BufferWord::empty();
        for _ in 0..20_000 {
            if !w.is_empty() && rng.random::<f64>() < 0.45 {
                w = pair.serve(&w).unwrap();
            } else {
                let b = GeneratorId(rng.random_range(0..n));
                w = pair.arrive(&w, b);
            }
            events_done += 1;
            assert!(pair.is_normal(&w.0).unwrap());
        }
    }
    assert!(events_done >= 100_000);

    // Saturation inequality lambda gamma <= rho mu < mu on every stable
    // bundled model, for the selected stationary law.
    let mut stable_models = 0;
    for entry in std::fs::read_dir(models_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let m = ModelFile::load(&path).unwrap().build().unwrap();
        let analysis = cli::analyze(&m).unwrap();
        let Ok(law) = cli::select_law(&m, &analysis) else {
            continue;
        };
        stable_models += 1;
        let lg = m.lambda * analysis.gamma;
        let dep = law.departure_rate(m.mu);
        assert!(
            lg <= dep + 1e-12,
            "{}: lambda gamma = {lg} > departure rate {dep}",
            path.display()
        );
        assert!(dep < m.mu, "{}: departure rate {dep} >= mu", path.display());
    }
    assert!(stable_models >= 8, "expected the bundled models to be stable");

    // Transient regime: the buffer grows at rate lambda gamma - mu.
    let pair = pairs::z3_star_z3();
    let nu = z3z3_nu(&pair);
    let (lambda, mu) = (8.0, 1.0);
    let expected_growth = lambda * 0.25 - mu;
    let mut cfg = SimConfig::new(lambda, mu, vec![0.25; 4], 100_000);
    cfg.warmup_events = 0;
    cfg.seed = 99;
    let reports = simulate::simulate_replications(&pair, &nu, &cfg, 16, 4).unwrap();
    let growths: Vec<f64> = reports
        .iter()
        .map(|r| r.final_word_len as f64 / r.elapsed)
        .collect();
    let mean = growths.iter().sum::<f64>() / growths.len() as f64;
    let var = growths.iter().map(|g| (g - mean) * (g - mean)).sum::<f64>()
        / (growths.len() - 1) as f64;
    let se = (var / growths.len() as f64).sqrt();
    assert!(
        (mean - expected_growth).abs() < 3.0 * se + 1e-3,
        "growth {mean} +- {se} vs expected {expected_growth}"
    );
    println!(
        "acceptance 7 PASS: property suites (functional identity, plain uniqueness over 100 starts, \
         normal-form preservation over {events_done} events, saturation on {stable_models} models, \
         transient growth {mean:.3} +- {se:.3} vs {expected_growth})"
    );
}

/// The plotted figures reduce to two grids; emit them as CSV and spot-check
/// the closed-form points.
#[test]
fn acceptance_grids_csv() {
    let out = std::env::temp_dir().join("zaq-acceptance-grids");
    std::fs::create_dir_all(&out).unwrap();
    let pair = pairs::z3_star_z3();
    let opts = SolveOptions::default();

    let mut frontier = String::from("p,gamma,critical_lambda_over_mu\n");
    let mut surface = String::from("p,lambda_over_mu,rho\n");
    let mut checked = false;
    for i in 1..10 {
        let p = 0.05 * i as f64;
        let q = 0.5 - p;
        let nu = ClassDistribution::from_labels(
            &pair,
            &[("a", p), ("b", p), ("a2", q), ("b2", q)],
        )
        .unwrap();
        let te = &traffic::solve_te(&pair, &nu, &opts).unwrap()[0];
        let gamma = traffic::drift(&pair, &nu, te).unwrap();
        frontier.push_str(&format!("{p:.16e},{gamma:.16e},{:.16e}\n", 1.0 / gamma));
        for j in 1..=8 {
            let t = (1.0 / gamma).min(6.0) * j as f64 / 9.0;
            let rho = twisted::solve_tte(&pair, &nu, t, 1.0, &opts).unwrap()[0].rho;
            surface.push_str(&format!("{p:.16e},{t:.16e},{rho:.16e}\n"));
        }
        if (p - 0.25).abs() < 1e-12 {
            // Closed-form spot checks at the symmetric point.
            assert!((gamma - 0.25).abs() < 1e-10);
            assert!((1.0 / gamma - 4.0).abs() < 1e-9);
            let rho = twisted::solve_tte(&pair, &nu, 1.0, 1.0, &opts).unwrap()[0].rho;
            assert!((rho - 0.4).abs() < 1e-10);
            checked = true;
        }
    }
    assert!(checked);
    std::fs::write(out.join("stability_frontier.csv"), &frontier).unwrap();
    std::fs::write(out.join("load_surface.csv"), &surface).unwrap();
    assert!(frontier.lines().count() > 9 && surface.lines().count() > 70);
    println!(
        "acceptance grids PASS: frontier and load surface written to {} and spot-checked",
        out.display()
    );
}
