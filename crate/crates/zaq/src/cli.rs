//! Command-line front end.
//!
//! Five subcommands cover the pipeline: `analyze` (equations, drift,
//! stability, admissible solutions), `stationary` (product-form table),
//! `simulate` (event-driven runs with replications), `qbd` (matrix-geometric
//! solve), and `validate` (truncated-generator comparison). Exit codes:
//! 0 success, 1 model/parse problem, 2 solver failure, 3 regime mismatch.

use crate::algebra::{ExcludedCase, PairSpec};
use crate::model::{ModelFile, TriplePlusRates};
use crate::simulate::{self, SimConfig};
use crate::traffic::{self, TeSolution};
use crate::twisted::{self, StabilityClass, StationaryLaw, TteSolution};
use crate::{oracle, qbd, Error, Result};
use clap::{Parser, Subcommand};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Environment variable setting the default worker count for replications.
pub const THREADS_ENV: &str = "ZAQ_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "zaq",
    about = "Zero-automatic queue analyzer",
    long_about = "Analyzes zero-automatic queues: buffering algebra, traffic equations, \
                  product-form stationary laws, QBD solves, simulation, and brute-force validation."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the traffic and twisted traffic equations, classify stability.
    Analyze {
        model: PathBuf,
        /// Write the admissible solutions as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Print the normalized model document and exit.
        #[arg(long)]
        dump_normalized: bool,
    },
    /// Tabulate the product-form stationary law over short words.
    Stationary {
        model: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the event-driven simulator and compare against the analytic law.
    Simulate {
        model: PathBuf,
        #[arg(long)]
        events: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Matrix-geometric solve of the lumped level/phase process.
    Qbd {
        model: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Compare the analytic law against the truncated-generator oracle.
    Validate {
        model: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// Runs a parsed command line, returning the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Analyze {
            model,
            csv,
            dump_normalized,
        } => cmd_analyze(&model, csv.as_deref(), dump_normalized),
        Command::Stationary {
            model,
            max_len,
            csv,
        } => cmd_stationary(&model, max_len, csv.as_deref()),
        Command::Simulate {
            model,
            events,
            seed,
            reps,
            csv,
        } => cmd_simulate(&model, events, seed, reps, csv.as_deref()),
        Command::Qbd { model, tol } => cmd_qbd(&model, tol),
        Command::Validate {
            model,
            max_len,
            csv,
        } => cmd_validate(&model, max_len, csv.as_deref()),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::DuplicateLabel(_)
        | Error::EmptyFactorList
        | Error::EmptyFactor(_)
        | Error::MissingUnit(_)
        | Error::NonAssociative { .. }
        | Error::NeighborMismatch { .. }
        | Error::TripleInconsistent { .. }
        | Error::UnknownLetter(_)
        | Error::BadDistribution(_)
        | Error::NonPositiveRate(_) => 1,
        Error::NotErgodic { .. } => 3,
        _ => 2,
    }
}

/// Everything the analyze pipeline produces.
pub struct Analysis {
    pub te: Vec<TeSolution>,
    pub drifts: Vec<f64>,
    /// Pair-level drift: the maximum over traffic solutions (they coincide
    /// for plain triples).
    pub gamma: f64,
    pub verdict: twisted::StabilityVerdict,
    pub tte: Vec<TteSolution>,
}

/// Solves both equation systems and classifies stability.
pub fn analyze(m: &TriplePlusRates) -> Result<Analysis> {
    let te = traffic::solve_te(&m.pair, &m.nu, &m.solver)?;
    let drifts: Vec<f64> = te
        .iter()
        .map(|s| traffic::drift(&m.pair, &m.nu, s))
        .collect::<Result<_>>()?;
    let gamma = drifts.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let verdict = twisted::classify(m.lambda, m.mu, gamma, 1e-9);
    let tte = twisted::solve_tte(&m.pair, &m.nu, m.lambda, m.mu, &m.solver)?;
    Ok(Analysis {
        te,
        drifts,
        gamma,
        verdict,
        tte,
    })
}

/// Picks the stationary law to report: the model's boundary vector when it is
/// an admissible solution, otherwise the largest-load ergodic solution.
pub fn select_law(m: &TriplePlusRates, analysis: &Analysis) -> Result<StationaryLaw> {
    if let Some(r) = &m.r_boundary {
        let candidate = TteSolution::from_boundary(&m.pair, &m.nu, m.lambda, m.mu, r.clone());
        if candidate.residual > m.solver.residual_tol.max(1e-8) {
            return Err(Error::Inconsistent {
                what: "r_boundary is not an admissible solution; equations defect",
                delta: candidate.residual,
            });
        }
        return StationaryLaw::new(candidate);
    }
    let best = analysis
        .tte
        .iter()
        .filter(|s| s.rho < 1.0)
        .max_by(|a, b| a.rho.partial_cmp(&b.rho).unwrap_or(std::cmp::Ordering::Equal))
        .ok_or(Error::NotErgodic {
            rho: analysis.tte.first().map_or(f64::NAN, |s| s.rho),
        })?;
    StationaryLaw::new(best.clone())
}

fn load(path: &Path) -> Result<TriplePlusRates> {
    ModelFile::load(path)?.build()
}

/// 17 significant digits, the fixed CSV numeric format.
fn csv_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_csv(path: &Path, header: &str, rows: &[String]) -> Result<()> {
    let mut out = String::with_capacity(rows.len() * 64 + header.len() + 1);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(row);
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn describe_pair(pair: &PairSpec) {
    println!(
        "pair: |sigma| = {} ({}), plain: {}",
        pair.len(),
        pair.labels().join(", "),
        if pair.is_plain() { "yes" } else { "no" }
    );
    match pair.excluded_case() {
        Some(ExcludedCase::IsomorphicToZ) => println!(
            "note: the monoid is Z, excluded from the plain-triple theorems; \
             analysis proceeds via the general path"
        ),
        Some(ExcludedCase::IsomorphicToZ2StarZ2) => println!(
            "note: the monoid is Z/2Z * Z/2Z, excluded from the plain-triple theorems; \
             analysis proceeds via the general path"
        ),
        None => {}
    }
    if !pair.successor_strongly_connected() {
        println!("note: successor graph is not strongly connected");
    }
}

fn cmd_analyze(path: &Path, csv: Option<&Path>, dump_normalized: bool) -> Result<()> {
    let model_file = ModelFile::load(path)?;
    if dump_normalized {
        println!("{}", model_file.normalized()?.to_json());
        return Ok(());
    }
    let m = model_file.build()?;
    describe_pair(&m.pair);
    if !m.nu.support_generates(&m.pair) {
        println!("warning: the support of nu does not generate the whole alphabet");
    }
    let analysis = analyze(&m)?;
    println!("traffic equation solutions:");
    for (i, (s, g)) in analysis.te.iter().zip(&analysis.drifts).enumerate() {
        let entries: Vec<String> = m
            .pair
            .generators()
            .map(|a| format!("{}={:.12}", m.pair.label(a), s.r(a)))
            .collect();
        println!(
            "  #{i}: r_hat = [{}], residual {:.3e}, drift {:.12}",
            entries.join(", "),
            s.residual,
            g
        );
    }
    println!(
        "drift gamma = {:.12}; lambda*gamma = {:.12} vs mu = {:.12}",
        analysis.gamma,
        m.lambda * analysis.gamma,
        m.mu
    );
    let verdict = match analysis.verdict.class {
        StabilityClass::Ergodic => "ergodic",
        StabilityClass::NullRecurrent => "null recurrent",
        StabilityClass::Transient => "transient",
    };
    println!(
        "stability: {verdict} (margin lambda*gamma - mu = {:.12})",
        analysis.verdict.margin
    );
    println!("admissible solutions of the twisted equations:");
    for (i, s) in analysis.tte.iter().enumerate() {
        let entries: Vec<String> = m
            .pair
            .generators()
            .map(|a| format!("{}={:.12}", m.pair.label(a), s.r_of(a)))
            .collect();
        let qs: Vec<String> = m
            .pair
            .generators()
            .map(|a| match s.q[a.index()] {
                Some(q) => format!("{}={q:.12}", m.pair.label(a)),
                None => format!("{}=-", m.pair.label(a)),
            })
            .collect();
        println!(
            "  #{i}: rho = {:.12}, departure rate rho*mu = {:.12}, residual {:.3e}",
            s.rho,
            s.rho * m.mu,
            s.residual
        );
        println!("      r = [{}]", entries.join(", "));
        println!("      q = [{}]", qs.join(", "));
    }
    if m.pair.is_plain() {
        println!("uniqueness: plain triple, the admissible solution is unique in the stable regime");
    } else {
        println!(
            "uniqueness: general pair, {} solution(s) found (list is not guaranteed complete)",
            analysis.tte.len()
        );
    }
    if let Some(csv_path) = csv {
        let mut header = String::from("solution,rho,departure_rate,residual");
        for a in m.pair.generators() {
            header.push_str(&format!(",r_{}", m.pair.label(a)));
        }
        for a in m.pair.generators() {
            header.push_str(&format!(",q_{}", m.pair.label(a)));
        }
        let rows: Vec<String> = analysis
            .tte
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut row = format!(
                    "{i},{},{},{}",
                    csv_num(s.rho),
                    csv_num(s.rho * m.mu),
                    csv_num(s.residual)
                );
                for a in m.pair.generators() {
                    row.push_str(&format!(",{}", csv_num(s.r_of(a))));
                }
                for a in m.pair.generators() {
                    match s.q[a.index()] {
                        Some(q) => row.push_str(&format!(",{}", csv_num(q))),
                        None => row.push(','),
                    }
                }
                row
            })
            .collect();
        write_csv(csv_path, &header, &rows)?;
        println!("wrote {}", csv_path.display());
    }
    Ok(())
}

fn cmd_stationary(path: &Path, max_len: usize, csv: Option<&Path>) -> Result<()> {
    let m = load(path)?;
    let analysis = analyze(&m)?;
    let law = select_law(&m, &analysis)?;
    let words = oracle::enumerate_words(&m.pair, max_len, max_len.max(oracle::DEFAULT_LENGTH_CAP))?;
    println!(
        "stationary law: rho = {:.12}, P(empty) = {:.12}",
        law.rho(),
        law.normalizer
    );
    let mut cumulative = 0.0;
    let mut rows = Vec::with_capacity(words.len());
    for w in &words {
        let p = law.stationary_probability(&m.pair, w)?;
        cumulative += p;
        rows.push(format!(
            "{},{},{},{}",
            m.pair.format_word(w),
            w.len(),
            csv_num(p),
            csv_num(cumulative)
        ));
    }
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    writeln!(lock, "word,length,probability,cumulative").ok();
    for row in rows.iter().take(24) {
        writeln!(lock, "{row}").ok();
    }
    if rows.len() > 24 {
        writeln!(lock, "... ({} more rows)", rows.len() - 24).ok();
    }
    writeln!(
        lock,
        "mass up to length {max_len}: {:.12} (analytic: {:.12})",
        cumulative,
        1.0 - law.rho().powi(max_len as i32 + 1)
    )
    .ok();
    if let Some(csv_path) = csv {
        write_csv(csv_path, "word,length,probability,cumulative", &rows)?;
        println!("wrote {}", csv_path.display());
    }
    Ok(())
}

fn worker_threads(reps: usize) -> usize {
    let from_env = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    let hw = std::thread::available_parallelism().map_or(1, |n| n.get());
    from_env.unwrap_or(hw).clamp(1, reps.max(1))
}

fn cmd_simulate(
    path: &Path,
    events: Option<u64>,
    seed: Option<u64>,
    reps: Option<usize>,
    csv: Option<&Path>,
) -> Result<()> {
    let m = load(path)?;
    let analysis = analyze(&m)?;
    let law = select_law(&m, &analysis).ok();
    // The queue needs a boundary vector even in regimes without an analytic
    // law; fall back to uniform.
    let r_boundary = m
        .r_boundary
        .clone()
        .or_else(|| law.as_ref().map(|l| l.solution.r.clone()))
        .unwrap_or_else(|| vec![1.0 / m.pair.len() as f64; m.pair.len()]);
    let mut cfg = SimConfig::new(
        m.lambda,
        m.mu,
        r_boundary,
        events.unwrap_or(m.sim.events),
    );
    if let Some(w) = m.sim.warmup {
        cfg.warmup_events = w;
    }
    cfg.seed = seed.unwrap_or(m.sim.seed);
    cfg.max_tracked_len = m.sim.max_tracked_len;
    let reps = reps.unwrap_or(m.sim.reps).max(1);
    let threads = worker_threads(reps);
    println!(
        "simulating {} events x {} replication(s), seed {} ({}, {} worker(s))",
        cfg.horizon_events, reps, cfg.seed, simulate::RNG_FAMILY, threads
    );
    let reports = simulate::simulate_replications(&m.pair, &m.nu, &cfg, reps, threads)?;
    println!("rep,stream,elapsed,empty_fraction,departure_rate,interdeparture_cv,returns_to_empty");
    let mut rows = Vec::with_capacity(reports.len());
    for (i, r) in reports.iter().enumerate() {
        let cv = r.interdeparture_cv.unwrap_or(f64::NAN);
        let tv = law
            .as_ref()
            .map(|l| {
                simulate::empirical_vs_product_form(
                    &m.pair,
                    r,
                    l,
                    r.max_tracked_len.min(4),
                )
            })
            .transpose()?;
        println!(
            "{i},{},{:.3},{:.6},{:.6},{:.4},{}",
            r.stream, r.elapsed, r.empty_fraction, r.departure_rate, cv, r.returned_to_empty
        );
        let mut row = format!(
            "{i},{},{},{},{},{},{},{}",
            r.seed,
            r.stream,
            r.events,
            csv_num(r.elapsed),
            csv_num(r.empty_fraction),
            csv_num(r.departure_rate),
            csv_num(cv)
        );
        match tv {
            Some(v) => row.push_str(&format!(",{}", csv_num(v))),
            None => row.push(','),
        }
        rows.push(row);
    }
    let pooled = simulate::pool_reports(&reports);
    println!(
        "pooled: empty fraction {:.6} +- {:.6}, departure rate {:.6} +- {:.6}",
        pooled.empty_fraction_mean,
        pooled.empty_fraction_se,
        pooled.departure_rate_mean,
        pooled.departure_rate_se
    );
    match (&law, reports.first()) {
        (Some(l), Some(first)) => {
            let tv = simulate::empirical_vs_product_form(
                &m.pair,
                first,
                l,
                first.max_tracked_len.min(4),
            )?;
            println!(
                "analytic comparison (rep 0): empty fraction {:.6} vs 1-rho = {:.6}; \
                 departure rate {:.6} vs rho*mu = {:.6}; TV over short words {:.6}",
                first.empty_fraction,
                l.normalizer,
                first.departure_rate,
                l.departure_rate(m.mu),
                tv
            );
        }
        _ => println!("no ergodic analytic law available; skipped comparison"),
    }
    if let Some(csv_path) = csv {
        write_csv(
            csv_path,
            "rep,seed,stream,events,elapsed,empty_fraction,departure_rate,interdeparture_cv,tv_vs_analytic",
            &rows,
        )?;
        println!("wrote {}", csv_path.display());
        // Companion files: the word/level histograms of replication 0 with
        // analytic comparison columns, and departure statistics per rep.
        let first = &reports[0];
        let mut hist_rows = Vec::new();
        for (w, frac) in &first.word_occupancy {
            let analytic = law
                .as_ref()
                .map(|l| l.stationary_probability(&m.pair, w))
                .transpose()?;
            let mut row = format!(
                "{},{},{}",
                m.pair.format_word(w),
                w.len(),
                csv_num(*frac)
            );
            match analytic {
                Some(a) => {
                    row.push_str(&format!(",{},{}", csv_num(a), csv_num((frac - a).abs())))
                }
                None => row.push_str(",,"),
            }
            hist_rows.push(row);
        }
        let hist_path = companion(csv_path, "histogram");
        write_csv(
            &hist_path,
            "word,length,empirical_fraction,analytic_pi,abs_diff",
            &hist_rows,
        )?;
        println!("wrote {}", hist_path.display());
        let mut dep_rows = Vec::new();
        for (i, r) in reports.iter().enumerate() {
            match simulate::departure_stats(r) {
                Ok(d) => dep_rows.push(format!(
                    "{i},{},{},{},{}",
                    d.count,
                    csv_num(d.rate),
                    csv_num(d.cv),
                    csv_num(d.dispersion)
                )),
                Err(_) => dep_rows.push(format!("{i},{},,,", r.departures)),
            }
        }
        let dep_path = companion(csv_path, "departures");
        write_csv(&dep_path, "rep,departures,rate,cv,dispersion", &dep_rows)?;
        println!("wrote {}", dep_path.display());
    }
    Ok(())
}

/// `out.csv` -> `out_histogram.csv` and friends.
fn companion(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let mut name = format!("{stem}_{tag}.csv");
    if let Some(parent) = path.parent() {
        let mut p = parent.to_path_buf();
        p.push(std::mem::take(&mut name));
        return p;
    }
    PathBuf::from(name)
}

fn cmd_qbd(path: &Path, tol: f64) -> Result<()> {
    let m = load(path)?;
    let analysis = analyze(&m)?;
    let law = select_law(&m, &analysis)?;
    let tte = &law.solution;
    let blocks = qbd::build_blocks(&m.pair, &m.nu, m.lambda, m.mu, &tte.r)?;
    let r = qbd::solve_r(&blocks, tol, 1_000_000)?;
    let (y, x) = qbd::boundary_solve(&blocks, &r)?;
    println!(
        "R matrix ({} iterations, defect {:.3e}):",
        r.iterations, r.defect
    );
    for i in 0..m.pair.len() {
        let row: Vec<String> = (0..m.pair.len())
            .map(|j| format!("{:.12}", r.r[(i, j)]))
            .collect();
        println!("  [{}]", row.join(", "));
    }
    println!(
        "spectral radius {:.12} (rho = {:.12})",
        r.spectral_radius(),
        tte.rho
    );
    println!("boundary: y = {y:.12}");
    let xs: Vec<String> = m
        .pair
        .generators()
        .map(|a| format!("{}={:.12}", m.pair.label(a), x[a.index()]))
        .collect();
    println!("level-1 vector x = [{}]", xs.join(", "));
    let dev = qbd::product_form_check(&r, y, &x, tte);
    println!(
        "product-form deviations: |xR - rho x| = {:.3e}, |x - rho(1-rho) r| = {:.3e}, |y - (1-rho)| = {:.3e}",
        dev.eigen, dev.x_vs_r, dev.boundary
    );
    println!(
        "level-geometric form {}",
        if dev.max() < 1e-8 {
            "certified (all deviations < 1e-8)"
        } else {
            "NOT certified"
        }
    );
    Ok(())
}

fn cmd_validate(path: &Path, max_len: usize, csv: Option<&Path>) -> Result<()> {
    let m = load(path)?;
    let analysis = analyze(&m)?;
    let law = select_law(&m, &analysis)?;
    let chain = oracle::truncated_generator(
        &m.pair,
        &m.nu,
        m.lambda,
        m.mu,
        &law.solution.r,
        max_len,
    )?;
    let pi = oracle::solve_stationary(&chain)?;
    let report = oracle::compare(&chain, &pi, &m.pair, &law)?;
    println!(
        "oracle: {} states up to length {max_len}, pi*Q residual {:.3e}, solve condition {:.3e}",
        chain.states.len(),
        pi.residual,
        pi.condition
    );
    println!(
        "total variation over words of length <= {}: {:.6e} (analytic tail bound rho^{} = {:.6e})",
        report.max_len,
        report.tv,
        max_len - 1,
        report.tail_bound
    );
    if let Some(csv_path) = csv {
        let rows: Vec<String> = oracle::comparison_rows(&chain, &pi, &m.pair, &law)?
            .into_iter()
            .map(|(w, o, a, d)| {
                format!(
                    "{},{},{},{},{}",
                    m.pair.format_word(&w),
                    w.len(),
                    csv_num(o),
                    csv_num(a),
                    csv_num(d)
                )
            })
            .collect();
        write_csv(csv_path, "word,length,oracle_pi,analytic_pi,abs_diff", &rows)?;
        println!("wrote {}", csv_path.display());
    }
    Ok(())
}
