use qlabel::adversary::{AttackStrategy, BasisPolicy};
use qlabel::info_theory::{eta_star, AttackFamily};
use qlabel::learn::{
    dominance_violations, estimate_learning_probability, learning_curve, random_search_baseline,
    random_search_learner, run_trials, BernoulliOracleSampler, ExperimentSettings,
};
use qlabel::pac_bounds::{random_search_curve, sample_bound_noiseless, sample_bound_noisy};
use qlabel::protocol::{run_session, SessionConfig};
use qlabel::stats::{derive_seed, within_binomial_sigma, WilsonInterval};
use serde::Serialize;

use crate::cli::SelfcheckArgs;
use crate::error::{CliError, CliResult};
use crate::output::{Bundle, Summary};
use crate::Context;

#[derive(Serialize)]
struct Check {
    name: String,
    passed: bool,
    detail: String,
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check {
        name: name.to_string(),
        passed,
        detail,
    }
}

pub fn run(ctx: &Context, args: &SelfcheckArgs) -> CliResult<Summary> {
    let k = args.sigma;
    if !(k >= 0.0) {
        return Err(CliError::Config(format!(
            "sigma must be nonnegative, got {k}"
        )));
    }
    let (seed, workers) = (ctx.globals.seed, ctx.globals.workers);
    let mut checks = Vec::new();

    let c: f64 = eta_star(AttackFamily::Collective);
    let i: f64 = eta_star(AttackFamily::Individual);
    let m: f64 = eta_star(AttackFamily::Memoryless);
    checks.push(check(
        "thresholds",
        (c - 0.110).abs() < 5e-4 && (i - 0.1464).abs() < 5e-4 && m == 0.154,
        format!("{c:.7} {i:.7} {m}"),
    ));

    let ln2 = std::f64::consts::LN_2;
    let mb = sample_bound_noiseless(0.1, 0.05, 20.0 * ln2)?;
    let mbn = sample_bound_noisy(0.1, 0.05, 20.0 * ln2, 0.1)?;
    checks.push(check(
        "bounds",
        mb == 169 && mbn == 5485,
        format!("M_b = {mb}, M_b,eta = {mbn}"),
    ));

    let task = ExperimentSettings::<f64>::default().task()?;
    let cases = [
        ("no attack", AttackStrategy::None, 0.0),
        (
            "intercept f=1 Z",
            AttackStrategy::intercept_resend(1.0, BasisPolicy::AlwaysZ),
            0.5,
        ),
        (
            "intercept f=1 random",
            AttackStrategy::intercept_resend(1.0, BasisPolicy::RandomPerLeg),
            0.375,
        ),
        (
            "intercept f=1/2 Z",
            AttackStrategy::intercept_resend(0.5, BasisPolicy::AlwaysZ),
            0.25,
        ),
    ];
    for (j, (name, strategy, eta)) in cases.into_iter().enumerate() {
        let r = run_session(
            &task,
            &SessionConfig {
                target_data_count: 10_000,
                strategy,
                abort: Default::default(),
                seed: derive_seed(seed, 10, j as u64),
                record_transcript: false,
            },
        )?;
        checks.push(check(
            &format!("protocol {name}"),
            within_binomial_sigma(r.error_count, r.check_count, eta, k),
            format!("eta_A = {:.5}, expected {eta}", r.eta_a_estimate),
        ));
    }

    let p = 0.1;
    let sampler = BernoulliOracleSampler::new(&task, p)?;
    let trials = run_trials(2000, workers, |t| {
        random_search_learner(&task, 0.05, &sampler, 40, derive_seed(seed, 20, t as u64))
    })?;
    let grid: Vec<u64> = (1..=40).collect();
    let curve = estimate_learning_probability(&trials, &grid)?;
    let misses: Vec<u64> = curve
        .rows
        .iter()
        .filter(|r| {
            let exact: f64 = random_search_curve(p, r.n).unwrap_or(f64::NAN);
            let hits = (r.p_hat * r.trials as f64).round() as u64;
            !WilsonInterval::new(hits, r.trials, k).contains(exact)
        })
        .map(|r| r.n)
        .collect();
    checks.push(check(
        "random-search law",
        misses.is_empty(),
        format!("misses at {misses:?}"),
    ));

    let settings = ExperimentSettings::<f64> {
        trials: 40,
        ..Default::default()
    };
    let trained = learning_curve(&task, &settings, 0.0, seed, 30, workers)?;
    let baseline = random_search_baseline(&task, &settings, seed, 31, workers)?;
    let violations = dominance_violations(&trained.curve, &baseline.curve);
    checks.push(check(
        "trained beats random search",
        violations.is_empty()
            && trained.curve.is_nondecreasing()
            && baseline.curve.is_nondecreasing(),
        format!("violations at {violations:?}"),
    ));

    for c in &checks {
        println!(
            "{} {:<28} {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();

    let mut bundle = Bundle::create(&ctx.globals.out_dir)?;
    bundle.csv(
        "selfcheck.csv",
        &["check", "passed", "detail"],
        checks
            .iter()
            .map(|c| [c.name.clone(), c.passed.to_string(), c.detail.clone()]),
    )?;
    let summary = bundle.finish(
        "selfcheck",
        seed,
        &serde_json::json!({ "sigma": k }),
        &checks,
    )?;
    if failed.is_empty() {
        Ok(summary)
    } else {
        Err(CliError::Statistical(failed.join(", ")))
    }
}
