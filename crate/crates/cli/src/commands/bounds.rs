use qlabel::pac_bounds::{
    delta_floor, gamma, sample_bound_noiseless_raw, sample_bound_noisy_raw, PacParams,
};
use serde::Serialize;

use crate::cli::BoundsArgs;
use crate::config::{resolve_bounds, Globals};
use crate::error::CliResult;
use crate::output::{num, Bundle, Summary};
use crate::Context;

#[derive(Serialize)]
struct FloorRow {
    n: u64,
    log_delta_star: f64,
    delta_star: f64,
}

#[derive(Serialize)]
struct BoundsResults {
    m_b: u64,
    m_b_raw: f64,
    m_b_eta: u64,
    m_b_eta_raw: f64,
    gamma: f64,
    delta_floor: Vec<FloorRow>,
}

pub fn run(ctx: &Context, args: &BoundsArgs) -> CliResult<Summary> {
    let cfg = resolve_bounds(args, &ctx.file.bounds);
    let params = PacParams::new(cfg.epsilon, cfg.delta, cfg.log_h, cfg.eta)?;
    let g = gamma(cfg.epsilon, cfg.eta)?;
    let results = BoundsResults {
        m_b: params.noiseless_bound()?,
        m_b_raw: sample_bound_noiseless_raw(cfg.epsilon, cfg.delta, cfg.log_h)?,
        m_b_eta: params.noisy_bound()?,
        m_b_eta_raw: sample_bound_noisy_raw(cfg.epsilon, cfg.delta, cfg.log_h, cfg.eta)?,
        gamma: g,
        delta_floor: cfg
            .n
            .iter()
            .map(|&n| {
                let f = delta_floor(cfg.epsilon, cfg.eta, n)?;
                Ok(FloorRow {
                    n,
                    log_delta_star: f.log_delta_star,
                    delta_star: f.delta_star(),
                })
            })
            .collect::<qlabel::Result<_>>()?,
    };

    println!(
        "epsilon = {}  delta = {}  ln|H| = {}  eta = {}",
        cfg.epsilon, cfg.delta, cfg.log_h, cfg.eta
    );
    println!("M_b      {:>12}  ({})", results.m_b, results.m_b_raw);
    println!(
        "M_b,eta  {:>12}  ({})",
        results.m_b_eta, results.m_b_eta_raw
    );
    println!("gamma    {:>12.6e}", results.gamma);
    if !results.delta_floor.is_empty() {
        println!("{:>12}  {:>14}", "n", "delta*");
        for r in &results.delta_floor {
            println!("{:>12}  {:>14.6e}", r.n, r.delta_star);
        }
    }

    let Globals { seed, out_dir, .. } = &ctx.globals;
    let mut bundle = Bundle::create(out_dir)?;
    bundle.csv(
        "bounds.csv",
        &["quantity", "value", "raw"],
        [
            vec![
                "m_b".to_string(),
                results.m_b.to_string(),
                num(results.m_b_raw),
            ],
            vec![
                "m_b_eta".to_string(),
                results.m_b_eta.to_string(),
                num(results.m_b_eta_raw),
            ],
            vec!["gamma".to_string(), num(results.gamma), num(results.gamma)],
        ],
    )?;
    bundle.csv(
        "delta_floor.csv",
        &["n", "log_delta_star", "delta_star"],
        results
            .delta_floor
            .iter()
            .map(|r| [r.n.to_string(), num(r.log_delta_star), num(r.delta_star)]),
    )?;
    bundle.finish("bounds", *seed, &cfg, &results)
}
