use qlabel::info_theory::{threshold_report, AttackFamily, ThresholdReport};
use serde::Serialize;

use crate::error::CliResult;
use crate::output::{num, Bundle, Summary};
use crate::Context;

#[derive(Serialize)]
struct Row {
    family: AttackFamily,
    eta_star: f64,
    method: &'static str,
    residual: Option<f64>,
}

pub fn run(ctx: &Context) -> CliResult<Summary> {
    let rows: Vec<Row> = AttackFamily::ALL
        .iter()
        .map(|&family| {
            let r: ThresholdReport<f64> = threshold_report(family)?;
            Ok(Row {
                family,
                eta_star: r.eta_star,
                method: r.method.label(),
                residual: r.residual,
            })
        })
        .collect::<qlabel::Result<_>>()?;

    println!("{:<12} {:>12}  {:<20} |gap|", "family", "eta*", "method");
    for r in &rows {
        let residual = r
            .residual
            .map_or_else(|| "-".to_string(), |v| format!("{v:.3e}"));
        println!(
            "{:<12} {:>12.7}  {:<20} {}",
            r.family.name(),
            r.eta_star,
            r.method,
            residual
        );
    }

    let mut bundle = Bundle::create(&ctx.globals.out_dir)?;
    bundle.csv(
        "thresholds.csv",
        &["family", "eta_star", "method", "residual"],
        rows.iter().map(|r| {
            [
                r.family.name().to_string(),
                num(r.eta_star),
                r.method.to_string(),
                r.residual.map(num).unwrap_or_default(),
            ]
        }),
    )?;
    bundle.finish(
        "thresholds",
        ctx.globals.seed,
        &serde_json::json!({}),
        &rows,
    )
}
