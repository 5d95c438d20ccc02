use qlabel::adversary::AttackStrategy;
use qlabel::protocol::{run_session, SessionConfig};
use qlabel::qubit::Basis;
use serde::Serialize;

use crate::cli::ProtocolArgs;
use crate::config::{resolve_experiment, resolve_protocol, ProtocolConfig};
use crate::error::CliResult;
use crate::output::{num, Bundle, Summary};
use crate::Context;

#[derive(Serialize)]
struct TranscriptLine {
    round_id: u64,
    k: &'static str,
    is_check: bool,
    outcome: u8,
    eve_basis: [Option<Basis>; 2],
    eve_outcome: [Option<u8>; 2],
    check_error: bool,
    label_flipped: bool,
}

#[derive(Serialize)]
struct SessionSummary {
    strategy: &'static str,
    rounds: u64,
    check_count: u64,
    error_count: u64,
    eta_a: f64,
    expected_eta_a: f64,
    expected_eta_e: f64,
    authorized_size: usize,
    eavesdropper_size: usize,
    aborted: bool,
    authorized_error_rate: f64,
    eve_error_rate: f64,
}

#[derive(Serialize)]
struct Echo<'a> {
    protocol: &'a ProtocolConfig,
    dimension: usize,
    separation: f64,
    task_seed: u64,
}

pub fn run(ctx: &Context, args: &ProtocolArgs) -> CliResult<Summary> {
    let cfg = resolve_protocol(args, &ctx.file.protocol)?;
    let settings = resolve_experiment(&Default::default(), &ctx.file.experiment)?;
    let task = settings.task()?;
    let seed = ctx.globals.seed;
    let session = SessionConfig {
        target_data_count: cfg.data,
        strategy: cfg.strategy,
        abort: cfg.abort,
        seed,
        record_transcript: cfg.transcript,
    };
    let r = run_session(&task, &session)?;
    let expected = match cfg.strategy {
        AttackStrategy::None => (0.0, 0.5),
        s => s.expected_noise()?,
    };
    let s = SessionSummary {
        strategy: cfg.strategy.name(),
        rounds: r.rounds,
        check_count: r.check_count,
        error_count: r.error_count,
        eta_a: r.eta_a_estimate,
        expected_eta_a: expected.0,
        expected_eta_e: expected.1,
        authorized_size: r.authorized_dataset.len(),
        eavesdropper_size: r.eavesdropper_dataset.len(),
        aborted: r.aborted,
        authorized_error_rate: r.authorized_error_rate(),
        eve_error_rate: r.eve_error_rate(),
    };

    println!("strategy            {}", s.strategy);
    println!("rounds              {} ({} check)", s.rounds, s.check_count);
    println!(
        "eta_A               {:.6} (expected {:.6})",
        s.eta_a, s.expected_eta_a
    );
    println!(
        "dataset sizes       A {}  E {}",
        s.authorized_size, s.eavesdropper_size
    );
    println!("aborted             {}", s.aborted);
    println!(
        "eve label errors    {:.6} (expected {:.6})",
        s.eve_error_rate, s.expected_eta_e
    );

    let mut bundle = Bundle::create(&ctx.globals.out_dir)?;
    if cfg.transcript {
        bundle.jsonl(
            "transcript.jsonl",
            r.transcript.iter().map(|t| {
                let legs = t.eve_record.map(|e| e.legs).unwrap_or_default();
                TranscriptLine {
                    round_id: t.round_id,
                    k: t.preparation.symbol(),
                    is_check: t.is_check,
                    outcome: t.final_outcome,
                    eve_basis: legs.map(|l| l.map(|l| l.basis)),
                    eve_outcome: legs.map(|l| l.map(|l| l.outcome)),
                    check_error: t.check_error,
                    label_flipped: t.label_flipped,
                }
            }),
        )?;
    }
    bundle.csv(
        "session.csv",
        &[
            "strategy",
            "rounds",
            "check_count",
            "error_count",
            "eta_a",
            "authorized_size",
            "eavesdropper_size",
            "aborted",
            "eve_error_rate",
        ],
        [[
            s.strategy.to_string(),
            s.rounds.to_string(),
            s.check_count.to_string(),
            s.error_count.to_string(),
            num(s.eta_a),
            s.authorized_size.to_string(),
            s.eavesdropper_size.to_string(),
            s.aborted.to_string(),
            num(s.eve_error_rate),
        ]],
    )?;
    let echo = Echo {
        protocol: &cfg,
        dimension: settings.dimension,
        separation: settings.separation,
        task_seed: settings.task_seed,
    };
    bundle.finish("protocol-run", seed, &echo, &s)
}
