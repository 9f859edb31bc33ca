//! `simulate`: Monte Carlo cycle estimates with analytic deltas, or a
//! difficulty-epoch timeline.

use std::path::Path;

use pool_attack::analytics;
use pool_attack::simulator::{estimate_ratios, simulate_timeline, TimelinePolicy};

use crate::config::Settings;
use crate::output::{num, open_sink, CsvWriter};
use crate::{point, CliError};

#[derive(Debug, clap::Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    env: point::EnvArgs,
    #[command(flatten)]
    strategy: point::StrategyArgs,
    /// `cycle` for per-cycle estimates, `timeline` for difficulty epochs.
    #[arg(long)]
    mode: Option<String>,
    /// Cycles to simulate in cycle mode.
    #[arg(long)]
    cycles: Option<u64>,
    /// Epochs to simulate in timeline mode.
    #[arg(long)]
    epochs: Option<u32>,
    /// Deadline policy across difficulty changes: `rescale` or `fixed`.
    #[arg(long)]
    policy: Option<String>,
}

pub fn run(
    args: SimulateArgs,
    seed: Option<u64>,
    out: Option<&Path>,
    settings: &mut Settings,
) -> Result<(), CliError> {
    settings.record("command", "simulate");
    point::record_out(settings, out);
    let seed = point::resolve_seed(settings, seed)?;
    let mode = settings.get("mode", args.mode, "cycle".to_string())?;
    let cycles = settings.get("cycles", args.cycles, 1_000_000u64)?;
    let epochs = settings.get("epochs", args.epochs, 2u32)?;
    let policy_raw = settings.get("policy", args.policy, "rescale".to_string())?;
    let env = args.env.resolve(settings)?;
    let strategy = args.strategy.resolve(settings)?;

    match mode.as_str() {
        "cycle" => {
            if cycles < 2 {
                return Err(CliError::validation("cycles must be >= 2"));
            }
            let est = estimate_ratios(&env, &strategy, cycles, seed);
            let analytic = analytics::cycle_expectations(&env, &strategy);
            let report = analytics::revenue_report(&env, &strategy);

            let mut w = CsvWriter::new(open_sink(out)?, settings)?;
            w.row(["quantity", "estimate", "std_error", "analytic", "z_score"])?;
            let mut emit = |name: &str,
                            est: Option<pool_attack::simulator::RatioEstimate>,
                            reference: Option<f64>|
             -> Result<(), CliError> {
                let fields = match (est, reference) {
                    (Some(e), Some(r)) => vec![
                        name.to_string(),
                        num(e.value),
                        num(e.std_error),
                        num(r),
                        num(e.z_score(r)),
                    ],
                    (Some(e), None) => vec![
                        name.to_string(),
                        num(e.value),
                        num(e.std_error),
                        String::new(),
                        String::new(),
                    ],
                    _ => vec![
                        name.to_string(),
                        String::new(),
                        String::new(),
                        reference.map(num).unwrap_or_default(),
                        String::new(),
                    ],
                };
                w.row(fields)
            };
            emit("rho_a", Some(est.rho_a), Some(report.rho_a))?;
            emit("rho_pool", Some(est.rho_pool), Some(report.rho_pool))?;
            emit("rho_rest", Some(est.rho_rest), Some(report.rho_rest))?;
            emit("delta", Some(est.delta), Some(report.delta))?;
            // Share terms only exist when a withholding phase can occur.
            let (rs_ref, ru_ref) = if strategy.theta().is_zero() {
                (None, None)
            } else {
                (Some(analytic.shares.rs), Some(analytic.shares.ru))
            };
            emit("share_timed", est.share_timed, rs_ref)?;
            emit("share_interrupted", est.share_interrupted, ru_ref)?;
            w.flush()
        }
        "timeline" => {
            if epochs == 0 {
                return Err(CliError::validation("epochs must be >= 1"));
            }
            let policy = match policy_raw.as_str() {
                "rescale" => TimelinePolicy::RescaleDeadline,
                "fixed" => TimelinePolicy::FixedDeadline,
                other => {
                    return Err(CliError::validation(format!(
                        "policy must be `rescale` or `fixed`, got {other:?}"
                    )))
                }
            };
            let result = simulate_timeline(&env, &strategy, epochs, policy, seed);
            let mut w = CsvWriter::new(open_sink(out)?, settings)?;
            w.row([
                "epoch",
                "duration",
                "difficulty",
                "theta_effective",
                "canonical_blocks",
                "total_blocks",
                "reward_a",
                "reward_pool",
                "reward_rest",
                "cum_a",
                "cum_pool",
                "cum_rest",
            ])?;
            for (i, (epoch, cum)) in result
                .epochs
                .iter()
                .zip(result.cumulative_rewards.iter())
                .enumerate()
            {
                w.row([
                    i.to_string(),
                    num(epoch.duration),
                    num(epoch.difficulty),
                    num(epoch.theta_effective),
                    epoch.canonical_blocks.to_string(),
                    epoch.total_blocks.to_string(),
                    num(epoch.rewards[0]),
                    num(epoch.rewards[1]),
                    num(epoch.rewards[2]),
                    num(cum[0]),
                    num(cum[1]),
                    num(cum[2]),
                ])?;
            }
            w.flush()
        }
        other => Err(CliError::validation(format!(
            "mode must be `cycle` or `timeline`, got {other:?}"
        ))),
    }
}
