//! `optimize`: multi-start maximization at a point or over an (alpha, beta)
//! grid at fixed gamma.

use std::path::Path;

use pool_attack::analytics::{self, Entity};
use pool_attack::optimizer::{
    maximize, sweep_optimize, Objective, ObjectiveKind, OptimizationResult, OptimizerConfig,
};
use pool_attack::variants::{make_variant, VariantTag};
use pool_attack::EnvironmentParams;

use crate::config::Settings;
use crate::output::{num, open_sink, CsvWriter};
use crate::{point, CliError};

#[derive(Debug, clap::Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    env: point::EnvArgs,
    #[command(flatten)]
    variant: point::VariantArgs,
    /// Objective: rho_a, revenue_change_at_t1, relative_revenue_change_at_t1.
    #[arg(long)]
    objective: Option<String>,
    /// Sweep step: optimize every (alpha, beta) multiple with alpha+beta<0.5
    /// instead of a single point.
    #[arg(long)]
    grid_step: Option<f64>,
    /// Local searches per point.
    #[arg(long)]
    starts: Option<usize>,
    /// Upper edge of the finite theta search box.
    #[arg(long)]
    theta_cap: Option<f64>,
}

struct RowContext {
    objective: Objective,
    gamma: f64,
    n_starts: usize,
    seed: u64,
}

pub fn run(
    args: OptimizeArgs,
    seed: Option<u64>,
    out: Option<&Path>,
    settings: &mut Settings,
) -> Result<(), CliError> {
    settings.record("command", "optimize");
    point::record_out(settings, out);
    let seed = point::resolve_seed(settings, seed)?;
    let kind = args.variant.resolve(settings, VariantTag::TpawExact)?;
    let objective_raw = settings.get("objective", args.objective, "rho_a".to_string())?;
    let objective = Objective {
        kind: objective_raw.parse::<ObjectiveKind>()?,
        variant: kind,
    };
    let n_starts = settings.get("starts", args.starts, 100)?;
    let theta_cap = settings.get("theta_cap", args.theta_cap, 50.0)?;
    let grid_step = settings.get_opt("grid_step", args.grid_step)?;
    let config = OptimizerConfig {
        n_starts,
        theta_cap,
        seed,
        ..Default::default()
    };

    let mut w = CsvWriter::new(open_sink(out)?, settings)?;
    w.row([
        "alpha",
        "beta",
        "gamma",
        "objective",
        "variant",
        "p1_opt",
        "p2_opt",
        "theta_opt",
        "value",
        "rer_vs_honest",
        "profit_lag",
        "n_starts",
        "seed",
        "error",
    ])?;

    match grid_step {
        None => {
            let env = args.env.resolve(settings)?;
            let ctx = RowContext {
                objective,
                gamma: env.gamma(),
                n_starts,
                seed,
            };
            let result = maximize(&env, &objective, &config);
            write_row(&mut w, &ctx, env.alpha(), env.beta(), Some(&env), result)?;
        }
        Some(step) => {
            if !(step > 0.0 && step < 0.5) {
                return Err(CliError::validation(format!(
                    "grid_step must lie in (0, 0.5), got {step}"
                )));
            }
            let (gamma, rational, lambda1, d0, tau0) = args.env.resolve_rest(settings)?;
            let base = EnvironmentParams::new(0.1, 0.1, gamma, rational, lambda1, d0, tau0)?;
            let grid = grid_points(step);
            let ctx = RowContext {
                objective,
                gamma,
                n_starts,
                seed,
            };
            let entries = sweep_optimize(&base, &grid, &objective, &config);
            for entry in entries {
                let env = EnvironmentParams::new(
                    entry.alpha,
                    entry.beta,
                    gamma,
                    rational,
                    lambda1,
                    d0,
                    tau0,
                )
                .ok();
                write_row(
                    &mut w,
                    &ctx,
                    entry.alpha,
                    entry.beta,
                    env.as_ref(),
                    entry.result,
                )?;
            }
        }
    }
    w.flush()
}

/// All (alpha, beta) multiples of `step` with alpha + beta < 0.5.
pub fn grid_points(step: f64) -> Vec<(f64, f64)> {
    let n = (0.5 / step).ceil() as i32;
    let mut points = Vec::new();
    for i in 1..n {
        for j in 1..n {
            let alpha = f64::from(i) * step;
            let beta = f64::from(j) * step;
            if alpha + beta < 0.5 {
                points.push((alpha, beta));
            }
        }
    }
    points
}

fn write_row(
    w: &mut CsvWriter<Box<dyn std::io::Write>>,
    ctx: &RowContext,
    alpha: f64,
    beta: f64,
    env: Option<&EnvironmentParams>,
    result: pool_attack::Result<OptimizationResult>,
) -> Result<(), CliError> {
    let mut fields = vec![
        num(alpha),
        num(beta),
        num(ctx.gamma),
        ctx.objective.kind.name().to_string(),
        ctx.objective.variant.tag.name().to_string(),
    ];
    match (result, env) {
        (Ok(r), Some(env)) => {
            let best = r.best;
            // The adversary's long-run ratio at the optimum, whatever the
            // objective was, for the RER-vs-honest column.
            let rho_a = make_variant(ctx.objective.variant, env, best)
                .map(|ev| ev.rho_a())
                .unwrap_or(f64::NAN);
            if !r.best_value.is_finite() && ctx.objective.kind == ObjectiveKind::RhoA {
                return Err(CliError::internal(format!(
                    "optimizer returned a non-finite value at alpha={alpha}, beta={beta}"
                )));
            }
            let rer = if env.alpha() > 0.0 {
                num((rho_a - env.alpha()) / env.alpha())
            } else {
                "nan".to_string()
            };
            let lag = if ctx.objective.variant.tag.uses_c_model() {
                String::new()
            } else {
                num(analytics::profit_lag(env, &best, Entity::Adversary))
            };
            fields.extend([
                num(best.p1()),
                num(best.p2()),
                best.theta().to_string(),
                num(r.best_value),
                rer,
                lag,
                r.starts.to_string(),
                ctx.seed.to_string(),
                String::new(),
            ]);
        }
        (Ok(_), None) => unreachable!("result implies a valid environment"),
        (Err(e), _) => {
            fields.extend([
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                ctx.n_starts.to_string(),
                ctx.seed.to_string(),
                e.to_string().replace(',', ";"),
            ]);
        }
    }
    w.row(fields)
}
