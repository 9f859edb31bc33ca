//! `eval`: closed-form evaluation of one parameter point under one variant.

use std::path::Path;

use pool_attack::analytics::{self, Entity};
use pool_attack::model::derive_constants;
use pool_attack::special;
use pool_attack::variants::{make_variant, VariantTag};

use crate::config::Settings;
use crate::output::{num, open_sink, CsvWriter};
use crate::{point, CliError};

#[derive(Debug, clap::Args)]
pub struct EvalArgs {
    #[command(flatten)]
    env: point::EnvArgs,
    #[command(flatten)]
    strategy: point::StrategyArgs,
    #[command(flatten)]
    variant: point::VariantArgs,
}

pub fn run(
    args: EvalArgs,
    seed: Option<u64>,
    out: Option<&Path>,
    settings: &mut Settings,
) -> Result<(), CliError> {
    settings.record("command", "eval");
    let _ = seed;
    point::record_out(settings, out);
    let env = args.env.resolve(settings)?;
    let strategy = args.strategy.resolve(settings)?;
    let kind = args.variant.resolve(settings, VariantTag::TpawExact)?;
    let evaluator = make_variant(kind, &env, strategy)?;

    let constants = derive_constants(&env, &strategy);
    let shares = special::share_terms(&constants);
    let honest = [env.alpha(), env.beta(), env.rest()];
    let rer = |rho: f64, base: f64| {
        if base == 0.0 {
            "nan".to_string()
        } else {
            num((rho - base) / base)
        }
    };

    let mut w = CsvWriter::new(open_sink(out)?, settings)?;
    w.row([
        "alpha",
        "beta",
        "gamma",
        "rational",
        "p1",
        "p2",
        "theta",
        "variant",
        "c",
        "rho_a",
        "rho_pool",
        "rho_rest",
        "delta",
        "r1",
        "rs",
        "ru",
        "rer_a",
        "rer_pool",
        "rer_rest",
        "profit_lag_a",
    ])?;

    let (rho, delta, lag) = match evaluator.report() {
        Some(report) => {
            let lag = analytics::DeltaEvaluator::from_report(&env, &report, Entity::Adversary)
                .profit_lag();
            (
                [report.rho_a, report.rho_pool, report.rho_rest],
                num(report.delta),
                num(lag),
            )
        }
        None => {
            // c-model lineage: three ratios, no redundancy or lag.
            let ratios = evaluator.c_ratios().expect("c-model variant");
            (
                [ratios.rho_a, ratios.rho_pool, ratios.rho_rest],
                String::new(),
                String::new(),
            )
        }
    };

    w.row([
        num(env.alpha()),
        num(env.beta()),
        num(env.gamma()),
        env.rational_manager().to_string(),
        num(strategy.p1()),
        num(strategy.p2()),
        strategy.theta().to_string(),
        kind.tag.name().to_string(),
        evaluator.c_prob().map(num).unwrap_or_default(),
        num(rho[0]),
        num(rho[1]),
        num(rho[2]),
        delta,
        num(shares.r1),
        num(shares.rs),
        num(shares.ru),
        rer(rho[0], honest[0]),
        rer(rho[1], honest[1]),
        rer(rho[2], honest[2]),
        lag,
    ])?;
    w.flush()
}
