//! `figures`: CSV reproduction of the headline figure datasets.
//!
//! - fig2: revenue-ratio maximization heatmaps over (alpha, beta), gamma = 0
//! - fig3: the same at gamma = 0.5
//! - fig4: RER versus gamma for five (alpha, beta) cases
//! - fig5: relative revenue-change maximization at the first adjustment
//!
//! One file per panel, each with the resolved-config header. Rows stream out
//! grid-row by grid-row, so an interrupted run leaves complete partial data.

use std::io::Write;
use std::path::{Path, PathBuf};

use pool_attack::analytics::{self, Entity};
use pool_attack::optimizer::{
    maximize, Objective, ObjectiveKind, OptimizationResult, OptimizerConfig,
};
use pool_attack::variants::{VariantKind, VariantTag};
use pool_attack::EnvironmentParams;
use rayon::prelude::*;

use crate::config::Settings;
use crate::output::{num, CsvWriter};
use crate::{point, CliError};

/// Five representative (alpha, beta) cases for the gamma-sweep figure,
/// spanning small symmetric attackers to a large-pool case.
pub const GAMMA_SWEEP_CASES: [(f64, f64); 5] = [
    (0.05, 0.05),
    (0.1, 0.1),
    (0.15, 0.15),
    (0.2, 0.2),
    (0.1, 0.3),
];

#[derive(Debug, clap::Args)]
pub struct FiguresArgs {
    /// Which dataset: fig2, fig3, fig4, fig5, or all.
    #[arg(long)]
    figure: Option<String>,
    /// Grid increment for alpha and beta.
    #[arg(long)]
    resolution: Option<f64>,
    /// Gamma increment for the gamma-sweep figure.
    #[arg(long)]
    gamma_step: Option<f64>,
    /// Local searches per optimization.
    #[arg(long)]
    starts: Option<usize>,
    #[command(flatten)]
    env: point::EnvArgs,
}

struct FigureContext {
    rational: bool,
    lambda1: f64,
    d0: u32,
    tau0: f64,
    config: OptimizerConfig,
    dir: PathBuf,
    settings_lines: Vec<(String, String)>,
}

impl FigureContext {
    fn env(&self, alpha: f64, beta: f64, gamma: f64) -> pool_attack::Result<EnvironmentParams> {
        EnvironmentParams::new(
            alpha,
            beta,
            gamma,
            self.rational,
            self.lambda1,
            self.d0,
            self.tau0,
        )
    }

    fn open(&self, name: &str, columns: &[&str]) -> Result<PanelFile, CliError> {
        let path = self.dir.join(name);
        let file = std::fs::File::create(&path).map_err(CliError::io)?;
        let mut settings = Settings::default();
        for (k, v) in &self.settings_lines {
            settings.record(k, v);
        }
        settings.record("file", name);
        let mut writer = CsvWriter::new(Box::new(std::io::BufWriter::new(file)) as Box<dyn Write>, &settings)?;
        writer.row(columns.iter().copied())?;
        Ok(PanelFile { writer })
    }
}

struct PanelFile {
    writer: CsvWriter<Box<dyn Write>>,
}

impl PanelFile {
    fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.writer.row(fields)
    }

    fn flush(&mut self) -> Result<(), CliError> {
        self.writer.flush()
    }
}

pub fn run(
    args: FiguresArgs,
    seed: Option<u64>,
    out: Option<&Path>,
    settings: &mut Settings,
) -> Result<(), CliError> {
    settings.record("command", "figures");
    let seed = point::resolve_seed(settings, seed)?;
    let figure = settings.get("figure", args.figure, "all".to_string())?;
    let resolution = settings.get("resolution", args.resolution, 0.01)?;
    let gamma_step = settings.get("gamma_step", args.gamma_step, 0.05)?;
    let starts = settings.get("starts", args.starts, 100)?;
    if !(resolution > 0.0 && resolution < 0.5) {
        return Err(CliError::validation(format!(
            "resolution must lie in (0, 0.5), got {resolution}"
        )));
    }
    if !(gamma_step > 0.0 && gamma_step <= 1.0) {
        return Err(CliError::validation(format!(
            "gamma_step must lie in (0, 1], got {gamma_step}"
        )));
    }
    let (_, rational, lambda1, d0, tau0) = args.env.resolve_rest(settings)?;
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("figures"));
    std::fs::create_dir_all(&dir).map_err(CliError::io)?;
    settings.record("out", dir.display());

    let ctx = FigureContext {
        rational,
        lambda1,
        d0,
        tau0,
        config: OptimizerConfig {
            n_starts: starts,
            seed,
            ..Default::default()
        },
        dir,
        settings_lines: settings
            .resolved()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect(),
    };

    match figure.as_str() {
        "fig2" => heatmaps(&ctx, "fig2", 0.0, resolution),
        "fig3" => heatmaps(&ctx, "fig3", 0.5, resolution),
        "fig4" => gamma_sweep(&ctx, gamma_step),
        "fig5" => revenue_change_maps(&ctx, resolution),
        "all" => {
            heatmaps(&ctx, "fig2", 0.0, resolution)?;
            heatmaps(&ctx, "fig3", 0.5, resolution)?;
            gamma_sweep(&ctx, gamma_step)?;
            revenue_change_maps(&ctx, resolution)
        }
        other => Err(CliError::validation(format!(
            "figure must be fig2, fig3, fig4, fig5 or all, got {other:?}"
        ))),
    }
}

fn objective(tag: VariantTag, kind: ObjectiveKind) -> Objective {
    Objective {
        kind,
        variant: VariantKind::exact(tag),
    }
}

struct PointOutcome {
    alpha: f64,
    beta: f64,
    tpaw: Option<OptimizationResult>,
    paw: Option<OptimizationResult>,
}

/// Optimizes both families at every point of one grid row (fixed alpha),
/// in parallel.
fn optimize_row(
    ctx: &FigureContext,
    alpha: f64,
    betas: &[f64],
    gamma: f64,
    kind: ObjectiveKind,
) -> Vec<PointOutcome> {
    betas
        .par_iter()
        .map(|&beta| {
            let Ok(env) = ctx.env(alpha, beta, gamma) else {
                return PointOutcome {
                    alpha,
                    beta,
                    tpaw: None,
                    paw: None,
                };
            };
            let tpaw = maximize(&env, &objective(VariantTag::TpawExact, kind), &ctx.config).ok();
            let paw = maximize(&env, &objective(VariantTag::PawExact, kind), &ctx.config).ok();
            PointOutcome {
                alpha,
                beta,
                tpaw,
                paw,
            }
        })
        .collect()
}

fn axis(resolution: f64) -> Vec<f64> {
    let n = (0.5 / resolution).ceil() as i32;
    (1..n).map(|i| f64::from(i) * resolution).collect()
}

/// fig2/fig3: the eight revenue-ratio maximization panels at one gamma.
fn heatmaps(
    ctx: &FigureContext,
    prefix: &str,
    gamma: f64,
    resolution: f64,
) -> Result<(), CliError> {
    let point_cols: &[&str] = &["alpha", "beta", "value"];
    let mut panels = [
        ctx.open(&format!("{prefix}a_paw_rer_adversary.csv"), point_cols)?,
        ctx.open(&format!("{prefix}b_tpaw_rer_adversary.csv"), point_cols)?,
        ctx.open(&format!("{prefix}c_paw_rer_rest.csv"), point_cols)?,
        ctx.open(&format!("{prefix}d_tpaw_rer_rest.csv"), point_cols)?,
        ctx.open(&format!("{prefix}e_paw_profit_lag.csv"), point_cols)?,
        ctx.open(&format!("{prefix}f_tpaw_profit_lag.csv"), point_cols)?,
        ctx.open(&format!("{prefix}g_rer_ratio.csv"), point_cols)?,
    ];
    let mut opt_values = ctx.open(
        &format!("{prefix}h_optimized_values.csv"),
        &[
            "alpha",
            "beta",
            "p1_paw",
            "p2_paw",
            "p1_tpaw",
            "p2_tpaw",
            "theta_tpaw",
            "red_region",
            "paw_coincident",
        ],
    )?;

    for &alpha in &axis(resolution) {
        let betas: Vec<f64> = axis(resolution)
            .into_iter()
            .filter(|beta| alpha + beta < 0.5)
            .collect();
        if betas.is_empty() {
            continue;
        }
        let outcomes = optimize_row(ctx, alpha, &betas, gamma, ObjectiveKind::RhoA);
        for o in &outcomes {
            let (Some(tpaw), Some(paw)) = (&o.tpaw, &o.paw) else {
                continue;
            };
            let env = ctx.env(o.alpha, o.beta, gamma).expect("grid point valid");
            let rer_t = (tpaw.best_value - o.alpha) / o.alpha;
            let rer_p = (paw.best_value - o.alpha) / o.alpha;
            let rest_base = env.rest();
            let rest_rer = |r: &OptimizationResult| {
                let report = analytics::revenue_report(&env, &r.best);
                (report.rho_rest - rest_base) / rest_base
            };
            let lag = |r: &OptimizationResult| {
                // In units of the target epoch duration.
                analytics::profit_lag(&env, &r.best, Entity::Adversary) / ctx.tau0
            };
            let xy = [num(o.alpha), num(o.beta)];
            panels[0].row([&xy[0], &xy[1], &num(rer_p)])?;
            panels[1].row([&xy[0], &xy[1], &num(rer_t)])?;
            panels[2].row([&xy[0], &xy[1], &num(rest_rer(paw))])?;
            panels[3].row([&xy[0], &xy[1], &num(rest_rer(tpaw))])?;
            panels[4].row([&xy[0], &xy[1], &num(lag(paw))])?;
            panels[5].row([&xy[0], &xy[1], &num(lag(tpaw))])?;
            let ratio = if rer_p > 0.0 { num(rer_t / rer_p) } else { "nan".into() };
            panels[6].row([&xy[0], &xy[1], &ratio])?;

            let theta = tpaw.best.theta();
            let red = !theta.is_infinite() && theta.as_f64() < 1.0 && tpaw.best.p2() > 0.999;
            let coincident = (tpaw.best_value - paw.best_value).abs() <= 1e-10;
            opt_values.row([
                num(o.alpha),
                num(o.beta),
                num(paw.best.p1()),
                num(paw.best.p2()),
                num(tpaw.best.p1()),
                num(tpaw.best.p2()),
                theta.to_string(),
                u8::from(red).to_string(),
                u8::from(coincident).to_string(),
            ])?;
        }
        for p in &mut panels {
            p.flush()?;
        }
        opt_values.flush()?;
    }
    Ok(())
}

/// fig4: adversary RER under both families as gamma varies, five cases.
type GammaRow = (f64, Option<(f64, f64, String, f64)>);

fn gamma_sweep(ctx: &FigureContext, gamma_step: f64) -> Result<(), CliError> {
    let mut file = ctx.open(
        "fig4_rer_vs_gamma.csv",
        &[
            "alpha",
            "beta",
            "gamma",
            "rer_paw",
            "rer_tpaw",
            "theta_tpaw",
            "p2_tpaw",
        ],
    )?;
    let mut gammas = Vec::new();
    let mut g = 0.0f64;
    while g < 1.0 + 1e-12 {
        gammas.push(g.min(1.0));
        g += gamma_step;
    }
    for (alpha, beta) in GAMMA_SWEEP_CASES {
        let rows: Vec<GammaRow> = gammas
            .par_iter()
            .map(|&gamma| {
                let Ok(env) = ctx.env(alpha, beta, gamma) else {
                    return (gamma, None);
                };
                let tpaw = maximize(
                    &env,
                    &objective(VariantTag::TpawExact, ObjectiveKind::RhoA),
                    &ctx.config,
                );
                let paw = maximize(
                    &env,
                    &objective(VariantTag::PawExact, ObjectiveKind::RhoA),
                    &ctx.config,
                );
                match (tpaw, paw) {
                    (Ok(t), Ok(p)) => (
                        gamma,
                        Some((
                            (p.best_value - alpha) / alpha,
                            (t.best_value - alpha) / alpha,
                            t.best.theta().to_string(),
                            t.best.p2(),
                        )),
                    ),
                    _ => (gamma, None),
                }
            })
            .collect();
        for (gamma, data) in rows {
            if let Some((rer_p, rer_t, theta, p2)) = data {
                file.row([
                    num(alpha),
                    num(beta),
                    num(gamma),
                    num(rer_p),
                    num(rer_t),
                    theta,
                    num(p2),
                ])?;
            }
        }
        file.flush()?;
    }
    Ok(())
}

/// fig5: maximized relative revenue change at the first adjustment, gamma 0.
fn revenue_change_maps(ctx: &FigureContext, resolution: f64) -> Result<(), CliError> {
    let mut paw_file = ctx.open(
        "fig5_paw_revenue_change.csv",
        &["alpha", "beta", "value", "p1", "p2", "positive"],
    )?;
    let mut tpaw_file = ctx.open(
        "fig5_tpaw_revenue_change.csv",
        &["alpha", "beta", "value", "p1", "p2", "theta", "positive"],
    )?;
    for &alpha in &axis(resolution) {
        let betas: Vec<f64> = axis(resolution)
            .into_iter()
            .filter(|beta| alpha + beta < 0.5)
            .collect();
        if betas.is_empty() {
            continue;
        }
        let outcomes = optimize_row(
            ctx,
            alpha,
            &betas,
            0.0,
            ObjectiveKind::RelativeRevenueChangeAtT1,
        );
        for o in &outcomes {
            if let Some(paw) = &o.paw {
                paw_file.row([
                    num(o.alpha),
                    num(o.beta),
                    num(paw.best_value),
                    num(paw.best.p1()),
                    num(paw.best.p2()),
                    u8::from(paw.best_value > 0.0).to_string(),
                ])?;
            }
            if let Some(tpaw) = &o.tpaw {
                tpaw_file.row([
                    num(o.alpha),
                    num(o.beta),
                    num(tpaw.best_value),
                    num(tpaw.best.p1()),
                    num(tpaw.best.p2()),
                    tpaw.best.theta().to_string(),
                    u8::from(tpaw.best_value > 0.0).to_string(),
                ])?;
            }
        }
        paw_file.flush()?;
        tpaw_file.flush()?;
    }
    Ok(())
}
