//! Shared flag groups for parameter points and their resolution against a
//! config file.

use std::path::Path;

use pool_attack::variants::{VariantKind, VariantTag};
use pool_attack::{EnvironmentParams, Strategy, Theta};

use crate::config::Settings;
use crate::CliError;

pub const DEFAULT_LAMBDA1: f64 = 1.0 / 600.0;
pub const DEFAULT_D0: u32 = 2016;
pub const DEFAULT_TAU0: f64 = 1_209_600.0;

#[derive(Debug, clap::Args)]
pub struct EnvArgs {
    /// Adversarial hash fraction.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Target-pool hash fraction.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Fraction of outside miners that adopt the adversary's block in races.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Whether the pool manager extends the adversary's released block.
    #[arg(long)]
    pub rational: Option<bool>,
    /// Honest block rate (blocks per second).
    #[arg(long)]
    pub lambda1: Option<f64>,
    /// Canonical blocks per difficulty epoch.
    #[arg(long)]
    pub d0: Option<u32>,
    /// Target epoch duration (seconds).
    #[arg(long)]
    pub tau0: Option<f64>,
}

impl EnvArgs {
    /// Resolves the environment; `alpha` and `beta` are required (from flag
    /// or config file).
    pub fn resolve(self, settings: &mut Settings) -> Result<EnvironmentParams, CliError> {
        let alpha = settings
            .get_opt("alpha", self.alpha)?
            .ok_or_else(|| CliError::validation("--alpha is required"))?;
        let beta = settings
            .get_opt("beta", self.beta)?
            .ok_or_else(|| CliError::validation("--beta is required"))?;
        let (gamma, rational, lambda1, d0, tau0) = self.resolve_rest(settings)?;
        Ok(EnvironmentParams::new(
            alpha, beta, gamma, rational, lambda1, d0, tau0,
        )?)
    }

    /// Resolves everything except `alpha`/`beta` (grid sweeps supply those
    /// per point).
    pub fn resolve_rest(
        &self,
        settings: &mut Settings,
    ) -> Result<(f64, bool, f64, u32, f64), CliError> {
        let gamma = settings.get("gamma", self.gamma, 0.0)?;
        let rational = settings.get("rational", self.rational, true)?;
        let lambda1 = settings.get("lambda1", self.lambda1, DEFAULT_LAMBDA1)?;
        let d0 = settings.get("d0", self.d0, DEFAULT_D0)?;
        let tau0 = settings.get("tau0", self.tau0, DEFAULT_TAU0)?;
        Ok((gamma, rational, lambda1, d0, tau0))
    }
}

#[derive(Debug, clap::Args)]
pub struct StrategyArgs {
    /// Pool allocation before a withheld block exists.
    #[arg(long)]
    pub p1: Option<f64>,
    /// Pool allocation while withholding.
    #[arg(long)]
    pub p2: Option<f64>,
    /// Dimensionless withholding budget lambda1*T; `inf` for unbounded,
    /// 0 for honest.
    #[arg(long)]
    pub theta: Option<String>,
}

impl StrategyArgs {
    pub fn resolve(self, settings: &mut Settings) -> Result<Strategy, CliError> {
        let p1 = settings.get("p1", self.p1, 0.0)?;
        let p2 = settings.get("p2", self.p2, 0.0)?;
        let theta_raw = settings.get("theta", self.theta, "0".to_string())?;
        let theta: Theta = theta_raw.parse()?;
        Ok(Strategy::new(p1, p2, theta)?)
    }
}

#[derive(Debug, clap::Args)]
pub struct VariantArgs {
    /// Strategy family: tpaw, paw, tpaw-c, paw-c, faw, bwh, honest.
    #[arg(long)]
    pub variant: Option<String>,
    /// Fork-win probability override for the c-model families.
    #[arg(long)]
    pub c: Option<f64>,
}

impl VariantArgs {
    pub fn resolve(
        self,
        settings: &mut Settings,
        default_tag: VariantTag,
    ) -> Result<VariantKind, CliError> {
        let tag_raw = settings.get("variant", self.variant, default_tag.name().to_string())?;
        let tag: VariantTag = tag_raw.parse()?;
        let c = settings.get_opt("c", self.c)?;
        Ok(VariantKind::new(tag, c)?)
    }
}

/// Resolves the global seed (flag already recorded by main when present).
pub fn resolve_seed(settings: &mut Settings, flag: Option<u64>) -> Result<u64, CliError> {
    settings.get("seed", flag, 0u64)
}

/// Resolves the output sink and records it.
pub fn record_out(settings: &mut Settings, out: Option<&Path>) {
    if let Some(path) = out {
        settings.record("out", path.display());
    }
}
