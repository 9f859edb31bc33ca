//! Closed-form attack quantities: per-cycle expected rewards, long-run
//! revenue ratios, block redundancy, and the temporal metrics (relative
//! extra reward, revenue change over time, profit lag).
//!
//! Everything here is a pure function of validated inputs. The formulas are
//! expressed in the dimensionless budget `theta = lambda1 * T`, so reports
//! are invariant under joint rescaling of the block rate and the deadline.

use crate::error::{Error, Result};
use crate::model::{derive_constants, DerivedConstants, EnvironmentParams, Strategy, Theta};
use crate::special::{self, ShareTerms};

/// Expected per-cycle rewards and block counts.
///
/// `eb_a + eb_p + eb_r = eb_c` holds exactly: canonical rewards partition
/// among the adversary, the rest of the pool, and outside honest miners.
#[derive(Debug, Clone, Copy)]
pub struct CycleExpectations {
    /// Adversary reward per cycle.
    pub eb_a: f64,
    /// Honest-pool reward per cycle.
    pub eb_p: f64,
    /// Outside-honest reward per cycle.
    pub eb_r: f64,
    /// Canonical (longest-chain) reward per cycle; in [1, 2].
    pub eb_c: f64,
    /// Total blocks found per cycle, canonical or not; >= eb_c.
    pub eb_o: f64,
    pub shares: ShareTerms,
}

/// Long-run revenue ratios and the block redundancy ratio.
#[derive(Debug, Clone, Copy)]
pub struct RevenueReport {
    pub rho_a: f64,
    pub rho_pool: f64,
    pub rho_rest: f64,
    /// Expected total blocks per canonical block; 1 exactly iff no
    /// withholding ever happens.
    pub delta: f64,
}

/// The reward-receiving entities of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entity {
    Adversary,
    Pool,
    Rest,
}

impl Entity {
    pub const ALL: [Entity; 3] = [Entity::Adversary, Entity::Pool, Entity::Rest];

    pub fn name(self) -> &'static str {
        match self {
            Entity::Adversary => "adversary",
            Entity::Pool => "pool",
            Entity::Rest => "rest",
        }
    }
}

impl RevenueReport {
    pub fn ratio(&self, entity: Entity) -> f64 {
        match entity {
            Entity::Adversary => self.rho_a,
            Entity::Pool => self.rho_pool,
            Entity::Rest => self.rho_rest,
        }
    }
}

/// Honest-baseline revenue ratio of an entity: its hashpower fraction.
pub fn honest_share(env: &EnvironmentParams, entity: Entity) -> f64 {
    match entity {
        Entity::Adversary => env.alpha(),
        Entity::Pool => env.beta(),
        Entity::Rest => env.rest(),
    }
}

fn honest_cycle(c: &DerivedConstants) -> CycleExpectations {
    let r1 = c.a1p;
    CycleExpectations {
        eb_a: c.alpha,
        eb_p: c.beta,
        eb_r: 1.0 - c.alpha - c.beta,
        eb_c: 1.0,
        eb_o: 1.0,
        shares: ShareTerms { r1, rs: r1, ru: r1 },
    }
}

/// Expected per-cycle quantities for one environment and strategy.
///
/// The infinite budget substitutes the exact limits (`e^{-lambda2 T} -> 0`,
/// `ru -> r_inf`, truncated mean `-> 1/lambda2`). A zero budget collapses to
/// the honest cycle exactly rather than through the algebra, whose floating
/// point would smear `eb_a = alpha` by an ulp.
pub fn cycle_expectations(env: &EnvironmentParams, s: &Strategy) -> CycleExpectations {
    let c = derive_constants(env, s);
    if s.theta().is_zero() {
        return honest_cycle(&c);
    }
    let shares = special::share_terms(&c);

    let alpha = c.alpha;
    let beta = c.beta;
    let rest = 1.0 - alpha - beta;
    let denom = 1.0 - alpha * c.p2;
    let k = rest / denom;
    let w = alpha * c.p1;
    let fork_win = c.fork_win_probability();
    let unrational = if c.rational_manager { 0.0 } else { 1.0 };

    // q = P(no foreign block within the deadline) = e^{-lambda2 T}.
    let (q, one_minus_q, timed_orphans, held_orphans) = match s.theta() {
        Theta::Infinite => (0.0, 1.0, 0.0, alpha * c.p2 / denom),
        Theta::Finite(theta) => {
            let x = denom * theta; // lambda2 * T, dimensionless
            let q = (-x).exp();
            let one_minus_q = -(-x).exp_m1();
            // alpha p2 lambda1 T_e = alpha p2/(1-alpha p2) * (1 - x/(e^x-1)).
            let held = alpha * c.p2 / denom * (1.0 - x / x.exp_m1());
            (q, one_minus_q, q * alpha * c.p2 * theta, held)
        }
    };

    let eb_c = 1.0 + w * one_minus_q * k;
    let eb_a = alpha * (1.0 - c.p1)
        + beta * shares.r1
        + w * (q * shares.rs
            + one_minus_q
                * (alpha * (1.0 - c.p2) / denom
                    + beta / denom * shares.ru
                    + k * (shares.ru * fork_win + alpha)));
    let eb_p = beta * (1.0 - shares.r1)
        + w * (q * (1.0 - shares.rs)
            + one_minus_q
                * (beta / denom * (1.0 - shares.ru)
                    + k * ((1.0 - shares.ru) * fork_win + beta)));
    let eb_r = rest * (1.0 + one_minus_q * w / denom * (rest * (2.0 - c.gamma) + beta * unrational));
    let eb_o = eb_c + w * (timed_orphans + one_minus_q * (1.0 + held_orphans));

    CycleExpectations {
        eb_a,
        eb_p,
        eb_r,
        eb_c,
        eb_o,
        shares,
    }
}

/// Revenue ratios and redundancy from the cycle expectations. Each ratio is
/// computed from the unnormalized expectations directly, never chained
/// through other ratios.
pub fn revenue_report(env: &EnvironmentParams, s: &Strategy) -> RevenueReport {
    let e = cycle_expectations(env, s);
    RevenueReport {
        rho_a: e.eb_a / e.eb_c,
        rho_pool: e.eb_p / e.eb_c,
        rho_rest: e.eb_r / e.eb_c,
        delta: e.eb_o / e.eb_c,
    }
}

/// Relative extra reward of strategy `S1` over `S2` for one entity:
/// `(rho^{S1} - rho^{S2}) / rho^{S2}`.
pub fn rer(report_s1: &RevenueReport, report_s2: &RevenueReport, entity: Entity) -> Result<f64> {
    let base = report_s2.ratio(entity);
    if base == 0.0 {
        return Err(Error::DivisionByZero(format!(
            "baseline revenue ratio of {} is zero",
            entity.name()
        )));
    }
    Ok((report_s1.ratio(entity) - base) / base)
}

/// Piecewise-linear revenue-change curve of one entity against the honest
/// counterfactual, fixed at attack start. Immutable; evaluate with
/// [`DeltaEvaluator::at`].
///
/// Before the difficulty adjustment at `t1 = delta * tau0` the canonical
/// chain grows slowed by `delta`; afterwards the rate is restored and the
/// curve continues with slope `rho_s - rho_h` per `tau0`.
#[derive(Debug, Clone, Copy)]
pub struct DeltaEvaluator {
    rho_s: f64,
    rho_h: f64,
    delta: f64,
    tau0: f64,
}

impl DeltaEvaluator {
    pub fn new(env: &EnvironmentParams, s: &Strategy, entity: Entity) -> Self {
        let report = revenue_report(env, s);
        Self::from_report(env, &report, entity)
    }

    pub fn from_report(env: &EnvironmentParams, report: &RevenueReport, entity: Entity) -> Self {
        Self {
            rho_s: report.ratio(entity),
            rho_h: honest_share(env, entity),
            delta: report.delta,
            tau0: env.tau0(),
        }
    }

    /// End of the first (slowed) difficulty epoch.
    pub fn t1(&self) -> f64 {
        self.delta * self.tau0
    }

    /// Revenue change at time `t >= 0`, in units of one honest epoch's
    /// total reward.
    pub fn at(&self, t: f64) -> f64 {
        let t1 = self.t1();
        let gap = self.rho_s - self.rho_h * self.delta;
        if t <= t1 {
            gap * t / t1
        } else {
            gap + (self.rho_s - self.rho_h) * (t - t1) / self.tau0
        }
    }

    /// First time after which the curve stays strictly positive;
    /// `f64::INFINITY` when it never does. The identically-zero curve of the
    /// honest strategy reports 0.
    pub fn profit_lag(&self) -> f64 {
        let gap = self.rho_s - self.rho_h * self.delta;
        let slope = self.rho_s - self.rho_h;
        if gap == 0.0 && slope == 0.0 {
            return 0.0;
        }
        if slope <= 0.0 {
            // Eventually nonincreasing (or stuck at gap <= 0): never
            // permanently positive. gap > 0 with slope <= 0 cannot occur
            // since gap = slope - rho_h (delta - 1) <= slope.
            return f64::INFINITY;
        }
        if gap > 0.0 {
            0.0
        } else {
            // Crossing of the second branch: t1 + tau0 * (-gap) / slope.
            self.t1() + self.tau0 * (-gap) / slope
        }
    }
}

/// Revenue change `Delta_x(t)` of an entity at time `t` under strategy `s`.
pub fn revenue_change(env: &EnvironmentParams, s: &Strategy, entity: Entity, t: f64) -> f64 {
    DeltaEvaluator::new(env, s, entity).at(t)
}

/// Revenue change normalized by the entity's honest ratio. Errors when the
/// entity has no hashpower.
pub fn relative_revenue_change(
    env: &EnvironmentParams,
    s: &Strategy,
    entity: Entity,
    t: f64,
) -> Result<f64> {
    let base = honest_share(env, entity);
    if base == 0.0 {
        return Err(Error::DivisionByZero(format!(
            "honest share of {} is zero",
            entity.name()
        )));
    }
    Ok(revenue_change(env, s, entity, t) / base)
}

/// Profit lag of an entity under strategy `s` (possibly `f64::INFINITY`).
pub fn profit_lag(env: &EnvironmentParams, s: &Strategy, entity: Entity) -> f64 {
    DeltaEvaluator::new(env, s, entity).profit_lag()
}

/// Temporal metrics of one strategy against the honest baseline: RER for all
/// three entities plus the adversary's revenue-change curve and profit lag.
#[derive(Debug, Clone, Copy)]
pub struct TemporalMetrics {
    pub rer_a: f64,
    pub rer_pool: f64,
    pub rer_rest: f64,
    /// Adversary revenue-change evaluator.
    pub delta_at: DeltaEvaluator,
    /// Adversary profit lag.
    pub profit_lag: f64,
}

/// Computes [`TemporalMetrics`]; errors if any entity has zero hashpower
/// (its RER baseline would divide by zero).
pub fn temporal_metrics(env: &EnvironmentParams, s: &Strategy) -> Result<TemporalMetrics> {
    let report = revenue_report(env, s);
    let mut rers = [0.0; 3];
    for (i, entity) in Entity::ALL.iter().enumerate() {
        let base = honest_share(env, *entity);
        if base == 0.0 {
            return Err(Error::DivisionByZero(format!(
                "honest share of {} is zero",
                entity.name()
            )));
        }
        rers[i] = (report.ratio(*entity) - base) / base;
    }
    let delta_at = DeltaEvaluator::from_report(env, &report, Entity::Adversary);
    Ok(TemporalMetrics {
        rer_a: rers[0],
        rer_pool: rers[1],
        rer_rest: rers[2],
        delta_at,
        profit_lag: delta_at.profit_lag(),
    })
}
