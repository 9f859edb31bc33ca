//! Stochastic oracles for the closed forms.
//!
//! Two simulators live here. The per-cycle simulator transcribes the attack
//! cycle's event tree directly (a four-way race for the first block, an
//! optional withholding phase ended by a deadline or a foreign block, and a
//! one-round fork race) and estimates every closed-form quantity with
//! standard errors. The timeline simulator chains cycles through difficulty
//! epochs under the adjustment rule and measures epoch durations, realized
//! redundancy, and cumulative rewards.
//!
//! Cycles are sampled in dimensionless time (units of one expected honest
//! block), so runs at `(lambda1, T)` and `(k lambda1, T/k)` consume identical
//! randomness and produce identical rewards; wall-clock times are scaled once
//! at the end. Each cycle draws from its own counter-based stream, which
//! makes estimates independent of thread count.

use rayon::prelude::*;

use crate::model::{EnvironmentParams, Strategy, Theta};
use crate::rng::Stream;

/// How an attack cycle ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalCase {
    /// An outside honest miner found the first block.
    OutsideWinsPre,
    /// The adversary's individual power found the first block.
    AdvSoloPre,
    /// The target pool found the first block (no fPoW withheld).
    PoolWinsPre,
    /// Nobody but adversarial pool mining produced a block before the
    /// deadline; the fPoW was released and accepted.
    TimedRelease,
    /// The adversary's individual power found a block during withholding.
    AdvSoloWithhold,
    /// An honest pool member found a block during withholding.
    PoolWinsWithhold,
    /// Fork race: the adversary extended its own released fPoW.
    ForkAdvExtends,
    /// Fork race: the pool extended the released fPoW (rational manager),
    /// or its own honest side otherwise.
    ForkPoolExtends,
    /// Fork race: an outside miner extended the released fPoW.
    ForkOutsideOnAdv,
    /// Fork race: an outside miner extended the competing honest block.
    ForkOutsideOnHonest,
}

impl TerminalCase {
    pub const ALL: [TerminalCase; 10] = [
        TerminalCase::OutsideWinsPre,
        TerminalCase::AdvSoloPre,
        TerminalCase::PoolWinsPre,
        TerminalCase::TimedRelease,
        TerminalCase::AdvSoloWithhold,
        TerminalCase::PoolWinsWithhold,
        TerminalCase::ForkAdvExtends,
        TerminalCase::ForkPoolExtends,
        TerminalCase::ForkOutsideOnAdv,
        TerminalCase::ForkOutsideOnHonest,
    ];

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|c| *c == self).expect("listed")
    }

    pub fn name(self) -> &'static str {
        match self {
            TerminalCase::OutsideWinsPre => "outside_wins_pre",
            TerminalCase::AdvSoloPre => "adv_solo_pre",
            TerminalCase::PoolWinsPre => "pool_wins_pre",
            TerminalCase::TimedRelease => "timed_release",
            TerminalCase::AdvSoloWithhold => "adv_solo_withhold",
            TerminalCase::PoolWinsWithhold => "pool_wins_withhold",
            TerminalCase::ForkAdvExtends => "fork_adv_extends",
            TerminalCase::ForkPoolExtends => "fork_pool_extends",
            TerminalCase::ForkOutsideOnAdv => "fork_outside_on_adv",
            TerminalCase::ForkOutsideOnHonest => "fork_outside_on_honest",
        }
    }

    /// Whether the withholding phase ended by a foreign block (the cases
    /// whose realized fPoW share estimates the interrupted-share term).
    pub fn interrupted_withholding(self) -> bool {
        matches!(
            self,
            TerminalCase::AdvSoloWithhold
                | TerminalCase::PoolWinsWithhold
                | TerminalCase::ForkAdvExtends
                | TerminalCase::ForkPoolExtends
                | TerminalCase::ForkOutsideOnAdv
                | TerminalCase::ForkOutsideOnHonest
        )
    }
}

/// One realized attack cycle.
#[derive(Debug, Clone, Copy)]
pub struct CycleSample {
    /// Rewards from canonical blocks, by entity. Always satisfy
    /// `b_a + b_p + b_r = b_c` up to one rounding ulp.
    pub b_a: f64,
    pub b_p: f64,
    pub b_r: f64,
    /// Canonical blocks this cycle (1, or 2 after a fork race).
    pub b_c: f64,
    /// All blocks found this cycle, canonical or orphaned.
    pub b_o: f64,
    /// Realized adversary share of the withheld fPoW, when one existed.
    pub fpow_share: Option<f64>,
    pub terminal_case: TerminalCase,
    /// Cycle duration in wall-clock units of the given environment.
    pub wall_time: f64,
}

/// Samples one attack cycle from its event tree.
pub fn simulate_cycle(env: &EnvironmentParams, s: &Strategy, rng: &mut Stream) -> CycleSample {
    let alpha = env.alpha();
    let beta = env.beta();
    let rest = env.rest();
    let p1 = s.p1();
    let p2 = s.p2();
    let a1 = beta + alpha * p1;
    let a2 = beta + alpha * p2;
    let theta = s.theta().as_f64();

    // First race: who finds the first block, and when (dimensionless time).
    let who = rng.next_f64();
    let t1 = rng.exponential(1.0);
    let adv_solo = alpha * (1.0 - p1);

    let lambda1 = env.lambda1();
    let finish = |b_a: f64,
                  b_p: f64,
                  b_r: f64,
                  b_c: f64,
                  b_o: f64,
                  fpow_share: Option<f64>,
                  terminal_case: TerminalCase,
                  dimensionless_wall: f64| {
        debug_assert!((b_a + b_p + b_r - b_c).abs() <= 4.0 * f64::EPSILON * b_c);
        debug_assert!(b_o >= b_c);
        CycleSample {
            b_a,
            b_p,
            b_r,
            b_c,
            b_o,
            fpow_share,
            terminal_case,
            wall_time: dimensionless_wall / lambda1,
        }
    };

    if who < rest {
        return finish(0.0, 0.0, 1.0, 1.0, 1.0, None, TerminalCase::OutsideWinsPre, t1);
    }
    if who < rest + adv_solo {
        return finish(1.0, 0.0, 0.0, 1.0, 1.0, None, TerminalCase::AdvSoloPre, t1);
    }
    if who < rest + adv_solo + beta {
        // Pool block: shares split by contributed work, a1' to the adversary.
        let share = if a1 == 0.0 { 0.0 } else { alpha * p1 / a1 };
        return finish(
            share,
            1.0 - share,
            0.0,
            1.0,
            1.0,
            None,
            TerminalCase::PoolWinsPre,
            t1,
        );
    }

    // Withholding phase: the adversary found a pool fPoW at t1 and now mines
    // with p2. Blocks from anyone else arrive at rate 1 - alpha p2; further
    // adversarial pool fPoWs (rate alpha p2) replace the held one and only
    // ever count as orphans.
    let foreign_rate = 1.0 - alpha * p2;
    let t2 = rng.exponential(foreign_rate);

    if t2 >= theta {
        // Deadline reached: release the fPoW, which is accepted unopposed.
        let held = t1 * (alpha * p1) + theta * (alpha * p2);
        let total = t1 * a1 + theta * a2;
        let share = if total == 0.0 { 0.0 } else { held / total };
        let orphans = rng.poisson(alpha * p2 * theta) as f64;
        return finish(
            share,
            1.0 - share,
            0.0,
            1.0,
            1.0 + orphans,
            Some(share),
            TerminalCase::TimedRelease,
            t1 + theta,
        );
    }

    // A foreign block interrupted the withholding at t2.
    let orphans = rng.poisson(alpha * p2 * t2) as f64;
    let held = t1 * (alpha * p1) + t2 * (alpha * p2);
    let total = t1 * a1 + t2 * a2;
    let share = if total == 0.0 { 0.0 } else { held / total };
    let wall = t1 + t2;
    let u = rng.next_f64() * foreign_rate;

    if u < alpha * (1.0 - p2) {
        // The adversary's own individual block: release it, drop the fPoW.
        return finish(
            1.0,
            0.0,
            0.0,
            1.0,
            2.0 + orphans,
            Some(share),
            TerminalCase::AdvSoloWithhold,
            wall,
        );
    }
    if u < alpha * (1.0 - p2) + beta {
        // An honest pool block: accepted; the adversary keeps its work share.
        return finish(
            share,
            1.0 - share,
            0.0,
            1.0,
            2.0 + orphans,
            Some(share),
            TerminalCase::PoolWinsWithhold,
            wall,
        );
    }

    // An outside block: the fPoW is released and a one-round fork race
    // decides which side takes both canonical slots.
    let race_who = rng.next_f64();
    let race_time = rng.exponential(1.0);
    let wall = wall + race_time;
    if race_who < alpha {
        // The adversary extends its own fPoW: fPoW + new block canonical.
        return finish(
            1.0 + share,
            1.0 - share,
            0.0,
            2.0,
            3.0 + orphans,
            Some(share),
            TerminalCase::ForkAdvExtends,
            wall,
        );
    }
    if race_who < alpha + beta {
        if env.rational_manager() {
            // The pool extends the released fPoW; its new block is entirely
            // honest-pool work.
            return finish(
                share,
                (1.0 - share) + 1.0,
                0.0,
                2.0,
                3.0 + orphans,
                Some(share),
                TerminalCase::ForkPoolExtends,
                wall,
            );
        }
        // A non-rational manager keeps the pool on the honest side, so the
        // outside block and the pool block become canonical.
        return finish(
            0.0,
            1.0,
            1.0,
            2.0,
            3.0 + orphans,
            Some(share),
            TerminalCase::ForkPoolExtends,
            wall,
        );
    }
    // An outside miner ends the race; gamma of them build on the fPoW.
    if rng.bernoulli(env.gamma()) {
        finish(
            share,
            1.0 - share,
            1.0,
            2.0,
            3.0 + orphans,
            Some(share),
            TerminalCase::ForkOutsideOnAdv,
            wall,
        )
    } else {
        finish(
            0.0,
            0.0,
            2.0,
            2.0,
            3.0 + orphans,
            Some(share),
            TerminalCase::ForkOutsideOnHonest,
            wall,
        )
    }
}

/// A point estimate with its standard error.
#[derive(Debug, Clone, Copy)]
pub struct RatioEstimate {
    pub value: f64,
    pub std_error: f64,
}

impl RatioEstimate {
    /// Distance from `reference` in standard errors.
    pub fn z_score(&self, reference: f64) -> f64 {
        (self.value - reference) / self.std_error
    }
}

#[derive(Debug, Clone, Default)]
struct Accumulator {
    n: u64,
    // Sums, squared sums, and cross-products with b_c for the ratio
    // estimators: order b_a, b_p, b_r, b_c, b_o.
    sums: [f64; 5],
    squares: [f64; 5],
    cross_c: [f64; 5],
    wall: f64,
    timed_n: u64,
    timed_share: f64,
    timed_share_sq: f64,
    interrupted_n: u64,
    interrupted_share: f64,
    interrupted_share_sq: f64,
    terminal_counts: [u64; 10],
}

impl Accumulator {
    fn push(&mut self, c: &CycleSample) {
        self.n += 1;
        let values = [c.b_a, c.b_p, c.b_r, c.b_c, c.b_o];
        for (i, v) in values.into_iter().enumerate() {
            self.sums[i] += v;
            self.squares[i] += v * v;
            self.cross_c[i] += v * c.b_c;
        }
        self.wall += c.wall_time;
        self.terminal_counts[c.terminal_case.index()] += 1;
        if let Some(share) = c.fpow_share {
            if c.terminal_case == TerminalCase::TimedRelease {
                self.timed_n += 1;
                self.timed_share += share;
                self.timed_share_sq += share * share;
            } else if c.terminal_case.interrupted_withholding() {
                self.interrupted_n += 1;
                self.interrupted_share += share;
                self.interrupted_share_sq += share * share;
            }
        }
    }

    fn merge(&mut self, other: &Accumulator) {
        self.n += other.n;
        for i in 0..5 {
            self.sums[i] += other.sums[i];
            self.squares[i] += other.squares[i];
            self.cross_c[i] += other.cross_c[i];
        }
        self.wall += other.wall;
        self.timed_n += other.timed_n;
        self.timed_share += other.timed_share;
        self.timed_share_sq += other.timed_share_sq;
        self.interrupted_n += other.interrupted_n;
        self.interrupted_share += other.interrupted_share;
        self.interrupted_share_sq += other.interrupted_share_sq;
        for i in 0..10 {
            self.terminal_counts[i] += other.terminal_counts[i];
        }
    }

    /// Delta-method standard error for the ratio mean(x)/mean(y), with x at
    /// `idx` and y = b_c.
    fn ratio(&self, idx: usize) -> RatioEstimate {
        let n = self.n as f64;
        let mean_x = self.sums[idx] / n;
        let mean_c = self.sums[3] / n;
        let value = mean_x / mean_c;
        let var_x = (self.squares[idx] - n * mean_x * mean_x) / (n - 1.0);
        let var_c = (self.squares[3] - n * mean_c * mean_c) / (n - 1.0);
        let cov = (self.cross_c[idx] - n * mean_x * mean_c) / (n - 1.0);
        let var_ratio =
            (var_x - 2.0 * value * cov + value * value * var_c) / (n * mean_c * mean_c);
        RatioEstimate {
            value,
            std_error: var_ratio.max(0.0).sqrt(),
        }
    }

    fn conditional_mean(n: u64, sum: f64, sum_sq: f64) -> Option<RatioEstimate> {
        if n < 2 {
            return None;
        }
        let nf = n as f64;
        let mean = sum / nf;
        let var = (sum_sq - nf * mean * mean) / (nf - 1.0);
        Some(RatioEstimate {
            value: mean,
            std_error: (var.max(0.0) / nf).sqrt(),
        })
    }
}

/// Monte Carlo estimates of the revenue report plus conditional share means,
/// with delta-method standard errors.
#[derive(Debug, Clone)]
pub struct SimulationEstimate {
    pub rho_a: RatioEstimate,
    pub rho_pool: RatioEstimate,
    pub rho_rest: RatioEstimate,
    pub delta: RatioEstimate,
    /// Mean realized fPoW share over timed-release cycles (estimates the
    /// timed-release share term); `None` if fewer than two such cycles.
    pub share_timed: Option<RatioEstimate>,
    /// Mean realized fPoW share over interrupted-withholding cycles.
    pub share_interrupted: Option<RatioEstimate>,
    /// Per-cycle means of (b_a, b_p, b_r, b_c, b_o).
    pub mean_rewards: [f64; 5],
    pub mean_wall_time: f64,
    pub terminal_counts: [u64; 10],
    pub n_cycles: u64,
    pub seed: u64,
}

/// Runs `n_cycles` independent cycles and forms ratio-of-means estimators.
/// Deterministic given the seed, regardless of thread count.
pub fn estimate_ratios(
    env: &EnvironmentParams,
    s: &Strategy,
    n_cycles: u64,
    seed: u64,
) -> SimulationEstimate {
    const CHUNK: u64 = 1 << 16;
    assert!(n_cycles >= 2, "need at least two cycles");
    let n_chunks = n_cycles.div_ceil(CHUNK);
    let partials: Vec<Accumulator> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(n_cycles);
            let mut acc = Accumulator::default();
            for index in lo..hi {
                let mut rng = Stream::new(seed, index);
                acc.push(&simulate_cycle(env, s, &mut rng));
            }
            acc
        })
        .collect();
    let mut total = Accumulator::default();
    for p in &partials {
        total.merge(p);
    }

    let n = total.n as f64;
    SimulationEstimate {
        rho_a: total.ratio(0),
        rho_pool: total.ratio(1),
        rho_rest: total.ratio(2),
        delta: total.ratio(4),
        share_timed: Accumulator::conditional_mean(
            total.timed_n,
            total.timed_share,
            total.timed_share_sq,
        ),
        share_interrupted: Accumulator::conditional_mean(
            total.interrupted_n,
            total.interrupted_share,
            total.interrupted_share_sq,
        ),
        mean_rewards: [
            total.sums[0] / n,
            total.sums[1] / n,
            total.sums[2] / n,
            total.sums[3] / n,
            total.sums[4] / n,
        ],
        mean_wall_time: total.wall / n,
        terminal_counts: total.terminal_counts,
        n_cycles,
        seed,
    }
}

/// Deadline handling across difficulty changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimelinePolicy {
    /// Rescale the wall-clock deadline with difficulty so the dimensionless
    /// budget stays constant (the stationary policy).
    RescaleDeadline,
    /// Keep the wall-clock deadline fixed; the effective budget drifts as
    /// the block rate changes.
    FixedDeadline,
}

/// One difficulty epoch of a timeline run.
#[derive(Debug, Clone, Copy)]
pub struct EpochRecord {
    /// Wall-clock duration.
    pub duration: f64,
    /// Difficulty during this epoch (1.0 = honest steady state).
    pub difficulty: f64,
    /// Dimensionless withholding budget in effect.
    pub theta_effective: f64,
    /// Canonical blocks credited to this epoch (exactly d0; integer-valued).
    pub canonical_blocks: u64,
    /// All blocks found in the epoch's cycles.
    pub total_blocks: u64,
    /// Canonical rewards earned this epoch by (adversary, pool, rest).
    pub rewards: [f64; 3],
}

/// Result of a multi-epoch timeline simulation.
#[derive(Debug, Clone)]
pub struct TimelineResult {
    pub epochs: Vec<EpochRecord>,
    /// Cumulative (adversary, pool, rest) rewards at each epoch boundary.
    pub cumulative_rewards: Vec<[f64; 3]>,
    /// Total blocks per canonical block over the first epoch.
    pub empirical_delta: f64,
}

/// Simulates `n_epochs` difficulty epochs. Each epoch runs attack cycles at
/// the epoch's block rate until `d0` canonical blocks have been credited
/// (a fork cycle can overshoot by one; the surplus carries into the next
/// epoch). At each boundary the difficulty is rescaled by
/// `realized duration / target duration`, restoring the target rate.
pub fn simulate_timeline(
    env: &EnvironmentParams,
    s: &Strategy,
    n_epochs: u32,
    policy: TimelinePolicy,
    seed: u64,
) -> TimelineResult {
    assert!(n_epochs >= 1);
    let d0 = u64::from(env.d0());
    let theta0 = s.theta();
    let mut difficulty = 1.0;
    let mut carry = 0.0;
    let mut cycle_counter = 0u64;
    let mut epochs = Vec::with_capacity(n_epochs as usize);
    let mut cumulative = [0.0f64; 3];
    let mut cumulative_rewards = Vec::with_capacity(n_epochs as usize);

    for _ in 0..n_epochs {
        // Higher difficulty slows everyone: block rate lambda1 / difficulty.
        let rate = env.lambda1() / difficulty;
        let theta_eff = match (policy, theta0) {
            (TimelinePolicy::RescaleDeadline, t) => t,
            (TimelinePolicy::FixedDeadline, Theta::Infinite) => Theta::Infinite,
            (TimelinePolicy::FixedDeadline, Theta::Finite(t0)) => {
                // Fixed wall deadline T0 = theta0/lambda1 at the current rate.
                Theta::Finite(t0 / difficulty)
            }
        };
        let epoch_strategy =
            Strategy::new(s.p1(), s.p2(), theta_eff).expect("allocations already validated");

        let mut canonical = carry;
        let mut duration = 0.0;
        let mut total_blocks = 0.0;
        let mut rewards = [0.0f64; 3];
        while canonical < d0 as f64 {
            let mut rng = Stream::new(seed, cycle_counter);
            cycle_counter += 1;
            let c = simulate_cycle(env, &epoch_strategy, &mut rng);
            // The cycle ran at `rate`, not lambda1; rescale its wall time.
            duration += c.wall_time * env.lambda1() / rate;
            canonical += c.b_c;
            total_blocks += c.b_o;
            rewards[0] += c.b_a;
            rewards[1] += c.b_p;
            rewards[2] += c.b_r;
        }
        carry = canonical - d0 as f64;

        epochs.push(EpochRecord {
            duration,
            difficulty,
            theta_effective: theta_eff.as_f64(),
            canonical_blocks: d0,
            total_blocks: total_blocks.round() as u64,
            rewards,
        });
        for i in 0..3 {
            cumulative[i] += rewards[i];
        }
        cumulative_rewards.push(cumulative);

        // DAA rule: d_next = d_current * tau0 / tau_realized. A slow epoch
        // lowers difficulty, raising the block rate for the next one.
        difficulty *= env.tau0() / duration;
    }

    let first = &epochs[0];
    TimelineResult {
        empirical_delta: first.total_blocks as f64 / first.canonical_blocks as f64,
        epochs,
        cumulative_rewards,
    }
}
