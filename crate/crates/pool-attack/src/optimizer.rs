//! Multi-start derivative-free maximization of attack objectives over
//! `(p1, p2, theta)`.
//!
//! The objectives compose quadrature and special functions and are neither
//! concave nor convex, so each start runs a bounded Nelder-Mead simplex and
//! the best local optimum wins. Start points come from a seeded
//! low-discrepancy sequence plus corner seeds on the `p2 = 1` face, where
//! optima concentrate. The infinite-deadline face is searched separately and
//! compared against the best finite optimum, so no finite cap biases the
//! result.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{EnvironmentParams, Strategy, Theta};
use crate::variants::{make_variant, VariantKind, VariantTag};

/// What the adversary maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveKind {
    /// Long-run adversary revenue ratio.
    RhoA,
    /// Adversary revenue change at the first difficulty adjustment.
    RevenueChangeAtT1,
    /// The same, normalized by the adversary's honest ratio.
    RelativeRevenueChangeAtT1,
}

impl ObjectiveKind {
    pub fn name(self) -> &'static str {
        match self {
            ObjectiveKind::RhoA => "rho_a",
            ObjectiveKind::RevenueChangeAtT1 => "revenue_change_at_t1",
            ObjectiveKind::RelativeRevenueChangeAtT1 => "relative_revenue_change_at_t1",
        }
    }
}

impl std::str::FromStr for ObjectiveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rho_a" | "rho-a" | "revenue_ratio" => Ok(ObjectiveKind::RhoA),
            "revenue_change_at_t1" | "revenue-change" => Ok(ObjectiveKind::RevenueChangeAtT1),
            "relative_revenue_change_at_t1" | "relative-revenue-change" => {
                Ok(ObjectiveKind::RelativeRevenueChangeAtT1)
            }
            other => Err(Error::ConstraintViolation(format!(
                "unknown objective {other:?}"
            ))),
        }
    }
}

/// An objective bound to a strategy family.
#[derive(Debug, Clone, Copy)]
pub struct Objective {
    pub kind: ObjectiveKind,
    pub variant: VariantKind,
}

/// Multi-start search configuration.
#[derive(Debug, Clone, Copy)]
pub struct OptimizerConfig {
    /// Local searches per optimization (split between the finite box and the
    /// infinite-deadline face for deadline-free families).
    pub n_starts: usize,
    /// Upper edge of the finite theta box. The infinite face is searched
    /// explicitly, so the cap only shapes start placement.
    pub theta_cap: f64,
    /// Simplex termination tolerance on the objective value.
    pub objective_tol: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            n_starts: 100,
            theta_cap: 50.0,
            objective_tol: 1e-10,
            max_iterations: 500,
            seed: 0,
        }
    }
}

/// One local search: where it started, where it converged, and what it found.
#[derive(Debug, Clone, Copy)]
pub struct StartRecord {
    pub start: Strategy,
    pub optimum: Strategy,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Outcome of a multi-start maximization.
#[derive(Debug, Clone)]
pub struct OptimizationResult {
    pub best: Strategy,
    pub best_value: f64,
    pub starts: usize,
    pub per_start: Vec<StartRecord>,
}

impl OptimizationResult {
    /// Objective value of the best strategy on the infinite-deadline face,
    /// if any start searched it.
    pub fn best_infinite_value(&self) -> Option<f64> {
        self.per_start
            .iter()
            .filter(|r| r.optimum.theta().is_infinite())
            .map(|r| r.value)
            .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
    }
}

/// Evaluates `objective` at one strategy. Strategies that violate the
/// family's constraints evaluate to negative infinity (never selected).
pub fn objective_value(env: &EnvironmentParams, objective: &Objective, s: &Strategy) -> f64 {
    let Ok(evaluator) = make_variant(objective.variant, env, *s) else {
        return f64::NEG_INFINITY;
    };
    match objective.kind {
        ObjectiveKind::RhoA => evaluator.rho_a(),
        ObjectiveKind::RevenueChangeAtT1 | ObjectiveKind::RelativeRevenueChangeAtT1 => {
            let Some(report) = evaluator.report() else {
                return f64::NEG_INFINITY;
            };
            // Both branches of the revenue-change curve meet at t1 with
            // value rho_A - alpha * delta.
            let change = report.rho_a - env.alpha() * report.delta;
            match objective.kind {
                ObjectiveKind::RevenueChangeAtT1 => change,
                _ => change / env.alpha(),
            }
        }
    }
}

fn validate_objective(env: &EnvironmentParams, objective: &Objective) -> Result<()> {
    if objective.kind != ObjectiveKind::RhoA && objective.variant.tag.uses_c_model() {
        return Err(Error::InfeasibleObjective(format!(
            "{} defines no redundancy ratio, so revenue-change objectives \
             cannot be evaluated; use an exact-model variant",
            objective.variant.tag.name()
        )));
    }
    if objective.kind == ObjectiveKind::RelativeRevenueChangeAtT1 && env.alpha() == 0.0 {
        return Err(Error::InfeasibleObjective(
            "relative revenue change is undefined for a powerless adversary".into(),
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Search-space descriptions
// ---------------------------------------------------------------------------

/// The free coordinates a family exposes to the simplex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SearchSpace {
    /// (p1, p2, theta) over the finite box.
    FiniteBox,
    /// (p1, p2) with theta pinned to infinity.
    InfiniteFace,
    /// A single pool allocation p = p1 = p2, theta infinite.
    EqualAllocation,
}

impl SearchSpace {
    fn dims(self) -> usize {
        match self {
            SearchSpace::FiniteBox => 3,
            SearchSpace::InfiniteFace => 2,
            SearchSpace::EqualAllocation => 1,
        }
    }
}

fn strategy_from(space: SearchSpace, x: &[f64], theta_cap: f64) -> Strategy {
    let clamp01 = |v: f64| v.clamp(0.0, 1.0);
    match space {
        SearchSpace::FiniteBox => Strategy::new(
            clamp01(x[0]),
            clamp01(x[1]),
            Theta::Finite(x[2].clamp(0.0, theta_cap)),
        )
        .expect("clamped into the box"),
        SearchSpace::InfiniteFace => {
            Strategy::new(clamp01(x[0]), clamp01(x[1]), Theta::Infinite).expect("clamped")
        }
        SearchSpace::EqualAllocation => {
            let p = clamp01(x[0]);
            Strategy::new(p, p, Theta::Infinite).expect("clamped")
        }
    }
}

/// Van der Corput radical inverse; bases 2, 3, 5 give a Halton sequence.
fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut factor = inv;
    let mut value = 0.0;
    while index > 0 {
        value += (index % base) as f64 * factor;
        index /= base;
        factor *= inv;
    }
    value
}

/// Start points: a Cranley-Patterson-rotated Halton sequence (deterministic
/// in the seed) over the unit cube of the space's dimension.
fn start_points(space: SearchSpace, count: usize, seed: u64, theta_cap: f64) -> Vec<Vec<f64>> {
    let dims = space.dims();
    let mut shift = crate::rng::Stream::new(seed, 0xC0_FFEE);
    let shifts: Vec<f64> = (0..dims).map(|_| shift.next_f64()).collect();
    const BASES: [u64; 3] = [2, 3, 5];
    (0..count as u64)
        .map(|i| {
            (0..dims)
                .map(|d| {
                    let u = (radical_inverse(i + 1, BASES[d]) + shifts[d]).fract();
                    match (space, d) {
                        // Bias theta starts toward the small-budget region
                        // while still covering the whole box.
                        (SearchSpace::FiniteBox, 2) => u * u * theta_cap,
                        _ => u,
                    }
                })
                .collect()
        })
        .collect()
}

/// Deterministic extra seeds on the p2 = 1 edge, where optima concentrate.
fn corner_seeds(space: SearchSpace, theta_cap: f64) -> Vec<Vec<f64>> {
    match space {
        SearchSpace::FiniteBox => {
            let mut seeds = Vec::new();
            for p1 in [0.25, 0.75] {
                for theta in [0.1f64, 1.0, 10.0] {
                    seeds.push(vec![p1, 1.0, theta.min(theta_cap)]);
                }
            }
            seeds
        }
        SearchSpace::InfiniteFace => vec![vec![0.25, 1.0], vec![0.75, 1.0]],
        SearchSpace::EqualAllocation => vec![vec![0.5], vec![1.0]],
    }
}

// ---------------------------------------------------------------------------
// Bounded Nelder-Mead
// ---------------------------------------------------------------------------

struct SimplexOutcome {
    x: Vec<f64>,
    value: f64,
    iterations: usize,
    converged: bool,
}

/// Maximizes `f` over the box `[lo, hi]` with a clamped Nelder-Mead simplex.
fn nelder_mead_bounded<F: Fn(&[f64]) -> f64>(
    f: &F,
    x0: &[f64],
    lo: &[f64],
    hi: &[f64],
    tol: f64,
    max_iterations: usize,
) -> SimplexOutcome {
    const REFLECT: f64 = 1.0;
    const EXPAND: f64 = 2.0;
    const CONTRACT: f64 = 0.5;
    const SHRINK: f64 = 0.5;

    let n = x0.len();
    let clamp = |x: &mut Vec<f64>| {
        for d in 0..n {
            x[d] = x[d].clamp(lo[d], hi[d]);
        }
    };

    // Initial simplex: x0 plus a 10% step per coordinate, stepped inward at
    // the boundary.
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let mut base = x0.to_vec();
    clamp(&mut base);
    simplex.push((base.clone(), f(&base)));
    for d in 0..n {
        let mut v = base.clone();
        let step = 0.1 * (hi[d] - lo[d]);
        v[d] = if v[d] + step <= hi[d] {
            v[d] + step
        } else {
            v[d] - step
        };
        clamp(&mut v);
        let fv = f(&v);
        simplex.push((v, fv));
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iterations {
        iterations += 1;
        // Descending by value: best first (maximization).
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        if best.is_finite() && (best - worst).abs() < tol {
            converged = true;
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|d| simplex[..n].iter().map(|(x, _)| x[d]).sum::<f64>() / n as f64)
            .collect();
        let worst_x = simplex[n].0.clone();
        let second_worst = simplex[n - 1].1;

        let mut reflected: Vec<f64> = (0..n)
            .map(|d| centroid[d] + REFLECT * (centroid[d] - worst_x[d]))
            .collect();
        clamp(&mut reflected);
        let f_reflected = f(&reflected);

        if f_reflected > best {
            let mut expanded: Vec<f64> = (0..n)
                .map(|d| centroid[d] + EXPAND * (reflected[d] - centroid[d]))
                .collect();
            clamp(&mut expanded);
            let f_expanded = f(&expanded);
            simplex[n] = if f_expanded > f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
            continue;
        }
        if f_reflected > second_worst {
            simplex[n] = (reflected, f_reflected);
            continue;
        }

        // Contract toward the better of worst/reflected.
        let (toward, f_toward) = if f_reflected > worst {
            (&reflected, f_reflected)
        } else {
            (&worst_x, worst)
        };
        let mut contracted: Vec<f64> = (0..n)
            .map(|d| centroid[d] + CONTRACT * (toward[d] - centroid[d]))
            .collect();
        clamp(&mut contracted);
        let f_contracted = f(&contracted);
        if f_contracted > f_toward {
            simplex[n] = (contracted, f_contracted);
            continue;
        }

        // Shrink toward the best vertex.
        let best_x = simplex[0].0.clone();
        for v in simplex.iter_mut().skip(1) {
            for (coord, anchor) in v.0.iter_mut().zip(&best_x) {
                *coord = anchor + SHRINK * (*coord - anchor);
            }
            v.1 = f(&v.0);
        }
    }

    simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
    SimplexOutcome {
        x: simplex[0].0.clone(),
        value: simplex[0].1,
        iterations,
        converged,
    }
}

// ---------------------------------------------------------------------------
// Multi-start driver
// ---------------------------------------------------------------------------

fn space_bounds(space: SearchSpace, theta_cap: f64) -> (Vec<f64>, Vec<f64>) {
    match space {
        SearchSpace::FiniteBox => (vec![0.0, 0.0, 0.0], vec![1.0, 1.0, theta_cap]),
        SearchSpace::InfiniteFace => (vec![0.0, 0.0], vec![1.0, 1.0]),
        SearchSpace::EqualAllocation => (vec![0.0], vec![1.0]),
    }
}

fn run_starts(
    env: &EnvironmentParams,
    objective: &Objective,
    space: SearchSpace,
    starts: Vec<Vec<f64>>,
    config: &OptimizerConfig,
) -> Vec<StartRecord> {
    let (lo, hi) = space_bounds(space, config.theta_cap);
    starts
        .into_par_iter()
        .map(|x0| {
            let eval = |x: &[f64]| {
                objective_value(env, objective, &strategy_from(space, x, config.theta_cap))
            };
            let outcome = nelder_mead_bounded(
                &eval,
                &x0,
                &lo,
                &hi,
                config.objective_tol,
                config.max_iterations,
            );
            StartRecord {
                start: strategy_from(space, &x0, config.theta_cap),
                optimum: strategy_from(space, &outcome.x, config.theta_cap),
                value: outcome.value,
                iterations: outcome.iterations,
                converged: outcome.converged,
            }
        })
        .collect()
}

/// Prefers higher value; ties break toward smaller theta, then smaller
/// `p2 - p1`, keeping reports deterministic.
fn better(a: &StartRecord, b: &StartRecord) -> bool {
    match a.value.total_cmp(&b.value) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => {
            match a.optimum.theta().total_cmp(&b.optimum.theta()) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => {
                    (a.optimum.p2() - a.optimum.p1()) < (b.optimum.p2() - b.optimum.p1())
                }
            }
        }
    }
}

/// Multi-start maximization of `objective` over the variant's feasible set.
/// Deterministic given the seed.
pub fn maximize(
    env: &EnvironmentParams,
    objective: &Objective,
    config: &OptimizerConfig,
) -> Result<OptimizationResult> {
    validate_objective(env, objective)?;

    let mut records: Vec<StartRecord> = Vec::new();
    match objective.variant.tag {
        VariantTag::Honest => {
            let honest = Strategy::honest();
            let value = objective_value(env, objective, &honest);
            records.push(StartRecord {
                start: honest,
                optimum: honest,
                value,
                iterations: 0,
                converged: true,
            });
        }
        VariantTag::TpawExact | VariantTag::TpawC => {
            // The honest point is always feasible; seed it explicitly so the
            // reported optimum can never fall below the honest value.
            let honest = Strategy::honest();
            records.push(StartRecord {
                start: honest,
                optimum: honest,
                value: objective_value(env, objective, &honest),
                iterations: 0,
                converged: true,
            });

            let n_finite = (config.n_starts * 3).div_ceil(4).max(1);
            let n_infinite = config.n_starts.saturating_sub(n_finite).max(1);
            let mut finite = start_points(
                SearchSpace::FiniteBox,
                n_finite,
                config.seed,
                config.theta_cap,
            );
            finite.extend(corner_seeds(SearchSpace::FiniteBox, config.theta_cap));
            records.extend(run_starts(
                env,
                objective,
                SearchSpace::FiniteBox,
                finite,
                config,
            ));

            let mut infinite = start_points(
                SearchSpace::InfiniteFace,
                n_infinite,
                config.seed ^ 0x5EED,
                config.theta_cap,
            );
            infinite.extend(corner_seeds(SearchSpace::InfiniteFace, config.theta_cap));
            records.extend(run_starts(
                env,
                objective,
                SearchSpace::InfiniteFace,
                infinite,
                config,
            ));
        }
        VariantTag::PawExact | VariantTag::PawC => {
            let mut starts = start_points(
                SearchSpace::InfiniteFace,
                config.n_starts.max(1),
                config.seed,
                config.theta_cap,
            );
            starts.extend(corner_seeds(SearchSpace::InfiniteFace, config.theta_cap));
            records.extend(run_starts(
                env,
                objective,
                SearchSpace::InfiniteFace,
                starts,
                config,
            ));
        }
        VariantTag::Faw | VariantTag::Bwh => {
            let mut starts = start_points(
                SearchSpace::EqualAllocation,
                config.n_starts.max(1),
                config.seed,
                config.theta_cap,
            );
            starts.extend(corner_seeds(SearchSpace::EqualAllocation, config.theta_cap));
            records.extend(run_starts(
                env,
                objective,
                SearchSpace::EqualAllocation,
                starts,
                config,
            ));
        }
    }

    let best = records
        .iter()
        .fold(None::<&StartRecord>, |acc, r| match acc {
            Some(current) if !better(r, current) => Some(current),
            _ => Some(r),
        })
        .expect("at least one start");

    Ok(OptimizationResult {
        best: best.optimum,
        best_value: best.value,
        starts: records.len(),
        per_start: records,
    })
}

/// One grid point of a sweep.
#[derive(Debug, Clone)]
pub struct SweepEntry {
    pub alpha: f64,
    pub beta: f64,
    pub result: Result<OptimizationResult>,
}

/// Optimizes every `(alpha, beta)` grid point with the base environment's
/// remaining parameters. Per-point failures (for example an infeasible
/// `alpha + beta`) are recorded without aborting the sweep; points evaluate
/// concurrently and results keep grid order.
pub fn sweep_optimize(
    base: &EnvironmentParams,
    grid: &[(f64, f64)],
    objective: &Objective,
    config: &OptimizerConfig,
) -> Vec<SweepEntry> {
    grid.par_iter()
        .map(|&(alpha, beta)| {
            let result = EnvironmentParams::new(
                alpha,
                beta,
                base.gamma(),
                base.rational_manager(),
                base.lambda1(),
                base.d0(),
                base.tau0(),
            )
            .and_then(|env| maximize(&env, objective, config));
            SweepEntry {
                alpha,
                beta,
                result,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(alpha: f64, beta: f64, gamma: f64) -> EnvironmentParams {
        EnvironmentParams::bitcoin_like(alpha, beta, gamma, true).unwrap()
    }

    fn quick_config(seed: u64) -> OptimizerConfig {
        OptimizerConfig {
            n_starts: 24,
            seed,
            ..Default::default()
        }
    }

    #[test]
    fn nelder_mead_finds_quadratic_peak() {
        let f = |x: &[f64]| {
            -(x[0] - 0.3).powi(2) - 2.0 * (x[1] - 0.7).powi(2)
        };
        let out = nelder_mead_bounded(
            &f,
            &[0.9, 0.1],
            &[0.0, 0.0],
            &[1.0, 1.0],
            1e-12,
            500,
        );
        assert!(out.converged);
        assert!((out.x[0] - 0.3).abs() < 1e-5, "{:?}", out.x);
        assert!((out.x[1] - 0.7).abs() < 1e-5, "{:?}", out.x);
    }

    #[test]
    fn nelder_mead_respects_bounds() {
        // Peak outside the box: the maximizer must sit on the boundary.
        let f = |x: &[f64]| -(x[0] - 2.0).powi(2);
        let out = nelder_mead_bounded(&f, &[0.2], &[0.0], &[1.0], 1e-12, 300);
        assert!((out.x[0] - 1.0).abs() < 1e-6, "{:?}", out.x);
    }

    #[test]
    fn optimum_dominates_honest_and_paw_slice() {
        let tpaw = Objective {
            kind: ObjectiveKind::RhoA,
            variant: VariantKind::exact(VariantTag::TpawExact),
        };
        let paw = Objective {
            kind: ObjectiveKind::RhoA,
            variant: VariantKind::exact(VariantTag::PawExact),
        };
        let config = quick_config(7);
        for (alpha, beta, gamma) in [(0.1, 0.1, 0.0), (0.2, 0.25, 0.5), (0.35, 0.1, 1.0)] {
            let e = env(alpha, beta, gamma);
            let t = maximize(&e, &tpaw, &config).unwrap();
            let p = maximize(&e, &paw, &config).unwrap();
            assert!(
                t.best_value >= alpha,
                "never below honest at ({alpha}, {beta}, {gamma}): {}",
                t.best_value
            );
            assert!(
                t.best_value >= p.best_value - 1e-12,
                "bounded-deadline family dominates its infinite-deadline slice \
                 at ({alpha}, {beta}, {gamma}): {} vs {}",
                t.best_value,
                p.best_value
            );
        }
    }

    #[test]
    fn maximize_is_deterministic() {
        let e = env(0.15, 0.2, 0.5);
        let objective = Objective {
            kind: ObjectiveKind::RhoA,
            variant: VariantKind::exact(VariantTag::TpawExact),
        };
        let config = quick_config(42);
        let a = maximize(&e, &objective, &config).unwrap();
        let b = maximize(&e, &objective, &config).unwrap();
        assert_eq!(a.best_value.to_bits(), b.best_value.to_bits());
        assert_eq!(a.best.p1().to_bits(), b.best.p1().to_bits());
        assert_eq!(a.best.theta().as_f64().to_bits(), b.best.theta().as_f64().to_bits());
        assert_eq!(a.starts, b.starts);
    }

    #[test]
    fn infeasible_objectives_are_rejected() {
        let e = env(0.1, 0.1, 0.0);
        let bad = Objective {
            kind: ObjectiveKind::RevenueChangeAtT1,
            variant: VariantKind::new(VariantTag::Faw, None).unwrap(),
        };
        assert!(matches!(
            maximize(&e, &bad, &OptimizerConfig::default()),
            Err(Error::InfeasibleObjective(_))
        ));
    }

    #[test]
    fn sweep_rer_structure_along_fixed_alpha_row() {
        // Along a fixed-alpha row at gamma = 0 the unbounded-deadline
        // family's extra reward grows with the target pool's size, while the
        // bounded family's shrinks, so their ratio falls toward the
        // coincidence boundary as beta grows.
        let base = env(0.1, 0.1, 0.0);
        let grid = [(0.1, 0.1), (0.1, 0.2), (0.1, 0.3)];
        let rers = |tag: VariantTag| -> Vec<f64> {
            let objective = Objective {
                kind: ObjectiveKind::RhoA,
                variant: VariantKind::exact(tag),
            };
            sweep_optimize(&base, &grid, &objective, &quick_config(11))
                .iter()
                .map(|e| (e.result.as_ref().unwrap().best_value - e.alpha) / e.alpha)
                .collect()
        };
        let paw = rers(VariantTag::PawExact);
        let tpaw = rers(VariantTag::TpawExact);
        assert!(
            paw[0] < paw[1] && paw[1] < paw[2],
            "unbounded-family RER must grow with beta: {paw:?}"
        );
        assert!(
            tpaw[0] > tpaw[1] && tpaw[1] > tpaw[2],
            "bounded-family RER must shrink with beta: {tpaw:?}"
        );
        let ratio: Vec<f64> = tpaw.iter().zip(&paw).map(|(t, p)| t / p).collect();
        assert!(
            ratio[0] > ratio[1] && ratio[1] > ratio[2] && ratio[2] > 1.0 - 1e-9,
            "advantage ratio must fall toward 1 as beta grows: {ratio:?}"
        );
    }

    #[test]
    fn sweep_records_per_point_errors() {
        let base = env(0.1, 0.1, 0.0);
        let objective = Objective {
            kind: ObjectiveKind::RhoA,
            variant: VariantKind::exact(VariantTag::TpawExact),
        };
        let entries = sweep_optimize(
            &base,
            &[(0.1, 0.1), (0.3, 0.3)],
            &objective,
            &quick_config(1),
        );
        assert!(entries[0].result.is_ok());
        assert!(entries[1].result.is_err(), "0.3 + 0.3 is infeasible");
    }

    #[test]
    fn bwh_search_stays_on_equal_allocations() {
        let e = env(0.2, 0.2, 0.0);
        let objective = Objective {
            kind: ObjectiveKind::RhoA,
            variant: VariantKind::new(VariantTag::Bwh, None).unwrap(),
        };
        let r = maximize(&e, &objective, &quick_config(3)).unwrap();
        assert_eq!(r.best.p1(), r.best.p2());
        assert!(r.best.theta().is_infinite());
        assert!(r.best_value >= 0.2 - 1e-12);
    }
}
