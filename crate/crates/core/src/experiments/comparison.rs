use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{integrate, DynamicsParams, DynamicsState};
use crate::error::Result;
use crate::games::NormalFormGame;
use crate::learners::{Exploration, LearnerSpec};
use crate::simulate::{derive_seed, run, RunConfig};

/// Settings of a simulation-versus-ODE comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonParams {
    pub n_starts: usize,
    pub w0: f64,
    pub alpha_pi: f64,
    pub alpha_w: f64,
    pub beta: f64,
    pub steps: usize,
    pub seed: u64,
    pub exploration: ExplorationParams,
    /// Integrator step in rescaled time `t = step * alpha_pi`.
    pub dt: f64,
    /// Endpoint distance (max over p1, p2) counted as agreement.
    pub endpoint_tol: f64,
    pub record_every: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExplorationParams {
    pub eps0: f64,
    pub tau: f64,
}

impl Default for ComparisonParams {
    fn default() -> Self {
        let e = Exploration::default();
        Self {
            n_starts: 20,
            w0: 0.85,
            alpha_pi: 0.001,
            alpha_w: 0.001,
            beta: 0.8,
            steps: 10_000,
            seed: 0,
            exploration: ExplorationParams { eps0: e.eps0, tau: e.tau },
            dt: 1e-3,
            endpoint_tol: 0.05,
            record_every: 10,
        }
    }
}

/// One sampled point of a path in rescaled time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathPoint {
    pub t: f64,
    pub p1: f64,
    pub p2: f64,
    pub w1: f64,
    pub w2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StartComparison {
    pub start: [f64; 2],
    pub sim_end: [f64; 2],
    pub ode_end: [f64; 2],
    /// Max over (p1, p2) of the endpoint gap.
    pub endpoint_gap: f64,
    /// Sup over recorded times of the max-norm gap in (p1, p2).
    pub sup_deviation: f64,
    pub agree: bool,
    #[serde(skip)]
    pub sim_path: Vec<PathPoint>,
    #[serde(skip)]
    pub ode_path: Vec<PathPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub game: String,
    pub params: ComparisonParams,
    pub starts: Vec<StartComparison>,
    pub agreements: usize,
    pub median_deviation: f64,
}

/// Starting policies, uniform on [0.05, 0.95]^2.
pub fn comparison_starts(n: usize, seed: u64) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| [rng.gen_range(0.05..=0.95), rng.gen_range(0.05..=0.95)])
        .collect()
}

/// Runs SA-PGA self-play and the projected ODE from the same starts.
///
/// The ODE uses `epsilon = alpha_w / alpha_pi` and is compared in rescaled
/// time `t = step * alpha_pi`.
pub fn trajectory_comparison(game: &NormalFormGame, params: &ComparisonParams) -> Result<ComparisonReport> {
    let eps = params.alpha_w / params.alpha_pi;
    let dyn_params = DynamicsParams::from_game(game, eps)?;
    let horizon = params.steps as f64 * params.alpha_pi;
    let ode_steps = ((horizon / params.dt).round() as usize).max(1);
    let dt = horizon / ode_steps as f64;
    let exploration = Exploration::new(params.exploration.eps0, params.exploration.tau)?;

    let starts = comparison_starts(params.n_starts, params.seed);
    let results = starts
        .par_iter()
        .enumerate()
        .map(|(k, start)| -> Result<StartComparison> {
            let spec = |p0: f64| LearnerSpec::Sapga {
                w0: params.w0,
                alpha_pi: params.alpha_pi,
                alpha_w: params.alpha_w,
                beta: params.beta,
                p0: Some(p0),
                exploration,
            };
            let mut cfg = RunConfig::new(
                game.clone(),
                vec![spec(start[0]), spec(start[1])],
                params.steps,
                derive_seed(params.seed, 0, k),
            );
            cfg.record_every = params.record_every;
            let sim = run(&cfg)?;
            let x0 = DynamicsState::new(start[0], start[1], params.w0, params.w0);
            let ode = integrate(&dyn_params, x0, dt, ode_steps, true)?;

            let sim_path: Vec<PathPoint> = sim
                .recorded_steps
                .iter()
                .enumerate()
                .map(|(i, &step)| PathPoint {
                    t: step as f64 * params.alpha_pi,
                    p1: sim.policies[i][0][0],
                    p2: sim.policies[i][1][0],
                    w1: sim.attitudes[i][0].unwrap_or(f64::NAN),
                    w2: sim.attitudes[i][1].unwrap_or(f64::NAN),
                })
                .collect();
            let ode_path: Vec<PathPoint> = sim_path
                .iter()
                .map(|pt| {
                    let s = ode.state_at(pt.t);
                    PathPoint { t: pt.t, p1: s.p1, p2: s.p2, w1: s.w1, w2: s.w2 }
                })
                .collect();
            let gap = |a: &PathPoint, b: &PathPoint| (a.p1 - b.p1).abs().max((a.p2 - b.p2).abs());
            let sup_deviation = sim_path.iter().zip(&ode_path).map(|(a, b)| gap(a, b)).fold(0.0, f64::max);
            let end = ode.last();
            let sim_end = [sim.final_policies[0][0], sim.final_policies[1][0]];
            let ode_end = [end.p1, end.p2];
            let endpoint_gap = (sim_end[0] - ode_end[0]).abs().max((sim_end[1] - ode_end[1]).abs());
            Ok(StartComparison {
                start: *start,
                sim_end,
                ode_end,
                endpoint_gap,
                sup_deviation,
                agree: endpoint_gap <= params.endpoint_tol,
                sim_path,
                ode_path,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut devs: Vec<f64> = results.iter().map(|r| r.sup_deviation).collect();
    Ok(ComparisonReport {
        game: game.name().to_string(),
        params: params.clone(),
        agreements: results.iter().filter(|r| r.agree).count(),
        median_deviation: median(&mut devs),
        starts: results,
    })
}

/// Median path deviation for each step size, holding the rescaled horizon
/// `steps * alpha_pi` of `base` fixed.
pub fn alpha_sweep(game: &NormalFormGame, base: &ComparisonParams, alphas: &[f64]) -> Result<Vec<(f64, f64)>> {
    let horizon = base.steps as f64 * base.alpha_pi;
    let ratio = base.alpha_w / base.alpha_pi;
    alphas
        .iter()
        .map(|&alpha| {
            let params = ComparisonParams {
                alpha_pi: alpha,
                alpha_w: alpha * ratio,
                steps: (horizon / alpha).round() as usize,
                ..base.clone()
            };
            Ok((alpha, trajectory_comparison(game, &params)?.median_deviation))
        })
        .collect()
}

pub(crate) fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::coordination_game;

    #[test]
    fn starts_are_seeded_and_inside_the_margin() {
        let a = comparison_starts(50, 4);
        assert_eq!(a, comparison_starts(50, 4));
        assert!(a.iter().flatten().all(|v| (0.05..=0.95).contains(v)));
    }

    #[test]
    fn median_oracle() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn small_cg_comparison_is_consistent() {
        let params = ComparisonParams { n_starts: 3, steps: 3000, alpha_pi: 0.003, alpha_w: 0.003, ..Default::default() };
        let report = trajectory_comparison(&coordination_game(), &params).unwrap();
        assert_eq!(report.starts.len(), 3);
        for s in &report.starts {
            assert!(s.sup_deviation >= 0.0 && s.sup_deviation >= s.endpoint_gap - 1e-12);
            assert_eq!(s.sim_path.len(), s.ode_path.len());
            assert!((s.sim_path.last().unwrap().t - 9.0).abs() < 1e-9);
        }
        assert_eq!(report, trajectory_comparison(&coordination_game(), &params).unwrap());
    }
}
