use serde::Serialize;

use crate::error::{Error, Result};
use crate::games::{pgg_game, NormalFormGame};
use crate::learners::LearnerSpec;
use crate::simulate::{run, RunConfig, RunResult};

/// Settings of an SA-PGA agent facing a selfish PHC opponent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfishParams {
    pub w0: f64,
    pub p_sapga0: f64,
    pub p_selfish0: f64,
    pub steps: usize,
    pub seed: u64,
}

impl Default for SelfishParams {
    fn default() -> Self {
        Self {
            w0: 1.0,
            p_sapga0: 0.2,
            p_selfish0: 0.8,
            steps: 10_000,
            seed: 0,
        }
    }
}

/// SA-PGA in seat 0 against PHC in seat 1.
pub fn against_selfish(game: &NormalFormGame, params: &SelfishParams) -> Result<RunResult> {
    let lineup = vec![
        LearnerSpec::sapga(params.w0).with_p0(params.p_sapga0),
        LearnerSpec::phc().with_p0(params.p_selfish0),
    ];
    run(&RunConfig::new(game.clone(), lineup, params.steps, params.seed))
}

/// Settings of the public goods lineup.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PggParams {
    pub r: f64,
    pub cost: f64,
    pub p0: f64,
    pub w0: f64,
    pub steps: usize,
    pub seed: u64,
}

impl Default for PggParams {
    fn default() -> Self {
        Self {
            r: 2.0,
            cost: 2.0,
            p0: 0.5,
            w0: 0.85,
            steps: 10_000,
            seed: 0,
        }
    }
}

/// Public goods game with SA-PGA agents in the first seats and PHC after them.
pub fn pgg_experiment(n_sapga: usize, n_selfish: usize, params: &PggParams) -> Result<RunResult> {
    let n = n_sapga + n_selfish;
    if n < 2 {
        return Err(Error::Config(format!("public goods lineup needs at least 2 agents, got {n}")));
    }
    let game = pgg_game(n, params.r, params.cost)?;
    let mut lineup = vec![LearnerSpec::sapga(params.w0).with_p0(params.p0); n_sapga];
    lineup.extend(vec![LearnerSpec::phc().with_p0(params.p0); n_selfish]);
    run(&RunConfig::new(game, lineup, params.steps, params.seed))
}
