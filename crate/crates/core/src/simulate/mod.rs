//! Seeded repeated-game runs between any lineup of learners.

mod batch;

pub use batch::{derive_seed, mean_stderr, run_batch, BatchSummary, ConfigSummary};

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::games::{expected_payoff, nsw_all, usw_all, MixedProfile, NormalFormGame};
use crate::learners::{Learner, LearnerSpec, Observation};

/// Everything needed to reproduce one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub game: NormalFormGame,
    pub learners: Vec<LearnerSpec>,
    pub steps: usize,
    pub seed: u64,
    /// Policies are recorded after every `record_every`-th step.
    pub record_every: usize,
    /// Number of recorded samples inspected by the convergence test.
    pub window: usize,
    pub tol: f64,
    /// Trailing steps averaged for the converged-state payoff.
    pub final_window: usize,
}

impl RunConfig {
    pub fn new(game: NormalFormGame, learners: Vec<LearnerSpec>, steps: usize, seed: u64) -> Self {
        Self {
            game,
            learners,
            steps,
            seed,
            record_every: 10,
            window: 500,
            tol: 0.01,
            final_window: 1000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::Config("steps must be at least 1".into()));
        }
        if self.record_every == 0 {
            return Err(Error::Config("record_every must be at least 1".into()));
        }
        if self.window < 2 {
            return Err(Error::Config("the convergence window needs at least 2 samples".into()));
        }
        if self.final_window == 0 {
            return Err(Error::Config("final_window must be at least 1".into()));
        }
        if self.learners.len() != self.game.n_players() {
            return Err(Error::Config(format!(
                "game `{}` has {} players but {} learners were given",
                self.game.name(),
                self.game.n_players(),
                self.learners.len()
            )));
        }
        Ok(())
    }
}

/// Recorded trajectories and welfare metrics of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    /// Step index of every recorded sample; sample 0 is the initial state.
    pub recorded_steps: Vec<usize>,
    /// `policies[sample][agent]` is that agent's mixed policy.
    pub policies: Vec<Vec<Vec<f64>>>,
    /// `attitudes[sample][agent]`, present for socially-aware agents.
    pub attitudes: Vec<Vec<Option<f64>>>,
    /// `rewards[step][agent]` for steps `1..=steps`.
    pub rewards: Vec<Vec<f64>>,
    pub converged: bool,
    pub final_policies: Vec<Vec<f64>>,
    /// Per-agent mean reward over the final window.
    pub final_rewards: Vec<f64>,
    /// Welfare of the final-window mean rewards.
    pub usw: f64,
    pub nsw: f64,
    /// Welfare of the last step's rewards.
    pub usw_last: f64,
    pub nsw_last: f64,
    /// Welfare of the expected payoffs under the final policies.
    pub usw_expected: f64,
    pub nsw_expected: f64,
}

impl RunResult {
    /// Probability of action 0 for every agent at the end of the run.
    pub fn final_p0(&self) -> Vec<f64> {
        self.final_policies.iter().map(|p| p[0]).collect()
    }

    /// Writes one row per recorded sample and agent:
    /// `step,agent,p_action0,...,w,reward`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let width = self.final_policies.iter().map(Vec::len).max().unwrap_or(0);
        let mut header = String::from("step,agent");
        for a in 0..width {
            header.push_str(&format!(",p_action{a}"));
        }
        header.push_str(",w,reward");
        writeln!(out, "{header}")?;
        for (k, &step) in self.recorded_steps.iter().enumerate() {
            for (agent, policy) in self.policies[k].iter().enumerate() {
                let mut row = format!("{step},{agent}");
                for a in 0..width {
                    row.push(',');
                    if let Some(p) = policy.get(a) {
                        row.push_str(&p.to_string());
                    }
                }
                row.push(',');
                if let Some(w) = self.attitudes[k][agent] {
                    row.push_str(&w.to_string());
                }
                row.push(',');
                if step > 0 {
                    row.push_str(&self.rewards[step - 1][agent].to_string());
                }
                writeln!(out, "{row}")?;
            }
        }
        Ok(())
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "usw": self.usw,
            "nsw": self.nsw,
            "converged": self.converged,
            "final_policies": self.final_policies,
            "final_rewards": self.final_rewards,
            "usw_last": self.usw_last,
            "nsw_last": self.nsw_last,
            "usw_expected": self.usw_expected,
            "nsw_expected": self.nsw_expected,
        })
    }
}

/// Random stream of `seat` for a run seeded with `seed`.
pub fn seat_rng(seed: u64, seat: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(seat as u64 + 1);
    rng
}

/// Runs the configured lineup.
pub fn run(config: &RunConfig) -> Result<RunResult> {
    config.validate()?;
    let learners = config
        .learners
        .iter()
        .enumerate()
        .map(|(seat, spec)| spec.build(&config.game, seat))
        .collect::<Result<Vec<_>>>()?;
    run_with_learners(config, learners)
}

/// Runs already-built learners; `config.learners` is ignored.
pub fn run_with_learners(config: &RunConfig, mut learners: Vec<Box<dyn Learner>>) -> Result<RunResult> {
    let game = &config.game;
    let n = game.n_players();
    if learners.len() != n {
        return Err(Error::Config(format!("{} learners for a {n}-player game", learners.len())));
    }
    if config.steps == 0 || config.record_every == 0 || config.final_window == 0 {
        return Err(Error::Config("steps, record_every and final_window must be positive".into()));
    }
    let mut rngs: Vec<ChaCha8Rng> = (0..n).map(|seat| seat_rng(config.seed, seat)).collect();
    let snapshot = |learners: &[Box<dyn Learner>]| {
        (
            learners.iter().map(|l| l.policy()).collect::<Vec<_>>(),
            learners.iter().map(|l| l.social_attitude()).collect::<Vec<_>>(),
        )
    };

    let mut recorded_steps = vec![0];
    let (p, w) = snapshot(&learners);
    let mut policies = vec![p];
    let mut attitudes = vec![w];
    let mut rewards = Vec::with_capacity(config.steps);
    let mut joint = vec![0usize; n];
    for step in 1..=config.steps {
        for (seat, learner) in learners.iter_mut().enumerate() {
            let a = learner.choose_action(&mut rngs[seat]);
            if a >= game.actions()[seat] {
                return Err(Error::Numerical(format!("seat {seat} chose invalid action {a}")));
            }
            joint[seat] = a;
        }
        let payoff = game.payoff(&joint).to_vec();
        let group_average = payoff.iter().sum::<f64>() / n as f64;
        for (seat, learner) in learners.iter_mut().enumerate() {
            let joint_actions = learner.observes_joint_actions().then_some(joint.as_slice());
            learner.observe(&Observation {
                own_action: joint[seat],
                reward: payoff[seat],
                group_average,
                joint_actions,
            });
        }
        rewards.push(payoff);
        if step % config.record_every == 0 || step == config.steps {
            let (p, w) = snapshot(&learners);
            recorded_steps.push(step);
            policies.push(p);
            attitudes.push(w);
        }
    }

    let final_policies = learners.iter().map(|l| l.policy()).collect::<Vec<_>>();
    let tail = &rewards[rewards.len().saturating_sub(config.final_window)..];
    let final_rewards: Vec<f64> = (0..n)
        .map(|i| tail.iter().map(|r| r[i]).sum::<f64>() / tail.len() as f64)
        .collect();
    let last = rewards.last().expect("at least one step").clone();
    let profile = MixedProfile::new(final_policies.clone())?;
    let expected = (0..n)
        .map(|i| expected_payoff(game, &profile, i))
        .collect::<Result<Vec<_>>>()?;
    let flat: Vec<Vec<f64>> = policies.iter().map(|s| s.concat()).collect();
    Ok(RunResult {
        converged: detect_convergence(&flat, config.window, config.tol),
        recorded_steps,
        policies,
        attitudes,
        rewards,
        usw: usw_all(&final_rewards),
        nsw: nsw_all(&final_rewards),
        usw_last: usw_all(&last),
        nsw_last: nsw_all(&last),
        usw_expected: usw_all(&expected),
        nsw_expected: nsw_all(&expected),
        final_policies,
        final_rewards,
    })
}

/// True iff every component varies by at most `tol` over the last `window`
/// samples. Histories shorter than the window are not converged.
pub fn detect_convergence(history: &[Vec<f64>], window: usize, tol: f64) -> bool {
    if window < 2 || history.len() < window {
        return false;
    }
    let recent = &history[history.len() - window..];
    let width = recent[0].len();
    (0..width).all(|k| {
        let (lo, hi) = recent
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s[k]), hi.max(s[k])));
        hi - lo <= tol
    })
}
