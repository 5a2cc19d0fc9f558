use rand::RngCore;

use super::{blend, dot, hill_climb, initial_policy, Exploration, Learner, Observation};

/// Socially-aware policy gradient ascent.
///
/// Keeps one value table for its own reward and one for the group average,
/// climbs on their `w`-weighted blend, and moves `w` by the gap between the
/// two policy values.
#[derive(Debug, Clone)]
pub struct Sapga {
    pub q_idv: Vec<f64>,
    pub q_soc: Vec<f64>,
    pub q_combined: Vec<f64>,
    pub policy: Vec<f64>,
    pub w: f64,
    pub alpha_pi: f64,
    pub alpha_w: f64,
    pub beta: f64,
    pub exploration: Exploration,
    rounds: u64,
}

impl Sapga {
    pub fn new(
        n_actions: usize,
        w0: f64,
        alpha_pi: f64,
        alpha_w: f64,
        beta: f64,
        p0: Option<f64>,
        exploration: Exploration,
    ) -> Self {
        Self {
            q_idv: vec![0.0; n_actions],
            q_soc: vec![0.0; n_actions],
            q_combined: vec![0.0; n_actions],
            policy: initial_policy(n_actions, p0),
            w: w0,
            alpha_pi,
            alpha_w,
            beta,
            exploration,
            rounds: 0,
        }
    }

    pub fn step(&mut self, action: usize, reward: f64, group_average: f64) {
        blend(&mut self.q_idv, action, self.beta, reward);
        blend(&mut self.q_soc, action, self.beta, group_average);
        self.recombine();
        hill_climb(&mut self.policy, &self.q_combined, self.alpha_pi);
        let v_idv = dot(&self.policy, &self.q_idv);
        let v_soc = dot(&self.policy, &self.q_soc);
        self.w = (self.w + self.alpha_w * (v_idv - v_soc)).clamp(0.0, 1.0);
        self.recombine();
    }

    fn recombine(&mut self) {
        let w = self.w;
        for ((c, i), s) in self.q_combined.iter_mut().zip(&self.q_idv).zip(&self.q_soc) {
            *c = (1.0 - w) * i + w * s;
        }
    }
}

impl Learner for Sapga {
    fn choose_action(&mut self, rng: &mut dyn RngCore) -> usize {
        self.exploration.choose(self.rounds, &self.policy, rng)
    }

    fn observe(&mut self, obs: &Observation<'_>) {
        self.step(obs.own_action, obs.reward, obs.group_average);
        self.rounds += 1;
    }

    fn policy(&self) -> Vec<f64> {
        self.policy.clone()
    }

    fn social_attitude(&self) -> Option<f64> {
        Some(self.w)
    }
}
