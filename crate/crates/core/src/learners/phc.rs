use rand::RngCore;

use super::{blend, hill_climb, initial_policy, Exploration, Learner, Observation};

/// Policy hill-climbing: Q-learning on a single state plus a fixed-size step
/// of the mixed policy toward the greedy action.
#[derive(Debug, Clone)]
pub struct Phc {
    pub q: Vec<f64>,
    pub policy: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub exploration: Exploration,
    rounds: u64,
}

impl Phc {
    pub fn new(n_actions: usize, alpha: f64, beta: f64, p0: Option<f64>, exploration: Exploration) -> Self {
        Self {
            q: vec![0.0; n_actions],
            policy: initial_policy(n_actions, p0),
            alpha,
            beta,
            exploration,
            rounds: 0,
        }
    }

    /// Value update for the taken action, then one hill-climbing move.
    pub fn step(&mut self, action: usize, reward: f64) {
        blend(&mut self.q, action, self.beta, reward);
        hill_climb(&mut self.policy, &self.q, self.alpha);
    }
}

impl Learner for Phc {
    fn choose_action(&mut self, rng: &mut dyn RngCore) -> usize {
        self.exploration.choose(self.rounds, &self.policy, rng)
    }

    fn observe(&mut self, obs: &Observation<'_>) {
        self.step(obs.own_action, obs.reward);
        self.rounds += 1;
    }

    fn policy(&self) -> Vec<f64> {
        self.policy.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let mut phc = Phc::new(2, 0.1, 0.5, None, Exploration::NONE);
        phc.q = vec![1.0, 0.0];
        phc.step(1, -1.0);
        assert_eq!(phc.q, vec![1.0, -0.5]);
        assert!((phc.policy[0] - 0.6).abs() < 1e-15);

        let mut phc = Phc::new(2, 0.1, 1.0, None, Exploration::NONE);
        phc.step(0, 3.25);
        assert_eq!(phc.q[0], 3.25);
    }

    #[test]
    fn greedy_probability_strictly_increases() {
        let mut phc = Phc::new(3, 0.05, 0.3, Some(0.2), Exploration::NONE);
        let rewards = [1.0, 4.0, 2.0];
        for round in 0..100 {
            let a = round % 3;
            let before = phc.policy.clone();
            phc.step(a, rewards[a]);
            let g = super::super::argmax(&phc.q);
            assert!(phc.policy[g] > before[g] || before[g] == 1.0);
        }
    }
}
