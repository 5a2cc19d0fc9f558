use rand::RngCore;

use super::{blend, dot, hill_climb, initial_policy, Exploration, Learner, Observation};

/// Win-or-learn-fast policy hill-climbing.
///
/// The step is `delta_win` while the current policy scores at least as well
/// as the running average policy against the learned values, `delta_lose`
/// otherwise.
#[derive(Debug, Clone)]
pub struct WolfPhc {
    pub q: Vec<f64>,
    pub policy: Vec<f64>,
    pub average_policy: Vec<f64>,
    pub delta_win: f64,
    pub delta_lose: f64,
    pub beta: f64,
    pub visits: u64,
    pub exploration: Exploration,
}

impl WolfPhc {
    pub fn new(
        n_actions: usize,
        delta_win: f64,
        delta_lose: f64,
        beta: f64,
        p0: Option<f64>,
        exploration: Exploration,
    ) -> Self {
        let policy = initial_policy(n_actions, p0);
        Self {
            q: vec![0.0; n_actions],
            average_policy: policy.clone(),
            policy,
            delta_win,
            delta_lose,
            beta,
            visits: 0,
            exploration,
        }
    }

    pub fn step(&mut self, action: usize, reward: f64) {
        blend(&mut self.q, action, self.beta, reward);
        self.visits += 1;
        let n = self.visits as f64;
        for (avg, p) in self.average_policy.iter_mut().zip(&self.policy) {
            *avg += (p - *avg) / n;
        }
        let winning = dot(&self.policy, &self.q) >= dot(&self.average_policy, &self.q);
        let step = if winning { self.delta_win } else { self.delta_lose };
        hill_climb(&mut self.policy, &self.q, step);
    }
}

impl Learner for WolfPhc {
    fn choose_action(&mut self, rng: &mut dyn RngCore) -> usize {
        self.exploration.choose(self.visits, &self.policy, rng)
    }

    fn observe(&mut self, obs: &Observation<'_>) {
        self.step(obs.own_action, obs.reward);
    }

    fn policy(&self) -> Vec<f64> {
        self.policy.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::{sample, Phc};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn equal_steps_match_phc() {
        let mut wolf = WolfPhc::new(2, 0.02, 0.02, 0.5, Some(0.3), Exploration::NONE);
        let mut phc = Phc::new(2, 0.02, 0.5, Some(0.3), Exploration::NONE);
        for k in 0..200 {
            let a = (k * 7 + k / 3) % 2;
            let r = [1.0, 2.0][a] + (k % 5) as f64;
            wolf.step(a, r);
            phc.step(a, r);
            assert_eq!(wolf.policy, phc.policy);
        }
    }

    #[test]
    fn best_response_to_stationary_opponent() {
        // row payoffs of the prisoner's dilemma against an opponent cooperating 70% of the time
        let payoff = [[3.0, 0.0], [5.0, 1.0]];
        let mut wolf = WolfPhc::new(2, 0.0025, 0.01, 0.8, None, Exploration::default());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let a = wolf.choose_action(&mut rng);
            let b = sample(&[0.7, 0.3], &mut rng);
            wolf.observe(&Observation { own_action: a, reward: payoff[a][b], group_average: 0.0, joint_actions: None });
        }
        assert!(wolf.policy[1] >= 0.99, "{:?}", wolf.policy);
    }

    #[test]
    fn first_step_is_a_winning_tie() {
        let mut wolf = WolfPhc::new(2, 0.01, 0.04, 1.0, None, Exploration::NONE);
        wolf.step(0, 1.0);
        assert!((wolf.policy[0] - 0.51).abs() < 1e-15);
    }
}
