use rand::{Rng, RngCore};

use super::{argmax, Exploration, Learner, Observation};

/// Conditional joint-action learner for two-player games.
///
/// Counts joint actions to estimate `P(opponent action | own action)` and
/// keeps the mean reward of every joint cell. After `warmup` rounds of
/// uniform play it acts epsilon-greedily on the conditional expected payoff
/// `E(a) = sum_b P(b | a) U(a, b)`.
#[derive(Debug, Clone)]
pub struct Cjal {
    seat: usize,
    /// `counts[a][b]`: rounds with own action `a` and opponent action `b`.
    pub counts: Vec<Vec<u64>>,
    /// Running mean reward per joint cell.
    pub mean_reward: Vec<Vec<f64>>,
    pub warmup: u64,
    pub exploration: Exploration,
    rounds: u64,
}

impl Cjal {
    pub fn new(n_actions: usize, opponent_actions: usize, seat: usize, warmup: u64, exploration: Exploration) -> Self {
        Self {
            seat,
            counts: vec![vec![0; opponent_actions]; n_actions],
            mean_reward: vec![vec![0.0; opponent_actions]; n_actions],
            warmup,
            exploration,
            rounds: 0,
        }
    }

    /// Estimated `P(b | a)`, uniform for an own action never played.
    pub fn conditional(&self, a: usize) -> Vec<f64> {
        let row = &self.counts[a];
        let total: u64 = row.iter().sum();
        if total == 0 {
            return vec![1.0 / row.len() as f64; row.len()];
        }
        row.iter().map(|&c| c as f64 / total as f64).collect()
    }

    pub fn expected_payoffs(&self) -> Vec<f64> {
        (0..self.counts.len())
            .map(|a| {
                self.conditional(a)
                    .iter()
                    .zip(&self.mean_reward[a])
                    .map(|(p, u)| p * u)
                    .sum()
            })
            .collect()
    }

    fn greedy_policy(&self) -> Vec<f64> {
        let mut pure = vec![0.0; self.counts.len()];
        pure[argmax(&self.expected_payoffs())] = 1.0;
        pure
    }
}

impl Learner for Cjal {
    fn choose_action(&mut self, rng: &mut dyn RngCore) -> usize {
        if self.rounds < self.warmup {
            return rng.gen_range(0..self.counts.len());
        }
        self.exploration.choose(self.rounds, &self.greedy_policy(), rng)
    }

    fn observe(&mut self, obs: &Observation<'_>) {
        self.rounds += 1;
        let Some(joint) = obs.joint_actions else {
            return;
        };
        let a = obs.own_action;
        let b = joint[1 - self.seat];
        self.counts[a][b] += 1;
        let n = self.counts[a][b] as f64;
        self.mean_reward[a][b] += (obs.reward - self.mean_reward[a][b]) / n;
    }

    fn policy(&self) -> Vec<f64> {
        let n = self.counts.len();
        if self.rounds < self.warmup {
            return vec![1.0 / n as f64; n];
        }
        let eps = self.exploration.rate(self.rounds);
        let greedy = argmax(&self.expected_payoffs());
        let mut pi = vec![eps / n as f64; n];
        pi[greedy] = 1.0 - eps + eps / n as f64;
        pi
    }

    fn observes_joint_actions(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn starts_uniform() {
        let c = Cjal::new(2, 2, 0, 0, Exploration::default());
        assert_eq!(c.conditional(0), vec![0.5, 0.5]);
        let c = Cjal::new(2, 2, 0, 10, Exploration::default());
        assert_eq!(c.policy(), vec![0.5, 0.5]);
    }

    #[test]
    fn conditional_estimates_against_uniform_opponent() {
        let payoff = [[3.0, 0.0], [5.0, 1.0]];
        let mut c = Cjal::new(2, 2, 1, 100, Exploration::default());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5000 {
            let a = c.choose_action(&mut rng);
            let b = sample(&[0.5, 0.5], &mut rng);
            let joint = [b, a];
            c.observe(&Observation { own_action: a, reward: payoff[a][b], group_average: 0.0, joint_actions: Some(&joint) });
        }
        for a in 0..2 {
            let p = c.conditional(a);
            assert!((p[0] - 0.5).abs() < 0.05, "action {a}: {p:?}");
        }
        // defection is the greedy reply to a coin-flipping opponent
        assert!(c.policy()[1] > 0.9);
    }
}
