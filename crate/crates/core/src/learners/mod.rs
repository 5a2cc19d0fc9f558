//! Discrete-time learners behind one interface.
//!
//! Every round the simulator asks each learner for an action, computes the
//! rewards, and hands each learner one [`Observation`].

mod cjal;
mod fixed;
mod phc;
mod sapga;
mod spec;
mod wolf;

pub use cjal::Cjal;
pub use fixed::Fixed;
pub use phc::Phc;
pub use sapga::Sapga;
pub use spec::LearnerSpec;
pub use wolf::WolfPhc;

use rand::{Rng, RngCore};

use crate::error::{Error, Result};

/// What a learner sees after a round.
#[derive(Debug, Clone, Copy)]
pub struct Observation<'a> {
    pub own_action: usize,
    pub reward: f64,
    /// Mean reward over all agents this round, the agent itself included.
    pub group_average: f64,
    /// The full joint action, only for learners that ask for it.
    pub joint_actions: Option<&'a [usize]>,
}

pub trait Learner: Send {
    fn choose_action(&mut self, rng: &mut dyn RngCore) -> usize;
    fn observe(&mut self, obs: &Observation<'_>);
    /// Current mixed policy, before exploration is mixed in.
    fn policy(&self) -> Vec<f64>;
    fn social_attitude(&self) -> Option<f64> {
        None
    }
    /// Whether the simulator should pass the joint action in [`Observation`].
    fn observes_joint_actions(&self) -> bool {
        false
    }
}

/// Decaying epsilon-greedy exploration, `eps0 / (1 + t / tau)` at round `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exploration {
    pub eps0: f64,
    pub tau: f64,
}

impl Default for Exploration {
    fn default() -> Self {
        Self { eps0: 0.1, tau: 2000.0 }
    }
}

impl Exploration {
    pub const NONE: Exploration = Exploration { eps0: 0.0, tau: f64::INFINITY };

    pub fn new(eps0: f64, tau: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps0) {
            return Err(Error::Config(format!("eps0 must lie in [0, 1], got {eps0}")));
        }
        if !(tau > 0.0) {
            return Err(Error::Config(format!("tau must be positive, got {tau}")));
        }
        Ok(Self { eps0, tau })
    }

    pub fn rate(&self, t: u64) -> f64 {
        self.eps0 / (1.0 + t as f64 / self.tau)
    }

    /// One exploration draw, then either a uniform action or a policy sample.
    pub fn choose(&self, t: u64, policy: &[f64], rng: &mut dyn RngCore) -> usize {
        let explore = rng.gen::<f64>() < self.rate(t);
        if explore {
            rng.gen_range(0..policy.len())
        } else {
            sample(policy, rng)
        }
    }
}

/// Draws an index from a probability vector.
pub fn sample(policy: &[f64], rng: &mut dyn RngCore) -> usize {
    let x: f64 = rng.gen();
    let mut acc = 0.0;
    for (a, &p) in policy.iter().enumerate() {
        acc += p;
        if x < acc {
            return a;
        }
    }
    // rounding left x above the total; take the last action with mass
    policy.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// Index of the largest value, ties going to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (a, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = a;
        }
    }
    best
}

/// One policy hill-climbing move toward the greedy action of `q`.
///
/// Non-greedy actions lose `step` (clamped at 0); the greedy action takes the
/// remaining mass so the policy sums to one.
pub fn hill_climb(policy: &mut [f64], q: &[f64], step: f64) {
    let greedy = argmax(q);
    let mut others = 0.0;
    for (a, p) in policy.iter_mut().enumerate() {
        if a != greedy {
            *p = (*p - step).clamp(0.0, 1.0);
            others += *p;
        }
    }
    policy[greedy] = 1.0 - others;
}

/// Initial policy: `p0` on action 0 and the rest spread evenly, or uniform.
pub fn initial_policy(n_actions: usize, p0: Option<f64>) -> Vec<f64> {
    match p0 {
        None => vec![1.0 / n_actions as f64; n_actions],
        Some(p) => {
            let rest = (1.0 - p) / (n_actions - 1) as f64;
            let mut v = vec![rest; n_actions];
            v[0] = p;
            v
        }
    }
}

/// Exponential-average update of the taken action's value.
fn blend(q: &mut [f64], action: usize, beta: f64, target: f64) {
    q[action] = (1.0 - beta) * q[action] + beta * target;
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn frequencies(policy: &[f64], explore: Exploration, n: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut counts = vec![0usize; policy.len()];
        for _ in 0..n {
            counts[explore.choose(0, policy, &mut rng)] += 1;
        }
        counts.iter().map(|&c| c as f64 / n as f64).collect()
    }

    #[test]
    fn sampling_frequencies() {
        let f = frequencies(&[0.6, 0.4], Exploration::NONE, 1_000_000);
        assert!((f[0] - 0.6).abs() < 0.01 && (f[1] - 0.4).abs() < 0.01, "{f:?}");
        let all_explore = Exploration::new(1.0, f64::INFINITY).unwrap();
        let f = frequencies(&[1.0, 0.0], all_explore, 1_000_000);
        assert!((f[0] - 0.5).abs() < 0.01, "{f:?}");
        let f = frequencies(&[1.0, 0.0], Exploration::NONE, 10_000);
        assert_eq!(f, vec![1.0, 0.0]);
    }

    #[test]
    fn exploration_decays() {
        let e = Exploration::default();
        assert_eq!(e.rate(0), 0.1);
        assert!((e.rate(2000) - 0.05).abs() < 1e-15);
        assert!(Exploration::new(1.5, 1.0).is_err());
        assert!(Exploration::new(0.1, 0.0).is_err());
    }

    #[test]
    fn hill_climb_examples() {
        let mut pi = vec![0.5, 0.5];
        hill_climb(&mut pi, &[1.0, 0.0], 0.1);
        assert!((pi[0] - 0.6).abs() < 1e-15 && (pi[1] - 0.4).abs() < 1e-15);
        let mut pi = vec![1.0, 0.0];
        hill_climb(&mut pi, &[1.0, 0.0], 0.1);
        assert_eq!(pi, vec![1.0, 0.0]);
        // ties go to the lowest index
        let mut pi = vec![0.3, 0.3, 0.4];
        hill_climb(&mut pi, &[2.0, 2.0, 1.0], 0.1);
        assert_eq!(argmax(&[2.0, 2.0, 1.0]), 0);
        assert!((pi[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn initial_policies() {
        assert_eq!(initial_policy(2, None), vec![0.5, 0.5]);
        assert_eq!(initial_policy(3, Some(0.5)), vec![0.5, 0.25, 0.25]);
    }
}
