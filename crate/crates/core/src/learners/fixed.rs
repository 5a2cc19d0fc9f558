use rand::RngCore;

use super::{sample, Learner, Observation};

/// A learner that never changes its mixed policy and never explores.
#[derive(Debug, Clone)]
pub struct Fixed {
    pub policy: Vec<f64>,
}

impl Learner for Fixed {
    fn choose_action(&mut self, rng: &mut dyn RngCore) -> usize {
        sample(&self.policy, rng)
    }

    fn observe(&mut self, _obs: &Observation<'_>) {}

    fn policy(&self) -> Vec<f64> {
        self.policy.clone()
    }
}
