//! Normal-form games and the quantities the learners and dynamics are built on.

mod analysis;
mod catalog;
mod file;

pub use analysis::{
    classify_game, expected_payoff, is_symmetric, mixed_ne_2x2, nsw, nsw_all,
    pure_nash_equilibria, reduced_coefficients, social_payoff, usw, usw_all, CoordinationLabels,
    GameCategory, ReducedCoefficients, SymmetricLabels,
};
pub use catalog::{
    coordination_game, game_by_name, is_conflict_game, mixonly_game, ordinal_game_from_ranks,
    pgg_game, prisoners_dilemma, random_ordinal_conflict_game, random_ordinal_game,
};
pub use file::GameFile;

use crate::error::{Error, Result};

/// An N-player normal-form game with a payoff vector for every joint action.
///
/// Joint actions are flattened row-major: player 0's action is the most
/// significant digit.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormGame {
    name: String,
    actions: Vec<usize>,
    labels: Vec<Vec<String>>,
    payoffs: Vec<Vec<f64>>,
}

impl NormalFormGame {
    /// Builds a game from one row-major payoff list per player.
    pub fn new(actions: Vec<usize>, per_player: Vec<Vec<f64>>) -> Result<Self> {
        if actions.len() < 2 {
            return Err(Error::contract(format!(
                "a game needs at least 2 players, got {}",
                actions.len()
            )));
        }
        if let Some(i) = actions.iter().position(|&n| n < 2) {
            return Err(Error::contract(format!(
                "player {i} has {} actions, at least 2 required",
                actions[i]
            )));
        }
        if per_player.len() != actions.len() {
            return Err(Error::contract(format!(
                "expected payoff lists for {} players, got {}",
                actions.len(),
                per_player.len()
            )));
        }
        let n_joint: usize = actions.iter().product();
        for (i, list) in per_player.iter().enumerate() {
            if list.len() != n_joint {
                return Err(Error::contract(format!(
                    "player {i} payoff list has {} entries, expected {n_joint}",
                    list.len()
                )));
            }
            if list.iter().any(|x| !x.is_finite()) {
                return Err(Error::contract(format!("player {i} has a non-finite payoff")));
            }
        }
        let payoffs = (0..n_joint)
            .map(|j| per_player.iter().map(|list| list[j]).collect())
            .collect();
        let labels = actions
            .iter()
            .map(|&n| default_labels(n))
            .collect();
        Ok(Self {
            name: "custom".to_string(),
            actions,
            labels,
            payoffs,
        })
    }

    /// Two-player convenience constructor; `p1[j][k]` and `p2[j][k]` are the
    /// payoffs when player 1 plays `j` and player 2 plays `k`.
    pub fn bimatrix(p1: [[f64; 2]; 2], p2: [[f64; 2]; 2]) -> Self {
        let flat = |m: [[f64; 2]; 2]| vec![m[0][0], m[0][1], m[1][0], m[1][1]];
        Self::new(vec![2, 2], vec![flat(p1), flat(p2)]).expect("2x2 bimatrix is well formed")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.actions.len()
            || labels.iter().zip(&self.actions).any(|(l, &n)| l.len() != n)
        {
            return Err(Error::contract("action labels do not match the action counts"));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_players(&self) -> usize {
        self.actions.len()
    }

    pub fn actions(&self) -> &[usize] {
        &self.actions
    }

    pub fn labels(&self) -> &[Vec<String>] {
        &self.labels
    }

    pub fn n_joint(&self) -> usize {
        self.payoffs.len()
    }

    pub fn is_two_by_two(&self) -> bool {
        self.actions == [2, 2]
    }

    pub fn joint_index(&self, joint: &[usize]) -> usize {
        debug_assert_eq!(joint.len(), self.actions.len());
        joint
            .iter()
            .zip(&self.actions)
            .fold(0, |idx, (&a, &n)| idx * n + a)
    }

    pub fn joint_from_index(&self, mut idx: usize) -> Vec<usize> {
        let mut joint = vec![0; self.actions.len()];
        for (slot, &n) in joint.iter_mut().zip(&self.actions).rev() {
            *slot = idx % n;
            idx /= n;
        }
        joint
    }

    /// Payoff vector (one entry per player) for a joint action.
    pub fn payoff(&self, joint: &[usize]) -> &[f64] {
        &self.payoffs[self.joint_index(joint)]
    }

    pub fn payoff_at(&self, joint_index: usize) -> &[f64] {
        &self.payoffs[joint_index]
    }

    /// Row-major payoff list of one player, the inverse of [`NormalFormGame::new`].
    pub fn player_payoffs(&self, player: usize) -> Vec<f64> {
        self.payoffs.iter().map(|v| v[player]).collect()
    }

    /// `m[j][k]`: payoff of `player` when it plays `j` and its opponent plays `k`.
    pub(crate) fn own_matrix(&self, player: usize) -> Result<[[f64; 2]; 2]> {
        if !self.is_two_by_two() {
            return Err(Error::UnsupportedShape(format!(
                "expected a 2x2 game, got actions {:?}",
                self.actions
            )));
        }
        let mut m = [[0.0; 2]; 2];
        for (j, row) in m.iter_mut().enumerate() {
            for (k, cell) in row.iter_mut().enumerate() {
                let joint = if player == 0 { [j, k] } else { [k, j] };
                *cell = self.payoff(&joint)[player];
            }
        }
        Ok(m)
    }

    fn check_player(&self, player: usize) -> Result<()> {
        if player >= self.n_players() {
            return Err(Error::contract(format!(
                "player index {player} out of range for a {}-player game",
                self.n_players()
            )));
        }
        Ok(())
    }
}

fn default_labels(n: usize) -> Vec<String> {
    if n == 2 {
        vec!["C".into(), "D".into()]
    } else {
        (0..n).map(|a| format!("a{a}")).collect()
    }
}

/// One probability vector per player.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MixedProfile(Vec<Vec<f64>>);

pub const SIMPLEX_TOL: f64 = 1e-12;

impl MixedProfile {
    pub fn new(strategies: Vec<Vec<f64>>) -> Result<Self> {
        for (i, s) in strategies.iter().enumerate() {
            if s.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
                return Err(Error::contract(format!("player {i} has a negative or non-finite probability")));
            }
            let sum: f64 = s.iter().sum();
            if (sum - 1.0).abs() > SIMPLEX_TOL {
                return Err(Error::contract(format!(
                    "player {i} probabilities sum to {sum}, not 1"
                )));
            }
        }
        Ok(Self(strategies))
    }

    /// Two-action profile from the probabilities of playing action 0.
    pub fn two_action(p: &[f64]) -> Result<Self> {
        if p.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
            return Err(Error::contract("action-0 probabilities must lie in [0, 1]"));
        }
        Self::new(p.iter().map(|&x| vec![x, 1.0 - x]).collect())
    }

    /// Degenerate profile placing all mass on `joint`.
    pub fn pure(joint: &[usize], actions: &[usize]) -> Self {
        Self(
            joint
                .iter()
                .zip(actions)
                .map(|(&a, &n)| {
                    let mut v = vec![0.0; n];
                    v[a] = 1.0;
                    v
                })
                .collect(),
        )
    }

    pub fn strategies(&self) -> &[Vec<f64>] {
        &self.0
    }

    pub fn strategy(&self, player: usize) -> &[f64] {
        &self.0[player]
    }
}
