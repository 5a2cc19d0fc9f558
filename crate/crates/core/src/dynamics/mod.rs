//! Continuous-time learning dynamics of two socially-aware gradient-ascent agents.
//!
//! The state is `(p1, p2, w1, w2)`: each player's probability of action 0 and
//! its social attitude. Each policy climbs the gradient of the attitude-weighted
//! blend of individual and average payoff; each attitude grows at rate
//! `epsilon` times the player's payoff advantage over its opponent.

mod equilibria;
mod integrate;
mod linear;

pub use equilibria::{
    coordination_equilibria, eigen_stability, find_interior_equilibria, find_interior_equilibria_with,
    symmetric_equilibria, EquilibriumFamily, EquilibriumKind, EquilibriumReport, Interval,
    InteriorSearch, Stability,
};
pub use integrate::{integrate, Trajectory, TrajectoryMeta};
pub use linear::{eigenvalues_4x4, linearize, symmetric_linear_matrix, Complex, Matrix4x4};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::{
    is_symmetric, reduced_coefficients, CoordinationLabels, NormalFormGame, ReducedCoefficients,
    SymmetricLabels,
};

/// Policies and social attitudes of the two players.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsState {
    pub p1: f64,
    pub p2: f64,
    pub w1: f64,
    pub w2: f64,
    /// Set when the state is used for analysis outside the unit box.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unconstrained: bool,
}

impl DynamicsState {
    pub fn new(p1: f64, p2: f64, w1: f64, w2: f64) -> Self {
        Self {
            p1,
            p2,
            w1,
            w2,
            unconstrained: false,
        }
    }

    pub fn unconstrained(p1: f64, p2: f64, w1: f64, w2: f64) -> Self {
        Self {
            unconstrained: true,
            ..Self::new(p1, p2, w1, w2)
        }
    }

    pub fn from_array(x: [f64; 4]) -> Self {
        Self::new(x[0], x[1], x[2], x[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.p1, self.p2, self.w1, self.w2]
    }

    /// Projects every component onto [0, 1].
    pub fn clamped(self) -> Self {
        let x = self.to_array().map(|v| v.clamp(0.0, 1.0));
        Self::from_array(x)
    }

    pub fn in_unit_box(&self) -> bool {
        self.to_array().iter().all(|v| (0.0..=1.0).contains(v))
    }
}

/// Reduced coefficients of both players plus the attitude/policy rate ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsParams {
    pub players: [ReducedCoefficients; 2],
    pub epsilon: f64,
}

impl DynamicsParams {
    pub fn new(players: [ReducedCoefficients; 2], epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::contract(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(Self { players, epsilon })
    }

    pub fn from_game(game: &NormalFormGame, epsilon: f64) -> Result<Self> {
        Self::new(
            [reduced_coefficients(game, 0)?, reduced_coefficients(game, 1)?],
            epsilon,
        )
    }
}

/// Right-hand side `(p1', p2', w1', w2')` of the socially-aware dynamics.
pub fn saiga_rhs(state: &DynamicsState, params: &DynamicsParams) -> [f64; 4] {
    let p = [state.p1, state.p2];
    let w = [state.w1, state.w2];
    let mut out = [0.0; 4];
    for i in 0..2 {
        let o = 1 - i;
        let me = &params.players[i];
        let them = &params.players[o];
        out[i] = (me.u + 0.5 * (them.u - me.u) * w[i]) * p[o] + 0.5 * (them.d - me.c) * w[i] + me.c;
        out[2 + i] = params.epsilon
            * ((me.u - them.u) * p[i] * p[o]
                + (me.c - them.d) * p[i]
                + (me.d - them.c) * p[o]
                + me.e);
    }
    out
}

/// The same dynamics written with the symmetric-game entries `a, b, c, d`.
pub fn symmetric_rhs(state: &DynamicsState, game: &NormalFormGame, epsilon: f64) -> Result<[f64; 4]> {
    if !is_symmetric(game) {
        return Err(Error::contract("symmetric_rhs needs a symmetric game"));
    }
    let SymmetricLabels { a, b, c, d } = SymmetricLabels::from_game(game)?;
    let u = a + d - b - c;
    let p = [state.p1, state.p2];
    let w = [state.w1, state.w2];
    let mut out = [0.0; 4];
    for i in 0..2 {
        let o = 1 - i;
        out[i] = u * p[o] + 0.5 * (c - b) * w[i] + b - d;
        out[2 + i] = epsilon * (b - c) * (p[i] - p[o]);
    }
    Ok(out)
}

/// The dynamics written with coordination-game entries; `w2' = -w1'`.
#[allow(non_snake_case)]
pub fn coordination_rhs(state: &DynamicsState, game: &NormalFormGame, epsilon: f64) -> Result<[f64; 4]> {
    let CoordinationLabels { R, S, T, P, r, s, t, p } = CoordinationLabels::from_game(game)?;
    let u1 = R + P - S - T;
    let u2 = r + p - s - t;
    let (c1, c2) = (S - P, s - p);
    let (d1, d2) = (T - P, t - p);
    let (p1, p2, w1, w2) = (state.p1, state.p2, state.w1, state.w2);
    let dp1 = (u1 + 0.5 * (u2 - u1) * w1) * p2 + 0.5 * (d2 - c1) * w1 + c1;
    let dp2 = (u2 + 0.5 * (u1 - u2) * w2) * p1 + 0.5 * (d1 - c2) * w2 + c2;
    let dw1 = epsilon * ((u1 - u2) * p1 * p2 + (S - P - t + p) * p1 + (T - P - s + p) * p2 + P - p);
    Ok([dp1, dp2, dw1, -dw1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{coordination_game, prisoners_dilemma};

    fn close(a: [f64; 4], b: [f64; 4], tol: f64) -> bool {
        a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn pd_rhs_at_full_cooperation() {
        let params = DynamicsParams::from_game(&prisoners_dilemma(), 1.0).unwrap();
        let rhs = saiga_rhs(&DynamicsState::new(1.0, 1.0, 1.0, 1.0), &params);
        assert!((rhs[0] - 0.5).abs() < 1e-15);
        assert_eq!(rhs[2], 0.0);
        assert_eq!(rhs[3], 0.0);
    }

    #[test]
    fn cg_rhs_at_origin_is_c() {
        let params = DynamicsParams::from_game(&coordination_game(), 1.0).unwrap();
        let rhs = saiga_rhs(&DynamicsState::new(0.0, 0.0, 0.0, 0.0), &params);
        assert_eq!(rhs[0], -4.0);
        assert_eq!(rhs[1], -3.0);
    }

    #[test]
    fn symmetric_rhs_pd_examples() {
        let pd = prisoners_dilemma();
        let rhs = symmetric_rhs(&DynamicsState::new(1.0, 1.0, 1.0, 1.0), &pd, 1.0).unwrap();
        assert!((rhs[0] - 0.5).abs() < 1e-15 && (rhs[1] - 0.5).abs() < 1e-15);
        // defection absorbs below the 0.4 attitude threshold
        for w in [0.0, 0.1, 0.39] {
            let rhs = symmetric_rhs(&DynamicsState::new(0.0, 0.0, w, w), &pd, 1.0).unwrap();
            assert!(rhs[0] < 0.0 && rhs[1] < 0.0);
        }
        let rhs = symmetric_rhs(&DynamicsState::new(0.3, 0.3, 0.2, 0.9), &pd, 2.0).unwrap();
        assert_eq!((rhs[2], rhs[3]), (0.0, 0.0));
        assert!(symmetric_rhs(&DynamicsState::new(0.0, 0.0, 0.0, 0.0), &coordination_game(), 1.0).is_err());
    }

    #[test]
    fn coordination_rhs_examples() {
        let cg = coordination_game();
        let params = DynamicsParams::from_game(&cg, 1.0).unwrap();
        for w in [0.0, 0.5, 1.0] {
            let s = DynamicsState::new(1.0, 1.0, w, 1.0 - w);
            let rhs = coordination_rhs(&s, &cg, 1.0).unwrap();
            assert!(rhs[0] > 0.0 && rhs[1] > 0.0);
            assert!(close(rhs, saiga_rhs(&s, &params), 1e-12));
        }
        let s = DynamicsState::new(0.3, 0.8, 0.1, 0.6);
        let rhs = coordination_rhs(&s, &cg, 0.7).unwrap();
        assert_eq!(rhs[2], -rhs[3]);
        let sym = CoordinationLabels { R: 4.0, S: 0.0, T: 1.0, P: 3.0, r: 4.0, s: 0.0, t: 1.0, p: 3.0 }.to_game();
        assert!(close(
            coordination_rhs(&s, &sym, 0.7).unwrap(),
            symmetric_rhs(&s, &sym, 0.7).unwrap(),
            1e-12
        ));
        let err = coordination_rhs(&s, &prisoners_dilemma(), 1.0).unwrap_err();
        assert!(err.to_string().contains("R > T"));
    }

    #[test]
    fn epsilon_must_be_positive() {
        assert!(DynamicsParams::from_game(&prisoners_dilemma(), 0.0).is_err());
        assert!(DynamicsParams::from_game(&prisoners_dilemma(), f64::NAN).is_err());
    }
}
