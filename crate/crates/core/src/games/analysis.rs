use serde::{Deserialize, Serialize};

use super::{MixedProfile, NormalFormGame};
use crate::error::{Error, Result};

/// Expected payoff of `player` when everybody mixes according to `profile`.
pub fn expected_payoff(game: &NormalFormGame, profile: &MixedProfile, player: usize) -> Result<f64> {
    game.check_player(player)?;
    check_profile(game, profile)?;
    let mut total = 0.0;
    for idx in 0..game.n_joint() {
        let joint = game.joint_from_index(idx);
        let weight: f64 = joint
            .iter()
            .enumerate()
            .map(|(i, &a)| profile.strategy(i)[a])
            .product();
        if weight != 0.0 {
            total += weight * game.payoff_at(idx)[player];
        }
    }
    Ok(total)
}

/// Average expected payoff over all players; the same for every `player`.
pub fn social_payoff(game: &NormalFormGame, profile: &MixedProfile, player: usize) -> Result<f64> {
    game.check_player(player)?;
    let n = game.n_players();
    let mut sum = 0.0;
    for i in 0..n {
        sum += expected_payoff(game, profile, i)?;
    }
    Ok(sum / n as f64)
}

fn check_profile(game: &NormalFormGame, profile: &MixedProfile) -> Result<()> {
    let dims: Vec<usize> = profile.strategies().iter().map(Vec::len).collect();
    if dims != game.actions() {
        return Err(Error::contract(format!(
            "profile dimensions {dims:?} do not match game actions {:?}",
            game.actions()
        )));
    }
    Ok(())
}

/// Payoff-difference coefficients of one player in a 2x2 game.
///
/// With `r[j][k]` the player's payoff for own action `j` against opponent
/// action `k`: `u = r11 + r22 - r12 - r21`, `c = r12 - r22`, `d = r21 - r22`
/// and `e = r22 - r22(opponent)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedCoefficients {
    pub u: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

pub fn reduced_coefficients(game: &NormalFormGame, player: usize) -> Result<ReducedCoefficients> {
    game.check_player(player)?;
    let r = game.own_matrix(player)?;
    let other = game.own_matrix(1 - player)?;
    Ok(ReducedCoefficients {
        u: r[0][0] + r[1][1] - r[0][1] - r[1][0],
        c: r[0][1] - r[1][1],
        d: r[1][0] - r[1][1],
        e: r[1][1] - other[1][1],
    })
}

/// Structural category of a strict 2x2 game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum GameCategory {
    /// At least one player has a strictly dominant action.
    DominantStrategy {
        dominant: [Option<usize>; 2],
        equilibria: Vec<[usize; 2]>,
    },
    TwoPureNe {
        equilibria: [[usize; 2]; 2],
    },
    /// No pure equilibrium; the unique equilibrium is interior.
    OneMixedNe { mixed: [f64; 2] },
}

/// Classifies a 2x2 game by its best-response structure.
pub fn classify_game(game: &NormalFormGame) -> Result<GameCategory> {
    let mut dominant = [None, None];
    for player in 0..2 {
        let r = game.own_matrix(player)?;
        let mut signs = [0.0; 2];
        for k in 0..2 {
            let diff = r[0][k] - r[1][k];
            if diff == 0.0 {
                let cell = |own: usize| if player == 0 { vec![own, k] } else { vec![k, own] };
                return Err(Error::Degenerate {
                    cells: vec![cell(0), cell(1)],
                });
            }
            signs[k] = diff.signum();
        }
        if signs[0] == signs[1] {
            dominant[player] = Some(if signs[0] > 0.0 { 0 } else { 1 });
        }
    }
    let equilibria: Vec<[usize; 2]> = pure_nash_equilibria(game)
        .into_iter()
        .map(|j| [j[0], j[1]])
        .collect();
    if dominant.iter().any(Option::is_some) {
        return Ok(GameCategory::DominantStrategy {
            dominant,
            equilibria,
        });
    }
    match equilibria.as_slice() {
        [a, b] => Ok(GameCategory::TwoPureNe { equilibria: [*a, *b] }),
        [] => {
            let mixed = mixed_ne_2x2(game)?.ok_or_else(|| {
                Error::Numerical("strict game without pure equilibria has no interior equilibrium".into())
            })?;
            Ok(GameCategory::OneMixedNe {
                mixed: [mixed.strategy(0)[0], mixed.strategy(1)[0]],
            })
        }
        // unreachable for strict games without dominant actions
        other => Err(Error::Numerical(format!(
            "unexpected pure equilibrium count {}",
            other.len()
        ))),
    }
}

/// All joint actions from which no player can strictly gain by deviating alone.
pub fn pure_nash_equilibria(game: &NormalFormGame) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for idx in 0..game.n_joint() {
        let joint = game.joint_from_index(idx);
        let stable = (0..game.n_players()).all(|i| {
            let current = game.payoff_at(idx)[i];
            let mut deviation = joint.clone();
            (0..game.actions()[i]).all(|a| {
                deviation[i] = a;
                game.payoff(&deviation)[i] <= current
            })
        });
        if stable {
            out.push(joint);
        }
    }
    out
}

/// Interior mixed equilibrium of a 2x2 game from the indifference conditions.
///
/// Player `i` is indifferent when `u_i * p_opp + c_i = 0`, so the opponent's
/// action-0 probability is `-c_i / u_i`. Returns `None` unless both solutions
/// lie strictly inside (0, 1).
pub fn mixed_ne_2x2(game: &NormalFormGame) -> Result<Option<MixedProfile>> {
    let k1 = reduced_coefficients(game, 0)?;
    let k2 = reduced_coefficients(game, 1)?;
    if k1.u == 0.0 || k2.u == 0.0 {
        return Ok(None);
    }
    let p2 = -k1.c / k1.u;
    let p1 = -k2.c / k2.u;
    let inside = |p: f64| p > 0.0 && p < 1.0;
    if inside(p1) && inside(p2) {
        Ok(Some(MixedProfile::two_action(&[p1, p2])?))
    } else {
        Ok(None)
    }
}

/// True when player 2's payoff matrix is the transpose of player 1's.
pub fn is_symmetric(game: &NormalFormGame) -> bool {
    match (game.own_matrix(0), game.own_matrix(1)) {
        (Ok(r1), Ok(r2)) => r1 == r2,
        _ => false,
    }
}

pub fn usw(v1: f64, v2: f64) -> f64 {
    v1 + v2
}

pub fn nsw(v1: f64, v2: f64) -> f64 {
    v1 * v2
}

/// Utilitarian welfare for any number of players.
pub fn usw_all(values: &[f64]) -> f64 {
    values.iter().sum()
}

/// Nash welfare (product of payoffs) for any number of players.
pub fn nsw_all(values: &[f64]) -> f64 {
    values.iter().product()
}

/// Entries of a symmetric 2x2 game in the usual `a b / c d` layout of the
/// row player (`a` = both play action 0, `b` = own 0 vs opponent 1, ...).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricLabels {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl SymmetricLabels {
    pub fn from_game(game: &NormalFormGame) -> Result<Self> {
        if !is_symmetric(game) {
            return Err(Error::contract("game is not symmetric"));
        }
        let r = game.own_matrix(0)?;
        Ok(Self {
            a: r[0][0],
            b: r[0][1],
            c: r[1][0],
            d: r[1][1],
        })
    }

    pub fn to_game(self) -> NormalFormGame {
        let m = [[self.a, self.b], [self.c, self.d]];
        let t = [[self.a, self.c], [self.b, self.d]];
        NormalFormGame::bimatrix(m, t)
    }

    /// `u = a + d - b - c`.
    pub fn u(&self) -> f64 {
        self.a + self.d - self.b - self.c
    }
}

/// Entries of a general two-player coordination game.
///
/// Upper case are the row player's payoffs (`R` at (0,0), `S` at (0,1),
/// `T` at (1,0), `P` at (1,1)); lower case the column player's at the same
/// cells (`r`, `t`, `s`, `p`).
#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoordinationLabels {
    pub R: f64,
    pub S: f64,
    pub T: f64,
    pub P: f64,
    pub r: f64,
    pub s: f64,
    pub t: f64,
    pub p: f64,
}

impl CoordinationLabels {
    pub fn from_game(game: &NormalFormGame) -> Result<Self> {
        let m1 = game.own_matrix(0)?;
        let m2 = game.own_matrix(1)?;
        let labels = Self {
            R: m1[0][0],
            S: m1[0][1],
            T: m1[1][0],
            P: m1[1][1],
            r: m2[0][0],
            // column player's own-first matrix: t is own 1 vs row 0, s is own 0 vs row 1
            t: m2[1][0],
            s: m2[0][1],
            p: m2[1][1],
        };
        labels.check()?;
        Ok(labels)
    }

    /// Verifies `R > T`, `P > S`, `r > t` and `p > s`, naming the first violation.
    pub fn check(&self) -> Result<()> {
        let conditions = [
            (self.R > self.T, "R > T"),
            (self.P > self.S, "P > S"),
            (self.r > self.t, "r > t"),
            (self.p > self.s, "p > s"),
        ];
        for (ok, name) in conditions {
            if !ok {
                return Err(Error::contract(format!(
                    "not a coordination game: {name} is violated"
                )));
            }
        }
        Ok(())
    }

    pub fn to_game(self) -> NormalFormGame {
        NormalFormGame::bimatrix(
            [[self.R, self.S], [self.T, self.P]],
            [[self.r, self.t], [self.s, self.p]],
        )
    }
}
