//! Benchmark games and random ordinal game generation.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{GameFile, NormalFormGame};
use crate::error::{Error, Result};

/// Prisoner's dilemma: (C,C)=3/3, (C,D)=0/5, (D,C)=5/0, (D,D)=1/1.
pub fn prisoners_dilemma() -> NormalFormGame {
    NormalFormGame::bimatrix([[3.0, 0.0], [5.0, 1.0]], [[3.0, 5.0], [0.0, 1.0]]).with_name("pd")
}

/// Asymmetric coordination game: (C,C)=3/4, (D,D)=4/3, off-diagonal 0/0.
pub fn coordination_game() -> NormalFormGame {
    NormalFormGame::bimatrix([[3.0, 0.0], [0.0, 4.0]], [[4.0, 0.0], [0.0, 3.0]]).with_name("cg")
}

/// Game whose only equilibrium is mixed while (C,D) is socially optimal:
/// (C,C)=3/2, (C,D)=4/4, (D,C)=1/3, (D,D)=5/1.
pub fn mixonly_game() -> NormalFormGame {
    NormalFormGame::bimatrix([[3.0, 4.0], [1.0, 5.0]], [[2.0, 4.0], [3.0, 1.0]]).with_name("mixonly")
}

/// N-player public goods game. Action 0 contributes `cost`, action 1 withholds.
///
/// With `n_c` contributors a withholder receives `r * n_c * cost / n` and a
/// contributor receives the same minus `cost`.
pub fn pgg_game(n: usize, r: f64, cost: f64) -> Result<NormalFormGame> {
    if n < 2 {
        return Err(Error::contract(format!("public goods game needs n >= 2, got {n}")));
    }
    if !(r > 1.0) || !r.is_finite() {
        return Err(Error::contract(format!("multiplication factor must exceed 1, got {r}")));
    }
    if !(cost > 0.0) || !cost.is_finite() {
        return Err(Error::contract(format!("contribution cost must be positive, got {cost}")));
    }
    let actions = vec![2; n];
    let n_joint = 1usize << n;
    let mut per_player = vec![Vec::with_capacity(n_joint); n];
    for idx in 0..n_joint {
        // row-major with player 0 most significant
        let joint: Vec<usize> = (0..n).map(|i| (idx >> (n - 1 - i)) & 1).collect();
        let n_c = joint.iter().filter(|&&a| a == 0).count() as f64;
        let share = r * n_c * cost / n as f64;
        for (i, &a) in joint.iter().enumerate() {
            per_player[i].push(if a == 0 { share - cost } else { share });
        }
    }
    Ok(NormalFormGame::new(actions, per_player)?.with_name(format!("pgg:{n},{r},{cost}")))
}

/// A 2x2 game whose payoffs are the given ranks, listed over the joint
/// actions (0,0), (0,1), (1,0), (1,1).
pub fn ordinal_game_from_ranks(ranks1: [u8; 4], ranks2: [u8; 4]) -> Result<NormalFormGame> {
    for ranks in [ranks1, ranks2] {
        let mut sorted = ranks;
        sorted.sort_unstable();
        if sorted != [1, 2, 3, 4] {
            return Err(Error::contract(format!("{ranks:?} is not a permutation of 1..=4")));
        }
    }
    let to_f = |r: [u8; 4]| r.iter().map(|&x| f64::from(x)).collect::<Vec<_>>();
    NormalFormGame::new(vec![2, 2], vec![to_f(ranks1), to_f(ranks2)])
}

/// No joint action is ranked best by both players.
pub fn is_conflict_game(game: &NormalFormGame) -> bool {
    (0..game.n_joint()).all(|idx| {
        let v = game.payoff_at(idx);
        !(v[0] == 4.0 && v[1] == 4.0)
    })
}

fn random_ranks(rng: &mut ChaCha8Rng) -> [u8; 4] {
    let mut ranks = [1, 2, 3, 4];
    ranks.shuffle(rng);
    ranks
}

/// Random strict ordinal 2x2 game, resampled until it is a conflict game.
pub fn random_ordinal_conflict_game(seed: u64) -> NormalFormGame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let game = ordinal_game_from_ranks(random_ranks(&mut rng), random_ranks(&mut rng))
            .expect("shuffled ranks are permutations");
        if is_conflict_game(&game) {
            return game.with_name(format!("ordinal-conflict:{seed}"));
        }
    }
}

/// Random strict ordinal 2x2 game without the conflict filter.
pub fn random_ordinal_game(seed: u64) -> NormalFormGame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ordinal_game_from_ranks(random_ranks(&mut rng), random_ranks(&mut rng))
        .expect("shuffled ranks are permutations")
        .with_name(format!("ordinal:{seed}"))
}

/// Resolves `pd`, `cg`, `mixonly`, `pgg:N,r,c` or a path to a game file.
pub fn game_by_name(name: &str) -> Result<NormalFormGame> {
    match name {
        "pd" => Ok(prisoners_dilemma()),
        "cg" => Ok(coordination_game()),
        "mixonly" => Ok(mixonly_game()),
        _ => {
            if let Some(rest) = name.strip_prefix("pgg:") {
                let parts: Vec<&str> = rest.split(',').collect();
                if parts.len() != 3 {
                    return Err(Error::Parse(format!("expected pgg:N,r,c, got `{name}`")));
                }
                let n = parts[0]
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad player count `{}`", parts[0])))?;
                let num = |s: &str| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad number `{s}` in `{name}`")))
                };
                return pgg_game(n, num(parts[1])?, num(parts[2])?);
            }
            let path = std::path::Path::new(name);
            if path.exists() {
                return GameFile::load(path)?.into_game();
            }
            Err(Error::Parse(format!(
                "unknown game `{name}` (expected pd, cg, mixonly, pgg:N,r,c or a game file)"
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgg_payoff_examples() {
        let g = pgg_game(3, 2.0, 2.0).unwrap();
        assert!(g.payoff(&[0, 0, 0]).iter().all(|&v| (v - 2.0).abs() < 1e-12));
        assert!(g.payoff(&[1, 1, 1]).iter().all(|&v| v == 0.0));
        let mixed = g.payoff(&[0, 1, 0]);
        assert!((mixed[1] - 8.0 / 3.0).abs() < 1e-12);
        assert!((mixed[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((mixed[2] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn pgg_rejects_bad_parameters() {
        assert!(pgg_game(1, 2.0, 2.0).is_err());
        assert!(pgg_game(3, 1.0, 2.0).is_err());
        assert!(pgg_game(3, 2.0, 0.0).is_err());
    }

    #[test]
    fn conflict_filter() {
        let disagree = ordinal_game_from_ranks([4, 3, 2, 1], [1, 2, 3, 4]).unwrap();
        assert!(is_conflict_game(&disagree));
        let agree = ordinal_game_from_ranks([4, 3, 2, 1], [4, 3, 2, 1]).unwrap();
        assert!(!is_conflict_game(&agree));
        assert!(ordinal_game_from_ranks([4, 4, 2, 1], [1, 2, 3, 4]).is_err());
    }

    #[test]
    fn random_ordinal_games_are_deterministic_permutations() {
        for seed in 0..200 {
            let g = random_ordinal_conflict_game(seed);
            assert!(is_conflict_game(&g));
            for p in 0..2 {
                let mut v = g.player_payoffs(p);
                v.sort_by(f64::total_cmp);
                assert_eq!(v, vec![1.0, 2.0, 3.0, 4.0]);
            }
            assert_eq!(g, random_ordinal_conflict_game(seed));
            assert_eq!(random_ordinal_game(seed), random_ordinal_game(seed));
        }
    }

    #[test]
    fn names_resolve() {
        assert_eq!(game_by_name("pd").unwrap(), prisoners_dilemma());
        assert_eq!(game_by_name("pgg:4,3,1").unwrap().n_players(), 4);
        assert!(matches!(game_by_name("nope"), Err(Error::Parse(_))));
        assert!(game_by_name("pgg:3,2").is_err());
    }
}
