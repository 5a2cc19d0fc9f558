//! Game definition files.
//!
//! A TOML document with the number of players, the action counts, optional
//! action labels and one row-major payoff list per player:
//!
//! ```toml
//! name = "pd"
//! players = 2
//! actions = [2, 2]
//! labels = [["C", "D"], ["C", "D"]]
//! payoffs = [[3, 0, 5, 1], [3, 5, 0, 1]]
//! ```
//!
//! Joint actions are enumerated with player 1's action most significant, so
//! for two players the order is (0,0), (0,1), (1,0), (1,1).

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::NormalFormGame;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub players: usize,
    pub actions: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Vec<String>>>,
    pub payoffs: Vec<Vec<f64>>,
}

impl GameFile {
    pub fn from_game(game: &NormalFormGame) -> Self {
        Self {
            name: Some(game.name().to_string()),
            players: game.n_players(),
            actions: game.actions().to_vec(),
            labels: Some(game.labels().to_vec()),
            payoffs: (0..game.n_players()).map(|i| game.player_payoffs(i)).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(format!("game file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("game file serialises")
    }

    pub fn into_game(self) -> Result<NormalFormGame> {
        if self.players != self.actions.len() {
            return Err(Error::Parse(format!(
                "players = {} but {} action counts given",
                self.players,
                self.actions.len()
            )));
        }
        let mut game = NormalFormGame::new(self.actions, self.payoffs)?;
        if let Some(labels) = self.labels {
            game = game.with_labels(labels)?;
        }
        if let Some(name) = self.name {
            game = game.with_name(name);
        }
        Ok(game)
    }
}
