use serde::Serialize;

use crate::error::Result;
use crate::games::{random_ordinal_conflict_game, random_ordinal_game, NormalFormGame};
use crate::learners::LearnerSpec;
use crate::simulate::{derive_seed, run_batch, BatchSummary, RunConfig};

/// Settings of the welfare benchmark over random ordinal games.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkParams {
    pub n_games: usize,
    pub runs: usize,
    pub steps: usize,
    pub algos: Vec<LearnerSpec>,
    pub seed: u64,
    /// Restrict the sample to games without a cell ranked top by both players.
    pub conflict_only: bool,
}

impl Default for BenchmarkParams {
    fn default() -> Self {
        Self {
            n_games: 100,
            runs: 20,
            steps: 10_000,
            algos: vec![LearnerSpec::sapga(0.85), LearnerSpec::cjal(), LearnerSpec::wolfphc()],
            seed: 0,
            conflict_only: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkRow {
    pub algo: String,
    pub usw_mean: f64,
    pub usw_stderr: f64,
    pub nsw_mean: f64,
    pub nsw_stderr: f64,
    #[serde(skip)]
    pub batch: BatchSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkReport {
    pub n_games: usize,
    pub runs: usize,
    pub steps: usize,
    pub seed: u64,
    pub conflict_only: bool,
    pub rows: Vec<BenchmarkRow>,
}

impl BenchmarkReport {
    pub fn row(&self, kind: &str) -> Option<&BenchmarkRow> {
        self.rows.iter().find(|r| r.algo.starts_with(kind))
    }
}

/// The seeded game sample shared by every algorithm.
pub fn benchmark_games(n_games: usize, seed: u64, conflict_only: bool) -> Vec<NormalFormGame> {
    (0..n_games)
        .map(|g| {
            let game_seed = derive_seed(seed, g, usize::MAX);
            if conflict_only {
                random_ordinal_conflict_game(game_seed)
            } else {
                random_ordinal_game(game_seed)
            }
        })
        .collect()
}

/// Self-play of every algorithm on the same games with the same run seeds.
///
/// USW and NSW come from the final-window mean rewards of each run; a row
/// reports the mean over games of the per-game means and its standard error.
pub fn benchmark_table6(params: &BenchmarkParams) -> Result<BenchmarkReport> {
    let games = benchmark_games(params.n_games, params.seed, params.conflict_only);
    benchmark_on_games(&games, params)
}

pub fn benchmark_on_games(games: &[NormalFormGame], params: &BenchmarkParams) -> Result<BenchmarkReport> {
    let rows = params
        .algos
        .iter()
        .map(|algo| {
            let configs: Vec<RunConfig> = games
                .iter()
                .map(|g| RunConfig::new(g.clone(), vec![algo.clone(), algo.clone()], params.steps, 0))
                .collect();
            let batch = run_batch(&configs, params.runs, params.seed)?;
            Ok(BenchmarkRow {
                algo: algo.to_string(),
                usw_mean: batch.usw_mean,
                usw_stderr: batch.usw_stderr,
                nsw_mean: batch.nsw_mean,
                nsw_stderr: batch.nsw_stderr,
                batch,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchmarkReport {
        n_games: games.len(),
        runs: params.runs,
        steps: params.steps,
        seed: params.seed,
        conflict_only: params.conflict_only,
        rows,
    })
}
