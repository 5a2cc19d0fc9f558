use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Args;
use serde_json::{json, Value};

use saiga::dynamics::{
    coordination_equilibria, eigenvalues_4x4, find_interior_equilibria, integrate, linearize, symmetric_equilibria,
    eigen_stability, DynamicsParams, DynamicsState,
};
use saiga::experiments::{benchmark_table6, comparison_starts, run_experiment, BenchmarkParams, ExperimentSpec};
use saiga::games::{
    classify_game, game_by_name, is_symmetric, mixed_ne_2x2, pure_nash_equilibria, reduced_coefficients, GameFile,
};
use saiga::learners::LearnerSpec;
use saiga::simulate::{run, RunConfig};

use crate::{CliError, Cmd, Common};

type Result<T> = std::result::Result<T, CliError>;

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Game name or game file.
    #[arg(long)]
    pub game: String,
    /// Comma-separated learner specs, one per seat.
    #[arg(long)]
    pub agents: String,
    /// Rounds to play.
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
    /// Record policies every N steps.
    #[arg(long, default_value_t = 10)]
    pub record_every: usize,
    /// Recorded samples checked for convergence.
    #[arg(long, default_value_t = 500)]
    pub window: usize,
    /// Largest policy spread over the window that still counts as converged.
    #[arg(long, default_value_t = 0.01)]
    pub tol: f64,
    /// Trailing steps averaged for the converged payoff.
    #[arg(long, default_value_t = 1000)]
    pub final_window: usize,
    /// CSV output path; the summary goes next to it as .json. Default: CSV to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct DynamicsArgs {
    /// Game name or game file (2x2).
    #[arg(long)]
    pub game: String,
    /// Attitude speed ratio alpha_w / alpha_pi.
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    /// Start as p1,p2,w1,w2. Default: policies drawn from --seed, attitudes --w0.
    #[arg(long)]
    pub start: Option<String>,
    /// Initial attitude of both players when --start is absent.
    #[arg(long, default_value_t = 0.85)]
    pub w0: f64,
    /// Integrator step.
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    /// Integrator steps.
    #[arg(long, default_value_t = 5000)]
    pub steps: usize,
    /// Write every N-th state.
    #[arg(long, default_value_t = 1)]
    pub every: usize,
    /// Integrate without clamping to the unit box.
    #[arg(long)]
    pub free: bool,
    /// CSV output path; the summary goes next to it as .json. Default: CSV to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct EquilibriaArgs {
    /// Game name or game file (2x2).
    #[arg(long)]
    pub game: String,
    /// Attitude speed ratio alpha_w / alpha_pi.
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    /// JSON output path. Default: stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Number of random ordinal games.
    #[arg(long, default_value_t = 100)]
    pub games: usize,
    /// Runs per game and algorithm.
    #[arg(long, default_value_t = 20)]
    pub runs: usize,
    /// Rounds per run.
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
    /// Comma-separated learner specs, each played in self-play.
    #[arg(long, default_value = "sapga(w0=0.85),cjal,wolfphc")]
    pub algos: String,
    /// Sample all ordinal games instead of conflict games only.
    #[arg(long)]
    pub all_games: bool,
    /// CSV output path; the summary goes next to it as .json. Default: CSV to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    /// fig_pd, fig_cg, fig_mixonly, table6, selfish_pd, selfish_cg,
    /// selfish_mixonly, pgg_all_sapga, pgg_2v1 or pgg_1v2.
    pub id: String,
    /// Parameter override `key=value`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Directory for the CSV, .dat and summary files.
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct GameInfoArgs {
    /// Game name or game file.
    #[arg(long)]
    pub game: String,
    /// Print the game as a TOML game file instead of the JSON description.
    #[arg(long)]
    pub toml: bool,
    #[command(flatten)]
    pub common: Common,
}

pub fn dispatch(cmd: Cmd, replay: Vec<String>) -> Result<()> {
    let common = match &cmd {
        Cmd::Simulate(a) => &a.common,
        Cmd::Dynamics(a) => &a.common,
        Cmd::Equilibria(a) => &a.common,
        Cmd::Bench(a) => &a.common,
        Cmd::Experiment(a) => &a.common,
        Cmd::GameInfo(a) => &a.common,
    };
    if let Some(jobs) = common.jobs {
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    match cmd {
        Cmd::Simulate(a) => simulate(a, replay),
        Cmd::Dynamics(a) => dynamics(a, replay),
        Cmd::Equilibria(a) => equilibria(a),
        Cmd::Bench(a) => bench(a, replay),
        Cmd::Experiment(a) => experiment(a, replay),
        Cmd::GameInfo(a) => game_info(a),
    }
}

/// Writes the table to `out` (plus a sibling summary JSON echoed to stdout),
/// or the table alone to stdout.
fn emit(out: Option<&Path>, summary: Value, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            let mut file = BufWriter::new(File::create(path)?);
            write(&mut file)?;
            file.flush()?;
            let text = serde_json::to_string_pretty(&summary)? + "\n";
            fs::write(path.with_extension("json"), &text)?;
            io::stdout().write_all(text.as_bytes())?;
        }
        None => {
            let mut stdout = BufWriter::new(io::stdout().lock());
            write(&mut stdout)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn print_json(out: Option<&Path>, value: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn simulate(a: SimulateArgs, replay: Vec<String>) -> Result<()> {
    let game = game_by_name(&a.game)?;
    let learners = LearnerSpec::parse_list(&a.agents)?;
    let config = RunConfig {
        game,
        learners,
        steps: a.steps,
        seed: a.common.seed,
        record_every: a.record_every,
        window: a.window,
        tol: a.tol,
        final_window: a.final_window,
    };
    config.validate()?;
    let result = run(&config)?;
    let mut summary = result.summary_json();
    summary["game"] = config.game.name().into();
    summary["agents"] = config.learners.iter().map(|l| l.to_string()).collect::<Vec<_>>().into();
    summary["seed"] = a.common.seed.into();
    summary["steps"] = a.steps.into();
    summary["replay"] = replay.into();
    emit(a.out.as_deref(), summary, |w| Ok(result.write_csv(w)?))
}

fn parse_start(text: &str) -> Result<[f64; 4]> {
    let values: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("--start expects p1,p2,w1,w2, got `{text}`")))?;
    <[f64; 4]>::try_from(values).map_err(|_| CliError::Usage(format!("--start expects four numbers, got `{text}`")))
}

fn dynamics(a: DynamicsArgs, mut replay: Vec<String>) -> Result<()> {
    let game = game_by_name(&a.game)?;
    let params = DynamicsParams::from_game(&game, a.eps)?;
    let start = match &a.start {
        Some(text) => parse_start(text)?,
        None => {
            let [p1, p2] = comparison_starts(1, a.common.seed)[0];
            let start = [p1, p2, a.w0, a.w0];
            replay.push("--start".into());
            replay.push(start.map(|v| v.to_string()).join(","));
            start
        }
    };
    if !a.free && start.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(CliError::Usage(format!("--start {start:?} lies outside the unit box")));
    }
    let traj = integrate(&params, DynamicsState::from_array(start), a.dt, a.steps, !a.free)?;
    let summary = json!({
        "game": game.name(),
        "eps": a.eps,
        "start": start,
        "end": traj.last().to_array(),
        "t_end": traj.times.last(),
        "projected": !a.free,
        "seed": a.common.seed,
        "replay": replay,
    });
    emit(a.out.as_deref(), summary, |w| Ok(traj.write_csv(w, a.every)?))
}

fn equilibria(a: EquilibriaArgs) -> Result<()> {
    let game = game_by_name(&a.game)?;
    let reports = if is_symmetric(&game) {
        Some(symmetric_equilibria(&game, a.eps)?)
    } else {
        match coordination_equilibria(&game, a.eps) {
            Ok(r) => Some(r),
            Err(e) if e.is_usage() && game.is_two_by_two() => None,
            Err(e) => return Err(e.into()),
        }
    };
    let value = match reports {
        Some(r) => serde_json::to_value(r)?,
        None => {
            // no closed-form analysis applies: report the numerical interior roots
            let params = DynamicsParams::from_game(&game, a.eps)?;
            let mut out = Vec::new();
            for point in find_interior_equilibria(&params) {
                let eig = eigenvalues_4x4(&linearize(&params, &point))?;
                out.push(json!({
                    "point": point,
                    "kind": "Interior",
                    "stable": eigen_stability(&eig),
                    "eigenvalues": eig.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                    "condition": "numerical root of the vector field",
                }));
            }
            Value::Array(out)
        }
    };
    print_json(a.out.as_deref(), &value)
}

fn bench(a: BenchArgs, replay: Vec<String>) -> Result<()> {
    let params = BenchmarkParams {
        n_games: a.games,
        runs: a.runs,
        steps: a.steps,
        algos: LearnerSpec::parse_list(&a.algos)?,
        seed: a.common.seed,
        conflict_only: !a.all_games,
    };
    let report = benchmark_table6(&params)?;
    let mut summary = serde_json::to_value(&report)?;
    summary["replay"] = replay.into();
    emit(a.out.as_deref(), summary, |w| {
        writeln!(w, "algo,usw_mean,usw_stderr,nsw_mean,nsw_stderr")?;
        for row in &report.rows {
            writeln!(
                w,
                "\"{}\",{},{},{},{}",
                row.algo, row.usw_mean, row.usw_stderr, row.nsw_mean, row.nsw_stderr
            )?;
        }
        Ok(())
    })
}

fn experiment(a: ExperimentArgs, replay: Vec<String>) -> Result<()> {
    let id = a.id.parse()?;
    let mut overrides = BTreeMap::new();
    for pair in &a.set {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got `{pair}`")))?;
        overrides.insert(k.trim().to_string(), v.trim().to_string());
    }
    let spec = ExperimentSpec { id, seed: a.common.seed, overrides, out_dir: a.out_dir };
    let output = run_experiment(&spec)?;
    let mut summary = output.summary;
    summary["replay"] = replay.into();
    summary["files"] = output.files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().into();
    let text = serde_json::to_string_pretty(&summary)? + "\n";
    if let Some(path) = output.files.iter().find(|p| p.to_string_lossy().ends_with("_summary.json")) {
        fs::write(path, &text)?;
    }
    io::stdout().write_all(text.as_bytes())?;
    Ok(())
}

fn game_info(a: GameInfoArgs) -> Result<()> {
    let game = game_by_name(&a.game)?;
    if a.toml {
        io::stdout().write_all(GameFile::from_game(&game).to_toml().as_bytes())?;
        return Ok(());
    }
    let n = game.n_players();
    let best = (0..game.n_joint())
        .map(|k| game.payoff_at(k).iter().sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    let optima: Vec<Vec<usize>> = (0..game.n_joint())
        .filter(|&k| game.payoff_at(k).iter().sum::<f64>() == best)
        .map(|k| game.joint_from_index(k))
        .collect();
    let mut info = json!({
        "name": game.name(),
        "players": n,
        "actions": game.actions(),
        "labels": game.labels(),
        "payoffs": (0..n).map(|i| game.player_payoffs(i)).collect::<Vec<_>>(),
        "symmetric": is_symmetric(&game),
        "pure_nash": pure_nash_equilibria(&game),
        "social_optima": optima,
        "social_optimum_value": best,
    });
    if game.is_two_by_two() {
        info["reduced"] = json!([reduced_coefficients(&game, 0)?, reduced_coefficients(&game, 1)?]);
        info["mixed_nash"] = match mixed_ne_2x2(&game)? {
            Some(p) => json!([p.strategy(0)[0], p.strategy(1)[0]]),
            None => Value::Null,
        };
        info["category"] = match classify_game(&game) {
            Ok(c) => serde_json::to_value(c)?,
            Err(e) => json!({ "error": e.to_string() }),
        };
    }
    print_json(None, &info)
}
