//! Scripted studies: simulation versus ODE, the welfare benchmark, SA-PGA
//! against a selfish opponent, and the public goods lineups.
//!
//! Every experiment writes a trajectories (or table) CSV, a summary JSON and a
//! whitespace-separated `.dat` file that gnuplot reads directly.

mod comparison;
mod runs;
mod table6;

pub use comparison::{
    alpha_sweep, comparison_starts, trajectory_comparison, ComparisonParams, ComparisonReport,
    ExplorationParams, PathPoint, StartComparison,
};
pub use runs::{against_selfish, pgg_experiment, PggParams, SelfishParams};
pub use table6::{
    benchmark_games, benchmark_on_games, benchmark_table6, BenchmarkParams, BenchmarkReport, BenchmarkRow,
};

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::games::{coordination_game, mixonly_game, prisoners_dilemma, NormalFormGame};
use crate::learners::LearnerSpec;
use crate::simulate::RunResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentId {
    FigPd,
    FigCg,
    FigMixonly,
    Table6,
    SelfishPd,
    SelfishCg,
    SelfishMixonly,
    PggAllSapga,
    Pgg2v1,
    Pgg1v2,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 10] = [
        Self::FigPd,
        Self::FigCg,
        Self::FigMixonly,
        Self::Table6,
        Self::SelfishPd,
        Self::SelfishCg,
        Self::SelfishMixonly,
        Self::PggAllSapga,
        Self::Pgg2v1,
        Self::Pgg1v2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::FigPd => "fig_pd",
            Self::FigCg => "fig_cg",
            Self::FigMixonly => "fig_mixonly",
            Self::Table6 => "table6",
            Self::SelfishPd => "selfish_pd",
            Self::SelfishCg => "selfish_cg",
            Self::SelfishMixonly => "selfish_mixonly",
            Self::PggAllSapga => "pgg_all_sapga",
            Self::Pgg2v1 => "pgg_2v1",
            Self::Pgg1v2 => "pgg_1v2",
        }
    }

    fn game(self) -> Option<NormalFormGame> {
        match self {
            Self::FigPd | Self::SelfishPd => Some(prisoners_dilemma()),
            Self::FigCg | Self::SelfishCg => Some(coordination_game()),
            Self::FigMixonly | Self::SelfishMixonly => Some(mixonly_game()),
            _ => None,
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|id| id.as_str() == s).ok_or_else(|| {
            let known: Vec<&str> = Self::ALL.iter().map(|id| id.as_str()).collect();
            Error::Parse(format!("unknown experiment `{s}` (known: {})", known.join(", ")))
        })
    }
}

/// An experiment to run, with `key=value` parameter overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub id: ExperimentId,
    pub seed: u64,
    pub overrides: BTreeMap<String, String>,
    pub out_dir: PathBuf,
}

/// What an experiment produced.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub id: ExperimentId,
    pub summary: serde_json::Value,
    pub files: Vec<PathBuf>,
}

/// Typed access to the override map; every key must be consumed.
struct Overrides<'a> {
    map: &'a BTreeMap<String, String>,
    used: Vec<&'static str>,
}

impl<'a> Overrides<'a> {
    fn get<T: FromStr>(&mut self, key: &'static str, default: T) -> Result<T> {
        self.used.push(key);
        match self.map.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Parse(format!("bad value `{v}` for override `{key}`"))),
        }
    }

    fn finish(self) -> Result<()> {
        match self.map.keys().find(|k| !self.used.contains(&k.as_str())) {
            Some(k) => Err(Error::Parse(format!("unknown override `{k}` for this experiment"))),
            None => Ok(()),
        }
    }
}

/// Runs an experiment and writes its files into `spec.out_dir`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let mut ov = Overrides { map: &spec.overrides, used: Vec::new() };
    let id = spec.id;
    let stem = id.as_str();
    let (summary, files) = match id {
        ExperimentId::FigPd | ExperimentId::FigCg | ExperimentId::FigMixonly => {
            let d = ComparisonParams::default();
            let alpha = ov.get("alpha", d.alpha_pi)?;
            let params = ComparisonParams {
                n_starts: ov.get("n_starts", d.n_starts)?,
                w0: ov.get("w0", d.w0)?,
                alpha_pi: alpha,
                alpha_w: ov.get("alpha_w", alpha)?,
                beta: ov.get("beta", d.beta)?,
                steps: ov.get("steps", d.steps)?,
                exploration: ExplorationParams {
                    eps0: ov.get("eps0", d.exploration.eps0)?,
                    tau: ov.get("tau", d.exploration.tau)?,
                },
                dt: ov.get("dt", d.dt)?,
                seed: spec.seed,
                ..d
            };
            ov.finish()?;
            let game = id.game().expect("figure experiments have a game");
            let report = trajectory_comparison(&game, &params)?;
            let files = write_comparison(&report, &spec.out_dir, stem)?;
            (serde_json::to_value(&report)?, files)
        }
        ExperimentId::Table6 => {
            let d = BenchmarkParams::default();
            let algos = match spec.overrides.get("algos") {
                Some(list) => LearnerSpec::parse_list(&list.replace(';', ","))?,
                None => d.algos.clone(),
            };
            ov.used.push("algos");
            let params = BenchmarkParams {
                n_games: ov.get("games", d.n_games)?,
                runs: ov.get("runs", d.runs)?,
                steps: ov.get("steps", d.steps)?,
                conflict_only: ov.get("conflict_only", d.conflict_only)?,
                algos,
                seed: spec.seed,
            };
            ov.finish()?;
            let report = benchmark_table6(&params)?;
            let files = write_benchmark(&report, &spec.out_dir, stem)?;
            (serde_json::to_value(&report)?, files)
        }
        ExperimentId::SelfishPd | ExperimentId::SelfishCg | ExperimentId::SelfishMixonly => {
            let d = SelfishParams::default();
            let params = SelfishParams {
                w0: ov.get("w0", d.w0)?,
                p_sapga0: ov.get("p_sapga0", d.p_sapga0)?,
                p_selfish0: ov.get("p_selfish0", d.p_selfish0)?,
                steps: ov.get("steps", d.steps)?,
                seed: spec.seed,
            };
            ov.finish()?;
            let game = id.game().expect("selfish experiments have a game");
            let result = against_selfish(&game, &params)?;
            let files = write_run(&result, &spec.out_dir, stem)?;
            let mut summary = result.summary_json();
            summary["params"] = serde_json::to_value(&params)?;
            summary["game"] = game.name().into();
            (summary, files)
        }
        ExperimentId::PggAllSapga | ExperimentId::Pgg2v1 | ExperimentId::Pgg1v2 => {
            let (n_sapga, n_selfish) = match id {
                ExperimentId::PggAllSapga => (3, 0),
                ExperimentId::Pgg2v1 => (2, 1),
                _ => (1, 2),
            };
            let d = PggParams::default();
            let params = PggParams {
                r: ov.get("r", d.r)?,
                cost: ov.get("c", d.cost)?,
                p0: ov.get("p0", d.p0)?,
                w0: ov.get("w0", d.w0)?,
                steps: ov.get("steps", d.steps)?,
                seed: spec.seed,
            };
            ov.finish()?;
            let result = pgg_experiment(n_sapga, n_selfish, &params)?;
            let files = write_run(&result, &spec.out_dir, stem)?;
            let mut summary = result.summary_json();
            summary["params"] = serde_json::to_value(&params)?;
            summary["lineup"] = serde_json::json!({ "sapga": n_sapga, "selfish": n_selfish });
            (summary, files)
        }
    };
    let mut files = files;
    let summary_path = spec.out_dir.join(format!("{stem}_summary.json"));
    let mut summary = summary;
    summary["experiment"] = stem.into();
    summary["seed"] = spec.seed.into();
    summary["overrides"] = serde_json::to_value(&spec.overrides)?;
    fs::write(&summary_path, serde_json::to_string_pretty(&summary)? + "\n")?;
    files.push(summary_path);
    Ok(ExperimentOutput { id, summary, files })
}

fn create(dir: &Path, name: String) -> Result<(PathBuf, BufWriter<File>)> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let file = BufWriter::new(File::create(&path)?);
    Ok((path, file))
}

/// Trajectory CSV and gnuplot blocks (one per start and source) of a comparison.
pub fn write_comparison(report: &ComparisonReport, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
    let (csv_path, mut csv) = create(dir, format!("{stem}_trajectories.csv"))?;
    writeln!(csv, "start,source,t,p1,p2,w1,w2")?;
    let (dat_path, mut dat) = create(dir, format!("{stem}.dat"))?;
    writeln!(dat, "# t p1 p2 w1 w2; blocks alternate simulation and ODE per start")?;
    for (k, s) in report.starts.iter().enumerate() {
        for (source, path) in [("sim", &s.sim_path), ("ode", &s.ode_path)] {
            writeln!(dat, "# start {k} {source}")?;
            for pt in path {
                writeln!(csv, "{k},{source},{},{},{},{},{}", pt.t, pt.p1, pt.p2, pt.w1, pt.w2)?;
                writeln!(dat, "{} {} {} {} {}", pt.t, pt.p1, pt.p2, pt.w1, pt.w2)?;
            }
            writeln!(dat, "\n")?;
        }
    }
    csv.flush()?;
    dat.flush()?;
    Ok(vec![csv_path, dat_path])
}

pub fn write_benchmark(report: &BenchmarkReport, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
    let (csv_path, mut csv) = create(dir, format!("{stem}.csv"))?;
    let (dat_path, mut dat) = create(dir, format!("{stem}.dat"))?;
    writeln!(csv, "algo,usw_mean,usw_stderr,nsw_mean,nsw_stderr")?;
    writeln!(dat, "# index algo usw_mean usw_stderr nsw_mean nsw_stderr")?;
    for (k, row) in report.rows.iter().enumerate() {
        writeln!(
            csv,
            "\"{}\",{},{},{},{}",
            row.algo, row.usw_mean, row.usw_stderr, row.nsw_mean, row.nsw_stderr
        )?;
        let name = row.algo.split('(').next().unwrap_or(&row.algo);
        writeln!(
            dat,
            "{k} {name} {} {} {} {}",
            row.usw_mean, row.usw_stderr, row.nsw_mean, row.nsw_stderr
        )?;
    }
    csv.flush()?;
    dat.flush()?;
    Ok(vec![csv_path, dat_path])
}

/// Run CSV plus a gnuplot file with one column per agent policy and attitude.
pub fn write_run(result: &RunResult, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
    let (csv_path, csv) = create(dir, format!("{stem}_trajectories.csv"))?;
    let mut csv = csv;
    result.write_csv(&mut csv)?;
    csv.flush()?;
    let (dat_path, mut dat) = create(dir, format!("{stem}.dat"))?;
    let n = result.final_policies.len();
    let social: Vec<usize> = (0..n).filter(|&i| result.attitudes[0][i].is_some()).collect();
    let mut header = String::from("# step");
    for i in 0..n {
        header.push_str(&format!(" p{i}"));
    }
    for i in &social {
        header.push_str(&format!(" w{i}"));
    }
    writeln!(dat, "{header}")?;
    for (k, step) in result.recorded_steps.iter().enumerate() {
        let mut row = step.to_string();
        for i in 0..n {
            row.push_str(&format!(" {}", result.policies[k][i][0]));
        }
        for &i in &social {
            row.push_str(&format!(" {}", result.attitudes[k][i].unwrap_or(f64::NAN)));
        }
        writeln!(dat, "{row}")?;
    }
    dat.flush()?;
    Ok(vec![csv_path, dat_path])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in ExperimentId::ALL {
            assert_eq!(id.as_str().parse::<ExperimentId>().unwrap(), id);
        }
        assert!("fig_rps".parse::<ExperimentId>().is_err());
    }

    #[test]
    fn selfish_experiment_writes_files_reproducibly() {
        let dir = tempfile::tempdir().unwrap();
        let mut overrides = BTreeMap::new();
        overrides.insert("steps".to_string(), "300".to_string());
        let spec = ExperimentSpec {
            id: ExperimentId::SelfishPd,
            seed: 4,
            overrides,
            out_dir: dir.path().to_path_buf(),
        };
        let out = run_experiment(&spec).unwrap();
        assert_eq!(out.files.len(), 3);
        let first: Vec<Vec<u8>> = out.files.iter().map(|p| fs::read(p).unwrap()).collect();
        let again = run_experiment(&spec).unwrap();
        let second: Vec<Vec<u8>> = again.files.iter().map(|p| fs::read(p).unwrap()).collect();
        assert_eq!(first, second);
        let dat = String::from_utf8(fs::read(dir.path().join("selfish_pd.dat")).unwrap()).unwrap();
        assert!(dat.starts_with("# step p0 p1 w0\n"));
    }

    #[test]
    fn unknown_override_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let mut overrides = BTreeMap::new();
        overrides.insert("gamma".to_string(), "1".to_string());
        let spec = ExperimentSpec {
            id: ExperimentId::Pgg1v2,
            seed: 0,
            overrides,
            out_dir: dir.path().to_path_buf(),
        };
        let err = run_experiment(&spec).unwrap_err();
        assert!(err.is_usage() && err.to_string().contains("gamma"));
    }
}
