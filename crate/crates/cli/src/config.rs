//! Command-line flags, JSON config files and the parsing of grid and
//! ensemble specifications.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use wiretap_core::channels::ChannelModel;
use wiretap_core::codes::DegreeDistribution;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "wiretap", version, about = "Experiment driver for nested coset codes on type II wiretap channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum CommandKind {
    Capacity,
    Threshold,
    Simulate,
    Region,
    CompareBsc,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Capacity => "capacity",
            CommandKind::Threshold => "threshold",
            CommandKind::Simulate => "simulate",
            CommandKind::Region => "region",
            CommandKind::CompareBsc => "compare-bsc",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Capacities, secrecy capacities and dual-construction rates over a grid
    Capacity(CommandArgs),
    /// Erasure-channel DE thresholds or empirical BP thresholds on BI-AWGN
    Threshold(CommandArgs),
    /// Equivocation estimates for a nested code pair
    Simulate(CommandArgs),
    /// Vertices of the achievable and capacity rate-equivocation regions
    Region(CommandArgs),
    /// Dual-construction secrecy rate against h(q) and -log2(1-q) on the BSC
    CompareBsc(CommandArgs),
}

impl Command {
    pub fn split(self) -> (CommandKind, CommandArgs) {
        match self {
            Command::Capacity(a) => (CommandKind::Capacity, a),
            Command::Threshold(a) => (CommandKind::Threshold, a),
            Command::Simulate(a) => (CommandKind::Simulate, a),
            Command::Region(a) => (CommandKind::Region, a),
            Command::CompareBsc(a) => (CommandKind::CompareBsc, a),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommandArgs {
    /// JSON file with the same keys as the long flags; flags take precedence
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub settings: ExperimentConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Bec,
    Bsc,
    Awgn,
}

impl ChannelKind {
    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::Bec => "bec",
            ChannelKind::Bsc => "bsc",
            ChannelKind::Awgn => "awgn",
        }
    }

    pub fn model(self, param: f64) -> ChannelModel {
        match self {
            ChannelKind::Bec => ChannelModel::Bec { erasure: param },
            ChannelKind::Bsc => ChannelModel::Bsc { crossover: param },
            ChannelKind::Awgn => ChannelModel::BiAwgn { snr: param },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    Approach1,
    Approach2Awgn,
    Approach2Bsc,
    BecExact,
}

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Estimator::Approach1 => "approach1",
            Estimator::Approach2Awgn => "approach2-awgn",
            Estimator::Approach2Bsc => "approach2-bsc",
            Estimator::BecExact => "bec-exact",
        }
    }

    pub fn channel(self) -> ChannelKind {
        match self {
            Estimator::Approach1 | Estimator::Approach2Awgn => ChannelKind::Awgn,
            Estimator::Approach2Bsc => ChannelKind::Bsc,
            Estimator::BecExact => ChannelKind::Bec,
        }
    }

    /// The good-code construction nests on the sampled code itself; the
    /// erasure-based constructions nest on its dual.
    pub fn default_coarse(self) -> CoarseChoice {
        match self {
            Estimator::Approach1 => CoarseChoice::Code,
            _ => CoarseChoice::Dual,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoarseChoice {
    Code,
    Dual,
}

/// Every setting an experiment can take. All fields are optional so that a
/// config file and the command line can be layered.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Subcommand name; only meaningful inside a config file
    #[arg(skip)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,

    /// Eavesdropper channel
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<ChannelKind>,
    /// Single channel parameter (erasure probability, crossover or SNR)
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<f64>,
    /// Parameter grid: "start:stop:step" or a comma-separated list
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    /// Parity-check matrix in alist format
    #[arg(long, value_name = "PATH")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<PathBuf>,
    /// "dv,dc" or "lambda=2:0.3,3:0.7;rho=6:1" (edge-perspective fractions)
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<String>,
    /// Whether the coarse code is the sampled code or its dual
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coarse: Option<CoarseChoice>,
    /// Block length for ensemble sampling
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimator: Option<Estimator>,
    /// Erasure threshold taken as given (e.g. a typical-pair value)
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_star: Option<f64>,
    /// SNR threshold taken as given
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_star: Option<f64>,
    /// Rate of the good coarse code (region)
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coarse_rate: Option<f64>,
    /// Perfect-secrecy rate of the dual construction (region); defaults to 2Q(sqrt(2λ))
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_rate: Option<f64>,
    /// Word error rate that defines an empirical threshold
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_wer: Option<f64>,
    /// Residual erasure probability counted as decoded in density evolution
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// BP iteration limit
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    /// CSV output path (stdout when absent)
    #[arg(long, value_name = "PATH")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// JSON sidecar output path
    #[arg(long, value_name = "PATH")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($field:ident),*) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field; } )*
    };
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    /// Values set in `top` replace those in `self`.
    pub fn overlay(mut self, top: ExperimentConfig) -> Self {
        overlay!(self, top; command, channel, param, grid, code, ensemble, coarse, n, trials, seed, estimator,
            delta_star, lambda_star, coarse_rate, dual_rate, target_wer, tol, max_iters, out, json);
        self
    }

    /// Loads the optional config file under the command-line settings.
    pub fn resolve(kind: CommandKind, args: CommandArgs) -> Result<Self, CliError> {
        let mut cfg = match &args.config {
            Some(path) => Self::from_json_file(path)?.overlay(args.settings),
            None => args.settings,
        };
        match cfg.command.as_deref() {
            Some(name) if name != kind.name() => {
                return Err(CliError::Usage(format!(
                    "config file is for `{name}` but `{}` was requested",
                    kind.name()
                )))
            }
            _ => cfg.command = Some(kind.name().to_string()),
        }
        Ok(cfg)
    }

    /// The settings that define the experiment, without output destinations.
    pub fn identity(&self) -> ExperimentConfig {
        ExperimentConfig {
            out: None,
            json: None,
            ..self.clone()
        }
    }

    pub fn require_channel(&self) -> Result<ChannelKind, CliError> {
        self.channel.ok_or_else(|| CliError::Usage("--channel is required".into()))
    }

    pub fn require_seed(&self) -> Result<u64, CliError> {
        self.seed
            .ok_or_else(|| CliError::Usage("--seed is required whenever randomness is used".into()))
    }

    pub fn require_trials(&self) -> Result<u64, CliError> {
        match self.trials {
            Some(0) => Err(CliError::Usage("--trials must be positive".into())),
            Some(t) => Ok(t),
            None => Err(CliError::Usage("--trials is required".into())),
        }
    }

    /// Channel parameters from `--param` or `--grid`.
    pub fn parameters(&self) -> Result<Vec<f64>, CliError> {
        match (self.param, &self.grid) {
            (Some(_), Some(_)) => Err(CliError::Usage("give either --param or --grid, not both".into())),
            (Some(p), None) => Ok(vec![p]),
            (None, Some(g)) => parse_grid(g),
            (None, None) => Err(CliError::Usage("--param or --grid is required".into())),
        }
    }
}

fn number(s: &str) -> Result<f64, CliError> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{s:?} is not a number")))?;
    if !x.is_finite() {
        return Err(CliError::Usage(format!("{s:?} is not finite")));
    }
    Ok(x)
}

/// Rounds away representation noise such as `0.30000000000000004`.
fn tidy(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// `"start:stop:step"` (inclusive of `stop`) or `"a,b,c"`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let values = match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
            if step <= 0.0 || stop < start {
                return Err(CliError::Usage(format!(
                    "grid {spec:?} needs step > 0 and stop >= start"
                )));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            if count > 1_000_000 {
                return Err(CliError::Usage(format!("grid {spec:?} has too many points")));
            }
            (0..count).map(|i| tidy(start + step * i as f64)).collect()
        }
        [list] => list.split(',').map(number).collect::<Result<Vec<_>, _>>()?,
        _ => return Err(CliError::Usage(format!("malformed grid {spec:?}"))),
    };
    if values.is_empty() {
        return Err(CliError::Usage("grid is empty".into()));
    }
    Ok(values)
}

#[derive(Debug, Clone, PartialEq)]
pub enum EnsembleSpec {
    Regular { dv: usize, dc: usize },
    Irregular(DegreeDistribution),
}

impl EnsembleSpec {
    pub fn degree_distribution(&self) -> Result<DegreeDistribution, CliError> {
        match self {
            EnsembleSpec::Regular { dv, dc } => Ok(DegreeDistribution::regular(*dv, *dc)?),
            EnsembleSpec::Irregular(dd) => Ok(dd.clone()),
        }
    }
}

fn degree_terms(s: &str) -> Result<Vec<(usize, f64)>, CliError> {
    s.split(',')
        .map(|term| {
            let (d, c) = term
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("degree term {term:?} is not degree:fraction")))?;
            let d = d
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("degree {d:?} is not an integer")))?;
            Ok((d, number(c)?))
        })
        .collect()
}

pub fn parse_ensemble(spec: &str) -> Result<EnsembleSpec, CliError> {
    if let Some((l, r)) = spec.split_once(';') {
        let lambda = l
            .trim()
            .strip_prefix("lambda=")
            .ok_or_else(|| CliError::Usage(format!("ensemble {spec:?} must start with lambda=")))?;
        let rho = r
            .trim()
            .strip_prefix("rho=")
            .ok_or_else(|| CliError::Usage(format!("ensemble {spec:?} needs rho= after ';'")))?;
        let dd = DegreeDistribution::new(degree_terms(lambda)?, degree_terms(rho)?)?;
        return Ok(EnsembleSpec::Irregular(dd));
    }
    let (dv, dc) = spec
        .split_once(',')
        .ok_or_else(|| CliError::Usage(format!("ensemble {spec:?} is neither dv,dc nor lambda=...;rho=...")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("degree {s:?} is not an integer")))
    };
    Ok(EnsembleSpec::Regular {
        dv: parse(dv)?,
        dc: parse(dc)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0.1:0.5:0.1").unwrap(), vec![0.1, 0.2, 0.3, 0.4, 0.5]);
        assert_eq!(parse_grid("0.302").unwrap(), vec![0.302]);
        assert_eq!(parse_grid("1,2.5,3").unwrap(), vec![1.0, 2.5, 3.0]);
        assert_eq!(parse_grid("0:0:1").unwrap(), vec![0.0]);
        for bad in ["", "a", "0.1:0.5", "0.5:0.1:0.1", "0:1:0", "0:1:-1", "1,,2", "inf", "0:1:1:1"] {
            assert!(matches!(parse_grid(bad), Err(CliError::Usage(_))), "{bad:?}");
        }
    }

    #[test]
    fn ensembles() {
        assert_eq!(parse_ensemble("3,6").unwrap(), EnsembleSpec::Regular { dv: 3, dc: 6 });
        let EnsembleSpec::Irregular(dd) = parse_ensemble("lambda=2:0.5,3:0.5;rho=6:1").unwrap() else {
            panic!("expected irregular");
        };
        assert_eq!(dd.lambda(), &[(2, 0.5), (3, 0.5)]);
        assert!(parse_ensemble("3").is_err());
        assert!(parse_ensemble("lambda=2:0.5;rho=6:1").is_err());
        assert!(parse_ensemble("x,6").is_err());
        assert!(parse_ensemble("rho=6:1;lambda=2:1").is_err());
    }

    #[test]
    fn overlay_prefers_top() {
        let base = ExperimentConfig {
            seed: Some(1),
            trials: Some(10),
            ..Default::default()
        };
        let top = ExperimentConfig {
            seed: Some(2),
            ..Default::default()
        };
        let merged = base.overlay(top);
        assert_eq!(merged.seed, Some(2));
        assert_eq!(merged.trials, Some(10));
    }

    #[test]
    fn config_json_uses_flag_names() {
        let cfg: ExperimentConfig =
            serde_json::from_str(r#"{"channel":"awgn","delta-star":0.665,"ensemble":"4,6","estimator":"approach2-awgn"}"#)
                .unwrap();
        assert_eq!(cfg.channel, Some(ChannelKind::Awgn));
        assert_eq!(cfg.delta_star, Some(0.665));
        assert_eq!(cfg.estimator, Some(Estimator::Approach2Awgn));
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"sed":1}"#).is_err());
    }
}
