use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use psdblock::sweep::Suite;

use crate::report::Failure;

#[derive(Parser, Debug)]
#[command(name = "psdblock", version, about = "Decompositions, norm inequalities and positivity criteria for 2x2 block PSD matrices")]
pub struct Cli {
    pub command: Command,
    /// Block matrix JSON: {"n", "m", "A", "X", "B"}.
    #[arg(long, value_name = "PATH")]
    pub block: Option<PathBuf>,
    /// Matrix JSON: {"rows", "cols", "entries": [[re, im], ...]}.
    #[arg(long, value_name = "PATH")]
    pub matrix: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub example: Option<Example>,
    #[arg(long, value_name = "REAL", allow_negative_numbers = true)]
    pub x: Option<f64>,
    #[arg(long, value_name = "REAL", allow_negative_numbers = true)]
    pub y: Option<f64>,
    #[arg(long, value_name = "NAME")]
    pub suite: Option<String>,
    #[arg(long, value_name = "N")]
    pub trials: Option<usize>,
    /// Block sizes, `LO..HI` (inclusive) or a single size.
    #[arg(long, value_name = "RANGE")]
    pub dims: Option<String>,
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    #[arg(long = "l-max", value_name = "N")]
    pub l_max: Option<u64>,
    #[arg(long = "t-max", value_name = "N")]
    pub t_max: Option<u64>,
    #[arg(long, value_name = "REAL")]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Check,
    Decompose,
    Schur,
    Det,
    Amplify,
    Scale,
    Plp,
    Reproduce,
    Sweep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Example {
    #[value(name = "Mx")]
    Mx,
    #[value(name = "C")]
    C,
    #[value(name = "Ny")]
    Ny,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Input {
    Block(PathBuf),
    Matrix(PathBuf),
    Example(Example),
    None,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Params {
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub dims: Option<RangeInclusive<usize>>,
    pub l_max: Option<u64>,
    pub t_max: Option<u64>,
    pub tol: Option<f64>,
    pub suite: Option<Suite>,
}

/// A fully validated invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input: Input,
    pub params: Params,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Decompose => "decompose",
            Command::Schur => "schur",
            Command::Det => "det",
            Command::Amplify => "amplify",
            Command::Scale => "scale",
            Command::Plp => "plp",
            Command::Reproduce => "reproduce",
            Command::Sweep => "sweep",
        }
    }

    fn accepted_inputs(self) -> &'static [&'static str] {
        match self {
            Command::Check | Command::Decompose | Command::Schur => &["--block", "--example"],
            Command::Amplify | Command::Scale | Command::Plp => &["--block"],
            Command::Det => &["--matrix"],
            Command::Reproduce => &["--example"],
            Command::Sweep => &[],
        }
    }

    fn accepted_params(self) -> &'static [&'static str] {
        match self {
            Command::Check => &["--tol", "--x", "--y"],
            Command::Decompose | Command::Schur | Command::Reproduce => &["--x", "--y"],
            Command::Det => &["--tol"],
            Command::Amplify => &["--l-max"],
            Command::Scale => &["--t-max"],
            Command::Plp => &[],
            Command::Sweep => &["--suite", "--trials", "--dims", "--seed", "--tol"],
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Parses `LO..HI`, `LO..=HI` or `N`; both ends inclusive.
pub fn parse_dims(s: &str) -> Result<RangeInclusive<usize>, Failure> {
    let bad = || usage(format!("--dims: expected LO..HI or N, got `{s}`"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let range = match s.split_once("..") {
        Some((lo, hi)) => num(lo)?..=num(hi.strip_prefix('=').unwrap_or(hi))?,
        None => {
            let n = num(s)?;
            n..=n
        }
    };
    Ok(range)
}

impl TryFrom<Cli> for RunConfig {
    type Error = Failure;

    fn try_from(cli: Cli) -> Result<Self, Failure> {
        let command = cli.command;
        let given_inputs: Vec<&str> = [
            ("--block", cli.block.is_some()),
            ("--matrix", cli.matrix.is_some()),
            ("--example", cli.example.is_some()),
        ]
        .into_iter()
        .filter_map(|(name, given)| given.then_some(name))
        .collect();
        let allowed = command.accepted_inputs();
        if let Some(extra) = given_inputs.iter().find(|f| !allowed.contains(f)) {
            return Err(usage(format!("{extra} is not accepted by `{}`", command.name())));
        }
        if given_inputs.len() > 1 {
            return Err(usage(format!("`{}` takes only one of {}", command.name(), given_inputs.join(", "))));
        }
        if given_inputs.is_empty() && !allowed.is_empty() {
            return Err(usage(format!("`{}` requires {}", command.name(), allowed.join(" or "))));
        }

        let given_params = [
            ("--x", cli.x.is_some()),
            ("--y", cli.y.is_some()),
            ("--suite", cli.suite.is_some()),
            ("--trials", cli.trials.is_some()),
            ("--dims", cli.dims.is_some()),
            ("--seed", cli.seed.is_some()),
            ("--l-max", cli.l_max.is_some()),
            ("--t-max", cli.t_max.is_some()),
            ("--tol", cli.tol.is_some()),
        ];
        for (name, given) in given_params {
            if given && !command.accepted_params().contains(&name) {
                return Err(usage(format!("{name} is not accepted by `{}`", command.name())));
            }
        }
        match (cli.x.is_some(), cli.y.is_some(), cli.example) {
            (true, _, Some(e)) if e != Example::Mx => return Err(usage("--x applies only to --example Mx")),
            (_, true, Some(e)) if e != Example::Ny => return Err(usage("--y applies only to --example Ny")),
            (true, _, None) | (_, true, None) => return Err(usage("--x and --y require --example")),
            _ => {}
        }
        for (name, v) in [("--x", cli.x), ("--y", cli.y)] {
            if v.is_some_and(|v| !v.is_finite()) {
                return Err(usage(format!("{name} must be finite")));
            }
        }
        if let Some(t) = cli.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(usage(format!("--tol must be positive, got {t}")));
            }
        }
        if command == Command::Sweep && cli.suite.is_none() {
            return Err(usage("`sweep` requires --suite"));
        }
        if cli.l_max == Some(0) || cli.t_max == Some(0) {
            return Err(usage("--l-max and --t-max must be at least 1"));
        }

        let suite = cli.suite.as_deref().map(str::parse::<Suite>).transpose().map_err(Failure::Library)?;
        let dims = cli.dims.as_deref().map(parse_dims).transpose()?;
        let input = match (cli.block, cli.matrix, cli.example) {
            (Some(p), _, _) => Input::Block(p),
            (_, Some(p), _) => Input::Matrix(p),
            (_, _, Some(e)) => Input::Example(e),
            _ => Input::None,
        };
        Ok(RunConfig {
            command,
            input,
            params: Params {
                x: cli.x,
                y: cli.y,
                seed: cli.seed,
                trials: cli.trials,
                dims,
                l_max: cli.l_max,
                t_max: cli.t_max,
                tol: cli.tol,
                suite,
            },
            format: cli.format,
            out: cli.out,
        })
    }
}
