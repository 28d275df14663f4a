//! Command-line front end. The binary parses arguments and calls [`run`];
//! everything else lives here so it can be driven from tests.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 parse/input error,
//! 3 constraint violation, 4 solver failure, 5 simulation step cap.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::axioms::{check_all, check_classical_shapley, check_efficiency, check_reflection};
use crate::coalition::Coalition;
use crate::components::{decompose, BargainingProfile, Decomposition};
use crate::error::Error;
use crate::game::Game;
use crate::io::{self, fmt_sig, DefectRow, Document, FormatError, OutputFormat};
use crate::markov::{estimate_all, expected_contributions, ChainConfig, DEFAULT_MAX_STEPS};
use crate::shapley::shapley_direct;
use crate::solver::SolverConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CONSTRAINT: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;
pub const EXIT_STEP_CAP: i32 = 5;

/// Largest player count for which `simulate` prints exact references.
const REFERENCE_MAX_PLAYERS: usize = 10;
/// Largest player count for which `verify` runs the path-integral oracle.
const ORACLE_MAX_PLAYERS: usize = 8;

#[derive(Debug, Parser)]
#[command(
    name = "hodge-shapley",
    version,
    about = "Shapley values, Hodge component games and path-integral checks for cooperative games"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shapley value of every player.
    Shapley {
        #[command(flatten)]
        game: GameSource,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Component games from the least-squares solve.
    Decompose {
        #[command(flatten)]
        game: GameSource,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Exact component games of the pure bargaining game.
    Bargaining {
        #[arg(long)]
        players: usize,
        /// Print exact rationals instead of decimals.
        #[arg(long)]
        exact: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Monte Carlo estimate of every player's expected path contribution.
    Simulate {
        #[command(flatten)]
        game: GameSource,
        /// Target coalition, e.g. "{1,3}".
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Exact expected path contributions by first-step analysis.
    Exact {
        #[command(flatten)]
        game: GameSource,
        #[arg(long)]
        target: String,
        /// Start coalition of the walk.
        #[arg(long, default_value = "{}")]
        start: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Checks the component-game axioms, the classical Shapley axioms and the
    /// path-integral identity; exits 1 if any defect exceeds the tolerance.
    Verify {
        #[command(flatten)]
        game: GameSource,
        /// Defect threshold for every check.
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long)]
        max_iterations: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Machine,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Table => OutputFormat::Table,
            Format::Csv => OutputFormat::Csv,
            Format::Machine => OutputFormat::Machine,
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct GameSource {
    /// Game file (or machine-format decomposition for `verify`).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Generated game: `bargaining N`, `additive W1 .. WN`, or `random N SEED`.
    #[arg(long, num_args = 1.., value_names = ["KIND", "ARGS"], allow_negative_numbers = true)]
    pub generate: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Relative residual tolerance of the least-squares solve.
    #[arg(long, default_value_t = 1e-12)]
    pub tolerance: f64,
    #[arg(long)]
    pub max_iterations: Option<usize>,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            tolerance: self.tolerance,
            max_iterations: self.max_iterations,
            ..SolverConfig::default()
        }
    }
}

/// A failed command: exit code plus message for stderr.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Component { source, .. } => match **source {
                Error::StepCapExceeded { .. } => EXIT_STEP_CAP,
                _ => EXIT_SOLVER,
            },
            Error::NonConvergence { .. }
            | Error::InconsistentRhs { .. }
            | Error::SolveFailure { .. }
            | Error::DenseTooLarge { .. }
            | Error::InvalidConfig(_) => EXIT_SOLVER,
            Error::StepCapExceeded { .. } => EXIT_STEP_CAP,
            _ => EXIT_CONSTRAINT,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Constraint(inner) => Failure::new(EXIT_CONSTRAINT, inner.to_string()),
            other => Failure::new(EXIT_PARSE, other.to_string()),
        }
    }
}

fn parse_coalition(text: &str, players: usize) -> Result<Coalition, Failure> {
    let c: Coalition = text
        .parse()
        .map_err(|e: crate::coalition::ParseCoalitionError| Failure::new(EXIT_PARSE, e.to_string()))?;
    if !c.fits(players) {
        return Err(Failure::new(
            EXIT_CONSTRAINT,
            format!("coalition {c} is not a subset of a {players}-player set"),
        ));
    }
    Ok(c)
}

fn parse_arg<T: std::str::FromStr>(what: &str, text: &str) -> Result<T, Failure> {
    text.parse()
        .map_err(|_| Failure::new(EXIT_PARSE, format!("invalid {what}: {text:?}")))
}

fn generate(args: &[String]) -> Result<Game, Failure> {
    let (kind, rest) = args
        .split_first()
        .ok_or_else(|| Failure::new(EXIT_PARSE, "--generate needs a kind"))?;
    match (kind.as_str(), rest) {
        ("bargaining", [n]) => Ok(Game::pure_bargaining(parse_arg("player count", n)?)?),
        ("additive", weights) if !weights.is_empty() => {
            let w = weights
                .iter()
                .map(|x| parse_arg::<f64>("weight", x))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Game::additive(&w)?)
        }
        ("random", [n, seed]) => {
            let mut rng = ChaCha8Rng::seed_from_u64(parse_arg("seed", seed)?);
            Ok(Game::random(parse_arg("player count", n)?, &mut rng)?)
        }
        _ => Err(Failure::new(
            EXIT_PARSE,
            format!("unknown generator {args:?}; expected `bargaining N`, `additive W1 .. WN` or `random N SEED`"),
        )),
    }
}

fn load(source: &GameSource) -> Result<Document, Failure> {
    if let Some(path) = &source.input {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
        return io::parse_document(&text).map_err(|e| {
            let mut f = Failure::from(e);
            f.message = format!("{}: {}", path.display(), f.message);
            f
        });
    }
    let args = source.generate.as_deref().unwrap_or_default();
    Ok(Document::Game(generate(args)?))
}

fn load_game(source: &GameSource) -> Result<Game, Failure> {
    Ok(match load(source)? {
        Document::Game(g) => g,
        Document::Decomposition(d) => d.source,
    })
}

/// Runs a parsed command, writing results to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(&cli.command) {
        Ok((code, text)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(command: &Command) -> Result<(i32, String), Failure> {
    match command {
        Command::Shapley { game, format } => {
            let g = load_game(game)?;
            Ok((EXIT_OK, io::render_shapley(&shapley_direct(&g), (*format).into())))
        }
        Command::Decompose { game, solver, format } => {
            let g = load_game(game)?;
            let config = solver.config();
            let d = decompose(&g, &config)?;
            let text = io::render_decomposition(&d, (*format).into());
            if d.max_residual() > config.tolerance {
                return Err(Failure::new(
                    EXIT_SOLVER,
                    format!("residual {:e} exceeds tolerance", d.max_residual()),
                ));
            }
            Ok((EXIT_OK, text))
        }
        Command::Bargaining { players, exact, format } => run_bargaining(*players, *exact, (*format).into()),
        Command::Simulate {
            game,
            target,
            samples,
            seed,
            max_steps,
            format,
        } => {
            let g = load_game(game)?;
            let target = parse_coalition(target, g.players())?;
            let config = ChainConfig::new(g.players(), *seed).with_max_steps(*max_steps);
            run_simulate(&g, target, &config, *samples, (*format).into())
        }
        Command::Exact {
            game,
            target,
            start,
            format,
        } => {
            let g = load_game(game)?;
            let target = parse_coalition(target, g.players())?;
            let start = parse_coalition(start, g.players())?;
            let h = expected_contributions(&g, target)?;
            let values: Vec<f64> = h.iter().map(|hi| hi[start.index()]).collect();
            Ok((EXIT_OK, render_player_values(&values, "expected", (*format).into())))
        }
        Command::Verify {
            game,
            tolerance,
            max_iterations,
        } => {
            let doc = load(game)?;
            let config = SolverConfig {
                max_iterations: *max_iterations,
                ..SolverConfig::default()
            };
            run_verify(&doc, &config, *tolerance)
        }
    }
}

fn render_player_values(values: &[f64], column: &str, format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Table => {
            let _ = writeln!(out, "{:>6}  {:>20}", "player", column);
            for (i, x) in values.iter().enumerate() {
                let _ = writeln!(out, "{:>6}  {:>20}", i + 1, fmt_sig(*x));
            }
        }
        OutputFormat::Csv => {
            let _ = writeln!(out, "player,{column}");
            for (i, x) in values.iter().enumerate() {
                let _ = writeln!(out, "{},{}", i + 1, fmt_sig(*x));
            }
        }
        OutputFormat::Machine => {
            let v: Vec<_> = values
                .iter()
                .enumerate()
                .map(|(i, x)| serde_json::json!({"player": i + 1, column: x}))
                .collect();
            out = serde_json::to_string_pretty(&v).expect("finite values") + "\n";
        }
    }
    out
}

fn run_bargaining(players: usize, exact: bool, format: OutputFormat) -> Result<(i32, String), Failure> {
    let profile = BargainingProfile::new(players)?;
    if !exact {
        return Ok((EXIT_OK, io::render_decomposition(&profile.to_decomposition(), format)));
    }
    let mut out = String::new();
    let sep = if format == OutputFormat::Csv { "," } else { "  " };
    let _ = write!(out, "coalition{sep}v");
    for i in 0..players {
        let _ = write!(out, "{sep}v{}", i + 1);
    }
    out.push('\n');
    let source = Game::pure_bargaining(players)?;
    for s in Coalition::all(players) {
        let label = if format == OutputFormat::Csv {
            format!("\"{s}\"")
        } else {
            s.to_string()
        };
        let _ = write!(out, "{label}{sep}{}", source.value(s));
        for i in 0..players {
            let _ = write!(out, "{sep}{}", profile.value(i, s));
        }
        out.push('\n');
    }
    Ok((EXIT_OK, out))
}

fn run_simulate(
    game: &Game,
    target: Coalition,
    config: &ChainConfig,
    samples: u64,
    format: OutputFormat,
) -> Result<(i32, String), Failure> {
    let estimates = estimate_all(game, target, config, samples)?;
    let n = game.players();
    let references = if n <= REFERENCE_MAX_PLAYERS {
        let h = expected_contributions(game, target)?;
        let d = decompose(game, &SolverConfig::default())?;
        Some((
            h.iter().map(|hi| hi[config.start.index()]).collect::<Vec<_>>(),
            d.components.iter().map(|c| c.value(target)).collect::<Vec<_>>(),
        ))
    } else {
        None
    };
    let mut out = String::new();
    match format {
        OutputFormat::Machine => {
            let rows: Vec<_> = estimates
                .iter()
                .map(|e| {
                    let mut row = serde_json::json!({
                        "player": e.player + 1,
                        "target": target.to_string(),
                        "samples": e.samples,
                        "mean": e.mean,
                        "std_error": e.std_error,
                    });
                    if let Some((exact, comp)) = &references {
                        row["exact"] = serde_json::json!(exact[e.player]);
                        row["component"] = serde_json::json!(comp[e.player]);
                    }
                    row
                })
                .collect();
            out = serde_json::to_string_pretty(&rows).expect("finite values") + "\n";
        }
        OutputFormat::Csv => {
            out.push_str("player,target,samples,mean,std_error,exact,component\n");
            for e in &estimates {
                let (x, c) = references
                    .as_ref()
                    .map(|(x, c)| (fmt_sig(x[e.player]), fmt_sig(c[e.player])))
                    .unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{},\"{target}\",{},{},{},{x},{c}",
                    e.player + 1,
                    e.samples,
                    fmt_sig(e.mean),
                    fmt_sig(e.std_error)
                );
            }
        }
        OutputFormat::Table => {
            let _ = writeln!(
                out,
                "target {target}, {samples} samples, seed {}, start {}",
                config.seed, config.start
            );
            let _ = writeln!(
                out,
                "{:>6}  {:>20}  {:>20}  {:>20}  {:>20}",
                "player", "mean", "std error", "exact", "component"
            );
            for e in &estimates {
                let (x, c) = references
                    .as_ref()
                    .map(|(x, c)| (fmt_sig(x[e.player]), fmt_sig(c[e.player])))
                    .unwrap_or_else(|| ("-".into(), "-".into()));
                let _ = writeln!(
                    out,
                    "{:>6}  {:>20}  {:>20}  {:>20}  {:>20}",
                    e.player + 1,
                    fmt_sig(e.mean),
                    fmt_sig(e.std_error),
                    x,
                    c
                );
            }
        }
    }
    Ok((EXIT_OK, out))
}

/// Largest gap between first-step expected contributions from `∅` and the
/// component games, over every player and coalition.
pub fn path_oracle_defect(d: &Decomposition) -> Result<DefectRow, Error> {
    let n = d.players();
    let mut row = DefectRow {
        name: "path-integral oracle".into(),
        max_defect: 0.0,
        witness: None,
    };
    for s in Coalition::all(n) {
        let h = expected_contributions(&d.source, s)?;
        for i in 0..n {
            let defect = (h[i][0] - d.components[i].value(s)).abs();
            if defect > row.max_defect {
                row.max_defect = defect;
                row.witness = Some(format!("i={}, S={s}", i + 1));
            }
        }
    }
    Ok(row)
}

fn run_verify(doc: &Document, config: &SolverConfig, tolerance: f64) -> Result<(i32, String), Failure> {
    let mut rows: Vec<DefectRow> = Vec::new();
    let game = match doc {
        Document::Game(g) => g,
        Document::Decomposition(supplied) => {
            let mut a1 = DefectRow::from(&check_efficiency(&supplied.source, supplied)?);
            a1.name = format!("{} (supplied)", a1.name);
            let mut a5 = DefectRow::from(&check_reflection(supplied));
            a5.name = format!("{} (supplied)", a5.name);
            rows.push(a1);
            rows.push(a5);
            &supplied.source
        }
    };
    for r in check_all(game, config)? {
        rows.push(DefectRow::from(&r));
    }
    for r in check_classical_shapley(game) {
        rows.push(DefectRow::from(&r));
    }
    if game.players() <= ORACLE_MAX_PLAYERS {
        let d = decompose(game, config)?;
        rows.push(path_oracle_defect(&d)?);
    }
    let mut text = io::render_defects(&rows, tolerance);
    let failing: Vec<&str> = rows
        .iter()
        .filter(|r| !(r.max_defect <= tolerance))
        .map(|r| r.name.as_str())
        .collect();
    if failing.is_empty() {
        text.push_str("all checks passed\n");
        Ok((EXIT_OK, text))
    } else {
        let _ = writeln!(text, "failed: {}", failing.join(", "));
        Ok((EXIT_VERIFY, text))
    }
}
