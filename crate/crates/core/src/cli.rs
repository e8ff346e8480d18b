//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 input (I/O, parse, validation,
//! fingerprint mismatch), 3 infeasible or failed verification, 4 internal
//! invariant violation.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Signed;

use crate::arena::{parse_game, GameArena, PlayerId, ZeroSumGame};
use crate::equilibria::{build_constraint_system, solve_with, EquilibriumError, Mode, SolveOptions};
use crate::generators::{builtin_by_name, random_game, token_ring, RandomGameParams, TokenRingParams};
use crate::play::{empirical_payoffs, payoff_tolerance, PlaySchedule};
use crate::rational::{decimal, fraction, Rational};
use crate::report::{ModeReport, RunReport};
use crate::zerosum::vertex_values;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "mmpg", version, about = "Incentive, leader and Nash equilibria of multi-player mean-payoff games")]
struct Cli {
    /// Worker threads (also MMPG_JOBS); 1 keeps timings reproducible
    #[arg(long, global = true, env = "MMPG_JOBS", default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one mode and print a report
    Solve(SolveArgs),
    /// Solve nash, leader and incentive modes and check their ordering
    Compare(CompareArgs),
    /// Emit a game in the text format
    Generate {
        #[command(subcommand)]
        family: Family,
        /// Write to a file instead of stdout
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Check a report against a game and replay its play
    Verify(VerifyArgs),
    /// Sweep a family and write one CSV row per instance
    Bench {
        #[command(subcommand)]
        family: BenchFamily,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Print punishment values `vertex value`
    Values {
        game: String,
        /// Only this player (default: every follower)
        #[arg(long)]
        player: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
enum ModeArg {
    Incentive,
    Leader,
    Nash,
    Secure,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Game file, or `builtin:<name>`
    game: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Incentive)]
    mode: ModeArg,
    /// ε for secure mode, e.g. `1/100`
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write the winning region's LP in CPLEX LP layout
    #[arg(long)]
    lp_dump: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    game: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    game: String,
    report: PathBuf,
    /// Number of moves to replay
    #[arg(long, default_value_t = 10_000)]
    horizon: usize,
}

#[derive(Debug, Subcommand)]
enum Family {
    TokenRing {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        vertices: usize,
        #[arg(long, default_value_t = 3)]
        players: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
    },
    Builtin {
        name: String,
    },
}

#[derive(Debug, Subcommand)]
enum BenchFamily {
    /// Ranges are `a`, `a..b` (exclusive) or `a..=b`
    TokenRing {
        #[arg(long, value_parser = parse_range)]
        n: Range,
        #[arg(long, value_parser = parse_range)]
        d: Range,
    },
    Random {
        #[arg(long, value_parser = parse_range)]
        seeds: Range,
        #[arg(long, default_value_t = 10)]
        vertices: usize,
        #[arg(long, default_value_t = 3)]
        players: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Range(Vec<u64>);

fn parse_range(s: &str) -> Result<Range, String> {
    let num = |x: &str| x.trim().parse::<u64>().map_err(|_| format!("invalid number `{x}`"));
    let values = if let Some((a, b)) = s.split_once("..=") {
        (num(a)?..=num(b)?).collect()
    } else if let Some((a, b)) = s.split_once("..") {
        (num(a)?..num(b)?).collect()
    } else {
        vec![num(s)?]
    };
    Ok(Range(values))
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

impl From<EquilibriumError> for Failure {
    fn from(e: EquilibriumError) -> Self {
        let code = match e {
            EquilibriumError::Infeasible(_) => EXIT_INFEASIBLE,
            EquilibriumError::Arena(_) => EXIT_INPUT,
            EquilibriumError::InvalidEpsilon(_) | EquilibriumError::UnknownMode(_) => EXIT_USAGE,
            EquilibriumError::NotIncentive(_) => EXIT_INTERNAL,
        };
        fail(code, e.to_string())
    }
}

/// Reads a game file, or a built-in via `builtin:<name>`.
pub fn load_game(spec: &str) -> Result<GameArena, (i32, String)> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return builtin_by_name(name).map_err(|e| (EXIT_USAGE, e.to_string()));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| (EXIT_INPUT, format!("{spec}: {e}")))?;
    parse_game(&text).map_err(|e| (EXIT_INPUT, format!("{spec}: {e}")))
}

fn load(spec: &str) -> Result<GameArena, Failure> {
    load_game(spec).map_err(|(code, message)| fail(code, message))
}

fn write_out(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| fail(EXIT_INPUT, format!("stdout: {e}"))),
    }
}

fn mode_of(m: ModeArg, epsilon: Option<&str>) -> Result<Mode, Failure> {
    if m != ModeArg::Secure && epsilon.is_some() {
        return Err(fail(EXIT_USAGE, "--epsilon only applies to --mode secure"));
    }
    let name = match m {
        ModeArg::Incentive => "incentive",
        ModeArg::Leader => "leader",
        ModeArg::Nash => "nash",
        ModeArg::Secure => "secure",
    };
    Ok(Mode::parse(name, epsilon)?)
}

fn render(report: &RunReport, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    }
}

/// Runs the CLI with explicit streams and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let options = SolveOptions { jobs: cli.jobs.max(1) };
    match cli.command {
        Command::Solve(a) => solve(a, &options, out),
        Command::Compare(a) => compare(a, &options, out),
        Command::Generate { family, output } => {
            let arena = match family {
                Family::TokenRing { n, d } => {
                    if n < 2 || d < 1 {
                        return Err(fail(EXIT_USAGE, "token ring needs n >= 2 and d >= 1"));
                    }
                    token_ring(TokenRingParams { n, d })
                }
                Family::Random {
                    seed,
                    vertices,
                    players,
                    density,
                } => {
                    check_random(vertices, players, density)?;
                    random_game(&RandomGameParams {
                        seed,
                        vertices,
                        players,
                        density,
                    })
                }
                Family::Builtin { name } => builtin_by_name(&name).map_err(|e| fail(EXIT_USAGE, e.to_string()))?,
            };
            write_out(output.as_deref(), &arena.to_text(), out)
        }
        Command::Verify(a) => verify(a, out),
        Command::Bench { family, output } => bench(family, &options, output.as_deref(), out),
        Command::Values { game, player } => values(&game, player, out),
    }
}

fn check_random(vertices: usize, players: usize, density: f64) -> Result<(), Failure> {
    if vertices == 0 || players == 0 || !(0.0..=1.0).contains(&density) {
        return Err(fail(EXIT_USAGE, "random games need vertices >= 1, players >= 1 and density in [0, 1]"));
    }
    Ok(())
}

fn solve(a: SolveArgs, options: &SolveOptions, out: &mut dyn Write) -> Result<(), Failure> {
    let mode = mode_of(a.mode, a.epsilon.as_deref())?;
    let arena = load(&a.game)?;
    let (result, stats) = solve_with(&arena, &mode, options)?;
    if let Some(path) = &a.lp_dump {
        let base = if mode.pays_incentives() { Mode::Incentive } else { mode.clone() };
        let system = build_constraint_system(&arena, &result.region, &base);
        std::fs::write(path, system.program.to_lp_text())
            .map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    }
    let report = RunReport {
        fingerprint: arena.fingerprint(),
        results: vec![ModeReport::new(&arena, &result, &stats)],
    };
    write_out(a.output.as_deref(), &render(&report, a.format), out)
}

fn compare(a: CompareArgs, options: &SolveOptions, out: &mut dyn Write) -> Result<(), Failure> {
    let arena = load(&a.game)?;
    let mut results = Vec::new();
    let mut reports = Vec::new();
    for mode in [Mode::Nash, Mode::Leader, Mode::Incentive] {
        let (r, stats) = solve_with(&arena, &mode, options)?;
        reports.push(ModeReport::new(&arena, &r, &stats));
        results.push(r);
    }
    let report = RunReport {
        fingerprint: arena.fingerprint(),
        results: reports,
    };
    match a.format {
        Format::Json => write_out(None, &report.to_json(), out)?,
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "{:<10} {:>14} {:>12}", "mode", "leader", "decimal").unwrap();
            for r in &results {
                writeln!(s, "{:<10} {:>14} {:>12}", r.mode.name(), fraction(&r.leader_payoff), decimal(&r.leader_payoff))
                    .unwrap();
            }
            write_out(None, &s, out)?;
        }
    }
    let (n, l, i) = (&results[0].leader_payoff, &results[1].leader_payoff, &results[2].leader_payoff);
    if !(n <= l && l <= i) {
        return Err(fail(
            EXIT_INTERNAL,
            format!("ordering violated: nash {n}, leader {l}, incentive {i}"),
        ));
    }
    Ok(())
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> Result<(), Failure> {
    if a.horizon < 2 {
        return Err(fail(EXIT_USAGE, format!("horizon {} is too short (need at least 2 moves)", a.horizon)));
    }
    let arena = load(&a.game)?;
    let text = std::fs::read_to_string(&a.report).map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", a.report.display())))?;
    let report = RunReport::from_json(&text).map_err(|e| fail(EXIT_INPUT, e.to_string()))?;
    if report.fingerprint != arena.fingerprint() {
        return Err(fail(
            EXIT_INPUT,
            format!("report fingerprint {} does not match game {}", report.fingerprint, arena.fingerprint()),
        ));
    }
    let mut ok = true;
    let mut s = String::new();
    for mr in &report.results {
        let result = mr.to_result(&arena).map_err(|e| fail(EXIT_INPUT, e.to_string()))?;
        writeln!(s, "mode {}", mr.mode).unwrap();
        let base = if result.mode.pays_incentives() { Mode::Incentive } else { result.mode.clone() };
        let system = build_constraint_system(&arena, &result.region, &base);
        let violations = system.check(&arena, &result.solution);
        for v in &violations {
            writeln!(s, "  FAIL {v}").unwrap();
        }
        ok &= violations.is_empty();
        if !violations.is_empty() {
            continue;
        }
        // reported payoffs must follow from the ratios
        for p in arena.players() {
            let raw = result.solution.raw_payoff(&arena, p);
            if raw != result.raw_payoffs[&p] {
                writeln!(s, "  FAIL raw payoff of player {} is {}, ratios give {}", p.0, result.raw_payoffs[&p], raw).unwrap();
                ok = false;
            }
        }
        let schedule = PlaySchedule::from_result(&arena, &result).map_err(|e| fail(EXIT_INFEASIBLE, e.to_string()))?;
        let islands = schedule.island_count();
        let play = schedule.take_moves(a.horizon).map_err(|e| fail(EXIT_INFEASIBLE, e.to_string()))?;
        let got = empirical_payoffs(&play, &arena, &result.solution.incentives).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
        let tol = if islands == 1 {
            payoff_tolerance(&arena, a.horizon)
        } else {
            // island transfers cost O(sqrt(T)) moves
            let root = (a.horizon as f64).sqrt().floor().max(1.0) as usize;
            payoff_tolerance(&arena, root)
        };
        writeln!(s, "  horizon {} ({} island{}), tolerance {}", a.horizon, islands, if islands == 1 { "" } else { "s" }, decimal(&tol)).unwrap();
        for p in arena.players() {
            let target: Rational = if p == arena.leader() {
                result.leader_payoff.clone()
            } else {
                result.follower_payoffs[&p].clone()
            };
            let pass = (&got[&p] - &target).abs() <= tol;
            ok &= pass;
            writeln!(
                s,
                "  {} player {}: empirical {} lp {}",
                if pass { "PASS" } else { "FAIL" },
                p.0,
                decimal(&got[&p]),
                fraction(&target)
            )
            .unwrap();
        }
    }
    writeln!(s, "{}", if ok { "verified" } else { "verification failed" }).unwrap();
    write_out(None, &s, out)?;
    if ok {
        Ok(())
    } else {
        Err(fail(EXIT_INFEASIBLE, "verification failed"))
    }
}

/// Closed-form guess `n > d > n(n-1)/(2n-1)` for the token rings on which incentives
/// raise the leader payoff. Bench prints it next to the computed answer.
pub fn predicted_frontier(n: u64, d: u64) -> bool {
    n > d && d * (2 * n - 1) > n * (n - 1)
}

pub const BENCH_HEADER: &str =
    "family,seed,n,d,vertices,players,nash,leader,incentive,incentive_helps,predicted_helps,ordering_ok,total_ms";

fn bench(family: BenchFamily, options: &SolveOptions, output: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    let mut csv = String::from(BENCH_HEADER);
    csv.push('\n');
    let mut instances: Vec<(String, GameArena, String)> = Vec::new();
    match family {
        BenchFamily::TokenRing { n, d } => {
            for &n in &n.0 {
                for &d in &d.0 {
                    if n < 2 || d < 1 {
                        return Err(fail(EXIT_USAGE, "token ring needs n >= 2 and d >= 1"));
                    }
                    let arena = token_ring(TokenRingParams {
                        n: n as usize,
                        d: d as usize,
                    });
                    instances.push((format!("token_ring,,{n},{d}"), arena, predicted_frontier(n, d).to_string()));
                }
            }
        }
        BenchFamily::Random {
            seeds,
            vertices,
            players,
            density,
        } => {
            check_random(vertices, players, density)?;
            for seed in seeds.0 {
                let arena = random_game(&RandomGameParams {
                    seed,
                    vertices,
                    players,
                    density,
                });
                instances.push((format!("random,{seed},,"), arena, String::new()));
            }
        }
    }
    for (prefix, arena, frontier) in instances {
        let start = std::time::Instant::now();
        let mut payoffs = Vec::new();
        for mode in [Mode::Nash, Mode::Leader, Mode::Incentive] {
            payoffs.push(solve_with(&arena, &mode, options)?.0.leader_payoff);
        }
        let ms = start.elapsed().as_secs_f64() * 1e3;
        let ordering = payoffs[0] <= payoffs[1] && payoffs[1] <= payoffs[2];
        writeln!(
            csv,
            "{prefix},{},{},{},{},{},{},{frontier},{ordering},{ms:.3}",
            arena.vertex_count(),
            arena.player_count(),
            payoffs[0],
            payoffs[1],
            payoffs[2],
            payoffs[2] > payoffs[1]
        )
        .unwrap();
    }
    write_out(output, &csv, out)
}

fn values(game: &str, player: Option<usize>, out: &mut dyn Write) -> Result<(), Failure> {
    let arena = load(game)?;
    let players: Vec<PlayerId> = match player {
        Some(p) if p >= arena.player_count() => {
            return Err(fail(EXIT_USAGE, format!("player {p} out of range for {} players", arena.player_count())))
        }
        Some(p) => vec![PlayerId(p)],
        None => arena.followers().collect(),
    };
    let mut s = String::new();
    for p in players {
        let g = ZeroSumGame::for_player(&arena, p).map_err(|e| fail(EXIT_INTERNAL, e.to_string()))?;
        let vals = vertex_values(&g);
        if player.is_none() {
            writeln!(s, "# player {}", p.0).unwrap();
        }
        for (v, q) in vals.iter() {
            writeln!(s, "{} {}", arena.name(v), fraction(q)).unwrap();
        }
    }
    write_out(None, &s, out)
}
