//! The `genreach` command line.
//!
//! JSON goes to stdout, human summaries to stderr. Exit codes: 0 ok, 1 usage,
//! 2 unreadable or unparsable input, 3 invalid game, failed precondition or cap,
//! 4 disagreement between QBF routes, 5 strategy refuted, 6 budget exhausted.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use genreach_core::attractor::solve_opponent_player;
use genreach_core::generators::{self, EdgeModel, RandomParams};
use genreach_core::lab::{flower_adversary, min_memory_search, minimax_oracle, verify_strategy, MachineClass, Verdict};
use genreach_core::product::solve_fpt;
use genreach_core::qbf::{eval_qbf_bruteforce, qbf_to_game};
use genreach_core::subclasses::{solve_oneplayer_size2, solve_singleton, TwoSatResult};
use genreach_core::{Error, Game, Limits, Method, Player, SolveResult, SolveStats, VertexSet};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::dimacs::{parse_dimacs_2cnf, parse_qdimacs};
use crate::dot::{export_dot, DotAnnotations};
use crate::format::{parse_game, serialize_game};
use crate::json::{
    counterexample_to_doc, player_name, refutation_to_doc, result_to_doc, strategy_from_doc, strategy_to_doc, StrategyDoc,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_DISAGREE: i32 = 4;
pub const EXIT_REFUTED: i32 = 5;
pub const EXIT_BUDGET: i32 = 6;

#[derive(Parser, Debug)]
#[command(name = "genreach", version, about = "Solve generalized reachability games")]
struct Cli {
    /// Largest color count accepted by the bitmask methods.
    #[arg(long, global = true)]
    k_cap: Option<usize>,
    /// Node budget for the minimax oracle and the memory search
    /// (default from GENREACH_BUDGET, if set).
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a game file, or every file in a directory.
    Solve(SolveArgs),
    /// Decide a QDIMACS formula through the game reduction, brute force, or both.
    Qbf(QbfArgs),
    /// Reduce a QDIMACS formula to a game file.
    Reduce {
        input: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Generate a game from one of the built-in families.
    Gen(GenArgs),
    /// Check that a strategy wins from the given starting vertices.
    Verify(VerifyArgs),
    /// Search for the smallest winning machine up to a bound.
    Minmem(MinmemArgs),
    /// Decide a DIMACS formula whose clauses have width at most two.
    Twosat {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Refute an Eve machine with too few states on the k-petal flower.
    Adversary {
        #[arg(long)]
        k: usize,
        strategy: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Fpt,
    Singleton,
    Oneplayer2,
    Opponent,
    Minimax,
}

#[derive(Args, Debug)]
struct SolveArgs {
    path: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    #[arg(long, conflicts_with = "dot")]
    json: bool,
    #[arg(long)]
    dot: bool,
    /// Include strategies in the JSON (and bold Eve's moves in DOT).
    #[arg(long)]
    strategies: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Via {
    Game,
    Brute,
    Both,
}

#[derive(Args, Debug)]
struct QbfArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    via: Via,
    #[arg(long)]
    json: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Fig1,
    Flower,
    Picker,
    Fig4,
    Fig5,
    Random,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(value_enum)]
    family: FamilyArg,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Independent edge probability (random family).
    #[arg(long, conflicts_with = "out_degree")]
    p: Option<f64>,
    /// Fixed out-degree instead of an edge probability (random family).
    #[arg(long)]
    out_degree: Option<usize>,
    #[arg(long)]
    eve_ratio: Option<f64>,
    #[arg(long)]
    color_min: Option<usize>,
    #[arg(long)]
    color_max: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum RegionArg {
    /// The strategy owner's whole winning region.
    All,
    Init,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    game: PathBuf,
    strategy: PathBuf,
    /// Defaults to `init` when the game has an initial vertex, else `all`.
    #[arg(long, value_enum)]
    region: Option<RegionArg>,
    #[arg(long)]
    json: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum PlayerArg {
    Eve,
    Adam,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    Full,
    ColorObs,
}

#[derive(Args, Debug)]
struct MinmemArgs {
    game: PathBuf,
    #[arg(long, value_enum)]
    player: PlayerArg,
    #[arg(long)]
    bound: usize,
    #[arg(long, value_enum, default_value = "color-obs")]
    class: ClassArg,
    #[arg(long)]
    json: bool,
}

/// Machine-readable envelope of every command.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub version: &'static str,
    /// SHA-256 of the input file, hex encoded.
    pub input_digest: Option<String>,
    pub timings: Timings,
    pub payload: Value,
}

#[derive(Debug, Serialize)]
pub struct Timings {
    pub total_ms: f64,
}

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
        let code = match e {
            Error::BudgetExceeded(_) => EXIT_BUDGET,
            _ => EXIT_INVALID,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome<T> = Result<T, Failure>;

fn read(path: &Path) -> Outcome<Vec<u8>> {
    std::fs::read(path).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Outcome<(String, String)> {
    let bytes = read(path)?;
    let digest = hex_digest(&bytes);
    let text = String::from_utf8(bytes).map_err(|_| Failure::new(EXIT_PARSE, format!("{}: not UTF-8", path.display())))?;
    Ok((text, digest))
}

pub fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn load_game(path: &Path) -> Outcome<(Game, String)> {
    let (text, digest) = read_text(path)?;
    let game = parse_game(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    Ok((game, digest))
}

fn load_strategy(game: &Game, path: &Path) -> Outcome<genreach_core::FiniteMemoryStrategy> {
    let (text, _) = read_text(path)?;
    let doc: StrategyDoc =
        serde_json::from_str(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    strategy_from_doc(game, &doc).map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", path.display())))
}

fn limits(cli: &Cli) -> Outcome<Limits> {
    let mut lim = Limits::default();
    let budget = match (cli.budget, std::env::var("GENREACH_BUDGET")) {
        (Some(b), _) => Some(b),
        (None, Ok(s)) => Some(
            s.trim()
                .parse()
                .map_err(|_| Failure::new(EXIT_USAGE, format!("GENREACH_BUDGET must be a node count, found `{s}`")))?,
        ),
        (None, Err(_)) => None,
    };
    if let Some(b) = budget {
        lim.minimax_budget = b;
        lim.search_budget = b;
    }
    if let Some(k) = cli.k_cap {
        lim.k_cap = k;
    }
    Ok(lim)
}

/// Picks the cheapest solver whose precondition holds.
fn auto_method(game: &Game) -> MethodArg {
    let sets = game.objective().color_sets();
    let arena = game.arena();
    if sets.iter().all(|s| s.len() == 1) {
        MethodArg::Singleton
    } else if arena.all_owned_by(Player::Adam) {
        MethodArg::Opponent
    } else if arena.all_owned_by(Player::Eve) && sets.iter().all(|s| s.len() <= 2) {
        MethodArg::Oneplayer2
    } else {
        MethodArg::Fpt
    }
}

fn solve_minimax(game: &Game, lim: &Limits) -> Outcome<SolveResult> {
    let n = game.n();
    let mut eve = Vec::with_capacity(n);
    for v in 0..n {
        let g = game.clone().with_init(Some(v))?;
        eve.push(minimax_oracle(&g, lim)? == Player::Eve);
    }
    let eve_region = VertexSet::from_flags(&eve);
    Ok(SolveResult {
        method: Method::Minimax,
        adam_region: eve_region.complement(),
        eve_region,
        eve_strategy: None,
        adam_strategy: None,
        witness: None,
        stats: SolveStats::default(),
    })
}

fn solve_with(game: &Game, method: MethodArg, lim: &Limits) -> Outcome<SolveResult> {
    let method = if method == MethodArg::Auto {
        auto_method(game)
    } else {
        method
    };
    Ok(match method {
        MethodArg::Auto | MethodArg::Fpt => solve_fpt(game, lim)?,
        MethodArg::Singleton => solve_singleton(game)?,
        MethodArg::Oneplayer2 => solve_oneplayer_size2(game)?,
        MethodArg::Opponent => solve_opponent_player(game)?,
        MethodArg::Minimax => solve_minimax(game, lim)?,
    })
}

fn summary(game: &Game, res: &SolveResult) -> String {
    let from_init = match (game.init(), res.winner_from_init(game)) {
        (Some(v), Some(p)) => format!("winner from {}: {}", game.arena().name(v), player_name(p)),
        _ => "no initial vertex".into(),
    };
    format!(
        "method {}, {from_init}, |eve region| = {}, |adam region| = {}",
        res.method.tag(),
        res.eve_region.len(),
        res.adam_region.len()
    )
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn note(&mut self, msg: &str) {
        let _ = writeln!(self.err, "{msg}");
    }

    fn emit(&mut self, text: &str) {
        let _ = self.out.write_all(text.as_bytes());
    }
}

struct Ctx {
    command: Vec<String>,
    lim: Limits,
    start: Instant,
}

impl Ctx {
    fn report(&self, digest: Option<String>, payload: Value) -> String {
        let report = RunReport {
            command: self.command.clone(),
            version: env!("CARGO_PKG_VERSION"),
            input_digest: digest,
            timings: Timings {
                total_ms: self.start.elapsed().as_secs_f64() * 1e3,
            },
            payload,
        };
        let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
        text.push('\n');
        text
    }
}

fn solve_file(path: &Path, args: &SolveArgs, lim: &Limits) -> Outcome<(Game, String, SolveResult)> {
    let (game, digest) = load_game(path)?;
    let res = solve_with(&game, args.method, lim)?;
    Ok((game, digest, res))
}

fn cmd_solve(ctx: &Ctx, io: &mut Io, args: &SolveArgs) -> Outcome<i32> {
    if !args.path.is_dir() {
        let (game, digest, res) = solve_file(&args.path, args, &ctx.lim)?;
        io.note(&summary(&game, &res));
        if args.json {
            let doc = result_to_doc(&game, &res, args.strategies);
            io.emit(&ctx.report(Some(digest), serde_json::to_value(doc).unwrap()));
        } else if args.dot {
            let strategy = if args.strategies { res.eve_strategy.as_ref() } else { None };
            io.emit(&export_dot(
                &game,
                DotAnnotations {
                    result: Some(&res),
                    strategy,
                },
            ));
        }
        return Ok(EXIT_OK);
    }
    if args.dot {
        return Err(Failure::new(EXIT_USAGE, "--dot needs a single game file"));
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(&args.path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", args.path.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && !p.file_name().is_some_and(|n| n.to_string_lossy().starts_with('.')))
        .collect();
    files.sort();
    let results: Vec<_> = files.par_iter().map(|p| solve_file(p, args, &ctx.lim)).collect();
    let mut code = EXIT_OK;
    let mut entries = Vec::new();
    for (path, res) in files.iter().zip(results) {
        let file = path.file_name().unwrap().to_string_lossy().into_owned();
        match res {
            Ok((game, digest, res)) => {
                io.note(&format!("{file}: {}", summary(&game, &res)));
                entries.push(json!({
                    "file": file,
                    "input_digest": digest,
                    "result": result_to_doc(&game, &res, args.strategies),
                }));
            }
            Err(f) => {
                io.note(&format!("{file}: error: {}", f.message));
                code = code.max(f.code);
                entries.push(json!({ "file": file, "error": f.message, "exit_code": f.code }));
            }
        }
    }
    if args.json {
        io.emit(&ctx.report(None, Value::Array(entries)));
    }
    Ok(code)
}

fn cmd_qbf(ctx: &Ctx, io: &mut Io, args: &QbfArgs) -> Outcome<i32> {
    let (text, digest) = read_text(&args.input)?;
    let q = parse_qdimacs(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", args.input.display())))?;
    for w in &q.warnings {
        io.note(&format!("warning: {w}"));
    }
    let via_game = if args.via != Via::Brute {
        let game = qbf_to_game(&q.formula)?;
        Some(solve_fpt(&game, &ctx.lim)?.winner_from_init(&game) == Some(Player::Eve))
    } else {
        None
    };
    let via_brute = if args.via != Via::Game {
        Some(eval_qbf_bruteforce(&q.formula, &ctx.lim)?)
    } else {
        None
    };
    let agree = via_game.zip(via_brute).map(|(a, b)| a == b);
    let value = via_game.or(via_brute).unwrap();
    match agree {
        Some(false) => io.note(&format!(
            "DISAGREEMENT: game route says {}, brute force says {}",
            via_game.unwrap(),
            via_brute.unwrap()
        )),
        _ => io.note(&format!("formula is {value}")),
    }
    if args.json {
        let payload = json!({
            "value": value,
            "via_game": via_game,
            "via_brute": via_brute,
            "agree": agree,
            "warnings": q.warnings,
        });
        io.emit(&ctx.report(Some(digest), payload));
    }
    Ok(if agree == Some(false) { EXIT_DISAGREE } else { EXIT_OK })
}

fn write_output(io: &mut Io, out: Option<&Path>, text: &str) -> Outcome<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", path.display()))),
        None => {
            io.emit(text);
            Ok(())
        }
    }
}

fn cmd_reduce(io: &mut Io, input: &Path, out: Option<&Path>) -> Outcome<i32> {
    let (text, _) = read_text(input)?;
    let q = parse_qdimacs(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", input.display())))?;
    let game = qbf_to_game(&q.formula)?;
    io.note(&format!(
        "{} variables -> {} vertices, {} colors",
        q.formula.vars(),
        game.n(),
        game.k()
    ));
    write_output(io, out, &serialize_game(&game))?;
    Ok(EXIT_OK)
}

fn cmd_gen(io: &mut Io, args: &GenArgs) -> Outcome<i32> {
    let need_k = || args.k.ok_or_else(|| Failure::new(EXIT_USAGE, "this family needs --k"));
    let game = match args.family {
        FamilyArg::Fig1 => generators::fig1(),
        FamilyArg::Fig5 => generators::gen_fig5(),
        FamilyArg::Flower => generators::gen_flower(need_k()?)?,
        FamilyArg::Picker => generators::gen_picker(need_k()?)?,
        FamilyArg::Fig4 => generators::gen_fig4(need_k()?)?,
        FamilyArg::Random => {
            let defaults = RandomParams::default();
            let seed = args
                .seed
                .ok_or_else(|| Failure::new(EXIT_USAGE, "the random family needs --seed"))?;
            let edges = match (args.p, args.out_degree) {
                (_, Some(d)) => EdgeModel::OutDegree(d),
                (Some(p), None) => EdgeModel::Probability(p),
                (None, None) => defaults.edges,
            };
            generators::gen_random(&RandomParams {
                n: args.n.unwrap_or(defaults.n),
                k: args.k.unwrap_or(defaults.k),
                edges,
                eve_ratio: args.eve_ratio.unwrap_or(defaults.eve_ratio),
                color_size: (
                    args.color_min.unwrap_or(defaults.color_size.0),
                    args.color_max.unwrap_or(defaults.color_size.1),
                ),
                seed,
            })?
        }
    };
    io.note(&format!(
        "{} vertices, {} edges, {} colors",
        game.n(),
        game.arena().m(),
        game.k()
    ));
    write_output(io, args.out.as_deref(), &serialize_game(&game))?;
    Ok(EXIT_OK)
}

fn cmd_verify(ctx: &Ctx, io: &mut Io, args: &VerifyArgs) -> Outcome<i32> {
    let (game, digest) = load_game(&args.game)?;
    let strategy = load_strategy(&game, &args.strategy)?;
    let player = strategy.player();
    let region = args.region.unwrap_or(if game.init().is_some() {
        RegionArg::Init
    } else {
        RegionArg::All
    });
    let starts = match region {
        RegionArg::Init => VertexSet::from_indices(game.n(), [game.require_init()?]),
        RegionArg::All => solve_fpt(&game, &ctx.lim)?.region(player).clone(),
    };
    let verdict = verify_strategy(&game, &strategy, &starts)?;
    let start_names = crate::json::names(&game, starts.iter());
    let (name, code, cx) = match &verdict {
        Verdict::Winning => ("winning", EXIT_OK, None),
        Verdict::Refuted(cx) => ("refuted", EXIT_REFUTED, Some(counterexample_to_doc(&game, cx))),
    };
    io.note(&format!(
        "{} strategy with {} states is {name} from {} start vertices",
        player_name(player),
        strategy.states(),
        starts.len()
    ));
    if let Some(cx) = &cx {
        io.note(&format!("counterexample: {}", cx.play.join(" ")));
    }
    if args.json {
        let payload = json!({
            "player": player_name(player),
            "states": strategy.states(),
            "starts": start_names,
            "verdict": name,
            "counterexample": cx,
        });
        io.emit(&ctx.report(Some(digest), payload));
    }
    Ok(code)
}

fn cmd_minmem(ctx: &Ctx, io: &mut Io, args: &MinmemArgs) -> Outcome<i32> {
    let (game, digest) = load_game(&args.game)?;
    let player = match args.player {
        PlayerArg::Eve => Player::Eve,
        PlayerArg::Adam => Player::Adam,
    };
    let class = match args.class {
        ClassArg::Full => MachineClass::Full,
        ClassArg::ColorObs => MachineClass::ColorObs,
    };
    let out = min_memory_search(&game, player, args.bound, class, &ctx.lim)?;
    match out.states() {
        Some(s) => io.note(&format!(
            "{} needs {s} states ({} machines)",
            player_name(player),
            class.tag()
        )),
        None => io.note(&format!(
            "NONE: no winning {} machine with at most {} states ({} machines, {} partial machines refuted)",
            player_name(player),
            args.bound,
            class.tag(),
            out.refuted
        )),
    }
    if args.json {
        let payload = json!({
            "player": player_name(player),
            "class": class.tag(),
            "bound": args.bound,
            "minimum": out.states(),
            "refuted": out.refuted,
            "refuted_by_size": out.refuted_by_size,
            "nodes": out.nodes,
            "strategy": out.found.as_ref().map(|s| strategy_to_doc(&game, s)),
        });
        io.emit(&ctx.report(Some(digest), payload));
    }
    Ok(EXIT_OK)
}

fn cmd_twosat(ctx: &Ctx, io: &mut Io, input: &Path, as_json: bool) -> Outcome<i32> {
    let (text, digest) = read_text(input)?;
    let phi = parse_dimacs_2cnf(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", input.display())))?;
    let payload = match phi.solve() {
        TwoSatResult::Sat(a) => {
            let lits: Vec<i64> = a
                .iter()
                .enumerate()
                .map(|(i, &b)| if b { i as i64 + 1 } else { -(i as i64 + 1) })
                .collect();
            io.note("SAT");
            json!({ "sat": true, "assignment": lits })
        }
        TwoSatResult::Unsat { var } => {
            io.note(&format!("UNSAT: variable {} and its negation are equivalent", var + 1));
            json!({ "sat": false, "conflict_variable": var + 1 })
        }
    };
    if as_json {
        io.emit(&ctx.report(Some(digest), payload));
    }
    Ok(EXIT_OK)
}

fn cmd_adversary(ctx: &Ctx, io: &mut Io, k: usize, path: &Path, as_json: bool) -> Outcome<i32> {
    let game = generators::gen_flower(k)?;
    let (_, digest) = read_text(path)?;
    let strategy = load_strategy(&game, path)?;
    let r = flower_adversary(k, &strategy)?;
    let doc = refutation_to_doc(&game, &r);
    io.note(&format!(
        "X = {:?}; Adam offers petals {:?}; {} wins after {} steps",
        doc.x, doc.moves, doc.play.winner, doc.play.steps
    ));
    if as_json {
        io.emit(&ctx.report(Some(digest), serde_json::to_value(doc).unwrap()));
    }
    Ok(EXIT_OK)
}

fn dispatch(cli: &Cli, ctx: &Ctx, io: &mut Io) -> Outcome<i32> {
    match &cli.command {
        Command::Solve(a) => cmd_solve(ctx, io, a),
        Command::Qbf(a) => cmd_qbf(ctx, io, a),
        Command::Reduce { input, out } => cmd_reduce(io, input, out.as_deref()),
        Command::Gen(a) => cmd_gen(io, a),
        Command::Verify(a) => cmd_verify(ctx, io, a),
        Command::Minmem(a) => cmd_minmem(ctx, io, a),
        Command::Twosat { input, json } => cmd_twosat(ctx, io, input, *json),
        Command::Adversary { k, strategy, json } => cmd_adversary(ctx, io, *k, strategy, *json),
    }
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let mut io = Io {
        out: stdout,
        err: stderr,
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                io.note(text.trim_end());
                EXIT_USAGE
            } else {
                io.emit(&text);
                EXIT_OK
            };
        }
    };
    let lim = match limits(&cli) {
        Ok(l) => l,
        Err(f) => {
            io.note(&format!("error: {}", f.message));
            return f.code;
        }
    };
    let ctx = Ctx {
        command: args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect(),
        lim,
        start: Instant::now(),
    };
    match dispatch(&cli, &ctx, &mut io) {
        Ok(code) => code,
        Err(f) => {
            io.note(&format!("error: {}", f.message));
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn auto_dispatch() {
        assert_eq!(auto_method(&generators::fig1()), MethodArg::Fpt);
        assert_eq!(auto_method(&generators::gen_fig4(2).unwrap()), MethodArg::Fpt);
        let qbf = qbf_to_game(
            &genreach_core::qbf::QbfFormula::new(1, vec![(genreach_core::qbf::Quantifier::Exists, 1)], vec![vec![1, -1]])
                .unwrap(),
        )
        .unwrap();
        assert_eq!(auto_method(&qbf), MethodArg::Oneplayer2);
    }

    #[test]
    fn digests_are_hex_sha256() {
        assert_eq!(
            hex_digest(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
