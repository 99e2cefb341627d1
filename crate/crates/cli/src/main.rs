//! Command-line surface for the covertool library.
//!
//! One binary, one subcommand per task family. Exit codes are part of
//! the contract:
//!
//! * 0: property verified / witness found
//! * 1: property refuted / witness absent / counterexample candidates
//! * 2: usage, parse, or hypothesis error
//! * 3: node budget exhausted, result inconclusive
//!
//! With `--json` each subcommand prints a single JSON object on stdout
//! carrying `"schema": 1`; human output is informational and not a
//! stable interface. `COVERTOOL_THREADS` caps the worker pool used by
//! the parallel scans.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use covertool::cover_analysis::{self, SearchConfig};
use covertool::coset_covers::{self, CosetCoverReport, ScanScope};
use covertool::covers::{self, CoverVerdict};
use covertool::groups::{subgroup_from_generators, CosetSystem, FinAbGroup, GroupElement};
use covertool::residues::ResidueSystem;
use covertool::sumsets::{self, GSubset, Numbering};
use covertool::zerosum::{self, GSequence};
use covertool::Budgeted;

const SCHEMA: u64 = 1;

const EXIT_OK: u8 = 0;
const EXIT_REFUTED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_EXHAUSTED: u8 = 3;

/// Terminates the run with exit code 2.
struct UsageError(String);

type CliResult = Result<u8, UsageError>;

fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

/// Maps a library error (bad input, violated hypothesis) to exit 2.
fn lib<T, E: Display>(r: Result<T, E>) -> Result<T, UsageError> {
    r.map_err(|e| UsageError(e.to_string()))
}

#[derive(Parser)]
#[command(
    name = "covertool",
    version,
    about = "Verification and desk-scale search for covering systems, coset covers, \
             zero-sum sequences and restricted sumsets"
)]
struct Cli {
    /// Emit a machine-readable JSON object instead of human text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a residue system covers every integer at least (or exactly) m times.
    Verify(VerifyArgs),
    /// Structural report on a candidate disjoint cover.
    Analyze(AnalyzeArgs),
    /// Exhaustive search for covers with moduli drawn from a pool.
    Search(SearchArgs),
    /// Davenport constant of a finite abelian group.
    Davenport(DavenportArgs),
    /// Zero-sum subsequence of length |G| in a sequence over G.
    Egz(EgzArgs),
    /// Zero-sum subset with prescribed reciprocal sum over a cover.
    ZerosumBridge(ZerosumBridgeArgs),
    /// Sumsets, restricted sumsets, and their classical lower bounds.
    Sumset(SumsetArgs),
    /// Numbering of two equal-size subsets with distinct pair sums.
    Snevily(SnevilyArgs),
    /// Numbering of a full-group sequence against the group elements.
    Hall(HallArgs),
    /// Coset-cover bounds and conjecture scans.
    Coset(CosetArgs),
    /// Mycielski's function f(n).
    F(FArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Residue classes: `a mod n` lines or `{"classes": [{"a":..,"n":..}]}`.
    file: PathBuf,
    /// Required covering multiplicity.
    #[arg(long, default_value_t = 1)]
    m: u64,
    /// Check exact multiplicity m instead of at-least m.
    #[arg(long)]
    exact: bool,
    /// Which method(s) to run.
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    method: MethodArg,
    /// Start of the certificate window (default 0).
    #[arg(long, allow_hyphen_values = true)]
    start: Option<String>,
    /// Comma-separated multipliers for the window certificate, one per
    /// class, each coprime to its modulus.
    #[arg(long)]
    multipliers: Option<String>,
    /// Re-run the window certificate at this many random starts.
    #[arg(long)]
    spot_check: Option<u32>,
    /// Seed for --spot-check (required with --json).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Naive,
    Window,
    Erdos,
    All,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Residue classes: `a mod n` lines or JSON.
    file: PathBuf,
}

#[derive(Args)]
struct SearchArgs {
    /// Candidate moduli, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pool: Vec<u64>,
    /// Largest number of classes per system.
    #[arg(long, default_value_t = 6)]
    k_max: usize,
    /// Require pairwise distinct moduli.
    #[arg(long)]
    distinct: bool,
    /// Search for exact 1-covers (partitions) instead of covers.
    #[arg(long)]
    exact: bool,
    /// Stop after this many systems.
    #[arg(long, default_value_t = 100)]
    max_results: usize,
    /// Backtracking node budget.
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
}

#[derive(Args)]
struct DavenportArgs {
    /// Group, e.g. `Z9` or `Z3xZ3`.
    group: String,
    /// Search node budget.
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
}

#[derive(Args)]
struct EgzArgs {
    /// Group, e.g. `Z4` or `Z2xZ2`.
    group: String,
    /// Sequence of elements, e.g. `0,1,3,2` or `(0,1),(1,0)`.
    sequence: String,
}

#[derive(Args)]
struct ZerosumBridgeArgs {
    /// Residue classes: `a mod n` lines or JSON.
    file: PathBuf,
    /// Group of prime-power order q, e.g. `Z4` or `Z2xZ2`.
    #[arg(long)]
    group: String,
    /// One group element per class, e.g. `0,1,1,0,1`.
    #[arg(long)]
    multipliers: String,
}

#[derive(Args)]
struct SumsetArgs {
    /// Group, e.g. `Z7` or `Z2xZ4`.
    group: String,
    /// First subset, e.g. `{1,2,4}` or `{(0,0),(1,2)}`.
    #[arg(long)]
    a: String,
    /// Second subset, for sumsets and the two-set checks.
    #[arg(long)]
    b: Option<String>,
    /// Number of distinct summands for the restricted sumset.
    #[arg(long)]
    n: Option<usize>,
    /// Bound to check instead of printing the sumset.
    #[arg(long, value_enum)]
    check: Option<SumsetCheckArg>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SumsetCheckArg {
    /// Cauchy–Davenport: |A+B| >= min(p, |A|+|B|-1).
    Cd,
    /// Restricted-sumset bound |n^A| >= min(p, n|A|-n^2+1).
    Dsh,
    /// Pair-sum bound |2^A| >= min(p(G), 2|A|-3).
    Pair,
    /// Kneser identity at the stabilizer of A+B.
    Kneser,
}

#[derive(Args)]
struct SnevilyArgs {
    /// Group, e.g. `Z5`.
    group: String,
    /// First subset.
    #[arg(long)]
    a: String,
    /// Second subset, same size.
    #[arg(long)]
    b: String,
}

#[derive(Args)]
struct HallArgs {
    /// Group, e.g. `Z2xZ2`.
    group: String,
    /// Exactly |G| elements, e.g. `0,1,2,3`.
    sequence: String,
}

#[derive(Args)]
struct CosetArgs {
    /// Coset system file (see `covertool coset --help` for the format:
    /// a `group <spec>` line, then `rep + <gen; gen; ...>` lines).
    #[arg(long)]
    system: Option<PathBuf>,
    /// Named check to evaluate against --system.
    #[arg(long, value_enum)]
    check: Option<CosetCheckArg>,
    /// Covering multiplicity for the cover checks.
    #[arg(long, default_value_t = 1)]
    m: u64,
    /// Coset index for the irredundant check (0-based).
    #[arg(long)]
    t: Option<usize>,
    /// Base subgroup generators for the union-count check,
    /// `;`-separated elements, e.g. `(2,0);(0,1)`.
    #[arg(long)]
    subgroup: Option<String>,
    /// Scope file for a conjecture scan (`key = value` lines:
    /// max_order, max_k, max_m, node_budget).
    #[arg(long)]
    conjecture_scan: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CosetCheckArg {
    /// Lettl–Sun bounds at an irredundant coset (needs --t).
    Irredundant,
    /// Tomkinson/Sun/Korec/Mycielski bounds for a minimal cover.
    Minimal,
    /// Two indices of a uniform cover coincide.
    HerzogSchonheim,
    /// [G:∩G_i] divides the index product, with matching prime sets.
    IndexDivisibility,
    /// Coset-union lower bound over a base subgroup (needs --subgroup).
    UnionCount,
}

#[derive(Args)]
struct FArgs {
    n: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(UsageError(msg)) = configure_threads() {
        eprintln!("covertool: {msg}");
        return ExitCode::from(EXIT_USAGE);
    }
    let json = cli.json;
    let outcome = match cli.command {
        Command::Verify(a) => run_verify(a, json),
        Command::Analyze(a) => run_analyze(a, json),
        Command::Search(a) => run_search(a, json),
        Command::Davenport(a) => run_davenport(a, json),
        Command::Egz(a) => run_egz(a, json),
        Command::ZerosumBridge(a) => run_bridge(a, json),
        Command::Sumset(a) => run_sumset(a, json),
        Command::Snevily(a) => run_snevily(a, json),
        Command::Hall(a) => run_hall(a, json),
        Command::Coset(a) => run_coset(a, json),
        Command::F(a) => run_f(a, json),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(UsageError(msg)) => {
            eprintln!("covertool: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn configure_threads() -> Result<(), UsageError> {
    let Ok(raw) = std::env::var("COVERTOOL_THREADS") else {
        return Ok(());
    };
    let n: usize = match raw.trim().parse() {
        Ok(n) if n >= 1 => n,
        _ => return usage(format!("COVERTOOL_THREADS must be a positive integer, got `{raw}`")),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| UsageError(format!("worker pool: {e}")))
}

// ---------- shared parsing ----------

fn read_input(path: &Path) -> Result<String, UsageError> {
    fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn parse_system(path: &Path) -> Result<ResidueSystem, UsageError> {
    lib(ResidueSystem::parse(&read_input(path)?))
}

fn parse_group(spec: &str) -> Result<FinAbGroup, UsageError> {
    lib(FinAbGroup::from_str(spec))
}

fn parse_bigint(s: &str) -> Result<BigInt, UsageError> {
    s.trim()
        .parse()
        .map_err(|_| UsageError(format!("bad integer `{s}`")))
}

/// Splits on commas that are not nested inside parentheses.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn parse_element(g: &FinAbGroup, s: &str) -> Result<GroupElement, UsageError> {
    let t = s.trim();
    if t.is_empty() {
        return usage("empty element literal");
    }
    let inner = t
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .unwrap_or(t);
    let coords: Vec<i64> = inner
        .split(',')
        .map(|c| c.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| UsageError(format!("bad element `{t}`")))?;
    lib(g.element(&coords))
}

fn parse_elements(g: &FinAbGroup, s: &str) -> Result<Vec<GroupElement>, UsageError> {
    let t = s.trim();
    let inner = t
        .strip_prefix('{')
        .and_then(|x| x.strip_suffix('}'))
        .unwrap_or(t);
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    split_top_level(inner)
        .into_iter()
        .map(|part| parse_element(g, part))
        .collect()
}

fn parse_subset(g: &FinAbGroup, s: &str) -> Result<GSubset, UsageError> {
    lib(GSubset::new(g.clone(), parse_elements(g, s)?))
}

fn parse_sequence(g: &FinAbGroup, s: &str) -> Result<GSequence, UsageError> {
    lib(GSequence::new(g.clone(), parse_elements(g, s)?))
}

/// Coset system file: a `group <spec>` line, then one coset per line as
/// `rep + <gen; gen; ...>` (`<>` for the trivial subgroup). `#` starts
/// a comment.
fn parse_coset_file(path: &Path) -> Result<CosetSystem, UsageError> {
    let text = read_input(path)?;
    let mut group: Option<FinAbGroup> = None;
    let mut cosets = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| UsageError(format!("{}:{}: {msg}", path.display(), idx + 1));
        match &group {
            None => {
                let spec = line
                    .strip_prefix("group")
                    .ok_or_else(|| err("expected `group <spec>` first".into()))?;
                group = Some(
                    FinAbGroup::from_str(spec.trim()).map_err(|e| err(e.to_string()))?,
                );
            }
            Some(g) => {
                let (rep_part, gen_part) = line
                    .split_once('+')
                    .ok_or_else(|| err("expected `rep + <generators>`".into()))?;
                let rep = parse_element(g, rep_part).map_err(|e| err(e.0))?;
                let gens_inner = gen_part
                    .trim()
                    .strip_prefix('<')
                    .and_then(|x| x.strip_suffix('>'))
                    .ok_or_else(|| err("generators must be wrapped in <...>".into()))?;
                let gens: Vec<GroupElement> = gens_inner
                    .split(';')
                    .map(str::trim)
                    .filter(|p| !p.is_empty())
                    .map(|p| parse_element(g, p).map_err(|e| err(e.0)))
                    .collect::<Result<_, _>>()?;
                let sub =
                    subgroup_from_generators(g, &gens).map_err(|e| err(e.to_string()))?;
                cosets.push((rep, sub));
            }
        }
    }
    lib(CosetSystem::new(cosets))
}

/// Scope file: `key = value` lines for max_order, max_k, max_m,
/// node_budget; missing keys keep the defaults.
fn parse_scope_file(path: &Path) -> Result<ScanScope, UsageError> {
    let text = read_input(path)?;
    let mut scope = ScanScope::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| UsageError(format!("{}:{}: {msg}", path.display(), idx + 1));
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err("expected `key = value`".into()))?;
        let value = value.trim();
        let parse_u64 =
            |v: &str| v.parse::<u64>().map_err(|_| err(format!("bad number `{v}`")));
        match key.trim() {
            "max_order" => scope.max_order = parse_u64(value)?,
            "max_k" => scope.max_k = parse_u64(value)? as usize,
            "max_m" => scope.max_m = parse_u64(value)?,
            "node_budget" => scope.node_budget = parse_u64(value)?,
            other => return Err(err(format!("unknown key `{other}`"))),
        }
    }
    Ok(scope)
}

fn coords_json(e: &GroupElement) -> Value {
    json!(e.coords())
}

fn emit(payload: &Value) {
    println!("{payload}");
}

// ---------- verify ----------

struct MethodOutcome {
    name: &'static str,
    verdict: Option<CoverVerdict>,
    skipped: Option<String>,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn run_verify(args: VerifyArgs, json: bool) -> CliResult {
    let a = parse_system(&args.file)?;
    let m = args.m;
    let start = match &args.start {
        Some(s) => parse_bigint(s)?,
        None => BigInt::from(0),
    };
    let multipliers: Option<Vec<BigInt>> = match &args.multipliers {
        Some(s) => Some(
            s.split(',')
                .map(parse_bigint)
                .collect::<Result<_, _>>()?,
        ),
        None => None,
    };
    if args.exact && multipliers.is_some() {
        return usage("--multipliers applies only to the at-least window certificate");
    }

    let mut outcomes: Vec<MethodOutcome> = Vec::new();
    let want = args.method;
    if matches!(want, MethodArg::All | MethodArg::Naive) {
        let v = lib(if args.exact {
            covers::is_exact_m_cover_naive(&a, m)
        } else {
            covers::is_m_cover_naive(&a, m)
        })?;
        outcomes.push(MethodOutcome { name: v.method.name(), verdict: Some(v), skipped: None });
    }
    if matches!(want, MethodArg::All | MethodArg::Window) {
        let v = lib(if args.exact {
            covers::is_exact_m_cover_window(&a, m, &start)
        } else {
            covers::is_m_cover_window(&a, m, multipliers.as_deref(), &start)
        })?;
        outcomes.push(MethodOutcome { name: v.method.name(), verdict: Some(v), skipped: None });
    }
    if matches!(want, MethodArg::All | MethodArg::Erdos) {
        let explicit = want == MethodArg::Erdos;
        if m != 1 || args.exact {
            if explicit {
                return usage("the 1..2^k window certifies plain 1-covers only");
            }
            outcomes.push(MethodOutcome {
                name: "erdos-2k",
                verdict: None,
                skipped: Some("certifies plain 1-covers only".into()),
            });
        } else {
            match covers::erdos_2k_check(&a) {
                Ok(v) => outcomes.push(MethodOutcome {
                    name: v.method.name(),
                    verdict: Some(v),
                    skipped: None,
                }),
                Err(e) if explicit => return usage(e.to_string()),
                Err(e) => outcomes.push(MethodOutcome {
                    name: "erdos-2k",
                    verdict: None,
                    skipped: Some(e.to_string()),
                }),
            }
        }
    }

    // Optional randomized re-checks of the window certificate.
    let spot = match args.spot_check {
        Some(n) => {
            let seed = match (args.seed, json) {
                (Some(s), _) => s,
                (None, true) => {
                    return usage("--spot-check with --json requires --seed for reproducibility")
                }
                (None, false) => 0,
            };
            let mut state = seed;
            let mut all_agree = true;
            let consensus = outcomes.iter().flat_map(|o| &o.verdict).next();
            for _ in 0..n {
                let offset = (splitmix64(&mut state) % 2_000_001) as i64 - 1_000_000;
                let s = BigInt::from(offset);
                let v = lib(if args.exact {
                    covers::is_exact_m_cover_window(&a, m, &s)
                } else {
                    covers::is_m_cover_window(&a, m, multipliers.as_deref(), &s)
                })?;
                if let Some(c) = consensus {
                    all_agree &= v.is_cover == c.is_cover;
                }
            }
            Some((n, seed, all_agree))
        }
        None => None,
    };

    let verdicts: Vec<&CoverVerdict> = outcomes.iter().flat_map(|o| &o.verdict).collect();
    if verdicts.is_empty() {
        return usage("no method was applicable");
    }
    let is_cover = verdicts[0].is_cover;
    let agree = verdicts.iter().all(|v| v.is_cover == is_cover)
        && spot.map_or(true, |(_, _, ok)| ok);
    let witness = verdicts.iter().find_map(|v| v.witness.clone());

    if json {
        let results: Vec<Value> = outcomes
            .iter()
            .map(|o| match (&o.verdict, &o.skipped) {
                (Some(v), _) => json!({
                    "method": o.name,
                    "is_cover": v.is_cover,
                    "witness": v.witness.as_ref().map(|w| w.to_string()),
                }),
                (None, reason) => json!({ "method": o.name, "skipped": reason }),
            })
            .collect();
        let mut payload = json!({
            "schema": SCHEMA,
            "command": "verify",
            "m": m,
            "exact": args.exact,
            "results": results,
            "agree": agree,
            "is_cover": is_cover,
            "witness": witness.as_ref().map(|w| w.to_string()),
        });
        if let Some((n, seed, ok)) = spot {
            payload["spot_checks"] = json!({ "count": n, "seed": seed, "all_agree": ok });
        }
        emit(&payload);
    } else {
        let kind = if args.exact { "exact " } else { "" };
        let article = if args.exact { "an" } else { "a" };
        for o in &outcomes {
            match (&o.verdict, &o.skipped) {
                (Some(v), _) if v.is_cover => println!("{}: {kind}{m}-cover", o.name),
                (Some(v), _) => println!(
                    "{}: not {article} {kind}{m}-cover (witness {})",
                    o.name,
                    v.witness.as_ref().map_or_else(String::new, |w| w.to_string())
                ),
                (None, Some(reason)) => println!("{}: skipped ({reason})", o.name),
                (None, None) => unreachable!("skipped outcomes carry a reason"),
            }
        }
        if let Some((n, seed, ok)) = spot {
            println!(
                "spot checks: {n} window starts (seed {seed}): {}",
                if ok { "all agree" } else { "DISAGREE" }
            );
        }
        if !agree {
            println!("verdict: methods disagree (internal inconsistency)");
        } else if is_cover {
            println!("verdict: {kind}{m}-cover");
        } else {
            println!(
                "verdict: refuted{}",
                witness.as_ref().map_or_else(String::new, |w| format!(" (witness {w})"))
            );
        }
    }
    Ok(if agree && is_cover { EXIT_OK } else { EXIT_REFUTED })
}

// ---------- analyze ----------

fn run_analyze(args: AnalyzeArgs, json: bool) -> CliResult {
    let a = parse_system(&args.file)?;
    let report = lib(cover_analysis::analyze_disjoint(&a))?;
    if json {
        emit(&json!({
            "schema": SCHEMA,
            "command": "analyze",
            "is_disjoint_cover": report.is_disjoint_cover,
            "top_two_equal": report.top_two_equal,
            "znam_ok": report.znam_ok,
            "mycielski_f_of_n": report.mycielski_f_of_n,
            "reciprocal_sum_is_one": report.reciprocal_sum_is_one,
        }));
    } else {
        println!("disjoint cover:        {}", report.is_disjoint_cover);
        println!("top two moduli equal:  {}", report.top_two_equal);
        println!("Znam bounds hold:      {}", report.znam_ok);
        println!("f(lcm of moduli):      {}", report.mycielski_f_of_n);
        println!("reciprocal sum is 1:   {}", report.reciprocal_sum_is_one);
    }
    Ok(if report.is_disjoint_cover { EXIT_OK } else { EXIT_REFUTED })
}

// ---------- search ----------

fn render_system_line(s: &ResidueSystem) -> String {
    s.classes()
        .iter()
        .map(|c| format!("{} mod {}", c.residue(), c.modulus()))
        .collect::<Vec<_>>()
        .join(", ")
}

fn run_search(args: SearchArgs, json: bool) -> CliResult {
    let cfg = SearchConfig {
        k_max: args.k_max,
        distinct_moduli: args.distinct,
        exact: args.exact,
        max_results: args.max_results,
        node_budget: args.budget,
    };
    let out = lib(cover_analysis::search_covers(&args.pool, &cfg))?;
    if json {
        let systems: Vec<Value> = out
            .systems
            .iter()
            .map(|s| {
                Value::Array(
                    s.classes()
                        .iter()
                        .map(|c| {
                            json!({
                                "a": c.residue().to_string(),
                                "n": c.modulus().to_string(),
                            })
                        })
                        .collect(),
                )
            })
            .collect();
        emit(&json!({
            "schema": SCHEMA,
            "command": "search",
            "systems": systems,
            "count": out.systems.len(),
            "nodes": out.nodes,
            "complete": out.complete,
            "hit_result_cap": out.hit_result_cap,
        }));
    } else {
        for (i, s) in out.systems.iter().enumerate() {
            println!("system {}: {}", i + 1, render_system_line(s));
        }
        println!(
            "{} system(s), {} nodes, {}",
            out.systems.len(),
            out.nodes,
            if out.complete { "search complete" } else { "budget exhausted" }
        );
    }
    Ok(if !out.systems.is_empty() {
        EXIT_OK
    } else if out.complete {
        EXIT_REFUTED
    } else {
        EXIT_EXHAUSTED
    })
}

// ---------- davenport ----------

fn run_davenport(args: DavenportArgs, json: bool) -> CliResult {
    let g = parse_group(&args.group)?;
    let olson = zerosum::olson_davenport(&g).ok();
    match lib(zerosum::davenport_constant(&g, args.budget))? {
        Budgeted::Done(d) => {
            if let Some(o) = olson {
                debug_assert_eq!(o, d);
            }
            if json {
                emit(&json!({
                    "schema": SCHEMA,
                    "command": "davenport",
                    "group": g.to_string(),
                    "davenport": d,
                    "olson_formula": olson,
                }));
            } else {
                println!("{d}");
            }
            Ok(EXIT_OK)
        }
        Budgeted::Exhausted { nodes } => {
            if json {
                emit(&json!({
                    "schema": SCHEMA,
                    "command": "davenport",
                    "group": g.to_string(),
                    "davenport": Value::Null,
                    "nodes": nodes,
                    "exhausted": true,
                }));
            } else {
                println!("budget exhausted after {nodes} nodes");
            }
            Ok(EXIT_EXHAUSTED)
        }
    }
}

// ---------- egz ----------

fn run_egz(args: EgzArgs, json: bool) -> CliResult {
    let g = parse_group(&args.group)?;
    let seq = parse_sequence(&g, &args.sequence)?;
    let witness = lib(zerosum::egz_witness(&seq))?;
    if json {
        emit(&json!({
            "schema": SCHEMA,
            "command": "egz",
            "group": g.to_string(),
            "length": seq.len(),
            "witness": witness,
        }));
    } else {
        match &witness {
            Some(idx) => println!(
                "zero-sum subsequence of length {}: indices {:?}",
                g.order(),
                idx
            ),
            None => println!("no zero-sum subsequence of length {}", g.order()),
        }
    }
    Ok(if witness.is_some() { EXIT_OK } else { EXIT_REFUTED })
}

// ---------- zerosum-bridge ----------

fn run_bridge(args: ZerosumBridgeArgs, json: bool) -> CliResult {
    let a = parse_system(&args.file)?;
    let g = parse_group(&args.group)?;
    let seq = parse_sequence(&g, &args.multipliers)?;
    let witness = lib(zerosum::cover_zero_sum_witness(&a, &seq))?;
    if json {
        emit(&json!({
            "schema": SCHEMA,
            "command": "zerosum-bridge",
            "group": g.to_string(),
            "q": g.order(),
            "witness": witness,
        }));
    } else {
        match &witness {
            Some(idx) => println!(
                "subset with reciprocal sum {} and zero element sum: indices {:?}",
                g.order(),
                idx
            ),
            None => println!("no qualifying subset"),
        }
    }
    Ok(if witness.is_some() { EXIT_OK } else { EXIT_REFUTED })
}

// ---------- sumset ----------

fn render_subset(s: &GSubset) -> String {
    let inner = s
        .elements()
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    format!("{{{inner}}}")
}

fn run_sumset(args: SumsetArgs, json: bool) -> CliResult {
    let g = parse_group(&args.group)?;
    let a = parse_subset(&g, &args.a)?;
    let b = args.b.as_deref().map(|s| parse_subset(&g, s)).transpose()?;

    match args.check {
        None => {
            let (operation, result) = if let Some(n) = args.n {
                ("restricted", lib(sumsets::restricted_sumset(&a, n))?)
            } else if let Some(b) = &b {
                ("sumset", lib(sumsets::sumset(&a, b))?)
            } else {
                return usage("need --b (sumset) or --n (restricted sumset)");
            };
            if json {
                emit(&json!({
                    "schema": SCHEMA,
                    "command": "sumset",
                    "operation": operation,
                    "elements": result.elements().iter().map(coords_json).collect::<Vec<_>>(),
                    "size": result.len(),
                }));
            } else {
                println!("{}", render_subset(&result));
            }
            Ok(EXIT_OK)
        }
        Some(check) => {
            let (name, report) = match check {
                SumsetCheckArg::Cd => {
                    let b = b.as_ref().map_or(usage("--check cd needs --b"), Ok)?;
                    ("cauchy-davenport", lib(sumsets::cauchy_davenport_check(&a, b))?)
                }
                SumsetCheckArg::Dsh => {
                    let n = args.n.map_or(usage("--check dsh needs --n"), Ok)?;
                    ("restricted-sumset-bound", lib(sumsets::dsh_bound_check(&a, n))?)
                }
                SumsetCheckArg::Pair => ("pair-sum-bound", lib(sumsets::pair_sum_bound_check(&a))?),
                SumsetCheckArg::Kneser => {
                    let b = b.as_ref().map_or(usage("--check kneser needs --b"), Ok)?;
                    let r = lib(sumsets::kneser_check(&a, b))?;
                    let ok = r.identity_holds && r.corollary_holds;
                    if json {
                        emit(&json!({
                            "schema": SCHEMA,
                            "command": "sumset",
                            "check": "kneser",
                            "sumset_size": r.sumset_size,
                            "stabilizer_order": r.stabilizer.order(),
                            "a_plus_h": r.a_plus_h,
                            "b_plus_h": r.b_plus_h,
                            "applies": r.applies,
                            "identity_holds": r.identity_holds,
                            "corollary_holds": r.corollary_holds,
                        }));
                    } else {
                        println!(
                            "|A+B| = {}, stabilizer order {}, identity {}, corollary {}",
                            r.sumset_size,
                            r.stabilizer.order(),
                            r.identity_holds,
                            r.corollary_holds
                        );
                    }
                    return Ok(if ok { EXIT_OK } else { EXIT_REFUTED });
                }
            };
            if json {
                emit(&json!({
                    "schema": SCHEMA,
                    "command": "sumset",
                    "check": name,
                    "actual": report.actual,
                    "bound": report.bound,
                    "holds": report.holds,
                }));
            } else {
                println!(
                    "{name}: actual {} vs bound {} -> {}",
                    report.actual,
                    report.bound,
                    if report.holds { "holds" } else { "VIOLATED" }
                );
            }
            Ok(if report.holds { EXIT_OK } else { EXIT_REFUTED })
        }
    }
}

// ---------- snevily ----------

fn run_snevily(args: SnevilyArgs, json: bool) -> CliResult {
    let g = parse_group(&args.group)?;
    let a = parse_subset(&g, &args.a)?;
    let b = parse_subset(&g, &args.b)?;
    let numbering = lib(sumsets::snevily_numbering(&a, &b))?;
    match numbering {
        Numbering::Found { a_order, b_order } => {
            if json {
                emit(&json!({
                    "schema": SCHEMA,
                    "command": "snevily",
                    "found": true,
                    "a_order": a_order,
                    "b_order": b_order,
                }));
            } else {
                println!("numbering found: a {:?}, b {:?}", a_order, b_order);
            }
            Ok(EXIT_OK)
        }
        Numbering::NoNumbering => {
            if json {
                emit(&json!({
                    "schema": SCHEMA,
                    "command": "snevily",
                    "found": false,
                }));
            } else {
                println!("no numbering with distinct pair sums");
            }
            Ok(EXIT_REFUTED)
        }
    }
}

// ---------- hall ----------

fn run_hall(args: HallArgs, json: bool) -> CliResult {
    let g = parse_group(&args.group)?;
    let seq = parse_sequence(&g, &args.sequence)?;
    let numbering = lib(sumsets::hall_numbering(&seq))?;
    if json {
        emit(&json!({
            "schema": SCHEMA,
            "command": "hall",
            "group": g.to_string(),
            "permutation": numbering,
        }));
    } else {
        match &numbering {
            Some(p) => println!("numbering found: {:?}", p),
            None => println!("no numbering (element sums cannot all differ)"),
        }
    }
    Ok(if numbering.is_some() { EXIT_OK } else { EXIT_REFUTED })
}

// ---------- coset ----------

fn report_json(check: &str, m: u64, r: &CosetCoverReport) -> Value {
    let bounds: serde_json::Map<String, Value> = r
        .bounds
        .iter()
        .map(|(name, b)| {
            (
                name.clone(),
                json!({
                    "kind": match b.kind {
                        coset_covers::BoundKind::Lower => "lower",
                        coset_covers::BoundKind::Upper => "upper",
                    },
                    "required": b.required,
                    "actual": b.actual,
                    "holds": b.holds,
                }),
            )
        })
        .collect();
    json!({
        "schema": SCHEMA,
        "command": "coset",
        "check": check,
        "k": r.k,
        "m": m,
        "uniform_m": r.m,
        "indices": r.indices,
        "intersection_index": r.intersection_index,
        "bounds": bounds,
        "all_hold": r.all_hold(),
    })
}

fn run_coset(args: CosetArgs, json: bool) -> CliResult {
    match (&args.check, &args.conjecture_scan) {
        (Some(_), Some(_)) => usage("choose either --check or --conjecture-scan"),
        (None, None) => usage("need --check <name> with --system, or --conjecture-scan <file>"),
        (Some(check), None) => {
            let path = args
                .system
                .as_deref()
                .map_or(usage("--check needs --system <file>"), Ok)?;
            let system = parse_coset_file(path)?;
            run_coset_check(*check, &args, &system, json)
        }
        (None, Some(path)) => {
            let scope = parse_scope_file(path)?;
            let report = lib(coset_covers::conjecture_searches(&scope))?;
            let candidates = report.counterexample_count();
            if json {
                let families: Vec<Value> = report
                    .families
                    .iter()
                    .map(|f| {
                        json!({
                            "name": f.name,
                            "instances": f.instances,
                            "counterexamples": f.counterexamples,
                        })
                    })
                    .collect();
                emit(&json!({
                    "schema": SCHEMA,
                    "command": "coset",
                    "scan": {
                        "max_order": report.scope.max_order,
                        "max_k": report.scope.max_k,
                        "max_m": report.scope.max_m,
                        "node_budget": report.scope.node_budget,
                    },
                    "groups_scanned": report.groups_scanned,
                    "nodes": report.nodes,
                    "complete": report.complete,
                    "families": families,
                    "counterexample_count": candidates,
                }));
            } else {
                println!(
                    "scanned {} group(s), {} nodes, {}",
                    report.groups_scanned,
                    report.nodes,
                    if report.complete { "complete" } else { "budget exhausted" }
                );
                for f in &report.families {
                    println!("  {}: {} instance(s), {} candidate(s)", f.name, f.instances,
                        f.counterexamples.len());
                    for c in &f.counterexamples {
                        println!("    candidate: {c}");
                    }
                }
            }
            Ok(if candidates > 0 {
                EXIT_REFUTED
            } else if report.complete {
                EXIT_OK
            } else {
                EXIT_EXHAUSTED
            })
        }
    }
}

fn run_coset_check(
    check: CosetCheckArg,
    args: &CosetArgs,
    system: &CosetSystem,
    json: bool,
) -> CliResult {
    let g = system.group().clone();
    match check {
        CosetCheckArg::Irredundant => {
            let t = args.t.map_or(usage("--check irredundant needs --t"), Ok)?;
            let r = lib(coset_covers::irredundant_coset_bounds(system, args.m, t))?;
            let ok = r.all_hold();
            if json {
                emit(&report_json("irredundant", args.m, &r));
            } else {
                println!("{r}");
            }
            Ok(if ok { EXIT_OK } else { EXIT_REFUTED })
        }
        CosetCheckArg::Minimal => {
            let r = lib(coset_covers::minimal_cover_bounds(system, args.m))?;
            let ok = r.all_hold();
            if json {
                emit(&report_json("minimal", args.m, &r));
            } else {
                println!("{r}");
            }
            Ok(if ok { EXIT_OK } else { EXIT_REFUTED })
        }
        CosetCheckArg::HerzogSchonheim => {
            let holds = lib(coset_covers::herzog_schonheim_check(system))?;
            bool_check_output(json, "herzog-schonheim", holds);
            Ok(if holds { EXIT_OK } else { EXIT_REFUTED })
        }
        CosetCheckArg::IndexDivisibility => {
            let subgroups: Vec<_> =
                system.cosets().iter().map(|(_, h)| h.clone()).collect();
            let holds = lib(coset_covers::index_divisibility_check(&g, &subgroups))?;
            bool_check_output(json, "index-divisibility", holds);
            Ok(if holds { EXIT_OK } else { EXIT_REFUTED })
        }
        CosetCheckArg::UnionCount => {
            let gens_text = args
                .subgroup
                .as_deref()
                .map_or(usage("--check union-count needs --subgroup"), Ok)?;
            let gens: Vec<GroupElement> = gens_text
                .split(';')
                .map(str::trim)
                .filter(|p| !p.is_empty())
                .map(|p| parse_element(&g, p))
                .collect::<Result<_, _>>()?;
            let h = lib(subgroup_from_generators(&g, &gens))?;
            let holds = lib(coset_covers::coset_union_count_check(&g, &h, system))?;
            bool_check_output(json, "union-count", holds);
            Ok(if holds { EXIT_OK } else { EXIT_REFUTED })
        }
    }
}

fn bool_check_output(json: bool, check: &str, holds: bool) {
    if json {
        emit(&json!({
            "schema": SCHEMA,
            "command": "coset",
            "check": check,
            "holds": holds,
        }));
    } else {
        println!("{check}: {}", if holds { "holds" } else { "VIOLATED" });
    }
}

// ---------- f ----------

fn run_f(args: FArgs, json: bool) -> CliResult {
    let value = lib(cover_analysis::mycielski_f(args.n))?;
    if json {
        emit(&json!({
            "schema": SCHEMA,
            "command": "f",
            "n": args.n,
            "f": value,
        }));
    } else {
        println!("{value}");
    }
    Ok(EXIT_OK)
}
