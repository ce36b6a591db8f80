use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use harmtree_cli::checks::{telescope_points, translation_checks};
use harmtree_cli::{run_campaign, write_report, CampaignConfig, CliError, ConfigFile, Format, NRange, Overrides};
use harmtree_core::certalg::{determinantal_certificate, stabilizer_of_p, telescoping_check, LatticePoint};
use harmtree_core::harmony::{
    count_harmonious_labelings, hal_enumerate, max_harmony_search, theorem_check, Mode, Scope,
};
use harmtree_core::perms::automorphism_group;
use harmtree_core::treegen::{canonical_code, enumerate_codes};
use harmtree_core::{CanonicalCode, TreeFunc};
use serde_json::json;
use tracing_subscriber::EnvFilter;

/// Harmonious labelings of rooted trees: searches, certificates and
/// verification campaigns. Every subcommand prints JSON on stdout.
#[derive(Debug, Parser)]
#[command(name = "harmtree", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List rooted trees up to isomorphism, one JSON object per line.
    Enumerate {
        #[arg(long)]
        n: NRange,
    },
    /// Maximum number of distinct edge sums over all labelings.
    Search {
        #[command(flatten)]
        tree: TreeArg,
        #[arg(long, value_enum, default_value = "nonloop")]
        scope: ScopeArg,
        #[arg(long)]
        heuristic: bool,
    },
    /// Find k and a labeling making the rerooted tree harmonious (odd n).
    Theorem {
        #[command(flatten)]
        tree: TreeArg,
    },
    /// Harmoniously labeled copies of a tree, one per coset of its
    /// automorphism group.
    Hal {
        #[command(flatten)]
        tree: TreeArg,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Number of harmoniously labeled copies and divisibility by n.
    Count {
        #[command(flatten)]
        tree: TreeArg,
    },
    /// Determinantal certificate against the exact non-loop maximum.
    Cert {
        #[command(flatten)]
        tree: TreeArg,
    },
    /// Variable permutations fixing the tree polynomial, against the
    /// automorphism group.
    Stabilizer {
        #[command(flatten)]
        tree: TreeArg,
    },
    /// Both sides of the telescoping identity at lattice points.
    Telescope {
        #[command(flatten)]
        tree: TreeArg,
        /// Exponent vector `n:a0,...`; repeatable. Defaults to the seeded
        /// point set used by campaigns.
        #[arg(long)]
        point: Vec<LatticePoint>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Translation invariance of the distinct-sum counts.
    Props {
        #[command(flatten)]
        tree: TreeArg,
    },
    /// Run checks over many trees and write a report.
    Campaign(CampaignArgs),
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum ScopeArg {
    Full,
    Nonloop,
}

#[derive(Debug, Args)]
struct TreeArg {
    /// Tree as a function table `n:f(0),...,f(n-1)`.
    tree: String,
    /// Read TREE as a canonical level sequence instead.
    #[arg(long)]
    levels: bool,
}

impl TreeArg {
    fn parse(&self) -> Result<TreeFunc, CliError> {
        if self.levels {
            Ok(self.tree.parse::<CanonicalCode>()?.tree())
        } else {
            Ok(self.tree.parse::<TreeFunc>()?)
        }
    }
}

#[derive(Debug, Args)]
struct CampaignArgs {
    /// Tree sizes, e.g. `5`, `1-9`, `1,3,5`.
    #[arg(long)]
    n: Option<String>,
    /// `enumerate` or a file with one canonical level code per line.
    #[arg(long)]
    trees: Option<String>,
    /// Comma list of theorem,cert,stabilizer,divisibility,props,telescope or `all`.
    #[arg(long)]
    checks: Option<String>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = "HARMTREE_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long, env = "HARMTREE_JOBS")]
    jobs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// TOML file with the same keys as the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Include per-record elapsed_ms (the report is then not reproducible).
    #[arg(long)]
    timings: bool,
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("warn")))
        .with_writer(io::stderr)
        .init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Io { source, .. }) if source.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(value: &serde_json::Value) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, value)?;
    writeln!(out).map_err(|e| CliError::io("writing stdout", e))
}

/// Ok(true) on pass, Ok(false) on a failed check.
fn run(cmd: Command) -> Result<bool, CliError> {
    match cmd {
        Command::Enumerate { n } => {
            for &m in n.values() {
                for code in enumerate_codes(m)? {
                    let tree = code.tree();
                    emit(&json!({ "n": m, "code": code.to_string(), "table": tree.to_string() }))?;
                }
            }
            Ok(true)
        }
        Command::Search { tree, scope, heuristic } => {
            let t = tree.parse()?;
            let scope = match scope {
                ScopeArg::Full => Scope::Full,
                ScopeArg::Nonloop => Scope::Nonloop,
            };
            let mode = if heuristic { Mode::Heuristic } else { Mode::Exact };
            let r = max_harmony_search(&t, scope, mode)?;
            emit(&serde_json::to_value(&r)?)?;
            Ok(true)
        }
        Command::Theorem { tree } => {
            let t = tree.parse()?;
            let out = theorem_check(&t)?;
            let ok = out.witness().is_some() && out.strategies_agree();
            let mut v = serde_json::to_value(&out)?;
            v["tree_code"] = json!(canonical_code(&t).to_string());
            v["strategies_agree"] = json!(out.strategies_agree());
            emit(&v)?;
            Ok(ok)
        }
        Command::Hal { tree, limit } => {
            let t = tree.parse()?;
            for (sigma, g) in hal_enumerate(&t)?.take(limit.unwrap_or(usize::MAX)) {
                emit(&json!({ "sigma": sigma.to_string(), "labeled": g.to_string() }))?;
            }
            Ok(true)
        }
        Command::Count { tree } => {
            let t = tree.parse()?;
            let count = count_harmonious_labelings(&t)?;
            let divisible = count % t.n() as u64 == 0;
            emit(&json!({ "n": t.n(), "count": count, "divisible": divisible }))?;
            Ok(divisible)
        }
        Command::Cert { tree } => {
            let t = tree.parse()?;
            let r = determinantal_certificate(&t)?;
            let agrees = r.agrees(t.n());
            let mut v = serde_json::to_value(&r)?;
            v["agrees"] = json!(agrees);
            emit(&v)?;
            Ok(agrees)
        }
        Command::Stabilizer { tree } => {
            let t = tree.parse()?;
            let stab = stabilizer_of_p(&t)?;
            let aut = automorphism_group(&t);
            let tables = |g: &harmtree_core::AutGroup| {
                let mut e: Vec<String> = g.elements().unwrap_or_default().iter().map(|p| p.to_string()).collect();
                e.sort();
                e
            };
            let equal = stab.order() == aut.order() && tables(&stab) == tables(&aut);
            emit(&json!({
                "order": stab.order().to_string(),
                "aut_order": aut.order().to_string(),
                "elements": tables(&stab),
                "equal": equal,
            }))?;
            Ok(equal)
        }
        Command::Telescope { tree, point, seed } => {
            let t = tree.parse()?;
            let points = if point.is_empty() {
                telescope_points(&canonical_code(&t), seed)
            } else {
                point
            };
            let mut ok = true;
            for a in points {
                let r = telescoping_check(&t, &a)?;
                ok &= r.holds();
                emit(&json!({
                    "point": a.to_string(),
                    "lhs": r.lhs.to_string(),
                    "rhs": r.rhs.to_string(),
                    "terms": r.terms,
                    "holds": r.holds(),
                }))?;
            }
            Ok(ok)
        }
        Command::Props { tree } => {
            let t = tree.parse()?;
            let checks = translation_checks(&t);
            let ok = checks.iter().all(|c| c.holds());
            emit(&json!({ "holds": ok, "checks": checks }))?;
            Ok(ok)
        }
        Command::Campaign(args) => campaign(args),
    }
}

fn campaign(args: CampaignArgs) -> Result<bool, CliError> {
    let file = match &args.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let flags = Overrides {
        n: args.n,
        trees: args.trees,
        checks: args.checks,
        out: args.out,
        cache_dir: args.cache_dir,
        jobs: args.jobs,
        seed: args.seed,
        format: args.format,
        timings: args.timings,
    };
    let cfg = CampaignConfig::resolve(flags, file)?;
    let report = run_campaign(&cfg)?;
    if cfg.out.is_none() {
        write_report(&report, cfg.format, io::stdout().lock())?;
    }
    for (rec, failed) in report.failures() {
        eprintln!("FAIL [{}] {}", failed.join(","), serde_json::to_string(rec)?);
    }
    eprintln!("{} in {} ms", report.summary(), report.elapsed_ms);
    Ok(report.passed())
}
