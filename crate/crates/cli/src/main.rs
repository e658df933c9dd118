use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use atomic_embed::fat::{typecheck_fat, DEFAULT_FUEL};
use atomic_embed::fuzz::{fuzz, FuzzConfig};
use atomic_embed::ipc::{redexes, typecheck};
use atomic_embed::rewrite::{normalize, Fat, Ipc};
use atomic_embed::sim::check_simulation;
use atomic_embed::syntax::{parse_fat_file, parse_ipc_file};
use atomic_embed::translate::{translate, translate_context, TranslationKind};
use atomic_embed::{fat, ipc, Path, RuleId, RuleSet};

const FUEL_VAR: &str = "ATEMBED_FUEL";

#[derive(Parser)]
#[command(name = "atembed", version, about = "IPC / atomic System F workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Calculus {
    Ipc,
    Fat,
}

#[derive(Subcommand)]
enum Command {
    /// Print the type of the term in a file.
    Typecheck {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "ipc")]
        calculus: Calculus,
    },
    /// Translate an IPC file into atomic System F.
    Translate {
        file: PathBuf,
        #[arg(long, default_value = "optimized")]
        kind: TranslationKind,
    },
    /// Contract one redex. IPC rules act on IPC files, F_at rules on F_at files.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        rule: RuleId,
        /// Position of the redex; defaults to the first one found.
        #[arg(long)]
        pos: Option<Path>,
    },
    /// Normalize leftmost-outermost under every rule of the calculus.
    Normalize {
        file: PathBuf,
        /// Step bound; defaults to $ATEMBED_FUEL, then 10000.
        #[arg(long)]
        fuel: Option<usize>,
        #[arg(long, value_enum, default_value = "fat")]
        calculus: Calculus,
    },
    /// Check that the translation simulates a step of `rule`, for every
    /// such redex (or just the one at `--pos`). Prints SimReport JSON.
    Simcheck {
        file: PathBuf,
        #[arg(long)]
        rule: RuleId,
        #[arg(long)]
        pos: Option<Path>,
    },
    /// Generate terms and check every redex in them. Prints a FuzzReport.
    Fuzz {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        size_budget: Option<usize>,
    },
}

/// A failed run: exit code and message for standard error.
struct Failure(u8, String);

fn usage(msg: impl Into<String>) -> Failure {
    Failure(2, msg.into())
}

fn failed(msg: impl Into<String>) -> Failure {
    Failure(1, msg.into())
}

fn read(file: &FsPath) -> Result<String, Failure> {
    fs::read_to_string(file).map_err(|e| usage(format!("{}: {e}", file.display())))
}

fn load_ipc(file: &FsPath) -> Result<(ipc::Context, ipc::IpcTerm), Failure> {
    parse_ipc_file(&read(file)?).map_err(|e| usage(format!("{}:{e}", file.display())))
}

fn load_fat(file: &FsPath) -> Result<(fat::FatContext, fat::FatTerm), Failure> {
    parse_fat_file(&read(file)?).map_err(|e| usage(format!("{}:{e}", file.display())))
}

fn default_fuel() -> Result<usize, Failure> {
    match std::env::var(FUEL_VAR) {
        Ok(v) => v
            .parse()
            .map_err(|_| usage(format!("{FUEL_VAR} must be a number, got `{v}`"))),
        Err(_) => Ok(DEFAULT_FUEL),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Typecheck { file, calculus } => match calculus {
            Calculus::Ipc => {
                let (ctx, t) = load_ipc(&file)?;
                let ty = typecheck(&ctx, &t).map_err(|e| failed(e.to_string()))?;
                println!("{ty}");
            }
            Calculus::Fat => {
                let (ctx, t) = load_fat(&file)?;
                let ty = typecheck_fat(&ctx, &t).map_err(|e| failed(e.to_string()))?;
                println!("{ty}");
            }
        },
        Command::Translate { file, kind } => {
            let (ctx, t) = load_ipc(&file)?;
            for (x, ty) in translate_context(&ctx).iter() {
                println!("{x} : {ty};");
            }
            println!("{}", translate(&t, kind));
        }
        Command::Reduce { file, rule, pos } => {
            if rule.is_ipc() {
                let (_, t) = load_ipc(&file)?;
                let pos = pick_position(pos, redexes(&t, RuleSet::single(rule)), rule)?;
                let n = ipc::step_at(&t, &pos, rule).map_err(|e| failed(e.to_string()))?;
                println!("{n}");
            } else {
                let (_, t) = load_fat(&file)?;
                let pos = pick_position(pos, fat::redexes_fat(&t, RuleSet::single(rule)), rule)?;
                let n = fat::step_at_fat(&t, &pos, rule).map_err(|e| failed(e.to_string()))?;
                println!("{n}");
            }
        }
        Command::Normalize { file, fuel, calculus } => {
            let fuel = match fuel {
                Some(f) => f,
                None => default_fuel()?,
            };
            let (nf, steps) = match calculus {
                Calculus::Ipc => {
                    let (_, t) = load_ipc(&file)?;
                    normalize::<Ipc>(&t, RuleSet::ipc_all(), fuel).map(|(n, k)| (n.to_string(), k))
                }
                Calculus::Fat => {
                    let (_, t) = load_fat(&file)?;
                    normalize::<Fat>(&t, RuleSet::fat_all(), fuel).map(|(n, k)| (n.to_string(), k))
                }
            }
            .map_err(|e| failed(e.to_string()))?;
            eprintln!("{steps} steps");
            println!("{nf}");
        }
        Command::Simcheck { file, rule, pos } => {
            if !rule.is_ipc() {
                return Err(usage(format!("{rule} is not an IPC rule")));
            }
            let (ctx, t) = load_ipc(&file)?;
            let positions: Vec<Path> = match pos {
                Some(p) => vec![p],
                None => redexes(&t, RuleSet::single(rule)).into_iter().map(|(p, _)| p).collect(),
            };
            if positions.is_empty() {
                return Err(usage(format!("no {rule} redex in {}", file.display())));
            }
            let reports: Vec<_> = positions
                .iter()
                .map(|p| check_simulation(&t, &ctx, p, rule))
                .collect();
            println!("{}", serde_json::to_string_pretty(&reports).expect("reports serialize"));
            let bad = reports.iter().filter(|r| r.verdict.is_failed()).count();
            if bad > 0 {
                return Err(failed(format!("{bad} of {} checks failed", reports.len())));
            }
        }
        Command::Fuzz {
            seed,
            samples,
            report,
            size_budget,
        } => {
            let mut cfg = FuzzConfig::new(seed, samples);
            if let Some(b) = size_budget {
                cfg.generator.size_budget = b;
            }
            cfg.generator.validate().map_err(|e| usage(e.to_string()))?;
            let r = fuzz(&cfg);
            let json = r.to_json();
            match report {
                Some(out) => fs::write(&out, json + "\n")
                    .map_err(|e| usage(format!("{}: {e}", out.display())))?,
                None => println!("{json}"),
            }
            let checked: u64 = r.counts.values().map(|c| c.checked).sum();
            eprintln!(
                "{} terms, {checked} redexes checked, {} failures, {} head-strictness failures",
                r.terms_generated,
                r.failures.len(),
                r.head_failures.len()
            );
            if !r.all_passed() {
                return Err(failed("simulation failures found"));
            }
        }
    }
    Ok(())
}

fn pick_position(pos: Option<Path>, found: Vec<(Path, RuleId)>, rule: RuleId) -> Result<Path, Failure> {
    match pos {
        Some(p) => Ok(p),
        None => found
            .into_iter()
            .next()
            .map(|(p, _)| p)
            .ok_or_else(|| failed(format!("no {rule} redex"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("atembed: {msg}");
            ExitCode::from(code)
        }
    }
}
