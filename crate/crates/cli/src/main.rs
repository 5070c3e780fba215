//! `heckestrat`: cells, KL data, q-permutation modules and stratification checks from the command line.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use heckestrat::cache::{Cache, CACHE_DIR_ENV};
use heckestrat::cells::CellDecomposition;
use heckestrat::hecke::{HTable, KlTable};
use heckestrat::strat::{Variant, DEFAULT_SECTION_BUDGET};
use heckestrat::weyl::WeylGroup;
use heckestrat::Error;

use report::Output;

#[derive(Parser, Debug)]
#[command(name = "heckestrat", version, about = "Kazhdan-Lusztig cells, Hecke modules and stratifying systems for small Weyl groups")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalOpts {
    /// Directory for cached KL, structure-constant and cell tables.
    #[arg(long, global = true, env = CACHE_DIR_ENV)]
    cache_dir: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Tsv,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum VariantArg {
    First,
    Second,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::First => Variant::First,
            VariantArg::Second => Variant::Second,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct TypeArg {
    /// Coxeter type, e.g. A3, B2, G2.
    #[arg(long = "type")]
    ty: String,
}

#[derive(Args, Debug, Clone)]
struct LocalArgs {
    #[command(flatten)]
    ty: TypeArg,
    /// `e` for the local ring at the 2e-th cyclotomic polynomial.
    #[arg(long)]
    e: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Left and two-sided cells with a, f and the cell orders.
    Cells(TypeArg),
    /// Kazhdan-Lusztig polynomials and mu-coefficients.
    Kl(TypeArg),
    /// Structure constants h_{x,y,z} of the C'-basis.
    Hconst(TypeArg),
    /// A q-permutation module x_lambda H and its dual-cell filtration.
    Qperm {
        #[command(flatten)]
        ty: TypeArg,
        /// Generators of the parabolic subgroup, e.g. s1,s3 (empty for the trivial subgroup).
        #[arg(long, default_value = "")]
        lambda: String,
    },
    /// Stratifying-system verification.
    Strat {
        #[command(subcommand)]
        cmd: StratCmd,
    },
    /// Asymptotic ring checks.
    Jring {
        #[command(subcommand)]
        cmd: JringCmd,
    },
    /// Hom/Ext direction between cell modules relative to f.
    Direction {
        #[command(subcommand)]
        cmd: DirectionCmd,
    },
}

#[derive(Subcommand, Debug)]
enum StratCmd {
    Verify {
        #[command(flatten)]
        local: LocalArgs,
        #[arg(long, value_enum, default_value_t = VariantArg::First)]
        variant: VariantArg,
        /// Maximum number of filtration sections in one extension module.
        #[arg(long, default_value_t = DEFAULT_SECTION_BUDGET)]
        section_budget: usize,
    },
}

#[derive(Subcommand, Debug)]
enum JringCmd {
    Verify(TypeArg),
}

#[derive(Subcommand, Debug)]
enum DirectionCmd {
    Verify(LocalArgs),
}

/// Settings that determine the result; embedded in every report.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub coxeter_type: Option<String>,
    pub e: Option<u32>,
    pub variant: Option<Variant>,
    pub lambda: Option<String>,
    pub section_budget: Option<usize>,
    pub format: Option<Format>,
}

/// Failure modes with their exit codes.
pub enum Failure {
    Usage(String),
    Budget(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::UnknownType(_) | Error::GroupBudget(_) => Failure::Usage(e.to_string()),
            Error::SectionBudget(_) => Failure::Budget(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

/// Builds the group, KL table, structure constants and cells, through the cache when configured.
fn with_pipeline<T>(opts: &GlobalOpts, ty: &str, f: impl FnOnce(&HTable, &CellDecomposition) -> Result<T, Failure>) -> Result<T, Failure> {
    let g = WeylGroup::from_label(ty)?;
    match &opts.cache_dir {
        Some(dir) => {
            let cache = Cache::new(dir);
            let kl = cache.kl_table(&g)?;
            let h = cache.h_table(&g, &kl)?;
            let cells = cache.cells(&h)?;
            f(&h, &cells)
        }
        None => {
            let kl = KlTable::new(&g)?;
            let h = HTable::new(&g, &kl);
            let cells = CellDecomposition::compute(&h)?;
            f(&h, &cells)
        }
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let opts = &cli.global;
    let mut config = RunConfig { format: Some(opts.format), ..Default::default() };
    match &cli.command {
        Command::Cells(t) => {
            config.command = "cells".into();
            config.coxeter_type = Some(t.ty.clone());
            with_pipeline(opts, &t.ty, |h, cells| Ok(report::cells(&config, h, cells)))
        }
        Command::Kl(t) => {
            config.command = "kl".into();
            config.coxeter_type = Some(t.ty.clone());
            with_pipeline(opts, &t.ty, |h, _| Ok(report::kl(&config, h)))
        }
        Command::Hconst(t) => {
            config.command = "hconst".into();
            config.coxeter_type = Some(t.ty.clone());
            with_pipeline(opts, &t.ty, |h, _| Ok(report::hconst(&config, h)))
        }
        Command::Qperm { ty, lambda } => {
            config.command = "qperm".into();
            config.coxeter_type = Some(ty.ty.clone());
            config.lambda = Some(lambda.clone());
            with_pipeline(opts, &ty.ty, |h, cells| report::qperm(&config, h, cells, lambda))
        }
        Command::Strat { cmd: StratCmd::Verify { local, variant, section_budget } } => {
            config.command = "strat verify".into();
            config.coxeter_type = Some(local.ty.ty.clone());
            config.e = Some(check_e(local.e)?);
            config.variant = Some((*variant).into());
            config.section_budget = Some(*section_budget);
            with_pipeline(opts, &local.ty.ty, |h, cells| report::strat(&config, h, cells, local.e, (*variant).into(), *section_budget))
        }
        Command::Jring { cmd: JringCmd::Verify(t) } => {
            config.command = "jring verify".into();
            config.coxeter_type = Some(t.ty.clone());
            with_pipeline(opts, &t.ty, |h, cells| Ok(report::jring(&config, h, cells)))
        }
        Command::Direction { cmd: DirectionCmd::Verify(local) } => {
            config.command = "direction verify".into();
            config.coxeter_type = Some(local.ty.ty.clone());
            config.e = Some(check_e(local.e)?);
            with_pipeline(opts, &local.ty.ty, |h, cells| report::direction(&config, h, cells, local.e))
        }
    }
}

fn check_e(e: u32) -> Result<u32, Failure> {
    if e == 0 {
        return Err(Failure::Usage("e must be at least 1".into()));
    }
    Ok(e)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = run(&cli);
    let (output, code) = match result {
        Ok(out) => {
            let code = if out.pass { 0 } else { 1 };
            (Some(out), code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            (None, 2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            (Some(report::budget_exceeded(&cli_config(&cli), &msg)), 3)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            (None, 1)
        }
    };
    if let Some(out) = output {
        let text = match cli.global.format {
            Format::Json => out.json,
            Format::Tsv => out.tsv,
        };
        let written = match &cli.global.out {
            Some(path) => std::fs::write(path, text).map_err(|e| e.to_string()),
            None => {
                use std::io::Write;
                std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string())
            }
        };
        if let Err(e) = written {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(code)
}

/// The configuration recorded in a partial report.
fn cli_config(cli: &Cli) -> RunConfig {
    match &cli.command {
        Command::Strat { cmd: StratCmd::Verify { local, variant, section_budget } } => RunConfig {
            command: "strat verify".into(),
            coxeter_type: Some(local.ty.ty.clone()),
            e: Some(local.e),
            variant: Some((*variant).into()),
            section_budget: Some(*section_budget),
            format: Some(cli.global.format),
            ..Default::default()
        },
        _ => RunConfig { format: Some(cli.global.format), ..Default::default() },
    }
}
