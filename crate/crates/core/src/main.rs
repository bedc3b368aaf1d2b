use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{error, info};

use affkl::coxeter::{Family, FiniteType, InvolutionId};
use affkl::io::{run_table, run_verify, write_records, write_table, Format, RunConfig, TableKind};
use affkl::satake::{summarize, Check};
use affkl::Error;

#[derive(Parser)]
#[command(
    name = "affkl",
    version,
    about = "Exact KL and twisted KL polynomials for affine Weyl groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the identities over every dominant coweight in range.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated subset of main,z,coset,parabolic,diamond,bridge,oracles, or "all".
        #[arg(long, default_value = "all")]
        checks: String,
    },
    /// Emit one table: kl, sigma, z, zsigma or weights.
    Table {
        what: String,
        #[command(flatten)]
        common: Common,
        /// Restrict z, zsigma and weights to one coweight, e.g. "1,1".
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
}

#[derive(Args)]
struct Common {
    /// Cartan type letter (A-G).
    #[arg(long = "type")]
    family: String,
    #[arg(long)]
    rank: usize,
    /// "*" or "diamond:N" for a hyperspecial vertex s_N.
    #[arg(long, default_value = "*")]
    involution: String,
    /// Largest element length to enumerate.
    #[arg(long, default_value_t = 10)]
    max_len: u32,
    /// Largest <rho, lambda> for the coweight sweep.
    #[arg(long)]
    max_height: Option<u32>,
    /// JSON-lines table cache.
    #[arg(long, env = "AFFKL_CACHE")]
    cache: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: String,
    /// Output file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

impl Common {
    fn config(&self) -> Result<RunConfig, Error> {
        let family: Family = self.family.parse()?;
        let mut cfg = RunConfig::new(FiniteType::new(family, self.rank)?, self.max_len);
        cfg.involution = self.involution.parse()?;
        cfg.max_height = self.max_height;
        cfg.cache = self.cache.clone();
        cfg.format = self.format.parse::<Format>()?;
        cfg.out = self.out.clone();
        cfg.jobs = self.jobs;
        Ok(cfg)
    }
}

fn parse_checks(text: &str, involution: InvolutionId) -> Result<Vec<Check>, Error> {
    if text.trim() == "all" {
        return Ok(RunConfig::default_checks(involution));
    }
    let mut out: Vec<Check> = text.split(',').map(str::parse).collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

fn parse_lambda(text: &str) -> Result<Vec<i64>, Error> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::Config(format!("bad coweight {text:?}"))))
        .collect()
}

fn output(cfg: &RunConfig) -> io::Result<Box<dyn Write>> {
    Ok(match &cfg.out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn set_jobs(cfg: &RunConfig) {
    if let Some(n) = cfg.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not size the thread pool: {e}");
        }
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Verify { common, checks } => {
            let mut cfg = common.config()?;
            cfg.checks = parse_checks(&checks, cfg.involution)?;
            set_jobs(&cfg);
            let records = run_verify(&cfg)?;
            write_records(&records, cfg.format, output(&cfg)?)?;
            let mut ok = true;
            for (check, (pass, fail)) in summarize(&records) {
                info!("{check}: {pass} passed, {fail} failed");
                ok &= fail == 0;
            }
            for r in records.iter().filter(|r| !r.pass) {
                error!(
                    "FAIL {} {} lambda={:?} mu={:?} y={:?} w={:?}: {} != {}",
                    r.check, r.identity, r.lambda, r.mu, r.y, r.w, r.lhs, r.rhs
                );
            }
            Ok(ok)
        }
        Command::Table { what, common, lambda } => {
            let kind: TableKind = what.parse()?;
            let cfg = common.config()?;
            set_jobs(&cfg);
            let lambda = lambda.as_deref().map(parse_lambda).transpose()?;
            let table = run_table(&cfg, kind, lambda.as_deref())?;
            write_table(&table, cfg.format, output(&cfg)?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            error!("{e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
