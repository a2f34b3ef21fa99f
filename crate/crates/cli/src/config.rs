use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context as _, Result};
use clap::{Args, ValueEnum};
use strongctx::{Modulus, PhaseFunctionState, Strategy};

/// Largest dimension accepted without `--unsafe-scale`.
pub const MAX_SAFE_D: u32 = 13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    #[value(name = "table1_first", alias = "table1-first")]
    Table1First,
    #[value(name = "full_scan", alias = "full-scan")]
    FullScan,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Table1First => Strategy::Table1First,
            StrategyArg::FullScan => Strategy::FullScan,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ContextSet {
    Table1,
    All,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Output format.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write the artifact here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, env = "STRONGCTX_THREADS", default_value_t = 0, global = true)]
    pub threads: usize,
    /// Seed for the randomized subcommands.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Allow d above 13.
    #[arg(long, global = true)]
    pub unsafe_scale: bool,
}

/// Everything a run depends on; identical configs give identical artifacts.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub modulus: Modulus,
    pub n: usize,
    pub phi: Option<String>,
    pub strategy: Strategy,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub threads: usize,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(common: &CommonArgs, d: u64, n: usize, default_format: Format) -> Result<Self> {
        let modulus = Modulus::new(d).with_context(|| format!("invalid dimension d = {d}"))?;
        if modulus.get() > MAX_SAFE_D && !common.unsafe_scale {
            bail!("d = {d} exceeds the safe limit {MAX_SAFE_D}; pass --unsafe-scale to run anyway");
        }
        if !(1..=2).contains(&n) {
            bail!("only n = 1 or n = 2 qudits are supported, got n = {n}");
        }
        let cfg = RunConfig {
            modulus,
            n,
            phi: None,
            strategy: Strategy::Table1First,
            format: common.format.unwrap_or(default_format),
            output: common.output.clone(),
            threads: common.threads,
            seed: common.seed,
        };
        if cfg.threads > 0 {
            // a second config in the same process keeps the first pool
            let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build_global();
        }
        Ok(cfg)
    }

    pub fn with_phi(mut self, phi: &str) -> Self {
        self.phi = Some(phi.to_string());
        self
    }

    pub fn with_strategy(mut self, s: Strategy) -> Self {
        self.strategy = s;
        self
    }

    pub fn state(&self) -> Result<PhaseFunctionState> {
        let text = self.phi.as_deref().unwrap_or("0");
        PhaseFunctionState::parse(text, self.modulus, self.n).with_context(|| format!("cannot parse phi {text:?}"))
    }

    pub fn require_format(&self, allowed: &[Format]) -> Result<()> {
        if !allowed.contains(&self.format) {
            bail!("format {:?} is not available for this subcommand", self.format);
        }
        Ok(())
    }

    pub fn emit(&self, body: &str) -> Result<()> {
        let mut text = body.to_string();
        if !text.ends_with('\n') {
            text.push('\n');
        }
        match &self.output {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }
}
