//! Command-line driver: bound tables, exact search, oracle cross-checks,
//! verification sweeps and tie enumeration, with a persistent result cache.

pub mod cache;
mod campaign;

use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use cache::{CacheEntry, ResultCache, SearchSummary, WORKBENCH_VERSION};
pub use campaign::{
    check_family, cmd_bounds, cmd_check_family, cmd_exact, cmd_oracle, cmd_ties, cmd_verify,
    cmd_verify_with, verdict, Campaign, FamilyReport, RangeList, Row, Verdict,
};

use crate::error::{Error, Result};
use crate::search::SearchBudget;

#[derive(Parser, Debug)]
#[command(name = "ufam", version, about = "Exact values and bounds for m(n, k, s, q)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Every known bound for each instance.
    Bounds(CampaignArgs),
    /// Exact search over shifted families.
    Exact(CampaignArgs),
    /// Brute force over all families next to the shifted search (tiny instances).
    Oracle(CampaignArgs),
    /// Compare exact values with the best construction.
    Verify(CampaignArgs),
    /// Enumerate all maximum shifted families.
    Ties(CampaignArgs),
    /// Report the properties of a family read from a file.
    CheckFamily {
        path: PathBuf,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct CampaignArgs {
    /// Ground set sizes, e.g. `8..14` (inclusive) or `8,10`.
    #[arg(long)]
    pub n: RangeList,
    #[arg(long)]
    pub k: RangeList,
    #[arg(long)]
    pub s: RangeList,
    #[arg(long)]
    pub q: RangeList,
    #[arg(long)]
    pub budget_nodes: Option<u64>,
    #[arg(long)]
    pub budget_secs: Option<f64>,
    /// Stop a search once a family of this size is found.
    #[arg(long)]
    pub target: Option<u64>,
    #[arg(long, default_value = "ufam-cache.json")]
    pub cache: PathBuf,
    /// Run without reading or writing the cache.
    #[arg(long)]
    pub no_cache: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Leave out parameter combinations that are not valid instances.
    #[arg(long)]
    pub skip_invalid: bool,
    /// Write witness families here, one file per instance.
    #[arg(long)]
    pub witness_dir: Option<PathBuf>,
    /// Save checkpoints of interrupted searches here and resume from them.
    #[arg(long)]
    pub checkpoint_dir: Option<PathBuf>,
}

impl CampaignArgs {
    pub fn campaign(&self) -> Result<Campaign> {
        let mut c = Campaign::new(
            self.n.0.clone(),
            self.k.0.clone(),
            self.s.0.clone(),
            self.q.0.clone(),
        );
        let mut budget = SearchBudget::unlimited();
        budget.max_nodes = self.budget_nodes;
        if let Some(secs) = self.budget_secs {
            budget.max_time = Some(
                Duration::try_from_secs_f64(secs)
                    .map_err(|e| Error::InvalidParameter(format!("--budget-secs: {e}")))?,
            );
        }
        budget.target = self.target;
        c.budget = budget;
        c.threads = self.threads.max(1);
        c.skip_invalid = self.skip_invalid;
        c.witness_dir = self.witness_dir.clone();
        c.checkpoint_dir = self.checkpoint_dir.clone();
        Ok(c)
    }

    fn open_cache(&self) -> Result<ResultCache> {
        if self.no_cache {
            Ok(ResultCache::in_memory())
        } else {
            ResultCache::open(&self.cache)
        }
    }
}

/// Writes rows as CSV (default) or a JSON array.
pub fn write_rows(rows: &[Row], format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows)?;
            writeln!(out)?;
        }
        Format::Csv | Format::Text => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for r in rows {
                w.serialize(r).map_err(|e| Error::Format(e.to_string()))?;
            }
            if rows.is_empty() {
                w.write_record([
                    "n", "k", "s", "q", "p", "r", "value", "kind", "provenance", "status", "nodes",
                    "elapsed_ms", "citation", "note",
                ])
                .map_err(|e| Error::Format(e.to_string()))?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Runs one command, writing its table to `out`. Returns the exit code:
/// 1 when a verification is refuted or the oracle disagrees, 0 otherwise.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let (args, rows, failed) = match &cli.command {
        Command::CheckFamily { path, s, q, format } => {
            let rep = cmd_check_family(path, *s, *q)?;
            match format {
                Format::Json => {
                    serde_json::to_writer_pretty(&mut *out, &rep)?;
                    writeln!(out)?;
                }
                _ => write!(out, "{rep}")?,
            }
            return Ok(0);
        }
        Command::Bounds(a) => {
            let c = a.campaign()?;
            let mut cache = a.open_cache()?;
            let rows = cmd_bounds(&c, &mut cache);
            cache.save()?;
            (a, rows, false)
        }
        Command::Exact(a) => {
            let c = a.campaign()?;
            let mut cache = a.open_cache()?;
            let rows = cmd_exact(&c, &mut cache);
            cache.save()?;
            (a, rows, false)
        }
        Command::Verify(a) => {
            let c = a.campaign()?;
            let mut cache = a.open_cache()?;
            let (rows, refuted) = cmd_verify(&c, &mut cache);
            cache.save()?;
            (a, rows, refuted)
        }
        Command::Oracle(a) => {
            let (rows, mismatch) = cmd_oracle(&a.campaign()?);
            (a, rows, mismatch)
        }
        Command::Ties(a) => (a, cmd_ties(&a.campaign()?), false),
    };
    write_rows(&rows, args.format, out)?;
    Ok(if failed { 1 } else { 0 })
}
